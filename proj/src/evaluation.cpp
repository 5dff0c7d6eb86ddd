// SPDX-License-Identifier: Apache-2.0
//
// ddcs - simulator for dynamic double-directional mm-wave channel sounding
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "ddcs/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ddcs/fft.hpp"
#include "ddcs/geometry.hpp"

namespace ddcs {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
    double hi = v[v.size() / 2];
    if (v.size() % 2 == 1) return hi;
    std::nth_element(v.begin(), v.begin() + v.size() / 2 - 1, v.end());
    return 0.5 * (hi + v[v.size() / 2 - 1]);
}
} // namespace

std::vector<double> directional_pdp(std::span<const std::complex<double>> h,
                                    const CalibrationResponse &cal) {
    const std::size_t n = h.size();
    if (n == 0) throw std::invalid_argument("directional_pdp: empty response");
    if (cal.gain.size() != n) throw std::invalid_argument("directional_pdp: calibration length mismatch");
    std::vector<std::complex<double>> x(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (std::abs(cal.gain[k]) == 0.0)
            throw std::invalid_argument("directional_pdp: zero calibration entry at tone " +
                                        std::to_string(k));
        x[k] = h[k] / cal.gain[k];
    }
    std::vector<std::complex<double>> td = dft_for(n).inverse(x);
    std::vector<double> p(n);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = std::norm(td[i] * inv_n);
    return p;
}

double estimate_noise_floor(const PdpCube &cube) {
    const int start = cube.n_delay - std::max(1, cube.n_delay / 10);
    std::vector<double> tail;
    tail.reserve(static_cast<std::size_t>(cube.n_tx) * cube.n_rx * (cube.n_delay - start));
    for (int i = 0; i < cube.n_tx; ++i)
        for (int j = 0; j < cube.n_rx; ++j)
            for (int n = start; n < cube.n_delay; ++n) tail.push_back(cube.at(i, j, n));
    return median(std::move(tail));
}

std::vector<double> omni_pdp(const PdpCube &cube, double deembed_power_gain) {
    std::vector<double> omni(static_cast<std::size_t>(cube.n_delay), 0.0);
    for (int i = 0; i < cube.n_tx; ++i)
        for (int j = 0; j < cube.n_rx; ++j)
            for (int n = 0; n < cube.n_delay; ++n)
                omni[static_cast<std::size_t>(n)] = std::max(omni[static_cast<std::size_t>(n)], cube.at(i, j, n));
    for (auto &v : omni) v /= deembed_power_gain;
    return omni;
}

namespace {

/// Tie-break order for equal-valued neighbors: lower delay, then lower TX,
/// then lower RX index wins the peak.
bool precedes(int n0, int i0, int j0, int n1, int i1, int j1) {
    if (n0 != n1) return n0 < n1;
    if (i0 != i1) return i0 < i1;
    return j0 < j1;
}

} // namespace

std::vector<Mpc> peak_search_3d(const PdpCube &cube, double noise_power, const BeamContext &beams,
                                const EvalParams &params) {
    double global_peak = 0.0;
    for (double v : cube.power) global_peak = std::max(global_peak, v);
    if (global_peak <= 0.0) return {};
    const double threshold = std::max(noise_power * db_to_power(params.detection_margin_db),
                                      global_peak * db_to_power(-params.dynamic_range_db));

    std::vector<Mpc> found;
    for (int i = 0; i < cube.n_tx; ++i) {
        for (int j = 0; j < cube.n_rx; ++j) {
            for (int n = 0; n < cube.n_delay; ++n) {
                const double v = cube.at(i, j, n);
                if (v < threshold) continue;
                bool peak = true;
                for (int di = -1; di <= 1 && peak; ++di) {
                    for (int dj = -1; dj <= 1 && peak; ++dj) {
                        for (int dn = -1; dn <= 1 && peak; ++dn) {
                            if (di == 0 && dj == 0 && dn == 0) continue;
                            int ii = i + di, jj = j + dj, nn = n + dn;
                            if (ii < 0 || ii >= cube.n_tx || jj < 0 || jj >= cube.n_rx ||
                                nn < 0 || nn >= cube.n_delay)
                                continue; // beam grid and delay axis do not wrap
                            double w = cube.at(ii, jj, nn);
                            if (v < w) peak = false;
                            else if (v == w && !precedes(n, i, j, nn, ii, jj)) peak = false;
                        }
                    }
                }
                if (!peak) continue;
                Mpc m;
                m.tx_beam = i;
                m.rx_beam = j;
                m.delay_bin = n;
                m.delay_s = static_cast<double>(n) * beams.delay_bin_s; // bin-centered, no sub-bin fit
                m.dod_az_deg = beams.tx_azimuths_deg.at(static_cast<std::size_t>(i));
                m.doa_az_deg = beams.rx_azimuths_deg.at(static_cast<std::size_t>(j));
                m.power_db = power_to_db(v / beams.deembed_power_gain);
                found.push_back(m);
            }
        }
    }
    return found;
}

std::vector<Mpc> ghost_filter(std::vector<Mpc> mpcs, const EvalParams &params) {
    const double rel_db = params.sidelobe_floor_db + params.ghost_margin_db;
    std::vector<bool> dead(mpcs.size(), false);
    for (std::size_t i = 0; i < mpcs.size(); ++i) {
        for (std::size_t j = 0; j < mpcs.size(); ++j) {
            if (i == j || dead[i]) continue;
            const Mpc &weak = mpcs[i];
            const Mpc &strong = mpcs[j];
            if (strong.power_db <= weak.power_db) continue;
            if (std::abs(weak.delay_bin - strong.delay_bin) > 1) continue;
            if (weak.tx_beam == strong.tx_beam && weak.rx_beam == strong.rx_beam) continue;
            if (weak.power_db <= strong.power_db + rel_db) dead[i] = true;
        }
    }
    std::vector<Mpc> out;
    for (std::size_t i = 0; i < mpcs.size(); ++i)
        if (!dead[i]) out.push_back(mpcs[i]);
    return out;
}

std::vector<Track> track_mpcs(std::vector<std::vector<Mpc>> &per_burst, const EvalParams &params) {
    struct Live {
        int id;
        Mpc last;
        int misses = 0;
        int start = 0, end = 0, hits = 0;
        double power_sum = 0.0, delay_sum = 0.0;
    };
    std::vector<Live> live;
    std::vector<Track> done;
    int next_id = 0;

    auto close = [&](const Live &t) {
        Track out;
        out.id = t.id;
        out.start_burst = t.start;
        out.end_burst = t.end;
        out.hits = t.hits;
        out.mean_power_db = t.power_sum / t.hits;
        out.mean_delay_ns = t.delay_sum / t.hits * 1e9;
        done.push_back(out);
    };

    for (int b = 0; b < static_cast<int>(per_burst.size()); ++b) {
        auto &mpcs = per_burst[static_cast<std::size_t>(b)];
        struct Cand {
            double dist;
            std::size_t track, mpc;
        };
        std::vector<Cand> cands;
        for (std::size_t ti = 0; ti < live.size(); ++ti) {
            for (std::size_t mi = 0; mi < mpcs.size(); ++mi) {
                double dbin = std::abs(static_cast<double>(mpcs[mi].delay_bin - live[ti].last.delay_bin));
                double ddod = std::abs(mpcs[mi].dod_az_deg - live[ti].last.dod_az_deg);
                double ddoa = std::abs(mpcs[mi].doa_az_deg - live[ti].last.doa_az_deg);
                if (dbin > params.track_delay_gate_bins || ddod > params.track_angle_gate_deg ||
                    ddoa > params.track_angle_gate_deg)
                    continue;
                double d = std::sqrt((dbin / params.track_delay_gate_bins) * (dbin / params.track_delay_gate_bins) +
                                     (ddod / params.track_angle_gate_deg) * (ddod / params.track_angle_gate_deg) +
                                     (ddoa / params.track_angle_gate_deg) * (ddoa / params.track_angle_gate_deg));
                cands.push_back({d, ti, mi});
            }
        }
        std::sort(cands.begin(), cands.end(), [&](const Cand &a, const Cand &b2) {
            if (a.dist != b2.dist) return a.dist < b2.dist;
            if (live[a.track].id != live[b2.track].id) return live[a.track].id < live[b2.track].id;
            return a.mpc < b2.mpc;
        });
        std::vector<bool> track_used(live.size(), false), mpc_used(mpcs.size(), false);
        for (const auto &c : cands) {
            if (track_used[c.track] || mpc_used[c.mpc]) continue;
            track_used[c.track] = true;
            mpc_used[c.mpc] = true;
            Live &t = live[c.track];
            Mpc &m = mpcs[c.mpc];
            m.track_id = t.id;
            t.last = m;
            t.misses = 0;
            t.end = b;
            t.hits += 1;
            t.power_sum += m.power_db;
            t.delay_sum += m.delay_s;
        }
        for (std::size_t mi = 0; mi < mpcs.size(); ++mi) {
            if (mpc_used[mi]) continue;
            Live t;
            t.id = next_id++;
            t.last = mpcs[mi];
            t.start = t.end = b;
            t.hits = 1;
            t.power_sum = mpcs[mi].power_db;
            t.delay_sum = mpcs[mi].delay_s;
            mpcs[mi].track_id = t.id;
            live.push_back(t);
            track_used.push_back(true);
        }
        for (std::size_t ti = live.size(); ti-- > 0;) {
            if (track_used.size() > ti && track_used[ti]) continue;
            if (++live[ti].misses > params.track_max_miss) {
                close(live[ti]);
                live.erase(live.begin() + static_cast<std::ptrdiff_t>(ti));
            }
        }
    }
    for (const auto &t : live) close(t);
    std::sort(done.begin(), done.end(), [](const Track &a, const Track &b) { return a.id < b.id; });
    return done;
}

std::vector<double> doppler_spectrum(std::span<const std::complex<double>> snapshots) {
    const std::size_t s_count = snapshots.size();
    if (s_count < 2) throw std::invalid_argument("doppler_spectrum: need at least 2 snapshots");
    std::vector<double> window(s_count);
    double wsum = 0.0;
    for (std::size_t s = 0; s < s_count; ++s) {
        window[s] = 0.5 * (1.0 - std::cos(2.0 * kPi * static_cast<double>(s) /
                                          static_cast<double>(s_count - 1)));
        wsum += window[s];
    }
    std::vector<std::complex<double>> x(s_count);
    for (std::size_t s = 0; s < s_count; ++s) x[s] = snapshots[s] * window[s];
    std::vector<std::complex<double>> spec = dft_for(s_count).forward(x);
    std::vector<double> p(s_count);
    for (std::size_t m = 0; m < s_count; ++m) p[m] = std::norm(spec[m] / wsum);
    return p;
}

std::vector<double> doppler_frequencies(int snapshot_count, double snapshot_spacing_s) {
    const double step = 1.0 / (snapshot_count * snapshot_spacing_s);
    std::vector<double> f;
    for (int n = -((snapshot_count - 1) / 2); n <= snapshot_count / 2; ++n)
        f.push_back(step * n);
    return f;
}

std::vector<double> doppler_spectrum_ordered(std::span<const std::complex<double>> snapshots) {
    std::vector<double> raw = doppler_spectrum(snapshots);
    const int s_count = static_cast<int>(raw.size());
    std::vector<double> out;
    out.reserve(raw.size());
    for (int n = -((s_count - 1) / 2); n <= s_count / 2; ++n)
        out.push_back(raw[static_cast<std::size_t>((n + s_count) % s_count)]);
    return out;
}

double estimate_doppler_peak_hz(std::span<const double> spectrum_ordered,
                                std::span<const double> freqs_hz) {
    if (spectrum_ordered.size() != freqs_hz.size() || spectrum_ordered.size() < 3)
        throw std::invalid_argument("estimate_doppler_peak_hz: bad inputs");
    const int n = static_cast<int>(spectrum_ordered.size());
    int peak = 0;
    for (int i = 1; i < n; ++i)
        if (spectrum_ordered[static_cast<std::size_t>(i)] > spectrum_ordered[static_cast<std::size_t>(peak)]) peak = i;
    auto val_db = [&](int i) {
        double v = spectrum_ordered[static_cast<std::size_t>((i % n + n) % n)];
        return power_to_db(std::max(v, 1e-300));
    };
    // Circular parabolic interpolation in dB around the peak bin.
    double y0 = val_db(peak - 1), y1 = val_db(peak), y2 = val_db(peak + 1);
    double denom = y0 - 2.0 * y1 + y2;
    double delta = std::abs(denom) > 1e-12 ? 0.5 * (y0 - y2) / denom : 0.0;
    delta = std::clamp(delta, -0.5, 0.5);
    const double step = freqs_hz[1] - freqs_hz[0];
    const double nyquist = freqs_hz.back();
    double f = freqs_hz[static_cast<std::size_t>(peak)] + delta * step;
    // Wrap back into (-Nyquist, +Nyquist].
    const double span = 2.0 * nyquist;
    while (f > nyquist) f -= span;
    while (f <= nyquist - span) f += span;
    return f;
}

std::optional<double> rms_delay_spread(std::span<const double> pdp, double noise_power,
                                       double delay_bin_s, const EvalParams &params) {
    double peak = 0.0;
    for (double v : pdp) peak = std::max(peak, v);
    if (peak <= 0.0) return std::nullopt;
    const double threshold = std::max(noise_power * db_to_power(params.detection_margin_db),
                                      peak * db_to_power(-params.rms_clip_db));
    double p_sum = 0.0, t_sum = 0.0, t2_sum = 0.0;
    for (std::size_t n = 0; n < pdp.size(); ++n) {
        if (pdp[n] < threshold) continue;
        double tau = static_cast<double>(n) * delay_bin_s;
        p_sum += pdp[n];
        t_sum += pdp[n] * tau;
        t2_sum += pdp[n] * tau * tau;
    }
    if (p_sum <= 0.0) return std::nullopt;
    double mean = t_sum / p_sum;
    double var = t2_sum / p_sum - mean * mean;
    return std::sqrt(std::max(var, 0.0));
}

std::optional<std::pair<double, double>> angular_stats(std::span<const Mpc> mpcs, AngleSide side) {
    if (mpcs.empty()) return std::nullopt;
    std::complex<double> mu{0.0, 0.0};
    double p_sum = 0.0;
    for (const auto &m : mpcs) {
        double p = db_to_power(m.power_db);
        double ang = deg2rad(side == AngleSide::kDeparture ? m.dod_az_deg : m.doa_az_deg);
        mu += p * std::polar(1.0, ang);
        p_sum += p;
    }
    mu /= p_sum;
    double spread_sq = 0.0;
    for (const auto &m : mpcs) {
        double p = db_to_power(m.power_db);
        double ang = deg2rad(side == AngleSide::kDeparture ? m.dod_az_deg : m.doa_az_deg);
        spread_sq += p * std::norm(std::polar(1.0, ang) - mu);
    }
    spread_sq /= p_sum;
    return std::make_pair(rad2deg(std::arg(mu)), rad2deg(std::sqrt(spread_sq)));
}

std::optional<double> path_gain_db(std::span<const double> omni, double noise_power,
                                   const EvalParams &params) {
    double peak = 0.0;
    for (double v : omni) peak = std::max(peak, v);
    if (peak <= 0.0) return std::nullopt;
    const double threshold = std::max(noise_power * db_to_power(params.detection_margin_db),
                                      peak * db_to_power(-params.dynamic_range_db));
    double sum = 0.0;
    for (double v : omni)
        if (v >= threshold) sum += v;
    if (sum <= 0.0) return std::nullopt;
    return power_to_db(sum);
}

std::vector<double> pair_gains_db(const PdpCube &cube, double noise_power,
                                  const BeamContext &beams, const EvalParams &params) {
    const double threshold = noise_power * db_to_power(params.detection_margin_db);
    std::vector<double> gains(static_cast<std::size_t>(cube.n_tx) * cube.n_rx, kNegInf);
    for (int i = 0; i < cube.n_tx; ++i) {
        for (int j = 0; j < cube.n_rx; ++j) {
            double sum = 0.0;
            for (int n = 0; n < cube.n_delay; ++n) {
                double v = cube.at(i, j, n);
                if (v >= threshold) sum += v;
            }
            if (sum > 0.0)
                gains[static_cast<std::size_t>(i) * cube.n_rx + j] =
                    power_to_db(sum / beams.deembed_power_gain);
        }
    }
    return gains;
}

BeamPairAnalysis beam_pair_analysis(const std::vector<std::vector<double>> &gain_db_per_burst,
                                    int idle_bursts) {
    BeamPairAnalysis out;
    const int bursts = static_cast<int>(gain_db_per_burst.size());
    if (bursts == 0) return out;
    const std::size_t pairs = gain_db_per_burst[0].size();
    const int idle = std::max(1, std::min(idle_bursts, bursts));

    // The fixed pair is whichever pair is best over the idle window (median).
    double best_med = kNegInf;
    for (std::size_t p = 0; p < pairs; ++p) {
        std::vector<double> g;
        for (int b = 0; b < idle; ++b) g.push_back(gain_db_per_burst[static_cast<std::size_t>(b)][p]);
        double med = median(std::move(g));
        if (med > best_med) {
            best_med = med;
            out.fixed_pair = static_cast<int>(p);
        }
    }
    out.reference_db = best_med;

    for (int b = 0; b < bursts; ++b) {
        const auto &g = gain_db_per_burst[static_cast<std::size_t>(b)];
        std::size_t best = 0;
        for (std::size_t p = 1; p < pairs; ++p)
            if (g[p] > g[best]) best = p;
        out.best_pair.push_back(static_cast<int>(best));
        out.best_gain_db.push_back(g[best]);
        out.fixed_gain_db.push_back(g[static_cast<std::size_t>(out.fixed_pair)]);
        out.excess_fixed_db.push_back(out.reference_db - g[static_cast<std::size_t>(out.fixed_pair)]);
        out.excess_adaptive_db.push_back(out.reference_db - g[best]);
    }
    return out;
}

BeamSwitchResult beam_switch_strategy(const std::vector<std::vector<double>> &gain_db_per_burst,
                                      double hysteresis_db, int dwell_bursts) {
    if (hysteresis_db < 0.0 || dwell_bursts < 1)
        throw std::invalid_argument("beam_switch_strategy: hysteresis >= 0 and dwell >= 1 required");
    BeamSwitchResult out;
    const int bursts = static_cast<int>(gain_db_per_burst.size());
    if (bursts == 0) return out;
    const std::size_t pairs = gain_db_per_burst[0].size();

    std::size_t current = 0;
    {
        const auto &g0 = gain_db_per_burst[0];
        for (std::size_t p = 1; p < pairs; ++p)
            if (g0[p] > g0[current]) current = p;
    }
    int held = 1;
    for (int b = 0; b < bursts; ++b) {
        const auto &g = gain_db_per_burst[static_cast<std::size_t>(b)];
        std::size_t best = 0;
        for (std::size_t p = 1; p < pairs; ++p)
            if (g[p] > g[best]) best = p;
        if (b > 0) {
            if (best != current && held >= dwell_bursts && g[best] >= g[current] + hysteresis_db) {
                current = best;
                out.switch_count += 1;
                held = 1;
            } else {
                held += 1;
            }
        }
        out.chosen_pair.push_back(static_cast<int>(current));
        out.cumulative_loss_db += g[best] - g[current];
    }
    return out;
}

} // namespace ddcs
