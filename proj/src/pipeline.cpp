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

#include "ddcs/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "ddcs/config_text.hpp"
#include "ddcs/fft.hpp"
#include "ddcs/presets.hpp"

namespace ddcs {

namespace {

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

double opt_or_nan(const std::optional<double> &v) {
    return v ? *v : std::numeric_limits<double>::quiet_NaN();
}

void write_binary_grid(const std::string &path, const char magic[4], std::uint32_t rows,
                       std::uint32_t cols, double meta0, double meta1,
                       const std::vector<float> &data) {
    std::FILE *f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open '" + path + "'");
    std::uint32_t version = 1;
    std::fwrite(magic, 1, 4, f);
    std::fwrite(&version, sizeof(version), 1, f);
    std::fwrite(&rows, sizeof(rows), 1, f);
    std::fwrite(&cols, sizeof(cols), 1, f);
    std::fwrite(&meta0, sizeof(meta0), 1, f);
    std::fwrite(&meta1, sizeof(meta1), 1, f);
    std::fwrite(data.data(), sizeof(float), data.size(), f);
    if (std::fclose(f) != 0) throw std::runtime_error("close failed for '" + path + "'");
}

} // namespace

SounderConfig run_simulate(const SimulateOptions &opts) {
    Scene scene;
    SounderConfig config;
    if (!opts.preset.empty()) {
        ScenarioPreset p = preset_by_name(opts.preset);
        scene = p.scene;
        config = p.config;
    } else {
        if (opts.scene_file.empty() || opts.config_file.empty())
            throw std::invalid_argument("simulate: need --preset or both --scene and --config");
        scene = load_scene_file(opts.scene_file);
        config = load_sounder_file(opts.config_file);
    }
    if (opts.seed) config.seed = *opts.seed;
    if (opts.bursts) config.burst_count = *opts.bursts;
    if (opts.noiseless) config.noise_enabled = false;
    scene.phase_seed = config.seed;
    scene.validate();
    config.validate();
    if (scene.duration_s + 1e-12 < config.campaign_duration_s())
        throw std::invalid_argument("simulate: scene duration " + std::to_string(scene.duration_s) +
                                    " s is shorter than the campaign " +
                                    std::to_string(config.campaign_duration_s()) + " s");

    const CalibrationResponse cal = make_calibration(config);
    TensorFileWriter writer(opts.out_path, config);
    const std::size_t per_burst = static_cast<std::size_t>(config.snapshots_per_burst) *
                                  config.pair_count() *
                                  static_cast<std::size_t>(config.waveform.tone_count);
    // Bursts are synthesized in parallel batches but always written in order,
    // so the file bytes cannot depend on the thread count.
    const int workers = std::max(1, worker_count());
    std::vector<std::vector<std::complex<float>>> batch(
        static_cast<std::size_t>(workers), std::vector<std::complex<float>>(per_burst));
    for (int base = 0; base < config.burst_count; base += workers) {
        const int n = std::min(workers, config.burst_count - base);
        std::vector<std::thread> pool;
        for (int w = 0; w < n; ++w)
            pool.emplace_back([&, w] {
                run_burst(scene, config, cal, base + w, batch[static_cast<std::size_t>(w)]);
            });
        for (auto &th : pool) th.join();
        for (int w = 0; w < n; ++w) writer.write_burst(batch[static_cast<std::size_t>(w)]);
    }
    writer.finish();
    if (!config.identity_calibration) write_calibration_file(opts.out_path + ".cal", cal);
    return config;
}

TensorFile as_tensor_file(MeasurementTensor &&t) {
    TensorFile f;
    f.n_burst = t.n_burst;
    f.n_snapshot = t.n_snapshot;
    f.n_tx = t.n_tx;
    f.n_rx = t.n_rx;
    f.n_tone = t.n_tone;
    f.center_frequency_hz = t.config.waveform.center_frequency_hz;
    f.tone_spacing_hz = t.config.waveform.tone_spacing_hz;
    f.timestamps = std::move(t.timestamps);
    f.data = std::move(t.data);
    return f;
}

EvalResult run_evaluate(const EvaluateOptions &opts) {
    const TensorFile t = read_tensor_file(opts.tensor_path);
    CalibrationResponse cal = file_exists(opts.tensor_path + ".cal")
                                  ? read_calibration_file(opts.tensor_path + ".cal")
                                  : CalibrationResponse::identity(t.n_tone);
    if (static_cast<int>(cal.gain.size()) != t.n_tone)
        throw std::runtime_error("calibration sidecar tone count does not match the tensor");
    std::optional<SounderConfig> config;
    if (!opts.config_file.empty()) config = load_sounder_file(opts.config_file);
    return evaluate_tensor(t, cal, opts.params, opts.out_dir, config ? &*config : nullptr);
}

EvalResult evaluate_tensor(const TensorFile &t, const CalibrationResponse &cal,
                           const EvalParams &params, const std::string &out_dir,
                           const SounderConfig *config) {
    BeamContext beams;
    double boresight_gain_dbi = 19.5;
    if (config) {
        beams.tx_azimuths_deg = config->tx_grid.azimuths_deg;
        beams.rx_azimuths_deg = config->rx_grid.azimuths_deg;
        boresight_gain_dbi = config->boresight_gain_dbi;
    } else {
        BeamGrid std_grid = BeamGrid::standard();
        if (t.n_tx != static_cast<int>(std_grid.beam_count()) ||
            t.n_rx != static_cast<int>(std_grid.beam_count()))
            throw std::runtime_error(
                "tensor beam counts do not match the standard grid; pass --config");
        beams.tx_azimuths_deg = std_grid.azimuths_deg;
        beams.rx_azimuths_deg = std_grid.azimuths_deg;
    }
    beams.delay_bin_s = 1.0 / (static_cast<double>(t.n_tone) * t.tone_spacing_hz);
    beams.deembed_power_gain = db_to_power(2.0 * boresight_gain_dbi);

    
    const std::size_t pairs = static_cast<std::size_t>(t.n_tx) * t.n_rx;
    EvalResult r;
    r.bursts = t.n_burst;
    r.delay_bin_s = beams.delay_bin_s;
    r.burst_period_s = t.n_burst > 1 ? t.timestamp(1, 0, 0) - t.timestamp(0, 0, 0) : 0.0;
    const double snap_spacing = t.n_snapshot > 1 ? t.timestamp(0, 1, 0) - t.timestamp(0, 0, 0) : 0.0;
    r.mpcs.resize(static_cast<std::size_t>(t.n_burst));
    r.doppler_freqs_hz = t.n_snapshot > 1 ? doppler_frequencies(t.n_snapshot, snap_spacing)
                                          : std::vector<double>{};

    std::vector<float> pdp_rows;
    pdp_rows.reserve(static_cast<std::size_t>(t.n_burst) * t.n_tone);
    std::vector<float> dop_rows;

    std::vector<std::complex<double>> h(static_cast<std::size_t>(t.n_tone));
    for (int b = 0; b < t.n_burst; ++b) {
        PdpCube cube;
        cube.n_tx = t.n_tx;
        cube.n_rx = t.n_rx;
        cube.n_delay = t.n_tone;
        cube.power.assign(pairs * static_cast<std::size_t>(t.n_tone), 0.0);
        for (int i = 0; i < t.n_tx; ++i) {
            for (int j = 0; j < t.n_rx; ++j) {
                double *dst = &cube.at(i, j, 0);
                for (int s = 0; s < t.n_snapshot; ++s) {
                    auto tones = t.tones(b, s, i, j);
                    for (int k = 0; k < t.n_tone; ++k)
                        h[static_cast<std::size_t>(k)] = std::complex<double>(tones[static_cast<std::size_t>(k)]);
                    std::vector<double> p = directional_pdp(h, cal);
                    for (int n = 0; n < t.n_tone; ++n) dst[n] += p[static_cast<std::size_t>(n)];
                }
                for (int n = 0; n < t.n_tone; ++n) dst[n] /= t.n_snapshot; // noncoherent average
            }
        }

        const double noise = estimate_noise_floor(cube);
        auto mpcs = ghost_filter(peak_search_3d(cube, noise, beams, params), params);
        for (auto &m : mpcs) m.burst = b;
        r.mpcs[static_cast<std::size_t>(b)] = std::move(mpcs);

        std::vector<double> omni = omni_pdp(cube, beams.deembed_power_gain);
        const double omni_noise = noise / beams.deembed_power_gain;
        r.path_gain_db.push_back(path_gain_db(omni, omni_noise, params));
        r.rms_ds_s.push_back(rms_delay_spread(omni, omni_noise, beams.delay_bin_s, params));
        r.dod_stats.push_back(angular_stats(r.mpcs[static_cast<std::size_t>(b)], AngleSide::kDeparture));
        r.doa_stats.push_back(angular_stats(r.mpcs[static_cast<std::size_t>(b)], AngleSide::kArrival));
        r.pair_gain_db.push_back(pair_gains_db(cube, noise, beams, params));
        r.time_s.push_back(t.timestamp(b, 0, 0));

        for (int n = 0; n < t.n_tone; ++n)
            pdp_rows.push_back(static_cast<float>(omni[static_cast<std::size_t>(n)]));

        // Doppler map for the best pair of this burst, aggregated over delay.
        if (t.n_snapshot > 1) {
            const auto &g = r.pair_gain_db.back();
            std::size_t best = 0;
            for (std::size_t p = 1; p < pairs; ++p)
                if (g[p] > g[best]) best = p;
            const int bi = static_cast<int>(best) / t.n_rx;
            const int bj = static_cast<int>(best) % t.n_rx;
            std::vector<std::vector<std::complex<double>>> delay_domain(
                static_cast<std::size_t>(t.n_snapshot));
            Dft &dft = dft_for(static_cast<std::size_t>(t.n_tone));
            for (int s = 0; s < t.n_snapshot; ++s) {
                auto tones = t.tones(b, s, bi, bj);
                std::vector<std::complex<double>> x(static_cast<std::size_t>(t.n_tone));
                for (int k = 0; k < t.n_tone; ++k) {
                    std::size_t ks = static_cast<std::size_t>(k);
                    x[ks] = std::complex<double>(tones[ks]) / cal.gain[ks];
                }
                delay_domain[static_cast<std::size_t>(s)] = dft.inverse(x);
                for (auto &v : delay_domain[static_cast<std::size_t>(s)]) v /= t.n_tone;
            }
            std::vector<double> agg(r.doppler_freqs_hz.size(), 0.0);
            std::vector<std::complex<double>> snap(static_cast<std::size_t>(t.n_snapshot));
            for (int n = 0; n < t.n_tone; ++n) {
                for (int s = 0; s < t.n_snapshot; ++s)
                    snap[static_cast<std::size_t>(s)] =
                        delay_domain[static_cast<std::size_t>(s)][static_cast<std::size_t>(n)];
                std::vector<double> spec = doppler_spectrum_ordered(snap);
                for (std::size_t m = 0; m < agg.size(); ++m) agg[m] = std::max(agg[m], spec[m]);
            }
            std::vector<double> row_db(agg.size());
            for (std::size_t m = 0; m < agg.size(); ++m)
                row_db[m] = power_to_db(std::max(agg[m], 1e-300));
            r.doppler_db.push_back(row_db);
            for (double v : row_db) dop_rows.push_back(static_cast<float>(v));
        }
    }

    r.tracks = track_mpcs(r.mpcs, params);
    r.beams = beam_pair_analysis(r.pair_gain_db, params.idle_bursts);
    if (out_dir.empty()) return r;

    // ---- outputs ----
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    auto out = [&](const char *name) { return (fs::path(out_dir) / name).string(); };

    {
        std::ofstream f(out("stats.csv"));
        f << "burst,time_s,path_gain_db,rms_ds_ns,n_mpc,mean_dod_deg,spread_dod_deg,"
             "mean_doa_deg,spread_doa_deg,best_tx_az_deg,best_rx_az_deg,best_gain_db,"
             "fixed_gain_db,excess_fixed_db,excess_adaptive_db\n";
        for (int b = 0; b < r.bursts; ++b) {
            std::size_t bu = static_cast<std::size_t>(b);
            const auto &dod = r.dod_stats[bu];
            const auto &doa = r.doa_stats[bu];
            int best = r.beams.best_pair[bu];
            f << b << ',' << num(r.time_s[bu]) << ',' << num(opt_or_nan(r.path_gain_db[bu])) << ','
              << num(r.rms_ds_s[bu] ? *r.rms_ds_s[bu] * 1e9 : std::numeric_limits<double>::quiet_NaN())
              << ',' << r.mpcs[bu].size() << ','
              << num(dod ? dod->first : std::numeric_limits<double>::quiet_NaN()) << ','
              << num(dod ? dod->second : std::numeric_limits<double>::quiet_NaN()) << ','
              << num(doa ? doa->first : std::numeric_limits<double>::quiet_NaN()) << ','
              << num(doa ? doa->second : std::numeric_limits<double>::quiet_NaN()) << ','
              << num(beams.tx_azimuths_deg[static_cast<std::size_t>(best) / beams.rx_azimuths_deg.size()])
              << ','
              << num(beams.rx_azimuths_deg[static_cast<std::size_t>(best) % beams.rx_azimuths_deg.size()])
              << ',' << num(r.beams.best_gain_db[bu]) << ',' << num(r.beams.fixed_gain_db[bu]) << ','
              << num(r.beams.excess_fixed_db[bu]) << ',' << num(r.beams.excess_adaptive_db[bu])
              << '\n';
        }
    }
    {
        std::ofstream f(out("mpcs.csv"));
        f << "burst,time_s,delay_ns,delay_bin,tx_az_deg,rx_az_deg,power_db,track_id\n";
        for (int b = 0; b < r.bursts; ++b)
            for (const auto &m : r.mpcs[static_cast<std::size_t>(b)])
                f << b << ',' << num(r.time_s[static_cast<std::size_t>(b)]) << ','
                  << num(m.delay_s * 1e9) << ',' << m.delay_bin << ',' << num(m.dod_az_deg) << ','
                  << num(m.doa_az_deg) << ',' << num(m.power_db) << ',' << m.track_id << '\n';
    }
    {
        std::ofstream f(out("tracks.csv"));
        f << "track_id,start_burst,end_burst,hits,mean_power_db,mean_delay_ns\n";
        for (const auto &tr : r.tracks)
            f << tr.id << ',' << tr.start_burst << ',' << tr.end_burst << ',' << tr.hits << ','
              << num(tr.mean_power_db) << ',' << num(tr.mean_delay_ns) << '\n';
    }
    write_binary_grid(out("pdp_time.bin"), "DDCP", static_cast<std::uint32_t>(r.bursts),
                      static_cast<std::uint32_t>(t.n_tone), beams.delay_bin_s, r.burst_period_s,
                      pdp_rows);
    write_binary_grid(out("doppler.bin"), "DDCD", static_cast<std::uint32_t>(r.doppler_db.size()),
                      static_cast<std::uint32_t>(r.doppler_freqs_hz.size()),
                      r.doppler_freqs_hz.empty() ? 0.0 : r.doppler_freqs_hz.front(),
                      r.doppler_freqs_hz.size() > 1
                          ? r.doppler_freqs_hz[1] - r.doppler_freqs_hz[0]
                          : 0.0,
                      dop_rows);
    return r;
}

namespace {

std::vector<std::vector<std::string>> read_csv(const std::string &path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("missing '" + path + "'");
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    if (rows.size() < 2) throw std::runtime_error("'" + path + "' has no data rows");
    return rows;
}

} // namespace

std::string render_report(const std::string &dir) {
    namespace fs = std::filesystem;
    auto rows = read_csv((fs::path(dir) / "stats.csv").string());
    const auto &header = rows[0];
    auto col = [&](const std::string &name) {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw std::runtime_error("stats.csv: missing column " + name);
    };
    const std::size_t c_rms = col("rms_ds_ns"), c_exf = col("excess_fixed_db"),
                      c_exa = col("excess_adaptive_db"), c_pg = col("path_gain_db"),
                      c_sdod = col("spread_dod_deg"), c_sdoa = col("spread_doa_deg"),
                      c_btx = col("best_tx_az_deg"), c_brx = col("best_rx_az_deg");

    auto value = [](const std::string &s) {
        return s == "nan" ? std::numeric_limits<double>::quiet_NaN() : std::stod(s);
    };
    std::vector<double> rms, exf, exa, pg, sdod, sdoa;
    std::map<std::string, int> best_hist;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        rms.push_back(value(rows[i][c_rms]));
        exf.push_back(value(rows[i][c_exf]));
        exa.push_back(value(rows[i][c_exa]));
        pg.push_back(value(rows[i][c_pg]));
        sdod.push_back(value(rows[i][c_sdod]));
        sdoa.push_back(value(rows[i][c_sdoa]));
        best_hist["(" + rows[i][c_btx] + ", " + rows[i][c_brx] + ")"] += 1;
    }
    auto finite_minmax = [](const std::vector<double> &v) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (double x : v)
            if (std::isfinite(x)) { lo = std::min(lo, x); hi = std::max(hi, x); }
        return std::make_pair(lo, hi);
    };
    auto median_of = [](std::vector<double> v) {
        v.erase(std::remove_if(v.begin(), v.end(), [](double x) { return !std::isfinite(x); }),
                v.end());
        if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
        std::sort(v.begin(), v.end());
        return v[v.size() / 2];
    };

    // Idle bursts: fixed-pair excess within 1 dB of zero. Blocked bursts:
    // fixed-pair excess of at least 15 dB.
    std::vector<double> rms_idle, exa_blocked;
    double max_exf = 0.0, max_rms = 0.0;
    for (std::size_t i = 0; i < exf.size(); ++i) {
        if (std::isfinite(exf[i])) max_exf = std::max(max_exf, exf[i]);
        if (std::isfinite(rms[i])) max_rms = std::max(max_rms, rms[i]);
        if (std::isfinite(exf[i]) && std::abs(exf[i]) <= 1.0 && std::isfinite(rms[i]))
            rms_idle.push_back(rms[i]);
        if (std::isfinite(exf[i]) && exf[i] >= 15.0 && std::isfinite(exa[i]))
            exa_blocked.push_back(exa[i]);
    }

    std::ostringstream os;
    os << "campaign summary (" << exf.size() << " bursts)\n";
    os << "------------------------------------------------------------\n";
    auto [pg_lo, pg_hi] = finite_minmax(pg);
    os << "path gain            : " << num(pg_lo) << " .. " << num(pg_hi) << " dB\n";
    os << "RMS delay spread     : idle median " << num(median_of(rms_idle)) << " ns, max "
       << num(max_rms) << " ns\n";
    os << "fixed-beam excess    : max " << num(max_exf) << " dB\n";
    if (!exa_blocked.empty()) {
        double mn = *std::min_element(exa_blocked.begin(), exa_blocked.end());
        os << "adaptive-beam excess : min " << num(mn) << " dB, median "
           << num(median_of(exa_blocked)) << " dB over " << exa_blocked.size()
           << " blocked bursts\n";
    } else {
        os << "adaptive-beam excess : no blocked bursts (fixed excess < 15 dB throughout)\n";
    }
    auto [dod_lo, dod_hi] = finite_minmax(sdod);
    auto [doa_lo, doa_hi] = finite_minmax(sdoa);
    os << "angular spread DoD   : " << num(dod_lo) << " .. " << num(dod_hi) << " deg\n";
    os << "angular spread DoA   : " << num(doa_lo) << " .. " << num(doa_hi) << " deg\n";
    std::vector<std::pair<int, std::string>> hist;
    for (const auto &kv : best_hist) hist.push_back({kv.second, kv.first});
    std::sort(hist.rbegin(), hist.rend());
    os << "best beam pairs      : ";
    for (std::size_t i = 0; i < hist.size() && i < 3; ++i)
        os << hist[i].second << " x" << hist[i].first << (i + 1 < std::min<std::size_t>(hist.size(), 3) ? ", " : "");
    os << "\n";
    return os.str();
}

} // namespace ddcs
