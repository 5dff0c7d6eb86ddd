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

#include "ddcs/sounder.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <thread>

#include "ddcs/rng.hpp"

namespace ddcs {

BeamPattern SounderConfig::tx_pattern(int beam) const {
    BeamPattern p;
    p.steer_az_deg = tx_grid.azimuths_deg.at(static_cast<std::size_t>(beam));
    p.steer_el_deg = tx_grid.elevations_deg.front();
    p.beamwidth_az_deg = beamwidth_az_deg;
    p.beamwidth_el_deg = beamwidth_el_deg;
    p.boresight_gain_dbi = boresight_gain_dbi;
    p.sidelobe_floor_db = sidelobe_floor_db;
    return p;
}

BeamPattern SounderConfig::rx_pattern(int beam) const {
    BeamPattern p = tx_pattern(0);
    p.steer_az_deg = rx_grid.azimuths_deg.at(static_cast<std::size_t>(beam));
    p.steer_el_deg = rx_grid.elevations_deg.front();
    return p;
}

void SounderConfig::validate() const {
    waveform.validate();
    tx_grid.validate();
    rx_grid.validate();
    tx_pattern(0).validate();
    if (slot_duration_s <= 0.0) throw std::invalid_argument("SounderConfig: slot duration must be positive");
    if (slot_duration_s < waveform.duration_s())
        throw std::invalid_argument("SounderConfig: slot shorter than the waveform");
    if (snapshots_per_burst < 1) throw std::invalid_argument("SounderConfig: snapshots_per_burst must be >= 1");
    if (burst_count < 1) throw std::invalid_argument("SounderConfig: burst_count must be >= 1");
    if (burst_duration_s() > burst_period_s + 1e-12)
        throw std::invalid_argument("SounderConfig: burst duration exceeds the burst period");
    if (bandwidth_hz <= 0.0) throw std::invalid_argument("SounderConfig: bandwidth must be positive");
}

CalibrationResponse make_calibration(const SounderConfig &config) {
    return config.identity_calibration
               ? CalibrationResponse::identity(config.waveform.tone_count)
               : CalibrationResponse::ripple(config.waveform.tone_count, config.seed);
}

std::int64_t slot_time_ns(const SounderConfig &config, int burst, int snapshot, int pair) {
    const std::int64_t slot_ns = std::llround(config.slot_duration_s * 1e9);
    const std::int64_t period_ns = std::llround(config.burst_period_s * 1e9);
    const std::int64_t sweep_ns = slot_ns * static_cast<std::int64_t>(config.pair_count());
    return static_cast<std::int64_t>(burst) * period_ns +
           static_cast<std::int64_t>(snapshot) * sweep_ns + static_cast<std::int64_t>(pair) * slot_ns;
}

std::vector<double> campaign_timestamps(const SounderConfig &config) {
    const std::size_t pairs = config.pair_count();
    std::vector<double> ts;
    ts.reserve(static_cast<std::size_t>(config.burst_count) * config.snapshots_per_burst * pairs);
    for (int b = 0; b < config.burst_count; ++b)
        for (int s = 0; s < config.snapshots_per_burst; ++s)
            for (std::size_t p = 0; p < pairs; ++p)
                ts.push_back(static_cast<double>(slot_time_ns(config, b, s, static_cast<int>(p))) * 1e-9);
    return ts;
}

double noise_floor_dbm(const SounderConfig &config) {
    return -174.0 + 10.0 * std::log10(config.bandwidth_hz) + config.rx_noise_figure_db;
}

std::vector<std::complex<double>> synthesize_response(std::span<const PathTruth> paths,
                                                      const BeamPattern &tx_beam,
                                                      const BeamPattern &rx_beam,
                                                      const MultitoneSpec &spec,
                                                      double doppler_elapsed_s,
                                                      const CalibrationResponse &cal) {
    const std::size_t n = static_cast<std::size_t>(spec.tone_count);
    if (cal.gain.size() != n) throw std::invalid_argument("synthesize_response: calibration length mismatch");
    std::vector<std::complex<double>> h(n, {0.0, 0.0});
    for (const auto &path : paths) {
        double gt = beam_amplitude_gain(tx_beam, path.dod_az_deg, path.dod_el_deg);
        double gr = beam_amplitude_gain(rx_beam, path.doa_az_deg, path.doa_el_deg);
        std::complex<double> w = path.amplitude * gt * gr *
                                 std::polar(1.0, 2.0 * kPi * path.doppler_hz * doppler_elapsed_s);
        // Tone rotation by recurrence, refreshed periodically to bound drift.
        const double dphi = -2.0 * kPi * spec.tone_spacing_hz * path.delay_s;
        const std::complex<double> step = std::polar(1.0, dphi);
        std::complex<double> rot = {1.0, 0.0};
        for (std::size_t k = 0; k < n; ++k) {
            if ((k & 0xFF) == 0) rot = std::polar(1.0, dphi * static_cast<double>(k));
            h[k] += w * rot;
            rot *= step;
        }
    }
    for (std::size_t k = 0; k < n; ++k) h[k] *= cal.gain[k];
    return h;
}

int worker_count() {
    unsigned hw = std::thread::hardware_concurrency();
    int n = hw ? static_cast<int>(hw) : 1;
    if (const char *env = std::getenv("DDCS_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1) n = std::min(n, cap);
    }
    return n;
}

namespace {

void parallel_for(int count, int workers, const std::function<void(int)> &fn) {
    workers = std::max(1, std::min(workers, count));
    if (workers == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    for (auto &t : pool) t.join();
}

} // namespace

void run_burst(const Scene &scene, const SounderConfig &config, const CalibrationResponse &cal,
               int burst, std::span<std::complex<float>> out) {
    const std::size_t n_tone = static_cast<std::size_t>(config.waveform.tone_count);
    const std::size_t n_tx = config.tx_grid.beam_count();
    const std::size_t n_rx = config.rx_grid.beam_count();
    const std::size_t pairs = n_tx * n_rx;
    if (out.size() != static_cast<std::size_t>(config.snapshots_per_burst) * pairs * n_tone)
        throw std::invalid_argument("run_burst: output span size mismatch");

    // Per-tone noise referenced to the transmit port: EIRP minus TX boresight
    // gain gives the conducted power the stored channel gains are relative to.
    const double p_tx_dbm = config.tx_eirp_dbm - config.boresight_gain_dbi;
    const double noise_tone_dbm =
        -174.0 + 10.0 * std::log10(config.waveform.tone_spacing_hz) + config.rx_noise_figure_db;
    const double noise_sigma =
        config.noise_enabled ? std::sqrt(db_to_power(noise_tone_dbm - p_tx_dbm)) : 0.0;
    const CounterRng noise_rng(derive_key(config.seed, 0x4e4f49ULL)); // noise stream

    std::vector<BeamPattern> txp(n_tx), rxp(n_rx);
    for (std::size_t i = 0; i < n_tx; ++i) txp[i] = config.tx_pattern(static_cast<int>(i));
    for (std::size_t j = 0; j < n_rx; ++j) rxp[j] = config.rx_pattern(static_cast<int>(j));

    std::vector<std::complex<double>> tone_vec;
    std::vector<std::complex<double>> accum(n_tone);
    for (int s = 0; s < config.snapshots_per_burst; ++s) {
        const double t_snap = static_cast<double>(slot_time_ns(config, burst, s, 0)) * 1e-9;
        const auto paths = enumerate_paths(scene, t_snap, 1, config.waveform.center_frequency_hz);

        // Per-path tone phasors are pair-independent; beams only scale them.
        const std::size_t n_path = paths.size();
        tone_vec.assign(n_path * n_tone, {0.0, 0.0});
        for (std::size_t l = 0; l < n_path; ++l) {
            const double dphi = -2.0 * kPi * config.waveform.tone_spacing_hz * paths[l].delay_s;
            std::complex<double> *row = tone_vec.data() + l * n_tone;
            std::complex<double> rot = {1.0, 0.0};
            const std::complex<double> step = std::polar(1.0, dphi);
            for (std::size_t k = 0; k < n_tone; ++k) {
                if ((k & 0xFF) == 0) rot = std::polar(1.0, dphi * static_cast<double>(k));
                row[k] = rot;
                rot *= step;
            }
        }

        for (std::size_t i = 0; i < n_tx; ++i) {
            for (std::size_t j = 0; j < n_rx; ++j) {
                const std::size_t pair = i * n_rx + j;
                const double dt =
                    static_cast<double>(slot_time_ns(config, burst, s, static_cast<int>(pair)) -
                                        slot_time_ns(config, burst, s, 0)) *
                    1e-9;
                std::fill(accum.begin(), accum.end(), std::complex<double>{0.0, 0.0});
                for (std::size_t l = 0; l < n_path; ++l) {
                    const auto &path = paths[l];
                    double gt = beam_amplitude_gain(txp[i], path.dod_az_deg, path.dod_el_deg);
                    double gr = beam_amplitude_gain(rxp[j], path.doa_az_deg, path.doa_el_deg);
                    std::complex<double> w =
                        path.amplitude * gt * gr *
                        std::polar(1.0, 2.0 * kPi * path.doppler_hz * dt);
                    const std::complex<double> *row = tone_vec.data() + l * n_tone;
                    for (std::size_t k = 0; k < n_tone; ++k) accum[k] += w * row[k];
                }
                const std::size_t slot_index =
                    (static_cast<std::size_t>(burst) * config.snapshots_per_burst +
                     static_cast<std::size_t>(s)) *
                        pairs +
                    pair;
                std::complex<float> *dst =
                    out.data() + (static_cast<std::size_t>(s) * pairs + pair) * n_tone;
                for (std::size_t k = 0; k < n_tone; ++k) {
                    std::complex<double> v = accum[k] * cal.gain[k];
                    if (noise_sigma > 0.0) {
                        double g0, g1;
                        noise_rng.gaussian_pair(slot_index * n_tone + k, g0, g1);
                        v += std::complex<double>(g0, g1) * (noise_sigma / std::sqrt(2.0));
                    }
                    dst[k] = std::complex<float>(static_cast<float>(v.real()),
                                                 static_cast<float>(v.imag()));
                }
            }
        }
    }
}

MeasurementTensor run_campaign(const Scene &scene, const SounderConfig &config) {
    scene.validate();
    config.validate();
    if (scene.duration_s + 1e-12 < config.campaign_duration_s())
        throw std::invalid_argument("run_campaign: scenario shorter than the campaign (" +
                                    std::to_string(scene.duration_s) + " s < " +
                                    std::to_string(config.campaign_duration_s()) + " s)");

    MeasurementTensor t;
    t.config = config;
    t.n_burst = config.burst_count;
    t.n_snapshot = config.snapshots_per_burst;
    t.n_tx = static_cast<int>(config.tx_grid.beam_count());
    t.n_rx = static_cast<int>(config.rx_grid.beam_count());
    t.n_tone = config.waveform.tone_count;
    const std::size_t per_burst = static_cast<std::size_t>(t.n_snapshot) * t.n_tx * t.n_rx * t.n_tone;
    t.data.resize(static_cast<std::size_t>(t.n_burst) * per_burst);
    t.timestamps = campaign_timestamps(config);

    const CalibrationResponse cal = make_calibration(config);
    parallel_for(config.burst_count, worker_count(), [&](int b) {
        run_burst(scene, config, cal, b,
                  {t.data.data() + static_cast<std::size_t>(b) * per_burst, per_burst});
    });
    return t;
}

} // namespace ddcs
