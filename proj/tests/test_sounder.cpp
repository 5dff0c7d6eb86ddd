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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>

#include "ddcs/sounder.hpp"

using namespace ddcs;

namespace {

PathTruth make_path(double delay_s, double dod, double doa, std::complex<double> amp,
                    double doppler = 0.0) {
    PathTruth p;
    p.delay_s = delay_s;
    p.dod_az_deg = dod;
    p.doa_az_deg = doa;
    p.amplitude = amp;
    p.doppler_hz = doppler;
    p.kind = PathKind::kReflection;
    p.path_id = 42;
    return p;
}

SounderConfig small_config() {
    SounderConfig c;
    c.waveform.tone_count = 64;
    c.tx_grid.azimuths_deg = {-15.0, 15.0};
    c.rx_grid.azimuths_deg = {-15.0, 15.0};
    c.snapshots_per_burst = 4;
    c.burst_count = 3;
    c.burst_period_s = 2e-3;
    c.noise_enabled = false;
    c.identity_calibration = true;
    return c;
}

} // namespace

TEST_CASE("noise floor arithmetic") {
    SounderConfig c;
    CHECK(noise_floor_dbm(c) == Catch::Approx(-82.98).margin(0.01));
    c.bandwidth_hz = 1.0;
    c.rx_noise_figure_db = 0.0;
    CHECK(noise_floor_dbm(c) == Catch::Approx(-174.0));
}

TEST_CASE("link budget covers the quoted measurable path loss") {
    SounderConfig c;
    double measurable = c.max_tx_eirp_dbm + c.boresight_gain_dbi - noise_floor_dbm(c);
    CHECK(measurable >= 159.0);
}

TEST_CASE("default campaign timing and dimensions") {
    SounderConfig c;
    CHECK(c.pair_count() == 100);
    CHECK(c.sweep_duration_s() == Catch::Approx(400e-6));
    CHECK(c.burst_duration_s() == Catch::Approx(8e-3));
    CHECK(c.burst_duration_s() < c.burst_period_s);

    // final slot: burst 199, snapshot 19, pair 99
    std::int64_t last = slot_time_ns(c, 199, 19, 99);
    CHECK(last == 199LL * 60000000 + 19LL * 400000 + 99LL * 4000);

    auto ts = campaign_timestamps(c);
    REQUIRE(ts.size() == 200u * 20u * 100u);
    CHECK(ts.back() == Catch::Approx(static_cast<double>(last) * 1e-9).epsilon(1e-15));
}

TEST_CASE("config validation rejects a burst longer than its period") {
    SounderConfig c = small_config();
    c.burst_period_s = c.burst_duration_s() * 0.9;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("single-path response: flat magnitude, linear phase") {
    MultitoneSpec spec;
    spec.tone_count = 801;
    const double tau = 170.12e-9;
    auto paths = std::vector<PathTruth>{make_path(tau, 0.0, 0.0, {1e-5, 0.0})};
    BeamPattern bore; // steering 0
    auto cal = CalibrationResponse::identity(spec.tone_count);
    auto h = synthesize_response(paths, bore, bore, spec, 0.0, cal);

    const double expected_mag = 1e-5 * db_to_amplitude(19.5) * db_to_amplitude(19.5);
    const double slope = -2.0 * kPi * spec.tone_spacing_hz * tau;
    for (int k = 0; k < spec.tone_count; ++k) {
        std::size_t ks = static_cast<std::size_t>(k);
        CHECK(std::abs(h[ks]) == Catch::Approx(expected_mag).epsilon(1e-9));
        if (k > 0) {
            double dphi = std::arg(h[ks] / h[ks - 1]);
            CHECK(dphi == Catch::Approx(std::remainder(slope, 2.0 * kPi)).margin(1e-9));
        }
    }
}

TEST_CASE("two-path interference matches the closed form") {
    MultitoneSpec spec;
    spec.tone_count = 801;
    const double tau = 100e-9, dtau = 1.25e-9;
    std::vector<PathTruth> paths{make_path(tau, 0.0, 0.0, {1.0, 0.0}),
                                 make_path(tau + dtau, 0.0, 0.0, {1.0, 0.0})};
    BeamPattern bore;
    bore.boresight_gain_dbi = 0.0;
    auto cal = CalibrationResponse::identity(spec.tone_count);
    auto h = synthesize_response(paths, bore, bore, spec, 0.0, cal);
    for (int k = 0; k < spec.tone_count; k += 37) {
        std::size_t ks = static_cast<std::size_t>(k);
        std::complex<double> expect =
            std::polar(1.0, -2.0 * kPi * k * spec.tone_spacing_hz * tau) *
            (1.0 + std::polar(1.0, -2.0 * kPi * k * spec.tone_spacing_hz * dtau));
        CHECK(std::abs(h[ks] - expect) < 1e-6);
    }
    // ripple period 1/dtau = 800 MHz; the band covers half a cycle, so no
    // interior null
    for (int k = 0; k + 1 < spec.tone_count; ++k)
        CHECK(std::abs(h[static_cast<std::size_t>(k)]) > 1e-3);
}

TEST_CASE("doppler advances the phase between snapshots") {
    MultitoneSpec spec;
    spec.tone_count = 8;
    auto paths = std::vector<PathTruth>{make_path(50e-9, 0.0, 0.0, {1.0, 0.0}, 1000.0)};
    BeamPattern bore;
    auto cal = CalibrationResponse::identity(spec.tone_count);
    auto h0 = synthesize_response(paths, bore, bore, spec, 0.0, cal);
    auto h1 = synthesize_response(paths, bore, bore, spec, 400e-6, cal);
    for (int k = 0; k < spec.tone_count; ++k) {
        std::size_t ks = static_cast<std::size_t>(k);
        double rot = std::arg(h1[ks] / h0[ks]);
        CHECK(rot == Catch::Approx(std::remainder(2.0 * kPi * 0.4, 2.0 * kPi)).margin(1e-9));
    }
}

TEST_CASE("beam gain scales contributions linearly") {
    MultitoneSpec spec;
    spec.tone_count = 32;
    auto paths = std::vector<PathTruth>{make_path(80e-9, 3.0, -7.0, {2e-6, 1e-6})};
    BeamPattern a, b;
    b.boresight_gain_dbi = a.boresight_gain_dbi + 6.0;
    auto cal = CalibrationResponse::identity(spec.tone_count);
    auto ha = synthesize_response(paths, a, a, spec, 0.0, cal);
    auto hb = synthesize_response(paths, b, a, spec, 0.0, cal);
    const double scale = db_to_amplitude(6.0);
    for (int k = 0; k < spec.tone_count; ++k) {
        std::size_t ks = static_cast<std::size_t>(k);
        CHECK(std::abs(hb[ks] - ha[ks] * scale) < 1e-12);
    }
}

TEST_CASE("noiseless static campaign is phase coherent across all sweeps") {
    Scene s;
    s.tx = {{0, 0, 3.5}, 0.0};
    s.rx = {{40, 0, 1.8}, 179.0};
    s.duration_s = 1.0;
    SounderConfig c = small_config();
    MeasurementTensor t = run_campaign(s, c);

    auto first = t.tones(0, 0, 0, 0);
    for (int b = 0; b < t.n_burst; ++b)
        for (int snap = 0; snap < t.n_snapshot; ++snap) {
            auto cur = t.tones(b, snap, 0, 0);
            CHECK(std::memcmp(cur.data(), first.data(),
                              cur.size() * sizeof(std::complex<float>)) == 0);
        }
}

TEST_CASE("campaign slots match direct synthesis") {
    Scene s;
    s.tx = {{0, 0, 3.5}, 10.0};
    s.rx = {{35, 5, 1.8}, -170.0};
    s.duration_s = 1.0;
    s.movers.push_back([] {
        Mover m;
        m.id = "car";
        m.length_m = 4.0;
        m.width_m = 1.8;
        m.height_m = 1.5;
        m.waypoints = {{0.0, {20, -30, 0}}, {1.0, {20, -10, 0}}};
        return m;
    }());
    SounderConfig c = small_config();
    MeasurementTensor t = run_campaign(s, c);
    auto cal = make_calibration(c);

    const int b = 2, snap = 3, i = 1, j = 0;
    const int pair = i * t.n_rx + j;
    const double t_snap = static_cast<double>(slot_time_ns(c, b, snap, 0)) * 1e-9;
    const double dt = static_cast<double>(slot_time_ns(c, b, snap, pair)) * 1e-9 - t_snap;
    auto paths = enumerate_paths(s, t_snap, 1, c.waveform.center_frequency_hz);
    auto h = synthesize_response(paths, c.tx_pattern(i), c.rx_pattern(j), c.waveform, dt, cal);

    auto stored = t.tones(b, snap, i, j);
    for (int k = 0; k < t.n_tone; ++k) {
        std::size_t ks = static_cast<std::size_t>(k);
        CHECK(static_cast<float>(h[ks].real()) == stored[ks].real());
        CHECK(static_cast<float>(h[ks].imag()) == stored[ks].imag());
    }
}

TEST_CASE("campaign is deterministic and seed-sensitive") {
    Scene s;
    s.tx = {{0, 0, 3.5}, 0.0};
    s.rx = {{40, 0, 1.8}, 179.0};
    s.duration_s = 1.0;
    SounderConfig c = small_config();
    c.noise_enabled = true;
    MeasurementTensor a = run_campaign(s, c);
    MeasurementTensor b = run_campaign(s, c);
    REQUIRE(a.data.size() == b.data.size());
    CHECK(std::memcmp(a.data.data(), b.data.data(), a.data.size() * sizeof(std::complex<float>)) == 0);

    c.seed += 1;
    MeasurementTensor d = run_campaign(s, c);
    CHECK(std::memcmp(a.data.data(), d.data.data(), a.data.size() * sizeof(std::complex<float>)) != 0);
}

TEST_CASE("worker count does not change a single output bit") {
    Scene s;
    s.tx = {{0, 0, 3.5}, 0.0};
    s.rx = {{40, 0, 1.8}, 179.0};
    s.duration_s = 1.0;
    s.movers.push_back([] {
        Mover m;
        m.id = "car";
        m.length_m = 4.0;
        m.width_m = 1.8;
        m.height_m = 2.4;
        m.waypoints = {{0.0, {20, -30, 0}}, {1.0, {20, -10, 0}}};
        return m;
    }());
    SounderConfig c = small_config();
    c.noise_enabled = true;

    setenv("DDCS_THREADS", "1", 1);
    MeasurementTensor serial = run_campaign(s, c);
    setenv("DDCS_THREADS", "4", 1);
    MeasurementTensor parallel = run_campaign(s, c);
    unsetenv("DDCS_THREADS");
    REQUIRE(serial.data.size() == parallel.data.size());
    CHECK(std::memcmp(serial.data.data(), parallel.data.data(),
                      serial.data.size() * sizeof(std::complex<float>)) == 0);
}

TEST_CASE("a scenario shorter than the campaign is rejected") {
    Scene s;
    s.tx = {{0, 0, 3.5}, 0.0};
    s.rx = {{40, 0, 1.8}, 179.0};
    s.duration_s = 1e-3;
    SounderConfig c = small_config();
    CHECK_THROWS_WITH(run_campaign(s, c), Catch::Matchers::ContainsSubstring("shorter"));
}
