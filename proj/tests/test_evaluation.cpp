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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ddcs/evaluation.hpp"
#include "ddcs/presets.hpp"
#include "ddcs/sounder.hpp"

using namespace ddcs;

namespace {

constexpr int kTones = 801;
const double kBin = 1.0 / (kTones * 500e3);

BeamContext standard_context(double gain_dbi = 19.5) {
    BeamContext b;
    b.tx_azimuths_deg = BeamGrid::standard().azimuths_deg;
    b.rx_azimuths_deg = BeamGrid::standard().azimuths_deg;
    b.delay_bin_s = kBin;
    b.deembed_power_gain = db_to_power(2.0 * gain_dbi);
    return b;
}

/// One noiseless sweep of the given ground-truth paths through the sounder
/// model, evaluated into a PDP cube.
PdpCube sweep_cube(const std::vector<PathTruth> &paths, const SounderConfig &config,
                   const CalibrationResponse &cal) {
    PdpCube cube;
    cube.n_tx = static_cast<int>(config.tx_grid.beam_count());
    cube.n_rx = static_cast<int>(config.rx_grid.beam_count());
    cube.n_delay = config.waveform.tone_count;
    cube.power.assign(static_cast<std::size_t>(cube.n_tx) * cube.n_rx * cube.n_delay, 0.0);
    for (int i = 0; i < cube.n_tx; ++i) {
        for (int j = 0; j < cube.n_rx; ++j) {
            auto h = synthesize_response(paths, config.tx_pattern(i), config.rx_pattern(j),
                                         config.waveform, 0.0, cal);
            auto pdp = directional_pdp(h, cal);
            for (int n = 0; n < cube.n_delay; ++n) cube.at(i, j, n) = pdp[static_cast<std::size_t>(n)];
        }
    }
    return cube;
}

PathTruth path_at(double delay_s, double dod, double doa, double amp_db, double phase = 0.3) {
    PathTruth p;
    p.delay_s = delay_s;
    p.dod_az_deg = dod;
    p.doa_az_deg = doa;
    p.amplitude = std::polar(db_to_amplitude(amp_db), phase);
    p.kind = PathKind::kReflection;
    return p;
}

Mpc mpc_at(int tx, int rx, int bin, double power_db) {
    Mpc m;
    m.tx_beam = tx;
    m.rx_beam = rx;
    m.delay_bin = bin;
    m.delay_s = bin * kBin;
    m.dod_az_deg = -45.0 + 10.0 * tx;
    m.doa_az_deg = -45.0 + 10.0 * rx;
    m.power_db = power_db;
    return m;
}

} // namespace

TEST_CASE("identity response gives a unit impulse at bin zero") {
    auto cal = CalibrationResponse::ripple(128, 5);
    std::vector<std::complex<double>> h = cal.gain;
    auto pdp = directional_pdp(h, cal);
    CHECK(pdp[0] == Catch::Approx(1.0).epsilon(1e-12));
    for (std::size_t n = 1; n < pdp.size(); ++n) CHECK(pdp[n] < 1e-20);
}

TEST_CASE("a 51 m path lands in bin 68 with leakage below -13 dB") {
    MultitoneSpec spec;
    auto cal = CalibrationResponse::identity(kTones);
    const double tau = 51.0 / kSpeedOfLight;
    std::vector<PathTruth> paths{path_at(tau, 0.0, 0.0, 0.0)};
    BeamPattern bore;
    bore.boresight_gain_dbi = 0.0;
    auto h = synthesize_response(paths, bore, bore, spec, 0.0, cal);
    auto pdp = directional_pdp(h, cal);

    std::size_t peak = std::max_element(pdp.begin(), pdp.end()) - pdp.begin();
    CHECK(peak == 68);
    CHECK(static_cast<int>(peak) == static_cast<int>(std::round(tau / kBin)));
    for (std::size_t n = 0; n < pdp.size(); ++n)
        if (n != peak) CHECK(pdp[n] <= pdp[peak] * db_to_power(-13.0));
}

TEST_CASE("delays beyond one waveform period alias") {
    MultitoneSpec spec;
    auto cal = CalibrationResponse::identity(kTones);
    const double eps = 10e-9;
    std::vector<PathTruth> paths{path_at(spec.duration_s() + eps, 0.0, 0.0, 0.0)};
    BeamPattern bore;
    auto h = synthesize_response(paths, bore, bore, spec, 0.0, cal);
    auto pdp = directional_pdp(h, cal);
    std::size_t peak = std::max_element(pdp.begin(), pdp.end()) - pdp.begin();
    CHECK(peak == static_cast<std::size_t>(std::round(eps / kBin)));
}

TEST_CASE("zero calibration entries are reported") {
    CalibrationResponse cal = CalibrationResponse::identity(8);
    std::vector<std::complex<double>> h(8, {1.0, 0.0});
    cal.gain[3] = {0.0, 0.0};
    CHECK_THROWS_AS(directional_pdp(h, cal), std::invalid_argument);
}

TEST_CASE("omni pdp max-combines and de-embeds") {
    PdpCube cube;
    cube.n_tx = 2;
    cube.n_rx = 1;
    cube.n_delay = 4;
    cube.power = {0, 0, 8.0, 0, /* pair (1,0): */ 0, 0, 4.0, 0};
    auto omni = omni_pdp(cube, 2.0);
    CHECK(omni[2] == Catch::Approx(4.0)); // max(8,4)/2, not (8+4)/2
    CHECK(omni[0] == 0.0);
}

TEST_CASE("omni pdp is invariant to the sweep order of the pairs") {
    SounderConfig c;
    c.noise_enabled = false;
    auto cal = CalibrationResponse::identity(kTones);
    std::vector<PathTruth> paths{path_at(100 * kBin, -15.0, 5.0, -60.0),
                                 path_at(300 * kBin, 35.0, -45.0, -66.0)};
    PdpCube cube = sweep_cube(paths, c, cal);

    PdpCube shuffled = cube;
    std::mt19937 rng(9);
    std::vector<int> order(100);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (int p = 0; p < 100; ++p)
        for (int n = 0; n < kTones; ++n)
            shuffled.at(order[static_cast<std::size_t>(p)] / 10,
                        order[static_cast<std::size_t>(p)] % 10, n) = cube.at(p / 10, p % 10, n);

    auto a = omni_pdp(cube, db_to_power(39.0));
    auto b = omni_pdp(shuffled, db_to_power(39.0));
    double pa = 0.0, pb = 0.0;
    for (int n = 0; n < kTones; ++n) {
        pa += a[static_cast<std::size_t>(n)];
        pb += b[static_cast<std::size_t>(n)];
    }
    CHECK(pa == Catch::Approx(pb).epsilon(1e-15));
}

TEST_CASE("single synthetic path yields exactly one detection") {
    SounderConfig c;
    c.noise_enabled = false;
    auto cal = CalibrationResponse::identity(kTones);
    std::vector<PathTruth> paths{path_at(120 * kBin, -45.0, -45.0, -60.0)};
    PdpCube cube = sweep_cube(paths, c, cal);
    auto mpcs = peak_search_3d(cube, estimate_noise_floor(cube), standard_context(), EvalParams{});
    REQUIRE(mpcs.size() == 1);
    CHECK(mpcs[0].tx_beam == 0);
    CHECK(mpcs[0].rx_beam == 0);
    CHECK(mpcs[0].delay_bin == 120);
    CHECK(mpcs[0].power_db == Catch::Approx(-60.0).margin(0.05));
}

TEST_CASE("case1 idle sweep: two dominant detections at the quoted beams and delays") {
    ScenarioPreset p = case1_blocking_bus();
    p.config.noise_enabled = false;
    auto cal = CalibrationResponse::identity(kTones);
    auto paths = enumerate_paths(p.scene, 0.2);
    PdpCube cube = sweep_cube(paths, p.config, cal);
    auto mpcs = ghost_filter(
        peak_search_3d(cube, estimate_noise_floor(cube), standard_context(), EvalParams{}),
        EvalParams{});
    REQUIRE(mpcs.size() >= 2);
    std::sort(mpcs.begin(), mpcs.end(),
              [](const Mpc &a, const Mpc &b) { return a.power_db > b.power_db; });

    CHECK(mpcs[0].dod_az_deg == -15.0);
    CHECK(mpcs[0].doa_az_deg == -25.0);
    CHECK(mpcs[0].delay_bin == static_cast<int>(std::round(51.0 / kSpeedOfLight / kBin)));

    CHECK(mpcs[1].dod_az_deg == 35.0);
    CHECK(mpcs[1].doa_az_deg == -35.0);
    CHECK(mpcs[1].delay_bin == static_cast<int>(std::round(57.75 / kSpeedOfLight / kBin)));

    // tap ratio close to the configured 9 dB
    CHECK(mpcs[0].power_db - mpcs[1].power_db == Catch::Approx(9.0).margin(0.5));
}

TEST_CASE("adjacent-bin peaks merge toward the lower delay") {
    PdpCube cube;
    cube.n_tx = 1;
    cube.n_rx = 1;
    cube.n_delay = 32;
    cube.power.assign(32, 0.0);
    cube.power[10] = 1.0;
    cube.power[11] = 1.0; // tie: lower delay wins
    auto mpcs = peak_search_3d(cube, 1e-12, standard_context(0.0), EvalParams{});
    REQUIRE(mpcs.size() == 1);
    CHECK(mpcs[0].delay_bin == 10);
}

TEST_CASE("ghost filter removes co-delay sidelobe images") {
    std::vector<Mpc> mpcs{mpc_at(3, 2, 68, -60.0), mpc_at(0, 2, 68, -80.0)};
    auto out = ghost_filter(mpcs, EvalParams{});
    REQUIRE(out.size() == 1);
    CHECK(out[0].tx_beam == 3);

    // two genuine equal-power paths at the same delay survive
    std::vector<Mpc> equal{mpc_at(3, 2, 68, -60.0), mpc_at(7, 5, 68, -60.0)};
    CHECK(ghost_filter(equal, EvalParams{}).size() == 2);

    // single component untouched
    std::vector<Mpc> one{mpc_at(4, 4, 100, -70.0)};
    CHECK(ghost_filter(one, EvalParams{}).size() == 1);
}

TEST_CASE("ghost filter is the identity on ghost-free inputs") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> bin(0, 700), beam(0, 9);
    std::uniform_real_distribution<double> pw(-90.0, -60.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Mpc> mpcs;
        std::vector<int> bins;
        for (int k = 0; k < 6; ++k) {
            int b = bin(rng);
            bool clash = false;
            for (int b0 : bins) clash = clash || std::abs(b - b0) <= 1;
            if (clash) continue;
            bins.push_back(b);
            mpcs.push_back(mpc_at(beam(rng), beam(rng), b, pw(rng)));
        }
        CHECK(ghost_filter(mpcs, EvalParams{}).size() == mpcs.size());
    }
}

TEST_CASE("tracking keeps static paths alive and tolerates misses") {
    EvalParams params;
    std::vector<std::vector<Mpc>> bursts;
    for (int b = 0; b < 200; ++b)
        bursts.push_back({mpc_at(3, 2, 68, -60.0), mpc_at(8, 1, 77, -69.0)});
    auto tracks = track_mpcs(bursts, params);
    REQUIRE(tracks.size() == 2);
    for (const auto &t : tracks) {
        CHECK(t.hits == 200);
        CHECK(t.start_burst == 0);
        CHECK(t.end_burst == 199);
    }

    // one-burst dropout does not split the track
    std::vector<std::vector<Mpc>> gappy;
    for (int b = 0; b < 20; ++b) {
        if (b == 10) gappy.push_back({});
        else gappy.push_back({mpc_at(3, 2, 68, -60.0)});
    }
    auto tr = track_mpcs(gappy, params);
    REQUIRE(tr.size() == 1);
    CHECK(tr[0].hits == 19);
    CHECK(tr[0].end_burst == 19);
}

TEST_CASE("tracking follows a path whose delay drifts one bin per burst") {
    EvalParams params;
    std::vector<std::vector<Mpc>> bursts;
    for (int b = 0; b < 40; ++b) bursts.push_back({mpc_at(5, 5, 300 - b, -70.0)});
    auto tracks = track_mpcs(bursts, params);
    REQUIRE(tracks.size() == 1);
    CHECK(tracks[0].hits == 40);
    // ids assigned in order of appearance
    CHECK(bursts[0][0].track_id == tracks[0].id);
}

TEST_CASE("doppler spectrum of a static path peaks at zero") {
    std::vector<std::complex<double>> snaps(20, {1.0, 0.0});
    auto freqs = doppler_frequencies(20, 400e-6);
    auto spec = doppler_spectrum_ordered(snaps);
    REQUIRE(freqs.size() == 20);
    CHECK(freqs.front() == Catch::Approx(-1125.0));
    CHECK(freqs.back() == Catch::Approx(1250.0));
    std::size_t peak = std::max_element(spec.begin(), spec.end()) - spec.begin();
    CHECK(freqs[peak] == 0.0);
    CHECK(estimate_doppler_peak_hz(spec, freqs) == Catch::Approx(0.0).margin(1.0));
}

TEST_CASE("doppler spectrum resolves a 500 Hz path") {
    std::vector<std::complex<double>> snaps;
    for (int s = 0; s < 20; ++s) snaps.push_back(std::polar(1.0, 2.0 * kPi * 500.0 * s * 400e-6));
    auto spec = doppler_spectrum_ordered(snaps);
    auto freqs = doppler_frequencies(20, 400e-6);
    std::size_t peak = std::max_element(spec.begin(), spec.end()) - spec.begin();
    CHECK(freqs[peak] == Catch::Approx(500.0));
    CHECK(estimate_doppler_peak_hz(spec, freqs) == Catch::Approx(500.0).margin(1.0));
}

TEST_CASE("doppler beyond the unambiguous range wraps") {
    std::vector<std::complex<double>> snaps;
    for (int s = 0; s < 20; ++s) snaps.push_back(std::polar(1.0, 2.0 * kPi * 1300.0 * s * 400e-6));
    auto spec = doppler_spectrum_ordered(snaps);
    auto freqs = doppler_frequencies(20, 400e-6);
    // 1300 Hz is unrepresentable: it reads back as about -1200 Hz
    CHECK(estimate_doppler_peak_hz(spec, freqs) == Catch::Approx(-1200.0).margin(40.0));
}

TEST_CASE("doppler needs at least two snapshots") {
    std::vector<std::complex<double>> one(1, {1.0, 0.0});
    CHECK_THROWS_AS(doppler_spectrum(one), std::invalid_argument);
}

TEST_CASE("doppler grids cover every bin for odd snapshot counts too") {
    for (int s_count : {5, 8, 19, 20}) {
        std::vector<std::complex<double>> snaps(static_cast<std::size_t>(s_count), {1.0, 0.0});
        auto spec = doppler_spectrum_ordered(snaps);
        auto freqs = doppler_frequencies(s_count, 400e-6);
        CHECK(spec.size() == static_cast<std::size_t>(s_count));
        CHECK(freqs.size() == static_cast<std::size_t>(s_count));
        for (std::size_t i = 1; i < freqs.size(); ++i)
            CHECK(freqs[i] - freqs[i - 1] == Catch::Approx(1.0 / (s_count * 400e-6)));
    }
}

TEST_CASE("rms delay spread closed forms") {
    EvalParams params;
    std::vector<double> single(801, 0.0);
    single[100] = 1.0;
    CHECK(*rms_delay_spread(single, 0.0, 2.5e-9, params) == Catch::Approx(0.0).margin(1e-15));

    // two equal taps 20 ns apart (bins 0 and 8 at 2.5 ns) -> 10 ns
    std::vector<double> two(801, 0.0);
    two[0] = 0.5;
    two[8] = 0.5;
    CHECK(*rms_delay_spread(two, 0.0, 2.5e-9, params) == Catch::Approx(10e-9).margin(1e-21));

    // three equal taps 0/10/20 ns -> sqrt(200/3) ns
    std::vector<double> three(801, 0.0);
    three[0] = three[4] = three[8] = 1.0;
    CHECK(*rms_delay_spread(three, 0.0, 2.5e-9, params) ==
          Catch::Approx(8.164966e-9).epsilon(1e-6));

    // scale invariance
    std::vector<double> scaled = three;
    for (auto &v : scaled) v *= 123.456;
    CHECK(*rms_delay_spread(scaled, 0.0, 2.5e-9, params) ==
          Catch::Approx(*rms_delay_spread(three, 0.0, 2.5e-9, params)).epsilon(1e-12));

    // nothing above threshold -> undefined, not zero
    std::vector<double> empty(801, 0.0);
    CHECK_FALSE(rms_delay_spread(empty, 0.0, 2.5e-9, params).has_value());
}

TEST_CASE("angular statistics closed forms") {
    std::vector<Mpc> one{mpc_at(8, 8, 10, -50.0)}; // 35 degrees
    auto s1 = angular_stats(one, AngleSide::kDeparture);
    REQUIRE(s1.has_value());
    CHECK(s1->first == Catch::Approx(35.0));
    CHECK(s1->second == Catch::Approx(0.0).margin(1e-12));

    // equal powers at +-30 degrees: mean 0, spread |sin 30| rad
    std::vector<Mpc> pair_mpcs;
    Mpc a = mpc_at(0, 0, 10, -50.0), b = mpc_at(0, 0, 12, -50.0);
    a.dod_az_deg = 30.0;
    b.dod_az_deg = -30.0;
    pair_mpcs = {a, b};
    auto s2 = angular_stats(pair_mpcs, AngleSide::kDeparture);
    CHECK(s2->first == Catch::Approx(0.0).margin(1e-9));
    CHECK(s2->second == Catch::Approx(rad2deg(0.5)).epsilon(1e-9));

    // rotating every angle shifts the mean and leaves the spread
    for (auto &m : pair_mpcs) m.dod_az_deg += 7.5;
    auto s3 = angular_stats(pair_mpcs, AngleSide::kDeparture);
    CHECK(s3->first == Catch::Approx(7.5).margin(1e-9));
    CHECK(s3->second == Catch::Approx(s2->second).epsilon(1e-12));

    // scale invariance of the spread
    for (auto &m : pair_mpcs) m.power_db += 14.0;
    auto s4 = angular_stats(pair_mpcs, AngleSide::kDeparture);
    CHECK(s4->second == Catch::Approx(s3->second).epsilon(1e-12));

    CHECK_FALSE(angular_stats({}, AngleSide::kArrival).has_value());
}

TEST_CASE("case1 idle angular spreads: narrow arrival, wide departure") {
    ScenarioPreset p = case1_blocking_bus();
    p.config.noise_enabled = false;
    auto cal = CalibrationResponse::identity(kTones);
    auto paths = enumerate_paths(p.scene, 0.2);
    PdpCube cube = sweep_cube(paths, p.config, cal);
    auto mpcs = ghost_filter(
        peak_search_3d(cube, estimate_noise_floor(cube), standard_context(), EvalParams{}),
        EvalParams{});
    auto dod = angular_stats(mpcs, AngleSide::kDeparture);
    auto doa = angular_stats(mpcs, AngleSide::kArrival);
    REQUIRE(dod.has_value());
    REQUIRE(doa.has_value());

    // closed-form circular oracle over the detected set
    auto oracle = [&](bool departure) {
        std::complex<double> mu{0, 0};
        double ps = 0;
        for (const auto &m : mpcs) {
            double p_lin = db_to_power(m.power_db);
            mu += p_lin * std::polar(1.0, deg2rad(departure ? m.dod_az_deg : m.doa_az_deg));
            ps += p_lin;
        }
        mu /= ps;
        double sq = 0;
        for (const auto &m : mpcs)
            sq += db_to_power(m.power_db) *
                  std::norm(std::polar(1.0, deg2rad(departure ? m.dod_az_deg : m.doa_az_deg)) - mu);
        return rad2deg(std::sqrt(sq / ps));
    };
    CHECK(dod->second == Catch::Approx(oracle(true)).epsilon(1e-9));
    CHECK(doa->second == Catch::Approx(oracle(false)).epsilon(1e-9));
    CHECK(doa->second < 8.0);  // arrivals cluster
    CHECK(dod->second > 12.0); // departures split by the 50 degree wall offset
}

TEST_CASE("path gain closed forms") {
    EvalParams params;
    std::vector<double> omni(801, 0.0);
    omni[68] = db_to_power(-100.0);
    CHECK(*path_gain_db(omni, 1e-30, params) == Catch::Approx(-100.0).margin(1e-9));

    omni[200] = db_to_power(-100.0);
    CHECK(*path_gain_db(omni, 1e-30, params) == Catch::Approx(-96.99).margin(0.01));
}

TEST_CASE("path gain survives the synthesis round trip within 0.1 dB") {
    SounderConfig c;
    c.noise_enabled = false;
    auto cal = CalibrationResponse::identity(kTones);
    std::vector<PathTruth> paths{path_at(241 * kBin, -15.0, -25.0, -100.0)};
    PdpCube cube = sweep_cube(paths, c, cal);
    auto omni = omni_pdp(cube, db_to_power(39.0));
    auto pg = path_gain_db(omni, estimate_noise_floor(cube) / db_to_power(39.0), EvalParams{});
    REQUIRE(pg.has_value());
    CHECK(*pg == Catch::Approx(-100.0).margin(0.1));
}

TEST_CASE("beam pair analysis: static series has zero excess everywhere") {
    std::vector<std::vector<double>> gains(30, std::vector<double>{-90.0, -99.0, -120.0});
    auto a = beam_pair_analysis(gains, 10);
    CHECK(a.fixed_pair == 0);
    for (int b = 0; b < 30; ++b) {
        CHECK(a.excess_fixed_db[static_cast<std::size_t>(b)] == Catch::Approx(0.0).margin(1e-12));
        CHECK(a.excess_adaptive_db[static_cast<std::size_t>(b)] == Catch::Approx(0.0).margin(1e-12));
    }
}

TEST_CASE("adaptive excess never exceeds fixed excess") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> g(-130.0, -80.0);
    std::vector<std::vector<double>> gains;
    for (int b = 0; b < 60; ++b) {
        std::vector<double> row;
        for (int p = 0; p < 8; ++p) row.push_back(g(rng));
        gains.push_back(row);
    }
    auto a = beam_pair_analysis(gains, 10);
    for (int b = 0; b < 60; ++b)
        CHECK(a.excess_adaptive_db[static_cast<std::size_t>(b)] <=
              a.excess_fixed_db[static_cast<std::size_t>(b)] + 1e-12);
}

TEST_CASE("beam switching policies") {
    // pair 0 steady at -115 dB; pair 1 surges by 8 and 6 dB for short spells
    std::vector<std::vector<double>> gains;
    for (int b = 0; b < 50; ++b) {
        double p1 = -125.0;
        if (b >= 5 && b < 13) p1 = -107.0;
        if (b >= 25 && b < 31) p1 = -109.0;
        gains.push_back({-115.0, p1});
    }

    auto greedy = beam_switch_strategy(gains, 0.0, 1);
    CHECK(greedy.cumulative_loss_db == Catch::Approx(0.0).margin(1e-12));
    for (int b = 0; b < 50; ++b) {
        std::size_t bu = static_cast<std::size_t>(b);
        CHECK(gains[bu][static_cast<std::size_t>(greedy.chosen_pair[bu])] ==
              Catch::Approx(std::max(gains[bu][0], gains[bu][1])));
    }

    auto frozen = beam_switch_strategy(gains, 1e9, 1);
    CHECK(frozen.switch_count == 0);

    auto hyst10 = beam_switch_strategy(gains, 10.0, 1);
    CHECK(hyst10.switch_count == 0);

    auto hyst3 = beam_switch_strategy(gains, 3.0, 1);
    CHECK(hyst3.switch_count >= 2);

    CHECK_THROWS_AS(beam_switch_strategy(gains, -1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(beam_switch_strategy(gains, 0.0, 0), std::invalid_argument);
}

TEST_CASE("round trip: well-separated paths come back exactly (quick version)") {
    SounderConfig c;
    c.noise_enabled = false;
    auto cal = CalibrationResponse::identity(kTones);
    std::mt19937 rng(31);
    std::uniform_int_distribution<int> bin(10, 700), beam(0, 9);
    std::uniform_real_distribution<double> pw(-10.0, 0.0), ph(0.0, 2.0 * kPi);

    for (int trial = 0; trial < 5; ++trial) {
        int k = 1 + trial % 5;
        std::vector<PathTruth> truth;
        std::vector<int> bins;
        std::vector<std::pair<int, int>> beams_used;
        while (static_cast<int>(truth.size()) < k) {
            int b = bin(rng);
            bool ok = true;
            for (int b0 : bins) ok = ok && std::abs(b - b0) >= 4;
            int bi = beam(rng), bj = beam(rng);
            for (auto &q : beams_used) ok = ok && !(q.first == bi && q.second == bj);
            if (!ok) continue;
            bins.push_back(b);
            beams_used.push_back({bi, bj});
            truth.push_back(path_at(b * kBin, -45.0 + 10.0 * bi, -45.0 + 10.0 * bj,
                                    pw(rng) - 60.0, ph(rng)));
        }
        PdpCube cube = sweep_cube(truth, c, cal);
        auto mpcs = ghost_filter(
            peak_search_3d(cube, estimate_noise_floor(cube), standard_context(), EvalParams{}),
            EvalParams{});
        REQUIRE(mpcs.size() == truth.size());
        std::sort(mpcs.begin(), mpcs.end(), [](const Mpc &a, const Mpc &b2) {
            return a.delay_bin < b2.delay_bin;
        });
        std::sort(truth.begin(), truth.end(), [](const PathTruth &a, const PathTruth &b2) {
            return a.delay_s < b2.delay_s;
        });
        for (std::size_t i = 0; i < truth.size(); ++i) {
            CHECK(mpcs[i].delay_bin == static_cast<int>(std::round(truth[i].delay_s / kBin)));
            CHECK(mpcs[i].dod_az_deg == Catch::Approx(truth[i].dod_az_deg));
            CHECK(mpcs[i].doa_az_deg == Catch::Approx(truth[i].doa_az_deg));
            CHECK(mpcs[i].power_db ==
                  Catch::Approx(power_to_db(std::norm(truth[i].amplitude))).margin(0.5));
        }
    }
}
