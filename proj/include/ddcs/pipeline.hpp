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

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ddcs/evaluation.hpp"
#include "ddcs/tensor_io.hpp"

namespace ddcs {

struct SimulateOptions {
    std::string scene_file;   // or preset
    std::string config_file;  // or preset
    std::string preset;       // preset name, overrides the two above
    std::optional<std::uint64_t> seed;
    std::optional<int> bursts;
    bool noiseless = false;
    std::string out_path;
};

/// Runs the campaign and writes the tensor (streaming, burst by burst) plus
/// the calibration sidecar. Returns the config actually used.
SounderConfig run_simulate(const SimulateOptions &opts);

struct EvaluateOptions {
    std::string tensor_path;
    std::string out_dir;
    std::string config_file; // optional; beam grids / gains for de-embedding
    EvalParams params;
};

/// Per-burst evaluation results kept in memory for tests and reporting.
struct EvalResult {
    int bursts = 0;
    double delay_bin_s = 0.0;
    double burst_period_s = 0.0;
    std::vector<double> time_s;
    std::vector<std::optional<double>> path_gain_db;
    std::vector<std::optional<double>> rms_ds_s;
    std::vector<std::optional<std::pair<double, double>>> dod_stats; // mean, spread
    std::vector<std::optional<std::pair<double, double>>> doa_stats;
    std::vector<std::vector<Mpc>> mpcs; // with track ids
    std::vector<Track> tracks;
    BeamPairAnalysis beams;
    std::vector<std::vector<double>> pair_gain_db; // [burst][pair]
    std::vector<std::vector<double>> doppler_db;   // [burst][freq bin], best pair, max over delay
    std::vector<double> doppler_freqs_hz;
};

/// Full analysis chain over a tensor file; writes stats.csv, mpcs.csv,
/// tracks.csv, pdp_time.bin and doppler.bin into out_dir.
EvalResult run_evaluate(const EvaluateOptions &opts);

/// Rewraps an in-memory campaign as tensor-file contents (data is moved).
TensorFile as_tensor_file(MeasurementTensor &&t);

/// Analysis chain on in-memory tensor contents. out_dir may be empty to skip
/// file outputs. Beam grids default to the standard 10-beam sweep.
EvalResult evaluate_tensor(const TensorFile &t, const CalibrationResponse &cal,
                           const EvalParams &params, const std::string &out_dir,
                           const SounderConfig *config = nullptr);

/// Renders the summary table from an evaluation output directory.
std::string render_report(const std::string &dir);

} // namespace ddcs
