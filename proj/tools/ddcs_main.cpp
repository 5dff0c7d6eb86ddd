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

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "ddcs/config_text.hpp"
#include "ddcs/pipeline.hpp"
#include "ddcs/presets.hpp"

namespace {

int do_simulate(const ddcs::SimulateOptions &opts) {
    ddcs::SounderConfig config = ddcs::run_simulate(opts);
    std::printf("wrote %s\n", opts.out_path.c_str());
    std::printf("  beam pairs      : %zu\n", config.pair_count());
    std::printf("  sweep duration  : %.0f us\n", config.sweep_duration_s() * 1e6);
    std::printf("  burst duration  : %.3f ms (%d snapshots)\n", config.burst_duration_s() * 1e3,
                config.snapshots_per_burst);
    std::printf("  burst period    : %.0f ms\n", config.burst_period_s * 1e3);
    std::printf("  campaign        : %.2f s (%d bursts)\n", config.campaign_duration_s(),
                config.burst_count);
    std::printf("  noise floor     : %.1f dBm\n", ddcs::noise_floor_dbm(config));
    return 0;
}

int do_evaluate(const ddcs::EvaluateOptions &opts) {
    ddcs::EvalResult r = ddcs::run_evaluate(opts);
    std::printf("evaluated %d bursts -> %s\n", r.bursts, opts.out_dir.c_str());
    std::printf("  tracks          : %zu\n", r.tracks.size());
    std::printf("  fixed pair      : %d (idle reference %.1f dB)\n", r.beams.fixed_pair,
                r.beams.reference_db);
    return 0;
}

int do_report(const std::string &dir) {
    std::string text = ddcs::render_report(dir);
    std::fputs(text.c_str(), stdout);
    std::ofstream out(std::filesystem::path(dir) / "report.txt");
    out << text;
    return 0;
}

int do_preset(const std::string &name, const std::string &out_dir) {
    ddcs::ScenarioPreset p = ddcs::preset_by_name(name);
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const std::string scene_path = (fs::path(out_dir) / (p.name + "_scene.txt")).string();
    const std::string config_path = (fs::path(out_dir) / (p.name + "_sounder.txt")).string();
    std::ofstream(scene_path) << ddcs::scene_to_text(p.scene);
    std::ofstream(config_path) << ddcs::sounder_to_text(p.config);
    std::printf("wrote %s\nwrote %s\nsuggested idle bursts: %d\n", scene_path.c_str(),
                config_path.c_str(), p.suggested_idle_bursts);
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"ddcs: double-directional dynamic channel sounding simulator"};
    app.require_subcommand(1);

    ddcs::SimulateOptions sim;
    std::uint64_t seed_arg = 0;
    int bursts_arg = 0;
    auto *sim_cmd = app.add_subcommand("simulate", "synthesize a measurement tensor");
    sim_cmd->add_option("--scene", sim.scene_file, "scene description file");
    sim_cmd->add_option("--config", sim.config_file, "sounder configuration file");
    sim_cmd->add_option("--preset", sim.preset, "built-in scenario preset");
    auto *seed_opt = sim_cmd->add_option("--seed", seed_arg, "run seed");
    auto *bursts_opt = sim_cmd->add_option("--bursts", bursts_arg, "override burst count");
    sim_cmd->add_flag("--noiseless", sim.noiseless, "disable receiver noise");
    sim_cmd->add_option("--out", sim.out_path, "output tensor file")->required();

    ddcs::EvaluateOptions ev;
    auto *ev_cmd = app.add_subcommand("evaluate", "run the analysis chain on a tensor");
    ev_cmd->add_option("--in", ev.tensor_path, "tensor file")->required();
    ev_cmd->add_option("--out-dir", ev.out_dir, "output directory")->required();
    ev_cmd->add_option("--config", ev.config_file, "sounder config (beam grids)");
    ev_cmd->add_option("--det-margin", ev.params.detection_margin_db,
                       "detection margin above the noise floor, dB");
    ev_cmd->add_option("--idle-bursts", ev.params.idle_bursts,
                       "bursts at the start considered idle");

    std::string report_dir;
    auto *rep_cmd = app.add_subcommand("report", "summarize an evaluation directory");
    rep_cmd->add_option("--dir", report_dir, "evaluation output directory")->required();

    std::string preset_name, preset_dir = ".";
    auto *pre_cmd = app.add_subcommand("preset", "export a scenario preset as files");
    pre_cmd->add_option("--name", preset_name, "preset name")->required();
    pre_cmd->add_option("--out-dir", preset_dir, "destination directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) ? 2 : 0;
    }

    try {
        if (sim_cmd->parsed()) {
            if (*seed_opt) sim.seed = seed_arg;
            if (*bursts_opt) sim.bursts = bursts_arg;
            return do_simulate(sim);
        }
        if (ev_cmd->parsed()) return do_evaluate(ev);
        if (rep_cmd->parsed()) return do_report(report_dir);
        if (pre_cmd->parsed()) return do_preset(preset_name, preset_dir);
    } catch (const ddcs::ParseError &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
