// SPDX-License-Identifier: Apache-2.0
//
// mmwlink - link-level simulator for wideband mmWave MIMO with two-stage
// fully digital combining
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

#include "mmwlink/cli.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mmwlink/config_io.hpp"
#include "mmwlink/experiments.hpp"
#include "mmwlink/selftest.hpp"

namespace mmwlink
{

namespace
{

struct common_options
{
    std::string config_path;
    std::string out_dir = "results";
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
};

void add_common_options(CLI::App* cmd, common_options& opt)
{
    cmd->add_option("--config", opt.config_path, "configuration file (key = value lines)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", opt.out_dir, "output directory for results.csv and manifest.txt");
    cmd->add_option("--seed", opt.seed, "override the master seed");
    cmd->add_option("--trials", opt.trials, "override the Monte Carlo trial count");
}

scenario_config load_config(const common_options& opt)
{
    scenario_config cfg =
        opt.config_path.empty() ? scenario_config{} : parse_config_file(opt.config_path);
    cfg.resolve_defaults();
    if (opt.seed)
        cfg.seed = *opt.seed;
    if (opt.trials)
        cfg.trials = *opt.trials;
    cfg.validate();
    return cfg;
}

void write_outputs(const common_options& opt, const scenario_config& cfg,
                   const experiment_result& result, const std::string& reproduce_command,
                   double wall_time_s)
{
    std::filesystem::create_directories(opt.out_dir);
    const std::string csv = format_results_csv(to_records(result));
    write_text_file(opt.out_dir + "/results.csv", csv);
    run_manifest manifest;
    manifest.config = cfg;
    manifest.command_line = reproduce_command;
    manifest.config_source = opt.config_path.empty() ? "defaults" : opt.config_path;
    manifest.wall_time_s = wall_time_s;
    write_text_file(opt.out_dir + "/manifest.txt", manifest_text(manifest));
    std::cout << "wrote " << opt.out_dir << "/results.csv (" << result.sweeps.size()
              << " sweep points, " << result.trials << " trials)\n";
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

} // namespace

int run_cli(int argc, const char* const* argv)
{
    CLI::App app{"link-level simulator for wideband mmWave MIMO with two-stage digital combining"};
    app.require_subcommand(1);

    common_options time_opt;
    CLI::App* time_cmd =
        app.add_subcommand("se-vs-time", "spectral efficiency along the UE trajectory");
    add_common_options(time_cmd, time_opt);

    common_options snr_opt;
    std::string grid_text = "-10:20:5";
    CLI::App* snr_cmd =
        app.add_subcommand("se-vs-snr", "spectral efficiency over a receive SNR grid");
    add_common_options(snr_cmd, snr_opt);
    snr_cmd->add_option("--snr-grid", grid_text, "sweep grid in dB, format start:stop:step");

    CLI::App* self_cmd = app.add_subcommand("selftest", "run built-in numerical checks");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        return app.exit(e);
    }

    try
    {
        if (time_cmd->parsed())
        {
            const scenario_config cfg = load_config(time_opt);
            const auto start = std::chrono::steady_clock::now();
            const experiment_result result = run_time_experiment(cfg);
            write_outputs(time_opt, cfg, result, "mmwlink se-vs-time --config manifest.txt",
                          seconds_since(start));
            return 0;
        }
        if (snr_cmd->parsed())
        {
            const scenario_config cfg = load_config(snr_opt);
            const snr_grid grid = parse_snr_grid(grid_text);
            const auto start = std::chrono::steady_clock::now();
            const experiment_result result = run_snr_experiment(cfg, grid);
            write_outputs(snr_opt, cfg, result,
                          "mmwlink se-vs-snr --config manifest.txt --snr-grid " + grid_text,
                          seconds_since(start));
            return 0;
        }
        if (self_cmd->parsed())
            return run_selftest(std::cout) == 0 ? 0 : 1;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace mmwlink
