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

#ifndef MMWLINK_EXPERIMENTS_HPP
#define MMWLINK_EXPERIMENTS_HPP

#include <string>
#include <vector>

#include "mmwlink/scenario.hpp"

namespace mmwlink
{

// experiment labels entering the random stream derivation
inline constexpr std::uint64_t kExperimentTime = 1;
inline constexpr std::uint64_t kExperimentSnr = 2;

// Outcomes of one trial at one sweep point for one method, both SE flavors
// (bits/symbol per subcarrier, overhead applied).
struct trial_outcome
{
    double genie_se = 0.0;
    double uatf_se = 0.0;
};

// [sweep point][method index], one trial
using trial_table = std::vector<std::vector<trial_outcome>>;

struct method_summary
{
    combining_method method{};
    double mean_genie = 0.0;
    double stderr_genie = 0.0;
    double mean_uatf = 0.0;
    double stderr_uatf = 0.0;
    double reported_mean = 0.0; // genie for ideal_dbf, hardening bound otherwise
    double ci95_half_width = 0.0;
};

struct sweep_summary
{
    double sweep_value = 0.0;
    std::vector<method_summary> methods;
};

struct experiment_result
{
    std::string experiment;
    std::vector<sweep_summary> sweeps;
    int trials = 0;
};

// Flat CSV row, one per (experiment, sweep value, method).
struct se_record
{
    std::string experiment;
    double sweep_value = 0.0;
    std::string method;
    double mean_se = 0.0;
    int trials = 0;
    double ci95_half_width = 0.0;
};

std::vector<se_record> to_records(const experiment_result& result);

// "start:stop:step" sweep in dB, inclusive endpoints (within half a step).
struct snr_grid
{
    double start_db = -10.0;
    double stop_db = 20.0;
    double step_db = 5.0;

    std::vector<double> values() const;
};

snr_grid parse_snr_grid(const std::string& text);

// Trajectory sweep: how the SE evolves as the UE moves while the first stage
// ages. All five methods.
std::vector<combining_method> time_experiment_methods();

// SNR sweep at a fixed trajectory position; methods with distinct hardware
// or CSI assumptions.
std::vector<combining_method> snr_experiment_methods();

std::vector<double> time_sweep_values(const scenario_config& cfg);

// The per-trial workers are pure functions of (config, trial index): trials
// can run in any order or concurrently without changing any reported digit.
trial_table time_experiment_trial(const scenario_config& cfg, int trial);
trial_table snr_experiment_trial(const scenario_config& cfg, const snr_grid& grid, int trial);

experiment_result reduce_time_trials(const scenario_config& cfg,
                                     const std::vector<trial_table>& tables);
experiment_result reduce_snr_trials(const scenario_config& cfg, const snr_grid& grid,
                                    const std::vector<trial_table>& tables);

experiment_result run_time_experiment(const scenario_config& cfg);
experiment_result run_snr_experiment(const scenario_config& cfg, const snr_grid& grid);

} // namespace mmwlink

#endif
