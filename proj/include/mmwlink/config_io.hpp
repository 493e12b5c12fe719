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

#ifndef MMWLINK_CONFIG_IO_HPP
#define MMWLINK_CONFIG_IO_HPP

#include <string>
#include <vector>

#include "mmwlink/experiments.hpp"
#include "mmwlink/scenario.hpp"

namespace mmwlink
{

// key = value format, one pair per line, # starts a comment, blank lines
// ignored. Keys are case-insensitive; unknown keys fail with the offending
// line number, as do malformed values and invalid parameter combinations.
scenario_config parse_config_text(const std::string& text, const std::string& origin = "config");
scenario_config parse_config_file(const std::string& path);

// Every key with its effective value, full double precision, parseable by
// parse_config_text. Defaulted values are materialized.
std::string config_to_text(const scenario_config& cfg);

// Sorted CSV with the fixed header
// experiment,sweep_value,method,mean_se_bits_per_symbol,trials,ci95_half_width
// and 9 significant digits on floating-point columns.
std::string format_results_csv(std::vector<se_record> records);

// Version string baked in at build time.
std::string tool_version();

struct run_manifest
{
    scenario_config config;
    std::string command_line;   // reproduction recipe
    std::string config_source;  // path of the loaded file, or "defaults"
    double wall_time_s = 0.0;
};

// Comment lines describing the invocation, then the full config echo.
// Feeding the manifest back as --config with the recorded command line
// reproduces results.csv byte for byte; wall time is informational only.
std::string manifest_text(const run_manifest& manifest);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace mmwlink

#endif
