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

#include "mmwlink/config_io.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <climits>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace mmwlink
{

namespace
{

std::string to_lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trim(const std::string& s)
{
    const auto from = s.find_first_not_of(" \t\r");
    if (from == std::string::npos)
        return "";
    const auto to = s.find_last_not_of(" \t\r");
    return s.substr(from, to - from + 1);
}

double parse_double(const std::string& v)
{
    errno = 0;
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size() || v.empty() || errno == ERANGE)
        throw std::invalid_argument("not a number");
    return x;
}

int parse_int(const std::string& v)
{
    errno = 0;
    char* end = nullptr;
    const long long x = std::strtoll(v.c_str(), &end, 10);
    if (end != v.c_str() + v.size() || v.empty() || errno == ERANGE || x < INT_MIN || x > INT_MAX)
        throw std::invalid_argument("not an integer");
    return static_cast<int>(x);
}

std::uint64_t parse_u64(const std::string& v)
{
    errno = 0;
    char* end = nullptr;
    if (!v.empty() && v[0] == '-')
        throw std::invalid_argument("not an unsigned integer");
    const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
    if (end != v.c_str() + v.size() || v.empty() || errno == ERANGE)
        throw std::invalid_argument("not an unsigned integer");
    return x;
}

bool parse_bool(const std::string& v)
{
    const std::string s = to_lower(v);
    if (s == "true" || s == "1")
        return true;
    if (s == "false" || s == "0")
        return false;
    throw std::invalid_argument("not a boolean (true/false/1/0)");
}

std::string fmt_double(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt_g9(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

struct key_descriptor
{
    const char* name;
    std::function<void(scenario_config&, const std::string&)> set;
    std::function<std::string(const scenario_config&)> get;
};

const std::vector<key_descriptor>& key_table()
{
    auto int_key = [](const char* n, int scenario_config::* f)
    {
        return key_descriptor{n, [f](scenario_config& c, const std::string& v) { c.*f = parse_int(v); },
                              [f](const scenario_config& c) { return std::to_string(c.*f); }};
    };
    auto dbl_key = [](const char* n, double scenario_config::* f)
    {
        return key_descriptor{n,
                              [f](scenario_config& c, const std::string& v) { c.*f = parse_double(v); },
                              [f](const scenario_config& c) { return fmt_double(c.*f); }};
    };
    auto bool_key = [](const char* n, bool scenario_config::* f)
    {
        return key_descriptor{n, [f](scenario_config& c, const std::string& v) { c.*f = parse_bool(v); },
                              [f](const scenario_config& c) { return c.*f ? "true" : "false"; }};
    };

    static const std::vector<key_descriptor> table = {
        int_key("n_t", &scenario_config::n_t),
        int_key("n_r", &scenario_config::n_r),
        int_key("n_c", &scenario_config::n_c),
        int_key("n_s", &scenario_config::n_s),
        int_key("subcarriers", &scenario_config::subcarriers),
        int_key("taps", &scenario_config::taps),
        dbl_key("f_c_ghz", &scenario_config::f_c_ghz),
        dbl_key("p_t_dbm", &scenario_config::p_t_dbm),
        dbl_key("p_r_dbm", &scenario_config::p_r_dbm),
        dbl_key("noise_power_dbm", &scenario_config::noise_power_dbm),
        int_key("t_p", &scenario_config::t_p),
        int_key("t_c", &scenario_config::t_c),
        int_key("blocks_per_window", &scenario_config::blocks_per_window),
        dbl_key("speed_mps", &scenario_config::speed_mps),
        key_descriptor{"bs_x",
                       [](scenario_config& c, const std::string& v)
                       { c.bs_position.x = parse_double(v); },
                       [](const scenario_config& c) { return fmt_double(c.bs_position.x); }},
        key_descriptor{"bs_y",
                       [](scenario_config& c, const std::string& v)
                       { c.bs_position.y = parse_double(v); },
                       [](const scenario_config& c) { return fmt_double(c.bs_position.y); }},
        key_descriptor{"ue_start_x",
                       [](scenario_config& c, const std::string& v)
                       { c.ue_start.x = parse_double(v); },
                       [](const scenario_config& c) { return fmt_double(c.ue_start.x); }},
        key_descriptor{"ue_start_y",
                       [](scenario_config& c, const std::string& v)
                       { c.ue_start.y = parse_double(v); },
                       [](const scenario_config& c) { return fmt_double(c.ue_start.y); }},
        int_key("n_cl", &scenario_config::n_cl),
        bool_key("has_los", &scenario_config::has_los),
        dbl_key("nlos_relative_power", &scenario_config::nlos_relative_power),
        dbl_key("tap_decay", &scenario_config::tap_decay),
        int_key("trials", &scenario_config::trials),
        key_descriptor{"seed",
                       [](scenario_config& c, const std::string& v) { c.seed = parse_u64(v); },
                       [](const scenario_config& c) { return std::to_string(c.seed); }},
        dbl_key("time_max_s", &scenario_config::time_max_s),
        int_key("time_points", &scenario_config::time_points),
        dbl_key("snr_time_s", &scenario_config::snr_time_s),
        bool_key("pilot_noise", &scenario_config::pilot_noise),
        int_key("threads", &scenario_config::threads),
    };
    return table;
}

const key_descriptor* find_key(const std::string& lower_name)
{
    for (const key_descriptor& k : key_table())
        if (lower_name == k.name)
            return &k;
    return nullptr;
}

} // namespace

scenario_config parse_config_text(const std::string& text, const std::string& origin)
{
    scenario_config cfg;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;

    while (std::getline(in, line))
    {
        line_no++;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(origin + ":" + std::to_string(line_no) +
                                        ": expected 'key = value', got '" + line + "'");
        const std::string key = to_lower(trim(line.substr(0, eq)));
        const std::string value = trim(line.substr(eq + 1));

        const key_descriptor* desc = find_key(key);
        if (desc == nullptr)
            throw std::invalid_argument(origin + ":" + std::to_string(line_no) +
                                        ": unknown key '" + key + "'");
        try
        {
            desc->set(cfg, value);
        }
        catch (const std::invalid_argument& e)
        {
            throw std::invalid_argument(origin + ":" + std::to_string(line_no) +
                                        ": invalid value '" + value + "' for '" + key +
                                        "': " + e.what());
        }
    }

    cfg.resolve_defaults();
    try
    {
        cfg.validate();
    }
    catch (const std::invalid_argument& e)
    {
        throw std::invalid_argument(origin + ": " + e.what());
    }
    return cfg;
}

scenario_config parse_config_file(const std::string& path)
{
    return parse_config_text(read_text_file(path), path);
}

std::string config_to_text(const scenario_config& cfg)
{
    scenario_config resolved = cfg;
    resolved.resolve_defaults();
    std::string out;
    for (const key_descriptor& k : key_table())
    {
        out += k.name;
        out += " = ";
        out += k.get(resolved);
        out += "\n";
    }
    return out;
}

std::string format_results_csv(std::vector<se_record> records)
{
    std::stable_sort(records.begin(), records.end(),
                     [](const se_record& a, const se_record& b)
                     {
                         return std::tie(a.experiment, a.sweep_value, a.method) <
                                std::tie(b.experiment, b.sweep_value, b.method);
                     });

    std::string out = "experiment,sweep_value,method,mean_se_bits_per_symbol,trials,ci95_half_width\n";
    for (const se_record& r : records)
    {
        out += r.experiment;
        out += ',';
        out += fmt_g9(r.sweep_value);
        out += ',';
        out += r.method;
        out += ',';
        out += fmt_g9(r.mean_se);
        out += ',';
        out += std::to_string(r.trials);
        out += ',';
        out += fmt_g9(r.ci95_half_width);
        out += '\n';
    }
    return out;
}

std::string tool_version()
{
#ifdef MMWLINK_VERSION
    return MMWLINK_VERSION;
#else
    return "unknown";
#endif
}

std::string manifest_text(const run_manifest& manifest)
{
    std::string out = "# mmwlink run manifest\n";
    out += "# version: " + tool_version() + "\n";
    out += "# config: " + manifest.config_source + "\n";
    out += "# reproduce: " + manifest.command_line + "\n";
    out += "# wall_time_s: " + fmt_g9(manifest.wall_time_s) + "\n";
    out += "# all keys below reflect the effective configuration, overrides applied\n";
    out += config_to_text(manifest.config);
    return out;
}

void write_text_file(const std::string& path, const std::string& content)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f)
        throw std::runtime_error("failed while writing '" + path + "'");
}

std::string read_text_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

} // namespace mmwlink
