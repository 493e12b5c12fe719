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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mmwlink/config_io.hpp"
#include "mmwlink/experiments.hpp"
#include "mmwlink/selftest.hpp"

using namespace mmwlink;

namespace
{

// Smallest structurally valid setup; keeps full experiment runs in the
// millisecond range.
scenario_config tiny_config()
{
    scenario_config cfg;
    cfg.n_t = 4;
    cfg.n_r = 2;
    cfg.n_c = 2;
    cfg.n_s = 1;
    cfg.subcarriers = 2;
    cfg.taps = 1;
    cfg.t_p = 2;
    cfg.t_c = 10;
    cfg.blocks_per_window = 2;
    cfg.n_cl = 1;
    cfg.trials = 3;
    cfg.time_points = 2;
    cfg.time_max_s = 1.0;
    cfg.threads = 1;
    cfg.resolve_defaults();
    return cfg;
}

} // namespace

TEST_CASE("trajectory sweep points span zero to the horizon")
{
    scenario_config cfg = tiny_config();
    cfg.time_points = 9;
    cfg.time_max_s = 4.0;
    const std::vector<double> t = time_sweep_values(cfg);
    REQUIRE(t.size() == 9);
    CHECK(t.front() == 0.0);
    CHECK(t.back() == 4.0);
    for (int k = 0; k < 9; k++)
        CHECK(t[static_cast<std::size_t>(k)] == Catch::Approx(0.5 * k).margin(1e-12));

    cfg.time_points = 1;
    const std::vector<double> single = time_sweep_values(cfg);
    REQUIRE(single.size() == 1);
    CHECK(single[0] == 0.0);
}

TEST_CASE("SNR grid strings parse to inclusive sweeps")
{
    const snr_grid g = parse_snr_grid("-10:20:5");
    const std::vector<double> v = g.values();
    REQUIRE(v.size() == 7);
    for (int k = 0; k < 7; k++)
        CHECK(v[static_cast<std::size_t>(k)] == Catch::Approx(-10.0 + 5.0 * k).margin(1e-12));

    const std::vector<double> one = parse_snr_grid("0:0:5").values();
    REQUIRE(one.size() == 1);
    CHECK(one[0] == 0.0);

    CHECK_THROWS_AS(parse_snr_grid("a:b:c"), std::invalid_argument);
    CHECK_THROWS_AS(parse_snr_grid("1:10"), std::invalid_argument);
    CHECK_THROWS_AS(parse_snr_grid("3:1:1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_snr_grid("1:10:0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_snr_grid("1:10:-1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_snr_grid("1:10:5 extra"), std::invalid_argument);
}

TEST_CASE("reduction matches hand-computed moments")
{
    scenario_config cfg = tiny_config();
    const snr_grid grid = parse_snr_grid("0:5:5");
    const std::size_t num_methods = snr_experiment_methods().size();
    REQUIRE(num_methods == 3);

    // fabricated outcomes: per-cell values 1, 2, 3 across the trials
    std::vector<trial_table> tables(3, trial_table(2, std::vector<trial_outcome>(num_methods)));
    for (std::size_t t = 0; t < 3; t++)
        for (std::size_t k = 0; k < 2; k++)
            for (std::size_t m = 0; m < num_methods; m++)
            {
                tables[t][k][m].genie_se = static_cast<double>(t + 1);
                tables[t][k][m].uatf_se = 10.0 * static_cast<double>(t + 1);
            }

    const experiment_result res = reduce_snr_trials(cfg, grid, tables);
    CHECK(res.experiment == "se_vs_snr");
    CHECK(res.trials == 3);
    REQUIRE(res.sweeps.size() == 2);
    CHECK(res.sweeps[0].sweep_value == 0.0);
    CHECK(res.sweeps[1].sweep_value == 5.0);

    const double want_se = std::sqrt(2.0 / (3.0 * 2.0)); // sd of {1,2,3} over sqrt(3)
    const double kNormal975 = 1.959963984540054;
    for (const sweep_summary& sw : res.sweeps)
    {
        REQUIRE(sw.methods.size() == num_methods);
        for (std::size_t m = 0; m < num_methods; m++)
        {
            const method_summary& ms = sw.methods[m];
            CHECK(ms.mean_genie == 2.0);
            CHECK(ms.mean_uatf == 20.0);
            CHECK(ms.stderr_genie == Catch::Approx(want_se).margin(1e-15));
            CHECK(ms.stderr_uatf == Catch::Approx(10.0 * want_se).margin(1e-14));
            if (ms.method == combining_method::ideal_dbf)
            {
                CHECK(ms.reported_mean == 2.0);
                CHECK(ms.ci95_half_width == Catch::Approx(kNormal975 * want_se).margin(1e-14));
            }
            else
            {
                CHECK(ms.reported_mean == 20.0);
                CHECK(ms.ci95_half_width ==
                      Catch::Approx(kNormal975 * 10.0 * want_se).margin(1e-13));
            }
        }
    }

    // a single trial has no spread estimate
    const experiment_result lone = reduce_snr_trials(cfg, grid, {tables[0]});
    CHECK(lone.sweeps[0].methods[0].stderr_genie == 0.0);
    CHECK(lone.sweeps[0].methods[0].ci95_half_width == 0.0);

    CHECK_THROWS_AS(reduce_snr_trials(cfg, grid, {}), std::invalid_argument);
    std::vector<trial_table> bad = tables;
    bad[1].pop_back();
    CHECK_THROWS_AS(reduce_snr_trials(cfg, grid, bad), std::invalid_argument);
}

TEST_CASE("records flatten the summary without reordering values")
{
    scenario_config cfg = tiny_config();
    cfg.trials = 2;
    const snr_grid grid = parse_snr_grid("0:0:5");
    const std::size_t num_methods = snr_experiment_methods().size();
    std::vector<trial_table> tables(2, trial_table(1, std::vector<trial_outcome>(num_methods)));
    for (std::size_t t = 0; t < 2; t++)
        for (std::size_t m = 0; m < num_methods; m++)
        {
            tables[t][0][m].genie_se = static_cast<double>(m) + 0.5 * static_cast<double>(t);
            tables[t][0][m].uatf_se = 2.0 * static_cast<double>(m);
        }

    const experiment_result res = reduce_snr_trials(cfg, grid, tables);
    const std::vector<se_record> recs = to_records(res);
    REQUIRE(recs.size() == num_methods);
    for (std::size_t m = 0; m < num_methods; m++)
    {
        CHECK(recs[m].experiment == "se_vs_snr");
        CHECK(recs[m].sweep_value == 0.0);
        CHECK(recs[m].method == method_name(res.sweeps[0].methods[m].method));
        CHECK(recs[m].mean_se == res.sweeps[0].methods[m].reported_mean);
        CHECK(recs[m].trials == 2);
        CHECK(recs[m].ci95_half_width == res.sweeps[0].methods[m].ci95_half_width);
    }
}

TEST_CASE("method names are stable identifiers")
{
    CHECK(std::string(method_name(combining_method::ideal_dbf)) == "ideal_dbf");
    CHECK(std::string(method_name(combining_method::proposed_updated_q)) == "proposed_updated_q");
    CHECK(std::string(method_name(combining_method::proposed_fixed_q)) == "proposed_fixed_q");
    CHECK(std::string(method_name(combining_method::fixed_q_and_w)) == "fixed_q_and_w");
    CHECK(std::string(method_name(combining_method::hbf_proxy)) == "hbf_proxy");

    const std::vector<combining_method> tm = time_experiment_methods();
    REQUIRE(tm.size() == 5);
    const std::vector<combining_method> sm = snr_experiment_methods();
    REQUIRE(sm.size() == 3);
    CHECK(sm[0] == combining_method::ideal_dbf);
    CHECK(sm[1] == combining_method::proposed_fixed_q);
    CHECK(sm[2] == combining_method::hbf_proxy);
}

TEST_CASE("trial workers are pure functions of the trial index")
{
    const scenario_config cfg = tiny_config();
    const snr_grid grid = parse_snr_grid("0:10:10");

    // evaluate forward and backward; tables keyed by index must match exactly
    std::vector<trial_table> forward(3), backward(3);
    for (int t = 0; t < 3; t++)
        forward[static_cast<std::size_t>(t)] = snr_experiment_trial(cfg, grid, t);
    for (int t = 2; t >= 0; t--)
        backward[static_cast<std::size_t>(t)] = snr_experiment_trial(cfg, grid, t);

    for (std::size_t t = 0; t < 3; t++)
        for (std::size_t k = 0; k < forward[t].size(); k++)
            for (std::size_t m = 0; m < forward[t][k].size(); m++)
            {
                CHECK(forward[t][k][m].genie_se == backward[t][k][m].genie_se);
                CHECK(forward[t][k][m].uatf_se == backward[t][k][m].uatf_se);
            }

    const std::string csv_fwd = format_results_csv(to_records(reduce_snr_trials(cfg, grid, forward)));
    const std::string csv_bwd = format_results_csv(to_records(reduce_snr_trials(cfg, grid, backward)));
    CHECK(csv_fwd == csv_bwd);

    // distinct trials draw distinct channels
    CHECK(forward[0][0][0].genie_se != forward[1][0][0].genie_se);
}

TEST_CASE("worker threads do not change any reported digit")
{
    scenario_config cfg = tiny_config();
    const snr_grid grid = parse_snr_grid("0:5:5");

    cfg.threads = 1;
    const std::string serial = format_results_csv(to_records(run_snr_experiment(cfg, grid)));
    cfg.threads = 2;
    const std::string threaded = format_results_csv(to_records(run_snr_experiment(cfg, grid)));
    CHECK(serial == threaded);
}

TEST_CASE("trajectory experiment reports every method at every sweep point")
{
    const scenario_config cfg = tiny_config();
    const experiment_result res = run_time_experiment(cfg);

    CHECK(res.experiment == "se_vs_time");
    CHECK(res.trials == cfg.trials);
    const std::vector<double> sweeps = time_sweep_values(cfg);
    REQUIRE(res.sweeps.size() == sweeps.size());
    const std::vector<combining_method> methods = time_experiment_methods();
    for (std::size_t k = 0; k < res.sweeps.size(); k++)
    {
        CHECK(res.sweeps[k].sweep_value == sweeps[k]);
        REQUIRE(res.sweeps[k].methods.size() == methods.size());
        for (std::size_t m = 0; m < methods.size(); m++)
        {
            const method_summary& ms = res.sweeps[k].methods[m];
            CHECK(ms.method == methods[m]);
            CHECK(ms.ci95_half_width >= 0.0);
            CHECK(std::isfinite(ms.mean_genie));
            CHECK(std::isfinite(ms.mean_uatf));
            if (ms.method == combining_method::ideal_dbf)
                CHECK(ms.reported_mean == ms.mean_genie);
            else
                CHECK(ms.reported_mean == ms.mean_uatf);
            // the hardening bound can never beat the instantaneous-CSI rate
            CHECK(ms.mean_uatf <= ms.mean_genie + 1e-9);
        }
    }
}

TEST_CASE("SNR experiment echoes the grid")
{
    const scenario_config cfg = tiny_config();
    const snr_grid grid = parse_snr_grid("-5:5:5");
    const experiment_result res = run_snr_experiment(cfg, grid);

    CHECK(res.experiment == "se_vs_snr");
    REQUIRE(res.sweeps.size() == 3);
    for (std::size_t k = 0; k < 3; k++)
    {
        CHECK(res.sweeps[k].sweep_value == grid.values()[k]);
        REQUIRE(res.sweeps[k].methods.size() == 3);
    }
}

TEST_CASE("experiments require fading statistics within a window")
{
    scenario_config cfg = tiny_config();
    cfg.blocks_per_window = 1;
    CHECK_THROWS_AS(run_time_experiment(cfg), std::invalid_argument);
    CHECK_THROWS_AS(time_experiment_trial(cfg, 0), std::invalid_argument);
    CHECK_THROWS_AS(run_snr_experiment(cfg, parse_snr_grid("0:0:5")), std::invalid_argument);
}

TEST_CASE("built-in selftest passes")
{
    std::ostringstream out;
    CHECK(run_selftest(out) == 0);
    CHECK(out.str().find("FAIL") == std::string::npos);
    CHECK(out.str().find("pass") != std::string::npos);
}
