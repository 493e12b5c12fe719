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

#include "mmwlink/experiments.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mmwlink/rate_metrics.hpp"

namespace mmwlink
{

namespace
{

constexpr double kNormal975 = 1.959963984540054; // 97.5% quantile of N(0,1)

void require_uatf_capable(const scenario_config& cfg)
{
    if (cfg.blocks_per_window < 2)
        throw std::invalid_argument(
            "experiment: blocks_per_window must be >= 2 (the hardening bound needs "
            "fading statistics within a window)");
}

// Window-level SE values for one (trial, sweep, method).
trial_outcome summarize_window(const scenario_config& cfg, const window_result& res)
{
    const double rho = overhead_factor(cfg.t_p, cfg.n_s, cfg.t_c);
    const int num_sc = cfg.subcarriers;
    const int num_blocks = static_cast<int>(res.blocks.size());

    double genie = 0.0;
    for (const block_record& rec : res.blocks)
        genie += average_se(rec.genie_rate, rho);
    genie /= static_cast<double>(num_blocks);

    arma::vec uatf_rate(num_sc);
    std::vector<uatf_sample> samples(num_blocks);
    for (int v = 0; v < num_sc; v++)
    {
        for (int b = 0; b < num_blocks; b++)
            samples[b] = res.blocks[b].uatf[v];
        uatf_rate(v) = se_uatf_subcarrier(estimate_uatf_statistics(samples));
    }

    trial_outcome out;
    out.genie_se = genie;
    out.uatf_se = average_se(uatf_rate, rho);
    return out;
}

struct moments
{
    double mean = 0.0;
    double stderr_mean = 0.0;
};

moments reduce_in_index_order(const std::vector<double>& x)
{
    const double n = static_cast<double>(x.size());
    double mean = 0.0;
    for (double v : x)
        mean += v;
    mean /= n;

    double ssq = 0.0;
    for (double v : x)
        ssq += (v - mean) * (v - mean);
    moments m;
    m.mean = mean;
    m.stderr_mean = (x.size() > 1) ? std::sqrt(ssq / (n * (n - 1.0))) : 0.0;
    return m;
}

experiment_result reduce_tables(const scenario_config& cfg, const std::string& name,
                                const std::vector<double>& sweep_values,
                                const std::vector<combining_method>& methods,
                                const std::vector<trial_table>& tables)
{
    if (tables.empty())
        throw std::invalid_argument("reduce: no trials");
    for (const trial_table& t : tables)
        if (t.size() != sweep_values.size())
            throw std::invalid_argument("reduce: trial table has wrong sweep count");

    experiment_result res;
    res.experiment = name;
    res.trials = static_cast<int>(tables.size());
    res.sweeps.resize(sweep_values.size());

    std::vector<double> genie(tables.size()), uatf(tables.size());
    for (std::size_t k = 0; k < sweep_values.size(); k++)
    {
        sweep_summary& sw = res.sweeps[k];
        sw.sweep_value = sweep_values[k];
        sw.methods.resize(methods.size());
        for (std::size_t m = 0; m < methods.size(); m++)
        {
            for (std::size_t t = 0; t < tables.size(); t++)
            {
                genie[t] = tables[t][k][m].genie_se;
                uatf[t] = tables[t][k][m].uatf_se;
            }
            const moments mg = reduce_in_index_order(genie);
            const moments mu = reduce_in_index_order(uatf);

            method_summary& ms = sw.methods[m];
            ms.method = methods[m];
            ms.mean_genie = mg.mean;
            ms.stderr_genie = mg.stderr_mean;
            ms.mean_uatf = mu.mean;
            ms.stderr_uatf = mu.stderr_mean;
            const bool genie_reported = (methods[m] == combining_method::ideal_dbf);
            ms.reported_mean = genie_reported ? mg.mean : mu.mean;
            ms.ci95_half_width =
                kNormal975 * (genie_reported ? mg.stderr_mean : mu.stderr_mean);
            (void)cfg;
        }
    }
    return res;
}

std::vector<trial_table> run_trials(const scenario_config& cfg,
                                    const std::function<trial_table(int)>& worker)
{
    std::vector<trial_table> tables(cfg.trials);
    unsigned num_threads = (cfg.threads > 0) ? static_cast<unsigned>(cfg.threads)
                                             : std::max(1u, std::thread::hardware_concurrency());
    num_threads = std::min<unsigned>(num_threads, static_cast<unsigned>(cfg.trials));

    if (num_threads <= 1)
    {
        for (int t = 0; t < cfg.trials; t++)
            tables[t] = worker(t);
        return tables;
    }

    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(num_threads);
    for (unsigned i = 0; i < num_threads; i++)
        pool.emplace_back(
            [&, i]()
            {
                try
                {
                    for (int t = next.fetch_add(1); t < cfg.trials; t = next.fetch_add(1))
                        tables[t] = worker(t);
                }
                catch (...)
                {
                    errors[i] = std::current_exception();
                }
            });
    for (std::thread& th : pool)
        th.join();
    for (const std::exception_ptr& e : errors)
        if (e)
            std::rethrow_exception(e);
    return tables;
}

} // namespace

std::vector<se_record> to_records(const experiment_result& result)
{
    std::vector<se_record> records;
    records.reserve(result.sweeps.size() * (result.sweeps.empty() ? 0 : result.sweeps[0].methods.size()));
    for (const sweep_summary& sw : result.sweeps)
        for (const method_summary& ms : sw.methods)
        {
            se_record r;
            r.experiment = result.experiment;
            r.sweep_value = sw.sweep_value;
            r.method = method_name(ms.method);
            r.mean_se = ms.reported_mean;
            r.trials = result.trials;
            r.ci95_half_width = ms.ci95_half_width;
            records.push_back(std::move(r));
        }
    return records;
}

std::vector<double> snr_grid::values() const
{
    if (!(step_db > 0.0))
        throw std::invalid_argument("snr_grid: step must be > 0");
    if (stop_db < start_db)
        throw std::invalid_argument("snr_grid: stop must be >= start");

    std::vector<double> v;
    const int count = static_cast<int>(std::floor((stop_db - start_db) / step_db + 0.5)) + 1;
    for (int i = 0; i < count; i++)
    {
        const double x = start_db + step_db * i;
        if (x > stop_db + 0.5 * step_db)
            break;
        v.push_back(x);
    }
    return v;
}

snr_grid parse_snr_grid(const std::string& text)
{
    snr_grid g;
    std::istringstream in(text);
    char c1 = 0, c2 = 0;
    if (!(in >> g.start_db >> c1 >> g.stop_db >> c2 >> g.step_db) || c1 != ':' || c2 != ':' ||
        !(in >> std::ws).eof())
        throw std::invalid_argument("snr grid must have the form start:stop:step, got '" + text +
                                    "'");
    g.values(); // validates ordering and step sign
    return g;
}

std::vector<combining_method> time_experiment_methods()
{
    return {combining_method::ideal_dbf, combining_method::proposed_updated_q,
            combining_method::proposed_fixed_q, combining_method::fixed_q_and_w,
            combining_method::hbf_proxy};
}

std::vector<combining_method> snr_experiment_methods()
{
    return {combining_method::ideal_dbf, combining_method::proposed_fixed_q,
            combining_method::hbf_proxy};
}

std::vector<double> time_sweep_values(const scenario_config& cfg)
{
    std::vector<double> v(cfg.time_points);
    if (cfg.time_points == 1)
    {
        v[0] = 0.0;
        return v;
    }
    for (int k = 0; k < cfg.time_points; k++)
        v[k] = cfg.time_max_s * static_cast<double>(k) / static_cast<double>(cfg.time_points - 1);
    return v;
}

trial_table time_experiment_trial(const scenario_config& cfg, int trial)
{
    cfg.validate();
    require_uatf_capable(cfg);

    const std::vector<double> sweeps = time_sweep_values(cfg);
    const std::vector<combining_method> methods = time_experiment_methods();

    trial_table table(sweeps.size(), std::vector<trial_outcome>(methods.size()));
    frozen_combiners frozen;
    bool have_frozen = false;

    for (std::size_t k = 0; k < sweeps.size(); k++)
    {
        stream_context ctx{cfg.seed, kExperimentTime, static_cast<std::uint64_t>(k),
                           static_cast<std::uint64_t>(trial)};
        rng_stream geo = ctx.geometry_rng();
        const cluster_set clusters = make_window_geometry(cfg, sweeps[k], geo);
        const std::vector<channel_block> blocks = simulate_window_channels(cfg, clusters, ctx);

        for (std::size_t m = 0; m < methods.size(); m++)
        {
            const bool is_frozen_method = (methods[m] == combining_method::fixed_q_and_w);
            const frozen_combiners* fz = (is_frozen_method && have_frozen) ? &frozen : nullptr;
            const window_result res = run_window(cfg, blocks, methods[m], ctx, fz);
            table[k][m] = summarize_window(cfg, res);
            if (is_frozen_method && !have_frozen)
            {
                frozen.first_stage = res.first_stage_final;
                frozen.second_stage = res.second_stage_final;
                have_frozen = true;
            }
        }
    }
    return table;
}

trial_table snr_experiment_trial(const scenario_config& cfg, const snr_grid& grid, int trial)
{
    cfg.validate();
    require_uatf_capable(cfg);

    const std::vector<double> snrs = grid.values();
    const std::vector<combining_method> methods = snr_experiment_methods();

    // The sweep changes only transmit powers. Geometry and fading come from
    // sweep-independent streams, so each trial sees one channel across the
    // whole grid and the per-trial SE curves vary smoothly with SNR.
    stream_context channel_ctx{cfg.seed, kExperimentSnr, 0, static_cast<std::uint64_t>(trial)};
    rng_stream geo = channel_ctx.geometry_rng();
    const cluster_set clusters = make_window_geometry(cfg, cfg.snr_time_s, geo);
    const std::vector<channel_block> blocks = simulate_window_channels(cfg, clusters, channel_ctx);

    const vec2 ue = ue_position(cfg, cfg.snr_time_s);
    const double dist = std::hypot(ue.x - cfg.bs_position.x, ue.y - cfg.bs_position.y);
    const double pl_db = pathloss_db(dist, cfg.f_c_ghz);

    trial_table table(snrs.size(), std::vector<trial_outcome>(methods.size()));
    for (std::size_t k = 0; k < snrs.size(); k++)
    {
        // Pin the LOS receive SNR P_t * beta_0 to the grid value by scaling
        // the downlink transmit power only; the UE pilot power stays fixed.
        scenario_config swept = cfg;
        swept.p_t_dbm = snrs[k] + pl_db + cfg.noise_power_dbm;

        stream_context noise_ctx{cfg.seed, kExperimentSnr, static_cast<std::uint64_t>(k),
                                 static_cast<std::uint64_t>(trial)};
        for (std::size_t m = 0; m < methods.size(); m++)
        {
            const window_result res = run_window(swept, blocks, methods[m], noise_ctx, nullptr);
            table[k][m] = summarize_window(swept, res);
        }
    }
    return table;
}

experiment_result reduce_time_trials(const scenario_config& cfg,
                                     const std::vector<trial_table>& tables)
{
    return reduce_tables(cfg, "se_vs_time", time_sweep_values(cfg), time_experiment_methods(),
                         tables);
}

experiment_result reduce_snr_trials(const scenario_config& cfg, const snr_grid& grid,
                                    const std::vector<trial_table>& tables)
{
    return reduce_tables(cfg, "se_vs_snr", grid.values(), snr_experiment_methods(), tables);
}

experiment_result run_time_experiment(const scenario_config& cfg)
{
    cfg.validate();
    require_uatf_capable(cfg);
    const std::vector<trial_table> tables =
        run_trials(cfg, [&cfg](int t) { return time_experiment_trial(cfg, t); });
    return reduce_time_trials(cfg, tables);
}

experiment_result run_snr_experiment(const scenario_config& cfg, const snr_grid& grid)
{
    cfg.validate();
    require_uatf_capable(cfg);
    const std::vector<trial_table> tables =
        run_trials(cfg, [&cfg, &grid](int t) { return snr_experiment_trial(cfg, grid, t); });
    return reduce_snr_trials(cfg, grid, tables);
}

} // namespace mmwlink
