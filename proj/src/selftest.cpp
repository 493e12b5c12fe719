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

#include "mmwlink/selftest.hpp"

#include <cmath>
#include <numbers>

#include "mmwlink/beamforming.hpp"
#include "mmwlink/config_io.hpp"
#include "mmwlink/experiments.hpp"
#include "mmwlink/geometry_channel.hpp"
#include "mmwlink/pilots.hpp"
#include "mmwlink/rate_metrics.hpp"
#include "mmwlink/scenario.hpp"

namespace mmwlink
{

namespace
{

cluster_set random_clusters(int num_clusters, int taps, rng_stream& rng)
{
    cluster_set cs;
    cs.num_clusters = num_clusters;
    cs.has_los = true;
    cs.los_power = 0.5 + rng.uniform();
    const int paths = cs.total_paths();
    cs.arrival_rad.set_size(paths);
    cs.departure_rad.set_size(paths);
    cs.tap_power.zeros(paths, taps);
    cs.tap_power(0, 0) = cs.los_power;
    for (int i = 0; i < paths; i++)
    {
        cs.arrival_rad(i) = rng.uniform(-1.2, 1.2);
        cs.departure_rad(i) = rng.uniform(-1.2, 1.2);
        if (i > 0)
            for (int l = 0; l < taps; l++)
                cs.tap_power(i, l) = 0.05 + rng.uniform();
    }
    return cs;
}

// Reference construction of the same frequency response: steering-matrix
// product with per-subcarrier diagonal gains, gains from the plain
// double-loop Fourier sum.
arma::cx_cube product_form_channel(const array_geometry& rx, const array_geometry& tx,
                                   const cluster_set& cs, const fading_realization& fading,
                                   int num_sc)
{
    const int paths = cs.total_paths();
    const auto [a_rx, a_tx] = steering_matrices(rx, tx, cs);

    arma::cx_mat gains(paths, num_sc, arma::fill::zeros);
    for (int i = 0; i < paths; i++)
        for (int v = 0; v < num_sc; v++)
            for (int l = 0; l < cs.num_taps(); l++)
                gains(i, v) += fading.taps(i, l) *
                               std::polar(1.0, -2.0 * std::numbers::pi * l * v / num_sc);

    arma::cx_cube h(rx.num_antennas, tx.num_antennas, num_sc);
    for (int v = 0; v < num_sc; v++)
        h.slice(v) = a_rx * arma::diagmat(gains.col(v)) * a_tx.st();
    return h;
}

bool check_channel_product_form()
{
    rng_stream rng(derive_seed(90210, {1}));
    const array_geometry rx{4, 0.5};
    const array_geometry tx{8, 0.5};
    double worst = 0.0;
    for (int rep = 0; rep < 20; rep++)
    {
        const cluster_set cs = random_clusters(3, 4, rng);
        const fading_realization fading = draw_fading(cs, rng);
        const channel_block built = assemble_channel(rx, tx, cs, fading, 16);
        const arma::cx_cube ref = product_form_channel(rx, tx, cs, fading, 16);
        const double rel = std::sqrt(arma::accu(arma::square(arma::abs(built.response - ref)))) /
                           std::sqrt(arma::accu(arma::square(arma::abs(ref))));
        worst = std::max(worst, rel);
    }
    return worst < 1e-10;
}

bool check_estimators_noiseless()
{
    rng_stream rng(derive_seed(90210, {2}));
    const int n_t = 8, n_r = 4, n_c = 3, n_s = 2, t_p = 5;
    const arma::cx_mat h = rng.cnormal_matrix(n_r, n_t);
    arma::cx_mat q, r;
    arma::qr_econ(q, r, rng.cnormal_matrix(n_r, n_c));
    const arma::cx_mat f = rng.cnormal_matrix(n_t, n_s);

    const pilot_matrix phi_full = make_pilot_matrix(n_r, t_p);
    const pilot_matrix phi_eff = make_pilot_matrix(n_c, t_p);
    const pilot_matrix phi_down = make_pilot_matrix(n_s, n_s);

    const arma::cx_mat g = q.t() * h;
    const arma::cx_mat b = h * f;
    const arma::cx_mat d = g * f;

    auto rel = [](const arma::cx_mat& est, const arma::cx_mat& truth)
    { return arma::norm(est - truth, "fro") / arma::norm(truth, "fro"); };

    double worst = rel(estimate_uplink_full(h, phi_full, 2.0, nullptr), h);
    worst = std::max(worst, rel(estimate_downlink_precoded(b, phi_down, nullptr), b));
    worst = std::max(worst, rel(estimate_uplink_effective(g, phi_eff, 2.0, nullptr), g));
    worst = std::max(worst, rel(estimate_downlink_effective(d, phi_down, nullptr), d));
    worst = std::max(worst, rel(estimate_downlink_effective(d, phi_down, q, nullptr), d));
    return worst < 1e-10;
}

arma::vec bisection_water_fill(const arma::vec& gains, double budget)
{
    const arma::vec inv = 1.0 / gains;
    auto fill = [&](double level)
    {
        double tot = 0.0;
        for (double i : inv)
            tot += std::max(level - i, 0.0);
        return tot;
    };
    double lo = inv.min(); // fill(lo) = 0 <= budget
    double hi = inv.max() + budget;
    for (int it = 0; it < 200; it++)
    {
        const double mid = 0.5 * (lo + hi);
        (fill(mid) < budget ? lo : hi) = mid;
    }
    arma::vec p(inv.n_elem);
    for (arma::uword i = 0; i < inv.n_elem; i++)
        p(i) = std::max(0.5 * (lo + hi) - inv(i), 0.0);
    return p;
}

bool check_water_filling()
{
    rng_stream rng(derive_seed(90210, {3}));
    double worst = 0.0;
    for (int rep = 0; rep < 200; rep++)
    {
        const int n = 1 + rep % 8;
        arma::vec gains(n);
        for (int i = 0; i < n; i++)
            gains(i) = 0.05 + 10.0 * rng.uniform_pos();
        const double budget = 0.5 + 4.0 * rng.uniform();
        const power_allocation got = water_fill(gains, budget);
        const arma::vec ref = bisection_water_fill(gains, budget);
        worst = std::max(worst, arma::abs(got.per_stream - ref).max());
        worst = std::max(worst, std::abs(arma::sum(got.per_stream) - budget));
    }
    return worst < 1e-6;
}

bool check_lossless_compression()
{
    // with as many combined outputs as receive antennas and no pilot noise,
    // the two-stage receiver must reach the direct SVD water-filling rate
    scenario_config cfg;
    cfg.n_t = 8;
    cfg.n_r = 4;
    cfg.n_c = 4;
    cfg.n_s = 2;
    cfg.subcarriers = 8;
    cfg.taps = 3;
    cfg.t_p = 4;
    cfg.t_c = 50;
    cfg.blocks_per_window = 2;
    cfg.pilot_noise = false;
    cfg.trials = 1;
    cfg.resolve_defaults();

    double worst = 0.0;
    for (int rep = 0; rep < 3; rep++)
    {
        stream_context ctx{77, 0, 0, static_cast<std::uint64_t>(rep)};
        rng_stream geo = ctx.geometry_rng();
        const cluster_set cs = make_window_geometry(cfg, 1.0, geo);
        const auto blocks = simulate_window_channels(cfg, cs, ctx);
        const window_result res =
            run_window(cfg, blocks, combining_method::proposed_fixed_q, ctx, nullptr);

        for (std::size_t b = 0; b < blocks.size(); b++)
            for (int v = 0; v < cfg.subcarriers; v++)
            {
                arma::vec s = arma::svd(blocks[b].response.slice(v));
                const arma::vec p =
                    bisection_water_fill(arma::square(s.head(cfg.n_s)), cfg.transmit_power_linear());
                double ref = 0.0;
                for (int i = 0; i < cfg.n_s; i++)
                    ref += std::log2(1.0 + s(i) * s(i) * p(i));
                worst = std::max(worst,
                                 std::abs(res.blocks[b].genie_rate(v) - ref) / std::abs(ref));
            }
    }
    return worst < 1e-6;
}

bool check_determinism()
{
    scenario_config cfg;
    cfg.n_t = 4;
    cfg.n_r = 2;
    cfg.n_c = 2;
    cfg.n_s = 1;
    cfg.subcarriers = 4;
    cfg.taps = 2;
    cfg.t_p = 2;
    cfg.t_c = 20;
    cfg.blocks_per_window = 2;
    cfg.trials = 3;
    cfg.time_points = 3;
    cfg.time_max_s = 2.0;
    cfg.seed = 7;
    cfg.resolve_defaults();

    const std::string a = format_results_csv(to_records(run_time_experiment(cfg)));
    const std::string b = format_results_csv(to_records(run_time_experiment(cfg)));
    return !a.empty() && a == b;
}

struct named_check
{
    const char* name;
    bool (*fn)();
};

} // namespace

int run_selftest(std::ostream& out)
{
    const named_check checks[] = {
        {"channel_product_form", check_channel_product_form},
        {"estimators_noiseless", check_estimators_noiseless},
        {"water_filling_vs_bisection", check_water_filling},
        {"lossless_compression", check_lossless_compression},
        {"determinism", check_determinism},
    };

    int failures = 0;
    for (const named_check& c : checks)
    {
        bool ok = false;
        try
        {
            ok = c.fn();
        }
        catch (const std::exception& e)
        {
            out << "selftest " << c.name << ": FAIL (" << e.what() << ")\n";
            failures++;
            continue;
        }
        out << "selftest " << c.name << ": " << (ok ? "pass" : "FAIL") << "\n";
        if (!ok)
            failures++;
    }
    return failures;
}

} // namespace mmwlink
