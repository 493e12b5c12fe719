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
#include <complex>
#include <stdexcept>

#include "mmwlink/pilots.hpp"
#include "oracles.hpp"

using namespace mmwlink;

TEST_CASE("square pilot matrix is unitary")
{
    const pilot_matrix p = make_pilot_matrix(4, 4);
    const arma::cx_mat eye = arma::eye<arma::cx_mat>(4, 4);
    CHECK(arma::abs(p.entries * p.entries.t() - eye).max() < 1e-12);
    CHECK(arma::abs(p.entries.t() * p.entries - eye).max() < 1e-12);
}

TEST_CASE("wide pilot matrices have orthonormal rows")
{
    for (int rows = 1; rows <= 4; rows++)
    {
        const pilot_matrix p = make_pilot_matrix(rows, 4);
        REQUIRE(p.rows() == rows);
        REQUIRE(p.length() == 4);
        const arma::cx_mat gram = p.entries * p.entries.t();
        CHECK(arma::abs(gram - arma::eye<arma::cx_mat>(rows, rows)).max() < 1e-12);
    }
}

TEST_CASE("pilot pseudo-inverse reduces to the conjugate transpose")
{
    const pilot_matrix p = make_pilot_matrix(3, 8);
    const arma::cx_mat pinv = arma::pinv(p.entries);
    CHECK(arma::abs(pinv - p.entries.t()).max() < 1e-10);
}

TEST_CASE("pilot construction rejects bad shapes")
{
    CHECK_THROWS_AS(make_pilot_matrix(0, 4), std::invalid_argument);
    CHECK_THROWS_AS(make_pilot_matrix(5, 4), std::invalid_argument);
}

TEST_CASE("noiseless scalar pilot pass-through")
{
    const std::complex<double> h(0.3, -0.8);
    arma::cx_mat m(1, 1);
    m(0, 0) = h;
    const pilot_matrix p = make_pilot_matrix(1, 1);
    const arma::cx_mat y = simulate_pilot_rx(m, p, 9.0, nullptr);
    REQUIRE(y.n_rows == 1);
    REQUIRE(y.n_cols == 1);
    CHECK(std::abs(y(0, 0) - 3.0 * h * p.entries(0, 0)) < 1e-14);
}

TEST_CASE("zero input leaves pure unit-variance noise")
{
    const pilot_matrix p = make_pilot_matrix(4, 8);
    auto rng = oracles::test_rng(60);
    double power = 0.0;
    int entries = 0;
    for (int k = 0; k < 1600; k++) // 1600 * 64 > 1e5 noise entries
    {
        const arma::cx_mat y =
            simulate_pilot_rx(arma::zeros<arma::cx_mat>(8, 4), p, 5.0, &rng);
        power += arma::accu(arma::square(arma::abs(y)));
        entries += static_cast<int>(y.n_elem);
    }
    CHECK(std::abs(power / entries - 1.0) < 0.02);
}

TEST_CASE("uplink pilot energy scales with power times length")
{
    // The received block must equal sqrt(pilot_power * t_p) * H^T * pilots:
    // pilot energy grows with the training length, not just the power.
    const arma::cx_mat h = oracles::random_cx_mat(4, 6, 61);
    const pilot_matrix p = make_pilot_matrix(4, 8);
    const double pilot_power = 2.5;

    const arma::cx_mat y = simulate_pilot_rx(h.st(), p, pilot_power * 8.0, nullptr);
    const arma::cx_mat want = std::sqrt(pilot_power * 8.0) * h.st() * p.entries;
    CHECK(oracles::rel_err(y, want) < 1e-14);

    const arma::cx_mat est = estimate_uplink_full(h, p, pilot_power, nullptr);
    CHECK(oracles::rel_err(est, h) < 1e-12);
}

TEST_CASE("ml estimate matches the generic pseudo-inverse solve")
{
    const pilot_matrix p = make_pilot_matrix(3, 8);
    const arma::cx_mat y = oracles::random_cx_mat(5, 8, 62);
    const double power_scale = 4.0;
    const arma::cx_mat got = ml_estimate(y, p, power_scale);
    const arma::cx_mat want = y * arma::pinv(p.entries) / std::sqrt(power_scale);
    CHECK(oracles::rel_err(got, want) < 1e-10);
}

TEST_CASE("all four phases are exact without noise")
{
    const int n_r = 4, n_t = 8, n_c = 3, n_s = 2, t_p = 6;
    const arma::cx_mat h = oracles::random_cx_mat(n_r, n_t, 63);
    const arma::cx_mat f = oracles::random_cx_mat(n_t, n_s, 64);
    const arma::cx_mat q = arma::orth(oracles::random_cx_mat(n_r, n_c, 65));

    const pilot_matrix up = make_pilot_matrix(n_r, t_p);
    const pilot_matrix up_eff = make_pilot_matrix(n_c, t_p);
    const pilot_matrix down = make_pilot_matrix(n_s, n_s);

    CHECK(oracles::rel_err(estimate_uplink_full(h, up, 2.0, nullptr), h) < 1e-10);
    CHECK(oracles::rel_err(estimate_downlink_precoded(h * f, down, nullptr), h * f) < 1e-10);

    const arma::cx_mat g = q.t() * h;
    CHECK(oracles::rel_err(estimate_uplink_effective(g, up_eff, 2.0, nullptr), g) < 1e-10);
    CHECK(oracles::rel_err(estimate_downlink_effective(g * f, down, nullptr), g * f) < 1e-10);
    CHECK(oracles::rel_err(estimate_downlink_effective(g * f, down, q, nullptr), g * f) < 1e-10);
}

TEST_CASE("selection-matrix first stage returns the selected channel rows")
{
    const int n_r = 5, n_t = 7, n_c = 3;
    const arma::cx_mat h = oracles::random_cx_mat(n_r, n_t, 66);
    arma::cx_mat q(n_r, n_c, arma::fill::zeros);
    for (int i = 0; i < n_c; i++)
        q(i, i) = 1.0;
    const arma::cx_mat g = q.t() * h;
    const pilot_matrix p = make_pilot_matrix(n_c, 6);
    const arma::cx_mat est = estimate_uplink_effective(g, p, 1.0, nullptr);
    CHECK(oracles::rel_err(est, h.rows(0, n_c - 1)) < 1e-10);
}

TEST_CASE("estimation error moments match the closed form")
{
    // MSE = (estimated rows) * (pilot rows) / power_scale; the empirical mean
    // over 1e4 trials must land within a few MC standard errors, and the mean
    // error itself must vanish (unbiasedness).
    const int n_r = 4, n_t = 8, t_p = 6;
    const double pilot_power = 2.0;
    const arma::cx_mat h = oracles::random_cx_mat(n_r, n_t, 70);
    const pilot_matrix p = make_pilot_matrix(n_r, t_p);

    auto rng = oracles::test_rng(71);
    const int trials = 10000;
    std::vector<double> sq(trials);
    arma::cx_mat err_sum(n_r, n_t, arma::fill::zeros);
    for (int k = 0; k < trials; k++)
    {
        const arma::cx_mat err = estimate_uplink_full(h, p, pilot_power, &rng) - h;
        sq[static_cast<std::size_t>(k)] = std::pow(arma::norm(err, "fro"), 2);
        err_sum += err;
    }

    const double want = expected_estimation_mse(n_t, n_r, pilot_power * t_p);
    CHECK(want == 4.0 * 8.0 / (pilot_power * 6.0));
    CHECK(std::abs(oracles::mean_of(sq) - want) / want < 0.05);

    // per-entry standard error of the mean estimate
    const double entry_var = want / (n_r * n_t);
    const double se = std::sqrt(entry_var * n_r * n_t / trials);
    CHECK(arma::norm(err_sum / trials, "fro") < 5.0 * se);
}

TEST_CASE("estimation error halves when pilot power doubles")
{
    const int n_r = 4, n_t = 6, t_p = 5;
    const arma::cx_mat h = oracles::random_cx_mat(n_r, n_t, 72);
    const pilot_matrix p = make_pilot_matrix(n_r, t_p);

    auto measure = [&](double pilot_power, std::uint64_t label)
    {
        auto rng = oracles::test_rng(label);
        double acc = 0.0;
        const int trials = 10000;
        for (int k = 0; k < trials; k++)
        {
            const arma::cx_mat err = estimate_uplink_full(h, p, pilot_power, &rng) - h;
            acc += std::pow(arma::norm(err, "fro"), 2);
        }
        return acc / trials;
    };

    const double lo = measure(1.0, 73);
    const double hi = measure(2.0, 74);
    CHECK(std::abs(hi / lo - 0.5) < 0.05 * 0.5);
}

TEST_CASE("white and first-stage-filtered noise give the same error statistics")
{
    // With an orthonormal first stage, noise filtered through Q^H stays
    // white, so both estimator variants must show the same MSE, equal to the
    // combined output count (power_scale cancels the pilot rows).
    const int n_r = 6, n_c = 3, n_s = 2;
    const arma::cx_mat q = arma::orth(oracles::random_cx_mat(n_r, n_c, 80));
    const arma::cx_mat d = oracles::random_cx_mat(n_c, n_s, 81);
    const pilot_matrix p = make_pilot_matrix(n_s, n_s);

    auto rng_white = oracles::test_rng(82);
    auto rng_phys = oracles::test_rng(83);
    const int trials = 10000;
    double mse_white = 0.0, mse_phys = 0.0;
    for (int k = 0; k < trials; k++)
    {
        const arma::cx_mat e_white = estimate_downlink_effective(d, p, &rng_white) - d;
        const arma::cx_mat e_phys = estimate_downlink_effective(d, p, q, &rng_phys) - d;
        mse_white += std::pow(arma::norm(e_white, "fro"), 2) / trials;
        mse_phys += std::pow(arma::norm(e_phys, "fro"), 2) / trials;
    }

    const double want = expected_estimation_mse(n_c, n_s, static_cast<double>(n_s));
    CHECK(want == static_cast<double>(n_c));
    CHECK(std::abs(mse_white - want) / want < 0.05);
    CHECK(std::abs(mse_phys - want) / want < 0.05);
    CHECK(std::abs(mse_white - mse_phys) / want < 0.05);
}

TEST_CASE("estimators reject mismatched shapes")
{
    const pilot_matrix p = make_pilot_matrix(3, 6);
    const arma::cx_mat wrong = oracles::random_cx_mat(5, 4, 90);
    CHECK_THROWS_AS(simulate_pilot_rx(wrong, p, 1.0, nullptr), std::invalid_argument);
    CHECK_THROWS_AS(ml_estimate(wrong, p, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(estimate_uplink_full(oracles::random_cx_mat(4, 8, 91), p, 1.0, nullptr),
                    std::invalid_argument);
}
