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

#include "mmwlink/pilots.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mmwlink
{

pilot_matrix make_pilot_matrix(int rows, int length)
{
    if (rows < 1)
        throw std::invalid_argument("make_pilot_matrix: rows must be >= 1");
    if (length < rows)
        throw std::invalid_argument("make_pilot_matrix: length must be >= rows");

    pilot_matrix p;
    p.entries.set_size(rows, length);
    const double scale = 1.0 / std::sqrt(static_cast<double>(length));
    for (int k = 0; k < rows; k++)
        for (int n = 0; n < length; n++)
        {
            // phase reduced mod length to keep entries exactly unimodular
            const long long kn = static_cast<long long>(k) * n % length;
            p.entries(k, n) = scale * std::polar(1.0, -2.0 * std::numbers::pi *
                                                          static_cast<double>(kn) /
                                                          static_cast<double>(length));
        }
    return p;
}

arma::cx_mat simulate_pilot_rx(const arma::cx_mat& propagating, const pilot_matrix& pilots,
                               double power_scale, rng_stream* noise)
{
    if (propagating.n_cols != pilots.entries.n_rows)
        throw std::invalid_argument("simulate_pilot_rx: channel columns must match pilot rows");
    if (!(power_scale > 0.0))
        throw std::invalid_argument("simulate_pilot_rx: power_scale must be > 0");

    arma::cx_mat y = std::sqrt(power_scale) * (propagating * pilots.entries);
    if (noise != nullptr)
        y += noise->cnormal_matrix(y.n_rows, y.n_cols);
    return y;
}

arma::cx_mat ml_estimate(const arma::cx_mat& received, const pilot_matrix& pilots,
                         double power_scale)
{
    if (received.n_cols != pilots.entries.n_cols)
        throw std::invalid_argument("ml_estimate: received columns must match pilot length");
    if (!(power_scale > 0.0))
        throw std::invalid_argument("ml_estimate: power_scale must be > 0");

    // orthonormal rows: pinv(pilots) == pilots^H
    return received * pilots.entries.t() / std::sqrt(power_scale);
}

double expected_estimation_mse(int estimated_rows, int pilot_rows, double power_scale)
{
    if (estimated_rows < 1 || pilot_rows < 1 || !(power_scale > 0.0))
        throw std::invalid_argument("expected_estimation_mse: invalid arguments");
    return static_cast<double>(estimated_rows) * static_cast<double>(pilot_rows) / power_scale;
}

arma::cx_mat estimate_uplink_full(const arma::cx_mat& channel, const pilot_matrix& pilots,
                                  double pilot_power, rng_stream* noise)
{
    if (static_cast<int>(channel.n_rows) != pilots.rows())
        throw std::invalid_argument("estimate_uplink_full: pilot rows must match channel rows");
    if (!(pilot_power > 0.0))
        throw std::invalid_argument("estimate_uplink_full: pilot_power must be > 0");

    const double power_scale = pilot_power * pilots.length();
    const arma::cx_mat y = simulate_pilot_rx(channel.st(), pilots, power_scale, noise);
    return ml_estimate(y, pilots, power_scale).st();
}

arma::cx_mat estimate_downlink_precoded(const arma::cx_mat& precoded, const pilot_matrix& pilots,
                                        rng_stream* noise)
{
    if (static_cast<int>(precoded.n_cols) != pilots.rows())
        throw std::invalid_argument(
            "estimate_downlink_precoded: pilot rows must match stream count");

    const double power_scale = static_cast<double>(pilots.rows());
    const arma::cx_mat y = simulate_pilot_rx(precoded, pilots, power_scale, noise);
    return ml_estimate(y, pilots, power_scale);
}

arma::cx_mat estimate_uplink_effective(const arma::cx_mat& effective, const pilot_matrix& pilots,
                                       double pilot_power, rng_stream* noise)
{
    if (static_cast<int>(effective.n_rows) != pilots.rows())
        throw std::invalid_argument(
            "estimate_uplink_effective: pilot rows must match combined dimension");
    if (!(pilot_power > 0.0))
        throw std::invalid_argument("estimate_uplink_effective: pilot_power must be > 0");

    const double power_scale = pilot_power * pilots.length();
    const arma::cx_mat y = simulate_pilot_rx(effective.st(), pilots, power_scale, noise);
    return ml_estimate(y, pilots, power_scale).st();
}

arma::cx_mat estimate_downlink_effective(const arma::cx_mat& effective_precoded,
                                         const pilot_matrix& pilots, rng_stream* noise)
{
    if (static_cast<int>(effective_precoded.n_cols) != pilots.rows())
        throw std::invalid_argument(
            "estimate_downlink_effective: pilot rows must match stream count");

    const double power_scale = static_cast<double>(pilots.rows());
    const arma::cx_mat y = simulate_pilot_rx(effective_precoded, pilots, power_scale, noise);
    return ml_estimate(y, pilots, power_scale);
}

arma::cx_mat estimate_downlink_effective(const arma::cx_mat& effective_precoded,
                                         const pilot_matrix& pilots,
                                         const arma::cx_mat& first_stage, rng_stream* noise)
{
    if (static_cast<int>(effective_precoded.n_cols) != pilots.rows())
        throw std::invalid_argument(
            "estimate_downlink_effective: pilot rows must match stream count");
    if (first_stage.n_cols != effective_precoded.n_rows)
        throw std::invalid_argument(
            "estimate_downlink_effective: first stage columns must match combined dimension");

    const double power_scale = static_cast<double>(pilots.rows());
    arma::cx_mat y = simulate_pilot_rx(effective_precoded, pilots, power_scale, nullptr);
    if (noise != nullptr)
        y += first_stage.t() * noise->cnormal_matrix(first_stage.n_rows, y.n_cols);
    return ml_estimate(y, pilots, power_scale);
}

} // namespace mmwlink
