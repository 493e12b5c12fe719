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

#include "mmwlink/geometry_channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mmwlink
{

void array_geometry::validate() const
{
    if (num_antennas < 1)
        throw std::invalid_argument("array_geometry: num_antennas must be >= 1");
    if (!(spacing_over_wavelength > 0.0))
        throw std::invalid_argument("array_geometry: spacing_over_wavelength must be > 0");
}

void cluster_set::validate() const
{
    const int paths = total_paths();
    if (paths < 1)
        throw std::invalid_argument("cluster_set: at least one path required");
    if (static_cast<int>(arrival_rad.n_elem) != paths ||
        static_cast<int>(departure_rad.n_elem) != paths)
        throw std::invalid_argument("cluster_set: angle vectors must have one entry per path");
    if (static_cast<int>(tap_power.n_rows) != paths || tap_power.n_cols < 1)
        throw std::invalid_argument("cluster_set: tap_power must be total_paths x num_taps");

    const double half_pi = 0.5 * std::numbers::pi;
    for (int i = 0; i < paths; i++)
    {
        if (!(arrival_rad(i) > -half_pi && arrival_rad(i) < half_pi))
            throw std::invalid_argument("cluster_set: arrival angle outside (-pi/2, pi/2)");
        if (!(departure_rad(i) > -half_pi && departure_rad(i) < half_pi))
            throw std::invalid_argument("cluster_set: departure angle outside (-pi/2, pi/2)");
    }
    if (tap_power.min() < 0.0)
        throw std::invalid_argument("cluster_set: negative tap power");
    if (has_los)
    {
        if (los_power < 0.0)
            throw std::invalid_argument("cluster_set: negative los_power");
        if (tap_power(0, 0) != los_power)
            throw std::invalid_argument("cluster_set: LOS row must carry los_power at tap 0");
        for (int l = 1; l < num_taps(); l++)
            if (tap_power(0, l) != 0.0)
                throw std::invalid_argument("cluster_set: LOS power allowed at tap 0 only");
    }
}

arma::cx_vec array_response(const array_geometry& geom, double angle_rad)
{
    geom.validate();
    const double half_pi = 0.5 * std::numbers::pi;
    if (!(angle_rad > -half_pi && angle_rad < half_pi))
        throw std::domain_error("array_response: angle outside (-pi/2, pi/2)");

    const double step = 2.0 * std::numbers::pi * geom.spacing_over_wavelength * std::sin(angle_rad);
    arma::cx_vec a(geom.num_antennas);
    for (int n = 0; n < geom.num_antennas; n++)
        a(n) = std::polar(1.0, step * static_cast<double>(n));
    return a;
}

arma::cx_vec taps_to_subcarrier_gains(const arma::cx_vec& taps, int num_subcarriers)
{
    const int num_taps = static_cast<int>(taps.n_elem);
    if (num_taps < 1)
        throw std::invalid_argument("taps_to_subcarrier_gains: empty tap vector");
    if (num_subcarriers < num_taps)
        throw std::invalid_argument("taps_to_subcarrier_gains: need num_subcarriers >= num_taps");

    // exp(-j 2 pi l v / S) only takes S distinct values; evaluate each phase
    // once so results carry no recurrence drift.
    arma::cx_vec unit(num_subcarriers);
    for (int v = 0; v < num_subcarriers; v++)
        unit(v) = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(v) /
                                      static_cast<double>(num_subcarriers));

    arma::cx_vec gains(num_subcarriers, arma::fill::zeros);
    for (int l = 0; l < num_taps; l++)
    {
        const std::complex<double> h = taps(l);
        if (h == std::complex<double>(0.0, 0.0))
            continue;
        for (int v = 0; v < num_subcarriers; v++)
            gains(v) += h * unit((static_cast<long long>(l) * v) % num_subcarriers);
    }
    return gains;
}

fading_realization draw_fading(const cluster_set& clusters, rng_stream& rng)
{
    clusters.validate();
    const int paths = clusters.total_paths();
    const int taps = clusters.num_taps();

    fading_realization out;
    out.taps.set_size(paths, taps);
    for (int i = 0; i < paths; i++)
    {
        if (clusters.has_los && i == 0)
        {
            out.taps(0, 0) = std::sqrt(clusters.los_power);
            for (int l = 1; l < taps; l++)
                out.taps(0, l) = 0.0;
            continue;
        }
        for (int l = 0; l < taps; l++)
        {
            const double p = clusters.tap_power(i, l);
            out.taps(i, l) = (p > 0.0) ? rng.cnormal(p) : std::complex<double>(0.0, 0.0);
        }
    }
    return out;
}

std::pair<arma::cx_mat, arma::cx_mat> steering_matrices(const array_geometry& rx,
                                                        const array_geometry& tx,
                                                        const cluster_set& clusters)
{
    clusters.validate();
    const int paths = clusters.total_paths();
    arma::cx_mat a_rx(rx.num_antennas, paths);
    arma::cx_mat a_tx(tx.num_antennas, paths);
    for (int i = 0; i < paths; i++)
    {
        a_rx.col(i) = array_response(rx, clusters.arrival_rad(i));
        a_tx.col(i) = array_response(tx, clusters.departure_rad(i));
    }
    return {a_rx, a_tx};
}

channel_block assemble_channel(const array_geometry& rx, const array_geometry& tx,
                               const cluster_set& clusters, const fading_realization& fading,
                               int num_subcarriers)
{
    clusters.validate();
    const int paths = clusters.total_paths();
    if (static_cast<int>(fading.taps.n_rows) != paths ||
        static_cast<int>(fading.taps.n_cols) != clusters.num_taps())
        throw std::invalid_argument("assemble_channel: fading shape does not match cluster_set");

    channel_block block;
    block.response.set_size(rx.num_antennas, tx.num_antennas, num_subcarriers);
    block.response.zeros();

    for (int i = 0; i < paths; i++)
    {
        const arma::cx_vec gains =
            taps_to_subcarrier_gains(fading.taps.row(i).st(), num_subcarriers);
        const arma::cx_vec a_rx = array_response(rx, clusters.arrival_rad(i));
        const arma::cx_vec a_tx = array_response(tx, clusters.departure_rad(i));
        const arma::cx_mat outer = a_rx * a_tx.st(); // transpose, not Hermitian
        for (int v = 0; v < num_subcarriers; v++)
            block.response.slice(v) += gains(v) * outer;
    }
    return block;
}

} // namespace mmwlink
