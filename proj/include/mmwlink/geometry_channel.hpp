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

#ifndef MMWLINK_GEOMETRY_CHANNEL_HPP
#define MMWLINK_GEOMETRY_CHANNEL_HPP

#include <armadillo>

#include "mmwlink/rng.hpp"

namespace mmwlink
{

// Uniform linear array, element n at position n * spacing along the array
// axis, n = 0 .. num_antennas-1. Angles are measured from broadside.
struct array_geometry
{
    int num_antennas = 1;
    double spacing_over_wavelength = 0.5;

    void validate() const;
};

// Static scattering geometry of one link: path angles and average tap powers.
// When a line-of-sight path is present it occupies row/entry 0 and its power
// is concentrated in the first delay tap.
struct cluster_set
{
    int num_clusters = 0; // scattering clusters, LOS not counted
    bool has_los = false;
    double los_power = 0.0;    // linear scale, relative to unit noise power
    arma::vec arrival_rad;     // one angle per path, LOS first if present
    arma::vec departure_rad;   // one angle per path, LOS first if present
    arma::mat tap_power;       // total_paths() x num_taps, average |gain|^2 per tap

    int total_paths() const
    {
        return num_clusters + (has_los ? 1 : 0);
    }
    int num_taps() const
    {
        return static_cast<int>(tap_power.n_cols);
    }
    void validate() const;
};

// One small-scale fading draw: complex tap gains, one row per path.
struct fading_realization
{
    arma::cx_mat taps; // total_paths x num_taps
};

// Frequency response of one fading block across all subcarriers.
struct channel_block
{
    arma::cx_cube response; // num_rx x num_tx x num_subcarriers

    int num_subcarriers() const
    {
        return static_cast<int>(response.n_slices);
    }
};

// Array response vector: entry n = exp(j 2 pi spacing sin(angle) n).
// The angle must lie strictly inside (-pi/2, pi/2); the front-back ambiguity
// of a linear array makes values outside that range ill-defined.
arma::cx_vec array_response(const array_geometry& geom, double angle_rad);

// Per-subcarrier gains of a delay-tap profile: out[v] = sum_l taps[l] *
// exp(-j 2 pi l v / num_subcarriers). Requires num_subcarriers >= taps.
arma::cx_vec taps_to_subcarrier_gains(const arma::cx_vec& taps, int num_subcarriers);

// Draws one fading realization. Scattered taps are i.i.d. CN(0, tap_power);
// a LOS path gets the deterministic gain sqrt(los_power) at tap 0. Rows are
// drawn in path order, taps in delay order (stream layout is part of the
// reproducibility contract).
fading_realization draw_fading(const cluster_set& clusters, rng_stream& rng);

// Steering matrices with one column per path, in cluster_set path order.
// first = receive side (arrival angles), second = transmit side (departure).
std::pair<arma::cx_mat, arma::cx_mat> steering_matrices(const array_geometry& rx,
                                                        const array_geometry& tx,
                                                        const cluster_set& clusters);

// Assembles the wideband frequency response as a sum of per-path rank-one
// terms: H[v] = sum_i gain_i[v] * a_rx(arrival_i) * a_tx(departure_i)^T.
// Note the unconjugated transpose on the transmit response.
channel_block assemble_channel(const array_geometry& rx, const array_geometry& tx,
                               const cluster_set& clusters, const fading_realization& fading,
                               int num_subcarriers);

} // namespace mmwlink

#endif
