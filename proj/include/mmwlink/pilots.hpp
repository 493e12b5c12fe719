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

#ifndef MMWLINK_PILOTS_HPP
#define MMWLINK_PILOTS_HPP

#include <armadillo>

#include "mmwlink/rng.hpp"

namespace mmwlink
{

// Training phases within one fading block. The numeric values label noise
// substreams, so they are part of the reproducibility contract.
enum class pilot_phase : std::uint64_t
{
    uplink_full = 0,        // full channel, estimated at the BS
    downlink_precoded = 1,  // precoded channel, estimated at the UE
    uplink_effective = 2,   // channel after first-stage combining, at the BS
    downlink_effective = 3, // precoded effective channel, at the UE
};

// Pilot matrix with orthonormal rows (rows of a scaled DFT matrix), so the
// pseudo-inverse reduces to the conjugate transpose.
struct pilot_matrix
{
    arma::cx_mat entries; // num_rows x length

    int rows() const
    {
        return static_cast<int>(entries.n_rows);
    }
    int length() const
    {
        return static_cast<int>(entries.n_cols);
    }
};

// Builds the pilot matrix from the first `rows` rows of the unitary DFT
// matrix of size `length`. Requires 1 <= rows <= length.
pilot_matrix make_pilot_matrix(int rows, int length);

// Received pilot block Y = sqrt(power_scale) * M * pilots + N with
// unit-variance complex white noise (omitted when noise is null).
// M is (anything) x pilots.rows().
arma::cx_mat simulate_pilot_rx(const arma::cx_mat& propagating, const pilot_matrix& pilots,
                               double power_scale, rng_stream* noise);

// Least-squares/ML estimate from a received pilot block:
// M_hat = Y * pilots^H / sqrt(power_scale). Exact when noise is absent.
arma::cx_mat ml_estimate(const arma::cx_mat& received, const pilot_matrix& pilots,
                         double power_scale);

// Expected squared Frobenius error of ml_estimate under unit-variance noise.
double expected_estimation_mse(int estimated_rows, int pilot_rows, double power_scale);

// Phase wrappers. Each simulates the over-the-air pilot transmission through
// the true (possibly precoded/combined) channel and returns the ML estimate.
//
// Uplink phases transmit from the UE: the propagating matrix enters
// transposed and the estimate is transposed back. pilot_power is the UE
// transmit power over noise; the pilot length contributes energy on top.

// channel: num_rx x num_tx, pilots: num_rx x t_p, returns num_rx x num_tx.
arma::cx_mat estimate_uplink_full(const arma::cx_mat& channel, const pilot_matrix& pilots,
                                  double pilot_power, rng_stream* noise);

// precoded = H*F: num_rx x num_streams, pilots: num_streams x num_streams.
arma::cx_mat estimate_downlink_precoded(const arma::cx_mat& precoded, const pilot_matrix& pilots,
                                        rng_stream* noise);

// effective = Q^H*H: num_comb x num_tx, pilots: num_comb x t_p.
arma::cx_mat estimate_uplink_effective(const arma::cx_mat& effective, const pilot_matrix& pilots,
                                       double pilot_power, rng_stream* noise);

// effective_precoded = Q^H*H*F: num_comb x num_streams. The receive noise is
// passed through Q^H by the caller's physics; because the pilot matrix acts
// from the right, column correlation of the noise does not affect the
// estimator, so white noise of matching size is statistically equivalent
// whenever Q has orthonormal columns.
arma::cx_mat estimate_downlink_effective(const arma::cx_mat& effective_precoded,
                                         const pilot_matrix& pilots, rng_stream* noise);

// Physically exact variant: draws white noise at the antenna ports and
// passes it through the first stage (first_stage^H * N). Required when the
// first stage lacks orthonormal columns; coincides in distribution with the
// white-noise variant otherwise.
arma::cx_mat estimate_downlink_effective(const arma::cx_mat& effective_precoded,
                                         const pilot_matrix& pilots,
                                         const arma::cx_mat& first_stage, rng_stream* noise);

} // namespace mmwlink

#endif
