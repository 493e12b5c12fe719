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

#ifndef MMWLINK_BEAMFORMING_HPP
#define MMWLINK_BEAMFORMING_HPP

#include <armadillo>
#include <vector>

namespace mmwlink
{

// Rank-k SVD factors with a deterministic phase convention: for each singular
// triple, the largest-magnitude entry of the right singular vector is made
// real and nonnegative (the left vector absorbs the opposite rotation).
// Without such a convention downstream designs would depend on LAPACK's
// arbitrary per-column phases.
struct truncated_svd_result
{
    arma::cx_mat left;        // m x k
    arma::vec singular_values; // k, descending
    arma::cx_mat right;       // n x k
};

// Water-filling solution: powers[i] = max(water_level - 1/gains[i], 0),
// summing exactly to the budget.
struct power_allocation
{
    arma::vec per_stream;
    double water_level = 0.0;
};

// Digital precoder: columns are phase-aligned right singular vectors of the
// channel estimate, scaled by the square roots of the per-stream powers.
struct precoder_design
{
    arma::cx_mat matrix;    // num_tx x num_streams, squared Frobenius norm = power budget
    arma::vec stream_power; // num_streams, zeros beyond the numerical rank
    double water_level = 0.0;
};

// Leading k singular triples of m. Requires 1 <= k <= min(m.n_rows, m.n_cols).
truncated_svd_result truncated_svd(const arma::cx_mat& m, int k);

// Exact water-filling over positive channel gains (|singular value|^2 terms).
// Solved in closed form by sorting; no iteration, no tolerance.
power_allocation water_fill(const arma::vec& gains, double total_power);

// SVD precoding with water-filling over the squared singular values of the
// estimate. Singular values at or below max(dim)*eps*s_max count as zero and
// their streams get zero power.
precoder_design design_precoder(const arma::cx_mat& estimate, int num_streams,
                                double total_power);

// First-stage combining: the num_combined leading left singular vectors of
// the estimated precoded channel (num_rx x num_streams). num_combined may
// exceed the number of singular triples; the remaining columns come from the
// full unitary left factor, each phase-aligned on its own largest entry.
arma::cx_mat design_first_stage(const arma::cx_mat& precoded_estimate, int num_combined);

// Second-stage combining for later fading blocks: leading num_streams left
// singular vectors of the estimated effective precoded channel.
arma::cx_mat design_second_stage(const arma::cx_mat& effective_estimate, int num_streams);

// Second-stage combining for the first block of a window. The first stage is
// designed from the full precoded channel there, so the second stage only
// selects the strongest num_streams combined outputs: an identity block on
// top of zeros.
arma::cx_mat second_stage_first_block(int num_combined, int num_streams);

// Frequency-flat constant-modulus surrogate for the first stage, mimicking a
// fully analog (phase-shifter) front end: entry-wise phases of the mean of
// the per-subcarrier digital designs, magnitudes fixed at 1/sqrt(num_rx).
// Zero mean entries get phase 0. Columns are in general not orthonormal.
arma::cx_mat hbf_phase_proxy(const std::vector<arma::cx_mat>& first_stage_per_subcarrier);

} // namespace mmwlink

#endif
