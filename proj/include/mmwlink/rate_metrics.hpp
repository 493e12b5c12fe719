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

#ifndef MMWLINK_RATE_METRICS_HPP
#define MMWLINK_RATE_METRICS_HPP

#include <armadillo>
#include <vector>

namespace mmwlink
{

// One observation of the end-to-end effective channel on a subcarrier,
// together with the covariance of the combined receiver noise for that
// fading block. Feeds the hardening-based (use-and-then-forget) SE bound.
struct uatf_sample
{
    arma::cx_mat effective; // num_streams x num_streams, W^H (Q^H H F)
    arma::cx_mat noise_cov; // num_streams x num_streams, (QW)^H (QW)
};

struct uatf_statistics
{
    arma::cx_mat mean_effective;  // sample mean of `effective`
    arma::cx_mat noise_cov;       // fluctuation covariance + mean noise covariance
    int num_samples = 0;
};

// log2(det(a)) for a Hermitian positive definite matrix, via Cholesky.
// Throws std::runtime_error when a is not positive definite.
double log2_det_hpd(const arma::cx_mat& a);

// Pre-log factor 1 - (t_pilot + num_streams) / t_coherence accounting for
// the channel uses spent on training in each coherence interval.
double overhead_factor(int t_pilot, int num_streams, int t_coherence);

// rho / S * sum of per-subcarrier rates.
double average_se(const arma::vec& rate_per_subcarrier, double overhead);

// Achievable rate on one subcarrier with perfect CSI at both ends:
// log2 det(I + (QW)^+ H F F^H H^H ((QW)^+)^H). The combined receive filter
// Q*W must have full column rank; a rank-deficient filter makes the
// zero-forcing inverse meaningless and raises std::runtime_error.
double se_perfect_csi_subcarrier(const arma::cx_mat& channel, const arma::cx_mat& precoder,
                                 const arma::cx_mat& first_stage, const arma::cx_mat& second_stage);

// Effective stream-space channel seen after both combining stages:
// W^H * effective_precoded, with effective_precoded = Q^H H F.
arma::cx_mat collect_effective_channel(const arma::cx_mat& second_stage,
                                       const arma::cx_mat& effective_precoded);

// Packs one block's observation. The receiver noise passes through both
// combining stages, so its covariance is (QW)^H (QW); this equals W^H W for
// first stages with orthonormal columns but not for the constant-modulus
// surrogate.
uatf_sample make_uatf_sample(const arma::cx_mat& effective, const arma::cx_mat& first_stage,
                             const arma::cx_mat& second_stage);

// Sample statistics over fading blocks: mean effective channel, and the
// covariance of everything the hardening bound treats as noise (channel
// fluctuation around the mean, averaged with a 1/n convention, plus the mean
// combined noise covariance). Requires at least 2 samples.
uatf_statistics estimate_uatf_statistics(const std::vector<uatf_sample>& samples);

// Hardening lower bound on one subcarrier: log2 det(I + Ebar^H C^-1 Ebar).
// A tiny diagonal ridge (1e-10 * trace(C)/dim) is added when C is close to
// singular.
double se_uatf_subcarrier(const uatf_statistics& stats);

} // namespace mmwlink

#endif
