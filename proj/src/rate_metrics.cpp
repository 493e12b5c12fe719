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

#include "mmwlink/rate_metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mmwlink
{

double log2_det_hpd(const arma::cx_mat& a)
{
    if (a.n_rows != a.n_cols || a.n_rows == 0)
        throw std::invalid_argument("log2_det_hpd: matrix must be square and non-empty");

    arma::cx_mat r;
    if (!arma::chol(r, a))
        throw std::runtime_error("log2_det_hpd: matrix is not positive definite");

    double acc = 0.0;
    for (arma::uword i = 0; i < r.n_rows; i++)
        acc += std::log2(r(i, i).real());
    return 2.0 * acc;
}

double overhead_factor(int t_pilot, int num_streams, int t_coherence)
{
    if (t_pilot < 1 || num_streams < 1 || t_coherence < 1)
        throw std::invalid_argument("overhead_factor: arguments must be positive");
    if (t_pilot + num_streams >= t_coherence)
        throw std::invalid_argument(
            "overhead_factor: training must fit inside the coherence interval");
    return 1.0 - static_cast<double>(t_pilot + num_streams) / static_cast<double>(t_coherence);
}

double average_se(const arma::vec& rate_per_subcarrier, double overhead)
{
    if (rate_per_subcarrier.n_elem == 0)
        throw std::invalid_argument("average_se: empty rate vector");
    return overhead * arma::mean(rate_per_subcarrier);
}

double se_perfect_csi_subcarrier(const arma::cx_mat& channel, const arma::cx_mat& precoder,
                                 const arma::cx_mat& first_stage, const arma::cx_mat& second_stage)
{
    if (channel.n_rows != first_stage.n_rows)
        throw std::invalid_argument("se_perfect_csi_subcarrier: channel/first stage mismatch");
    if (channel.n_cols != precoder.n_rows)
        throw std::invalid_argument("se_perfect_csi_subcarrier: channel/precoder mismatch");
    if (first_stage.n_cols != second_stage.n_rows)
        throw std::invalid_argument("se_perfect_csi_subcarrier: combining stage mismatch");
    if (second_stage.n_cols != precoder.n_cols)
        throw std::invalid_argument("se_perfect_csi_subcarrier: stream count mismatch");

    const arma::cx_mat combined = first_stage * second_stage; // num_rx x num_streams

    // Pseudo-inverse from the SVD, with an explicit rank check: the receive
    // filter must have full column rank for stream separation.
    arma::cx_mat u, v;
    arma::vec s;
    if (!arma::svd_econ(u, s, v, combined))
        throw std::runtime_error("se_perfect_csi_subcarrier: SVD failed to converge");
    const double tol = static_cast<double>(std::max(combined.n_rows, combined.n_cols)) *
                       std::numeric_limits<double>::epsilon() * s.max();
    if (!(s.min() > tol))
        throw std::runtime_error("se_perfect_csi_subcarrier: combined filter is rank deficient");

    const arma::cx_mat pinv_qw = v * arma::diagmat(1.0 / s) * u.t();
    const arma::cx_mat m = pinv_qw * (channel * precoder); // num_streams x num_streams
    arma::cx_mat a = arma::eye<arma::cx_mat>(m.n_rows, m.n_rows) + m * m.t();
    a = 0.5 * (a + a.t()); // clear rounding asymmetry before Cholesky
    return log2_det_hpd(a);
}

arma::cx_mat collect_effective_channel(const arma::cx_mat& second_stage,
                                       const arma::cx_mat& effective_precoded)
{
    if (second_stage.n_rows != effective_precoded.n_rows)
        throw std::invalid_argument("collect_effective_channel: dimension mismatch");
    return second_stage.t() * effective_precoded;
}

uatf_sample make_uatf_sample(const arma::cx_mat& effective, const arma::cx_mat& first_stage,
                             const arma::cx_mat& second_stage)
{
    if (first_stage.n_cols != second_stage.n_rows)
        throw std::invalid_argument("make_uatf_sample: combining stage mismatch");
    if (effective.n_rows != second_stage.n_cols)
        throw std::invalid_argument("make_uatf_sample: effective channel row mismatch");

    const arma::cx_mat qw = first_stage * second_stage;
    uatf_sample s;
    s.effective = effective;
    s.noise_cov = qw.t() * qw;
    return s;
}

uatf_statistics estimate_uatf_statistics(const std::vector<uatf_sample>& samples)
{
    if (samples.size() < 2)
        throw std::invalid_argument("estimate_uatf_statistics: need at least 2 samples");

    const arma::uword dim = samples.front().effective.n_rows;
    for (const uatf_sample& s : samples)
        if (s.effective.n_rows != dim || s.effective.n_cols != dim || s.noise_cov.n_rows != dim ||
            s.noise_cov.n_cols != dim)
            throw std::invalid_argument("estimate_uatf_statistics: inconsistent sample sizes");

    const double n = static_cast<double>(samples.size());
    arma::cx_mat mean(dim, dim, arma::fill::zeros);
    for (const uatf_sample& s : samples)
        mean += s.effective;
    mean /= n;

    arma::cx_mat cov(dim, dim, arma::fill::zeros);
    for (const uatf_sample& s : samples)
    {
        const arma::cx_mat d = s.effective - mean;
        cov += d * d.t() + s.noise_cov;
    }
    cov /= n;

    uatf_statistics out;
    out.mean_effective = mean;
    out.noise_cov = 0.5 * (cov + cov.t());
    out.num_samples = static_cast<int>(samples.size());
    return out;
}

double se_uatf_subcarrier(const uatf_statistics& stats)
{
    const arma::uword dim = stats.mean_effective.n_rows;
    if (dim == 0 || stats.mean_effective.n_cols != dim || stats.noise_cov.n_rows != dim ||
        stats.noise_cov.n_cols != dim)
        throw std::invalid_argument("se_uatf_subcarrier: inconsistent statistics");

    arma::cx_mat c = stats.noise_cov;
    const double ridge = 1e-10 * arma::trace(c).real() / static_cast<double>(dim);

    arma::vec eigval;
    if (!arma::eig_sym(eigval, c))
        throw std::runtime_error("se_uatf_subcarrier: eigenvalue decomposition failed");
    double floor = eigval(0);
    if (floor < ridge)
    {
        c.diag() += ridge;
        floor += ridge;
    }
    if (!(floor > 0.0))
        throw std::runtime_error("se_uatf_subcarrier: noise covariance is singular");

    arma::cx_mat x;
    if (!arma::solve(x, c, stats.mean_effective, arma::solve_opts::likely_sympd))
        throw std::runtime_error("se_uatf_subcarrier: noise covariance is singular");

    arma::cx_mat a = arma::eye<arma::cx_mat>(dim, dim) + stats.mean_effective.t() * x;
    a = 0.5 * (a + a.t());
    return log2_det_hpd(a);
}

} // namespace mmwlink
