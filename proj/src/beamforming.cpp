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

#include "mmwlink/beamforming.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mmwlink
{

namespace
{

// Rotates column i of `left` (and `right`, when it has a column i) so that
// the anchor entry becomes real and nonnegative.
void align_pair_phase(arma::cx_mat& left, arma::cx_mat& right, arma::uword i)
{
    const arma::uword idx = arma::abs(right.col(i)).index_max();
    const std::complex<double> v = right(idx, i);
    const double mag = std::abs(v);
    if (mag <= 0.0)
        return;
    const std::complex<double> rot = std::conj(v / mag);
    right.col(i) *= rot;
    left.col(i) *= rot;
}

void align_single_phase(arma::cx_mat& m, arma::uword i)
{
    const arma::uword idx = arma::abs(m.col(i)).index_max();
    const std::complex<double> v = m(idx, i);
    const double mag = std::abs(v);
    if (mag <= 0.0)
        return;
    m.col(i) *= std::conj(v / mag);
}

} // namespace

truncated_svd_result truncated_svd(const arma::cx_mat& m, int k)
{
    if (m.n_elem == 0)
        throw std::invalid_argument("truncated_svd: empty matrix");
    const int min_dim = static_cast<int>(std::min(m.n_rows, m.n_cols));
    if (k < 1 || k > min_dim)
        throw std::invalid_argument("truncated_svd: k must be in [1, min(rows, cols)]");

    arma::cx_mat u, v;
    arma::vec s;
    // divide-and-conquer first; the slower standard algorithm as a fallback
    if (!arma::svd_econ(u, s, v, m) && !arma::svd_econ(u, s, v, m, "both", "std"))
        throw std::runtime_error("truncated_svd: SVD failed to converge");

    for (int i = 0; i < k; i++)
        align_pair_phase(u, v, static_cast<arma::uword>(i));

    truncated_svd_result out;
    out.left = u.cols(0, k - 1);
    out.singular_values = s.head(k);
    out.right = v.cols(0, k - 1);
    return out;
}

power_allocation water_fill(const arma::vec& gains, double total_power)
{
    const int n = static_cast<int>(gains.n_elem);
    if (n < 1)
        throw std::invalid_argument("water_fill: empty gain vector");
    if (!(total_power > 0.0))
        throw std::invalid_argument("water_fill: total_power must be > 0");
    if (!(gains.min() > 0.0))
        throw std::invalid_argument("water_fill: gains must be strictly positive");

    // Sort inverse gains ascending; the strongest channels fill first.
    arma::vec inv = 1.0 / gains;
    arma::uvec order = arma::sort_index(inv);
    arma::vec inv_sorted = inv(order);

    // Largest active set k with water level >= 1/gain of its weakest member.
    // The prefix sum is rebuilt per candidate set: updating it by subtraction
    // cancels catastrophically when the budget is many orders below the
    // inverse gains and can push powers slightly negative.
    int active = 1;
    double level = 0.0;
    for (int k = n; k >= 1; k--)
    {
        double prefix = 0.0;
        for (int i = 0; i < k; i++)
            prefix += inv_sorted(i);
        level = (total_power + prefix) / static_cast<double>(k);
        if (level >= inv_sorted(k - 1))
        {
            active = k;
            break;
        }
    }

    power_allocation out;
    out.water_level = level;
    out.per_stream.zeros(n);
    for (int k = 0; k < active; k++)
        out.per_stream(order(k)) = std::max(level - inv_sorted(k), 0.0);
    return out;
}

precoder_design design_precoder(const arma::cx_mat& estimate, int num_streams, double total_power)
{
    if (num_streams < 1 ||
        num_streams > static_cast<int>(std::min(estimate.n_rows, estimate.n_cols)))
        throw std::invalid_argument("design_precoder: invalid stream count");
    if (!(total_power > 0.0))
        throw std::invalid_argument("design_precoder: total_power must be > 0");

    const truncated_svd_result svd = truncated_svd(estimate, num_streams);
    const double s_max = svd.singular_values(0);
    if (!(s_max > 0.0))
        throw std::runtime_error("design_precoder: channel estimate is numerically zero");

    const double tol = static_cast<double>(std::max(estimate.n_rows, estimate.n_cols)) *
                       std::numeric_limits<double>::epsilon() * s_max;
    int rank = 0;
    for (int i = 0; i < num_streams; i++)
        if (svd.singular_values(i) > tol)
            rank++;

    const arma::vec gains = arma::square(svd.singular_values.head(rank));
    const power_allocation alloc = water_fill(gains, total_power);

    precoder_design out;
    out.stream_power.zeros(num_streams);
    out.stream_power.head(rank) = alloc.per_stream;
    out.water_level = alloc.water_level;
    out.matrix = svd.right * arma::diagmat(arma::sqrt(out.stream_power));
    return out;
}

arma::cx_mat design_first_stage(const arma::cx_mat& precoded_estimate, int num_combined)
{
    const int num_rx = static_cast<int>(precoded_estimate.n_rows);
    if (num_combined < 1 || num_combined > num_rx)
        throw std::invalid_argument("design_first_stage: num_combined must be in [1, num_rx]");

    arma::cx_mat u, v; // full left factor, num_rx x num_rx
    arma::vec s;
    if (!arma::svd(u, s, v, precoded_estimate) &&
        !arma::svd(u, s, v, precoded_estimate, "std"))
        throw std::runtime_error("design_first_stage: SVD failed to converge");

    const int pairs = static_cast<int>(s.n_elem);
    for (int i = 0; i < num_combined; i++)
    {
        if (i < pairs)
            align_pair_phase(u, v, static_cast<arma::uword>(i));
        else
            align_single_phase(u, static_cast<arma::uword>(i));
    }
    return u.cols(0, num_combined - 1);
}

arma::cx_mat design_second_stage(const arma::cx_mat& effective_estimate, int num_streams)
{
    return truncated_svd(effective_estimate, num_streams).left;
}

arma::cx_mat second_stage_first_block(int num_combined, int num_streams)
{
    if (num_streams < 1 || num_combined < num_streams)
        throw std::invalid_argument(
            "second_stage_first_block: need num_combined >= num_streams >= 1");
    arma::cx_mat w(num_combined, num_streams, arma::fill::zeros);
    for (int i = 0; i < num_streams; i++)
        w(i, i) = 1.0;
    return w;
}

arma::cx_mat hbf_phase_proxy(const std::vector<arma::cx_mat>& first_stage_per_subcarrier)
{
    if (first_stage_per_subcarrier.empty())
        throw std::invalid_argument("hbf_phase_proxy: no input designs");

    const arma::uword n_rows = first_stage_per_subcarrier.front().n_rows;
    const arma::uword n_cols = first_stage_per_subcarrier.front().n_cols;
    arma::cx_mat mean(n_rows, n_cols, arma::fill::zeros);
    for (const arma::cx_mat& q : first_stage_per_subcarrier)
    {
        if (q.n_rows != n_rows || q.n_cols != n_cols)
            throw std::invalid_argument("hbf_phase_proxy: inconsistent design sizes");
        mean += q;
    }
    mean /= static_cast<double>(first_stage_per_subcarrier.size());

    const double modulus = 1.0 / std::sqrt(static_cast<double>(n_rows));
    arma::cx_mat out(n_rows, n_cols);
    for (arma::uword c = 0; c < n_cols; c++)
        for (arma::uword r = 0; r < n_rows; r++)
        {
            const std::complex<double> m = mean(r, c);
            out(r, c) = (std::abs(m) > 0.0) ? std::polar(modulus, std::arg(m))
                                            : std::complex<double>(modulus, 0.0);
        }
    return out;
}

} // namespace mmwlink
