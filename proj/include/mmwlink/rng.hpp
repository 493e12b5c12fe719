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

#ifndef MMWLINK_RNG_HPP
#define MMWLINK_RNG_HPP

#include <armadillo>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>

namespace mmwlink
{

// SplitMix64 finalizer. Used to hash (seed, label, label, ...) tuples into
// well-separated substream seeds so that every (experiment, sweep, trial,
// block, purpose) combination owns an independent random stream.
constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Chains the master seed with a list of labels. Order matters:
// derive_seed(s, {1, 2}) != derive_seed(s, {2, 1}).
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> labels)
{
    std::uint64_t h = splitmix64(seed);
    for (std::uint64_t v : labels)
        h = splitmix64(h ^ splitmix64(v));
    return h;
}

// Deterministic pseudo-random stream. Gaussian variates use an explicit
// Box-Muller transform instead of std::normal_distribution, whose algorithm
// is implementation-defined; results must be reproducible across toolchains.
class rng_stream
{
  public:
    explicit rng_stream(std::uint64_t stream_seed) : gen(stream_seed) {}

    // Uniform on [0, 1), 53-bit resolution.
    double uniform()
    {
        return static_cast<double>(gen() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0, 1], safe as a log() argument.
    double uniform_pos()
    {
        return (static_cast<double>(gen() >> 11) + 1.0) * 0x1.0p-53;
    }

    double uniform(double lo, double hi)
    {
        return lo + (hi - lo) * uniform();
    }

    // Standard normal, Box-Muller with one cached variate.
    double normal()
    {
        if (has_spare)
        {
            has_spare = false;
            return spare;
        }
        double u1 = uniform_pos();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * std::numbers::pi * u2;
        spare = r * std::sin(a);
        has_spare = true;
        return r * std::cos(a);
    }

    // Circularly-symmetric complex normal with E|x|^2 = variance.
    std::complex<double> cnormal(double variance = 1.0)
    {
        double s = std::sqrt(0.5 * variance);
        double re = normal(); // sequenced: real part first
        double im = normal();
        return {s * re, s * im};
    }

    // Column-major fill, each entry i.i.d. CN(0, variance).
    arma::cx_mat cnormal_matrix(arma::uword n_rows, arma::uword n_cols, double variance = 1.0)
    {
        arma::cx_mat m(n_rows, n_cols);
        for (arma::uword c = 0; c < n_cols; c++)
            for (arma::uword r = 0; r < n_rows; r++)
                m(r, c) = cnormal(variance);
        return m;
    }

    std::uint64_t raw()
    {
        return gen();
    }

  private:
    std::mt19937_64 gen;
    double spare = 0.0;
    bool has_spare = false;
};

} // namespace mmwlink

#endif
