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

#ifndef MMWLINK_SCENARIO_HPP
#define MMWLINK_SCENARIO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mmwlink/geometry_channel.hpp"
#include "mmwlink/pilots.hpp"
#include "mmwlink/rate_metrics.hpp"
#include "mmwlink/rng.hpp"

namespace mmwlink
{

struct vec2
{
    double x = 0.0;
    double y = 0.0;
};

// Full simulation setup. Powers are in dBm; they are converted to linear
// scale relative to the configured noise power, so the channel coefficients
// carry the true pathloss and the noise has unit variance.
struct scenario_config
{
    int n_t = 64; // BS antennas
    int n_r = 16; // UE antennas
    int n_c = 4;  // outputs of the first combining stage
    int n_s = 3;  // spatial streams

    int subcarriers = 512;
    int taps = 6;
    double f_c_ghz = 28.0;

    double p_t_dbm = 30.0;          // BS transmit power per subcarrier
    double p_r_dbm = 23.0;          // UE pilot transmit power
    double noise_power_dbm = -87.0; // receiver noise power

    int t_p = 0; // uplink pilot length; 0 means "use n_r"
    int t_c = 190;
    int blocks_per_window = 10; // fading blocks sharing one first-stage design

    double speed_mps = 5.0;
    vec2 bs_position{0.0, 0.0};
    vec2 ue_start{20.0, 0.0};

    int n_cl = 3; // scattering clusters (LOS path extra)
    bool has_los = true;
    double nlos_relative_power = 0.1; // cluster power relative to the LOS path
    double tap_decay = 2.0;           // exponential delay profile constant, in taps

    int trials = 200;
    std::uint64_t seed = 1;

    double time_max_s = 4.0; // trajectory sweep: last time point
    int time_points = 9;
    double snr_time_s = 3.0; // trajectory position used by the SNR sweep

    bool pilot_noise = true; // disable for calibration runs
    int threads = 1;         // 0 = one per hardware thread

    void resolve_defaults(); // fills t_p from n_r
    void validate() const;   // throws std::invalid_argument on bad combinations

    double transmit_power_linear() const; // p_t over noise
    double pilot_power_linear() const;    // p_r over noise
};

// 3GPP UMa line-of-sight pathloss (dB), distance in meters, carrier in GHz.
// No shadow fading term.
double pathloss_db(double distance_m, double f_c_ghz);

// UE position after t seconds: start shifted along +y by speed * t.
vec2 ue_position(const scenario_config& cfg, double time_s);

// Departure (at the BS) and arrival (at the UE) angles toward a scatterer or
// the other terminal. Both arrays are parallel to the y-axis and face each
// other, so every valid angle lies strictly inside (-pi/2, pi/2); geometry
// behind either array raises std::domain_error.
std::pair<double, double> angles_from_geometry(const vec2& bs, const vec2& ue, const vec2& point);
std::pair<double, double> los_angles(const vec2& bs, const vec2& ue);

// Uniform cluster positions in the BS-UE bounding rectangle inflated by 10 m
// on every side, redrawn until they fall in the open strip between the two
// array planes (rejection keeps angles well defined).
std::vector<vec2> place_clusters(const vec2& bs, const vec2& ue, int count, rng_stream& rng);

// Large-scale geometry of one beam-coherence window: LOS path at the exact
// BS-UE angles with pathloss power, clusters at drawn positions with
// relative power nlos_relative_power and an exponential delay profile.
cluster_set make_window_geometry(const scenario_config& cfg, double time_s, rng_stream& rng);

// Addressing scheme for random substreams. Every (seed, experiment, sweep,
// trial) tuple owns independent geometry, fading and noise streams; the
// derivation does not involve the combining method, so different methods see
// identical channels and pilot noise (common random numbers).
struct stream_context
{
    std::uint64_t seed = 0;
    std::uint64_t experiment = 0;
    std::uint64_t sweep = 0;
    std::uint64_t trial = 0;

    rng_stream geometry_rng() const;
    rng_stream fading_rng(int block) const;
    rng_stream noise_rng(int block, pilot_phase phase) const;
};

enum class combining_method
{
    ideal_dbf,          // perfect CSI everywhere, per-block redesign
    proposed_updated_q, // full-channel training and first-stage redesign per block
    proposed_fixed_q,   // first stage designed once per window, then effective training
    fixed_q_and_w,      // both stages frozen from the first window
    hbf_proxy,          // frequency-flat constant-modulus first stage
};

const char* method_name(combining_method m);

// Draws the small-scale fading and assembles the frequency response of every
// block in one window (the per-block fading streams come from ctx).
std::vector<channel_block> simulate_window_channels(const scenario_config& cfg,
                                                    const cluster_set& clusters,
                                                    const stream_context& ctx);

// Per-subcarrier combiners carried across windows by the frozen method.
struct frozen_combiners
{
    std::vector<arma::cx_mat> first_stage;
    std::vector<arma::cx_mat> second_stage;
};

struct block_record
{
    arma::vec genie_rate;          // per subcarrier, bits/symbol, before overhead
    std::vector<uatf_sample> uatf; // per subcarrier
    bool first_stage_updated = false;
    bool second_stage_updated = false;
};

struct window_result
{
    std::vector<block_record> blocks;
    std::vector<arma::cx_mat> first_stage_final;  // per subcarrier, end of window
    std::vector<arma::cx_mat> second_stage_final; // per subcarrier, end of window
};

// Runs training, precoding/combining design and rate collection over one
// window of fading blocks. `frozen` is only consulted by fixed_q_and_w: when
// non-null both stages are loaded from it instead of being designed in the
// first block. Pilot noise follows cfg.pilot_noise; the true channels in
// `blocks` are used for transmission, estimates only steer the designs.
window_result run_window(const scenario_config& cfg, const std::vector<channel_block>& blocks,
                         combining_method method, const stream_context& ctx,
                         const frozen_combiners* frozen);

} // namespace mmwlink

#endif
