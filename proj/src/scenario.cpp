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

#include "mmwlink/scenario.hpp"

#include <cmath>
#include <stdexcept>

#include "mmwlink/beamforming.hpp"

namespace mmwlink
{

namespace
{

constexpr double kElementSpacing = 0.5; // in wavelengths, both arrays

// substream purpose labels (reproducibility contract)
constexpr std::uint64_t kPurposeGeometry = 1;
constexpr std::uint64_t kPurposeFading = 2;
constexpr std::uint64_t kPurposeNoise = 3;

double dbm_delta_to_linear(double dbm_above_noise)
{
    return std::pow(10.0, dbm_above_noise / 10.0);
}

// Signed broadside angle of `p` as seen from an array at `origin` whose
// elements lie on a vertical line and whose boresight points along
// sign * (+x). Throws for points on or behind the array plane.
double boresight_angle(const vec2& origin, const vec2& p, double sign)
{
    const double dx = p.x - origin.x;
    const double dy = p.y - origin.y;
    const double r = std::hypot(dx, dy);
    if (!(r > 1e-9))
        throw std::domain_error("boresight_angle: coincident points");
    if (!(sign * dx > 0.0))
        throw std::domain_error("boresight_angle: point on or behind the array plane");
    return std::asin(dy / r);
}

double array_facing_sign(const vec2& bs, const vec2& ue)
{
    return (ue.x >= bs.x) ? 1.0 : -1.0;
}

} // namespace

void scenario_config::resolve_defaults()
{
    if (t_p <= 0)
        t_p = n_r;
}

void scenario_config::validate() const
{
    auto fail = [](const std::string& msg) { throw std::invalid_argument("scenario_config: " + msg); };

    if (n_t < 1 || n_r < 1)
        fail("antenna counts must be >= 1");
    if (n_s < 1 || n_s > n_c || n_c > n_r)
        fail("stream/combining dimensions must satisfy 1 <= n_s <= n_c <= n_r");
    if (subcarriers < 1)
        fail("subcarriers must be >= 1");
    if (taps < 1 || taps > subcarriers)
        fail("taps must satisfy 1 <= taps <= subcarriers");
    if (!(f_c_ghz > 0.0))
        fail("f_c_ghz must be > 0");
    if (t_p < n_r)
        fail("t_p must be >= n_r (uplink pilots need orthonormal rows)");
    if (t_p + n_s >= t_c)
        fail("t_c must exceed t_p + n_s (training must fit in the coherence interval)");
    if (blocks_per_window < 1)
        fail("blocks_per_window must be >= 1");
    if (!(speed_mps >= 0.0))
        fail("speed_mps must be >= 0");
    if (n_cl < 0)
        fail("n_cl must be >= 0");
    if (n_cl == 0 && !has_los)
        fail("channel needs at least one path (n_cl > 0 or has_los)");
    if (!(nlos_relative_power >= 0.0))
        fail("nlos_relative_power must be >= 0");
    if (!(tap_decay > 0.0))
        fail("tap_decay must be > 0");
    if (trials < 1)
        fail("trials must be >= 1");
    if (time_points < 1)
        fail("time_points must be >= 1");
    if (!(time_max_s >= 0.0))
        fail("time_max_s must be >= 0");
    if (!(snr_time_s >= 0.0))
        fail("snr_time_s must be >= 0");
    if (threads < 0)
        fail("threads must be >= 0");
    if (ue_start.x == bs_position.x)
        fail("ue_start_x must differ from bs_x (arrays are parallel to the y-axis)");
}

double scenario_config::transmit_power_linear() const
{
    return dbm_delta_to_linear(p_t_dbm - noise_power_dbm);
}

double scenario_config::pilot_power_linear() const
{
    return dbm_delta_to_linear(p_r_dbm - noise_power_dbm);
}

double pathloss_db(double distance_m, double f_c_ghz)
{
    if (!(distance_m > 0.0) || !(f_c_ghz > 0.0))
        throw std::domain_error("pathloss_db: distance and carrier frequency must be > 0");
    return 28.0 + 22.0 * std::log10(distance_m) + 20.0 * std::log10(f_c_ghz);
}

vec2 ue_position(const scenario_config& cfg, double time_s)
{
    return {cfg.ue_start.x, cfg.ue_start.y + cfg.speed_mps * time_s};
}

std::pair<double, double> angles_from_geometry(const vec2& bs, const vec2& ue, const vec2& point)
{
    const double sign = array_facing_sign(bs, ue);
    const double departure = boresight_angle(bs, point, sign);
    const double arrival = boresight_angle(ue, point, -sign);
    return {departure, arrival};
}

std::pair<double, double> los_angles(const vec2& bs, const vec2& ue)
{
    const double sign = array_facing_sign(bs, ue);
    const double departure = boresight_angle(bs, ue, sign);
    const double arrival = boresight_angle(ue, bs, -sign);
    return {departure, arrival};
}

std::vector<vec2> place_clusters(const vec2& bs, const vec2& ue, int count, rng_stream& rng)
{
    if (count < 0)
        throw std::invalid_argument("place_clusters: count must be >= 0");

    constexpr double kMargin = 10.0;      // rectangle inflation, meters
    constexpr double kMinSeparation = 0.1; // from either terminal, meters
    const double x_lo = std::min(bs.x, ue.x) - kMargin;
    const double x_hi = std::max(bs.x, ue.x) + kMargin;
    const double y_lo = std::min(bs.y, ue.y) - kMargin;
    const double y_hi = std::max(bs.y, ue.y) + kMargin;
    const double sign = array_facing_sign(bs, ue);

    std::vector<vec2> out;
    out.reserve(count);
    for (int i = 0; i < count; i++)
    {
        bool placed = false;
        for (int attempt = 0; attempt < 10000; attempt++)
        {
            vec2 p;
            p.x = rng.uniform(x_lo, x_hi); // sequenced: x before y
            p.y = rng.uniform(y_lo, y_hi);

            // keep scatterers strictly between the two array planes
            if (!(sign * (p.x - bs.x) > 0.0) || !(sign * (p.x - ue.x) < 0.0))
                continue;
            if (std::hypot(p.x - bs.x, p.y - bs.y) < kMinSeparation ||
                std::hypot(p.x - ue.x, p.y - ue.y) < kMinSeparation)
                continue;
            out.push_back(p);
            placed = true;
            break;
        }
        if (!placed)
            throw std::runtime_error("place_clusters: no valid position found");
    }
    return out;
}

cluster_set make_window_geometry(const scenario_config& cfg, double time_s, rng_stream& rng)
{
    cfg.validate();
    const vec2 bs = cfg.bs_position;
    const vec2 ue = ue_position(cfg, time_s);

    const double dist = std::hypot(ue.x - bs.x, ue.y - bs.y);
    const double beta_0 = dbm_delta_to_linear(-pathloss_db(dist, cfg.f_c_ghz));

    cluster_set cs;
    cs.num_clusters = cfg.n_cl;
    cs.has_los = cfg.has_los;
    cs.los_power = cfg.has_los ? beta_0 : 0.0;

    const int paths = cs.total_paths();
    cs.arrival_rad.set_size(paths);
    cs.departure_rad.set_size(paths);
    cs.tap_power.zeros(paths, cfg.taps);

    int row = 0;
    if (cfg.has_los)
    {
        const auto [aod, aoa] = los_angles(bs, ue);
        cs.departure_rad(0) = aod;
        cs.arrival_rad(0) = aoa;
        cs.tap_power(0, 0) = beta_0;
        row = 1;
    }

    // identical exponential delay profile for every cluster, normalized so
    // the taps of one cluster sum to its average power
    arma::vec profile(cfg.taps);
    for (int l = 0; l < cfg.taps; l++)
        profile(l) = std::exp(-static_cast<double>(l) / cfg.tap_decay);
    profile *= (beta_0 * cfg.nlos_relative_power) / arma::sum(profile);

    const std::vector<vec2> positions = place_clusters(bs, ue, cfg.n_cl, rng);
    for (const vec2& p : positions)
    {
        const auto [aod, aoa] = angles_from_geometry(bs, ue, p);
        cs.departure_rad(row) = aod;
        cs.arrival_rad(row) = aoa;
        cs.tap_power.row(row) = profile.t();
        row++;
    }

    cs.validate();
    return cs;
}

rng_stream stream_context::geometry_rng() const
{
    return rng_stream(derive_seed(seed, {experiment, sweep, trial, kPurposeGeometry}));
}

rng_stream stream_context::fading_rng(int block) const
{
    return rng_stream(derive_seed(
        seed, {experiment, sweep, trial, kPurposeFading, static_cast<std::uint64_t>(block)}));
}

rng_stream stream_context::noise_rng(int block, pilot_phase phase) const
{
    return rng_stream(
        derive_seed(seed, {experiment, sweep, trial, kPurposeNoise,
                           static_cast<std::uint64_t>(block), static_cast<std::uint64_t>(phase)}));
}

const char* method_name(combining_method m)
{
    switch (m)
    {
    case combining_method::ideal_dbf:
        return "ideal_dbf";
    case combining_method::proposed_updated_q:
        return "proposed_updated_q";
    case combining_method::proposed_fixed_q:
        return "proposed_fixed_q";
    case combining_method::fixed_q_and_w:
        return "fixed_q_and_w";
    case combining_method::hbf_proxy:
        return "hbf_proxy";
    }
    throw std::invalid_argument("method_name: unknown method");
}

std::vector<channel_block> simulate_window_channels(const scenario_config& cfg,
                                                    const cluster_set& clusters,
                                                    const stream_context& ctx)
{
    const array_geometry rx{cfg.n_r, kElementSpacing};
    const array_geometry tx{cfg.n_t, kElementSpacing};

    std::vector<channel_block> blocks;
    blocks.reserve(cfg.blocks_per_window);
    for (int b = 0; b < cfg.blocks_per_window; b++)
    {
        rng_stream rng = ctx.fading_rng(b);
        const fading_realization fading = draw_fading(clusters, rng);
        blocks.push_back(assemble_channel(rx, tx, clusters, fading, cfg.subcarriers));
    }
    return blocks;
}

window_result run_window(const scenario_config& cfg, const std::vector<channel_block>& blocks,
                         combining_method method, const stream_context& ctx,
                         const frozen_combiners* frozen)
{
    cfg.validate();
    if (blocks.empty())
        throw std::invalid_argument("run_window: no fading blocks");
    for (const channel_block& blk : blocks)
        if (static_cast<int>(blk.response.n_rows) != cfg.n_r ||
            static_cast<int>(blk.response.n_cols) != cfg.n_t ||
            blk.num_subcarriers() != cfg.subcarriers)
            throw std::invalid_argument("run_window: block dimensions do not match config");

    const int num_sc = cfg.subcarriers;
    const double p_t = cfg.transmit_power_linear();
    const double p_r = cfg.pilot_power_linear();

    const pilot_matrix phi_full = make_pilot_matrix(cfg.n_r, cfg.t_p);
    const pilot_matrix phi_eff = make_pilot_matrix(cfg.n_c, cfg.t_p);
    const pilot_matrix phi_down = make_pilot_matrix(cfg.n_s, cfg.n_s);

    const bool use_frozen = (method == combining_method::fixed_q_and_w && frozen != nullptr);
    if (use_frozen && (static_cast<int>(frozen->first_stage.size()) != num_sc ||
                       static_cast<int>(frozen->second_stage.size()) != num_sc))
        throw std::invalid_argument("run_window: frozen combiners do not match subcarrier count");

    std::vector<arma::cx_mat> q(num_sc), w(num_sc);
    if (use_frozen)
    {
        q = frozen->first_stage;
        w = frozen->second_stage;
    }

    window_result res;
    res.blocks.resize(blocks.size());

    for (std::size_t b = 0; b < blocks.size(); b++)
    {
        const arma::cx_cube& chan = blocks[b].response;
        block_record& rec = res.blocks[b];
        rec.genie_rate.set_size(num_sc);
        rec.uatf.resize(num_sc);
        std::vector<arma::cx_mat> f(num_sc);

        const bool perfect_csi = (method == combining_method::ideal_dbf);
        bool full_design = false;
        switch (method)
        {
        case combining_method::ideal_dbf:
        case combining_method::proposed_updated_q:
            full_design = true;
            break;
        case combining_method::proposed_fixed_q:
        case combining_method::hbf_proxy:
            full_design = (b == 0);
            break;
        case combining_method::fixed_q_and_w:
            full_design = (b == 0) && !use_frozen;
            break;
        }

        if (full_design)
        {
            // full-channel training: uplink for the precoder, precoded
            // downlink for the first combining stage
            rng_stream up_rng = ctx.noise_rng(static_cast<int>(b), pilot_phase::uplink_full);
            rng_stream dn_rng = ctx.noise_rng(static_cast<int>(b), pilot_phase::downlink_precoded);
            rng_stream* up = cfg.pilot_noise && !perfect_csi ? &up_rng : nullptr;
            rng_stream* dn = cfg.pilot_noise && !perfect_csi ? &dn_rng : nullptr;

            std::vector<arma::cx_mat> precoded_est(num_sc);
            for (int v = 0; v < num_sc; v++)
            {
                const arma::cx_mat h = chan.slice(v);
                const arma::cx_mat h_hat =
                    perfect_csi ? h : estimate_uplink_full(h, phi_full, p_r, up);
                f[v] = design_precoder(h_hat, cfg.n_s, p_t).matrix;
                const arma::cx_mat precoded = h * f[v];
                precoded_est[v] =
                    perfect_csi ? precoded : estimate_downlink_precoded(precoded, phi_down, dn);
            }

            if (method == combining_method::hbf_proxy)
            {
                std::vector<arma::cx_mat> digital(num_sc);
                for (int v = 0; v < num_sc; v++)
                    digital[v] = design_first_stage(precoded_est[v], cfg.n_c);
                const arma::cx_mat common = hbf_phase_proxy(digital);
                for (int v = 0; v < num_sc; v++)
                    q[v] = common;
            }
            else
            {
                for (int v = 0; v < num_sc; v++)
                    q[v] = design_first_stage(precoded_est[v], cfg.n_c);
            }

            const arma::cx_mat w0 = second_stage_first_block(cfg.n_c, cfg.n_s);
            for (int v = 0; v < num_sc; v++)
                w[v] = w0;
            rec.first_stage_updated = true;
            rec.second_stage_updated = true;
        }
        else
        {
            // effective-channel training through the standing first stage
            const bool update_w = (method == combining_method::proposed_fixed_q ||
                                   method == combining_method::hbf_proxy);
            rng_stream up_rng = ctx.noise_rng(static_cast<int>(b), pilot_phase::uplink_effective);
            rng_stream dn_rng = ctx.noise_rng(static_cast<int>(b), pilot_phase::downlink_effective);
            rng_stream* up = cfg.pilot_noise ? &up_rng : nullptr;
            rng_stream* dn = cfg.pilot_noise ? &dn_rng : nullptr;

            for (int v = 0; v < num_sc; v++)
            {
                const arma::cx_mat g = q[v].t() * chan.slice(v);
                const arma::cx_mat g_hat = estimate_uplink_effective(g, phi_eff, p_r, up);
                f[v] = design_precoder(g_hat, cfg.n_s, p_t).matrix;
                if (update_w)
                {
                    const arma::cx_mat d = g * f[v];
                    const arma::cx_mat d_hat = estimate_downlink_effective(d, phi_down, q[v], dn);
                    w[v] = design_second_stage(d_hat, cfg.n_s);
                }
            }
            rec.first_stage_updated = false;
            rec.second_stage_updated = update_w;
        }

        for (int v = 0; v < num_sc; v++)
        {
            const arma::cx_mat h = chan.slice(v);
            rec.genie_rate(v) = se_perfect_csi_subcarrier(h, f[v], q[v], w[v]);
            const arma::cx_mat eff = collect_effective_channel(w[v], q[v].t() * h * f[v]);
            rec.uatf[v] = make_uatf_sample(eff, q[v], w[v]);
        }
    }

    res.first_stage_final = q;
    res.second_stage_final = w;
    return res;
}

} // namespace mmwlink
