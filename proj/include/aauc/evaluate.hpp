// SPDX-License-Identifier: Apache-2.0
//
// aauc: angle-aware user cooperation beamforming for secure massive MIMO
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Rate and secrecy metrics of a designed beamformer.

#pragma once

#include "aauc/channel.hpp"
#include "aauc/error.hpp"
#include "aauc/rng.hpp"
#include "aauc/secrecy.hpp"
#include "aauc/solution.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace aauc {

/// Where the eavesdropper is. On the attacked user's bearing it is treated
/// as uniform on the BS -> attacked-user segment. Off-angle it sits at a
/// fixed planar position and also overhears the first phase.
struct EavesdropperPlacement
{
    bool on_path = true;
    double distance = 0.0; ///< off-angle: distance from the BS (m)
    double angle = 0.0;    ///< off-angle: azimuth (rad)
};

struct McSettings
{
    int n_rho = 64;
    int n_fading = 200;
};

struct Evaluation
{
    double R = 0.0;
    double model_secrecy = 0.0;
    double mc_secrecy = 0.0;
    double mc_stderr = 0.0;
    double power_used = 0.0;
};

namespace detail {

inline MCEstimate mc_fixed(double R, double prelog, long n, const std::function<double(CounterRng&)>& snr,
                           const CounterRng& rng)
{
    CounterRng local = rng.substream(0);
    double sum = 0.0, sum2 = 0.0;
    for (long i = 0; i < n; ++i)
    {
        const double s = std::max(0.0, R - prelog * secrecy::log2p(snr(local)));
        sum += s;
        sum2 += s * s;
    }
    MCEstimate out;
    out.mean = std::clamp(sum / double(n), 0.0, std::max(R, 0.0));
    const double var = n > 1 ? std::max(0.0, (sum2 - sum * sum / double(n)) / double(n - 1)) : 0.0;
    out.std_error = std::sqrt(var / double(n));
    out.n_samples = n;
    out.n_rho_points = 1;
    return out;
}

/// (1/D) int_0^D pathloss(rho) drho with the d_min floor, in closed form.
inline double mean_pathloss_on_segment(double length, const SystemParams& p)
{
    const double a = p.pathloss_exp;
    const double dm = std::min(p.d_min, length);
    double integral = dm * p.pathloss(p.d_min);
    if (length > dm)
    {
        const double scale = p.rho0 * std::pow(p.d0, a);
        integral += a == 1.0 ? scale * std::log(length / dm)
                             : scale * (std::pow(length, 1.0 - a) - std::pow(dm, 1.0 - a)) / (1.0 - a);
    }
    return integral / length;
}

inline Eigen::Vector3d planar(double distance, double angle)
{
    return {distance * std::cos(angle), distance * std::sin(angle), 0.0};
}

} // namespace detail

/// Two-phase AAUC metrics, or single-phase metrics for method = direct.
///
/// On-path eavesdropper: the first phase is nulled towards it, so only the
/// relay phase leaks, averaged over the segment as in the angular model.
/// For direct transmission it sees g_E at the attacked bearing instead.
/// Off-angle eavesdropper: it combines both phases (AAUC) or the single phase
/// (direct) from its fixed position; only fading is averaged.
/// The model secrecy for direct transmission replaces the leakage by the
/// eavesdropper's mean SNR.
inline Evaluation evaluate_solution(const BeamformingSolution& sol, const Geometry& geom, const ChannelSet& cs,
                                    const AngularMatrix& j, const SystemParams& params, const McSettings& mc,
                                    const CounterRng& rng, const EavesdropperPlacement& eav = {})
{
    if (mc.n_rho < 2 || mc.n_fading < 1)
        throw InputError("evaluate_solution: need n_rho >= 2 and n_fading >= 1");
    Evaluation ev;
    ev.power_used = sol.power_used();
    const int attacked = geom.attacked;
    const double dk = geom.users.at(std::size_t(attacked)).distance;
    const double theta_k = geom.users.at(std::size_t(attacked)).angle;
    const long n_fixed = long(mc.n_rho) * mc.n_fading;

    if (sol.method == Method::direct)
    {
        const Eigen::VectorXcd& v = sol.z;
        if (v.size() != cs.n_antennas())
            throw InputError("evaluate_solution: direct solution must have length N");
        double worst = 1e300;
        for (std::size_t k = 0; k < cs.g.size(); ++k)
            worst = std::min(worst, std::norm(cs.g[k].dot(v)) / params.noise_user(int(k)));
        ev.R = secrecy::log2p(worst);

        const double los = params.rician_k / (1.0 + params.rician_k);
        auto mean_gain = [&](double theta) {
            const double coherent = std::norm(channel::steering_vector(theta, cs.n_antennas()).dot(v));
            return los * coherent + (1.0 - los) * v.squaredNorm();
        };
        MCEstimate est;
        double mean_snr = 0.0;
        if (eav.on_path)
        {
            mean_snr = detail::mean_pathloss_on_segment(dk, params) * mean_gain(theta_k) / params.noise_eav;
            auto snr = [&](double rho, CounterRng& r) {
                const Eigen::VectorXcd ge = channel::sample_rician_channel(std::max(rho, params.d_min), theta_k, params, r);
                return std::norm(ge.dot(v)) / params.noise_eav;
            };
            est = secrecy::mc_average(ev.R, 1.0, dk, mc.n_rho, mc.n_fading, snr, rng);
        }
        else
        {
            mean_snr = params.pathloss(eav.distance) * mean_gain(eav.angle) / params.noise_eav;
            auto snr = [&](CounterRng& r) {
                const Eigen::VectorXcd ge = channel::sample_rician_channel(eav.distance, eav.angle, params, r);
                return std::norm(ge.dot(v)) / params.noise_eav;
            };
            est = detail::mc_fixed(ev.R, 1.0, n_fixed, snr, rng);
        }
        ev.model_secrecy = std::max(0.0, ev.R - secrecy::log2p(mean_snr));
        ev.mc_secrecy = est.mean;
        ev.mc_stderr = est.std_error;
        return ev;
    }

    ev.R = secrecy::multicast_rate(sol.z, sol.w, cs, params);
    ev.model_secrecy = secrecy::angular_secrecy(ev.R, sol.w, j, params.lambda, params.noise_eav);
    MCEstimate est;
    if (eav.on_path)
        est = secrecy::mc_average_secrecy(ev.R, sol.w, geom, params, mc.n_rho, mc.n_fading, rng);
    else
    {
        const Eigen::VectorXcd v = cs.U * sol.z;
        const Eigen::Vector3d pe = detail::planar(eav.distance, eav.angle);
        const auto helpers = geom.helpers();
        std::vector<double> dist;
        for (int k : helpers)
            dist.push_back((channel::user_position(geom, k) - pe).norm());
        auto snr = [&](CounterRng& r) {
            const Eigen::VectorXcd ge = channel::sample_rician_channel(eav.distance, eav.angle, params, r);
            std::complex<double> relay = 0.0;
            for (std::size_t i = 0; i < helpers.size(); ++i)
                relay += std::conj(channel::sample_link(dist[i], params, r)) * sol.w[Eigen::Index(i)];
            // both phases combined at the eavesdropper
            return (std::norm(ge.dot(v)) + std::norm(relay)) / params.noise_eav;
        };
        est = detail::mc_fixed(ev.R, 0.5, n_fixed, snr, rng);
    }
    ev.mc_secrecy = est.mean;
    ev.mc_stderr = est.std_error;
    return ev;
}

} // namespace aauc
