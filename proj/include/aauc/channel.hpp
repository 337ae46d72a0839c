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

// Geometry and Rician channel synthesis for a BS with a uniform linear
// array, K single-antenna users, and an eavesdropper hiding on the segment
// between the BS and the attacked user.

#pragma once

#include "aauc/error.hpp"
#include "aauc/numerics.hpp"
#include "aauc/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace aauc {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

/// System parameters. All powers in watts, distances in meters, ratios linear.
struct SystemParams
{
    int n_antennas = 64;              ///< N
    int n_users = 6;                  ///< K
    double rician_k = 1000.0;         ///< K_R (linear)
    double pathloss_exp = 2.5;        ///< alpha
    double rho0 = 1e-4;               ///< power gain at the reference distance
    double d0 = 1.0;                  ///< reference distance
    std::vector<double> noise_users;  ///< sigma_k^2, one per user
    double noise_eav = 1e-11;         ///< sigma_E^2
    double p_max = 1.0;               ///< P_max
    double lambda = 0.64;             ///< angular model parameter
    double d_min = 1.0;               ///< distance floor

    double noise_user(int k) const { return noise_users.at(std::size_t(k)); }

    /// Large-scale gain rho0 (d / d0)^-alpha at distance d (floored at d_min).
    double pathloss(double d) const { return rho0 * std::pow(std::max(d, d_min) / d0, -pathloss_exp); }

    void validate() const
    {
        if (n_antennas < 2)
            throw InputError("SystemParams: n_antennas must be >= 2");
        if (n_users < 2)
            throw InputError("SystemParams: n_users must be >= 2");
        if (std::ssize(noise_users) != n_users)
            throw InputError("SystemParams: need one noise power per user");
        for (double s : noise_users)
            if (!(s > 0.0) || !std::isfinite(s))
                throw InputError("SystemParams: user noise powers must be positive");
        if (!(rician_k >= 0.0) || !std::isfinite(rician_k))
            throw InputError("SystemParams: rician_k must be >= 0");
        if (!(pathloss_exp > 0.0))
            throw InputError("SystemParams: pathloss_exp must be positive");
        if (!(rho0 > 0.0) || !(d0 > 0.0) || !(d_min > 0.0))
            throw InputError("SystemParams: rho0, d0 and d_min must be positive");
        if (!(noise_eav > 0.0))
            throw InputError("SystemParams: noise_eav must be positive");
        if (!(p_max > 0.0) || !std::isfinite(p_max))
            throw InputError("SystemParams: p_max must be positive");
        if (!(lambda >= 0.0 && lambda <= 1.0))
            throw InputError("SystemParams: lambda must lie in [0, 1]");
    }
};

/// Simulation defaults: -80 dBm noise everywhere, 30 dBm budget,
/// alpha = 2.5, -40 dB at 1 m, lambda = 0.64, K_R = 30 dB.
inline SystemParams default_params(int n_antennas, int n_users)
{
    SystemParams p;
    p.n_antennas = n_antennas;
    p.n_users = n_users;
    p.rician_k = db_to_linear(30.0);
    p.pathloss_exp = 2.5;
    p.rho0 = db_to_linear(-40.0);
    p.d0 = 1.0;
    p.noise_users.assign(std::size_t(n_users), dbm_to_watts(-80.0));
    p.noise_eav = dbm_to_watts(-80.0);
    p.p_max = dbm_to_watts(30.0);
    p.lambda = 0.64;
    p.d_min = 1.0;
    return p;
}

struct UserPolar
{
    double distance = 0.0; ///< D_k (m)
    double angle = 0.0;    ///< theta_k (rad)
};

struct Geometry
{
    std::vector<UserPolar> users;
    int attacked = 0;            ///< 0-based index of the attacked user
    double eav_elevation = 0.0;  ///< beta; 0 is the planar case

    int n_users() const { return int(users.size()); }

    /// Indices of the cooperating users, in increasing order.
    std::vector<int> helpers() const
    {
        std::vector<int> h;
        for (int k = 0; k < n_users(); ++k)
            if (k != attacked)
                h.push_back(k);
        return h;
    }

    void validate() const
    {
        if (users.size() < 2)
            throw InputError("Geometry: need at least two users");
        if (attacked < 0 || attacked >= n_users())
            throw InputError("Geometry: attacked index out of range");
        for (const auto& u : users)
            if (!(u.distance > 0.0) || !std::isfinite(u.angle))
                throw InputError("Geometry: user distances must be positive and angles finite");
    }
};

struct ChannelSet
{
    std::vector<Eigen::VectorXcd> g; ///< BS -> user k, length N, all K users
    Eigen::VectorXcd h_attacked;     ///< helpers -> attacked user, length K-1
    Eigen::MatrixXcd U;              ///< null-space basis of g[attacked], N x (N-1)
    int attacked = 0;
    std::vector<int> helpers;

    int n_antennas() const { return int(g.front().size()); }
    int n_helpers() const { return int(helpers.size()); }
};

struct AngularMatrix
{
    Eigen::VectorXd diag; ///< J_k over helpers, same order as Geometry::helpers()
};

namespace channel {

/// ULA response: entry m is exp(-j pi m sin(theta)).
inline Eigen::VectorXcd steering_vector(double theta, int n)
{
    if (n < 1)
        throw InputError("steering_vector: n must be >= 1");
    Eigen::VectorXcd a(n);
    const double s = std::sin(theta);
    for (int m = 0; m < n; ++m)
        a[m] = std::polar(1.0, -std::numbers::pi * m * s);
    return a;
}

/// Rician BS -> user channel at distance D and azimuth theta.
inline Eigen::VectorXcd sample_rician_channel(double distance, double theta, const SystemParams& params, CounterRng& rng)
{
    if (!(distance > 0.0))
        throw InputError("sample_rician_channel: distance must be positive");
    const int n = params.n_antennas;
    const double amp = std::sqrt(params.pathloss(distance));
    const double los = std::sqrt(params.rician_k / (1.0 + params.rician_k));
    const double nlos = std::sqrt(1.0 / (1.0 + params.rician_k));
    Eigen::VectorXcd g = los * steering_vector(theta, n);
    for (int m = 0; m < n; ++m)
        g[m] += nlos * rng.complex_normal();
    return amp * g;
}

/// Planar position of user k.
inline Eigen::Vector3d user_position(const Geometry& geom, int k)
{
    const auto& u = geom.users.at(std::size_t(k));
    return {u.distance * std::cos(u.angle), u.distance * std::sin(u.angle), 0.0};
}

/// Eavesdropper position at distance rho along the attacked user's bearing,
/// lifted by rho * tan(beta) when the elevation is nonzero.
inline Eigen::Vector3d eav_position(double rho, const Geometry& geom)
{
    const double th = geom.users.at(std::size_t(geom.attacked)).angle;
    return {rho * std::cos(th), rho * std::sin(th), rho * std::tan(geom.eav_elevation)};
}

/// Distance from user k to the eavesdropper at rho, floored at d_min.
inline double eav_user_distance(double rho, int k, const Geometry& geom, const SystemParams& params)
{
    return std::max(params.d_min, (eav_position(rho, geom) - user_position(geom, k)).norm());
}

/// Scalar user-to-user Rician link with a uniformly random LoS phase.
inline std::complex<double> sample_link(double distance, const SystemParams& params, CounterRng& rng)
{
    const double amp = std::sqrt(params.pathloss(distance));
    const double los = std::sqrt(params.rician_k / (1.0 + params.rician_k));
    const double nlos = std::sqrt(1.0 / (1.0 + params.rician_k));
    const double phi = rng.uniform(-std::numbers::pi, std::numbers::pi);
    return amp * (los * std::polar(1.0, phi) + nlos * rng.complex_normal());
}

/// Helpers -> eavesdropper channel h_E(rho), length K-1.
inline Eigen::VectorXcd sample_eav_channel(double rho, const Geometry& geom, const SystemParams& params, CounterRng& rng)
{
    const auto helpers = geom.helpers();
    Eigen::VectorXcd h(std::ssize(helpers));
    for (std::size_t i = 0; i < helpers.size(); ++i)
        h[Eigen::Index(i)] = sample_link(eav_user_distance(rho, helpers[i], geom, params), params, rng);
    return h;
}

/// Helpers -> attacked user channel h_K, length K-1.
inline Eigen::VectorXcd sample_relay_channel(const Geometry& geom, const SystemParams& params, CounterRng& rng)
{
    const auto helpers = geom.helpers();
    const Eigen::Vector3d target = user_position(geom, geom.attacked);
    Eigen::VectorXcd h(std::ssize(helpers));
    for (std::size_t i = 0; i < helpers.size(); ++i)
        h[Eigen::Index(i)] = sample_link((user_position(geom, helpers[i]) - target).norm(), params, rng);
    return h;
}

/// Draws every BS -> user channel, the relay channel, and the null-space
/// basis of the attacked user's channel.
inline ChannelSet sample_channel_set(const Geometry& geom, const SystemParams& params, CounterRng& rng)
{
    geom.validate();
    params.validate();
    if (geom.n_users() != params.n_users)
        throw InputError("sample_channel_set: geometry and params disagree on K");
    ChannelSet cs;
    cs.attacked = geom.attacked;
    cs.helpers = geom.helpers();
    for (const auto& u : geom.users)
        cs.g.push_back(sample_rician_channel(u.distance, u.angle, params, rng));
    cs.h_attacked = sample_relay_channel(geom, params, rng);
    cs.U = numerics::null_space_basis(cs.g[std::size_t(geom.attacked)]);
    return cs;
}

/// int_0^{D_K} rho0 (d_{E,k}(rho) / d0)^-alpha drho for one helper.
///
/// d^2 = |e|^2 (rho - rho*)^2 + c^2 along the path, so a helper close to the
/// path makes the integrand a narrow peak of width ~c around rho*. The range is
/// split where the d_min floor switches on or off, and each piece is mapped
/// through rho = rho* + s sinh(t) with s = max(c, d_min) / |e|, which flattens
/// the peak before Simpson sees it.
inline double path_gain_integral(int k, const Geometry& geom, const SystemParams& params, int panels)
{
    const double dk = geom.users.at(std::size_t(geom.attacked)).distance;
    const Eigen::Vector3d e = eav_position(1.0, geom);
    const Eigen::Vector3d pk = user_position(geom, k);
    const double e2 = e.squaredNorm();
    const double rho_star = e.dot(pk) / e2;
    const double c2 = std::max(0.0, pk.squaredNorm() - e.dot(pk) * rho_star);
    const double scale = std::max(std::sqrt(c2), params.d_min) / std::sqrt(e2);

    std::vector<double> cuts{0.0, dk};
    if (rho_star > 0.0 && rho_star < dk)
        cuts.push_back(rho_star);
    if (c2 < params.d_min * params.d_min)
    {
        const double half = std::sqrt((params.d_min * params.d_min - c2) / e2);
        for (double r : {rho_star - half, rho_star + half})
            if (r > 0.0 && r < dk)
                cuts.push_back(r);
    }
    std::sort(cuts.begin(), cuts.end());

    auto integrand = [&](double t) {
        const double rho = rho_star + scale * std::sinh(t);
        return params.pathloss(eav_user_distance(rho, k, geom, params)) * scale * std::cosh(t);
    };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    {
        const double t0 = std::asinh((cuts[i] - rho_star) / scale);
        const double t1 = std::asinh((cuts[i + 1] - rho_star) / scale);
        if (t1 > t0)
            total += numerics::integrate_1d(integrand, t0, t1, panels);
    }
    return total;
}

/// Angular matrix: J_k = (rho0 / D_K) * int_0^{D_K} (d_{E,k}(rho) / d0)^-alpha drho
/// for every helper k. `panels` Simpson panels per smooth piece.
inline AngularMatrix angular_matrix(const Geometry& geom, const SystemParams& params, int panels = 1024)
{
    geom.validate();
    const double dk = geom.users.at(std::size_t(geom.attacked)).distance;
    const auto helpers = geom.helpers();
    AngularMatrix j;
    j.diag.resize(std::ssize(helpers));
    for (std::size_t i = 0; i < helpers.size(); ++i)
        j.diag[Eigen::Index(i)] = path_gain_integral(helpers[i], geom, params, panels) / dk;
    return j;
}

} // namespace channel
} // namespace aauc
