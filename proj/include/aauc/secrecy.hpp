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

// Rate and secrecy functionals: the two-phase multicast rate, the angular
// secrecy model, its Monte Carlo ground truth, and the lambda fit.

#pragma once

#include "aauc/channel.hpp"
#include "aauc/error.hpp"
#include "aauc/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <vector>

namespace aauc {

struct MCEstimate
{
    double mean = 0.0;
    double std_error = 0.0;
    long n_samples = 0;
    int n_rho_points = 0;
};

struct TrainingSample
{
    double R = 0.0;
    Eigen::VectorXcd w;
    double sigma_E2 = 0.0; ///< watts
    double target_S = 0.0;
};

struct LambdaFit
{
    double lambda = 0.0;
    double mse = 0.0;
    bool used_fallback = false;
};

namespace secrecy {

inline double log2p(double x) { return std::log1p(x) / std::numbers::ln2; }

/// w^H J w for diagonal J.
inline double quad_j(const Eigen::VectorXcd& w, const AngularMatrix& j)
{
    if (w.size() != j.diag.size())
        throw InputError("quad_j: w and J sizes differ");
    return (w.cwiseAbs2().array() * j.diag.array()).sum();
}

/// |g_k^H U z|^2 / sigma_k^2 for BS -> user k in the first phase.
inline double helper_snr(int k, const Eigen::VectorXcd& z, const ChannelSet& cs, const SystemParams& params)
{
    const std::complex<double> s = cs.g[std::size_t(k)].dot(cs.U * z);
    return std::norm(s) / params.noise_user(k);
}

inline double relay_snr(const Eigen::VectorXcd& w, const ChannelSet& cs, const SystemParams& params)
{
    return std::norm(cs.h_attacked.dot(w)) / params.noise_user(cs.attacked);
}

inline void check_dims(const Eigen::VectorXcd& z, const Eigen::VectorXcd& w, const ChannelSet& cs)
{
    if (z.size() != cs.U.cols())
        throw InputError("z must have length N-1");
    if (w.size() != cs.h_attacked.size())
        throw InputError("w must have length K-1");
}

/// R = 1/2 min( min_k log2(1 + |g_k^H U z|^2/sigma_k^2), log2(1 + |h_K^H w|^2/sigma_K^2) ).
inline double multicast_rate(const Eigen::VectorXcd& z, const Eigen::VectorXcd& w, const ChannelSet& cs,
                             const SystemParams& params)
{
    check_dims(z, w, cs);
    const Eigen::VectorXcd v = cs.U * z;
    double worst = relay_snr(w, cs, params);
    for (int k : cs.helpers)
        worst = std::min(worst, std::norm(cs.g[std::size_t(k)].dot(v)) / params.noise_user(k));
    return 0.5 * log2p(worst);
}

/// 1/2 log2(1 + lambda w^H J w / sigma_E^2).
inline double model_leakage(const Eigen::VectorXcd& w, const AngularMatrix& j, double lambda, double sigma_e2)
{
    return 0.5 * log2p(lambda * quad_j(w, j) / sigma_e2);
}

inline double angular_secrecy(double R, const Eigen::VectorXcd& w, const AngularMatrix& j, double lambda,
                              double sigma_e2)
{
    return std::max(0.0, R - model_leakage(w, j, lambda, sigma_e2));
}

/// Phi_k: helper k's first-phase rate minus the model leakage.
inline double phi(int k, const Eigen::VectorXcd& z, const Eigen::VectorXcd& w, const ChannelSet& cs,
                  const AngularMatrix& j, const SystemParams& params)
{
    return 0.5 * log2p(helper_snr(k, z, cs, params)) - model_leakage(w, j, params.lambda, params.noise_eav);
}

/// Upsilon: relay rate to the attacked user minus the model leakage.
inline double upsilon(const Eigen::VectorXcd& w, const ChannelSet& cs, const AngularMatrix& j,
                      const SystemParams& params)
{
    return 0.5 * log2p(relay_snr(w, cs, params)) - model_leakage(w, j, params.lambda, params.noise_eav);
}

inline double objective_p2(const Eigen::VectorXcd& z, const Eigen::VectorXcd& w, const ChannelSet& cs,
                           const AngularMatrix& j, const SystemParams& params)
{
    check_dims(z, w, cs);
    double v = upsilon(w, cs, j, params);
    for (int k : cs.helpers)
        v = std::min(v, phi(k, z, w, cs, j, params));
    return v;
}

/// Trapezoid-over-rho, Monte-Carlo-over-fading average of [R - prelog * log2(1 + snr)]^+.
/// `snr(rho, rng)` draws one eavesdropper SNR at path position rho. Each rho
/// point uses its own substream so the estimate does not depend on how the
/// grid is partitioned.
inline MCEstimate mc_average(double R, double prelog, double path_length, int n_rho, int n_fading,
                             const std::function<double(double, CounterRng&)>& snr, const CounterRng& rng)
{
    if (n_rho < 2 || n_fading < 1)
        throw InputError("mc_average: need n_rho >= 2 and n_fading >= 1");
    MCEstimate out;
    out.n_rho_points = n_rho;
    out.n_samples = long(n_rho) * n_fading;
    double var = 0.0;
    for (int i = 0; i < n_rho; ++i)
    {
        const double rho = path_length * i / (n_rho - 1);
        const double weight = (i == 0 || i == n_rho - 1 ? 0.5 : 1.0) / (n_rho - 1);
        CounterRng local = rng.substream(std::uint64_t(i));
        double sum = 0.0, sum2 = 0.0;
        for (int f = 0; f < n_fading; ++f)
        {
            const double s = std::max(0.0, R - prelog * log2p(snr(rho, local)));
            sum += s;
            sum2 += s * s;
        }
        const double mean = sum / n_fading;
        out.mean += weight * mean;
        if (n_fading > 1)
        {
            const double v = std::max(0.0, (sum2 - n_fading * mean * mean) / (n_fading - 1));
            var += weight * weight * v / n_fading;
        }
    }
    out.mean = std::clamp(out.mean, 0.0, std::max(R, 0.0));
    out.std_error = std::sqrt(var);
    return out;
}

/// Average secrecy of the two-phase scheme for rate R and helper
/// beamformer w, with the eavesdropper uniform on the BS -> attacked-user segment.
inline MCEstimate mc_average_secrecy(double R, const Eigen::VectorXcd& w, const Geometry& geom,
                                     const SystemParams& params, int n_rho, int n_fading, const CounterRng& rng)
{
    geom.validate();
    const auto helpers = geom.helpers();
    if (w.size() != std::ssize(helpers))
        throw InputError("mc_average_secrecy: w must have length K-1");
    const double dk = geom.users.at(std::size_t(geom.attacked)).distance;
    if (w.squaredNorm() == 0.0)
        return {std::max(R, 0.0), 0.0, long(n_rho) * n_fading, n_rho};

    const double los = std::sqrt(params.rician_k / (1.0 + params.rician_k));
    const double nlos = std::sqrt(1.0 / (1.0 + params.rician_k));
    // Amplitudes depend only on rho; cache per grid point.
    Eigen::VectorXd amp(w.size());
    double cached_rho = -1.0;
    auto snr = [&](double rho, CounterRng& r) {
        if (rho != cached_rho)
        {
            for (std::size_t i = 0; i < helpers.size(); ++i)
                amp[Eigen::Index(i)] =
                    std::sqrt(params.pathloss(channel::eav_user_distance(rho, helpers[i], geom, params)));
            cached_rho = rho;
        }
        std::complex<double> acc = 0.0;
        for (Eigen::Index i = 0; i < w.size(); ++i)
        {
            const double phase = r.uniform(-std::numbers::pi, std::numbers::pi);
            const std::complex<double> h = amp[i] * (los * std::polar(1.0, phase) + nlos * r.complex_normal());
            acc += std::conj(h) * w[i];
        }
        return std::norm(acc) / params.noise_eav;
    };
    return mc_average(R, 0.5, dk, n_rho, n_fading, snr, rng);
}

// --- lambda fitting -----------------------------------------------------

inline double fit_mse(const std::vector<TrainingSample>& samples, const AngularMatrix& j, double lambda)
{
    double acc = 0.0;
    for (const auto& s : samples)
    {
        const double e = s.target_S - angular_secrecy(s.R, s.w, j, lambda, s.sigma_E2);
        acc += e * e;
    }
    return acc / double(samples.size());
}

namespace detail {

inline double golden_section(const std::function<double(double)>& f, double a, double b, double tol)
{
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol)
    {
        if (fc <= fd)
        {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        }
        else
        {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

// True when values decrease then increase, allowing flat stretches.
inline bool unimodal(const std::vector<double>& v)
{
    std::size_t i = 0;
    const double slack = 1e-12 * (1.0 + *std::max_element(v.begin(), v.end()));
    while (i + 1 < v.size() && v[i + 1] <= v[i] + slack)
        ++i;
    while (i + 1 < v.size() && v[i + 1] >= v[i] - slack)
        ++i;
    return i + 1 == v.size();
}

} // namespace detail

/// Least-squares lambda in [0, 1]. Golden-section to 1e-4 inside the bracket
/// found by a 21-point scan; a 201-point scan replaces the coarse one when the
/// scan is not unimodal. The returned lambda is never worse than any scanned point.
inline LambdaFit fit_lambda(const std::vector<TrainingSample>& samples, const AngularMatrix& j)
{
    if (samples.empty())
        throw InputError("fit_lambda: empty training set");
    auto f = [&](double l) { return fit_mse(samples, j, l); };

    auto scan = [&](int n) {
        std::vector<double> v(std::size_t(n) + 1);
        for (int i = 0; i <= n; ++i)
            v[std::size_t(i)] = f(double(i) / n);
        return v;
    };
    LambdaFit out;
    int n = 20;
    auto values = scan(n);
    if (!detail::unimodal(values))
    {
        n = 200;
        values = scan(n);
        out.used_fallback = true;
    }
    const auto best = std::size_t(std::min_element(values.begin(), values.end()) - values.begin());
    const double lo = double(best == 0 ? 0 : best - 1) / n;
    const double hi = double(std::min<std::size_t>(best + 1, std::size_t(n))) / n;
    const double l = detail::golden_section(f, lo, hi, 1e-4);

    out.lambda = l;
    out.mse = f(l);
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] < out.mse)
        {
            out.lambda = double(i) / n;
            out.mse = values[i];
        }
    return out;
}

struct TrainingConfig
{
    double sigma_dbm_lo = -100.0;
    double sigma_dbm_hi = -60.0;
    int levels = 41;
    int per_level = 100;
    double r_max = 3.0;
    double w_power = 0.01; ///< average ||w||^2 in watts (10 dBm)
    int n_rho = 64;
    int n_fading = 200;
};

/// Training set: sigma_E^2 on a uniform dB grid, R ~ U(0, r_max),
/// w ~ CN(0, w_power / (K-1) I), target from mc_average_secrecy.
inline std::vector<TrainingSample> make_training_set(const Geometry& geom, const SystemParams& params,
                                                     const TrainingConfig& cfg, const CounterRng& rng)
{
    if (cfg.levels < 1 || cfg.per_level < 1)
        throw InputError("make_training_set: need at least one level and one sample per level");
    const int kh = geom.n_users() - 1;
    CounterRng draw = rng.substream(0);
    std::vector<TrainingSample> out;
    out.reserve(std::size_t(cfg.levels) * std::size_t(cfg.per_level));
    for (int lvl = 0; lvl < cfg.levels; ++lvl)
    {
        const double dbm = cfg.levels == 1 ? cfg.sigma_dbm_lo
                                           : cfg.sigma_dbm_lo + (cfg.sigma_dbm_hi - cfg.sigma_dbm_lo) * lvl / (cfg.levels - 1);
        SystemParams p = params;
        p.noise_eav = dbm_to_watts(dbm);
        for (int i = 0; i < cfg.per_level; ++i)
        {
            TrainingSample s;
            s.sigma_E2 = p.noise_eav;
            s.R = draw.uniform(0.0, cfg.r_max);
            s.w.resize(kh);
            for (int m = 0; m < kh; ++m)
                s.w[m] = std::sqrt(cfg.w_power / kh) * draw.complex_normal();
            const auto id = std::uint64_t(lvl) * std::uint64_t(cfg.per_level) + std::uint64_t(i) + 1;
            s.target_S = mc_average_secrecy(s.R, s.w, geom, p, cfg.n_rho, cfg.n_fading, rng.substream(id)).mean;
            out.push_back(std::move(s));
        }
    }
    return out;
}

/// Replaces targets with the model's own prediction at lambda0.
inline void make_self_consistent(std::vector<TrainingSample>& samples, const AngularMatrix& j, double lambda0)
{
    for (auto& s : samples)
        s.target_S = angular_secrecy(s.R, s.w, j, lambda0, s.sigma_E2);
}

} // namespace secrecy
} // namespace aauc
