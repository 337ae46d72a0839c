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

// Solvers for large arrays.
//
// With many BS antennas the helper channels seen through the null space are
// nearly orthogonal, so the first phase reduces to a power split that
// equalizes the helper SNRs, and the helper beamformer has a closed form.
// With many users as well, the leakage term is dropped and the remaining
// max-min problem over (z, p) is solved either in closed form or by a
// first-order saddle method on its successive linearizations.

#pragma once

#include "aauc/channel.hpp"
#include "aauc/error.hpp"
#include "aauc/numerics.hpp"
#include "aauc/saddle.hpp"
#include "aauc/solution.hpp"
#include "aauc/surrogate.hpp"

#include <Eigen/Dense>

#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <vector>

namespace aauc {

namespace large_scale {

/// Effective helper channels U^H g_k, one per helper.
inline std::vector<Eigen::VectorXcd> projected_channels(const ChannelSet& cs)
{
    std::vector<Eigen::VectorXcd> out;
    for (int k : cs.helpers)
        out.push_back(cs.U.adjoint() * cs.g[std::size_t(k)]);
    return out;
}

/// S = sum_k sigma_k^2 / ||U^H g_k||^2.
inline double noise_sum(const ChannelSet& cs, const SystemParams& params)
{
    double s = 0.0;
    for (int k : cs.helpers)
    {
        const double gain = (cs.U.adjoint() * cs.g[std::size_t(k)]).squaredNorm();
        if (!(gain > 0.0))
            throw NumericalError("helper " + std::to_string(k) + " has no component outside the attacked user's channel");
        s += params.noise_user(k) / gain;
    }
    return s;
}

/// First-phase beamformer that spends `power` with the helper SNRs
/// xi_k ||U^H g_k||^2 / sigma_k^2 equal across helpers:
///   z = sum_k sqrt(xi_k) U^H g_k / ||U^H g_k||, xi_k proportional to sigma_k^2 / ||U^H g_k||^2.
/// The directions are only orthogonal asymptotically, so z is rescaled to
/// spend exactly `power`.
inline Eigen::VectorXcd equalizing_z(const ChannelSet& cs, const SystemParams& params, double power)
{
    if (!(power >= 0.0))
        throw InputError("equalizing_z: power must be nonnegative");
    const double s = noise_sum(cs, params);
    Eigen::VectorXcd z = Eigen::VectorXcd::Zero(cs.U.cols());
    for (int k : cs.helpers)
    {
        const Eigen::VectorXcd c = cs.U.adjoint() * cs.g[std::size_t(k)];
        const double gain = c.squaredNorm();
        const double xi = power * params.noise_user(k) / (s * gain);
        z += std::sqrt(xi) * c / std::sqrt(gain);
    }
    const double n2 = z.squaredNorm();
    if (n2 > 0.0)
        z *= std::sqrt(power / n2);
    return z;
}

} // namespace large_scale

/// Helper beamformer for large N. Maximizes the generalized Rayleigh quotient
///   w^H (Xi + h h^H / sigma_K^2) w / w^H (Xi + lambda J / sigma_E^2) w,
/// Xi = (h h^H S / sigma_K^2 + I) / (2P), normalized so w^H Xi w = 1. At that
/// scale the helper and relay rates coincide and the budget is saturated.
inline BeamformingSolution closed_form_large_n(const ChannelSet& cs, const AngularMatrix& j, const SystemParams& params)
{
    params.validate();
    const Eigen::Index nw = cs.h_attacked.size();
    if (j.diag.size() != nw)
        throw InputError("closed_form_large_n: J must have one entry per helper");
    const double two_p = 2.0 * params.p_max;
    const double s = large_scale::noise_sum(cs, params);
    const double sk2 = params.noise_user(cs.attacked);
    const Eigen::VectorXcd& h = cs.h_attacked;

    const Eigen::MatrixXcd hh = h * h.adjoint();
    const Eigen::MatrixXcd xi = (hh * (s / sk2) + Eigen::MatrixXcd::Identity(nw, nw)) / two_p;
    Eigen::MatrixXcd denom = xi;
    denom.diagonal().array() += params.lambda * j.diag.array() / params.noise_eav;

    const Eigen::MatrixXcd b = numerics::inv_sqrt(denom);
    Eigen::MatrixXcd m = b * (xi + hh / sk2) * b;
    m = 0.5 * (m + m.adjoint()).eval();
    const Eigen::VectorXcd q = numerics::dominant_eigvec(m);
    Eigen::VectorXcd w = b * q;
    const double scale = std::real(w.dot(xi * w));
    if (!(scale > 0.0))
        throw NumericalError("closed_form_large_n: degenerate normalization");
    w /= std::sqrt(scale);

    const double wp = std::min(w.squaredNorm(), two_p);
    Eigen::VectorXcd z = large_scale::equalizing_z(cs, params, two_p - wp);
    return make_solution(Method::closed_form, std::move(z), std::move(w), two_p);
}

/// Large N and K without the leakage term: p = 2P / (1 + ||h||^2 S / sigma_K^2),
/// w along h, z equalizing the helpers with the remaining power.
inline BeamformingSolution large_nk_power_split(const ChannelSet& cs, const SystemParams& params)
{
    params.validate();
    const double two_p = 2.0 * params.p_max;
    const double s = large_scale::noise_sum(cs, params);
    const double h2 = cs.h_attacked.squaredNorm();
    if (!(h2 > 0.0))
        throw NumericalError("large_nk_power_split: zero relay channel");
    const double p = two_p / (1.0 + h2 * s / params.noise_user(cs.attacked));
    Eigen::VectorXcd w = cs.h_attacked * std::sqrt(p / h2);
    Eigen::VectorXcd z = large_scale::equalizing_z(cs, params, two_p - p);
    return make_solution(Method::large_nk, std::move(z), std::move(w), two_p);
}

// --- first-order method on the linearized (z, p) problem ------------------

/// One linearized subproblem over x = [Re z; Im z], ||x||^2 <= 2P:
///   max_x min( r_k^T x + t_k (k over helpers), a (2P - ||x||^2) ),  a = ||h||^2 / sigma_K^2.
struct BfomSubproblem
{
    Eigen::MatrixXd r; ///< dimension x helpers
    Eigen::VectorXd t;
    double relay_gain = 0.0; ///< a
    double budget = 0.0;     ///< 2P

    Eigen::Index dimension() const { return r.rows(); }
    Eigen::Index pieces() const { return r.cols() + 1; }
    double radius() const { return std::sqrt(budget); }

    Eigen::VectorXd values(const Eigen::VectorXd& x) const
    {
        Eigen::VectorXd f(pieces());
        f.head(r.cols()) = r.transpose() * x + t;
        f[r.cols()] = relay_gain * (budget - x.squaredNorm());
        return f;
    }

    /// sum_k gamma_k grad f_k(x).
    Eigen::VectorXd grad_x(const Eigen::VectorXd& x, const Eigen::VectorXd& gamma) const
    {
        return r * gamma.head(r.cols()) - (2.0 * gamma[r.cols()] * relay_gain) * x;
    }

    /// Lipschitz bound of the saddle operator: max(max_k ||r_k||, 2 a max(sqrt(2P), 1)).
    double lipschitz_bound() const
    {
        const double helper = r.cols() ? r.colwise().norm().maxCoeff() : 0.0;
        return std::max(helper, 2.0 * relay_gain * std::max(radius(), 1.0));
    }

    numerics::SaddleProblem as_saddle_problem(double lipschitz) const
    {
        numerics::SaddleProblem sp;
        sp.dimension = dimension();
        sp.radius = radius();
        sp.lipschitz = lipschitz;
        for (Eigen::Index k = 0; k < r.cols(); ++k)
            sp.pieces.emplace_back([rk = Eigen::VectorXd(r.col(k)), tk = t[k]](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
                g = rk;
                return rk.dot(x) + tk;
            });
        sp.pieces.emplace_back([a = relay_gain, b = budget](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
            g = -2.0 * a * x;
            return a * (b - x.squaredNorm());
        });
        return sp;
    }
};

/// Linearize |c_k^H z|^2 / sigma_k^2 around z_n.
inline BfomSubproblem bfom_subproblem(const Eigen::VectorXcd& z_n, const ChannelSet& cs, const SystemParams& params)
{
    const auto proj = large_scale::projected_channels(cs);
    BfomSubproblem sp;
    sp.r.resize(2 * z_n.size(), Eigen::Index(proj.size()));
    sp.t.resize(Eigen::Index(proj.size()));
    for (std::size_t i = 0; i < proj.size(); ++i)
    {
        const double noise = params.noise_user(cs.helpers[i]);
        const std::complex<double> cz = proj[i].dot(z_n);
        sp.r.col(Eigen::Index(i)) = (2.0 / noise) * to_real(proj[i] * cz);
        sp.t[Eigen::Index(i)] = -std::norm(cz) / noise;
    }
    sp.relay_gain = cs.h_attacked.squaredNorm() / params.noise_user(cs.attacked);
    sp.budget = 2.0 * params.p_max;
    return sp;
}

/// Ratios lhs / (L * rhs) of the four Lipschitz inequalities of the saddle
/// operator at one sample; all four must be <= 1 for L to be valid.
///   0: ||grad_x(x,g) - grad_x(x',g)||_2   <= L ||x - x'||_2
///   1: ||grad_x(x,g) - grad_x(x,g')||_2   <= L ||g - g'||_1
///   2: ||f(x) - f(x)||_inf                <= L ||g - g'||_1  (f does not depend on gamma)
///   3: ||f(x) - f(x')||_inf               <= L ||x - x'||_2
inline std::array<double, 4> lipschitz_ratios(const BfomSubproblem& sp, double lipschitz, const Eigen::VectorXd& x,
                                              const Eigen::VectorXd& xp, const Eigen::VectorXd& g,
                                              const Eigen::VectorXd& gp)
{
    const double dx = (x - xp).norm();
    const double dg = (g - gp).lpNorm<1>();
    auto ratio = [&](double lhs, double rhs) { return rhs > 0.0 ? lhs / (lipschitz * rhs) : 0.0; };
    const Eigen::VectorXd fx = sp.values(x);
    return {
        ratio((sp.grad_x(x, g) - sp.grad_x(xp, g)).norm(), dx),
        ratio((sp.grad_x(x, g) - sp.grad_x(x, gp)).norm(), dg),
        ratio((fx - fx).lpNorm<Eigen::Infinity>(), dg),
        ratio((fx - sp.values(xp)).lpNorm<Eigen::Infinity>(), dx),
    };
}

struct BfomInnerResult
{
    Eigen::VectorXd y;
    double value = 0.0; ///< min_k f_k(y)
    int iterations = 0;
};

/// Mirror-prox on the linearized subproblem with a fixed step 1/(2L):
/// Euclidean prox on the ball, entropic prox on the simplex. Stops when
/// ||y^{m+1} - y^m|| < tol or after max_iters, returning the last iterate.
/// `observe`, if set, sees every (y, gamma) iterate.
inline BfomInnerResult bfom_inner(const BfomSubproblem& sp, double lipschitz, const Eigen::VectorXd& y0, int max_iters,
                                  double tol,
                                  const std::function<void(const Eigen::VectorXd&, const Eigen::VectorXd&)>& observe = {})
{
    const double s = 1.0 / (2.0 * lipschitz);
    const double rad = sp.radius();
    Eigen::VectorXd y = numerics::project_ball(y0, rad);
    Eigen::VectorXd eta = Eigen::VectorXd::Constant(sp.pieces(), 1.0 / double(sp.pieces()));
    BfomInnerResult out;
    int m = 0;
    while (m < max_iters)
    {
        ++m;
        const Eigen::VectorXd y_mid = numerics::project_ball(y + s * sp.grad_x(y, eta), rad);
        const Eigen::VectorXd eta_mid = numerics::mirror_simplex_step(eta, sp.values(y), s);
        Eigen::VectorXd y_next = numerics::project_ball(y + s * sp.grad_x(y_mid, eta_mid), rad);
        eta = numerics::mirror_simplex_step(eta, sp.values(y_mid), s);
        const double step = (y_next - y).norm();
        y = std::move(y_next);
        if (!y.allFinite())
            throw NumericalError("bfom: non-finite iterate at inner iteration " + std::to_string(m));
        if (observe)
            observe(y, eta);
        if (step < tol)
            break;
    }
    out.y = y;
    out.value = sp.values(y).minCoeff();
    out.iterations = m;
    return out;
}

/// Scale the direction of y back onto the equalizing budget: find tau in
/// [0, 2P] with min_k(sqrt(tau) r_k^T u + t_k) = a (2P - tau), u = y/||y||.
/// Bisection when the two sides cross; otherwise the best of a 512-point grid.
inline double bfom_recover_tau(const BfomSubproblem& sp, const Eigen::VectorXd& y)
{
    const double ny = y.norm();
    if (!(ny > 0.0))
        return 0.0;
    const Eigen::VectorXd proj = sp.r.transpose() * (y / ny);
    auto lhs = [&](double tau) { return (std::sqrt(tau) * proj + sp.t).minCoeff(); };
    auto rhs = [&](double tau) { return sp.relay_gain * (sp.budget - tau); };
    auto f = [&](double tau) { return lhs(tau) - rhs(tau); };

    double lo = 0.0, hi = sp.budget;
    if (f(lo) < 0.0 && f(hi) > 0.0)
    {
        for (int i = 0; i < 200 && hi - lo > 1e-15 * sp.budget; ++i)
        {
            const double mid = 0.5 * (lo + hi);
            (f(mid) < 0.0 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }
    double best_tau = 0.0, best = -1e300;
    for (int i = 0; i <= 512; ++i)
    {
        const double tau = sp.budget * i / 512.0;
        const double v = std::min(lhs(tau), rhs(tau));
        if (v > best)
        {
            best = v;
            best_tau = tau;
        }
    }
    return best_tau;
}

/// min( min_k |g_k^H U z|^2 / sigma_k^2, p ||h||^2 / sigma_K^2 ).
inline double large_nk_objective(const Eigen::VectorXcd& z, double p, const ChannelSet& cs, const SystemParams& params)
{
    double v = p * cs.h_attacked.squaredNorm() / params.noise_user(cs.attacked);
    for (int k : cs.helpers)
    {
        const std::complex<double> s = cs.g[std::size_t(k)].dot(cs.U * z);
        v = std::min(v, std::norm(s) / params.noise_user(k));
    }
    return v;
}

struct BfomOptions
{
    int outer_iters = 20;
    int inner_iters = 3000;
    double inner_tol = 1e-4;
    /// When positive, solve each subproblem with the generic saddle solver
    /// using this multiple of the inner budget instead of the dedicated loop.
    int reference_budget_factor = 0;
};

/// Successive linearization of the (z, p) max-min problem, each subproblem
/// solved by mirror-prox with L = L_hat / K. Returns w = sqrt(p) h / ||h||.
/// The trace holds 1/2 log2(1 + objective) per accepted iterate.
inline BeamformingSolution bfom_solve(const ChannelSet& cs, const SystemParams& params, const BfomOptions& opt = {},
                                      SolveReport* report = nullptr)
{
    const auto t0 = std::chrono::steady_clock::now();
    params.validate();
    if (opt.outer_iters < 0 || opt.inner_iters < 1 || !(opt.inner_tol >= 0.0))
        throw InputError("bfom_solve: invalid iteration settings");
    const double two_p = 2.0 * params.p_max;
    const double h2 = cs.h_attacked.squaredNorm();
    if (!(h2 > 0.0))
        throw NumericalError("bfom_solve: zero relay channel");

    Eigen::VectorXcd z = large_scale::equalizing_z(cs, params, params.p_max);
    double p = two_p - z.squaredNorm();
    double obj = large_nk_objective(z, p, cs, params);

    SolveReport rep;
    rep.objective_trace.push_back(0.5 * std::log2(1.0 + obj));
    rep.termination = Termination::max_iters;
    const double n_users = double(cs.helpers.size() + 1);

    for (int it = 0; it < opt.outer_iters; ++it)
    {
        const BfomSubproblem sp = bfom_subproblem(z, cs, params);
        const double lip = sp.lipschitz_bound() / n_users;
        const Eigen::VectorXd x0 = to_real(z);
        Eigen::VectorXd y;
        int inner = 0;
        if (opt.reference_budget_factor > 0)
        {
            numerics::SaddleOptions so;
            so.max_iters = opt.inner_iters * opt.reference_budget_factor;
            so.tol = opt.inner_tol / opt.reference_budget_factor;
            so.x0 = x0;
            so.backtracking = true;
            const auto sol = numerics::saddle_solve(sp.as_saddle_problem(lip), so);
            y = sol.x_star;
            inner = sol.iterations;
        }
        else
        {
            const auto res = bfom_inner(sp, lip, x0, opt.inner_iters, opt.inner_tol);
            y = res.y;
            inner = res.iterations;
        }
        rep.inner_iterations.push_back(inner);

        const double tau = bfom_recover_tau(sp, y);
        const double ny = y.norm();
        const Eigen::VectorXcd z_new = ny > 0.0 ? Eigen::VectorXcd(to_complex(y * (std::sqrt(tau) / ny)))
                                                : Eigen::VectorXcd(Eigen::VectorXcd::Zero(z.size()));
        const double p_new = two_p - z_new.squaredNorm();
        const double obj_new = large_nk_objective(z_new, p_new, cs, params);
        if (!(obj_new > obj))
        {
            rep.termination = obj_new == obj ? Termination::tol : Termination::stalled;
            break;
        }
        z = z_new;
        p = p_new;
        obj = obj_new;
        rep.objective_trace.push_back(0.5 * std::log2(1.0 + obj));
    }

    Eigen::VectorXcd w = cs.h_attacked * std::sqrt(std::max(p, 0.0) / h2);
    rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (report)
        *report = std::move(rep);
    return make_solution(Method::bfom, std::move(z), std::move(w), two_p);
}

} // namespace aauc
