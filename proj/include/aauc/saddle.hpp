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

// Max-min of concave pieces over a Euclidean ball, solved as the saddle
// point of sum_k gamma_k f_k(x) over ball x simplex with a two-block
// mirror-prox method (Euclidean prox on the ball, entropic prox on the
// simplex, extragradient look-ahead).

#pragma once

#include "aauc/error.hpp"
#include "aauc/numerics.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace aauc::numerics {

/// Value/gradient oracle of one concave piece. Writes the gradient into
/// `grad` (already sized to the problem dimension) and returns the value.
using PieceOracle = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;

struct SaddleProblem
{
    std::vector<PieceOracle> pieces;
    Eigen::Index dimension = 0;
    double radius = 1.0;
    double lipschitz = 1.0; ///< Bregman Lipschitz constant; step scale is 1/(2L)

    std::size_t piece_count() const { return pieces.size(); }
};

struct SaddleSolution
{
    Eigen::VectorXd x_star;
    Eigen::VectorXd gamma_star;
    double value = 0.0; ///< min_k f_k(x_star)
    int iterations = 0;
    double gap_estimate = 0.0;
    double final_lipschitz = 0.0;
    bool converged = false;
};

struct SaddleOptions
{
    int max_iters = 5000;
    double tol = 1e-6;
    std::optional<Eigen::VectorXd> x0;     ///< defaults to the origin
    std::optional<Eigen::VectorXd> gamma0; ///< defaults to uniform weights
    /// Double L whenever the mirror-prox descent condition fails and relax
    /// it by 10% after each accepted step. With false, L stays fixed.
    bool backtracking = false;
};

namespace detail {

struct PieceEval
{
    Eigen::VectorXd values;
    Eigen::MatrixXd grads; // dimension x pieces
};

inline void evaluate_pieces(const SaddleProblem& p, const Eigen::VectorXd& x, PieceEval& out, int iteration)
{
    const auto k = Eigen::Index(p.pieces.size());
    out.values.resize(k);
    out.grads.resize(p.dimension, k);
    Eigen::VectorXd g(p.dimension);
    for (Eigen::Index i = 0; i < k; ++i)
    {
        g.setZero();
        const double v = p.pieces[std::size_t(i)](x, g);
        if (!std::isfinite(v) || !g.allFinite())
            throw NumericalError("saddle_solve: non-finite oracle output for piece " + std::to_string(i) + " at iteration " +
                                 std::to_string(iteration));
        out.values[i] = v;
        out.grads.col(i) = g;
    }
}

inline double kl_divergence(const Eigen::VectorXd& a, const Eigen::VectorXd& b)
{
    return (a.array() * (a.array() / b.array()).log()).sum();
}

// Linearization certificate: for concave f_k, max_x sum_k gamma_k f_k(x) is
// at most sum gamma f(x) + r ||g|| - g.x with g = G gamma; min_k f_k(x) is a
// lower bound on the saddle value.
inline double gap_certificate(const PieceEval& e, const Eigen::VectorXd& x, const Eigen::VectorXd& gamma, double radius)
{
    const Eigen::VectorXd g = e.grads * gamma;
    const double upper = e.values.dot(gamma) + radius * g.norm() - g.dot(x);
    return std::max(0.0, upper - e.values.minCoeff());
}

} // namespace detail

inline void validate(const SaddleProblem& p)
{
    if (p.pieces.empty())
        throw InputError("saddle_solve: need at least one piece");
    if (p.dimension <= 0)
        throw InputError("saddle_solve: dimension must be positive");
    if (!(p.radius > 0.0))
        throw InputError("saddle_solve: radius must be positive");
    if (!(p.lipschitz > 0.0) || !std::isfinite(p.lipschitz))
        throw InputError("saddle_solve: lipschitz must be positive and finite");
}

/// Mirror-prox for max_{||x|| <= r} min_k f_k(x). Stops when successive
/// ball-block iterates move by less than tol (l2) or after max_iters.
/// Returns the iterate with the largest min-piece value seen, so the
/// reported value is nondecreasing in the iteration budget.
inline SaddleSolution saddle_solve(const SaddleProblem& problem, const SaddleOptions& opt)
{
    validate(problem);
    const Eigen::Index dim = problem.dimension;
    const auto k = Eigen::Index(problem.pieces.size());

    Eigen::VectorXd y = opt.x0 ? project_ball(*opt.x0, problem.radius) : Eigen::VectorXd::Zero(dim);
    if (y.size() != dim)
        throw InputError("saddle_solve: x0 has the wrong dimension");
    Eigen::VectorXd eta = opt.gamma0 ? *opt.gamma0 : Eigen::VectorXd::Constant(k, 1.0 / double(k));
    if (eta.size() != k || !(eta.minCoeff() > 0.0))
        throw InputError("saddle_solve: gamma0 must be strictly positive with one entry per piece");
    eta /= eta.sum();

    double lip = problem.lipschitz;
    detail::PieceEval at_y, at_mid, at_next;
    detail::evaluate_pieces(problem, y, at_y, 0);

    SaddleSolution best;
    best.x_star = y;
    best.gamma_star = eta;
    best.value = at_y.values.minCoeff();
    best.gap_estimate = detail::gap_certificate(at_y, y, eta, problem.radius);

    int it = 0;
    bool converged = false;
    while (it < opt.max_iters)
    {
        ++it;
        const Eigen::VectorXd gx = at_y.grads * eta;

        Eigen::VectorXd y_mid, eta_mid, y_next, eta_next;
        for (int attempt = 0;; ++attempt)
        {
            const double s = 1.0 / (2.0 * lip);
            y_mid = project_ball(y + s * gx, problem.radius);
            eta_mid = mirror_simplex_step(eta, at_y.values, s);
            detail::evaluate_pieces(problem, y_mid, at_mid, it);

            const Eigen::VectorXd gx_mid = at_mid.grads * eta_mid;
            y_next = project_ball(y + s * gx_mid, problem.radius);
            eta_next = mirror_simplex_step(eta, at_mid.values, s);

            if (!opt.backtracking || attempt >= 60)
                break;
            // s <F(w) - F(z), w - z+> <= V_z(w) + V_w(z+), with F = (-grad_x, f).
            const double lhs =
                s * ((gx - gx_mid).dot(y_mid - y_next) + (at_mid.values - at_y.values).dot(eta_mid - eta_next));
            const double rhs = 0.5 * (y_mid - y).squaredNorm() + detail::kl_divergence(eta_mid, eta) +
                               0.5 * (y_next - y_mid).squaredNorm() + detail::kl_divergence(eta_next, eta_mid);
            if (lhs <= rhs + 1e-15 * (1.0 + std::abs(rhs)))
                break;
            lip *= 2.0;
        }

        const double step = (y_next - y).norm();
        y = std::move(y_next);
        eta = std::move(eta_next);
        detail::evaluate_pieces(problem, y, at_next, it);
        std::swap(at_y, at_next);

        const double v = at_y.values.minCoeff();
        if (v > best.value)
        {
            best.value = v;
            best.x_star = y;
            best.gamma_star = eta;
            best.gap_estimate = detail::gap_certificate(at_y, y, eta, problem.radius);
        }
        if (opt.backtracking)
            lip *= 0.9;
        if (step < opt.tol)
        {
            converged = true;
            break;
        }
    }

    best.iterations = it;
    best.final_lipschitz = lip;
    best.converged = converged;
    return best;
}

inline SaddleSolution saddle_solve(const SaddleProblem& problem, int max_iters, double tol)
{
    SaddleOptions opt;
    opt.max_iters = max_iters;
    opt.tol = tol;
    return saddle_solve(problem, opt);
}

} // namespace aauc::numerics
