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

// Max-min rate models and their first-order concave minorants.
//
// A model is min_k prelog * log2(1 + |c_k^H u|^2 / n_k) - prelog * log2(1 + u^H D u / s)
// over a complex vector u in a ball. The AAUC problem stacks u = (z; w); the
// direct-transmission baseline uses u = v with no penalty.
//
// Real coordinates: x = [Re u; Im u]. For real f, grad_x f = [Re; Im] of
// 2 df/d conj(u).

#pragma once

#include "aauc/channel.hpp"
#include "aauc/error.hpp"
#include "aauc/saddle.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

namespace aauc {

inline constexpr double log_arg_floor = 1e-9;

inline Eigen::VectorXd to_real(const Eigen::VectorXcd& u)
{
    Eigen::VectorXd x(2 * u.size());
    x << u.real(), u.imag();
    return x;
}

inline Eigen::VectorXcd to_complex(const Eigen::VectorXd& x)
{
    const Eigen::Index n = x.size() / 2;
    Eigen::VectorXcd u(n);
    u.real() = x.head(n);
    u.imag() = x.tail(n);
    return u;
}

struct RateTerm
{
    Eigen::VectorXcd c; ///< full length of u
    double noise = 1.0;
};

struct QuadPenalty
{
    Eigen::VectorXd d; ///< diagonal of D, full length of u
    double noise = 1.0;
};

struct RateModel
{
    std::vector<RateTerm> terms;
    std::optional<QuadPenalty> penalty;
    double prelog = 0.5;
    double radius = 1.0;

    Eigen::Index dim() const { return terms.front().c.size(); }

    double snr(std::size_t k, const Eigen::VectorXcd& u) const { return std::norm(terms[k].c.dot(u)) / terms[k].noise; }

    double leakage(const Eigen::VectorXcd& u) const
    {
        if (!penalty)
            return 0.0;
        const double q = (u.cwiseAbs2().array() * penalty->d.array()).sum();
        return prelog * std::log1p(q / penalty->noise) / std::numbers::ln2;
    }

    double term_value(std::size_t k, const Eigen::VectorXcd& u) const
    {
        return prelog * std::log1p(snr(k, u)) / std::numbers::ln2 - leakage(u);
    }

    double objective(const Eigen::VectorXcd& u) const
    {
        double v = 1e300;
        for (std::size_t k = 0; k < terms.size(); ++k)
            v = std::min(v, prelog * std::log1p(snr(k, u)) / std::numbers::ln2);
        return v - leakage(u);
    }

    /// Exact value and real gradient of term k (used for gradient checks).
    double term_value_grad(std::size_t k, const Eigen::VectorXcd& u, Eigen::VectorXd& grad) const
    {
        const auto& t = terms[k];
        const std::complex<double> cu = t.c.dot(u);
        const double s = std::norm(cu) / t.noise;
        // d|c^H u|^2 / d conj(u) = c (c^H u)
        const Eigen::VectorXcd wirt = (prelog / (std::numbers::ln2 * (1.0 + s) * t.noise)) * t.c * cu;
        Eigen::VectorXcd total = wirt;
        double value = prelog * std::log1p(s) / std::numbers::ln2;
        if (penalty)
        {
            const double q = (u.cwiseAbs2().array() * penalty->d.array()).sum();
            value -= prelog * std::log1p(q / penalty->noise) / std::numbers::ln2;
            total -= (prelog / (std::numbers::ln2 * (penalty->noise + q))) * (penalty->d.cast<std::complex<double>>().array() * u.array()).matrix();
        }
        grad = 2.0 * to_real(total);
        return value;
    }
};

/// Concave minorant of term k around u_star:
///   prelog log2(1 + 2 Re[a^H u]/n - s*) - prelog (q(u) - q*)/(ln2 (s_E + q*)) - prelog log2(1 + q*/s_E)
/// with a = c c^H u_star, s* = |c^H u_star|^2 / n and q(u) = u^H D u.
/// The log argument is floored at log_arg_floor; the gradient uses the floored value.
struct SurrogatePiece
{
    Eigen::VectorXd a_real; ///< 2/n [Re a; Im a]
    double offset = 1.0;    ///< 1 - s*
    double prelog = 0.5;
    Eigen::VectorXd d_real; ///< D duplicated over real and imaginary parts (empty if no penalty)
    double pen_slope = 0.0; ///< prelog / (ln2 (s_E + q*))
    double pen_const = 0.0; ///< pen_slope * q* - prelog log2(1 + q*/s_E)

    double operator()(const Eigen::VectorXd& x, Eigen::VectorXd& grad) const
    {
        const double raw = offset + a_real.dot(x);
        const double arg = std::max(raw, log_arg_floor);
        double value = prelog * std::log(arg) / std::numbers::ln2;
        grad = (prelog / (std::numbers::ln2 * arg)) * a_real;
        if (d_real.size())
        {
            const double q = (x.array().square() * d_real.array()).sum();
            value += -pen_slope * q + pen_const;
            grad.array() -= 2.0 * pen_slope * d_real.array() * x.array();
        }
        return value;
    }
};

inline SurrogatePiece make_surrogate_piece(const RateModel& m, std::size_t k, const Eigen::VectorXcd& u_star)
{
    const auto& t = m.terms[k];
    const std::complex<double> cu = t.c.dot(u_star);
    const Eigen::VectorXcd a = t.c * cu;
    SurrogatePiece p;
    p.a_real = (2.0 / t.noise) * to_real(a);
    p.offset = 1.0 - std::norm(cu) / t.noise;
    p.prelog = m.prelog;
    if (m.penalty)
    {
        const Eigen::Index n = u_star.size();
        p.d_real.resize(2 * n);
        p.d_real << m.penalty->d, m.penalty->d;
        const double q = (u_star.cwiseAbs2().array() * m.penalty->d.array()).sum();
        p.pen_slope = m.prelog / (std::numbers::ln2 * (m.penalty->noise + q));
        p.pen_const = p.pen_slope * q - m.prelog * std::log1p(q / m.penalty->noise) / std::numbers::ln2;
    }
    return p;
}

/// Saddle problem for the surrogate subproblem around u_star, over the ball of the model's radius.
inline numerics::SaddleProblem surrogate_problem(const RateModel& m, const Eigen::VectorXcd& u_star)
{
    numerics::SaddleProblem sp;
    sp.dimension = 2 * m.dim();
    sp.radius = m.radius;
    double lip = 0.0;
    for (std::size_t k = 0; k < m.terms.size(); ++k)
    {
        auto piece = make_surrogate_piece(m, k, u_star);
        Eigen::VectorXd g(sp.dimension);
        piece(to_real(u_star), g);
        lip = std::max(lip, g.norm());
        sp.pieces.emplace_back(std::move(piece));
    }
    sp.lipschitz = std::max(lip / m.radius, 1e-12);
    return sp;
}

/// The AAUC max-min model over u = (z; w): one term per helper, one relay term,
/// and the lambda J / sigma_E^2 leakage penalty on the w block.
inline RateModel aauc_model(const ChannelSet& cs, const AngularMatrix& j, const SystemParams& params)
{
    const Eigen::Index nz = cs.U.cols(), nw = cs.h_attacked.size();
    RateModel m;
    m.prelog = 0.5;
    m.radius = std::sqrt(2.0 * params.p_max);
    for (int k : cs.helpers)
    {
        RateTerm t;
        t.c = Eigen::VectorXcd::Zero(nz + nw);
        t.c.head(nz) = cs.U.adjoint() * cs.g[std::size_t(k)];
        t.noise = params.noise_user(k);
        m.terms.push_back(std::move(t));
    }
    RateTerm relay;
    relay.c = Eigen::VectorXcd::Zero(nz + nw);
    relay.c.tail(nw) = cs.h_attacked;
    relay.noise = params.noise_user(cs.attacked);
    m.terms.push_back(std::move(relay));
    QuadPenalty pen;
    pen.d = Eigen::VectorXd::Zero(nz + nw);
    pen.d.tail(nw) = params.lambda * j.diag;
    pen.noise = params.noise_eav;
    m.penalty = std::move(pen);
    return m;
}

inline Eigen::VectorXcd stack(const Eigen::VectorXcd& z, const Eigen::VectorXcd& w)
{
    Eigen::VectorXcd u(z.size() + w.size());
    u << z, w;
    return u;
}

/// Surrogate oracles for every helper term followed by the relay term,
/// expanded at (z_star, w_star), in stacked real coordinates.
inline std::vector<numerics::PieceOracle> surrogate_oracles(const Eigen::VectorXcd& z_star, const Eigen::VectorXcd& w_star,
                                                            const ChannelSet& cs, const AngularMatrix& j,
                                                            const SystemParams& params)
{
    return surrogate_problem(aauc_model(cs, j, params), stack(z_star, w_star)).pieces;
}

} // namespace aauc
