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

#pragma once

#include "aauc/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <string>

namespace aauc::numerics {

using cplx = std::complex<double>;

// ------------------------------------------------------------------------
// Quadrature
// ------------------------------------------------------------------------

/// Composite Simpson rule on [a, b] with an even number of panels.
/// Exact for cubics. Throws NumericalError naming the abscissa if f is
/// not finite there.
template <typename F>
double integrate_1d(F&& f, double a, double b, int panels)
{
    if (!(a <= b))
        throw InputError("integrate_1d: require a <= b");
    if (panels < 2 || panels % 2 != 0)
        throw InputError("integrate_1d: panel count must be even and >= 2");

    const double h = (b - a) / panels;
    auto sample = [&](int i) {
        const double x = (i == panels) ? b : a + i * h;
        const double y = f(x);
        if (!std::isfinite(y))
        {
            std::ostringstream msg;
            msg.precision(17);
            msg << "integrate_1d: non-finite integrand at x = " << x;
            throw NumericalError(msg.str());
        }
        return y;
    };

    double odd = 0.0, even = 0.0;
    for (int i = 1; i < panels; ++i)
        (i % 2 ? odd : even) += sample(i);
    return h / 3.0 * (sample(0) + 4.0 * odd + 2.0 * even + sample(panels));
}

// ------------------------------------------------------------------------
// Dense complex linear algebra
// ------------------------------------------------------------------------

/// Orthonormal basis U (N x (N-1)) of the orthogonal complement of g,
/// taken from the trailing columns of the Householder QR factor of g.
inline Eigen::MatrixXcd null_space_basis(const Eigen::VectorXcd& g)
{
    const Eigen::Index n = g.size();
    if (n < 2)
        throw InputError("null_space_basis: need N >= 2");
    if (!(g.norm() > 0.0) || !g.allFinite())
        throw NumericalError("null_space_basis: g must be a nonzero finite vector");

    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
    return q.rightCols(n - 1);
}

inline double hermitian_defect(const Eigen::MatrixXcd& a)
{
    return (a - a.adjoint()).norm();
}

struct EigenPair
{
    Eigen::VectorXcd vector;
    double value = 0.0;
    int iterations = 0;
};

namespace detail {

// Rotate so the largest-magnitude entry is real and positive.
inline void fix_phase(Eigen::VectorXcd& q)
{
    Eigen::Index imax = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < q.size(); ++i)
    {
        const double m = std::abs(q[i]);
        if (m > best * (1.0 + 1e-12))
        {
            best = m;
            imax = i;
        }
    }
    if (best > 0.0)
        q *= std::conj(q[imax]) / best;
}

inline void require_hermitian(const Eigen::MatrixXcd& a, const char* who)
{
    if (a.rows() != a.cols() || a.rows() == 0)
        throw InputError(std::string(who) + ": matrix must be square and nonempty");
    if (!a.allFinite())
        throw NumericalError(std::string(who) + ": matrix has non-finite entries");
    if (hermitian_defect(a) > 1e-10 * std::max(1.0, a.norm()))
        throw InputError(std::string(who) + ": matrix is not Hermitian");
}

} // namespace detail

/// Dominant eigenpair of a Hermitian PSD matrix by power iteration from the
/// normalized all-ones vector (tolerance 1e-10 on the relative residual,
/// at most 10 000 iterations). The zero matrix yields e_0 with value 0.
inline EigenPair dominant_eigenpair(const Eigen::MatrixXcd& a)
{
    detail::require_hermitian(a, "dominant_eigvec");
    const Eigen::Index n = a.rows();
    const double anorm = a.norm();

    EigenPair out;
    if (anorm == 0.0)
    {
        out.vector = Eigen::VectorXcd::Unit(n, 0);
        return out;
    }

    constexpr double tol = 1e-10;
    constexpr int max_iters = 10000;

    Eigen::VectorXcd q = Eigen::VectorXcd::Ones(n) / std::sqrt(double(n));
    Eigen::VectorXcd aq = a * q;
    // An all-ones start orthogonal to the range restarts from the basis
    // vector on the largest diagonal entry.
    if (aq.norm() <= 1e-14 * anorm)
    {
        Eigen::Index i = 0;
        a.diagonal().real().maxCoeff(&i);
        q = Eigen::VectorXcd::Unit(n, i);
        aq = a * q;
    }

    for (int it = 1; it <= max_iters; ++it)
    {
        const double rayleigh = q.dot(aq).real();
        const double residual = (aq - rayleigh * q).norm();
        out.iterations = it;
        if (residual <= tol * anorm)
        {
            out.value = rayleigh;
            out.vector = q;
            detail::fix_phase(out.vector);
            return out;
        }
        const double norm = aq.norm();
        if (norm == 0.0)
            break;
        q = aq / norm;
        aq = a * q;
    }

    // Nearly degenerate dominant eigenvalues stall the power method; finish
    // with a direct eigensolver so the residual post-condition still holds.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
    out.vector = es.eigenvectors().col(n - 1);
    out.value = es.eigenvalues()[n - 1];
    detail::fix_phase(out.vector);
    return out;
}

inline Eigen::VectorXcd dominant_eigvec(const Eigen::MatrixXcd& a)
{
    return dominant_eigenpair(a).vector;
}

/// Inverse principal square root B = A^{-1/2} of a Hermitian positive
/// definite matrix, through its eigendecomposition.
inline Eigen::MatrixXcd inv_sqrt(const Eigen::MatrixXcd& a)
{
    detail::require_hermitian(a, "inv_sqrt");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
    if (es.info() != Eigen::Success)
        throw NumericalError("inv_sqrt: eigendecomposition failed");
    const Eigen::VectorXd& ev = es.eigenvalues();
    const double scale = ev.cwiseAbs().maxCoeff();
    if (!(ev.minCoeff() > 1e-14 * scale))
        throw NumericalError("inv_sqrt: matrix is singular or indefinite");
    const Eigen::MatrixXcd& v = es.eigenvectors();
    Eigen::MatrixXcd b = v * ev.cwiseSqrt().cwiseInverse().asDiagonal() * v.adjoint();
    return 0.5 * (b + b.adjoint());
}

// ------------------------------------------------------------------------
// Proximal maps
// ------------------------------------------------------------------------

/// Euclidean projection onto the ball of radius r.
inline Eigen::VectorXd project_ball(const Eigen::VectorXd& x, double r)
{
    if (!(r > 0.0))
        throw InputError("project_ball: radius must be positive");
    const double n = x.norm();
    if (n <= r)
        return x;
    return x * (r / n);
}

/// Entropic mirror step on the probability simplex:
/// eta'_k proportional to eta_k * exp(-scale * grad_k).
/// Evaluated in the log domain; entries that would underflow are floored
/// at the smallest normal double so the result stays strictly positive.
inline Eigen::VectorXd mirror_simplex_step(const Eigen::VectorXd& eta, const Eigen::VectorXd& grad, double scale)
{
    if (eta.size() != grad.size() || eta.size() == 0)
        throw InputError("mirror_simplex_step: dimension mismatch");
    if (!(scale > 0.0))
        throw InputError("mirror_simplex_step: scale must be positive");
    if (!(eta.minCoeff() > 0.0))
        throw InputError("mirror_simplex_step: eta must be strictly positive");
    if (!grad.allFinite())
        throw NumericalError("mirror_simplex_step: non-finite gradient");

    Eigen::VectorXd logits = eta.array().log() - scale * grad.array();
    logits.array() -= logits.maxCoeff();
    Eigen::VectorXd out = logits.array().exp();
    out /= out.sum();
    constexpr double floor = std::numeric_limits<double>::min();
    if (out.minCoeff() < floor)
    {
        out = out.cwiseMax(floor);
        out /= out.sum();
    }
    return out;
}

} // namespace aauc::numerics
