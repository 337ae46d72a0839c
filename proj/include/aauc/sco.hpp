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

// Successive concave optimization: repeatedly maximize the concave minorant
// of the max-min objective around the current point. Each subproblem is a
// max-min of concave pieces over a ball, handed to the saddle solver warm
// started at the expansion point, so its value never drops below the
// current objective.

#pragma once

#include "aauc/channel.hpp"
#include "aauc/large_scale.hpp"
#include "aauc/saddle.hpp"
#include "aauc/secrecy.hpp"
#include "aauc/solution.hpp"
#include "aauc/surrogate.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <optional>

namespace aauc {

struct ScoOptions
{
    int outer_iters = 20;
    int inner_iters = 5000;
    double inner_tol = 1e-6;
    /// Stop early once an accepted step improves the objective by at most
    /// outer_tol * max(1, |objective|). Zero keeps the fixed iteration count.
    double outer_tol = 0.0;
};

struct ScoResult
{
    Eigen::VectorXcd u;
    SolveReport report;
};

/// Runs the successive scheme on a rate model from a feasible start u0.
/// A candidate is accepted only if the exact objective does not decrease.
inline ScoResult sco_maximize(const RateModel& model, const Eigen::VectorXcd& u0, const ScoOptions& opt = {})
{
    const auto t0 = std::chrono::steady_clock::now();
    if (opt.outer_iters < 1 || opt.inner_iters < 1 || !(opt.inner_tol >= 0.0) || !(opt.outer_tol >= 0.0))
        throw InputError("sco: invalid iteration settings");
    if (u0.size() != model.dim())
        throw InputError("sco: start point has the wrong dimension");
    if (u0.norm() > model.radius * (1.0 + 1e-12))
        throw InputError("sco: start point violates the power budget");

    ScoResult res;
    res.u = u0;
    double obj = model.objective(u0);
    if (!std::isfinite(obj))
        throw NumericalError("sco: non-finite objective at the start point");
    res.report.objective_trace.push_back(obj);
    res.report.termination = Termination::max_iters;

    std::optional<Eigen::VectorXd> gamma;
    std::optional<double> lip;
    for (int it = 0; it < opt.outer_iters; ++it)
    {
        auto problem = surrogate_problem(model, res.u);
        if (lip)
            problem.lipschitz = *lip;
        numerics::SaddleOptions so;
        so.max_iters = opt.inner_iters;
        so.tol = opt.inner_tol;
        so.x0 = to_real(res.u);
        so.backtracking = true;
        if (gamma)
            so.gamma0 = gamma->cwiseMax(1e-12) / gamma->cwiseMax(1e-12).sum();
        const auto sol = numerics::saddle_solve(problem, so);
        res.report.inner_iterations.push_back(sol.iterations);

        const Eigen::VectorXcd cand = to_complex(sol.x_star);
        const double cand_obj = model.objective(cand);
        if (!std::isfinite(cand_obj) || cand_obj < obj)
        {
            res.report.termination = Termination::stalled;
            break;
        }
        const double gain = cand_obj - obj;
        res.u = cand;
        obj = cand_obj;
        gamma = sol.gamma_star;
        lip = sol.final_lipschitz;
        res.report.objective_trace.push_back(obj);
        if (gain <= opt.outer_tol * std::max(1.0, std::abs(obj)))
        {
            res.report.termination = Termination::tol;
            break;
        }
    }
    res.report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

/// Default start: w = sqrt(P) h / ||h||, z equalizing the helpers with the other P.
inline Eigen::VectorXcd sco_initial_point(const ChannelSet& cs, const SystemParams& params)
{
    const double h2 = cs.h_attacked.squaredNorm();
    if (!(h2 > 0.0))
        throw NumericalError("sco: zero relay channel");
    const Eigen::VectorXcd w = cs.h_attacked * std::sqrt(params.p_max / h2);
    const Eigen::VectorXcd z = large_scale::equalizing_z(cs, params, params.p_max);
    return stack(z, w);
}

/// Maximize min(min_k Phi_k, Upsilon) over ||z||^2 + ||w||^2 <= 2 P_max.
inline BeamformingSolution sco_solve(const ChannelSet& cs, const AngularMatrix& j, const SystemParams& params,
                                     const ScoOptions& opt = {}, SolveReport* report = nullptr)
{
    params.validate();
    if (j.diag.size() != cs.h_attacked.size())
        throw InputError("sco_solve: J must have one entry per helper");
    const RateModel model = aauc_model(cs, j, params);
    auto res = sco_maximize(model, sco_initial_point(cs, params), opt);
    const Eigen::Index nz = cs.U.cols();
    Eigen::VectorXcd z = res.u.head(nz), w = res.u.tail(res.u.size() - nz);
    if (report)
        *report = std::move(res.report);
    return make_solution(Method::sco, std::move(z), std::move(w), 2.0 * params.p_max);
}

} // namespace aauc
