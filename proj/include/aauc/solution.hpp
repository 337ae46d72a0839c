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

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace aauc {

enum class Method
{
    sco,
    closed_form,
    bfom,
    large_nk,
    direct,
};

enum class Termination
{
    max_iters,
    tol,
    stalled,
};

inline constexpr std::array<std::string_view, 5> method_names{"sco", "closed_form", "bfom", "large_nk", "direct"};

inline std::string_view to_string(Method m) { return method_names[std::size_t(m)]; }

inline Method parse_method(std::string_view s)
{
    for (std::size_t i = 0; i < method_names.size(); ++i)
        if (method_names[i] == s)
            return Method(i);
    throw InputError("unknown method '" + std::string(s) + "'");
}

inline std::string_view to_string(Termination t)
{
    switch (t)
    {
    case Termination::max_iters:
        return "max_iters";
    case Termination::tol:
        return "tol";
    case Termination::stalled:
        return "stalled";
    }
    return "?";
}

inline Termination parse_termination(std::string_view s)
{
    if (s == "max_iters")
        return Termination::max_iters;
    if (s == "tol")
        return Termination::tol;
    if (s == "stalled")
        return Termination::stalled;
    throw InputError("unknown termination '" + std::string(s) + "'");
}

/// BS beamformer in null-space coordinates (v = U z) and helper beamformer w.
/// For method = direct, z holds the full N-vector v and w is empty.
struct BeamformingSolution
{
    Method method = Method::sco;
    Eigen::VectorXcd z;
    Eigen::VectorXcd w;
    double p = 0.0;               ///< ||w||^2
    double budget_residual = 0.0; ///< 2 P_max - ||z||^2 - ||w||^2, or P_max - ||v||^2 for direct

    double power_used() const { return z.squaredNorm() + w.squaredNorm(); }
};

struct SolveReport
{
    std::vector<double> objective_trace; ///< bits/s/Hz, one entry per accepted outer iterate (first is the initializer)
    std::vector<int> inner_iterations;
    Termination termination = Termination::max_iters;
    double wall_time = 0.0; ///< seconds
};

inline BeamformingSolution make_solution(Method m, Eigen::VectorXcd z, Eigen::VectorXcd w, double budget)
{
    BeamformingSolution s;
    s.method = m;
    s.z = std::move(z);
    s.w = std::move(w);
    s.p = s.w.squaredNorm();
    s.budget_residual = budget - s.power_used();
    return s;
}

} // namespace aauc
