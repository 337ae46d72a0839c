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

// Baseline: one-phase multicast from the BS to every user with no
// cooperation, max_v min_k log2(1 + |g_k^H v|^2 / sigma_k^2), ||v||^2 <= P.

#pragma once

#include "aauc/channel.hpp"
#include "aauc/error.hpp"
#include "aauc/sco.hpp"
#include "aauc/solution.hpp"
#include "aauc/surrogate.hpp"

#include <Eigen/Dense>

#include <vector>

namespace aauc {

inline RateModel direct_model(const std::vector<Eigen::VectorXcd>& g, const std::vector<double>& noise, double p_max)
{
    if (g.empty() || g.size() != noise.size())
        throw InputError("direct_transmission: need one noise power per channel");
    if (!(p_max > 0.0))
        throw InputError("direct_transmission: p_max must be positive");
    RateModel m;
    m.prelog = 1.0;
    m.radius = std::sqrt(p_max);
    for (std::size_t k = 0; k < g.size(); ++k)
    {
        if (g[k].size() != g.front().size())
            throw InputError("direct_transmission: channels differ in length");
        if (!(noise[k] > 0.0))
            throw InputError("direct_transmission: noise powers must be positive");
        m.terms.push_back({g[k], noise[k]});
    }
    return m;
}

/// Start from the sum of the normalized channels at full power (MRT when K = 1).
inline BeamformingSolution direct_transmission(const std::vector<Eigen::VectorXcd>& g, const std::vector<double>& noise,
                                               double p_max, const ScoOptions& opt = {}, SolveReport* report = nullptr)
{
    const RateModel model = direct_model(g, noise, p_max);
    Eigen::VectorXcd v0 = Eigen::VectorXcd::Zero(g.front().size());
    for (const auto& gk : g)
        if (gk.norm() > 0.0)
            v0 += gk / gk.norm();
    if (!(v0.norm() > 0.0))
        v0 = g.front();
    if (!(v0.norm() > 0.0))
        throw NumericalError("direct_transmission: all channels are zero");
    v0 *= std::sqrt(p_max) / v0.norm();

    auto res = sco_maximize(model, v0, opt);
    if (report)
        *report = std::move(res.report);
    return make_solution(Method::direct, std::move(res.u), Eigen::VectorXcd(), p_max);
}

inline BeamformingSolution direct_transmission(const ChannelSet& cs, const SystemParams& params, const ScoOptions& opt = {},
                                               SolveReport* report = nullptr)
{
    std::vector<double> noise;
    for (std::size_t k = 0; k < cs.g.size(); ++k)
        noise.push_back(params.noise_user(int(k)));
    return direct_transmission(cs.g, noise, params.p_max, opt, report);
}

} // namespace aauc
