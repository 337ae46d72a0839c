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

#include "aauc/channel.hpp"
#include "aauc/rng.hpp"

#include <numbers>

namespace fixtures {

struct Instance
{
    aauc::SystemParams params;
    aauc::Geometry geom;
    aauc::ChannelSet cs;
    aauc::AngularMatrix j;
};

inline aauc::Geometry random_geometry(aauc::CounterRng& rng, int k)
{
    aauc::Geometry g;
    for (int i = 0; i < k; ++i)
        g.users.push_back({rng.uniform(100.0, 500.0), rng.uniform(-std::numbers::pi, std::numbers::pi)});
    g.attacked = k - 1;
    return g;
}

inline Instance random_instance(std::uint64_t seed, int n, int k)
{
    aauc::CounterRng rng(seed);
    Instance in;
    in.params = aauc::default_params(n, k);
    in.geom = random_geometry(rng, k);
    in.cs = aauc::channel::sample_channel_set(in.geom, in.params, rng);
    in.j = aauc::channel::angular_matrix(in.geom, in.params);
    return in;
}

inline Eigen::VectorXcd random_cvec(aauc::CounterRng& rng, Eigen::Index n, double scale = 1.0)
{
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v[i] = scale * rng.complex_normal();
    return v;
}

/// Random point with ||z||^2 + ||w||^2 <= radius^2.
inline std::pair<Eigen::VectorXcd, Eigen::VectorXcd> random_feasible(aauc::CounterRng& rng, Eigen::Index nz,
                                                                     Eigen::Index nw, double radius)
{
    Eigen::VectorXcd z = random_cvec(rng, nz), w = random_cvec(rng, nw);
    const double norm = std::sqrt(z.squaredNorm() + w.squaredNorm());
    const double target = radius * std::sqrt(rng.uniform());
    return {z * (target / norm), w * (target / norm)};
}

} // namespace fixtures
