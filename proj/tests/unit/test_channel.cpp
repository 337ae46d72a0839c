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

#include "aauc/channel.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace aauc;
using namespace aauc::channel;

namespace {

constexpr double pi = std::numbers::pi;

SystemParams small_params(int n, int k)
{
    auto p = default_params(n, k);
    return p;
}

Geometry two_users(double d_helper, double th_helper, double d_att, double th_att)
{
    Geometry g;
    g.users = {{d_helper, th_helper}, {d_att, th_att}};
    g.attacked = 1;
    return g;
}

Geometry random_geometry(CounterRng& rng, int k)
{
    Geometry g;
    for (int i = 0; i < k; ++i)
        g.users.push_back({rng.uniform(100.0, 500.0), rng.uniform(-pi, pi)});
    g.attacked = k - 1;
    return g;
}

} // namespace

// --- steering -------------------------------------------------------------

TEST(Steering, Broadside)
{
    const auto a = steering_vector(0.0, 4);
    for (int m = 0; m < 4; ++m)
        EXPECT_NEAR(std::abs(a[m] - 1.0), 0.0, 1e-15);
}

TEST(Steering, Endfire)
{
    const auto a = steering_vector(pi / 2, 3);
    EXPECT_NEAR(std::abs(a[0] - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(a[1] + 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(a[2] - 1.0), 0.0, 1e-14);
}

TEST(Steering, SingleElementAndUnitModulus)
{
    EXPECT_EQ(steering_vector(1.234, 1)[0], std::complex<double>(1.0, 0.0));
    CounterRng rng(1);
    for (int rep = 0; rep < 100; ++rep)
    {
        const auto a = steering_vector(rng.uniform(-pi, pi), 17);
        EXPECT_EQ(a[0], std::complex<double>(1.0, 0.0));
        for (int m = 0; m < 17; ++m)
            ASSERT_NEAR(std::abs(a[m]), 1.0, 1e-14);
    }
}

// --- Rician BS -> user -----------------------------------------------------

TEST(Rician, LosDominantLimit)
{
    auto p = small_params(8, 2);
    p.rician_k = 1e12;
    CounterRng rng(3);
    const auto g = sample_rician_channel(1.0, 0.7, p, rng);
    const Eigen::VectorXcd ref = std::sqrt(p.rho0) * steering_vector(0.7, 8);
    EXPECT_LE((g - ref).norm(), 1e-5 * ref.norm());
}

TEST(Rician, MeanPowerMatchesPathloss)
{
    auto p = small_params(4, 2);
    p.rician_k = 2.0;
    CounterRng rng(4);
    const int draws = 100000;
    double sum = 0, sum2 = 0;
    for (int i = 0; i < draws; ++i)
    {
        const double v = sample_rician_channel(1.0, 0.3, p, rng).squaredNorm();
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / draws;
    const double se = std::sqrt((sum2 / draws - mean * mean) / draws);
    EXPECT_NEAR(mean, p.rho0 * 4, 3 * se);
}

TEST(Rician, RayleighIsZeroMean)
{
    auto p = small_params(2, 2);
    p.rician_k = 0.0;
    CounterRng rng(5);
    const int draws = 100000;
    std::complex<double> sum = 0;
    double pow = 0;
    for (int i = 0; i < draws; ++i)
    {
        const auto g = sample_rician_channel(1.0, 0.0, p, rng);
        sum += g[0];
        pow += std::norm(g[0]);
    }
    const double se = std::sqrt(pow / draws / 2.0 / draws);
    EXPECT_LE(std::abs(sum.real() / draws), 4 * se);
    EXPECT_LE(std::abs(sum.imag() / draws), 4 * se);
}

TEST(Rician, Deterministic)
{
    const auto p = small_params(16, 2);
    CounterRng a(77), b(77);
    EXPECT_EQ(sample_rician_channel(250.0, 1.0, p, a), sample_rician_channel(250.0, 1.0, p, b));
}

// --- distances --------------------------------------------------------------

TEST(EavDistance, Collinear)
{
    const auto p = small_params(4, 2);
    EXPECT_NEAR(eav_user_distance(40.0, 0, two_users(100, 0, 200, 0), p), 60.0, 1e-12);
}

TEST(EavDistance, OppositeSideAtOrigin)
{
    const auto p = small_params(4, 2);
    EXPECT_NEAR(eav_user_distance(0.0, 0, two_users(100, pi, 200, 0), p), 100.0, 1e-12);
}

TEST(EavDistance, FloorActiveOnTopOfHelper)
{
    const auto p = small_params(4, 2);
    EXPECT_EQ(eav_user_distance(100.0, 0, two_users(100, 0, 200, 0), p), p.d_min);
}

TEST(EavDistance, ElevationAddsVerticalLeg)
{
    auto geom = two_users(100, pi, 200, 0);
    geom.eav_elevation = std::atan(0.75);
    const auto p = small_params(4, 2);
    // eavesdropper at (40, 0, 30), helper at (-100, 0, 0)
    EXPECT_NEAR(eav_user_distance(40.0, 0, geom, p), std::hypot(140.0, 30.0), 1e-10);
}

TEST(EavDistance, ContinuousAndFloored)
{
    CounterRng rng(8);
    const auto p = small_params(4, 3);
    const auto geom = random_geometry(rng, 3);
    const double dk = geom.users[2].distance;
    double prev = eav_user_distance(0.0, 0, geom, p);
    for (int i = 1; i <= 10000; ++i)
    {
        const double d = eav_user_distance(dk * i / 10000.0, 0, geom, p);
        ASSERT_GE(d, p.d_min);
        ASSERT_LE(std::abs(d - prev), dk / 10000.0 + 1e-9); // 1-Lipschitz in rho
        prev = d;
    }
}

// --- eavesdropper channel ---------------------------------------------------

TEST(EavChannel, LosMagnitude)
{
    auto p = small_params(4, 3);
    p.rician_k = 1e12;
    Geometry geom;
    geom.users = {{150, 0.3}, {220, -1.1}, {300, 0.9}};
    geom.attacked = 2;
    CounterRng rng(9);
    const auto h = sample_eav_channel(120.0, geom, p, rng);
    ASSERT_EQ(h.size(), 2);
    for (int i = 0; i < 2; ++i)
    {
        const double ref = std::sqrt(p.pathloss(eav_user_distance(120.0, i, geom, p)));
        EXPECT_NEAR(std::abs(h[i]), ref, 1e-5 * ref);
    }
}

TEST(EavChannel, MeanPowerMatchesPathloss)
{
    auto p = small_params(4, 2);
    p.rician_k = 3.0;
    const auto geom = two_users(100, 2.0, 300, 0.0);
    const double ref = p.pathloss(eav_user_distance(50.0, 0, geom, p));
    CounterRng rng(10);
    const int draws = 100000;
    double sum = 0, sum2 = 0;
    for (int i = 0; i < draws; ++i)
    {
        const double v = std::norm(sample_eav_channel(50.0, geom, p, rng)[0]) / ref;
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / draws;
    const double se = std::sqrt((sum2 / draws - mean * mean) / draws);
    EXPECT_NEAR(mean, 1.0, 3 * se);
}

TEST(EavChannel, Deterministic)
{
    const auto p = small_params(4, 2);
    const auto geom = two_users(100, 2.0, 300, 0.0);
    CounterRng a(11), b(11);
    EXPECT_EQ(sample_eav_channel(10.0, geom, p, a), sample_eav_channel(10.0, geom, p, b));
}

TEST(ChannelSet, NullSpaceOfAttackedUser)
{
    const auto p = small_params(16, 4);
    CounterRng rng(12);
    const auto geom = random_geometry(rng, 4);
    const auto cs = sample_channel_set(geom, p, rng);
    ASSERT_EQ(cs.U.rows(), 16);
    ASSERT_EQ(cs.U.cols(), 15);
    ASSERT_EQ(cs.h_attacked.size(), 3);
    EXPECT_LE((cs.g[3].adjoint() * cs.U).norm(), 1e-10 * cs.g[3].norm());
    EXPECT_LE((cs.U.adjoint() * cs.U - Eigen::MatrixXcd::Identity(15, 15)).norm(), 1e-10);
}

// --- angular matrix ---------------------------------------------------------

TEST(AngularMatrix, FlatPathlossGivesRho0)
{
    auto p = small_params(4, 3);
    p.pathloss_exp = 0.0;
    CounterRng rng(13);
    const auto geom = random_geometry(rng, 3);
    const auto j = angular_matrix(geom, p);
    for (int i = 0; i < 2; ++i)
        EXPECT_NEAR(j.diag[i] / p.rho0, 1.0, 1e-12);
}

TEST(AngularMatrix, ClosedFormOppositeHelper)
{
    auto p = small_params(4, 2);
    p.pathloss_exp = 2.0;
    p.rho0 = 1.0;
    const auto j = angular_matrix(two_users(100, pi, 100, 0), p);
    EXPECT_NEAR(j.diag[0], 5e-5, 1e-8);
    EXPECT_NEAR(j.diag[0], 5e-5, 1e-12); // Simpson at 1024 panels is far tighter than required
}

TEST(AngularMatrix, MatchesMonteCarloOverRho)
{
    const auto p = small_params(4, 4);
    CounterRng rng(14);
    const auto geom = random_geometry(rng, 4);
    const auto j = angular_matrix(geom, p);
    const double dk = geom.users[3].distance;
    const int draws = 1000000;
    for (int i = 0; i < 3; ++i)
    {
        double sum = 0, sum2 = 0;
        for (int s = 0; s < draws; ++s)
        {
            const double v = p.pathloss(eav_user_distance(rng.uniform(0.0, dk), i, geom, p));
            sum += v;
            sum2 += v * v;
        }
        const double mean = sum / draws;
        const double se = std::sqrt((sum2 / draws - mean * mean) / draws);
        EXPECT_NEAR(j.diag[i], mean, 3 * se) << "helper " << i;
    }
}

TEST(AngularMatrix, RotationInvariant)
{
    const auto p = small_params(4, 5);
    CounterRng rng(15);
    for (int rep = 0; rep < 20; ++rep)
    {
        auto geom = random_geometry(rng, 5);
        geom.eav_elevation = rep % 2 ? 0.2 : 0.0;
        const auto j0 = angular_matrix(geom, p);
        const double c = rng.uniform(-pi, pi);
        for (auto& u : geom.users)
            u.angle += c;
        const auto j1 = angular_matrix(geom, p);
        for (int i = 0; i < 4; ++i)
            ASSERT_NEAR(j1.diag[i] / j0.diag[i], 1.0, 1e-12);
    }
}

TEST(AngularMatrix, DecreasesAwayFromSegment)
{
    const auto p = small_params(4, 2);
    const double dk = 300.0;
    double prev = 1e300;
    for (double off : {5.0, 20.0, 60.0, 150.0, 400.0})
    {
        // helper at (dk/2, off) in the frame where the attacked user sits on the x axis
        const auto geom = two_users(std::hypot(dk / 2, off), std::atan2(off, dk / 2), dk, 0.0);
        const double j = angular_matrix(geom, p).diag[0];
        EXPECT_LT(j, prev) << "offset " << off;
        prev = j;
    }
}

TEST(AngularMatrix, HelperNearPathBeatsOppositeHelper)
{
    // Same distance from the BS, one helper close to the BS -> attacked-user
    // bearing and one on the far side.
    const auto p = small_params(4, 3);
    Geometry geom;
    geom.users = {{200, 0.25}, {200, 0.25 + pi}, {300, 0.0}};
    geom.attacked = 2;
    const auto j = angular_matrix(geom, p);
    EXPECT_GT(j.diag[0], 5.0 * j.diag[1]);
}

TEST(AngularMatrix, PanelDoublingIsStable)
{
    const auto p = small_params(4, 6);
    CounterRng rng(16);
    for (int rep = 0; rep < 20; ++rep)
    {
        const auto geom = random_geometry(rng, 6);
        const auto a = angular_matrix(geom, p, 1024);
        const auto b = angular_matrix(geom, p, 2048);
        for (int i = 0; i < 5; ++i)
            ASSERT_LE(std::abs(a.diag[i] - b.diag[i]), 1e-6 * b.diag[i]);
    }
}
