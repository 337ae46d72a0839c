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

#include "aauc/harness.hpp"
#include "aauc/secrecy.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

using namespace aauc;

namespace {

SweepConfig small_config()
{
    SweepConfig c;
    c.experiment = Experiment::antenna_sweep;
    c.runs = 2;
    c.seed = 77;
    c.parameter_grid = {8, 4};
    c.methods = {Method::large_nk, Method::closed_form, Method::direct};
    c.mc = {8, 20};
    c.params = default_params(8, 3);
    c.solvers.sco.outer_iters = 3;
    return c;
}

// Drops the wall_time_s column.
std::string without_wall_time(const std::string& csv)
{
    std::istringstream in(csv);
    std::ostringstream out;
    for (std::string line; std::getline(in, line);)
    {
        std::vector<std::string> f;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');)
            f.push_back(cell);
        f.erase(f.begin() + 8);
        for (const auto& cell : f)
            out << cell << ';';
        out << '\n';
    }
    return out.str();
}

} // namespace

TEST(Scenario, RepeatIsIdentical)
{
    const auto p = default_params(8, 4);
    const auto a = generate_scenario(9, p), b = generate_scenario(9, p), c = generate_scenario(10, p);
    for (std::size_t k = 0; k < 4; ++k)
        EXPECT_EQ(a.cs.g[k], b.cs.g[k]);
    EXPECT_EQ(a.cs.h_attacked, b.cs.h_attacked);
    EXPECT_EQ(a.cs.U, b.cs.U);
    EXPECT_EQ(a.j.diag, b.j.diag);
    EXPECT_EQ(a.eav_rho, b.eav_rho);
    EXPECT_NE(a.cs.g[0], c.cs.g[0]);
}

TEST(Scenario, DistancesAreUniformOnTheRange)
{
    // 10^4 distances through the same draw the generator uses.
    double sum = 0.0, lo = 1e300, hi = -1e300;
    int n = 0;
    for (std::uint64_t seed = 0; seed < 2000; ++seed)
    {
        CounterRng rng = CounterRng(seed).substream(1);
        for (const auto& u : harness::draw_geometry(5, Layout::on_path, rng).users)
        {
            sum += u.distance;
            lo = std::min(lo, u.distance);
            hi = std::max(hi, u.distance);
            EXPECT_GE(u.angle, -std::numbers::pi);
            EXPECT_LE(u.angle, std::numbers::pi);
            ++n;
        }
    }
    ASSERT_EQ(n, 10000);
    EXPECT_GE(lo, 100.0);
    EXPECT_LE(hi, 500.0);
    const double se = 400.0 / std::sqrt(12.0) / std::sqrt(double(n));
    EXPECT_NEAR(sum / n, 300.0, 3.0 * se);
}

TEST(Scenario, GeneratorUsesTheGeometryDraw)
{
    const auto p = default_params(6, 3);
    for (std::uint64_t seed : {1u, 2u, 3u})
    {
        const auto s = generate_scenario(seed, p);
        CounterRng rng = CounterRng(seed).substream(1);
        const auto g = harness::draw_geometry(3, Layout::on_path, rng);
        for (int k = 0; k < 3; ++k)
            EXPECT_EQ(s.geom.users[std::size_t(k)].distance, g.users[std::size_t(k)].distance);
        EXPECT_EQ(s.geom.attacked, 2);
        EXPECT_GE(s.eav_rho, 0.0);
        EXPECT_LE(s.eav_rho, s.geom.users[2].distance);
        EXPECT_TRUE(s.eav.on_path);
    }
}

TEST(Scenario, RayleighLayout)
{
    const auto s = generate_scenario(4, default_params(8, 5), Layout::rayleigh_case);
    EXPECT_EQ(s.params.rician_k, 0.0);
    EXPECT_EQ(s.geom.users.back().distance, 1000.0);
    for (const auto& u : s.geom.users)
    {
        EXPECT_GE(u.angle, 0.0);
        EXPECT_LE(u.angle, std::numbers::pi);
    }
    EXPECT_FALSE(s.eav.on_path);
    EXPECT_GE(s.eav.distance, 100.0);
    EXPECT_LE(s.eav.distance, 500.0);
    EXPECT_GE(s.eav.angle, -std::numbers::pi);
    EXPECT_LE(s.eav.angle, 0.0);
}

TEST(Solve, DispatchesEveryMethod)
{
    const auto s = generate_scenario(5, default_params(8, 4));
    for (Method m : {Method::sco, Method::closed_form, Method::bfom, Method::large_nk, Method::direct})
    {
        SolveReport rep;
        const auto sol = solve(m, s, {}, &rep);
        EXPECT_EQ(sol.method, m);
        EXPECT_GE(sol.budget_residual, -1e-9) << to_string(m);
        EXPECT_FALSE(rep.objective_trace.empty()) << to_string(m);
        EXPECT_GE(rep.wall_time, 0.0);
        if (m == Method::direct)
            EXPECT_EQ(sol.z.size(), 8);
        else
            EXPECT_EQ(sol.w.size(), 3);
    }
}

TEST(Sweep, CellSeeds)
{
    EXPECT_EQ(cell_seed(5, 8.0, 1), cell_seed(5, 8.0, 1));
    EXPECT_NE(cell_seed(5, 8.0, 1), cell_seed(5, 8.0, 2));
    EXPECT_NE(cell_seed(5, 8.0, 1), cell_seed(5, 16.0, 1));
    EXPECT_NE(cell_seed(5, 8.0, 1), cell_seed(6, 8.0, 1));
    EXPECT_EQ(cell_seed(5, 0.0, 0), cell_seed(5, -0.0, 0));
}

TEST(Sweep, OneRowPerCellAndMethodSortedAndSeeded)
{
    const auto cfg = small_config();
    const auto rows = run_sweep(cfg, 2);
    ASSERT_EQ(rows.size(), 2u * 2u * 3u);
    std::map<std::pair<double, int>, std::set<std::uint64_t>> seeds;
    for (std::size_t i = 0; i < rows.size(); ++i)
    {
        const auto& r = rows[i];
        EXPECT_FALSE(r.error) << r.message;
        seeds[{r.grid_value, r.run}].insert(r.seed);
        EXPECT_EQ(r.seed, cell_seed(cfg.seed, r.grid_value, r.run));
        if (i > 0)
        {
            const auto& q = rows[i - 1];
            EXPECT_TRUE(std::tie(q.grid_value, q.run, q.method) < std::tie(r.grid_value, r.run, r.method));
        }
        EXPECT_GE(r.secrecy_mc, 0.0);
        EXPECT_LE(r.secrecy_mc, r.R + 1e-12);
    }
    EXPECT_EQ(rows.front().grid_value, 4.0);
    ASSERT_EQ(seeds.size(), 4u);
    for (const auto& [cell, s] : seeds)
        EXPECT_EQ(s.size(), 1u); // methods share the scenario
    const auto run0 = *seeds[{4.0, 0}].begin(), run1 = *seeds[{4.0, 1}].begin();
    EXPECT_NE(run0, run1);
}

TEST(Sweep, CsvIsDeterministicModuloWallTime)
{
    const auto cfg = small_config();
    std::ostringstream a, b;
    write_sweep_csv(a, run_sweep(cfg, 1));
    write_sweep_csv(b, run_sweep(cfg, 3));
    EXPECT_EQ(without_wall_time(a.str()), without_wall_time(b.str()));

    std::istringstream in(a.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "experiment,method,grid_value,run,secrecy_mc,secrecy_mc_stderr,secrecy_model,R,wall_time_s,seed,error");
    int rows = 0;
    while (std::getline(in, line))
    {
        ++rows;
        std::stringstream ls(line);
        std::vector<std::string> f;
        for (std::string cell; std::getline(ls, cell, ',');)
            f.push_back(cell);
        ASSERT_EQ(f.size(), 11u);
        EXPECT_EQ(f[0], "antenna_sweep");
        for (int c : {2, 4, 5, 6, 7, 8})
            EXPECT_TRUE(std::isfinite(std::stod(f[std::size_t(c)]))) << line;
        EXPECT_EQ(f[10], "0");
    }
    EXPECT_EQ(rows, 12);
    EXPECT_EQ(a.str().find('\r'), std::string::npos);
    EXPECT_EQ(a.str().find("nan"), std::string::npos);
}

TEST(Sweep, MethodChoiceDoesNotChangeTheScenario)
{
    auto cfg = small_config();
    const auto all = run_sweep(cfg, 1);
    cfg.methods = {Method::closed_form};
    const auto one = run_sweep(cfg, 1);
    ASSERT_EQ(one.size(), 4u);
    for (const auto& r : one)
    {
        const auto it = std::find_if(all.begin(), all.end(), [&](const SweepRow& q) {
            return q.grid_value == r.grid_value && q.run == r.run && q.method == r.method;
        });
        ASSERT_NE(it, all.end());
        EXPECT_EQ(it->secrecy_mc, r.secrecy_mc);
        EXPECT_EQ(it->R, r.R);
        EXPECT_EQ(it->seed, r.seed);
    }
}

TEST(Sweep, SolverFailureBecomesAFlaggedRow)
{
    const auto cfg = small_config();
    auto s = generate_scenario(1, cfg.params);
    s.cs.h_attacked.setZero(); // no relay link: the power split is undefined
    const auto row = harness::run_method(cfg, s, Method::large_nk, 8.0, 0);
    EXPECT_TRUE(row.error);
    EXPECT_FALSE(row.message.empty());
    EXPECT_EQ(row.secrecy_mc, 0.0);
    EXPECT_EQ(row.R, 0.0);
    std::ostringstream os;
    write_sweep_csv(os, {row});
    EXPECT_NE(os.str().find(",1\n"), std::string::npos);
}

TEST(Sweep, HybridTakesTheBetterMode)
{
    SweepConfig cfg;
    cfg.experiment = Experiment::rayleigh_case;
    cfg.runs = 2;
    cfg.parameter_grid = {4};
    cfg.methods = {Method::large_nk, Method::direct};
    cfg.mc = {8, 20};
    cfg.params = default_params(8, 4);
    const auto rows = run_sweep(cfg, 1);
    ASSERT_EQ(rows.size(), 6u); // the Rayleigh case always reports the hybrid
    for (int run = 0; run < 2; ++run)
    {
        std::map<std::string, SweepRow> by;
        for (const auto& r : rows)
            if (r.run == run)
                by[r.method] = r;
        ASSERT_EQ(by.size(), 3u);
        EXPECT_EQ(by["hybrid"].secrecy_mc, std::max(by["direct"].secrecy_mc, by["large_nk"].secrecy_mc));
        EXPECT_NEAR(by["hybrid"].wall_time_s, by["direct"].wall_time_s + by["large_nk"].wall_time_s, 1e-12);
    }
}

TEST(Sweep, GridAxes)
{
    SweepConfig c = small_config();
    c.experiment = Experiment::rician_sweep;
    EXPECT_NEAR(c.params_at(20.0).rician_k, 100.0, 1e-10);
    c.experiment = Experiment::user_sweep;
    EXPECT_EQ(c.params_at(7).n_users, 7);
    EXPECT_EQ(c.params_at(7).noise_users.size(), 7u);
    EXPECT_THROW(c.params_at(1), InputError);
    c.experiment = Experiment::timing_sweep;
    EXPECT_EQ(c.params_at(32).n_antennas, 32);
    c.timing_axis = "n_users";
    EXPECT_EQ(c.params_at(5).n_users, 5);
    c.params.noise_users = {1e-11, 2e-11, 3e-11};
    EXPECT_THROW(c.params_at(5), InputError);
}

TEST(Sweep, ThreadCountFromEnvironment)
{
    ::setenv("AAUC_THREADS", "3", 1);
    EXPECT_EQ(sweep_threads(), 3u);
    ::setenv("AAUC_THREADS", "zero", 1);
    EXPECT_GE(sweep_threads(), 1u);
    ::unsetenv("AAUC_THREADS");
    EXPECT_GE(sweep_threads(), 1u);
}

TEST(Sweep, RicianLineOfSightDefeatsDirectTransmission)
{
    // Small version of the K_R = 30 dB comparison.
    SweepConfig cfg;
    cfg.experiment = Experiment::rician_sweep;
    cfg.runs = 4;
    cfg.seed = 2024;
    cfg.parameter_grid = {30};
    cfg.methods = {Method::sco, Method::direct};
    cfg.mc = {32, 50};
    cfg.params = default_params(16, 4);
    double aauc = 0.0, direct = 0.0;
    for (const auto& r : run_sweep(cfg))
    {
        ASSERT_FALSE(r.error) << r.message;
        (r.method == "sco" ? aauc : direct) += r.secrecy_mc / cfg.runs;
    }
    EXPECT_GT(aauc, 0.0);
    EXPECT_LT(direct, 0.05);
}
