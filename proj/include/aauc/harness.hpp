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


// Scenario generation, method dispatch and experiment sweeps.
//
// Every scenario is a pure function of (seed, template): the geometry, the
// channels and the evaluation fading each come from their own substream of
// the seed, so every method in a sweep cell sees the same scenario and the
// same Monte Carlo draws.

#pragma once

#include "aauc/channel.hpp"
#include "aauc/direct.hpp"
#include "aauc/evaluate.hpp"
#include "aauc/large_scale.hpp"
#include "aauc/rng.hpp"
#include "aauc/sco.hpp"
#include "aauc/secrecy.hpp"
#include "aauc/solution.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace aauc {

/// on_path: Rician users anywhere, eavesdropper on the attacked user's ray.
/// rayleigh_case: K_R = 0, users in the upper half plane with the attacked
/// one far out at 1000 m, eavesdropper at a fixed point in the lower half.
enum class Layout
{
    on_path,
    rayleigh_case
};

inline constexpr std::array<std::string_view, 2> layout_names{"on_path", "rayleigh_case"};

inline std::string_view to_string(Layout l) { return layout_names[std::size_t(l)]; }

inline Layout parse_layout(std::string_view s)
{
    for (std::size_t i = 0; i < layout_names.size(); ++i)
        if (layout_names[i] == s)
            return Layout(i);
    throw InputError("unknown layout '" + std::string(s) + "'");
}

struct Scenario
{
    std::uint64_t seed = 0;
    Layout layout = Layout::on_path;
    SystemParams params;
    Geometry geom;
    ChannelSet cs;
    AngularMatrix j;
    EavesdropperPlacement eav;
    double eav_rho = 0.0; ///< on-path draw of the eavesdropper's distance (informational)

    /// Stream for evaluate_solution; shared by all methods on this scenario.
    CounterRng eval_rng() const { return CounterRng(seed).substream(3); }
};

namespace harness {

inline constexpr double d_lo = 100.0, d_hi = 500.0, rayleigh_far = 1000.0;

inline Geometry draw_geometry(int n_users, Layout layout, CounterRng& rng)
{
    const double pi = std::numbers::pi;
    Geometry g;
    for (int k = 0; k < n_users; ++k)
    {
        const double d = rng.uniform(d_lo, d_hi);
        const double th = layout == Layout::on_path ? rng.uniform(-pi, pi) : rng.uniform(0.0, pi);
        g.users.push_back({d, th});
    }
    g.attacked = n_users - 1;
    if (layout == Layout::rayleigh_case)
        g.users.back().distance = rayleigh_far;
    return g;
}

} // namespace harness

/// Builds channels and J for a given geometry. The eavesdropper draw uses
/// the seed's substream 1 after the geometry, so it is stable across calls.
inline Scenario make_scenario(std::uint64_t seed, const SystemParams& templ, const Geometry& geom, Layout layout)
{
    Scenario s;
    s.seed = seed;
    s.layout = layout;
    s.params = templ;
    if (layout == Layout::rayleigh_case)
        s.params.rician_k = 0.0;
    s.params.validate();
    geom.validate();
    s.geom = geom;
    const CounterRng root(seed);
    CounterRng eav_rng = root.substream(4);
    const double dk = geom.users.at(std::size_t(geom.attacked)).distance;
    if (layout == Layout::on_path)
        s.eav_rho = eav_rng.uniform(0.0, dk);
    else
    {
        s.eav.on_path = false;
        s.eav.distance = eav_rng.uniform(harness::d_lo, harness::d_hi);
        s.eav.angle = eav_rng.uniform(-std::numbers::pi, 0.0);
    }
    CounterRng ch = root.substream(2);
    s.cs = channel::sample_channel_set(geom, s.params, ch);
    s.j = channel::angular_matrix(geom, s.params);
    return s;
}

/// D_k ~ U(100, 500), theta_k ~ U(-pi, pi), attacked user K-1; see Layout
/// for the Rayleigh variant.
inline Scenario generate_scenario(std::uint64_t seed, const SystemParams& templ, Layout layout = Layout::on_path)
{
    templ.validate();
    CounterRng g = CounterRng(seed).substream(1);
    return make_scenario(seed, templ, harness::draw_geometry(templ.n_users, layout, g), layout);
}

struct SolverSettings
{
    ScoOptions sco;
    BfomOptions bfom;
};

/// Runs one method on a scenario. The report's wall_time covers the solver
/// only; methods without iterations report a one-entry trace.
inline BeamformingSolution solve(Method m, const Scenario& s, const SolverSettings& cfg = {}, SolveReport* report = nullptr)
{
    SolveReport rep;
    const auto t0 = std::chrono::steady_clock::now();
    BeamformingSolution sol;
    switch (m)
    {
    case Method::sco:
        sol = sco_solve(s.cs, s.j, s.params, cfg.sco, &rep);
        break;
    case Method::closed_form:
        sol = closed_form_large_n(s.cs, s.j, s.params);
        break;
    case Method::bfom:
        sol = bfom_solve(s.cs, s.params, cfg.bfom, &rep);
        break;
    case Method::large_nk:
        sol = large_nk_power_split(s.cs, s.params);
        break;
    case Method::direct:
        sol = direct_transmission(s.cs, s.params, cfg.sco, &rep);
        break;
    }
    rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (m == Method::closed_form || m == Method::large_nk)
    {
        rep.objective_trace = {secrecy::objective_p2(sol.z, sol.w, s.cs, s.j, s.params)};
        rep.termination = Termination::tol;
    }
    if (report)
        *report = std::move(rep);
    return sol;
}

// --- sweeps ------------------------------------------------------------------

enum class Experiment
{
    rician_sweep,
    antenna_sweep,
    user_sweep,
    timing_sweep,
    rayleigh_case
};

inline constexpr std::array<std::string_view, 5> experiment_names{"rician_sweep", "antenna_sweep", "user_sweep",
                                                                  "timing_sweep", "rayleigh_case"};

inline std::string_view to_string(Experiment e) { return experiment_names[std::size_t(e)]; }

inline Experiment parse_experiment(std::string_view s)
{
    for (std::size_t i = 0; i < experiment_names.size(); ++i)
        if (experiment_names[i] == s)
            return Experiment(i);
    throw InputError("unknown experiment '" + std::string(s) + "'");
}

/// Swept quantity. rician_sweep: K_R in dB. antenna_sweep: N. user_sweep and
/// rayleigh_case: K. timing_sweep: N, or K when timing_axis is n_users.
struct SweepConfig
{
    Experiment experiment = Experiment::rician_sweep;
    int runs = 1;
    std::uint64_t seed = 1;
    std::vector<double> parameter_grid;
    std::vector<Method> methods;
    /// Adds a "hybrid" row per run: the better of direct transmission and the
    /// first AAUC method listed. Always on for rayleigh_case when possible.
    bool hybrid = false;
    McSettings mc;
    SystemParams params = default_params(64, 6);
    std::string timing_axis = "n_antennas";
    SolverSettings solvers;

    bool has_direct() const { return std::find(methods.begin(), methods.end(), Method::direct) != methods.end(); }

    std::optional<Method> first_aauc() const
    {
        for (Method m : methods)
            if (m != Method::direct)
                return m;
        return std::nullopt;
    }

    bool hybrid_rows() const
    {
        return (hybrid || experiment == Experiment::rayleigh_case) && has_direct() && first_aauc().has_value();
    }

    Layout layout() const { return experiment == Experiment::rayleigh_case ? Layout::rayleigh_case : Layout::on_path; }

    /// Template with the swept axis set to `value`.
    SystemParams params_at(double value) const
    {
        SystemParams p = params;
        auto as_count = [&](const char* what) {
            if (!(value >= 2.0) || value != std::round(value) || value > 1e6)
                throw InputError(std::string("sweep: grid values for ") + what + " must be integers >= 2");
            return int(value);
        };
        auto set_users = [&](int k) {
            if (k != p.n_users)
            {
                if (p.noise_users.empty() ||
                    std::any_of(p.noise_users.begin(), p.noise_users.end(), [&](double s) { return s != p.noise_users[0]; }))
                    throw InputError("sweep: sweeping K needs a single user noise level");
                p.noise_users.assign(std::size_t(k), p.noise_users[0]);
                p.n_users = k;
            }
        };
        switch (experiment)
        {
        case Experiment::rician_sweep:
            if (!std::isfinite(value))
                throw InputError("sweep: K_R grid values must be finite");
            p.rician_k = db_to_linear(value);
            break;
        case Experiment::antenna_sweep:
            p.n_antennas = as_count("N");
            break;
        case Experiment::user_sweep:
        case Experiment::rayleigh_case:
            set_users(as_count("K"));
            break;
        case Experiment::timing_sweep:
            if (timing_axis == "n_users")
                set_users(as_count("K"));
            else
                p.n_antennas = as_count("N");
            break;
        }
        return p;
    }

    void validate() const
    {
        if (runs < 1)
            throw InputError("sweep: runs must be >= 1");
        if (parameter_grid.empty())
            throw InputError("sweep: parameter_grid must not be empty");
        if (methods.empty())
            throw InputError("sweep: at least one method is required");
        if (hybrid && !(has_direct() && first_aauc()))
            throw InputError("sweep: hybrid needs direct and one AAUC method");
        if (mc.n_rho < 2 || mc.n_fading < 1)
            throw InputError("sweep: need n_rho >= 2 and n_fading >= 1");
        if (timing_axis != "n_antennas" && timing_axis != "n_users")
            throw InputError("sweep: timing_axis must be n_antennas or n_users");
        for (double v : parameter_grid)
            params_at(v).validate();
    }
};

struct SweepRow
{
    Experiment experiment = Experiment::rician_sweep;
    std::string method;
    double grid_value = 0.0;
    int run = 0;
    double secrecy_mc = 0.0;
    double secrecy_mc_stderr = 0.0;
    double secrecy_model = 0.0;
    double R = 0.0;
    double wall_time_s = 0.0;
    std::uint64_t seed = 0;
    bool error = false;
    std::string message; ///< not written to the CSV
};

/// seed xor hash(grid_value, run); -0.0 and 0.0 map to the same cell.
inline std::uint64_t cell_seed(std::uint64_t seed, double grid_value, int run)
{
    const double v = grid_value == 0.0 ? 0.0 : grid_value;
    return seed ^ mix64(std::bit_cast<std::uint64_t>(v) ^ mix64(std::uint64_t(run)));
}

/// Worker count: AAUC_THREADS if set to a positive integer, else the number
/// of logical cores.
inline unsigned sweep_threads()
{
    if (const char* env = std::getenv("AAUC_THREADS"))
    {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0)
            return unsigned(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace harness {

inline SweepRow run_method(const SweepConfig& cfg, const Scenario& s, Method m, double grid_value, int run)
{
    SweepRow row;
    row.experiment = cfg.experiment;
    row.method = std::string(to_string(m));
    row.grid_value = grid_value;
    row.run = run;
    row.seed = s.seed;
    try
    {
        SolveReport rep;
        const auto sol = solve(m, s, cfg.solvers, &rep);
        const auto ev = evaluate_solution(sol, s.geom, s.cs, s.j, s.params, cfg.mc, s.eval_rng(), s.eav);
        row.secrecy_mc = ev.mc_secrecy;
        row.secrecy_mc_stderr = ev.mc_stderr;
        row.secrecy_model = ev.model_secrecy;
        row.R = ev.R;
        row.wall_time_s = rep.wall_time;
        for (double v : {row.secrecy_mc, row.secrecy_mc_stderr, row.secrecy_model, row.R, row.wall_time_s})
            if (!std::isfinite(v))
                throw NumericalError("non-finite evaluation");
    }
    catch (const std::exception& e)
    {
        row.secrecy_mc = row.secrecy_mc_stderr = row.secrecy_model = row.R = row.wall_time_s = 0.0;
        row.error = true;
        row.message = e.what();
    }
    return row;
}

inline SweepRow error_row(const SweepConfig& cfg, std::string method, double grid_value, int run, std::uint64_t seed,
                          std::string message)
{
    SweepRow row;
    row.experiment = cfg.experiment;
    row.method = std::move(method);
    row.grid_value = grid_value;
    row.run = run;
    row.seed = seed;
    row.error = true;
    row.message = std::move(message);
    return row;
}

inline std::vector<SweepRow> run_cell(const SweepConfig& cfg, double grid_value, int run)
{
    const std::uint64_t seed = cell_seed(cfg.seed, grid_value, run);
    std::vector<SweepRow> rows;
    std::optional<Scenario> s;
    std::string failure;
    try
    {
        s = generate_scenario(seed, cfg.params_at(grid_value), cfg.layout());
    }
    catch (const std::exception& e)
    {
        failure = e.what();
    }
    for (Method m : cfg.methods)
        rows.push_back(s ? run_method(cfg, *s, m, grid_value, run)
                         : error_row(cfg, std::string(to_string(m)), grid_value, run, seed, failure));
    if (cfg.hybrid_rows())
    {
        auto find = [&](Method m) {
            return *std::find_if(rows.begin(), rows.end(), [&](const SweepRow& r) { return r.method == to_string(m); });
        };
        const SweepRow d = find(Method::direct), a = find(*cfg.first_aauc());
        SweepRow h = d.secrecy_mc >= a.secrecy_mc ? d : a;
        h.method = "hybrid";
        h.wall_time_s = d.wall_time_s + a.wall_time_s;
        if (d.error || a.error)
            h = error_row(cfg, "hybrid", grid_value, run, seed, d.error ? d.message : a.message);
        rows.push_back(std::move(h));
    }
    return rows;
}

} // namespace harness

/// Runs every (grid value, run) cell on a bounded worker pool. Rows come back
/// sorted by grid value, run and method name regardless of scheduling.
inline std::vector<SweepRow> run_sweep(const SweepConfig& cfg, unsigned threads = 0)
{
    cfg.validate();
    struct Cell
    {
        double value;
        int run;
    };
    std::vector<Cell> cells;
    for (double v : cfg.parameter_grid)
        for (int r = 0; r < cfg.runs; ++r)
            cells.push_back({v, r});

    std::vector<std::vector<SweepRow>> out(cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < cells.size();)
            out[i] = harness::run_cell(cfg, cells[i].value, cells[i].run);
    };
    const unsigned n = std::min<std::size_t>(threads ? threads : sweep_threads(), cells.size());
    if (n <= 1)
        worker();
    else
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < n; ++t)
            pool.emplace_back(worker);
    }

    std::vector<SweepRow> rows;
    for (auto& c : out)
        for (auto& r : c)
            rows.push_back(std::move(r));
    std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        if (a.grid_value != b.grid_value)
            return a.grid_value < b.grid_value;
        if (a.run != b.run)
            return a.run < b.run;
        return a.method < b.method;
    });
    return rows;
}

inline constexpr std::string_view sweep_csv_header =
    "experiment,method,grid_value,run,secrecy_mc,secrecy_mc_stderr,secrecy_model,R,wall_time_s,seed,error";

namespace harness {

/// Locale-independent shortest-ish decimal; every value we write is finite.
inline std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace harness

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows)
{
    using harness::fmt;
    os << sweep_csv_header << '\n';
    for (const auto& r : rows)
        os << to_string(r.experiment) << ',' << r.method << ',' << fmt(r.grid_value) << ',' << r.run << ','
           << fmt(r.secrecy_mc) << ',' << fmt(r.secrecy_mc_stderr) << ',' << fmt(r.secrecy_model) << ',' << fmt(r.R) << ','
           << fmt(r.wall_time_s) << ',' << r.seed << ',' << (r.error ? 1 : 0) << '\n';
}

} // namespace aauc
