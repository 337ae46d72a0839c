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


// JSON documents for scenarios, solutions and sweep configs, and the
// training-set CSV. Powers are dBm and K_R / rho0 are dB in every file;
// everything is converted to linear units on load.
//
// Scenario:
//   { "seed": 7, "layout": "on_path",
//     "params": { "n_antennas": 64, "n_users": 6, "rician_k_db": 30, "pathloss_exp": 2.5,
//                 "rho0_db": -40, "d0": 1, "noise_users_dbm": -80 | [..K values..],
//                 "noise_eav_dbm": -80, "p_max_dbm": 30, "lambda": 0.64, "d_min": 1 },
//     "geometry": { "users": [{"distance": 300, "angle": 0.5}, ...], "attacked": 5,
//                   "eav_elevation": 0 } }
// Every params key is optional (defaults as default_params). Without
// "geometry" the users are drawn from the seed.
//
// Sweep config: "experiment", "runs", "seed", "parameter_grid", "methods"
// (solver names, plus "hybrid"), "n_rho", "n_fading", "timing_axis",
// "sco_outer_iters", "bfom_outer_iters", and a "params" object as above.

#pragma once

#include "aauc/channel.hpp"
#include "aauc/error.hpp"
#include "aauc/harness.hpp"
#include "aauc/secrecy.hpp"
#include "aauc/solution.hpp"

#include <json.hpp>

#include <complex>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace aauc::io {

using json = nlohmann::json;

namespace detail {

inline void only_keys(const json& j, std::initializer_list<const char*> keys, const char* what)
{
    if (!j.is_object())
        throw InputError(std::string(what) + ": expected an object");
    std::set<std::string> known(keys.begin(), keys.end());
    for (const auto& [k, v] : j.items())
        if (!known.count(k))
            throw InputError(std::string(what) + ": unknown key '" + k + "'");
}

template <class T>
T get(const json& j, const char* key, const char* what)
{
    try
    {
        return j.at(key).get<T>();
    }
    catch (const json::exception& e)
    {
        throw InputError(std::string(what) + ": bad or missing '" + key + "' (" + e.what() + ")");
    }
}

template <class T>
void get_opt(const json& j, const char* key, T& out, const char* what)
{
    if (j.contains(key))
        out = get<T>(j, key, what);
}

inline json cvec_to_json(const Eigen::VectorXcd& v)
{
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        a.push_back({v[i].real(), v[i].imag()});
    return a;
}

inline Eigen::VectorXcd cvec_from_json(const json& a, const char* what)
{
    if (!a.is_array())
        throw InputError(std::string(what) + ": expected an array of [re, im] pairs");
    Eigen::VectorXcd v(Eigen::Index(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        if (!a[i].is_array() || a[i].size() != 2 || !a[i][0].is_number() || !a[i][1].is_number())
            throw InputError(std::string(what) + ": expected an array of [re, im] pairs");
        v[Eigen::Index(i)] = {a[i][0].get<double>(), a[i][1].get<double>()};
    }
    return v;
}

} // namespace detail

inline json params_to_json(const SystemParams& p)
{
    json noise = json::array();
    for (double s : p.noise_users)
        noise.push_back(watts_to_dbm(s));
    return {{"n_antennas", p.n_antennas},    {"n_users", p.n_users},
            {"rician_k_db", p.rician_k > 0.0 ? json(linear_to_db(p.rician_k)) : json(nullptr)},
            {"pathloss_exp", p.pathloss_exp}, {"rho0_db", linear_to_db(p.rho0)},
            {"d0", p.d0},                    {"noise_users_dbm", noise},
            {"noise_eav_dbm", watts_to_dbm(p.noise_eav)},
            {"p_max_dbm", watts_to_dbm(p.p_max)},
            {"lambda", p.lambda},            {"d_min", p.d_min}};
}

/// Overlays the keys present in `j` on `base`. A scalar noise_users_dbm (or
/// none, when n_users changes) is broadcast to every user.
inline SystemParams params_from_json(const json& j, SystemParams base = default_params(64, 6))
{
    constexpr const char* what = "params";
    detail::only_keys(j,
                      {"n_antennas", "n_users", "rician_k_db", "pathloss_exp", "rho0_db", "d0", "noise_users_dbm",
                       "noise_eav_dbm", "p_max_dbm", "lambda", "d_min"},
                      what);
    SystemParams p = base;
    detail::get_opt(j, "n_antennas", p.n_antennas, what);
    detail::get_opt(j, "n_users", p.n_users, what);
    detail::get_opt(j, "pathloss_exp", p.pathloss_exp, what);
    detail::get_opt(j, "d0", p.d0, what);
    detail::get_opt(j, "lambda", p.lambda, what);
    detail::get_opt(j, "d_min", p.d_min, what);
    if (j.contains("rician_k_db")) // null is K_R = 0, pure Rayleigh
        p.rician_k = j.at("rician_k_db").is_null() ? 0.0 : db_to_linear(detail::get<double>(j, "rician_k_db", what));
    if (j.contains("rho0_db"))
        p.rho0 = db_to_linear(detail::get<double>(j, "rho0_db", what));
    if (j.contains("noise_eav_dbm"))
        p.noise_eav = dbm_to_watts(detail::get<double>(j, "noise_eav_dbm", what));
    if (j.contains("p_max_dbm"))
        p.p_max = dbm_to_watts(detail::get<double>(j, "p_max_dbm", what));
    if (p.n_users < 1)
        throw InputError("params: n_users must be positive");
    if (j.contains("noise_users_dbm"))
    {
        const json& n = j.at("noise_users_dbm");
        if (n.is_number())
            p.noise_users.assign(std::size_t(p.n_users), dbm_to_watts(n.get<double>()));
        else
        {
            p.noise_users.clear();
            for (double v : detail::get<std::vector<double>>(j, "noise_users_dbm", what))
                p.noise_users.push_back(dbm_to_watts(v));
        }
    }
    else if (std::ssize(p.noise_users) != p.n_users)
        p.noise_users.assign(std::size_t(p.n_users), base.noise_users.empty() ? dbm_to_watts(-80.0) : base.noise_users[0]);
    p.validate();
    return p;
}

inline json geometry_to_json(const Geometry& g)
{
    json users = json::array();
    for (const auto& u : g.users)
        users.push_back({{"distance", u.distance}, {"angle", u.angle}});
    return {{"users", users}, {"attacked", g.attacked}, {"eav_elevation", g.eav_elevation}};
}

inline Geometry geometry_from_json(const json& j)
{
    constexpr const char* what = "geometry";
    detail::only_keys(j, {"users", "attacked", "eav_elevation"}, what);
    Geometry g;
    const json& users = j.contains("users") ? j.at("users") : json();
    if (!users.is_array())
        throw InputError("geometry: 'users' must be an array");
    for (const auto& u : users)
    {
        detail::only_keys(u, {"distance", "angle"}, "geometry user");
        g.users.push_back({detail::get<double>(u, "distance", what), detail::get<double>(u, "angle", what)});
    }
    g.attacked = g.n_users() - 1;
    detail::get_opt(j, "attacked", g.attacked, what);
    detail::get_opt(j, "eav_elevation", g.eav_elevation, what);
    g.validate();
    return g;
}

/// What a scenario file pins down: the seed and template, and optionally
/// the geometry. Channels are always regenerated from the seed.
struct ScenarioSpec
{
    std::uint64_t seed = 1;
    Layout layout = Layout::on_path;
    SystemParams params = default_params(64, 6);
    std::optional<Geometry> geometry;

    Scenario build() const
    {
        if (geometry)
        {
            if (geometry->n_users() != params.n_users)
                throw InputError("scenario: geometry has " + std::to_string(geometry->n_users()) + " users, params say " +
                                 std::to_string(params.n_users));
            return make_scenario(seed, params, *geometry, layout);
        }
        return generate_scenario(seed, params, layout);
    }
};

inline json scenario_to_json(const ScenarioSpec& s)
{
    json j = {{"seed", s.seed}, {"layout", std::string(to_string(s.layout))}, {"params", params_to_json(s.params)}};
    if (s.geometry)
        j["geometry"] = geometry_to_json(*s.geometry);
    return j;
}

inline ScenarioSpec scenario_from_json(const json& j)
{
    constexpr const char* what = "scenario";
    detail::only_keys(j, {"seed", "layout", "params", "geometry"}, what);
    ScenarioSpec s;
    detail::get_opt(j, "seed", s.seed, what);
    if (j.contains("layout"))
        s.layout = parse_layout(detail::get<std::string>(j, "layout", what));
    if (j.contains("params"))
        s.params = params_from_json(j.at("params"));
    if (j.contains("geometry"))
    {
        s.geometry = geometry_from_json(j.at("geometry"));
        if (!j.contains("params") || !j.at("params").contains("n_users"))
            s.params = params_from_json(json{{"n_users", s.geometry->n_users()}}, s.params);
    }
    return s;
}

/// A solve result together with the scenario it was computed on.
struct StoredSolution
{
    BeamformingSolution solution;
    SolveReport report;
    ScenarioSpec scenario;
};

inline json solution_to_json(const StoredSolution& s)
{
    const auto& sol = s.solution;
    return {{"method", std::string(to_string(sol.method))},
            {"z", detail::cvec_to_json(sol.z)},
            {"w", detail::cvec_to_json(sol.w)},
            {"p", sol.p},
            {"budget_residual", sol.budget_residual},
            {"objective_trace", s.report.objective_trace},
            {"inner_iterations", s.report.inner_iterations},
            {"termination", std::string(to_string(s.report.termination))},
            {"wall_time", s.report.wall_time},
            {"scenario", scenario_to_json(s.scenario)}};
}

inline StoredSolution solution_from_json(const json& j)
{
    constexpr const char* what = "solution";
    detail::only_keys(j,
                      {"method", "z", "w", "p", "budget_residual", "objective_trace", "inner_iterations", "termination",
                       "wall_time", "scenario"},
                      what);
    StoredSolution s;
    auto& sol = s.solution;
    sol.method = parse_method(detail::get<std::string>(j, "method", what));
    sol.z = detail::cvec_from_json(j.contains("z") ? j.at("z") : json(), "solution z");
    sol.w = detail::cvec_from_json(j.contains("w") ? j.at("w") : json::array(), "solution w");
    sol.p = sol.w.squaredNorm();
    detail::get_opt(j, "budget_residual", sol.budget_residual, what);
    detail::get_opt(j, "objective_trace", s.report.objective_trace, what);
    detail::get_opt(j, "inner_iterations", s.report.inner_iterations, what);
    if (j.contains("termination"))
        s.report.termination = parse_termination(detail::get<std::string>(j, "termination", what));
    detail::get_opt(j, "wall_time", s.report.wall_time, what);
    if (!j.contains("scenario"))
        throw InputError("solution: missing 'scenario'");
    s.scenario = scenario_from_json(j.at("scenario"));
    return s;
}

inline SweepConfig sweep_config_from_json(const json& j)
{
    constexpr const char* what = "sweep config";
    detail::only_keys(j,
                      {"experiment", "runs", "seed", "parameter_grid", "methods", "n_rho", "n_fading", "params",
                       "timing_axis", "sco_outer_iters", "bfom_outer_iters"},
                      what);
    SweepConfig c;
    c.experiment = parse_experiment(detail::get<std::string>(j, "experiment", what));
    detail::get_opt(j, "runs", c.runs, what);
    detail::get_opt(j, "seed", c.seed, what);
    c.parameter_grid = detail::get<std::vector<double>>(j, "parameter_grid", what);
    for (const auto& name : detail::get<std::vector<std::string>>(j, "methods", what))
    {
        if (name == "hybrid")
            c.hybrid = true;
        else
            c.methods.push_back(parse_method(name));
    }
    detail::get_opt(j, "n_rho", c.mc.n_rho, what);
    detail::get_opt(j, "n_fading", c.mc.n_fading, what);
    detail::get_opt(j, "timing_axis", c.timing_axis, what);
    detail::get_opt(j, "sco_outer_iters", c.solvers.sco.outer_iters, what);
    detail::get_opt(j, "bfom_outer_iters", c.solvers.bfom.outer_iters, what);
    if (j.contains("params"))
        c.params = params_from_json(j.at("params"));
    c.validate();
    return c;
}

inline json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open '" + path + "'");
    try
    {
        return json::parse(in);
    }
    catch (const json::parse_error& e)
    {
        throw InputError("'" + path + "' is not valid JSON: " + e.what());
    }
}

/// Columns R, sigma_E2_dBm, w_power_dBm, target_S, model_S; model_S is the
/// angular model at `lambda`.
inline void write_training_csv(std::ostream& os, const std::vector<TrainingSample>& samples, const AngularMatrix& j,
                               double lambda)
{
    using harness::fmt;
    os << "R,sigma_E2_dBm,w_power_dBm,target_S,model_S\n";
    for (const auto& s : samples)
    {
        const double wp = s.w.squaredNorm();
        if (!(wp > 0.0))
            throw InputError("write_training_csv: zero helper beamformer has no dBm value");
        os << fmt(s.R) << ',' << fmt(watts_to_dbm(s.sigma_E2)) << ',' << fmt(watts_to_dbm(wp)) << ',' << fmt(s.target_S)
           << ',' << fmt(secrecy::angular_secrecy(s.R, s.w, j, lambda, s.sigma_E2)) << '\n';
    }
}

} // namespace aauc::io
