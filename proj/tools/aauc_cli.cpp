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


// aauc command line: fit-lambda, solve, eval, sweep.
// Exit status: 0 success, 1 usage or input error, 2 numerical failure.

#include "aauc/aauc.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

using namespace aauc;
using io::json;

namespace {

struct Common
{
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string config;
};

void add_common(CLI::App* sub, Common& c, const std::string& config_help)
{
    sub->add_option("--seed", c.seed, "64-bit seed");
    sub->add_option("--out", c.out, "output file (default: stdout)");
    sub->add_option("--config", c.config, config_help);
}

// Writes to --out, or stdout when it is empty.
void emit(const std::string& path, const std::string& text)
{
    if (path.empty())
    {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << text) || !(f.flush()))
        throw InputError("cannot write '" + path + "'");
}

io::ScenarioSpec load_scenario(const Common& c)
{
    io::ScenarioSpec spec;
    if (!c.config.empty())
        spec = io::scenario_from_json(io::read_json_file(c.config));
    if (c.seed)
        spec.seed = *c.seed;
    return spec;
}

// --- fit-lambda ---

struct FitArgs
{
    Common common;
    secrecy::TrainingConfig training;
    std::optional<double> self_consistent;
};

int run_fit(const FitArgs& a)
{
    io::ScenarioSpec spec;
    spec.params = default_params(64, 3);
    if (!a.common.config.empty())
        spec = io::scenario_from_json(io::read_json_file(a.common.config));
    if (a.common.seed)
        spec.seed = *a.common.seed;
    const Scenario s = spec.build();

    secrecy::TrainingConfig cfg = a.training;
    if (a.self_consistent)
    {
        if (!(*a.self_consistent >= 0.0 && *a.self_consistent <= 1.0))
            throw InputError("--self-consistent must lie in [0, 1]");
        cfg.n_rho = 2; // targets are replaced below, keep the Monte Carlo pass trivial
        cfg.n_fading = 1;
    }
    auto samples = secrecy::make_training_set(s.geom, s.params, cfg, CounterRng(s.seed).substream(5));
    if (a.self_consistent)
        secrecy::make_self_consistent(samples, s.j, *a.self_consistent);
    const auto fit = secrecy::fit_lambda(samples, s.j);
    if (!a.common.out.empty())
    {
        std::ostringstream csv;
        io::write_training_csv(csv, samples, s.j, fit.lambda);
        emit(a.common.out, csv.str());
    }
    std::printf("lambda %.6f\nmse %.6g\nsamples %zu\n", fit.lambda, fit.mse, samples.size());
    return 0;
}

// --- solve ---

struct SolveArgs
{
    Common common;
    std::string method;
    std::optional<int> outer_iters;
};

int run_solve(const SolveArgs& a)
{
    const Method m = parse_method(a.method);
    const io::ScenarioSpec spec = load_scenario(a.common);
    const Scenario s = spec.build();
    SolverSettings settings;
    if (a.outer_iters)
        settings.sco.outer_iters = settings.bfom.outer_iters = *a.outer_iters;
    io::StoredSolution stored;
    stored.scenario = spec;
    stored.solution = solve(m, s, settings, &stored.report);
    emit(a.common.out, io::solution_to_json(stored).dump(2) + "\n");
    std::fprintf(stderr, "%s: objective %.6f, budget residual %.3g, %.3f s\n", a.method.c_str(),
                 stored.report.objective_trace.empty() ? 0.0 : stored.report.objective_trace.back(),
                 stored.solution.budget_residual, stored.report.wall_time);
    return 0;
}

// --- eval ---

struct EvalArgs
{
    Common common;
    McSettings mc;
};

int run_eval(const EvalArgs& a)
{
    if (a.common.config.empty())
        throw InputError("eval needs --config <solution file>");
    const auto stored = io::solution_from_json(io::read_json_file(a.common.config));
    const Scenario s = stored.scenario.build();
    // --seed picks the fading stream only; the scenario stays the stored one
    const CounterRng rng = a.common.seed ? CounterRng(*a.common.seed).substream(3) : s.eval_rng();
    const auto ev = evaluate_solution(stored.solution, s.geom, s.cs, s.j, s.params, a.mc, rng, s.eav);
    const json out = {{"method", std::string(to_string(stored.solution.method))},
                      {"R", ev.R},
                      {"secrecy_mc", ev.mc_secrecy},
                      {"secrecy_mc_stderr", ev.mc_stderr},
                      {"secrecy_model", ev.model_secrecy},
                      {"power_used", ev.power_used},
                      {"n_rho", a.mc.n_rho},
                      {"n_fading", a.mc.n_fading}};
    emit(a.common.out, out.dump(2) + "\n");
    return 0;
}

// --- sweep ---

struct SweepArgs
{
    Common common;
    unsigned threads = 0;
};

int run_sweep_cmd(const SweepArgs& a)
{
    if (a.common.config.empty())
        throw InputError("sweep needs --config <sweep config>");
    SweepConfig cfg = io::sweep_config_from_json(io::read_json_file(a.common.config));
    if (a.common.seed)
        cfg.seed = *a.common.seed;
    const auto rows = run_sweep(cfg, a.threads);
    int failed = 0;
    for (const auto& r : rows)
        if (r.error)
        {
            ++failed;
            std::fprintf(stderr, "error: %s grid=%g run=%d: %s\n", r.method.c_str(), r.grid_value, r.run, r.message.c_str());
        }
    std::ostringstream csv;
    write_sweep_csv(csv, rows);
    emit(a.common.out, csv.str());
    std::fprintf(stderr, "%zu rows, %d flagged\n", rows.size(), failed);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Angle-aware user cooperation: secure multicast beamforming"};
    app.require_subcommand(1);

    FitArgs fit;
    auto* fit_cmd = app.add_subcommand("fit-lambda", "build a training set and fit the angular model parameter");
    add_common(fit_cmd, fit.common, "scenario file (default: random K = 3 scenario from --seed)");
    fit_cmd->add_option("--levels", fit.training.levels, "eavesdropper noise levels")->check(CLI::PositiveNumber);
    fit_cmd->add_option("--per-level", fit.training.per_level, "samples per noise level")->check(CLI::PositiveNumber);
    fit_cmd->add_option("--n-rho", fit.training.n_rho, "path grid points")->check(CLI::Range(2, 1 << 20));
    fit_cmd->add_option("--n-fading", fit.training.n_fading, "fading draws per path point")->check(CLI::PositiveNumber);
    fit_cmd->add_option("--self-consistent", fit.self_consistent,
                        "replace targets by the model at this lambda (checks the fit)");

    SolveArgs sv;
    auto* solve_cmd = app.add_subcommand("solve", "solve one scenario with one method");
    add_common(solve_cmd, sv.common, "scenario file");
    solve_cmd->add_option("--method", sv.method, "sco | closed_form | bfom | large_nk | direct")->required();
    solve_cmd->add_option("--outer-iters", sv.outer_iters, "outer iterations (sco, bfom, direct)")
        ->check(CLI::PositiveNumber);

    EvalArgs ev;
    auto* eval_cmd = app.add_subcommand("eval", "Monte Carlo secrecy of a stored solution");
    add_common(eval_cmd, ev.common, "solution file written by solve");
    eval_cmd->add_option("--n-rho", ev.mc.n_rho, "path grid points")->check(CLI::Range(2, 1 << 20));
    eval_cmd->add_option("--n-fading", ev.mc.n_fading, "fading draws per point")->check(CLI::PositiveNumber);

    SweepArgs sw;
    auto* sweep_cmd = app.add_subcommand("sweep", "run an experiment sweep and write CSV");
    add_common(sweep_cmd, sw.common, "sweep config file");
    sweep_cmd->add_option("--threads", sw.threads, "worker cap (default: AAUC_THREADS or core count)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try
    {
        if (fit_cmd->parsed())
            return run_fit(fit);
        if (solve_cmd->parsed())
            return run_solve(sv);
        if (eval_cmd->parsed())
            return run_eval(ev);
        return run_sweep_cmd(sw);
    }
    catch (const InputError& e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    catch (const std::exception& e)
    {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 2;
    }
}
