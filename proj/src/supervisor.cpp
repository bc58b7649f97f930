#include "netdyn/supervisor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "netdyn/errors.hpp"
#include "netdyn/graph_measures.hpp"

namespace netdyn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Trial evaluations treat a solver blow-up as an infinitely bad move:
// the proposal gets reverted like any other rejection instead of
// killing a long run.
double trial_q(const NetworkSystem& sys, const PerformanceMeasure& measure,
               const SolverConfig& solver, std::span<const double> init_cond) {
    try {
        return evaluate_measure(sys, measure, solver, init_cond);
    } catch (const DivergenceError&) {
        return kInf;
    } catch (const StiffnessError&) {
        return kInf;
    }
}

} // namespace

void SaParams::validate() const {
    if (!measure.evaluate)
        throw ConfigError("supervisor requires a performance measure");
    if (!mutation)
        throw ConfigError("supervisor requires a mutation operator");
    if (mutation_count < 1)
        throw ConfigError("mutation count must be at least 1");
    if (!(temp_reduce > 0.0) || !(temp_reduce < 1.0))
        throw ConfigError("temp_reduce must lie strictly between 0 and 1");
    if (main_trials < 1)
        throw ConfigError("main_trials must be at least 1");
    if (accept_trials < 1)
        throw ConfigError("accept_trials must be at least 1");
    if (accept_runs_no_change < 1)
        throw ConfigError("accept_runs_no_change must be at least 1");
    if (!(min_temp > 0.0))
        throw ConfigError("min_temp must be positive");
    if (max_iterations < 0)
        throw ConfigError("max_iterations must be non-negative");
    if (initial_temp && (!std::isfinite(*initial_temp) || *initial_temp < 0.0))
        throw ConfigError("initial_temp must be finite and non-negative");
    if (log_every < 1)
        throw ConfigError("log_every must be at least 1");
    if (progress_every < 1)
        throw ConfigError("progress_every must be at least 1");
    if (measure.needs_dynamics) solver.validate();
}

std::string halt_reason_name(HaltReason r) {
    switch (r) {
        case HaltReason::min_temp: return "min_temp";
        case HaltReason::max_iterations: return "max_iterations";
        case HaltReason::no_change: return "no_change";
        case HaltReason::no_valid_moves: return "no_valid_moves";
    }
    return "unknown";
}

std::vector<double> random_initial_condition(int size, Rng& rng) {
    if (size < 1) throw ConfigError("initial condition size must be positive");
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> x(static_cast<size_t>(size));
    for (double& xi : x) xi = u(rng);
    return x;
}

double evaluate_measure(const NetworkSystem& sys, const PerformanceMeasure& measure,
                        const SolverConfig& solver, std::span<const double> init_cond) {
    if (!measure.evaluate) throw ConfigError("measure has no evaluator");
    if (!measure.needs_dynamics) return measure.evaluate(sys.topology(), nullptr);
    if (static_cast<int>(init_cond.size()) != sys.state_size())
        throw ConfigError("initial condition has " + std::to_string(init_cond.size()) +
                          " components, the system needs " +
                          std::to_string(sys.state_size()));
    Trajectory traj = integrate(assemble_derivative(sys), init_cond, solver);
    return measure.evaluate(sys.topology(), &traj);
}

bool metropolis_accept(double dq, double temperature, Rng& rng) {
    if (std::isnan(dq)) return false;
    if (dq <= 0.0) return true; // includes an infinite improvement
    if (!std::isfinite(dq)) return false;
    if (temperature <= 0.0) return false;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return u(rng) < std::exp(-dq / temperature);
}

std::optional<double> initial_temperature(const NetworkSystem& sys,
                                          const SaParams& params, double q0,
                                          Rng& rng) {
    params.validate();
    const int trials =
        params.initial_trials > 0 ? params.initial_trials : sys.topology().node_count();

    std::vector<double> init_cond;
    if (params.measure.needs_dynamics)
        init_cond = params.init_cond
                        ? *params.init_cond
                        : random_initial_condition(sys.state_size(), rng);

    NetworkSystem work = sys;
    int valid = 0;
    int worsen_n = 0;
    double worsen_sum = 0.0;
    double max_abs = 0.0;
    for (int i = 0; i < trials; ++i) {
        auto proposal = params.mutation(work.topology(), params.mutation_count, rng);
        if (!proposal || proposal->empty()) continue;
        apply_proposal(work.topology(), *proposal);
        const double q = trial_q(work, params.measure, params.solver, init_cond);
        revert_proposal(work.topology(), *proposal);
        ++valid;
        const double dq = q - q0;
        if (!std::isfinite(dq)) continue; // disconnections say nothing about scale
        max_abs = std::max(max_abs, std::abs(dq));
        if (dq > 0.0) {
            worsen_sum += dq;
            ++worsen_n;
        }
    }
    if (valid == 0) return std::nullopt;
    if (worsen_n > 0) return (worsen_sum / worsen_n) / std::log(1.0 / 0.8);
    return std::max(max_abs, params.min_temp * 10.0);
}

EvolutionResult sa_run(const NetworkSystem& sys, const SaParams& params, Rng& rng) {
    params.validate();

    NetworkSystem work = sys;

    std::vector<double> init_cond;
    SaParams run_params = params;
    if (params.measure.needs_dynamics) {
        init_cond = params.init_cond
                        ? *params.init_cond
                        : random_initial_condition(work.state_size(), rng);
        run_params.init_cond = init_cond; // estimation reuses the same draw
    }

    // A starting configuration that cannot be evaluated is a setup
    // problem, so the first evaluation propagates its exceptions.
    const double q0 = evaluate_measure(work, params.measure, params.solver, init_cond);

    EvolutionResult result;
    result.final_topology = work.topology();
    result.best_topology = work.topology();
    result.initial_q = q0;
    result.best_q = q0;

    if (params.max_iterations == 0) {
        result.halt_reason = HaltReason::max_iterations;
        return result;
    }

    double temperature;
    if (params.initial_temp) {
        temperature = *params.initial_temp;
    } else {
        const auto t0 = initial_temperature(work, run_params, q0, rng);
        if (!t0) {
            result.halt_reason = HaltReason::no_valid_moves;
            return result;
        }
        temperature = *t0;
    }

    double q_current = q0;
    long long iteration = 0;
    int runs_no_change = 0;
    bool halted = false;
    HaltReason reason = HaltReason::min_temp;

    while (!halted && temperature >= params.min_temp) {
        int trials_run = 0;
        int accepts_run = 0;
        int valid_run = 0;
        const double best_at_run_start = result.best_q;

        while (trials_run < params.main_trials && accepts_run < params.accept_trials) {
            if (iteration >= params.max_iterations) {
                reason = HaltReason::max_iterations;
                halted = true;
                break;
            }
            ++iteration;
            ++trials_run;

            auto proposal = params.mutation(work.topology(), params.mutation_count, rng);
            bool accepted = false;
            if (proposal && !proposal->empty()) {
                ++valid_run;
                apply_proposal(work.topology(), *proposal);
                const double q_new = trial_q(work, params.measure, params.solver, init_cond);
                accepted = metropolis_accept(q_new - q_current, temperature, rng);
                if (accepted) {
                    q_current = q_new;
                    ++accepts_run;
                    if (q_new < result.best_q) {
                        result.best_q = q_new;
                        result.best_topology = work.topology();
                    }
                } else {
                    revert_proposal(work.topology(), *proposal);
                }
            }

            IterationRecord rec;
            rec.iteration = iteration;
            rec.temperature = temperature;
            rec.q_current = q_current;
            rec.q_best = result.best_q;
            rec.accepted = accepted;
            if ((iteration - 1) % params.log_every == 0)
                rec.analysis = std_analysis(work.topology());
            if (params.progress && (iteration - 1) % params.progress_every == 0)
                *params.progress << "iter=" << rec.iteration << " T=" << rec.temperature
                                 << " Q=" << rec.q_current << " best=" << rec.q_best
                                 << " acc=" << (accepted ? 1 : 0) << "\n";
            result.log.push_back(std::move(rec));
        }

        if (halted) break;
        if (valid_run == 0) {
            reason = HaltReason::no_valid_moves;
            break;
        }
        ++result.epochs;
        if (result.best_q < best_at_run_start) {
            runs_no_change = 0;
        } else if (++runs_no_change >= params.accept_runs_no_change) {
            reason = HaltReason::no_change;
            break;
        }
        temperature *= params.temp_reduce;
    }

    result.final_topology = work.topology();
    result.halt_reason = reason;
    result.trials = iteration;
    return result;
}

} // namespace netdyn
