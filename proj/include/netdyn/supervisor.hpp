#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "netdyn/dynamics.hpp"
#include "netdyn/integrator.hpp"
#include "netdyn/measures.hpp"
#include "netdyn/mutation.hpp"

namespace netdyn {

// Annealing schedule and bookkeeping knobs. The defaults reproduce the
// reference runs; anything not overridden can be left alone.
struct SaParams {
    PerformanceMeasure measure;
    MutationFn mutation;
    int mutation_count = 1;
    SolverConfig solver; // used only when measure.needs_dynamics

    int initial_trials = 0; // <= 0 means one trial per node
    double temp_reduce = 0.9;
    int main_trials = 5000;   // proposals per temperature run
    int accept_trials = 500;  // acceptances that end a run early
    int accept_runs_no_change = 5;
    double min_temp = 1e-7;
    long long max_iterations = 500000;

    // Skips the estimation phase when set. Any value below min_temp
    // halts the run before the first temperature run.
    std::optional<double> initial_temp;

    // Initial condition for dynamics-based measures; drawn uniformly
    // from [-1, 1]^(N*m) once per run when absent.
    std::optional<std::vector<double>> init_cond;

    int log_every = 100; // structural analysis cadence in the log

    std::ostream* progress = nullptr; // optional status lines
    int progress_every = 100;

    void validate() const; // throws ConfigError
};

// One row of the evolution log. analysis is populated every log_every
// iterations (always on the first) and left empty otherwise.
struct IterationRecord {
    long long iteration = 0;
    double temperature = 0.0;
    double q_current = 0.0;
    double q_best = 0.0;
    bool accepted = false;
    std::optional<AnalysisRecord> analysis;
};

enum class HaltReason {
    min_temp,       // cooling schedule exhausted
    max_iterations, // proposal budget exhausted
    no_change,      // best Q static for accept_runs_no_change runs
    no_valid_moves, // the operator cannot rewire this topology
};

std::string halt_reason_name(HaltReason r);

struct EvolutionResult {
    Topology final_topology{1}; // state when the run halted
    Topology best_topology{1};  // lowest-Q topology ever accepted
    double initial_q = 0.0;
    double best_q = 0.0;
    std::vector<IterationRecord> log;
    HaltReason halt_reason = HaltReason::min_temp;
    long long trials = 0; // proposals made, valid or not
    int epochs = 0;       // temperature runs completed
};

// Uniform draw from [-1, 1]^size.
std::vector<double> random_initial_condition(int size, Rng& rng);

// Q for one system state: topology-only measures skip integration,
// dynamics-based ones integrate init_cond under `solver` first.
double evaluate_measure(const NetworkSystem& sys, const PerformanceMeasure& measure,
                        const SolverConfig& solver, std::span<const double> init_cond);

// Standard Metropolis rule: improvements always pass, worsenings pass
// with probability exp(-dq / T). An infinite worsening never passes
// regardless of temperature.
bool metropolis_accept(double dq, double temperature, Rng& rng);

// Estimate a starting temperature by sampling params.initial_trials
// one-off mutations of the given system: T0 is the mean finite
// worsening divided by ln(1/0.8), so an average bad move starts out
// roughly 80% likely to pass. Falls back to the largest finite |dq|
// (or min_temp * 10 when every sampled move left Q unchanged or
// non-finite) and to nullopt when no valid mutation exists at all.
std::optional<double> initial_temperature(const NetworkSystem& sys,
                                          const SaParams& params, double q0,
                                          Rng& rng);

// Run the annealing loop from sys's topology. Temperature runs continue
// until main_trials proposals or accept_trials acceptances, then T is
// multiplied by temp_reduce; the loop halts per HaltReason. Trial
// evaluations that fail to integrate count as infinitely bad rather
// than aborting the run.
EvolutionResult sa_run(const NetworkSystem& sys, const SaParams& params, Rng& rng);

} // namespace netdyn
