#include <chrono>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "netdyn/errors.hpp"
#include "netdyn/graph_measures.hpp"
#include "netdyn/integrator.hpp"
#include "netdyn/measures.hpp"
#include "netdyn/mutation.hpp"
#include "netdyn/netio.hpp"
#include "netdyn/supervisor.hpp"
#include "netdyn/topology.hpp"

namespace {

using namespace netdyn;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct Options {
    std::string graph_path;
    int nodes = 0;
    int degree = 4;

    std::string node_dyn = "rossler3";
    std::vector<double> node_params;
    std::string edge_dyn = "diffusive_xz";
    std::vector<double> edge_params;
    bool node_dyn_given = false;
    bool node_params_given = false;
    bool edge_dyn_given = false;
    bool edge_params_given = false;

    std::string measure_name = "eigenratio";
    double discard_fraction = 0.5;

    std::string mutation_name = "rewire";
    int mutation_count = 1;

    SolverConfig solver;

    int initial_trials = 0; // 0: one per node
    double temp_reduce = 0.9;
    int main_trials = 5000;
    int accept_trials = 500;
    int accept_runs_no_change = 5;
    double min_temp = 1e-7;
    long long max_iterations = 500000;
    double initial_temp = 0.0;
    bool initial_temp_given = false;
    int log_every = 100;
    int progress_every = 100;

    std::vector<double> init_cond;
    bool init_cond_given = false;

    std::uint64_t seed = 0;
    bool seed_from_time = false;
    std::string out_dir = ".";
    std::string out_path; // generate only
};

Rng make_rng(const Options& opt) {
    if (opt.seed_from_time) {
        const auto now = std::chrono::system_clock::now().time_since_epoch();
        return Rng(static_cast<std::uint64_t>(
            std::chrono::duration_cast<std::chrono::nanoseconds>(now).count()));
    }
    return Rng(opt.seed);
}

// Topology plus whatever dynamics information the input carried.
struct LoadedNetwork {
    DynNetDocument doc;
    bool file_had_dynamics = false;
};

LoadedNetwork load_network(const Options& opt) {
    LoadedNetwork net;
    if (!opt.graph_path.empty()) {
        if (opt.nodes > 0)
            throw ConfigError("give either --graph or --nodes, not both");
        if (ends_with(opt.graph_path, ".gml")) {
            net.doc.topology = read_gml(opt.graph_path);
        } else {
            net.doc = read_graphml(opt.graph_path);
            net.file_had_dynamics = !net.doc.node_dyn_name.empty();
        }
    } else {
        if (opt.nodes <= 0)
            throw ConfigError("provide an input graph (--graph) or a generator "
                              "size (--nodes)");
        if (opt.degree == 0)
            net.doc.topology = Topology(opt.nodes);
        else
            net.doc.topology = ring_lattice(opt.nodes, opt.degree);
    }
    return net;
}

// Overlay the dynamics flags onto whatever the file declared: explicit
// flags always win; file values survive only where no flag was given.
// Params are resolved through the registry so written files carry the
// effective values.
void resolve_dynamics(const Options& opt, LoadedNetwork& net) {
    DynNetDocument& doc = net.doc;
    const bool keep_file = net.file_had_dynamics;
    if (!keep_file || opt.node_dyn_given) {
        doc.node_dyn_name = opt.node_dyn;
        doc.node_dyn_params = opt.node_params;
        doc.node_overrides.clear();
    }
    if (opt.node_params_given) doc.node_dyn_params = opt.node_params;
    if (!keep_file || opt.edge_dyn_given) {
        doc.edge_dyn_name = opt.edge_dyn;
        doc.edge_dyn_params = opt.edge_params;
        doc.edge_overrides.clear();
    }
    if (opt.edge_params_given) doc.edge_dyn_params = opt.edge_params;

    const NodeDynamics nd = make_node_dynamics(doc.node_dyn_name, doc.node_dyn_params);
    const EdgeCoupling ed =
        make_edge_coupling(doc.edge_dyn_name, doc.edge_dyn_params, nd.dim);
    doc.node_dyn_params = nd.params;
    doc.edge_dyn_params = ed.params;
}

// The same document with a different (evolved) topology. Edge overrides
// whose edge was rewired away are dropped; everything else carries over.
DynNetDocument doc_for_topology(const DynNetDocument& base, const Topology& topo) {
    DynNetDocument doc = base;
    doc.topology = topo;
    for (auto it = doc.edge_overrides.begin(); it != doc.edge_overrides.end();) {
        if (!topo.has_edge(it->first.first, it->first.second))
            it = doc.edge_overrides.erase(it);
        else
            ++it;
    }
    return doc;
}

SaParams build_sa_params(const Options& opt) {
    SaParams params;
    params.measure = make_measure(opt.measure_name, opt.discard_fraction);
    params.mutation = make_mutation(opt.mutation_name);
    params.mutation_count = opt.mutation_count;
    params.solver = opt.solver;
    params.initial_trials = opt.initial_trials;
    params.temp_reduce = opt.temp_reduce;
    params.main_trials = opt.main_trials;
    params.accept_trials = opt.accept_trials;
    params.accept_runs_no_change = opt.accept_runs_no_change;
    params.min_temp = opt.min_temp;
    params.max_iterations = opt.max_iterations;
    if (opt.initial_temp_given) params.initial_temp = opt.initial_temp;
    if (opt.init_cond_given) params.init_cond = opt.init_cond;
    params.log_every = opt.log_every;
    params.progress = &std::cerr;
    params.progress_every = opt.progress_every;
    return params;
}

int run_evolve(const Options& opt) {
    LoadedNetwork net = load_network(opt);
    resolve_dynamics(opt, net);
    NetworkSystem sys = system_from_document(net.doc);
    SaParams params = build_sa_params(opt);
    Rng rng = make_rng(opt);

    EvolutionResult result = sa_run(sys, params, rng);

    write_log_csv(result.log, opt.out_dir + "/evolution.csv");
    write_graphml(doc_for_topology(net.doc, result.final_topology),
                  opt.out_dir + "/final.graphml");
    write_graphml(doc_for_topology(net.doc, result.best_topology),
                  opt.out_dir + "/best.graphml");

    std::cout << "initial Q = " << fmt17(result.initial_q) << "\n";
    std::cout << "best Q = " << fmt17(result.best_q) << "\n";
    std::cout << "halt reason = " << halt_reason_name(result.halt_reason) << "\n";
    std::cout << "iterations = " << result.trials << "\n";
    std::cout << "epochs = " << result.epochs << "\n";
    return 0;
}

int run_simulate(const Options& opt) {
    LoadedNetwork net = load_network(opt);
    resolve_dynamics(opt, net);
    NetworkSystem sys = system_from_document(net.doc);
    opt.solver.validate();

    Rng rng = make_rng(opt);
    std::vector<double> x0;
    if (opt.init_cond_given) {
        x0 = opt.init_cond;
        if (static_cast<int>(x0.size()) != sys.state_size())
            throw ConfigError("--init-cond has " + std::to_string(x0.size()) +
                              " components, the system needs " +
                              std::to_string(sys.state_size()));
    } else {
        x0 = random_initial_condition(sys.state_size(), rng);
    }

    Trajectory traj = integrate(assemble_derivative(sys), x0, opt.solver);

    const std::string path = opt.out_dir + "/trajectory.csv";
    std::FILE* out = std::fopen(path.c_str(), "wb");
    if (!out) throw FormatError(path + ": cannot open for writing");
    const int n = sys.topology().node_count();
    const int m = sys.node_dim();
    std::fputs("t", out);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < m; ++k) std::fprintf(out, ",x_%d_%d", i, k);
    std::fputc('\n', out);
    for (size_t s = 0; s < traj.sample_count(); ++s) {
        std::fputs(fmt17(traj.times[s]).c_str(), out);
        for (double v : traj.states[s]) std::fprintf(out, ",%s", fmt17(v).c_str());
        std::fputc('\n', out);
    }
    if (std::fclose(out) != 0) throw FormatError(path + ": write failed");

    const double sync = sync_error(traj, n, opt.discard_fraction);
    std::cout << "samples = " << traj.sample_count() << "\n";
    std::cout << "sync_error = " << fmt17(sync) << "\n";
    return 0;
}

int run_measure(const Options& opt) {
    LoadedNetwork net = load_network(opt);
    PerformanceMeasure measure = make_measure(opt.measure_name, opt.discard_fraction);

    double q = 0.0;
    if (measure.needs_dynamics) {
        resolve_dynamics(opt, net);
        NetworkSystem sys = system_from_document(net.doc);
        opt.solver.validate();
        Rng rng = make_rng(opt);
        std::vector<double> x0 = opt.init_cond_given
                                     ? opt.init_cond
                                     : random_initial_condition(sys.state_size(), rng);
        q = evaluate_measure(sys, measure, opt.solver, x0);
    } else {
        q = measure.evaluate(net.doc.topology, nullptr);
    }

    const AnalysisRecord analysis = std_analysis(net.doc.topology);
    std::cout << "Q = " << fmt17(q) << "\n";
    if (analysis.diameter)
        std::cout << "diameter = " << *analysis.diameter << "\n";
    else
        std::cout << "diameter = undefined\n";
    std::cout << "clustering = " << fmt17(analysis.clustering) << "\n";
    if (analysis.girth)
        std::cout << "girth = " << *analysis.girth << "\n";
    else
        std::cout << "girth = acyclic\n";
    return 0;
}

int run_generate(const Options& opt) {
    if (opt.nodes <= 0) throw ConfigError("generate requires --nodes");
    Topology topo = opt.degree == 0 ? Topology(opt.nodes)
                                    : ring_lattice(opt.nodes, opt.degree);
    const std::string path =
        opt.out_path.empty() ? opt.out_dir + "/network.graphml" : opt.out_path;
    if (ends_with(path, ".gml")) {
        write_gml(topo, path);
    } else {
        DynNetDocument doc;
        doc.topology = topo;
        const NodeDynamics nd = make_node_dynamics(opt.node_dyn, opt.node_params);
        const EdgeCoupling ed =
            make_edge_coupling(opt.edge_dyn, opt.edge_params, nd.dim);
        doc.node_dyn_name = nd.name;
        doc.node_dyn_params = nd.params;
        doc.edge_dyn_name = ed.name;
        doc.edge_dyn_params = ed.params;
        write_graphml(doc, path);
    }
    std::cout << "wrote " << path << " (" << topo.node_count() << " nodes, "
              << topo.edge_count() << " edges)\n";
    return 0;
}

void add_input_flags(CLI::App* cmd, Options& opt) {
    cmd->add_option("--graph", opt.graph_path,
                    "Input network file (.graphml, or .gml for plain topology)");
    cmd->add_option("--nodes", opt.nodes, "Ring-lattice generator: node count");
    cmd->add_option("--degree", opt.degree,
                    "Ring-lattice generator: even degree (0 for no edges)")
        ->capture_default_str();
}

void add_dynamics_flags(CLI::App* cmd, Options& opt) {
    cmd->add_option("--node-dyn", opt.node_dyn, "Node dynamics name")
        ->capture_default_str()
        ->each([&opt](const std::string&) { opt.node_dyn_given = true; });
    cmd->add_option("--node-params", opt.node_params,
                    "Node dynamics params (comma separated)")
        ->delimiter(',')
        ->each([&opt](const std::string&) { opt.node_params_given = true; });
    cmd->add_option("--edge-dyn", opt.edge_dyn, "Edge coupling name")
        ->capture_default_str()
        ->each([&opt](const std::string&) { opt.edge_dyn_given = true; });
    cmd->add_option("--edge-params", opt.edge_params,
                    "Edge coupling params (comma separated; params[0] is sigma)")
        ->delimiter(',')
        ->each([&opt](const std::string&) { opt.edge_params_given = true; });
}

void add_solver_flags(CLI::App* cmd, Options& opt) {
    cmd->add_option("--length", opt.solver.length, "Integration length")
        ->capture_default_str();
    cmd->add_option("--eps-abs", opt.solver.eps_abs, "Absolute error tolerance")
        ->capture_default_str();
    cmd->add_option("--eps-rel", opt.solver.eps_rel, "Relative error tolerance")
        ->capture_default_str();
    cmd->add_option("--init-step", opt.solver.init_step,
                    "Initial step size (the step size in fixed-step mode)")
        ->capture_default_str();
    cmd->add_option("--min-step", opt.solver.min_step,
                    "Step-size floor; 0 disables the stiffness check")
        ->capture_default_str();
    cmd->add_flag("--fixed-step", opt.solver.fixed_step,
                  "March with a constant step and no error control");
    cmd->add_option("--sample-interval", opt.solver.sample_interval,
                    "Spacing of recorded samples")
        ->capture_default_str();
    cmd->add_option("--init-cond", opt.init_cond,
                    "Initial condition (comma separated, N*m values)")
        ->delimiter(',')
        ->each([&opt](const std::string&) { opt.init_cond_given = true; });
    cmd->add_option("--discard-fraction", opt.discard_fraction,
                    "Transient fraction discarded by sync_error")
        ->capture_default_str();
}

void add_seed_flags(CLI::App* cmd, Options& opt) {
    cmd->add_option("--seed", opt.seed, "Random seed")->capture_default_str();
    cmd->add_flag("--seed-from-time", opt.seed_from_time,
                  "Seed from the wall clock instead of --seed");
    cmd->add_option("--out-dir", opt.out_dir, "Output directory")
        ->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation and supervised topology evolution of dynamical networks"};
    app.require_subcommand(1);

    Options opt;

    CLI::App* evolve = app.add_subcommand(
        "evolve", "Anneal the topology to minimize a performance measure");
    add_input_flags(evolve, opt);
    add_dynamics_flags(evolve, opt);
    add_solver_flags(evolve, opt);
    add_seed_flags(evolve, opt);
    evolve->add_option("--measure", opt.measure_name, "Performance measure")
        ->capture_default_str();
    evolve->add_option("--mutation", opt.mutation_name, "Mutation operator")
        ->capture_default_str();
    evolve->add_option("--mutation-count", opt.mutation_count,
                       "Rewires per proposal")
        ->capture_default_str();
    evolve->add_option("--initial-trials", opt.initial_trials,
                       "Moves sampled to set T0 (0: one per node)")
        ->capture_default_str();
    evolve->add_option("--temp-reduce", opt.temp_reduce, "Cooling factor per epoch")
        ->capture_default_str();
    evolve->add_option("--main-trials", opt.main_trials, "Trials per epoch")
        ->capture_default_str();
    evolve->add_option("--accept-trials", opt.accept_trials,
                       "Acceptances ending an epoch early")
        ->capture_default_str();
    evolve->add_option("--accept-runs-no-change", opt.accept_runs_no_change,
                       "Stagnant epochs before halting")
        ->capture_default_str();
    evolve->add_option("--min-temp", opt.min_temp, "Halting temperature")
        ->capture_default_str();
    evolve->add_option("--max-iterations", opt.max_iterations,
                       "Total proposal budget")
        ->capture_default_str();
    evolve->add_option("--initial-temp", opt.initial_temp,
                       "Fixed starting temperature (skips estimation)")
        ->each([&opt](const std::string&) { opt.initial_temp_given = true; });
    evolve->add_option("--log-every", opt.log_every,
                       "Iterations between structural analyses in the log")
        ->capture_default_str();
    evolve->add_option("--progress-every", opt.progress_every,
                       "Iterations between progress lines on standard error")
        ->capture_default_str();

    CLI::App* simulate = app.add_subcommand(
        "simulate", "Integrate the network once and write the trajectory");
    add_input_flags(simulate, opt);
    add_dynamics_flags(simulate, opt);
    add_solver_flags(simulate, opt);
    add_seed_flags(simulate, opt);

    CLI::App* measure_cmd = app.add_subcommand(
        "measure", "Evaluate a performance measure and the standard analysis");
    add_input_flags(measure_cmd, opt);
    add_dynamics_flags(measure_cmd, opt);
    add_solver_flags(measure_cmd, opt);
    add_seed_flags(measure_cmd, opt);
    measure_cmd->add_option("--measure", opt.measure_name, "Performance measure")
        ->capture_default_str();

    CLI::App* generate = app.add_subcommand(
        "generate", "Write a ring-lattice network file");
    add_input_flags(generate, opt);
    add_dynamics_flags(generate, opt);
    add_seed_flags(generate, opt);
    generate->add_option("--out", opt.out_path,
                         "Output path (.graphml, or .gml for plain topology; "
                         "default <out-dir>/network.graphml)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (evolve->parsed()) return run_evolve(opt);
        if (simulate->parsed()) return run_simulate(opt);
        if (measure_cmd->parsed()) return run_measure(opt);
        if (generate->parsed()) return run_generate(opt);
        std::cerr << "error: no subcommand selected\n";
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
