// Command-line driver: evolve, sweep, validate-mutation, payoff, figures.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "smmevo/config.hpp"
#include "smmevo/experiments.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace smmevo;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;
constexpr const char* kOutputRootEnv = "SMMEVO_OUTPUT_ROOT";

// Flags land in a JSON overlay so they override the --config file key by key.
struct Overlay {
  json doc = json::object();

  template <class T>
  void bind(CLI::App* app, const std::string& flag, json::json_pointer where, std::optional<T>& slot,
            const std::string& help) {
    app->add_option(flag, slot, help);
    pending.push_back([this, where, &slot] {
      if (slot) doc[where] = *slot;
    });
  }
  void apply() {
    for (auto& f : pending) f();
  }
  std::vector<std::function<void()>> pending;
};

struct Flags {
  std::optional<std::string> game, paradigm, output_dir, mechanism, backend, offspring_evaluation;
  std::optional<std::size_t> n_agents, n_states, generations, trials, burn_in, window, workers, snapshot_every,
      parents, offspring_per_parent, engine_workers;
  std::optional<std::uint64_t> seed;
  std::optional<double> sigma, g_flip_rate, tol;
  std::optional<int> ops_per_vector, max_iter, rounds, reps;
  std::optional<bool> lagged_actions, plots, offspring_first;
  std::optional<std::vector<std::string>> paradigms;
  // validate-mutation
  std::optional<std::vector<int>> dims;
  std::optional<std::uint64_t> iterations;
  std::optional<std::size_t> bins, trace_dim, trace_seeds;
  std::optional<double> validation_sigma;
};

void add_common(CLI::App* cmd, Overlay& o, Flags& f) {
  o.bind(cmd, "--seed", "/seed"_json_pointer, f.seed, "master seed (drawn and recorded when absent)");
  o.bind(cmd, "-o,--output-dir", "/output_dir"_json_pointer, f.output_dir,
         "run directory; relative paths resolve under $" + std::string(kOutputRootEnv) + " when set");
  o.bind(cmd, "--plots", "/plots"_json_pointer, f.plots, "write SVG figures (true/false)");
}

void add_engine(CLI::App* cmd, Overlay& o, Flags& f) {
  o.bind(cmd, "--game", "/game"_json_pointer, f.game, "prisoners_dilemma (pd), chicken, stag_hunt, battle");
  o.bind(cmd, "--backend", "/engine/backend"_json_pointer, f.backend,
         "marginal_fixed_point, joint_chain or monte_carlo");
  o.bind(cmd, "--tol", "/engine/tol"_json_pointer, f.tol, "convergence tolerance (L1 change)");
  o.bind(cmd, "--max-iter", "/engine/max_iter"_json_pointer, f.max_iter, "iteration cap of the analytic backends");
  o.bind(cmd, "--lagged-actions", "/engine/lagged_actions"_json_pointer, f.lagged_actions,
         "actions at t+1 from the state distribution at t (true/false)");
  o.bind(cmd, "--rounds", "/engine/rounds"_json_pointer, f.rounds, "Monte Carlo rounds per game");
  o.bind(cmd, "--reps", "/engine/reps"_json_pointer, f.reps, "Monte Carlo repetitions");
  o.bind(cmd, "--engine-workers", "/engine/workers"_json_pointer, f.engine_workers, "threads per fitness evaluation");
}

void add_evolution(CLI::App* cmd, Overlay& o, Flags& f) {
  add_common(cmd, o, f);
  add_engine(cmd, o, f);
  o.bind(cmd, "--n-agents", "/n_agents"_json_pointer, f.n_agents, "population size");
  o.bind(cmd, "--n-states", "/n_states"_json_pointer, f.n_states, "states per machine");
  o.bind(cmd, "--generations", "/generations"_json_pointer, f.generations, "generations per trial");
  o.bind(cmd, "--trials", "/trials"_json_pointer, f.trials, "independent trials");
  o.bind(cmd, "--burn-in", "/burn_in"_json_pointer, f.burn_in, "generations excluded from trial means");
  o.bind(cmd, "--window", "/window"_json_pointer, f.window, "smoothing window for ratio plots");
  o.bind(cmd, "--workers", "/workers"_json_pointer, f.workers, "concurrent trials");
  o.bind(cmd, "--snapshot-every", "/snapshot_every"_json_pointer, f.snapshot_every,
         "save genotypes every k generations (0 = never)");
  o.bind(cmd, "--mechanism", "/mutation/mechanism"_json_pointer, f.mechanism, "pairwise or linear_normalization");
  o.bind(cmd, "--sigma", "/mutation/sigma"_json_pointer, f.sigma, "mutation standard deviation");
  o.bind(cmd, "--ops-per-vector", "/mutation/ops_per_vector"_json_pointer, f.ops_per_vector,
         "pairwise operations per vector");
  o.bind(cmd, "--g-flip-rate", "/mutation/g_flip_rate"_json_pointer, f.g_flip_rate, "per-state output flip chance");
  o.bind(cmd, "--parents", "/evolution/parents"_json_pointer, f.parents, "parents per generation (0 = n)");
  o.bind(cmd, "--offspring-per-parent", "/evolution/offspring_per_parent"_json_pointer, f.offspring_per_parent,
         "offspring per selected parent");
  o.bind(cmd, "--offspring-evaluation", "/evolution/offspring_evaluation"_json_pointer, f.offspring_evaluation,
         "against_parents or full_tournament");
  o.bind(cmd, "--offspring-first", "/evolution/offspring_first"_json_pointer, f.offspring_first,
         "offspring win truncation ties (true/false)");
}

std::string resolve_dir(const RunConfig& c, const std::string& fallback) {
  fs::path p = c.output_dir.empty() ? fs::path(fallback) : fs::path(c.output_dir);
  if (p.is_relative()) {
    if (const char* root = std::getenv(kOutputRootEnv); root && *root) p = fs::path(root) / p;
  }
  return p.string();
}

std::string default_dir(const RunConfig& c) {
  const auto& evo = c.simulation.evolution;
  if (c.kind == "evolve") return "runs/evolve_" + evo.game.name() + "_" + std::string(1, evo.paradigm.label);
  if (c.kind == "sweep") return "runs/sweep_" + evo.game.name();
  if (c.kind == "validate-mutation") return "runs/validate_mutation";
  return "runs/payoff";
}

void print_payoff_table(const PayoffComparison& c, const GameSpec& game) {
  std::cout << "game " << game.name() << (game.canonical_substitute() ? " (canonical substitute payoffs)" : "")
            << "\n";
  std::cout << std::left << std::setw(22) << "backend" << std::right << std::setw(10) << "u_i" << std::setw(10)
            << "u_j" << std::setw(12) << "avg_u_i" << std::setw(12) << "avg_u_j" << std::setw(10) << "P_i(C)"
            << std::setw(10) << "P_j(C)" << std::setw(7) << "iters" << "  converged\n";
  for (const auto& r : c.results) {
    std::cout << std::left << std::setw(22) << to_string(r.backend) << std::right << std::fixed
              << std::setprecision(6) << std::setw(10) << r.u_i << std::setw(10) << r.u_j << std::setw(12)
              << r.time_avg_u_i << std::setw(12) << r.time_avg_u_j << std::setw(10) << r.a_i_horizon[0]
              << std::setw(10) << r.a_j_horizon[0] << std::setw(7) << r.iterations_to_converge << "  "
              << (r.converged ? "yes" : "no");
    if (r.backend == Backend::monte_carlo) std::cout << "  (se " << r.se_u_i << ", " << r.se_u_j << ")";
    std::cout << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evolution of stochastic Moore machines in iterated 2x2 games"};
  app.require_subcommand(1);
  std::optional<std::string> config_path;
  app.add_option("-c,--config", config_path, "JSON run configuration; flags override its keys");

  Overlay overlay;
  Flags f;

  auto* evolve = app.add_subcommand("evolve", "run trials of one selection paradigm");
  add_evolution(evolve, overlay, f);
  overlay.bind(evolve, "--paradigm", "/paradigm"_json_pointer, f.paradigm, "table label a-i, e.g. a or (a)");

  auto* sweep = app.add_subcommand("sweep", "run trials of every paradigm");
  add_evolution(sweep, overlay, f);
  sweep->add_option("--paradigms", f.paradigms, "labels to run (default a-i)")->delimiter(',');

  auto* validate = app.add_subcommand("validate-mutation", "fit mutation mechanisms against the simplex marginal");
  add_common(validate, overlay, f);
  validate->add_option("--dims", f.dims, "dimensions to fit, e.g. 2,3,4")->delimiter(',');
  overlay.bind(validate, "--iterations", "/validation/iterations"_json_pointer, f.iterations,
               "mutations per fit and per trace");
  overlay.bind(validate, "--bins", "/validation/bins"_json_pointer, f.bins, "histogram bins before merging");
  overlay.bind(validate, "--trace-dim", "/validation/trace_dim"_json_pointer, f.trace_dim, "bias trace dimension");
  overlay.bind(validate, "--trace-seeds", "/validation/trace_seeds"_json_pointer, f.trace_seeds,
               "bias trace replicates per mechanism");
  overlay.bind(validate, "--sigma", "/validation/sigma"_json_pointer, f.validation_sigma, "mutation standard deviation");

  auto* payoff = app.add_subcommand("payoff", "evaluate two genotypes with all three backends");
  std::vector<std::string> genotype_files;
  payoff->add_option("genotypes", genotype_files, "two genotype JSON files")->expected(2);
  add_engine(payoff, overlay, f);
  overlay.bind(payoff, "--seed", "/seed"_json_pointer, f.seed, "Monte Carlo seed");
  std::optional<std::string> json_out;
  payoff->add_option("--json", json_out, "write results as JSON to this file ('-' for stdout)");

  auto* figures = app.add_subcommand("figures", "regenerate SVG figures from an existing run directory");
  std::string figures_dir;
  figures->add_option("dir", figures_dir, "run directory containing manifest.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (figures->parsed()) {
      RunConfig where;
      where.output_dir = figures_dir;
      const std::string dir = resolve_dir(where, figures_dir);
      for (const auto& p : render_figures(dir)) std::cout << p << "\n";
      return 0;
    }

    RunConfig config;
    // Defaults of the payoff inspector are the engine's own, not the evolution preset.
    if (payoff->parsed()) config.simulation.evolution.engine = EngineParams{};
    if (config_path) config = load_config(*config_path, config);
    overlay.apply();
    if (f.paradigms) overlay.doc["paradigms"] = *f.paradigms;
    if (f.dims) overlay.doc["validation"]["dims"] = *f.dims;
    config = config_from_json(overlay.doc, config);
    config.kind = app.get_subcommands().front()->get_name();
    if (payoff->parsed()) config.genotype_files = genotype_files;
    config.validate();

    if (evolve->parsed()) {
      const auto r = run_evolve(config, resolve_dir(config, default_dir(config)), &std::clog);
      std::cout << r.dir << "/trials.csv\n";
    } else if (sweep->parsed()) {
      const auto dir = resolve_dir(config, default_dir(config));
      run_sweep(config, dir, &std::clog);
      std::cout << dir << "/sweep.csv\n";
    } else if (validate->parsed()) {
      const auto r = run_validate_mutation(config, resolve_dir(config, default_dir(config)), &std::clog);
      std::cout << r.dir << "/fit_table.csv\n";
    } else if (payoff->parsed()) {
      Genotype a, b;
      try {
        a = load_genotype(config.genotype_files[0]);
        b = load_genotype(config.genotype_files[1]);
      } catch (const GenotypeParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
      }
      const auto& evo = config.simulation.evolution;
      const std::uint64_t seed = resolve_seed(config);
      const auto c = compare_backends(a, b, evo.game, evo.engine, seed);
      print_payoff_table(c, evo.game);
      std::cout << "monte carlo seed " << seed << "\n";
      if (json_out) {
        json doc = {{"game", game_to_json(evo.game)},
                    {"genotypes", config.genotype_files},
                    {"engine", config_to_json(config)["engine"]},
                    {"seed", seed},
                    {"results", json::array()}};
        for (const auto& r : c.results) doc["results"].push_back(pairwise_to_json(r));
        if (*json_out == "-") {
          std::cout << doc.dump(2) << "\n";
        } else {
          std::ofstream out(*json_out);
          if (!out) throw std::runtime_error("cannot write '" + *json_out + "'");
          out << doc.dump(2) << "\n";
        }
      }
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
