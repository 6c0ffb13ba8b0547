#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "smmevo/config.hpp"
#include "smmevo/metrics.hpp"
#include "smmevo/payoff.hpp"
#include "smmevo/records_io.hpp"

namespace smmevo {

/// Threshold on D(t) used for "the population has become homogeneous".
inline constexpr double kHomogeneousBelow = 0.05;

std::string code_version();

/// Written as manifest.json before a run starts and rewritten when it ends.
struct RunManifest {
  std::string kind;
  nlohmann::json config;
  std::uint64_t seed = 0;
  std::string code_version;
  std::string prng_family;
  std::string seed_scheme;
  std::string started_at;
  std::string finished_at;
  double wall_seconds = 0.0;
  bool complete = false;
  struct Trial {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    std::string path;
    double seconds = 0.0;
    bool resumed = false;
  };
  std::vector<Trial> trials;

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& doc);
  void write(const std::string& dir) const;
  static RunManifest read(const std::string& dir);
};

/// Trial t of a run with master seed s uses Rng::derive_seed(s, "trial", {t}).
std::uint64_t trial_seed(std::uint64_t master, std::size_t trial);

/// Master seed: the configured one, or a fresh one from std::random_device.
std::uint64_t resolve_seed(const RunConfig& config);

TrialRow summarize_trial(const std::vector<GenerationRecord>& records, std::size_t burn_in, std::size_t trial,
                         std::uint64_t seed);

struct EvolveResult {
  std::string dir;
  std::uint64_t seed = 0;
  std::vector<TrialRow> trials;
};

/// Runs config.trials independent simulations. Each trial writes
/// trial_NNN/generations.csv and trial_NNN/trial.json; the run writes
/// trials.csv and manifest.json. A trial directory whose trial.json matches
/// the current configuration and seed is reused instead of re-simulated.
EvolveResult run_evolve(const RunConfig& config, const std::string& dir, std::ostream* log = nullptr);

/// run_evolve once per label in config.paradigms, under dir/paradigm_<label>,
/// plus sweep.csv with one row per paradigm.
std::vector<EvolveResult> run_sweep(const RunConfig& config, const std::string& dir, std::ostream* log = nullptr);

struct DensityFitRow {
  MutationMechanism mechanism{};
  int dim = 0;
  DensityFit fit;
};

struct BiasTraceRun {
  MutationMechanism mechanism{};
  std::size_t replicate = 0;
  std::vector<BiasTracePoint> points;
};

struct MutationValidationResult {
  std::string dir;
  std::uint64_t seed = 0;
  std::vector<DensityFitRow> fits;
  std::vector<BiasTraceRun> traces;
};

/// Density fits for both mechanisms at every configured dimension and bias
/// traces for both mechanisms, each replicate on its own derived stream.
MutationValidationResult run_validate_mutation(const RunConfig& config, const std::string& dir,
                                               std::ostream* log = nullptr);

struct PayoffComparison {
  std::vector<PairwiseResult> results;  // one per backend, in Backend order
};

/// All three backends on one pairing. Monte Carlo uses config.engine.rounds/reps.
PayoffComparison compare_backends(const Genotype& a, const Genotype& b, const GameSpec& game,
                                  const EngineParams& engine, std::uint64_t seed);
nlohmann::json pairwise_to_json(const PairwiseResult& r);

/// Regenerates every SVG under dir from the CSVs there. Returns the files written.
std::vector<std::string> render_figures(const std::string& dir);

}  // namespace smmevo
