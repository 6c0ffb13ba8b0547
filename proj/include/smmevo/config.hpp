#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "smmevo/evolution.hpp"

namespace smmevo {

/// Invalid configuration; key() names the offending entry (dotted path).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct MutationValidationConfig {
  std::vector<int> dims{2, 3, 4, 5, 6, 7, 8};
  std::uint64_t iterations = 100000;
  std::size_t bins = 20;
  std::size_t trace_dim = 2;
  std::size_t trace_seeds = 10;  // independent bias traces per mechanism
  double sigma = 0.1;
};

struct RunConfig {
  std::string kind = "evolve";  // evolve, sweep, validate-mutation, payoff, figures
  SimulationConfig simulation{};
  std::size_t trials = 30;
  std::size_t burn_in = 200;
  std::size_t window = 5;
  std::optional<std::uint64_t> seed;
  std::string output_dir;  // empty: derived from the experiment kind
  bool plots = true;
  std::size_t workers = 1;  // concurrent trials
  std::vector<std::string> paradigms{"a", "b", "c", "d", "e", "f", "g", "h", "i"};  // sweep
  MutationValidationConfig validation{};
  std::vector<std::string> genotype_files;  // payoff

  /// Throws ConfigError on inconsistent values.
  void validate() const;
};

/// Overlays the keys present in doc onto base. Unknown keys are errors.
///
/// Keys: kind, game (name or custom matrix object), paradigm (label or
/// {reproductive, survival, overlap}), n_agents, n_states, generations,
/// trials, burn_in, window, seed, output_dir, plots, workers,
/// snapshot_every, paradigms, genotype_files,
/// mutation {mechanism, sigma, ops_per_vector, g_flip_rate},
/// engine {backend, tol, max_iter, lagged_actions, rounds, reps, workers},
/// evolution {parents, offspring_per_parent, offspring_evaluation, offspring_first},
/// validation {dims, iterations, bins, trace_dim, trace_seeds, sigma}.
RunConfig config_from_json(const nlohmann::json& doc, RunConfig base = {});
nlohmann::json config_to_json(const RunConfig& config);
RunConfig load_config(const std::string& path, RunConfig base = {});

}  // namespace smmevo
