#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smmevo/automaton.hpp"
#include "smmevo/games.hpp"
#include "smmevo/mutation.hpp"
#include "smmevo/payoff.hpp"
#include "smmevo/rng.hpp"

namespace smmevo {

enum class SelectionMethod { truncation, roulette, uniform };

std::string_view to_string(SelectionMethod m);
SelectionMethod selection_from_string(std::string_view s);

/// (reproductive, survival, overlap). Overlap puts parents and offspring in
/// one survival pool.
struct SelectionParadigm {
  SelectionMethod reproductive = SelectionMethod::truncation;
  SelectionMethod survival = SelectionMethod::truncation;
  bool overlap = true;
  char label = 'a';  // '?' when the triple is not one of the nine table rows

  /// Accepts "a" or "(a)" through "i". Throws std::invalid_argument otherwise.
  static SelectionParadigm from_label(std::string_view label);
  /// Builds from an explicit triple and fills in the matching label.
  static SelectionParadigm from_triple(SelectionMethod reproductive, SelectionMethod survival, bool overlap);
  static const std::array<SelectionParadigm, 9>& table();

  std::string describe() const;  // e.g. "(a) truncation/truncation/overlap"
  bool operator==(const SelectionParadigm&) const = default;
};

/// Picks `count` distinct indices. truncation: highest fitness first, ties to
/// the lower index. roulette: sequential draws proportional to fitness among
/// the remaining agents (uniform when the remaining total is zero).
/// uniform: uniform draws without replacement.
/// Throws std::invalid_argument for count > pool size, or negative fitness
/// under roulette.
std::vector<std::size_t> select(std::span<const double> fitness, SelectionMethod method, std::size_t count,
                                Rng& rng);

enum class OffspringEvaluation {
  against_parents,  // each offspring plays the current population minus its own parent
  full_tournament,  // round robin over the whole survival pool
};

std::string_view to_string(OffspringEvaluation e);
OffspringEvaluation offspring_evaluation_from_string(std::string_view s);

struct EvolutionParams {
  SelectionParadigm paradigm{};
  GameSpec game = prisoners_dilemma();
  MutationParams mutation{};
  /// Fitness uses a short mean-field horizon of five update steps.
  EngineParams engine{.max_iter = 5};
  std::size_t parents = 0;  // reproductive selection size; 0 means the population size
  std::size_t offspring_per_parent = 2;
  OffspringEvaluation offspring_evaluation = OffspringEvaluation::against_parents;
  bool keep_genotypes = false;
  /// Offspring precede parents in the overlap pool, so truncation ties go to
  /// the offspring and neutral variants can replace their parents.
  bool offspring_first = true;

  void validate(std::size_t population_size) const;
};

struct Population {
  std::vector<Genotype> agents;
  std::size_t generation = 0;
};

struct GenerationRecord {
  std::size_t generation = 0;
  std::vector<double> fitness;
  double mean_score = 0.0;
  std::array<double, 3> interaction_ratios{};  // CC, CD (either order), DD
  double homogeneity = 0.0;
  int non_converged_pairs = 0;
  std::vector<Genotype> genotypes;  // filled only when requested
};

GenerationRecord make_record(std::size_t generation, const Population& pop, const PopulationEvaluation& ev,
                             bool keep_genotypes);

struct GenerationOutcome {
  Population population;
  PopulationEvaluation evaluation;  // round robin of the new population
  GenerationRecord record;
};

/// One generation: reproductive selection, mutation, offspring scoring,
/// survival selection, then a round-robin evaluation of the survivors.
/// `current` must be the evaluation of `pop`.
GenerationOutcome run_generation(const Population& pop, const PopulationEvaluation& current,
                                 const EvolutionParams& params, std::uint64_t seed);
GenerationOutcome run_generation(const Population& pop, const EvolutionParams& params, std::uint64_t seed);

struct SimulationConfig {
  EvolutionParams evolution{};
  std::size_t n_agents = 20;
  std::size_t n_states = 2;
  std::size_t generations = 1000;
  /// Store genotypes in every k-th record (0 = never).
  std::size_t snapshot_every = 0;
};

/// Record 0 describes the random initial population, record g the survivors
/// of generation g. Pure function of (config, seed).
std::vector<GenerationRecord> run_simulation(
    const SimulationConfig& config, std::uint64_t seed,
    const std::function<void(const GenerationRecord&)>& on_record = {});

}  // namespace smmevo
