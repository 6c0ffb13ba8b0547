#pragma once

#include <array>
#include <functional>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "smmevo/automaton.hpp"
#include "smmevo/games.hpp"
#include "smmevo/rng.hpp"

namespace smmevo {

enum class Backend { marginal_fixed_point, joint_chain, monte_carlo };

std::string_view to_string(Backend b);
Backend backend_from_string(std::string_view s);

struct EngineParams {
  Backend backend = Backend::marginal_fixed_point;
  double tol = 1e-6;
  int max_iter = 100;
  /// Actions at step t+1 come from the state distribution at step t, as in
  /// the printed update. false uses the freshly updated distribution.
  bool lagged_actions = true;
  int rounds = 100;  // Monte Carlo game length k
  int reps = 100;    // Monte Carlo repetitions
  std::size_t workers = 1;

  void validate() const;
};

/// Outcome of one pairing from player i's side.
struct PairwiseResult {
  double u_i = 0.0;  // per-round payoff at the horizon
  double u_j = 0.0;
  double time_avg_u_i = 0.0;  // running mean of per-round payoffs
  double time_avg_u_j = 0.0;
  ProbVector a_i_horizon;
  ProbVector a_j_horizon;
  /// Horizon probability of (CC, CD, DC, DD), own action first.
  std::array<double, 4> outcome{};
  int iterations_to_converge = 0;
  bool converged = false;
  Backend backend = Backend::marginal_fixed_point;
  /// Monte Carlo standard errors of u and of the time average; zero otherwise.
  double se_u_i = 0.0;
  double se_u_j = 0.0;
  double se_time_avg_i = 0.0;
  double se_time_avg_j = 0.0;

  /// Same pairing seen from player j's side.
  PairwiseResult swapped() const;
};

/// Mean-field iteration on the two marginal state distributions.
PairwiseResult marginal_fixed_point(const Genotype& m_i, const Genotype& m_j, const GameSpec& game,
                                    double tol = 1e-6, int max_iter = 100,
                                    bool lagged_actions = true);

/// Exact evolution of the joint distribution over state pairs.
PairwiseResult joint_chain_payoff(const Genotype& m_i, const Genotype& m_j, const GameSpec& game,
                                  double tol = 1e-6, int max_iter = 100);

/// reps independent k-round games. u_* is the mean final-round payoff and
/// time_avg_u_* the mean per-round payoff over all k rounds.
PairwiseResult monte_carlo_payoff(const Genotype& m_i, const Genotype& m_j, const GameSpec& game,
                                  int rounds, int reps, Rng& rng);

/// Dispatches on params.backend; seed keys the Monte Carlo stream.
PairwiseResult evaluate_pair(const Genotype& m_i, const Genotype& m_j, const GameSpec& game,
                             const EngineParams& params, std::uint64_t seed);

/// Payoff that enters fitness: the horizon value for the analytic backends,
/// the k-round average for Monte Carlo.
double fitness_payoff_i(const PairwiseResult& r);

/// Round-robin evaluation of a population.
struct PopulationEvaluation {
  std::size_t n = 0;
  std::vector<double> fitness;     // C(M_i) = sum over j != i of per-round payoff
  std::vector<PairwiseResult> pairs;  // (i, j), i < j, row-major

  std::size_t pair_index(std::size_t i, std::size_t j) const;
  /// Result from i's perspective for any i != j.
  PairwiseResult result(std::size_t i, std::size_t j) const;
  /// payoff[i][j]: what i earns per round against j; zero on the diagonal.
  std::vector<std::vector<double>> payoff_matrix() const;
  /// Each agent's horizon action distribution averaged over its pairings.
  std::vector<ProbVector> mean_horizon_actions() const;
  /// Pair-averaged horizon outcome fractions (CC, CD or DC, DD).
  std::array<double, 3> interaction_ratios() const;
  /// Mean over agents of fitness / (n - 1).
  double mean_score() const;
  int non_converged() const;
};

/// All n (n - 1) / 2 pairings once; results stored by pair index so the
/// output does not depend on how work is scheduled.
PopulationEvaluation population_fitness(std::span<const Genotype> population, const GameSpec& game,
                                        const EngineParams& params, std::uint64_t seed);

/// Runs fn(k) for k in [0, count) over up to `workers` threads.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn);

}  // namespace smmevo
