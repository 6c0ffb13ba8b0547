#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "smmevo/automaton.hpp"
#include "smmevo/mutation.hpp"
#include "smmevo/rng.hpp"

namespace smmevo {

/// Mean squared L2 distance between horizon action vectors over ordered
/// pairs i != j. Throws std::invalid_argument for fewer than two vectors or
/// mismatched dimensions.
double homogeneity(std::span<const ProbVector> horizon_actions);

struct GofResult {
  double statistic = 0.0;
  int degrees_of_freedom = 0;
  double p_value = 1.0;       // upper tail
  double complement_p = 0.0;  // 1 - p_value; low means consistent with the reference
};

/// Thrown when some bin's expected count is below 5.
class LowExpectedCountError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Pearson chi-square goodness of fit with dof = bins - 1.
GofResult chi_square_gof(std::span<const double> observed_counts, std::span<const double> expected_probs);

/// Upper-tail probability of the chi-square distribution.
double chi_square_sf(double statistic, int dof);

struct BiasTracePoint {
  std::uint64_t iteration = 0;
  GofResult fit;
};

/// Mutation applied to a single vector; used by the harnesses so tests can
/// plug in deliberately biased mechanisms.
using VectorMutator = std::function<ProbVector(const ProbVector&, Rng&)>;

VectorMutator make_mutator(const MutationParams& params);

/// Repeatedly mutates one vector from a uniform-simplex start and, at each
/// checkpoint, fits the running tally of which index held the maximum value
/// against the uniform distribution. Checkpoints must be increasing.
std::vector<BiasTracePoint> mutation_bias_trace(const VectorMutator& mutate, std::size_t dim,
                                                std::uint64_t iterations,
                                                std::span<const std::uint64_t> checkpoints, Rng& rng);

/// Log-spaced checkpoints 10, 100, ..., capped at (and always including) iterations.
std::vector<std::uint64_t> log_checkpoints(std::uint64_t iterations);

/// Expected bin probabilities of one simplex coordinate over equal-width bins on [0, 1].
std::vector<double> marginal_bin_probabilities(int dim, std::size_t bins);

struct DensityFit {
  GofResult fit;
  std::vector<double> edges;           // bins + 1 edges on [0, 1] before merging
  std::vector<double> counts;          // raw histogram
  std::vector<double> expected_probs;  // per raw bin
  std::vector<double> merged_counts;   // after merging right until expected >= 5
  std::vector<double> merged_probs;
  double mass_at_zero = 0.0;  // fraction of samples exactly 0
  double mass_at_one = 0.0;   // fraction of samples exactly 1
};

/// Merges adjacent bins left to right until each expected count reaches 5;
/// a short tail is folded into the last kept bin.
void merge_low_expected(std::span<const double> counts, std::span<const double> probs, double total,
                        std::vector<double>& merged_counts, std::vector<double>& merged_probs);

/// Mutates one vector from a uniform-simplex start `iterations` times and
/// histograms entry 0 after each step; fits against the simplex marginal.
DensityFit density_fit(const VectorMutator& mutate, std::size_t dim, std::uint64_t iterations,
                       std::size_t bins, Rng& rng);

struct TrialSummary {
  double mean_score = 0.0;
  /// Lower bound on the share of mutual cooperation implied by a mean PD
  /// score: 2 (mean - 2.5) clamped to [0, 1].
  double min_cooperation = 0.0;
  std::size_t generations_used = 0;
};

/// Mean of per-generation mean scores after dropping the first burn_in values.
TrialSummary trial_summary(std::span<const double> mean_scores, std::size_t burn_in);

/// Trailing moving average: entry t averages values max(0, t - window + 1) .. t.
std::vector<double> moving_average(std::span<const double> values, std::size_t window);

}  // namespace smmevo
