#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "smmevo/automaton.hpp"
#include "smmevo/rng.hpp"

namespace smmevo {

enum class MutationMechanism { pairwise, linear_normalization };

std::string_view to_string(MutationMechanism m);
MutationMechanism mechanism_from_string(std::string_view s);

struct MutationParams {
  MutationMechanism mechanism = MutationMechanism::pairwise;
  double sigma = 0.1;
  int ops_per_vector = 1;  // pairwise operations per vector per mutation
  double g_flip_rate = 0.0;  // per-state chance of flipping the output action

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

/// Clamps delta so that p_i + delta and p_j - delta both stay in [0, 1].
double clip_pairwise_delta(double p_i, double p_j, double delta);

/// One zero-sum pairwise step with the given pair and (unclipped) delta.
ProbVector apply_pairwise(ProbVector v, std::size_t i, std::size_t j, double delta);

/// ops_per_vector pairwise steps, each on an ordered pair i != j drawn
/// uniformly, with delta ~ N(0, sigma^2) clipped before use.
/// Throws std::invalid_argument when v has fewer than two entries.
ProbVector mutate_pairwise(const ProbVector& v, const MutationParams& params, Rng& rng);

/// Baseline: add the given noise to every entry, clamp negatives to zero,
/// renormalize. Returns an empty vector when everything clamps to zero.
ProbVector apply_linear_normalization(const ProbVector& v, std::span<const double> noise);

/// Baseline with N(0, sigma^2) noise; redraws up to 100 times when all
/// entries clamp to zero, then throws std::runtime_error.
ProbVector mutate_linear_normalization(const ProbVector& v, const MutationParams& params, Rng& rng);

/// Dispatch on params.mechanism. One-entry vectors are returned unchanged.
ProbVector mutate_vector(const ProbVector& v, const MutationParams& params, Rng& rng);

/// Marginal density of one coordinate of a uniform draw from the dim-simplex:
/// (dim - 1) (1 - k)^(dim - 2).
double marginal_density(double k, int dim);

/// Integral of marginal_density over [0, k]: 1 - (1 - k)^(dim - 1).
double marginal_cdf(double k, int dim);

/// Mutates every row of T and Theta independently; G is flipped per state
/// with probability g_flip_rate (off by default).
Genotype mutate_genotype(const Genotype& g, const MutationParams& params, Rng& rng);

}  // namespace smmevo
