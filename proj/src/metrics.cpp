#include "smmevo/metrics.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

namespace smmevo {

double homogeneity(std::span<const ProbVector> horizon_actions) {
  const std::size_t n = horizon_actions.size();
  if (n < 2) throw std::invalid_argument("homogeneity: need at least 2 agents");
  const std::size_t dim = horizon_actions[0].size();
  for (const auto& a : horizon_actions) {
    if (a.size() != dim) throw std::invalid_argument("homogeneity: vectors differ in dimension");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double d2 = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        const double d = horizon_actions[i][k] - horizon_actions[j][k];
        d2 += d * d;
      }
      total += 2.0 * d2;  // (i, j) and (j, i)
    }
  }
  return total / (static_cast<double>(n) * static_cast<double>(n - 1));
}

double chi_square_sf(double statistic, int dof) {
  if (dof < 1) throw std::invalid_argument("chi_square_sf: dof must be >= 1");
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * statistic);
}

GofResult chi_square_gof(std::span<const double> observed_counts, std::span<const double> expected_probs) {
  if (observed_counts.size() != expected_probs.size()) {
    throw std::invalid_argument("chi_square_gof: observed and expected differ in length");
  }
  if (observed_counts.size() < 2) throw std::invalid_argument("chi_square_gof: need at least 2 bins");
  double total = 0.0;
  for (const double o : observed_counts) {
    if (o < 0.0) throw std::invalid_argument("chi_square_gof: negative count");
    total += o;
  }
  if (!(total > 0.0)) throw std::invalid_argument("chi_square_gof: total count must be > 0");
  const ProbVector probs(std::vector<double>(expected_probs.begin(), expected_probs.end()));
  if (!probs.is_valid()) throw std::invalid_argument("chi_square_gof: expected probabilities are not a distribution");

  GofResult r;
  for (std::size_t k = 0; k < observed_counts.size(); ++k) {
    const double e = total * expected_probs[k];
    if (e < 5.0) {
      throw LowExpectedCountError("chi_square_gof: bin " + std::to_string(k) + " expects " +
                                  std::to_string(e) + " < 5 observations; merge bins and retry");
    }
    const double d = observed_counts[k] - e;
    r.statistic += d * d / e;
  }
  r.degrees_of_freedom = static_cast<int>(observed_counts.size()) - 1;
  r.p_value = chi_square_sf(r.statistic, r.degrees_of_freedom);
  r.complement_p = r.statistic <= 0.0
                       ? 0.0
                       : boost::math::gamma_p(0.5 * r.degrees_of_freedom, 0.5 * r.statistic);
  return r;
}

VectorMutator make_mutator(const MutationParams& params) {
  params.validate();
  return [params](const ProbVector& v, Rng& rng) { return mutate_vector(v, params, rng); };
}

std::vector<BiasTracePoint> mutation_bias_trace(const VectorMutator& mutate, std::size_t dim,
                                                std::uint64_t iterations,
                                                std::span<const std::uint64_t> checkpoints, Rng& rng) {
  if (dim < 2) throw std::invalid_argument("mutation_bias_trace: dim must be >= 2");
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end())) {
    throw std::invalid_argument("mutation_bias_trace: checkpoints must be increasing");
  }
  ProbVector v = sample_simplex(dim, rng);
  std::vector<double> tally(dim, 0.0);
  const std::vector<double> uniform(dim, 1.0 / static_cast<double>(dim));
  std::vector<BiasTracePoint> trace;
  auto next_checkpoint = checkpoints.begin();
  for (std::uint64_t it = 1; it <= iterations && next_checkpoint != checkpoints.end(); ++it) {
    v = mutate(v, rng);
    const auto top = std::max_element(v.begin(), v.end());  // ties go to the lower index
    tally[static_cast<std::size_t>(top - v.begin())] += 1.0;
    while (next_checkpoint != checkpoints.end() && *next_checkpoint == it) {
      // Too few observations for a valid test are skipped.
      if (static_cast<double>(it) / static_cast<double>(dim) >= 5.0) {
        trace.push_back({it, chi_square_gof(tally, uniform)});
      }
      ++next_checkpoint;
    }
  }
  return trace;
}

std::vector<std::uint64_t> log_checkpoints(std::uint64_t iterations) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t c = 10; c < iterations; c *= 10) out.push_back(c);
  if (iterations > 0) out.push_back(iterations);
  return out;
}

std::vector<double> marginal_bin_probabilities(int dim, std::size_t bins) {
  if (bins == 0) throw std::invalid_argument("marginal_bin_probabilities: need at least one bin");
  std::vector<double> probs(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    const double lo = static_cast<double>(b) / static_cast<double>(bins);
    const double hi = static_cast<double>(b + 1) / static_cast<double>(bins);
    probs[b] = marginal_cdf(hi, dim) - marginal_cdf(lo, dim);
  }
  return probs;
}

void merge_low_expected(std::span<const double> counts, std::span<const double> probs, double total,
                        std::vector<double>& merged_counts, std::vector<double>& merged_probs) {
  merged_counts.clear();
  merged_probs.clear();
  double c = 0.0;
  double p = 0.0;
  for (std::size_t b = 0; b < counts.size(); ++b) {
    c += counts[b];
    p += probs[b];
    if (p * total >= 5.0) {
      merged_counts.push_back(c);
      merged_probs.push_back(p);
      c = 0.0;
      p = 0.0;
    }
  }
  if (p > 0.0 || c > 0.0) {
    if (merged_counts.empty()) {
      merged_counts.push_back(c);
      merged_probs.push_back(p);
    } else {
      merged_counts.back() += c;
      merged_probs.back() += p;
    }
  }
}

DensityFit density_fit(const VectorMutator& mutate, std::size_t dim, std::uint64_t iterations,
                       std::size_t bins, Rng& rng) {
  if (dim < 2) throw std::invalid_argument("density_fit: dim must be >= 2");
  if (bins < 2) throw std::invalid_argument("density_fit: need at least 2 bins");
  DensityFit out;
  out.counts.assign(bins, 0.0);
  out.edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) out.edges[b] = static_cast<double>(b) / static_cast<double>(bins);
  out.expected_probs = marginal_bin_probabilities(static_cast<int>(dim), bins);

  ProbVector v = sample_simplex(dim, rng);
  std::uint64_t zeros = 0;
  std::uint64_t ones = 0;
  for (std::uint64_t it = 0; it < iterations; ++it) {
    v = mutate(v, rng);
    const double x = v[0];
    zeros += x == 0.0;
    ones += x == 1.0;
    const auto b = std::min(bins - 1, static_cast<std::size_t>(x * static_cast<double>(bins)));
    out.counts[b] += 1.0;
  }
  const auto total = static_cast<double>(iterations);
  out.mass_at_zero = static_cast<double>(zeros) / total;
  out.mass_at_one = static_cast<double>(ones) / total;
  merge_low_expected(out.counts, out.expected_probs, total, out.merged_counts, out.merged_probs);
  out.fit = chi_square_gof(out.merged_counts, out.merged_probs);
  return out;
}

TrialSummary trial_summary(std::span<const double> mean_scores, std::size_t burn_in) {
  if (mean_scores.size() <= burn_in) {
    throw std::invalid_argument("trial_summary: need more than burn_in = " + std::to_string(burn_in) +
                                " generations, got " + std::to_string(mean_scores.size()));
  }
  TrialSummary s;
  double total = 0.0;
  for (std::size_t g = burn_in; g < mean_scores.size(); ++g) total += mean_scores[g];
  s.generations_used = mean_scores.size() - burn_in;
  s.mean_score = total / static_cast<double>(s.generations_used);
  s.min_cooperation = std::clamp(2.0 * (s.mean_score - 2.5), 0.0, 1.0);
  return s;
}

std::vector<double> moving_average(std::span<const double> values, std::size_t window) {
  if (window == 0) throw std::invalid_argument("moving_average: window must be >= 1");
  std::vector<double> out(values.size());
  double running = 0.0;
  for (std::size_t t = 0; t < values.size(); ++t) {
    running += values[t];
    if (t >= window) running -= values[t - window];
    out[t] = running / static_cast<double>(std::min(t + 1, window));
  }
  return out;
}

}  // namespace smmevo
