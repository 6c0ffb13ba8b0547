#include "smmevo/mutation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace smmevo {

std::string_view to_string(MutationMechanism m) {
  return m == MutationMechanism::pairwise ? "pairwise" : "linear_normalization";
}

MutationMechanism mechanism_from_string(std::string_view s) {
  if (s == "pairwise") return MutationMechanism::pairwise;
  if (s == "linear_normalization" || s == "linear") return MutationMechanism::linear_normalization;
  throw std::invalid_argument("unknown mutation mechanism '" + std::string(s) + "'");
}

void MutationParams::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("sigma must be > 0");
  if (ops_per_vector < 1) throw std::invalid_argument("ops_per_vector must be >= 1");
  if (!(g_flip_rate >= 0.0 && g_flip_rate <= 1.0)) {
    throw std::invalid_argument("g_flip_rate must lie in [0, 1]");
  }
}

double clip_pairwise_delta(double p_i, double p_j, double delta) {
  const double hi = std::min(1.0 - p_i, p_j);
  const double lo = std::max(-p_i, p_j - 1.0);
  return std::clamp(delta, lo, hi);
}

ProbVector apply_pairwise(ProbVector v, std::size_t i, std::size_t j, double delta) {
  if (i == j || i >= v.size() || j >= v.size()) {
    throw std::invalid_argument("apply_pairwise: need two distinct in-range indices");
  }
  const double p_i = v[i];
  const double p_j = v[j];
  const double total = p_i + p_j;
  // A clipped step lands exactly on whichever bound binds first.
  if (delta <= std::max(-p_i, p_j - 1.0)) {
    if (-p_i >= p_j - 1.0) {
      v[i] = 0.0;
      v[j] = total;
    } else {
      v[i] = total - 1.0;
      v[j] = 1.0;
    }
  } else if (delta >= std::min(1.0 - p_i, p_j)) {
    if (p_j <= 1.0 - p_i) {
      v[i] = total;
      v[j] = 0.0;
    } else {
      v[i] = 1.0;
      v[j] = total - 1.0;
    }
  } else {
    v[i] += delta;
    v[j] -= delta;
  }
  // Rounding can leave an endpoint a few ulps outside [0, 1].
  v[i] = std::clamp(v[i], 0.0, 1.0);
  v[j] = std::clamp(v[j], 0.0, 1.0);
  return v;
}

ProbVector mutate_pairwise(const ProbVector& v, const MutationParams& params, Rng& rng) {
  const std::size_t dim = v.size();
  if (dim < 2) throw std::invalid_argument("mutate_pairwise: vector of dimension 1 has no pair");
  ProbVector out = v;
  for (int op = 0; op < params.ops_per_vector; ++op) {
    const auto i = static_cast<std::size_t>(rng.below(dim));
    const auto j = static_cast<std::size_t>((i + 1 + rng.below(dim - 1)) % dim);
    out = apply_pairwise(std::move(out), i, j, params.sigma * rng.normal());
  }
  return out;
}

ProbVector apply_linear_normalization(const ProbVector& v, std::span<const double> noise) {
  if (noise.size() != v.size()) throw std::invalid_argument("apply_linear_normalization: noise size");
  std::vector<double> w(v.size());
  double total = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    w[k] = std::max(0.0, v[k] + noise[k]);
    total += w[k];
  }
  if (!(total > 0.0)) return {};
  for (auto& x : w) x /= total;
  return ProbVector(std::move(w));
}

ProbVector mutate_linear_normalization(const ProbVector& v, const MutationParams& params, Rng& rng) {
  constexpr int kMaxRedraws = 100;
  std::vector<double> noise(v.size());
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    for (auto& x : noise) x = params.sigma * rng.normal();
    ProbVector out = apply_linear_normalization(v, noise);
    if (out.size() == v.size()) return out;
  }
  throw std::runtime_error("mutate_linear_normalization: every redraw clamped to the zero vector");
}

ProbVector mutate_vector(const ProbVector& v, const MutationParams& params, Rng& rng) {
  if (v.size() < 2) return v;
  switch (params.mechanism) {
    case MutationMechanism::pairwise:
      return mutate_pairwise(v, params, rng);
    case MutationMechanism::linear_normalization:
      return mutate_linear_normalization(v, params, rng);
  }
  return v;
}

double marginal_density(double k, int dim) {
  if (dim < 2) throw std::invalid_argument("marginal_density: dim must be >= 2");
  if (!(k >= 0.0 && k <= 1.0)) throw std::invalid_argument("marginal_density: k must lie in [0, 1]");
  return static_cast<double>(dim - 1) * std::pow(1.0 - k, dim - 2);
}

double marginal_cdf(double k, int dim) {
  if (dim < 2) throw std::invalid_argument("marginal_cdf: dim must be >= 2");
  k = std::clamp(k, 0.0, 1.0);
  return 1.0 - std::pow(1.0 - k, dim - 1);
}

Genotype mutate_genotype(const Genotype& g, const MutationParams& params, Rng& rng) {
  Genotype out = g;
  for (auto& row : out.transitions) row = mutate_vector(row, params, rng);
  out.initial = mutate_vector(out.initial, params, rng);
  if (params.g_flip_rate > 0.0) {
    for (auto& a : out.outputs) {
      if (rng.uniform() < params.g_flip_rate) a = opposite(a);
    }
  }
  return out;
}

}  // namespace smmevo
