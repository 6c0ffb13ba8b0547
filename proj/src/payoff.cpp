#include "smmevo/payoff.hpp"

#include <algorithm>
#include <exception>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace smmevo {

std::string_view to_string(Backend b) {
  switch (b) {
    case Backend::marginal_fixed_point:
      return "marginal_fixed_point";
    case Backend::joint_chain:
      return "joint_chain";
    case Backend::monte_carlo:
      return "monte_carlo";
  }
  return "?";
}

Backend backend_from_string(std::string_view s) {
  if (s == "marginal_fixed_point" || s == "marginal") return Backend::marginal_fixed_point;
  if (s == "joint_chain" || s == "joint") return Backend::joint_chain;
  if (s == "monte_carlo" || s == "mc") return Backend::monte_carlo;
  throw std::invalid_argument("unknown payoff backend '" + std::string(s) + "'");
}

void EngineParams::validate() const {
  if (!(tol > 0.0)) throw std::invalid_argument("engine tol must be > 0");
  if (max_iter < 1) throw std::invalid_argument("engine max_iter must be >= 1");
  if (rounds < 1) throw std::invalid_argument("engine rounds must be >= 1");
  if (reps < 1) throw std::invalid_argument("engine reps must be >= 1");
}

PairwiseResult PairwiseResult::swapped() const {
  PairwiseResult r = *this;
  std::swap(r.u_i, r.u_j);
  std::swap(r.time_avg_u_i, r.time_avg_u_j);
  std::swap(r.a_i_horizon, r.a_j_horizon);
  std::swap(r.se_u_i, r.se_u_j);
  std::swap(r.se_time_avg_i, r.se_time_avg_j);
  r.outcome = {outcome[0], outcome[2], outcome[1], outcome[3]};
  return r;
}

namespace {

std::array<double, 4> product_outcome(const ProbVector& a_i, const ProbVector& a_j) {
  return {a_i[0] * a_j[0], a_i[0] * a_j[1], a_i[1] * a_j[0], a_i[1] * a_j[1]};
}

// next[d] = sum_s p[s] * sum_phi a_opp[phi] * T(s, phi)[d]
void advance_marginal(const Genotype& g, const std::vector<double>& p, const ProbVector& a_opp,
                      std::vector<double>& next) {
  const std::size_t n = g.n_states();
  std::fill(next.begin(), next.end(), 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    if (p[s] == 0.0) continue;
    for (const Action phi : kActions) {
      const double w = p[s] * a_opp[index_of(phi)];
      if (w == 0.0) continue;
      const ProbVector& row = g.row(s, phi);
      for (std::size_t d = 0; d < n; ++d) next[d] += w * row[d];
    }
  }
  // The update is bilinear in the two marginals, so rounding error in the
  // total mass compounds geometrically unless it is removed every step.
  double total = 0.0;
  for (const double x : next) total += x;
  for (auto& x : next) x /= total;
}

double l1(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d += std::abs(a[k] - b[k]);
  return d;
}

void check_pair(const Genotype& m_i, const Genotype& m_j) {
  if (m_i.n_states() == 0 || m_j.n_states() == 0) throw std::invalid_argument("empty genotype");
}

}  // namespace

PairwiseResult marginal_fixed_point(const Genotype& m_i, const Genotype& m_j, const GameSpec& game,
                                    double tol, int max_iter, bool lagged_actions) {
  check_pair(m_i, m_j);
  if (!(tol > 0.0)) throw std::invalid_argument("marginal_fixed_point: tol must be > 0");
  std::vector<double> p_i(m_i.initial.begin(), m_i.initial.end());
  std::vector<double> p_j(m_j.initial.begin(), m_j.initial.end());
  std::vector<double> next_i(p_i.size());
  std::vector<double> next_j(p_j.size());
  ProbVector a_i = action_distribution(m_i, m_i.initial);
  ProbVector a_j = action_distribution(m_j, m_j.initial);

  PairwiseResult r;
  r.backend = Backend::marginal_fixed_point;
  auto [sum_i, sum_j] = expected_stage_payoff(a_i, a_j, game);
  int rounds = 1;
  for (int it = 1; it <= max_iter; ++it) {
    advance_marginal(m_i, p_i, a_j, next_i);
    advance_marginal(m_j, p_j, a_i, next_j);
    ProbVector na_i = action_distribution(m_i, ProbVector(lagged_actions ? p_i : next_i));
    ProbVector na_j = action_distribution(m_j, ProbVector(lagged_actions ? p_j : next_j));
    const double change = std::max({l1(next_i, p_i), l1(next_j, p_j), na_i.l1_distance(a_i),
                                    na_j.l1_distance(a_j)});
    p_i.swap(next_i);
    p_j.swap(next_j);
    a_i = std::move(na_i);
    a_j = std::move(na_j);
    const auto [s_i, s_j] = expected_stage_payoff(a_i, a_j, game);
    sum_i += s_i;
    sum_j += s_j;
    ++rounds;
    r.iterations_to_converge = it;
    if (change < tol) {
      r.converged = true;
      break;
    }
  }
  r.a_i_horizon = action_distribution(m_i, ProbVector(p_i));
  r.a_j_horizon = action_distribution(m_j, ProbVector(p_j));
  std::tie(r.u_i, r.u_j) = expected_stage_payoff(r.a_i_horizon, r.a_j_horizon, game);
  r.outcome = product_outcome(r.a_i_horizon, r.a_j_horizon);
  r.time_avg_u_i = sum_i / rounds;
  r.time_avg_u_j = sum_j / rounds;
  return r;
}

PairwiseResult joint_chain_payoff(const Genotype& m_i, const Genotype& m_j, const GameSpec& game,
                                  double tol, int max_iter) {
  check_pair(m_i, m_j);
  if (!(tol > 0.0)) throw std::invalid_argument("joint_chain_payoff: tol must be > 0");
  const std::size_t ni = m_i.n_states();
  const std::size_t nj = m_j.n_states();
  std::vector<double> joint(ni * nj);
  for (std::size_t s = 0; s < ni; ++s)
    for (std::size_t t = 0; t < nj; ++t) joint[s * nj + t] = m_i.initial[s] * m_j.initial[t];
  std::vector<double> next(joint.size());

  auto stage = [&](const std::vector<double>& dist) {
    double u_i = 0.0;
    double u_j = 0.0;
    for (std::size_t s = 0; s < ni; ++s) {
      for (std::size_t t = 0; t < nj; ++t) {
        const PayoffPair c = game.payoff(m_i.outputs[s], m_j.outputs[t]);
        u_i += dist[s * nj + t] * c.self;
        u_j += dist[s * nj + t] * c.other;
      }
    }
    return std::pair{u_i, u_j};
  };

  PairwiseResult r;
  r.backend = Backend::joint_chain;
  auto [sum_i, sum_j] = stage(joint);
  int rounds = 1;
  for (int it = 1; it <= max_iter; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t s = 0; s < ni; ++s) {
      for (std::size_t t = 0; t < nj; ++t) {
        const double w = joint[s * nj + t];
        if (w == 0.0) continue;
        // Each machine moves on what the other just played.
        const ProbVector& row_i = m_i.row(s, m_j.outputs[t]);
        const ProbVector& row_j = m_j.row(t, m_i.outputs[s]);
        for (std::size_t s2 = 0; s2 < ni; ++s2) {
          const double ws = w * row_i[s2];
          if (ws == 0.0) continue;
          for (std::size_t t2 = 0; t2 < nj; ++t2) next[s2 * nj + t2] += ws * row_j[t2];
        }
      }
    }
    const double change = l1(next, joint);
    joint.swap(next);
    const auto [s_i, s_j] = stage(joint);
    sum_i += s_i;
    sum_j += s_j;
    ++rounds;
    r.iterations_to_converge = it;
    if (change < tol) {
      r.converged = true;
      break;
    }
  }
  std::array<double, 4> outcome{};
  std::vector<double> a_i(2, 0.0);
  std::vector<double> a_j(2, 0.0);
  for (std::size_t s = 0; s < ni; ++s) {
    for (std::size_t t = 0; t < nj; ++t) {
      const double w = joint[s * nj + t];
      const std::size_t x = index_of(m_i.outputs[s]);
      const std::size_t y = index_of(m_j.outputs[t]);
      outcome[2 * x + y] += w;
      a_i[x] += w;
      a_j[y] += w;
    }
  }
  r.outcome = outcome;
  r.a_i_horizon = ProbVector(std::move(a_i));
  r.a_j_horizon = ProbVector(std::move(a_j));
  std::tie(r.u_i, r.u_j) = stage(joint);
  r.time_avg_u_i = sum_i / rounds;
  r.time_avg_u_j = sum_j / rounds;
  return r;
}

PairwiseResult monte_carlo_payoff(const Genotype& m_i, const Genotype& m_j, const GameSpec& game,
                                  int rounds, int reps, Rng& rng) {
  check_pair(m_i, m_j);
  if (rounds < 1 || reps < 1) throw std::invalid_argument("monte_carlo_payoff: rounds and reps must be >= 1");
  // Welford accumulators: final-round payoff and per-round average, both players.
  struct Moments {
    double mean = 0.0;
    double m2 = 0.0;
    void add(double x, int count) {
      const double d = x - mean;
      mean += d / count;
      m2 += d * (x - mean);
    }
    double standard_error(int count) const {
      return count > 1 ? std::sqrt(m2 / (count - 1) / count) : 0.0;
    }
  };
  Moments final_i, final_j, avg_i, avg_j;
  std::array<double, 4> outcome_counts{};
  for (int rep = 1; rep <= reps; ++rep) {
    std::size_t s = sample_initial_state(m_i, rng);
    std::size_t t = sample_initial_state(m_j, rng);
    double total_i = 0.0;
    double total_j = 0.0;
    PayoffPair last{};
    std::size_t last_outcome = 0;
    for (int k = 0; k < rounds; ++k) {
      const Action x = m_i.outputs[s];
      const Action y = m_j.outputs[t];
      last = game.payoff(x, y);
      last_outcome = 2 * index_of(x) + index_of(y);
      total_i += last.self;
      total_j += last.other;
      if (k + 1 < rounds) {
        const std::size_t s_next = step(m_i, s, y, rng);
        t = step(m_j, t, x, rng);
        s = s_next;
      }
    }
    outcome_counts[last_outcome] += 1.0;
    final_i.add(last.self, rep);
    final_j.add(last.other, rep);
    avg_i.add(total_i / rounds, rep);
    avg_j.add(total_j / rounds, rep);
  }
  PairwiseResult r;
  r.backend = Backend::monte_carlo;
  r.u_i = final_i.mean;
  r.u_j = final_j.mean;
  r.time_avg_u_i = avg_i.mean;
  r.time_avg_u_j = avg_j.mean;
  r.se_u_i = final_i.standard_error(reps);
  r.se_u_j = final_j.standard_error(reps);
  r.se_time_avg_i = avg_i.standard_error(reps);
  r.se_time_avg_j = avg_j.standard_error(reps);
  for (auto& c : outcome_counts) c /= reps;
  r.outcome = outcome_counts;
  r.a_i_horizon = ProbVector{r.outcome[0] + r.outcome[1], r.outcome[2] + r.outcome[3]};
  r.a_j_horizon = ProbVector{r.outcome[0] + r.outcome[2], r.outcome[1] + r.outcome[3]};
  r.iterations_to_converge = rounds;
  r.converged = true;
  return r;
}

PairwiseResult evaluate_pair(const Genotype& m_i, const Genotype& m_j, const GameSpec& game,
                             const EngineParams& params, std::uint64_t seed) {
  switch (params.backend) {
    case Backend::marginal_fixed_point:
      return marginal_fixed_point(m_i, m_j, game, params.tol, params.max_iter, params.lagged_actions);
    case Backend::joint_chain:
      return joint_chain_payoff(m_i, m_j, game, params.tol, params.max_iter);
    case Backend::monte_carlo: {
      Rng rng(seed);
      return monte_carlo_payoff(m_i, m_j, game, params.rounds, params.reps, rng);
    }
  }
  throw std::logic_error("evaluate_pair: unhandled backend");
}

double fitness_payoff_i(const PairwiseResult& r) {
  return r.backend == Backend::monte_carlo ? r.time_avg_u_i : r.u_i;
}

std::size_t PopulationEvaluation::pair_index(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  if (i == j || j >= n) throw std::out_of_range("pair_index: need i != j < n");
  // Row-major upper triangle without the diagonal.
  return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

PairwiseResult PopulationEvaluation::result(std::size_t i, std::size_t j) const {
  const PairwiseResult& r = pairs[pair_index(i, j)];
  return i < j ? r : r.swapped();
}

std::vector<std::vector<double>> PopulationEvaluation::payoff_matrix() const {
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const PairwiseResult& r = pairs[pair_index(i, j)];
      m[i][j] = fitness_payoff_i(r);
      m[j][i] = fitness_payoff_i(r.swapped());
    }
  return m;
}

std::vector<ProbVector> PopulationEvaluation::mean_horizon_actions() const {
  std::vector<std::vector<double>> acc(n, std::vector<double>(kNumActions, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const PairwiseResult& r = pairs[pair_index(i, j)];
      for (std::size_t a = 0; a < kNumActions; ++a) {
        acc[i][a] += r.a_i_horizon[a];
        acc[j][a] += r.a_j_horizon[a];
      }
    }
  std::vector<ProbVector> out;
  out.reserve(n);
  for (auto& v : acc) {
    for (auto& x : v) x /= static_cast<double>(n - 1);
    out.emplace_back(std::move(v));
  }
  return out;
}

std::array<double, 3> PopulationEvaluation::interaction_ratios() const {
  std::array<double, 3> r{};
  for (const auto& p : pairs) {
    r[0] += p.outcome[0];
    r[1] += p.outcome[1] + p.outcome[2];
    r[2] += p.outcome[3];
  }
  const double total = r[0] + r[1] + r[2];
  if (total > 0.0)
    for (auto& x : r) x /= total;
  return r;
}

double PopulationEvaluation::mean_score() const {
  double s = 0.0;
  for (const double f : fitness) s += f;
  return s / (static_cast<double>(n) * static_cast<double>(n - 1));
}

int PopulationEvaluation::non_converged() const {
  return static_cast<int>(std::count_if(pairs.begin(), pairs.end(),
                                        [](const PairwiseResult& r) { return !r.converged; }));
}

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  // The first failure (lowest worker index) is rethrown after all workers join.
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        try {
          for (std::size_t k = w; k < count; k += workers) fn(k);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

PopulationEvaluation population_fitness(std::span<const Genotype> population, const GameSpec& game,
                                        const EngineParams& params, std::uint64_t seed) {
  const std::size_t n = population.size();
  if (n < 2) throw std::invalid_argument("population_fitness: need at least 2 agents");
  PopulationEvaluation ev;
  ev.n = n;
  ev.pairs.resize(n * (n - 1) / 2);
  std::vector<std::pair<std::size_t, std::size_t>> index;
  index.reserve(ev.pairs.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) index.emplace_back(i, j);
  parallel_for(index.size(), params.workers, [&](std::size_t k) {
    const auto [i, j] = index[k];
    ev.pairs[k] = evaluate_pair(population[i], population[j], game, params,
                                Rng::derive_seed(seed, "pair", {i, j}));
  });
  ev.fitness.assign(n, 0.0);
  for (std::size_t k = 0; k < index.size(); ++k) {
    const auto [i, j] = index[k];
    ev.fitness[i] += fitness_payoff_i(ev.pairs[k]);
    ev.fitness[j] += fitness_payoff_i(ev.pairs[k].swapped());
  }
  return ev;
}

}  // namespace smmevo
