#include "smmevo/evolution.hpp"

#include <algorithm>
#include <iostream>
#include <numeric>
#include <stdexcept>

#include "smmevo/metrics.hpp"

namespace smmevo {

std::string_view to_string(SelectionMethod m) {
  switch (m) {
    case SelectionMethod::truncation:
      return "truncation";
    case SelectionMethod::roulette:
      return "roulette";
    case SelectionMethod::uniform:
      return "uniform";
  }
  return "?";
}

SelectionMethod selection_from_string(std::string_view s) {
  if (s == "truncation") return SelectionMethod::truncation;
  if (s == "roulette") return SelectionMethod::roulette;
  if (s == "uniform") return SelectionMethod::uniform;
  throw std::invalid_argument("unknown selection method '" + std::string(s) + "'");
}

std::string_view to_string(OffspringEvaluation e) {
  return e == OffspringEvaluation::against_parents ? "against_parents" : "full_tournament";
}

OffspringEvaluation offspring_evaluation_from_string(std::string_view s) {
  if (s == "against_parents") return OffspringEvaluation::against_parents;
  if (s == "full_tournament") return OffspringEvaluation::full_tournament;
  throw std::invalid_argument("unknown offspring evaluation '" + std::string(s) + "'");
}

const std::array<SelectionParadigm, 9>& SelectionParadigm::table() {
  using enum SelectionMethod;
  static const std::array<SelectionParadigm, 9> rows{{
      {truncation, truncation, true, 'a'},
      {roulette, truncation, true, 'b'},
      {truncation, truncation, false, 'c'},
      {uniform, truncation, false, 'd'},
      {truncation, uniform, true, 'e'},
      {roulette, uniform, true, 'f'},
      {truncation, uniform, false, 'g'},
      {roulette, uniform, false, 'h'},
      {uniform, uniform, true, 'i'},
  }};
  return rows;
}

SelectionParadigm SelectionParadigm::from_label(std::string_view label) {
  if (label.size() == 3 && label.front() == '(' && label.back() == ')') label = label.substr(1, 1);
  if (label.size() == 1) {
    for (const auto& row : table()) {
      if (row.label == label[0]) return row;
    }
  }
  throw std::invalid_argument("unknown paradigm label '" + std::string(label) + "' (expected a-i)");
}

SelectionParadigm SelectionParadigm::from_triple(SelectionMethod reproductive, SelectionMethod survival,
                                                 bool overlap) {
  for (const auto& row : table()) {
    if (row.reproductive == reproductive && row.survival == survival && row.overlap == overlap) return row;
  }
  return {reproductive, survival, overlap, '?'};
}

std::string SelectionParadigm::describe() const {
  return std::string("(") + label + ") " + std::string(to_string(reproductive)) + "/" +
         std::string(to_string(survival)) + "/" + (overlap ? "overlap" : "no-overlap");
}

std::vector<std::size_t> select(std::span<const double> fitness, SelectionMethod method, std::size_t count,
                                Rng& rng) {
  const std::size_t n = fitness.size();
  if (count > n) {
    throw std::invalid_argument("select: count " + std::to_string(count) + " exceeds pool size " +
                                std::to_string(n));
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  switch (method) {
    case SelectionMethod::truncation: {
      std::stable_sort(idx.begin(), idx.end(),
                       [&](std::size_t a, std::size_t b) { return fitness[a] > fitness[b]; });
      idx.resize(count);
      return idx;
    }
    case SelectionMethod::uniform: {
      for (std::size_t k = 0; k < count; ++k) {
        const auto pick = k + static_cast<std::size_t>(rng.below(n - k));
        std::swap(idx[k], idx[pick]);
      }
      idx.resize(count);
      return idx;
    }
    case SelectionMethod::roulette: {
      for (const double f : fitness) {
        if (f < 0.0) throw std::invalid_argument("select: roulette needs nonnegative fitness");
      }
      std::vector<std::size_t> out;
      out.reserve(count);
      std::vector<double> weight(fitness.begin(), fitness.end());
      bool warned = false;
      for (std::size_t k = 0; k < count; ++k) {
        double total = 0.0;
        for (std::size_t r = k; r < n; ++r) total += weight[idx[r]];
        std::size_t pick = k;
        if (total > 0.0) {
          const double u = rng.uniform() * total;
          double acc = 0.0;
          std::size_t last_positive = k;
          for (std::size_t r = k; r < n; ++r) {
            const double w = weight[idx[r]];
            if (w <= 0.0) continue;
            last_positive = r;
            acc += w;
            if (u < acc) break;
          }
          pick = last_positive;
          // last_positive stops at the crossing entry when the loop breaks.
        } else {
          if (!warned) std::clog << "warning: roulette selection over zero total fitness; drawing uniformly\n";
          warned = true;
          pick = k + static_cast<std::size_t>(rng.below(n - k));
        }
        std::swap(idx[k], idx[pick]);
        out.push_back(idx[k]);
      }
      return out;
    }
  }
  throw std::logic_error("select: unhandled method");
}

void EvolutionParams::validate(std::size_t population_size) const {
  mutation.validate();
  engine.validate();
  if (population_size < 2) throw std::invalid_argument("population needs at least 2 agents");
  if (parents > population_size) throw std::invalid_argument("parents exceeds the population size");
  if (offspring_per_parent < 1) throw std::invalid_argument("offspring_per_parent must be >= 1");
  const std::size_t p = parents == 0 ? population_size : parents;
  const std::size_t pool = p * offspring_per_parent + (paradigm.overlap ? p : 0);
  if (pool < population_size) {
    throw std::invalid_argument("survival pool of " + std::to_string(pool) +
                                " cannot refill a population of " + std::to_string(population_size));
  }
}

GenerationRecord make_record(std::size_t generation, const Population& pop, const PopulationEvaluation& ev,
                             bool keep_genotypes) {
  GenerationRecord rec;
  rec.generation = generation;
  rec.fitness = ev.fitness;
  rec.mean_score = ev.mean_score();
  rec.interaction_ratios = ev.interaction_ratios();
  rec.homogeneity = homogeneity(ev.mean_horizon_actions());
  rec.non_converged_pairs = ev.non_converged();
  if (keep_genotypes) rec.genotypes = pop.agents;
  return rec;
}

GenerationOutcome run_generation(const Population& pop, const PopulationEvaluation& current,
                                 const EvolutionParams& params, std::uint64_t seed) {
  const std::size_t n = pop.agents.size();
  params.validate(n);
  if (current.n != n) throw std::invalid_argument("run_generation: evaluation does not match population");
  const std::size_t n_parents = params.parents == 0 ? n : params.parents;

  Rng reproduce_rng = Rng::derive(seed, "reproduce");
  Rng mutate_rng = Rng::derive(seed, "mutate");
  Rng survive_rng = Rng::derive(seed, "survive");

  const std::vector<std::size_t> parents =
      select(current.fitness, params.paradigm.reproductive, n_parents, reproduce_rng);

  std::vector<Genotype> offspring;
  std::vector<std::size_t> parent_of;
  offspring.reserve(n_parents * params.offspring_per_parent);
  for (const std::size_t p : parents) {
    for (std::size_t c = 0; c < params.offspring_per_parent; ++c) {
      offspring.push_back(mutate_genotype(pop.agents[p], params.mutation, mutate_rng));
      parent_of.push_back(p);
    }
  }

  // Survival pool: offspring and, under overlap, the selected parents.
  std::vector<double> off_fit(offspring.size(), 0.0);
  std::vector<double> par_fit;
  if (params.offspring_evaluation == OffspringEvaluation::against_parents) {
    parallel_for(offspring.size(), params.engine.workers, [&](std::size_t c) {
      double total = 0.0;
      for (std::size_t q = 0; q < n; ++q) {
        if (q == parent_of[c]) continue;
        total += fitness_payoff_i(evaluate_pair(offspring[c], pop.agents[q], params.game, params.engine,
                                                Rng::derive_seed(seed, "offspring", {c, q})));
      }
      off_fit[c] = total;
    });
    if (params.paradigm.overlap) {
      for (const std::size_t p : parents) par_fit.push_back(current.fitness[p]);
    }
  }
  std::vector<Genotype> pool;
  std::vector<double> pool_fitness;
  auto append_parents = [&] {
    if (!params.paradigm.overlap) return;
    for (const std::size_t p : parents) pool.push_back(pop.agents[p]);
    pool_fitness.insert(pool_fitness.end(), par_fit.begin(), par_fit.end());
  };
  auto append_offspring = [&] {
    pool.insert(pool.end(), offspring.begin(), offspring.end());
    pool_fitness.insert(pool_fitness.end(), off_fit.begin(), off_fit.end());
  };
  if (params.offspring_first) {
    append_offspring();
    append_parents();
  } else {
    append_parents();
    append_offspring();
  }
  if (params.offspring_evaluation == OffspringEvaluation::full_tournament) {
    pool_fitness = population_fitness(pool, params.game, params.engine, Rng::derive_seed(seed, "pool")).fitness;
  }

  std::vector<std::size_t> survivors = pool.size() == n
                                           ? std::vector<std::size_t>{}
                                           : select(pool_fitness, params.paradigm.survival, n, survive_rng);
  if (survivors.empty()) {
    survivors.resize(n);
    std::iota(survivors.begin(), survivors.end(), 0);
  }
  std::sort(survivors.begin(), survivors.end());

  GenerationOutcome out;
  out.population.generation = pop.generation + 1;
  out.population.agents.reserve(n);
  for (const std::size_t s : survivors) out.population.agents.push_back(std::move(pool[s]));
  out.evaluation = population_fitness(out.population.agents, params.game, params.engine,
                                      Rng::derive_seed(seed, "survivors"));
  out.record = make_record(out.population.generation, out.population, out.evaluation, params.keep_genotypes);
  return out;
}

GenerationOutcome run_generation(const Population& pop, const EvolutionParams& params, std::uint64_t seed) {
  const PopulationEvaluation current =
      population_fitness(pop.agents, params.game, params.engine, Rng::derive_seed(seed, "current"));
  return run_generation(pop, current, params, seed);
}

std::vector<GenerationRecord> run_simulation(const SimulationConfig& config, std::uint64_t seed,
                                             const std::function<void(const GenerationRecord&)>& on_record) {
  config.evolution.validate(config.n_agents);
  if (config.n_states < 1) throw std::invalid_argument("n_states must be >= 1");

  Population pop;
  Rng init_rng = Rng::derive(seed, "init");
  pop.agents.reserve(config.n_agents);
  for (std::size_t k = 0; k < config.n_agents; ++k) pop.agents.push_back(random_genotype(config.n_states, init_rng));

  auto wants_snapshot = [&](std::size_t g) {
    return config.evolution.keep_genotypes || (config.snapshot_every > 0 && g % config.snapshot_every == 0);
  };

  std::vector<GenerationRecord> records;
  records.reserve(config.generations + 1);
  PopulationEvaluation ev =
      population_fitness(pop.agents, config.evolution.game, config.evolution.engine, Rng::derive_seed(seed, "eval0"));
  records.push_back(make_record(0, pop, ev, wants_snapshot(0)));
  if (on_record) on_record(records.back());

  EvolutionParams params = config.evolution;
  for (std::size_t g = 1; g <= config.generations; ++g) {
    params.keep_genotypes = wants_snapshot(g);
    GenerationOutcome next = run_generation(pop, ev, params, Rng::derive_seed(seed, "generation", {g}));
    pop = std::move(next.population);
    ev = std::move(next.evaluation);
    records.push_back(std::move(next.record));
    if (on_record) on_record(records.back());
  }
  return records;
}

}  // namespace smmevo
