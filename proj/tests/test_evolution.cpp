#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "smmevo/evolution.hpp"

using namespace smmevo;

namespace {

constexpr auto T = SelectionMethod::truncation;
constexpr auto R = SelectionMethod::roulette;
constexpr auto U = SelectionMethod::uniform;

SimulationConfig small_config(char label, std::size_t generations) {
  SimulationConfig c;
  c.evolution.paradigm = SelectionParadigm::from_label(std::string(1, label));
  c.n_agents = 8;
  c.generations = generations;
  return c;
}

}  // namespace

TEST_SUITE("evolution") {
  TEST_CASE("paradigm table") {
    struct Row {
      char label;
      SelectionMethod rep, surv;
      bool overlap;
    };
    const Row rows[] = {{'a', T, T, true},  {'b', R, T, true},  {'c', T, T, false},
                        {'d', U, T, false}, {'e', T, U, true},  {'f', R, U, true},
                        {'g', T, U, false}, {'h', R, U, false}, {'i', U, U, true}};
    for (const Row& r : rows) {
      const auto p = SelectionParadigm::from_label(std::string(1, r.label));
      CHECK(p.reproductive == r.rep);
      CHECK(p.survival == r.surv);
      CHECK(p.overlap == r.overlap);
      CHECK(SelectionParadigm::from_triple(r.rep, r.surv, r.overlap).label == r.label);
      CHECK(SelectionParadigm::from_label("(" + std::string(1, r.label) + ")") == p);
    }
    CHECK(SelectionParadigm::from_triple(U, U, false).label == '?');
    CHECK_THROWS_AS(SelectionParadigm::from_label("j"), std::invalid_argument);
    CHECK(SelectionParadigm::from_label("a").describe() == "(a) truncation/truncation/overlap");
  }

  TEST_CASE("truncation keeps the fittest, ties to the lower index") {
    Rng rng(1);
    const std::vector<double> f{2.0, 5.0, 3.0, 5.0, 1.0};
    CHECK(select(f, T, 3, rng) == std::vector<std::size_t>{1, 3, 2});
    CHECK_THROWS_AS(select(f, T, 6, rng), std::invalid_argument);
  }

  TEST_CASE("roulette is proportional to fitness") {
    Rng rng(2);
    const std::vector<double> f{3.0, 1.0};
    const int n = 20000;
    int first = 0;
    for (int k = 0; k < n; ++k) first += select(f, R, 1, rng)[0] == 0;
    CHECK(std::abs(first / double(n) - 0.75) < 3.0 * std::sqrt(0.75 * 0.25 / n));

    const std::vector<double> zeros{0.0, 0.0, 0.0};
    auto picks = select(zeros, R, 3, rng);
    std::sort(picks.begin(), picks.end());
    CHECK(picks == std::vector<std::size_t>{0, 1, 2});
    const std::vector<double> negative{1.0, -1.0};
    CHECK_THROWS_AS(select(negative, R, 1, rng), std::invalid_argument);
  }

  TEST_CASE("uniform selection ignores fitness") {
    Rng rng(3);
    const std::vector<double> f{100.0, 0.0, 0.0, 0.0};
    const int n = 20000;
    std::vector<int> hits(4, 0);
    for (int k = 0; k < n; ++k) {
      const auto s = select(f, U, 2, rng);
      REQUIRE(s[0] != s[1]);
      for (auto i : s) ++hits[i];
    }
    for (int h : hits) CHECK(std::abs(h / double(n) - 0.5) < 3.0 * std::sqrt(0.25 / n));
  }

  TEST_CASE("a uniform all_c population keeps scoring 3") {
    SimulationConfig c = small_config('i', 5);
    Population pop{std::vector<Genotype>(8, canonical("all_c")), 0};
    for (int g = 0; g < 5; ++g) {
      auto out = run_generation(pop, c.evolution, 100 + g);
      CHECK(out.record.mean_score == 3.0);
      CHECK(out.record.homogeneity == 0.0);
      pop = out.population;
    }
  }

  TEST_CASE("a lone defector among cooperators is fittest and survives") {
    std::vector<Genotype> agents(19, canonical("all_c"));
    agents.push_back(canonical("all_d"));
    const Population pop{agents, 0};
    EvolutionParams params;
    const auto ev = population_fitness(pop.agents, params.game, params.engine, 0);
    CHECK(ev.fitness[19] == 76.0);
    CHECK(ev.fitness[0] == 55.0);

    const auto out = run_generation(pop, ev, params, 5);
    CHECK(std::count(out.population.agents.begin(), out.population.agents.end(), canonical("all_d")) >= 1);
  }

  TEST_CASE("every paradigm preserves the population size") {
    for (const auto& p : SelectionParadigm::table()) {
      SimulationConfig c = small_config(p.label, 3);
      const auto records = run_simulation(c, 42);
      REQUIRE(records.size() == 4);
      for (const auto& r : records) CHECK(r.fitness.size() == 8);
    }
  }

  TEST_CASE("simulations are a pure function of config and seed") {
    SimulationConfig c = small_config('b', 6);
    c.snapshot_every = 3;
    const auto a = run_simulation(c, 9);
    const auto b = run_simulation(c, 9);
    const auto other = run_simulation(c, 10);
    REQUIRE(a.size() == b.size());
    for (std::size_t g = 0; g < a.size(); ++g) {
      CHECK(a[g].fitness == b[g].fitness);
      CHECK(a[g].genotypes == b[g].genotypes);
    }
    CHECK(a.back().fitness != other.back().fitness);
    CHECK(a[3].genotypes.size() == 8);
    CHECK(a[2].genotypes.empty());

    c.evolution.engine.workers = 3;
    const auto threaded = run_simulation(c, 9);
    CHECK(threaded.back().fitness == a.back().fitness);
  }

  TEST_CASE("PD mean score follows the interaction ratios") {
    SimulationConfig c = small_config('a', 10);
    for (const auto& r : run_simulation(c, 3)) {
      const auto& q = r.interaction_ratios;
      CHECK(q[0] + q[1] + q[2] == doctest::Approx(1.0));
      CHECK(r.mean_score == doctest::Approx(3.0 * q[0] + 2.5 * q[1] + 2.0 * q[2]).epsilon(1e-9));
      CHECK(r.mean_score <= 2.5 + 0.5 * q[0] + 1e-9);
    }
  }

  TEST_CASE("evolution parameter checks") {
    EvolutionParams p;
    p.offspring_per_parent = 0;
    CHECK_THROWS(p.validate(20));
    p = {};
    p.parents = 21;
    CHECK_THROWS(p.validate(20));
    p = {};
    p.paradigm = SelectionParadigm::from_label("c");
    p.parents = 5;
    p.offspring_per_parent = 2;
    CHECK_THROWS(p.validate(20));  // too few offspring to refill without overlap
    CHECK(offspring_evaluation_from_string("full_tournament") == OffspringEvaluation::full_tournament);
  }
}
