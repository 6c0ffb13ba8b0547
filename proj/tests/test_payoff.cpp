#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "smmevo/payoff.hpp"

using namespace smmevo;

TEST_SUITE("payoff") {
  TEST_CASE("grim against itself cooperates at once") {
    const Genotype g = canonical("grim");
    const PairwiseResult r = marginal_fixed_point(g, g, prisoners_dilemma());
    CHECK(r.u_i == 3.0);
    CHECK(r.u_j == 3.0);
    CHECK(r.converged);
    CHECK(r.iterations_to_converge <= 2);
    CHECK(r.outcome[0] == doctest::Approx(1.0));
  }

  TEST_CASE("all_d exploits all_c") {
    const PairwiseResult r = marginal_fixed_point(canonical("all_d"), canonical("all_c"), prisoners_dilemma());
    CHECK(r.u_i == 4.0);
    CHECK(r.u_j == 1.0);
    CHECK(r.outcome[2] == doctest::Approx(1.0));
    const PairwiseResult s = r.swapped();
    CHECK(s.u_i == 1.0);
    CHECK(s.outcome[1] == doctest::Approx(1.0));
  }

  TEST_CASE("joint chain on deterministic pairs") {
    const GameSpec pd = prisoners_dilemma();
    PairwiseResult r = joint_chain_payoff(canonical("grim"), canonical("grim"), pd);
    CHECK(r.u_i == doctest::Approx(3.0));
    CHECK(r.converged);
    r = joint_chain_payoff(canonical("tit_for_tat"), canonical("all_d"), pd);
    CHECK(r.u_i == doctest::Approx(2.0));
    CHECK(r.u_j == doctest::Approx(2.0));
    r = marginal_fixed_point(canonical("tit_for_tat"), canonical("all_d"), pd);
    CHECK(r.u_i == doctest::Approx(2.0));
  }

  TEST_CASE("Monte Carlo time average includes the opening round") {
    Rng rng(1);
    PairwiseResult r = monte_carlo_payoff(canonical("grim"), canonical("all_d"), prisoners_dilemma(), 10, 20, rng);
    CHECK(r.time_avg_u_i == doctest::Approx(1.9));
    CHECK(r.time_avg_u_j == doctest::Approx(2.2));
    CHECK(r.u_i == doctest::Approx(2.0));
    CHECK(r.se_time_avg_i == doctest::Approx(0.0));
    r = monte_carlo_payoff(canonical("all_c"), canonical("all_c"), prisoners_dilemma(), 10, 5, rng);
    CHECK(r.time_avg_u_i == 3.0);
    CHECK(fitness_payoff_i(r) == 3.0);
  }

  TEST_CASE("backends agree on deterministic canonical pairs") {
    const GameSpec pd = prisoners_dilemma();
    for (auto a : kCanonicalNames) {
      for (auto b : kCanonicalNames) {
        const Genotype ga = canonical(a), gb = canonical(b);
        const auto m = marginal_fixed_point(ga, gb, pd, 1e-12, 1000);
        const auto j = joint_chain_payoff(ga, gb, pd, 1e-12, 1000);
        CAPTURE(a);
        CAPTURE(b);
        CHECK(std::abs(m.u_i - j.u_i) <= 1e-9);
        CHECK(std::abs(m.u_j - j.u_j) <= 1e-9);
        Rng rng(Rng::derive_seed(7, a, {b.size()}));
        const auto mc = monte_carlo_payoff(ga, gb, pd, 100, 10, rng);
        CHECK(std::abs(mc.u_i - j.u_i) <= 1e-9);
      }
    }
  }

  TEST_CASE("Monte Carlo agrees with the joint chain within sampling error") {
    const GameSpec pd = prisoners_dilemma();
    const Genotype a = testing::soft_trigger(), b = testing::exploiter();
    const auto j = joint_chain_payoff(a, b, pd, 1e-12, 10000);
    Rng rng(2);
    const auto mc = monte_carlo_payoff(a, b, pd, 200, 4000, rng);
    CHECK(mc.se_u_i > 0.0);
    CHECK(std::abs(mc.u_i - j.u_i) <= 4.0 * mc.se_u_i);
    CHECK(std::abs(mc.u_j - j.u_j) <= 4.0 * mc.se_u_j);
  }

  TEST_CASE("payoffs stay inside the game's range") {
    Rng rng(3);
    const GameSpec g = chicken();
    for (int k = 0; k < 200; ++k) {
      const Genotype a = random_genotype(1 + k % 4, rng), b = random_genotype(2, rng);
      for (const auto& r : {marginal_fixed_point(a, b, g), joint_chain_payoff(a, b, g)}) {
        CHECK(r.u_i >= g.min_payoff() - 1e-12);
        CHECK(r.u_i <= g.max_payoff() + 1e-12);
        CHECK(r.a_i_horizon.is_valid());
        double total = 0.0;
        for (double x : r.outcome) total += x;
        CHECK(total == doctest::Approx(1.0));
      }
    }
  }

  TEST_CASE("population fitness sums per-round payoffs over opponents") {
    const GameSpec pd = prisoners_dilemma();
    EngineParams params;
    std::vector<Genotype> pop(3, canonical("all_c"));
    auto ev = population_fitness(pop, pd, params, 1);
    for (double f : ev.fitness) CHECK(f == 6.0);
    CHECK(ev.mean_score() == 3.0);
    CHECK(ev.interaction_ratios()[0] == doctest::Approx(1.0));

    pop = {canonical("all_c"), canonical("all_c"), canonical("all_d")};
    ev = population_fitness(pop, pd, params, 1);
    CHECK(ev.fitness == std::vector<double>{4.0, 4.0, 8.0});
    const auto m = ev.payoff_matrix();
    CHECK(m[2][0] == 4.0);
    CHECK(m[0][2] == 1.0);
    CHECK(m[1][1] == 0.0);
    CHECK(ev.result(2, 1).u_i == 4.0);
    const auto ratios = ev.interaction_ratios();
    CHECK(ratios[0] == doctest::Approx(1.0 / 3.0));
    CHECK(ratios[1] == doctest::Approx(2.0 / 3.0));
    CHECK(ratios[2] == doctest::Approx(0.0));
  }

  TEST_CASE("permuting the population permutes the fitness") {
    Rng rng(4);
    std::vector<Genotype> pop;
    for (int k = 0; k < 6; ++k) pop.push_back(random_genotype(2, rng));
    EngineParams params;
    const auto ev = population_fitness(pop, battle(), params, 9);
    const std::vector<std::size_t> perm{3, 0, 5, 1, 4, 2};
    std::vector<Genotype> shuffled;
    for (auto k : perm) shuffled.push_back(pop[k]);
    const auto ev2 = population_fitness(shuffled, battle(), params, 9);
    for (std::size_t k = 0; k < perm.size(); ++k) CHECK(ev2.fitness[k] == doctest::Approx(ev.fitness[perm[k]]).epsilon(1e-12));
  }

  TEST_CASE("results do not depend on the worker count") {
    Rng rng(5);
    std::vector<Genotype> pop;
    for (int k = 0; k < 8; ++k) pop.push_back(random_genotype(3, rng));
    for (Backend b : {Backend::marginal_fixed_point, Backend::monte_carlo}) {
      EngineParams one;
      one.backend = b;
      one.rounds = 20;
      one.reps = 10;
      EngineParams four = one;
      four.workers = 4;
      const auto e1 = population_fitness(pop, stag_hunt(), one, 77);
      const auto e4 = population_fitness(pop, stag_hunt(), four, 77);
      CHECK(e1.fitness == e4.fitness);
    }
  }

  TEST_CASE("parallel_for forwards worker exceptions") {
    CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t k) { if (k == 7) throw std::runtime_error("boom"); }),
                    std::runtime_error);
  }

  TEST_CASE("engine parameter checks") {
    EngineParams p;
    p.tol = 0.0;
    CHECK_THROWS(p.validate());
    p = {};
    p.max_iter = 0;
    CHECK_THROWS(p.validate());
    CHECK(backend_from_string("joint_chain") == Backend::joint_chain);
    CHECK_THROWS(backend_from_string("exact"));
  }
}
