#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"
#include "smmevo/metrics.hpp"
#include "smmevo/mutation.hpp"

using namespace smmevo;

namespace {

bool mentions(const std::vector<Violation>& v, const std::string& location, const std::string& word) {
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) {
    return x.location == location && x.constraint.find(word) != std::string::npos;
  });
}

// First entry of Theta over many random genotypes, fitted against the simplex marginal.
GofResult theta_fit(std::size_t n_states, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t bins = 20, draws = 100000;
  std::vector<double> counts(bins, 0.0);
  for (std::size_t k = 0; k < draws; ++k) {
    const double x = random_genotype(n_states, rng).initial[0];
    counts[std::min(bins - 1, static_cast<std::size_t>(x * bins))] += 1.0;
  }
  std::vector<double> mc, mp;
  merge_low_expected(counts, marginal_bin_probabilities(static_cast<int>(n_states), bins), draws, mc, mp);
  return chi_square_gof(mc, mp);
}

}  // namespace

TEST_SUITE("automaton") {
  TEST_CASE("a probabilistic trigger genotype validates") { CHECK(validate(testing::soft_trigger()).empty()); }

  TEST_CASE("negative entries and bad sums are reported with their row") {
    Genotype g = testing::soft_trigger();
    g.row(0, Action::D) = {-0.1, 1.1};
    auto v = validate(g);
    REQUIRE(!v.empty());
    CHECK(mentions(v, "T[0][D]", "negative"));

    g = testing::soft_trigger();
    g.row(1, Action::C) = {0.5, 0.4};
    v = validate(g);
    REQUIRE(v.size() == 1);
    CHECK(v[0].location == "T[1][C]");
    CHECK(v[0].constraint.find("sum") != std::string::npos);

    g = testing::soft_trigger();
    g.initial = {0.5, 0.6};
    CHECK(mentions(validate(g), "initial", "sum"));
  }

  TEST_CASE("structural mismatches are violations") {
    Genotype g = testing::soft_trigger();
    g.transitions.pop_back();
    CHECK(!validate(g).empty());
    g = testing::soft_trigger();
    g.initial = {1.0};
    CHECK(mentions(validate(g), "initial", "dimension"));
  }

  TEST_CASE("action_distribution sums mass per output") {
    const Genotype g = testing::soft_trigger();
    auto a = action_distribution(g, {1.0, 0.0});
    CHECK(a[0] == 1.0);
    CHECK(a[1] == 0.0);
    a = action_distribution(g, {0.87, 0.13});
    CHECK(a[0] == doctest::Approx(0.87).epsilon(1e-15));

    const Genotype three = canonical("two_tits_for_tat");
    a = action_distribution(three, {0.5, 0.3, 0.2});
    CHECK(a[0] == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(a.is_valid());
    CHECK_THROWS_AS(action_distribution(three, {0.5, 0.5}), std::invalid_argument);
  }

  TEST_CASE("step follows the transition row") {
    const Genotype g = testing::soft_trigger();
    Rng rng(11);
    const int n = 10000;
    int to_d = 0;
    for (int k = 0; k < n; ++k) to_d += step(g, 0, Action::D, rng) == 1;
    CHECK(std::abs(to_d / double(n) - 0.93) < testing::binomial_band(0.93, n));

    for (int k = 0; k < 100; ++k) CHECK(step(g, 0, Action::C, rng) == 0);

    Genotype half = g;
    half.row(0, Action::C) = {0.5, 0.5};
    int zeros = 0;
    for (int k = 0; k < n; ++k) zeros += step(half, 0, Action::C, rng) == 0;
    CHECK(std::abs(zeros / double(n) - 0.5) < testing::binomial_band(0.5, n));
  }

  TEST_CASE("step passes a goodness-of-fit test against a 4-state row") {
    Rng rng(12);
    Genotype g = random_genotype(4, rng);
    const ProbVector row = g.row(2, Action::D);
    std::vector<double> counts(4, 0.0);
    for (int k = 0; k < 100000; ++k) counts[step(g, 2, Action::D, rng)] += 1.0;
    CHECK(chi_square_gof(counts, row.entries()).p_value > 0.01);
  }

  TEST_CASE("zero-probability destinations are never sampled") {
    Rng rng(13);
    const std::vector<double> probs{0.0, 0.3, 0.7, 0.0};
    for (int k = 0; k < 20000; ++k) {
      const auto s = sample_index(probs, rng);
      REQUIRE((s == 1 || s == 2));
    }
  }

  TEST_CASE("canonical strategies") {
    for (auto name : kCanonicalNames) {
      const Genotype g = canonical(name);
      CHECK(validate(g).empty());
      for (const auto& r : g.transitions)
        for (double x : r) CHECK((x == 0.0 || x == 1.0));
      for (double x : g.initial) CHECK((x == 0.0 || x == 1.0));
    }
    const Genotype ttft = canonical("two_tits_for_tat");
    CHECK(ttft.n_states() == 3);
    CHECK(ttft.initial == ProbVector{1.0, 0.0, 0.0});
    CHECK(ttft.outputs == std::vector<Action>{Action::C, Action::C, Action::D});
    // Two defections in a row lead to the defecting state; cooperation resets.
    Rng rng(0);
    std::size_t s = 0;
    s = step(ttft, s, Action::D, rng);
    CHECK(ttft.outputs[s] == Action::C);
    s = step(ttft, s, Action::D, rng);
    CHECK(ttft.outputs[s] == Action::D);
    s = step(ttft, s, Action::C, rng);
    CHECK(s == 0);

    const Genotype all_d = canonical("all_d");
    CHECK(all_d.n_states() == 1);
    CHECK(all_d.outputs[0] == Action::D);
    CHECK(all_d.row(0, Action::C) == ProbVector{1.0});
    CHECK(all_d.row(0, Action::D) == ProbVector{1.0});
    CHECK_THROWS_AS(canonical("pavlov"), std::invalid_argument);
  }

  TEST_CASE("grim cooperates once against all_d, then defects") {
    const Genotype grim = canonical("grim");
    const Genotype all_d = canonical("all_d");
    Rng rng(5);
    std::size_t s = sample_initial_state(grim, rng);
    std::size_t t = sample_initial_state(all_d, rng);
    std::vector<Action> played;
    for (int round = 0; round < 5; ++round) {
      const Action mine = grim.outputs[s], theirs = all_d.outputs[t];
      played.push_back(mine);
      s = step(grim, s, theirs, rng);
      t = step(all_d, t, mine, rng);
    }
    CHECK(played == std::vector<Action>{Action::C, Action::D, Action::D, Action::D, Action::D});
  }

  TEST_CASE("random genotypes") {
    Rng rng(21);
    const Genotype one = random_genotype(1, rng);
    CHECK(one.initial == ProbVector{1.0});
    for (const auto& r : one.transitions) CHECK(r == ProbVector{1.0});

    const Genotype four = random_genotype(4, rng);
    CHECK(validate(four).empty());
    CHECK(four.outputs == std::vector<Action>{Action::C, Action::D, Action::C, Action::D});
    CHECK_THROWS(random_genotype(0, rng));
  }

  TEST_CASE("random Theta entries follow the simplex marginal") {
    CHECK(theta_fit(2, 101).p_value > 0.05);
    CHECK(theta_fit(8, 102).p_value > 0.05);
  }

  TEST_CASE("serialization round-trips exactly") {
    Rng rng(31);
    for (int k = 0; k < 50; ++k) {
      const Genotype g = random_genotype(1 + k % 5, rng);
      const auto text = genotype_to_json(g).dump();
      CHECK(genotype_from_json(nlohmann::json::parse(text)) == g);
    }
    const auto doc = genotype_to_json(testing::soft_trigger());
    CHECK(doc["outputs"] == "CD");
    CHECK(doc["transitions"][0][1][1] == 0.93);
  }

  TEST_CASE("deserialization renormalizes drift and names real errors") {
    auto doc = genotype_to_json(testing::soft_trigger());
    doc["transitions"][0][1] = {0.07, 0.9300004};
    const Genotype g = genotype_from_json(doc);
    CHECK(std::abs(g.row(0, Action::D).sum() - 1.0) <= 1e-12);

    doc["transitions"][0][1] = {0.5, 0.4};
    try {
      genotype_from_json(doc);
      FAIL("expected a parse error");
    } catch (const GenotypeParseError& e) {
      CHECK(std::string(e.what()).find("T[0][D]") != std::string::npos);
    }
    doc = genotype_to_json(testing::soft_trigger());
    doc["outputs"] = "CX";
    CHECK_THROWS_AS(genotype_from_json(doc), GenotypeParseError);
    doc = genotype_to_json(testing::soft_trigger());
    doc.erase("initial");
    CHECK_THROWS_AS(genotype_from_json(doc), GenotypeParseError);
    doc = genotype_to_json(testing::soft_trigger());
    doc["transitions"][1][0] = {0.5, "x"};
    CHECK_THROWS_AS(genotype_from_json(doc), GenotypeParseError);
  }

  TEST_CASE("genotype files") {
    const auto dir = testing::scratch_dir("automaton_files");
    const auto path = (dir / "g.json").string();
    save_genotype(testing::exploiter(), path);
    CHECK(load_genotype(path) == testing::exploiter());
    CHECK_THROWS_AS(load_genotype((dir / "missing.json").string()), GenotypeParseError);
  }
}
