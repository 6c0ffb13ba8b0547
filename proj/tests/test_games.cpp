#include <doctest.h>

#include "smmevo/games.hpp"

using namespace smmevo;

namespace {

constexpr Action C = Action::C;
constexpr Action D = Action::D;

double self(const GameSpec& g, Action a, Action b) { return g.payoff(a, b).self; }

}  // namespace

TEST_SUITE("games") {
  TEST_CASE("prisoner's dilemma cells") {
    const GameSpec pd = prisoners_dilemma();
    CHECK(pd.payoff(C, C) == PayoffPair{3, 3});
    CHECK(pd.payoff(C, D) == PayoffPair{1, 4});
    CHECK(pd.payoff(D, C) == PayoffPair{4, 1});
    CHECK(pd.payoff(D, D) == PayoffPair{2, 2});
    CHECK(!pd.canonical_substitute());
    // T > R > P > S and 2R > T + S.
    CHECK(self(pd, D, C) > self(pd, C, C));
    CHECK(self(pd, C, C) > self(pd, D, D));
    CHECK(self(pd, D, D) > self(pd, C, D));
    CHECK(2 * self(pd, C, C) > self(pd, D, C) + self(pd, C, D));
    CHECK(pd.min_payoff() == 1.0);
    CHECK(pd.max_payoff() == 4.0);
  }

  TEST_CASE("every built-in game is symmetric") {
    for (auto name : {"prisoners_dilemma", "chicken", "stag_hunt", "battle"}) {
      const GameSpec g = game_by_name(name);
      for (Action a : kActions)
        for (Action b : kActions) CHECK(g.payoff(a, b).self == g.payoff(b, a).other);
    }
    CHECK(game_by_name("pd").name() == "prisoners_dilemma");
    CHECK_THROWS_AS(game_by_name("matching_pennies"), std::invalid_argument);
  }

  TEST_CASE("chicken, stag hunt and battle orderings") {
    const GameSpec ch = chicken();
    CHECK(self(ch, D, C) > self(ch, C, C));
    CHECK(self(ch, C, D) > self(ch, D, D));  // swerving beats crashing
    CHECK(ch.canonical_substitute());

    const GameSpec sh = stag_hunt();
    CHECK(self(sh, C, C) > self(sh, D, C));  // payoff-dominant stag
    CHECK(self(sh, D, D) > self(sh, C, D));  // hare is safe
    CHECK(sh.canonical_substitute());

    const GameSpec bt = battle();
    CHECK(bt.payoff(C, D) == PayoffPair{3, 4});
    CHECK(bt.payoff(D, C) == PayoffPair{4, 3});
    CHECK(self(bt, C, C) < self(bt, C, D));
    CHECK(self(bt, D, D) < self(bt, D, C));
  }

  TEST_CASE("expected stage payoff") {
    const GameSpec pd = prisoners_dilemma();
    auto [u, v] = expected_stage_payoff({1.0, 0.0}, {1.0, 0.0}, pd);
    CHECK(u == 3.0);
    CHECK(v == 3.0);
    std::tie(u, v) = expected_stage_payoff({0.0, 1.0}, {1.0, 0.0}, pd);
    CHECK(u == 4.0);
    CHECK(v == 1.0);
    std::tie(u, v) = expected_stage_payoff({0.5, 0.5}, {0.5, 0.5}, pd);
    CHECK(u == doctest::Approx(2.5));
    CHECK(v == doctest::Approx(2.5));
  }

  TEST_CASE("expected stage payoff is bilinear") {
    const GameSpec g = chicken();
    const ProbVector x{0.3, 0.7}, y{0.8, 0.2};
    const double lam = 0.35;
    const ProbVector mix{lam * x[0] + (1 - lam) * y[0], lam * x[1] + (1 - lam) * y[1]};
    const ProbVector z{0.6, 0.4};
    const double lhs = expected_stage_payoff(mix, z, g).first;
    const double rhs = lam * expected_stage_payoff(x, z, g).first + (1 - lam) * expected_stage_payoff(y, z, g).first;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }

  TEST_CASE("asymmetric matrices are rejected") {
    GameSpec::Matrix m{};
    m[0][0] = {3, 3};
    m[0][1] = {1, 4};
    m[1][0] = {4, 2};
    m[1][1] = {2, 2};
    CHECK_THROWS_AS(GameSpec("lopsided", m), std::invalid_argument);
  }

  TEST_CASE("JSON round trip") {
    for (const GameSpec& g : {prisoners_dilemma(), battle()}) {
      const GameSpec back = game_from_json(game_to_json(g));
      CHECK(back.name() == g.name());
      CHECK(back.cells() == g.cells());
      CHECK(back.canonical_substitute() == g.canonical_substitute());
    }
    const auto custom = nlohmann::json::parse(
        R"({"name": "custom", "payoff": [[[5, 5], [0, 6]], [[6, 0], [1, 1]]]})");
    const GameSpec g = game_from_json(custom);
    CHECK(g.payoff(D, C) == PayoffPair{6, 0});
    CHECK(game_from_json(nlohmann::json("stag_hunt")).name() == "stag_hunt");
  }

  TEST_CASE("battle mixed equilibrium misses the Pareto outcome about half the time") {
    const GameSpec g = battle();
    // Indifference: p*CC + (1-p)*CD = p*DC + (1-p)*DD for the opponent's p = P(C).
    const double cc = self(g, C, C), cd = self(g, C, D), dc = self(g, D, C), dd = self(g, D, D);
    const double p = (dd - cd) / (cc - cd - dc + dd);
    CHECK(p == doctest::Approx(0.4));
    // Both players landing on the same action forfeits the Pareto outcome.
    const double miscoordination = p * p + (1 - p) * (1 - p);
    CHECK(miscoordination == doctest::Approx(0.52));
    const ProbVector mix{p, 1 - p};
    const double u_c = expected_stage_payoff({1.0, 0.0}, mix, g).first;
    const double u_d = expected_stage_payoff({0.0, 1.0}, mix, g).first;
    CHECK(u_c == doctest::Approx(u_d));
  }
}
