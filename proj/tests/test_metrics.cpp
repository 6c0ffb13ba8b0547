#include <doctest.h>

#include <numeric>

#include "smmevo/metrics.hpp"

using namespace smmevo;

TEST_SUITE("metrics") {
  TEST_CASE("homogeneity") {
    const std::vector<ProbVector> same{{1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}};
    CHECK(homogeneity(same) == 0.0);
    const std::vector<ProbVector> opposite{{1.0, 0.0}, {0.0, 1.0}};
    CHECK(homogeneity(opposite) == doctest::Approx(2.0));
    const std::vector<ProbVector> mixed{{1.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
    CHECK(homogeneity(mixed) == doctest::Approx(4.0 / 3.0));
    const std::vector<ProbVector> one{{1.0, 0.0}};
    CHECK_THROWS_AS(homogeneity(one), std::invalid_argument);
    const std::vector<ProbVector> ragged{{1.0, 0.0}, {1.0}};
    CHECK_THROWS_AS(homogeneity(ragged), std::invalid_argument);
  }

  TEST_CASE("chi-square goodness of fit") {
    const std::vector<double> counts{60, 40}, half{0.5, 0.5};
    const GofResult r = chi_square_gof(counts, half);
    CHECK(r.statistic == doctest::Approx(4.0));
    CHECK(r.degrees_of_freedom == 1);
    CHECK(r.p_value == doctest::Approx(0.0455).epsilon(1e-3));
    CHECK(r.complement_p == doctest::Approx(1.0 - r.p_value));

    const std::vector<double> exact{50, 50};
    CHECK(chi_square_gof(exact, half).p_value == doctest::Approx(1.0));
    CHECK(chi_square_sf(3.841, 1) == doctest::Approx(0.05).epsilon(1e-3));

    const std::vector<double> tiny{3, 5}, lopsided{0.1, 0.9};
    CHECK_THROWS_AS(chi_square_gof(tiny, lopsided), LowExpectedCountError);
  }

  TEST_CASE("simplex bin probabilities") {
    const auto p = marginal_bin_probabilities(8, 8);
    CHECK(p[0] == doctest::Approx(0.6073).epsilon(1e-3));
    CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0));
    for (double x : marginal_bin_probabilities(2, 20)) CHECK(x == doctest::Approx(0.05));
  }

  TEST_CASE("low-expected bins are merged") {
    const std::vector<double> counts{50, 30, 16, 2, 2}, probs{0.5, 0.3, 0.16, 0.02, 0.02};
    std::vector<double> mc, mp;
    merge_low_expected(counts, probs, 100.0, mc, mp);
    CHECK(mc == std::vector<double>{50, 30, 20});
    REQUIRE(mp.size() == 3);
    CHECK(mp[2] == doctest::Approx(0.2));
    for (double q : mp) CHECK(q * 100.0 >= 5.0);
  }

  TEST_CASE("a biased mechanism is flagged by the bias trace") {
    // Always puts the largest entry first.
    const VectorMutator biased = [](const ProbVector& v, Rng& rng) {
      ProbVector w = sample_simplex(v.size(), rng);
      std::vector<double> e(w.begin(), w.end());
      std::sort(e.rbegin(), e.rend());
      return ProbVector(e);
    };
    Rng rng(1);
    const auto cps = log_checkpoints(1000);
    CHECK(cps == std::vector<std::uint64_t>{10, 100, 1000});
    const auto trace = mutation_bias_trace(biased, 3, 1000, cps, rng);
    REQUIRE(trace.size() == 2);  // 10 draws over 3 bins are too few for the test
    CHECK(trace.front().iteration == 100);
    CHECK(trace.back().iteration == 1000);
    CHECK(trace.back().fit.complement_p > 0.999);
  }

  TEST_CASE("independent simplex draws fit the marginal density") {
    const VectorMutator fresh = [](const ProbVector& v, Rng& rng) { return sample_simplex(v.size(), rng); };
    Rng rng(2);
    for (std::size_t dim : {2u, 5u, 8u}) {
      const DensityFit d = density_fit(fresh, dim, 50000, 20, rng);
      CHECK(d.fit.p_value > 0.01);
      CHECK(d.edges.size() == 21);
      CHECK(std::accumulate(d.counts.begin(), d.counts.end(), 0.0) == 50000.0);
    }
  }

  TEST_CASE("trial summary") {
    const std::vector<double> scores{2.0, 2.0, 3.0, 3.0};
    TrialSummary s = trial_summary(scores, 2);
    CHECK(s.mean_score == 3.0);
    CHECK(s.min_cooperation == 1.0);
    CHECK(s.generations_used == 2);
    const std::vector<double> mid{2.75, 2.75};
    CHECK(trial_summary(mid, 0).min_cooperation == doctest::Approx(0.5));
    const std::vector<double> low{2.0};
    CHECK(trial_summary(low, 0).min_cooperation == 0.0);
    CHECK_THROWS(trial_summary(low, 1));
  }

  TEST_CASE("moving average") {
    const std::vector<double> v{1, 2, 3, 4, 5};
    CHECK(moving_average(v, 2) == std::vector<double>{1.0, 1.5, 2.5, 3.5, 4.5});
    CHECK(moving_average(v, 1) == v);
    CHECK_THROWS(moving_average(v, 0));
  }
}
