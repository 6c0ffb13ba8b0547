#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "smmevo/rng.hpp"

using namespace smmevo;

TEST_SUITE("rng") {
  TEST_CASE("raw bits follow the standard mt19937_64 sequence") {
    // The C++ standard fixes the 10000th output of a default-seeded engine.
    Rng rng(5489u);
    std::uint64_t x = 0;
    for (int k = 0; k < 10000; ++k) x = rng.bits();
    CHECK(x == 9981545732273789042ULL);
  }

  TEST_CASE("same seed gives the same stream") {
    Rng a(42), b(42);
    for (int k = 0; k < 100; ++k) {
      CHECK(a.uniform() == b.uniform());
      CHECK(a.normal() == b.normal());
      CHECK(a.below(17) == b.below(17));
    }
  }

  TEST_CASE("derived seeds depend on master, tag and every index") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t m : {0ULL, 1ULL}) {
      for (const char* tag : {"init", "generation", "pair"}) {
        for (std::uint64_t i = 0; i < 4; ++i) {
          for (std::uint64_t j = 0; j < 4; ++j) seen.insert(Rng::derive_seed(m, tag, {i, j}));
        }
      }
    }
    CHECK(seen.size() == 2 * 3 * 16);
    CHECK(Rng::derive_seed(7, "trial", {3}) == Rng::derive_seed(7, "trial", {3}));
    CHECK(Rng::derive_seed(7, "trial", {0}) != Rng::derive_seed(7, "trial"));
  }

  TEST_CASE("uniform stays in [0, 1) and below stays in range") {
    Rng rng(1);
    for (int k = 0; k < 100000; ++k) {
      const double u = rng.uniform();
      REQUIRE(u >= 0.0);
      REQUIRE(u < 1.0);
      const double v = rng.uniform_open_low();
      REQUIRE(v > 0.0);
      REQUIRE(v <= 1.0);
      REQUIRE(rng.below(3) < 3);
    }
  }

  TEST_CASE("below is uniform over a small range") {
    Rng rng(2);
    const int n = 7, draws = 70000;
    std::vector<int> counts(n, 0);
    for (int k = 0; k < draws; ++k) ++counts[rng.below(n)];
    double chi2 = 0.0;
    const double e = static_cast<double>(draws) / n;
    for (int c : counts) chi2 += (c - e) * (c - e) / e;
    CHECK(chi2 < 22.46);  // chi-square dof 6, upper 0.001 point
  }

  TEST_CASE("normal has zero mean and unit variance") {
    Rng rng(3);
    const int n = 200000;
    double s = 0.0, s2 = 0.0;
    for (int k = 0; k < n; ++k) {
      const double z = rng.normal();
      s += z;
      s2 += z * z;
    }
    const double mean = s / n;
    const double var = s2 / n - mean * mean;
    CHECK(std::abs(mean) < 4.0 / std::sqrt(n));
    CHECK(std::abs(var - 1.0) < 4.0 * std::sqrt(2.0 / n));
  }

  TEST_CASE("exponential has unit mean") {
    Rng rng(4);
    const int n = 200000;
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += rng.exponential();
    CHECK(std::abs(s / n - 1.0) < 4.0 / std::sqrt(n));
  }
}
