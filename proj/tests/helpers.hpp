#pragma once

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "smmevo/automaton.hpp"

namespace testing {

// Trigger that punishes a defection with probability 0.93.
inline smmevo::Genotype soft_trigger() {
  smmevo::Genotype g;
  g.outputs = {smmevo::Action::C, smmevo::Action::D};
  g.initial = {0.99, 0.01};
  g.transitions = {{1.00, 0.00}, {0.07, 0.93}, {0.00, 1.00}, {0.00, 1.00}};
  return g;
}

// Opens with cooperation but drifts into defection against cooperators.
inline smmevo::Genotype exploiter() {
  smmevo::Genotype g;
  g.outputs = {smmevo::Action::C, smmevo::Action::D};
  g.initial = {0.87, 0.13};
  g.transitions = {{0.57, 0.43}, {0.10, 0.90}, {0.00, 1.00}, {1.00, 0.00}};
  return g;
}

// k standard deviations of a binomial proportion.
inline double binomial_band(double p, double n, double k = 3.0) { return k * std::sqrt(p * (1.0 - p) / n); }

inline std::filesystem::path scratch_dir(const std::string& name) {
  std::filesystem::path p = std::filesystem::path(SMMEVO_TEST_TMP) / name;
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline std::string slurp(const std::filesystem::path& p);

}  // namespace testing

#include <fstream>
#include <sstream>

inline std::string testing::slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}
