#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace smmevo {

/// Portable random stream: mt19937_64 for raw bits, with uniform, normal and
/// bounded-index draws computed here rather than by <random> distributions,
/// whose output is implementation-defined. Streams are keyed off a master
/// seed by derive(), so results never depend on draw order across purposes.
class Rng {
 public:
  static constexpr std::string_view kFamily = "mt19937_64+splitmix64-keys/v1";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_open_low() { return 1.0 - uniform(); }

  /// Standard normal via Box-Muller (cosine branch only, no cached pair).
  double normal();

  double normal(double mean, double sd) { return mean + sd * normal(); }

  /// Uniform integer in [0, n), n > 0. Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t n);

  /// Standard exponential.
  double exponential();

  /// Child stream keyed by (tag, indices). Pure function of the inputs.
  static Rng derive(std::uint64_t master, std::string_view tag,
                    std::initializer_list<std::uint64_t> indices = {});
  static std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                                   std::initializer_list<std::uint64_t> indices = {});

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace smmevo
