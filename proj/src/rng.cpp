#include "smmevo/rng.hpp"

#include <cmath>
#include <numbers>

namespace smmevo {

namespace {
__extension__ typedef unsigned __int128 u128;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double Rng::normal() {
  const double u1 = uniform_open_low();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double Rng::exponential() { return -std::log(uniform_open_low()); }

std::uint64_t Rng::below(std::uint64_t n) {
  // 128-bit product; reject the biased low region.
  u128 m = static_cast<u128>(engine_()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      m = static_cast<u128>(engine_()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

std::uint64_t Rng::derive_seed(std::uint64_t master, std::string_view tag,
                               std::initializer_list<std::uint64_t> indices) {
  // FNV-1a over the tag, then splitmix64 chaining over master and indices.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  std::uint64_t state = splitmix64(master ^ splitmix64(h));
  for (const std::uint64_t i : indices) state = splitmix64(state ^ splitmix64(i + 1));
  return state;
}

Rng Rng::derive(std::uint64_t master, std::string_view tag,
                std::initializer_list<std::uint64_t> indices) {
  return Rng(derive_seed(master, tag, indices));
}

}  // namespace smmevo
