#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "smmevo/rng.hpp"

namespace smmevo {

/// Observations and actions share the alphabet {C, D}; C orders before D.
enum class Action : std::uint8_t { C = 0, D = 1 };

inline constexpr std::array<Action, 2> kActions{Action::C, Action::D};
inline constexpr std::size_t kNumActions = kActions.size();

constexpr std::size_t index_of(Action a) { return static_cast<std::size_t>(a); }
constexpr Action opposite(Action a) { return a == Action::C ? Action::D : Action::C; }
char to_char(Action a);
Action action_from_char(char c);

/// Tolerance for the sum-to-one constraint.
inline constexpr double kSumTolerance = 1e-9;

/// Nonnegative entries summing to one. Construction does not validate; call
/// violations() or is_valid() where inputs are untrusted.
class ProbVector {
 public:
  ProbVector() = default;
  ProbVector(std::initializer_list<double> entries) : p_(entries) {}
  explicit ProbVector(std::vector<double> entries) : p_(std::move(entries)) {}

  static ProbVector point_mass(std::size_t dim, std::size_t at);
  static ProbVector uniform(std::size_t dim);

  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  double& operator[](std::size_t i) { return p_[i]; }
  std::span<const double> entries() const { return p_; }
  std::span<double> entries() { return p_; }
  auto begin() const { return p_.begin(); }
  auto end() const { return p_.end(); }

  double sum() const;
  /// Human-readable constraint failures; empty when valid.
  std::vector<std::string> violations() const;
  bool is_valid() const { return violations().empty(); }
  /// Sum of |a_k - b_k|; sizes must match.
  double l1_distance(const ProbVector& other) const;

  bool operator==(const ProbVector&) const = default;

 private:
  std::vector<double> p_;
};

/// Uniform draw from the probability simplex (normalized exponentials).
ProbVector sample_simplex(std::size_t dim, Rng& rng);

/// A constraint violation found by validate(): where, and what failed.
struct Violation {
  std::string location;    // e.g. "T[1][D]" or "initial"
  std::string constraint;  // e.g. "entry 0 is negative (-0.1)"
};

/// Evolvable stochastic Moore machine <T, Theta, G>.
///
/// transitions holds n_states * 2 rows, row (s, observed) at index
/// 2 * s + index_of(observed); each row is a distribution over destinations.
struct Genotype {
  std::vector<ProbVector> transitions;
  ProbVector initial;
  std::vector<Action> outputs;

  std::size_t n_states() const { return outputs.size(); }
  const ProbVector& row(std::size_t state, Action observed) const {
    return transitions[2 * state + index_of(observed)];
  }
  ProbVector& row(std::size_t state, Action observed) {
    return transitions[2 * state + index_of(observed)];
  }

  bool operator==(const Genotype&) const = default;
};

/// Checks every structural and probabilistic constraint. Empty result means ok.
std::vector<Violation> validate(const Genotype& g);

/// Pushes a state distribution through G: mass per action.
ProbVector action_distribution(const Genotype& g, const ProbVector& dist);

/// Samples the next state after observing the opponent's action.
std::size_t step(const Genotype& g, std::size_t state, Action observed, Rng& rng);

/// Samples s_0 from Theta.
std::size_t sample_initial_state(const Genotype& g, Rng& rng);

/// Index drawn from a distribution by inverse CDF; clamps to the last
/// positive entry so rounding in the cumulative sum never selects a zero row.
std::size_t sample_index(std::span<const double> probs, Rng& rng);

/// Names accepted by canonical().
inline constexpr std::array<std::string_view, 5> kCanonicalNames{
    "all_c", "all_d", "tit_for_tat", "grim", "two_tits_for_tat"};

/// Deterministic reference strategies. Throws std::invalid_argument on an
/// unknown name.
Genotype canonical(std::string_view name);

/// Uniform-simplex rows and Theta; outputs alternate C, D, C, ... by state.
Genotype random_genotype(std::size_t n_states, Rng& rng);

/// Raised when a genotype document cannot be parsed or fails validation.
class GenotypeParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// JSON tree: {"n_states", "outputs" ("CD..."), "initial" [..],
/// "transitions" [state][input][destination]}.
nlohmann::json genotype_to_json(const Genotype& g);
/// Rows within 1e-6 of summing to one are renormalized; anything else that
/// fails validation raises GenotypeParseError naming the location.
Genotype genotype_from_json(const nlohmann::json& doc);

Genotype load_genotype(const std::string& path);
void save_genotype(const Genotype& g, const std::string& path);

}  // namespace smmevo
