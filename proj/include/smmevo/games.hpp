#pragma once

#include <array>
#include <string>
#include <string_view>
#include <utility>

#include <json.hpp>

#include "smmevo/automaton.hpp"

namespace smmevo {

struct PayoffPair {
  double self = 0.0;
  double other = 0.0;
  bool operator==(const PayoffPair&) const = default;
};

/// Symmetric 2x2 stage game; cells indexed [own action][opponent action].
class GameSpec {
 public:
  using Matrix = std::array<std::array<PayoffPair, 2>, 2>;

  /// Throws std::invalid_argument if the matrix is not symmetric.
  GameSpec(std::string name, const Matrix& cells, bool canonical_substitute = false);

  const std::string& name() const { return name_; }
  PayoffPair payoff(Action self, Action other) const {
    return cells_[index_of(self)][index_of(other)];
  }
  const Matrix& cells() const { return cells_; }
  double min_payoff() const;
  double max_payoff() const;
  /// True for built-in matrices chosen on the 1-4 scale because no
  /// published values exist for them.
  bool canonical_substitute() const { return substitute_; }

 private:
  std::string name_;
  Matrix cells_;
  bool substitute_;
};

GameSpec prisoners_dilemma();
GameSpec chicken();
GameSpec stag_hunt();
GameSpec battle();

/// Built-in lookup: prisoners_dilemma (alias pd), chicken, stag_hunt, battle.
GameSpec game_by_name(std::string_view name);

/// Custom game from {"name": ..., "payoff": [[[cc_self, cc_other], [cd_self, cd_other]],
/// [[dc_self, dc_other], [dd_self, dd_other]]]}. Symmetry is checked.
GameSpec game_from_json(const nlohmann::json& doc);
nlohmann::json game_to_json(const GameSpec& g);

/// Expected payoff of both players when each picks an action independently
/// from the given distributions over {C, D}.
std::pair<double, double> expected_stage_payoff(const ProbVector& a_i, const ProbVector& a_j,
                                                const GameSpec& game);

}  // namespace smmevo
