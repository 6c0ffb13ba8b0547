#include "smmevo/games.hpp"

#include <algorithm>
#include <stdexcept>

namespace smmevo {

GameSpec::GameSpec(std::string name, const Matrix& cells, bool canonical_substitute)
    : name_(std::move(name)), cells_(cells), substitute_(canonical_substitute) {
  for (const Action a : kActions) {
    for (const Action b : kActions) {
      if (payoff(a, b).self != payoff(b, a).other) {
        throw std::invalid_argument("game '" + name_ + "' is not symmetric: payoff(" + to_char(a) +
                                    "," + to_char(b) + ").self != payoff(" + to_char(b) + "," +
                                    to_char(a) + ").other");
      }
    }
  }
}

double GameSpec::min_payoff() const {
  double m = cells_[0][0].self;
  for (const auto& row : cells_)
    for (const auto& c : row) m = std::min(m, c.self);
  return m;
}

double GameSpec::max_payoff() const {
  double m = cells_[0][0].self;
  for (const auto& row : cells_)
    for (const auto& c : row) m = std::max(m, c.self);
  return m;
}

namespace {

// Rows: own action C, D. Columns: opponent C, D.
GameSpec symmetric(std::string name, double cc, double cd, double dc, double dd, bool substitute) {
  return GameSpec(std::move(name),
                  {{{{{cc, cc}, {cd, dc}}}, {{{dc, cd}, {dd, dd}}}}}, substitute);
}

}  // namespace

GameSpec prisoners_dilemma() { return symmetric("prisoners_dilemma", 3, 1, 4, 2, false); }
GameSpec chicken() { return symmetric("chicken", 3, 2, 4, 1, true); }
GameSpec stag_hunt() { return symmetric("stag_hunt", 4, 1, 3, 2, true); }
GameSpec battle() { return symmetric("battle", 1, 3, 4, 1, true); }

GameSpec game_by_name(std::string_view name) {
  if (name == "prisoners_dilemma" || name == "pd") return prisoners_dilemma();
  if (name == "chicken") return chicken();
  if (name == "stag_hunt") return stag_hunt();
  if (name == "battle") return battle();
  throw std::invalid_argument("unknown game '" + std::string(name) + "'");
}

GameSpec game_from_json(const nlohmann::json& doc) {
  if (doc.is_string()) return game_by_name(doc.get<std::string>());
  if (!doc.is_object() || !doc.contains("payoff")) {
    throw std::invalid_argument("game: expected a built-in name or an object with 'payoff'");
  }
  const auto& p = doc["payoff"];
  GameSpec::Matrix cells{};
  if (!p.is_array() || p.size() != 2) throw std::invalid_argument("game.payoff: expected 2 rows");
  for (std::size_t a = 0; a < 2; ++a) {
    if (!p[a].is_array() || p[a].size() != 2) throw std::invalid_argument("game.payoff: expected 2x2 cells");
    for (std::size_t b = 0; b < 2; ++b) {
      const auto& cell = p[a][b];
      if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() || !cell[1].is_number()) {
        throw std::invalid_argument("game.payoff[" + std::to_string(a) + "][" + std::to_string(b) +
                                    "]: expected [self, other]");
      }
      cells[a][b] = {cell[0].get<double>(), cell[1].get<double>()};
    }
  }
  const std::string name = doc.value("name", std::string("custom"));
  // A built-in written out in full keeps its identity.
  try {
    GameSpec builtin = game_by_name(name);
    if (builtin.cells() == cells) return builtin;
  } catch (const std::invalid_argument&) {
  }
  return GameSpec(name, cells, false);
}

nlohmann::json game_to_json(const GameSpec& g) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : g.cells()) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& c : row) r.push_back({c.self, c.other});
    rows.push_back(r);
  }
  return {{"name", g.name()}, {"payoff", rows}, {"canonical_substitute", g.canonical_substitute()}};
}

std::pair<double, double> expected_stage_payoff(const ProbVector& a_i, const ProbVector& a_j,
                                                const GameSpec& game) {
  if (a_i.size() != kNumActions || a_j.size() != kNumActions) {
    throw std::invalid_argument("expected_stage_payoff: action distributions must have 2 entries");
  }
  double u_i = 0.0;
  double u_j = 0.0;
  for (const Action x : kActions) {
    for (const Action y : kActions) {
      const double w = a_i[index_of(x)] * a_j[index_of(y)];
      const PayoffPair c = game.payoff(x, y);
      u_i += w * c.self;
      u_j += w * c.other;
    }
  }
  return {u_i, u_j};
}

}  // namespace smmevo
