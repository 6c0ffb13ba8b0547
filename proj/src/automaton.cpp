#include "smmevo/automaton.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace smmevo {

char to_char(Action a) { return a == Action::C ? 'C' : 'D'; }

Action action_from_char(char c) {
  switch (c) {
    case 'C':
    case 'c':
      return Action::C;
    case 'D':
    case 'd':
      return Action::D;
    default:
      throw std::invalid_argument(std::string("unknown action symbol '") + c + "'");
  }
}

ProbVector ProbVector::point_mass(std::size_t dim, std::size_t at) {
  std::vector<double> p(dim, 0.0);
  p.at(at) = 1.0;
  return ProbVector(std::move(p));
}

ProbVector ProbVector::uniform(std::size_t dim) {
  return ProbVector(std::vector<double>(dim, 1.0 / static_cast<double>(dim)));
}

double ProbVector::sum() const {
  double s = 0.0;
  for (const double x : p_) s += x;
  return s;
}

std::vector<std::string> ProbVector::violations() const {
  std::vector<std::string> out;
  if (p_.empty()) {
    out.emplace_back("empty probability vector");
    return out;
  }
  for (std::size_t k = 0; k < p_.size(); ++k) {
    if (!std::isfinite(p_[k])) {
      out.push_back("entry " + std::to_string(k) + " is not finite");
    } else if (p_[k] < 0.0) {
      std::ostringstream msg;
      msg << "entry " << k << " is negative (" << p_[k] << ")";
      out.push_back(msg.str());
    }
  }
  const double s = sum();
  if (!(std::abs(s - 1.0) <= kSumTolerance)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "entries sum to " << s << ", not 1";
    out.push_back(msg.str());
  }
  return out;
}

double ProbVector::l1_distance(const ProbVector& other) const {
  if (other.size() != size()) throw std::invalid_argument("l1_distance: dimension mismatch");
  double d = 0.0;
  for (std::size_t k = 0; k < size(); ++k) d += std::abs(p_[k] - other.p_[k]);
  return d;
}

ProbVector sample_simplex(std::size_t dim, Rng& rng) {
  if (dim == 0) throw std::invalid_argument("sample_simplex: dimension must be >= 1");
  std::vector<double> e(dim);
  double total = 0.0;
  for (auto& x : e) {
    x = rng.exponential();
    total += x;
  }
  for (auto& x : e) x /= total;
  return ProbVector(std::move(e));
}

namespace {

std::string row_label(std::size_t state, Action observed) {
  return "T[" + std::to_string(state) + "][" + to_char(observed) + "]";
}

}  // namespace

std::vector<Violation> validate(const Genotype& g) {
  std::vector<Violation> out;
  const std::size_t n = g.n_states();
  if (n == 0) {
    out.push_back({"outputs", "machine has no states"});
    return out;
  }
  if (g.transitions.size() != 2 * n) {
    out.push_back({"transitions", "expected " + std::to_string(2 * n) + " rows, found " +
                                      std::to_string(g.transitions.size())});
  } else {
    for (std::size_t s = 0; s < n; ++s) {
      for (const Action phi : kActions) {
        const ProbVector& r = g.row(s, phi);
        if (r.size() != n) {
          out.push_back({row_label(s, phi), "dimension " + std::to_string(r.size()) +
                                                " != n_states " + std::to_string(n)});
          continue;
        }
        for (auto& v : r.violations()) out.push_back({row_label(s, phi), std::move(v)});
      }
    }
  }
  if (g.initial.size() != n) {
    out.push_back({"initial", "dimension " + std::to_string(g.initial.size()) +
                                  " != n_states " + std::to_string(n)});
  } else {
    for (auto& v : g.initial.violations()) out.push_back({"initial", std::move(v)});
  }
  return out;
}

ProbVector action_distribution(const Genotype& g, const ProbVector& dist) {
  if (dist.size() != g.n_states()) {
    throw std::invalid_argument("action_distribution: distribution has dimension " +
                                std::to_string(dist.size()) + ", machine has " +
                                std::to_string(g.n_states()) + " states");
  }
  std::vector<double> a(kNumActions, 0.0);
  for (std::size_t s = 0; s < dist.size(); ++s) a[index_of(g.outputs[s])] += dist[s];
  return ProbVector(std::move(a));
}

std::size_t sample_index(std::span<const double> probs, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] <= 0.0) continue;
    last_positive = k;
    acc += probs[k];
    if (u < acc) return k;
  }
  return last_positive;
}

std::size_t step(const Genotype& g, std::size_t state, Action observed, Rng& rng) {
  return sample_index(g.row(state, observed).entries(), rng);
}

std::size_t sample_initial_state(const Genotype& g, Rng& rng) {
  return sample_index(g.initial.entries(), rng);
}

namespace {

// Deterministic machine from a successor table: next[s] = {on C, on D}.
Genotype deterministic(std::vector<Action> outputs,
                       const std::vector<std::array<std::size_t, 2>>& next) {
  const std::size_t n = outputs.size();
  Genotype g;
  g.outputs = std::move(outputs);
  g.initial = ProbVector::point_mass(n, 0);
  g.transitions.reserve(2 * n);
  for (std::size_t s = 0; s < n; ++s) {
    for (const Action phi : kActions) {
      g.transitions.push_back(ProbVector::point_mass(n, next[s][index_of(phi)]));
    }
  }
  return g;
}

}  // namespace

Genotype canonical(std::string_view name) {
  using enum Action;
  if (name == "all_c") return deterministic({C}, {{0, 0}});
  if (name == "all_d") return deterministic({D}, {{0, 0}});
  if (name == "tit_for_tat") return deterministic({C, D}, {{0, 1}, {0, 1}});
  if (name == "grim") return deterministic({C, D}, {{0, 1}, {1, 1}});
  // Start state and a second cooperative state; defects only after two
  // consecutive defections, any cooperation returns to the start.
  if (name == "two_tits_for_tat") return deterministic({C, C, D}, {{0, 1}, {0, 2}, {0, 2}});
  throw std::invalid_argument("unknown canonical strategy '" + std::string(name) + "'");
}

Genotype random_genotype(std::size_t n_states, Rng& rng) {
  if (n_states == 0) throw std::invalid_argument("random_genotype: n_states must be >= 1");
  Genotype g;
  g.outputs.reserve(n_states);
  for (std::size_t s = 0; s < n_states; ++s) g.outputs.push_back(s % 2 == 0 ? Action::C : Action::D);
  g.transitions.reserve(2 * n_states);
  for (std::size_t k = 0; k < 2 * n_states; ++k) g.transitions.push_back(sample_simplex(n_states, rng));
  g.initial = sample_simplex(n_states, rng);
  return g;
}

nlohmann::json genotype_to_json(const Genotype& g) {
  std::string outputs;
  for (const Action a : g.outputs) outputs.push_back(to_char(a));
  nlohmann::json t = nlohmann::json::array();
  for (std::size_t s = 0; s < g.n_states(); ++s) {
    nlohmann::json per_state = nlohmann::json::array();
    for (const Action phi : kActions) {
      const ProbVector& r = g.row(s, phi);
      per_state.push_back(std::vector<double>(r.begin(), r.end()));
    }
    t.push_back(std::move(per_state));
  }
  return {{"n_states", g.n_states()},
          {"outputs", outputs},
          {"initial", std::vector<double>(g.initial.begin(), g.initial.end())},
          {"transitions", std::move(t)}};
}

namespace {

ProbVector parse_vector(const nlohmann::json& node, const std::string& where) {
  if (!node.is_array()) throw GenotypeParseError(where + ": expected a number list");
  std::vector<double> v;
  for (std::size_t k = 0; k < node.size(); ++k) {
    if (!node[k].is_number()) {
      throw GenotypeParseError(where + "[" + std::to_string(k) + "]: expected a number");
    }
    v.push_back(node[k].get<double>());
  }
  ProbVector p(std::move(v));
  // Drift from text round-trips is renormalized; real violations are not.
  const double s = p.sum();
  if (std::abs(s - 1.0) > kSumTolerance && std::abs(s - 1.0) <= 1e-6 && s > 0.0) {
    for (auto& x : p.entries()) x /= s;
  }
  return p;
}

}  // namespace

Genotype genotype_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw GenotypeParseError("genotype: expected a JSON object");
  for (const char* key : {"n_states", "outputs", "initial", "transitions"}) {
    if (!doc.contains(key)) throw GenotypeParseError(std::string("genotype: missing key '") + key + "'");
  }
  if (!doc["n_states"].is_number_unsigned() || doc["n_states"].get<std::size_t>() == 0) {
    throw GenotypeParseError("n_states: expected a positive integer");
  }
  const auto n = doc["n_states"].get<std::size_t>();
  if (!doc["outputs"].is_string()) throw GenotypeParseError("outputs: expected a string over {C, D}");
  const auto out_str = doc["outputs"].get<std::string>();
  if (out_str.size() != n) {
    throw GenotypeParseError("outputs: length " + std::to_string(out_str.size()) +
                             " != n_states " + std::to_string(n));
  }
  Genotype g;
  for (std::size_t s = 0; s < n; ++s) {
    try {
      g.outputs.push_back(action_from_char(out_str[s]));
    } catch (const std::invalid_argument& e) {
      throw GenotypeParseError("outputs[" + std::to_string(s) + "]: " + e.what());
    }
  }
  g.initial = parse_vector(doc["initial"], "initial");
  const auto& t = doc["transitions"];
  if (!t.is_array() || t.size() != n) {
    throw GenotypeParseError("transitions: expected " + std::to_string(n) + " per-state entries");
  }
  for (std::size_t s = 0; s < n; ++s) {
    if (!t[s].is_array() || t[s].size() != kNumActions) {
      throw GenotypeParseError("transitions[" + std::to_string(s) + "]: expected 2 rows (inputs C, D)");
    }
    for (std::size_t phi = 0; phi < kNumActions; ++phi) {
      g.transitions.push_back(parse_vector(
          t[s][phi], "transitions[" + std::to_string(s) + "][" + std::to_string(phi) + "]"));
    }
  }
  const auto problems = validate(g);
  if (!problems.empty()) {
    throw GenotypeParseError(problems.front().location + ": " + problems.front().constraint);
  }
  return g;
}

Genotype load_genotype(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GenotypeParseError(path + ": cannot open file");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw GenotypeParseError(path + ": " + e.what());
  }
  try {
    return genotype_from_json(doc);
  } catch (const GenotypeParseError& e) {
    throw GenotypeParseError(path + ": " + e.what());
  }
}

void save_genotype(const Genotype& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << genotype_to_json(g).dump(2) << '\n';
}

}  // namespace smmevo
