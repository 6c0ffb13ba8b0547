#include "smmevo/config.hpp"

#include <fstream>
#include <set>

namespace smmevo {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& prefix, const std::set<std::string>& known) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.contains(it.key())) throw ConfigError(prefix + it.key(), "unknown key");
  }
}

json object_at(const json& doc, const std::string& key) {
  if (!doc.is_object()) throw ConfigError(key, "expected an object");
  return doc;
}

template <class T>
T get_as(const json& v, const std::string& key) {
  try {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(key, "expected true or false");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0) {
          throw ConfigError(key, "must not be negative");
        }
      }
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError(key, "expected a number");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError(key, "expected a string");
    }
    return v.get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(key, e.what());
  }
}

template <class T>
void set_if(const json& obj, const char* name, const std::string& prefix, T& out) {
  if (auto it = obj.find(name); it != obj.end()) out = get_as<T>(*it, prefix + name);
}

// Converts library std::invalid_argument into a ConfigError on `key`.
template <class F>
auto wrap(const std::string& key, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(key, e.what());
  }
}

SelectionParadigm paradigm_from(const json& v) {
  if (v.is_string()) {
    return wrap("paradigm", [&] { return SelectionParadigm::from_label(v.get<std::string>()); });
  }
  if (!v.is_object()) throw ConfigError("paradigm", "expected a label or {reproductive, survival, overlap}");
  reject_unknown(v, "paradigm.", {"reproductive", "survival", "overlap"});
  for (const char* k : {"reproductive", "survival", "overlap"}) {
    if (!v.contains(k)) throw ConfigError(std::string("paradigm.") + k, "missing");
  }
  const auto r = wrap("paradigm.reproductive", [&] {
    return selection_from_string(get_as<std::string>(v["reproductive"], "paradigm.reproductive"));
  });
  const auto s = wrap("paradigm.survival", [&] {
    return selection_from_string(get_as<std::string>(v["survival"], "paradigm.survival"));
  });
  return SelectionParadigm::from_triple(r, s, get_as<bool>(v["overlap"], "paradigm.overlap"));
}

json paradigm_to_json(const SelectionParadigm& p) {
  if (p.label != '?') return std::string(1, p.label);
  return {{"reproductive", to_string(p.reproductive)}, {"survival", to_string(p.survival)}, {"overlap", p.overlap}};
}

}  // namespace

void RunConfig::validate() const {
  static const std::set<std::string> kinds{"evolve", "sweep", "validate-mutation", "payoff", "figures"};
  if (!kinds.contains(kind)) throw ConfigError("kind", "unknown experiment kind '" + kind + "'");
  if (trials < 1) throw ConfigError("trials", "must be >= 1");
  if (window < 1) throw ConfigError("window", "must be >= 1");
  if (simulation.n_states < 1) throw ConfigError("n_states", "must be >= 1");
  if (kind == "evolve" || kind == "sweep") {
    if (burn_in >= simulation.generations + 1) {
      throw ConfigError("burn_in", "must be smaller than generations + 1 (" +
                                       std::to_string(simulation.generations + 1) + " records per trial)");
    }
    wrap("evolution", [&] { simulation.evolution.validate(simulation.n_agents); });
  }
  for (const auto& label : paradigms) wrap("paradigms", [&] { return SelectionParadigm::from_label(label); });
  if (kind == "validate-mutation") {
    for (int d : validation.dims) {
      if (d < 2) throw ConfigError("validation.dims", "dimensions must be >= 2");
    }
    if (validation.iterations < 1) throw ConfigError("validation.iterations", "must be >= 1");
    if (validation.bins < 2) throw ConfigError("validation.bins", "must be >= 2");
    if (validation.trace_dim < 2) throw ConfigError("validation.trace_dim", "must be >= 2");
    if (!(validation.sigma > 0.0)) throw ConfigError("validation.sigma", "must be > 0");
  }
  if (kind == "payoff" && genotype_files.size() != 2) {
    throw ConfigError("genotype_files", "payoff needs exactly two genotype files");
  }
}

RunConfig config_from_json(const json& doc, RunConfig base) {
  object_at(doc, "<root>");
  reject_unknown(doc, "",
                 {"kind", "game", "paradigm", "n_agents", "n_states", "generations", "trials", "burn_in", "window",
                  "seed", "output_dir", "plots", "workers", "snapshot_every", "paradigms", "genotype_files",
                  "mutation", "engine", "evolution", "validation"});
  RunConfig c = std::move(base);
  auto& sim = c.simulation;
  auto& evo = sim.evolution;

  set_if(doc, "kind", "", c.kind);
  if (auto it = doc.find("game"); it != doc.end()) {
    if (it->is_string()) {
      evo.game = wrap("game", [&] { return game_by_name(it->get<std::string>()); });
    } else {
      evo.game = wrap("game", [&] { return game_from_json(*it); });
    }
  }
  if (auto it = doc.find("paradigm"); it != doc.end()) evo.paradigm = paradigm_from(*it);
  set_if(doc, "n_agents", "", sim.n_agents);
  set_if(doc, "n_states", "", sim.n_states);
  set_if(doc, "generations", "", sim.generations);
  set_if(doc, "snapshot_every", "", sim.snapshot_every);
  set_if(doc, "trials", "", c.trials);
  set_if(doc, "burn_in", "", c.burn_in);
  set_if(doc, "window", "", c.window);
  if (auto it = doc.find("seed"); it != doc.end()) {
    if (it->is_null()) {
      c.seed.reset();
    } else {
      c.seed = get_as<std::uint64_t>(*it, "seed");
    }
  }
  set_if(doc, "output_dir", "", c.output_dir);
  set_if(doc, "plots", "", c.plots);
  set_if(doc, "workers", "", c.workers);
  if (auto it = doc.find("paradigms"); it != doc.end()) {
    if (!it->is_array()) throw ConfigError("paradigms", "expected a list of labels");
    c.paradigms.clear();
    for (const auto& v : *it) c.paradigms.push_back(get_as<std::string>(v, "paradigms"));
  }
  if (auto it = doc.find("genotype_files"); it != doc.end()) {
    if (!it->is_array()) throw ConfigError("genotype_files", "expected a list of paths");
    c.genotype_files.clear();
    for (const auto& v : *it) c.genotype_files.push_back(get_as<std::string>(v, "genotype_files"));
  }

  if (auto it = doc.find("mutation"); it != doc.end()) {
    const json& m = object_at(*it, "mutation");
    reject_unknown(m, "mutation.", {"mechanism", "sigma", "ops_per_vector", "g_flip_rate"});
    if (auto mi = m.find("mechanism"); mi != m.end()) {
      evo.mutation.mechanism = wrap("mutation.mechanism", [&] {
        return mechanism_from_string(get_as<std::string>(*mi, "mutation.mechanism"));
      });
    }
    set_if(m, "sigma", "mutation.", evo.mutation.sigma);
    set_if(m, "ops_per_vector", "mutation.", evo.mutation.ops_per_vector);
    set_if(m, "g_flip_rate", "mutation.", evo.mutation.g_flip_rate);
    wrap("mutation", [&] { evo.mutation.validate(); });
  }
  if (auto it = doc.find("engine"); it != doc.end()) {
    const json& e = object_at(*it, "engine");
    reject_unknown(e, "engine.", {"backend", "tol", "max_iter", "lagged_actions", "rounds", "reps", "workers"});
    if (auto bi = e.find("backend"); bi != e.end()) {
      evo.engine.backend =
          wrap("engine.backend", [&] { return backend_from_string(get_as<std::string>(*bi, "engine.backend")); });
    }
    set_if(e, "tol", "engine.", evo.engine.tol);
    set_if(e, "max_iter", "engine.", evo.engine.max_iter);
    set_if(e, "lagged_actions", "engine.", evo.engine.lagged_actions);
    set_if(e, "rounds", "engine.", evo.engine.rounds);
    set_if(e, "reps", "engine.", evo.engine.reps);
    set_if(e, "workers", "engine.", evo.engine.workers);
    wrap("engine", [&] { evo.engine.validate(); });
  }
  if (auto it = doc.find("evolution"); it != doc.end()) {
    const json& e = object_at(*it, "evolution");
    reject_unknown(e, "evolution.", {"parents", "offspring_per_parent", "offspring_evaluation", "offspring_first"});
    set_if(e, "parents", "evolution.", evo.parents);
    set_if(e, "offspring_per_parent", "evolution.", evo.offspring_per_parent);
    set_if(e, "offspring_first", "evolution.", evo.offspring_first);
    if (auto oi = e.find("offspring_evaluation"); oi != e.end()) {
      evo.offspring_evaluation = wrap("evolution.offspring_evaluation", [&] {
        return offspring_evaluation_from_string(get_as<std::string>(*oi, "evolution.offspring_evaluation"));
      });
    }
  }
  if (auto it = doc.find("validation"); it != doc.end()) {
    const json& v = object_at(*it, "validation");
    reject_unknown(v, "validation.", {"dims", "iterations", "bins", "trace_dim", "trace_seeds", "sigma"});
    if (auto di = v.find("dims"); di != v.end()) {
      if (!di->is_array()) throw ConfigError("validation.dims", "expected a list of integers");
      c.validation.dims.clear();
      for (const auto& d : *di) c.validation.dims.push_back(get_as<int>(d, "validation.dims"));
    }
    set_if(v, "iterations", "validation.", c.validation.iterations);
    set_if(v, "bins", "validation.", c.validation.bins);
    set_if(v, "trace_dim", "validation.", c.validation.trace_dim);
    set_if(v, "trace_seeds", "validation.", c.validation.trace_seeds);
    set_if(v, "sigma", "validation.", c.validation.sigma);
  }
  return c;
}

json config_to_json(const RunConfig& c) {
  const auto& sim = c.simulation;
  const auto& evo = sim.evolution;
  json doc;
  doc["kind"] = c.kind;
  doc["game"] = game_to_json(evo.game);
  doc["paradigm"] = paradigm_to_json(evo.paradigm);
  doc["n_agents"] = sim.n_agents;
  doc["n_states"] = sim.n_states;
  doc["generations"] = sim.generations;
  doc["snapshot_every"] = sim.snapshot_every;
  doc["trials"] = c.trials;
  doc["burn_in"] = c.burn_in;
  doc["window"] = c.window;
  doc["seed"] = c.seed ? json(*c.seed) : json(nullptr);
  doc["output_dir"] = c.output_dir;
  doc["plots"] = c.plots;
  doc["workers"] = c.workers;
  doc["paradigms"] = c.paradigms;
  doc["genotype_files"] = c.genotype_files;
  doc["mutation"] = {{"mechanism", to_string(evo.mutation.mechanism)},
                     {"sigma", evo.mutation.sigma},
                     {"ops_per_vector", evo.mutation.ops_per_vector},
                     {"g_flip_rate", evo.mutation.g_flip_rate}};
  doc["engine"] = {{"backend", to_string(evo.engine.backend)},
                   {"tol", evo.engine.tol},
                   {"max_iter", evo.engine.max_iter},
                   {"lagged_actions", evo.engine.lagged_actions},
                   {"rounds", evo.engine.rounds},
                   {"reps", evo.engine.reps},
                   {"workers", evo.engine.workers}};
  doc["evolution"] = {{"parents", evo.parents},
                      {"offspring_per_parent", evo.offspring_per_parent},
                      {"offspring_evaluation", to_string(evo.offspring_evaluation)},
                      {"offspring_first", evo.offspring_first}};
  doc["validation"] = {{"dims", c.validation.dims},
                       {"iterations", c.validation.iterations},
                       {"bins", c.validation.bins},
                       {"trace_dim", c.validation.trace_dim},
                       {"trace_seeds", c.validation.trace_seeds},
                       {"sigma", c.validation.sigma}};
  return doc;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("--config", "'" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(doc, std::move(base));
}

}  // namespace smmevo
