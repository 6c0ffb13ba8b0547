#include "smmevo/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <random>
#include <sstream>

#include "smmevo/svg.hpp"

#ifndef SMMEVO_CODE_VERSION
#define SMMEVO_CODE_VERSION "unknown"
#endif

namespace smmevo {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return json::parse(in);
}

void write_json(const fs::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << doc.dump(2) << '\n';
}

std::string trial_dir_name(std::size_t t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "trial_%03zu", t);
  return buf;
}

json trial_row_to_json(const TrialRow& r) {
  return {{"trial", r.trial},
          {"seed", r.seed},
          {"mean_score", r.mean_score},
          {"min_cooperation", r.min_cooperation},
          {"mean_cc", r.mean_cc},
          {"mean_cd", r.mean_cd},
          {"mean_dd", r.mean_dd},
          {"min_homogeneity", r.min_homogeneity},
          {"final_mean_score", r.final_mean_score},
          {"final_cc", r.final_cc},
          {"final_cd", r.final_cd},
          {"final_dd", r.final_dd},
          {"final_homogeneity", r.final_homogeneity},
          {"first_homogeneous_generation", r.first_homogeneous_generation},
          {"generations", r.generations}};
}

TrialRow trial_row_from_json(const json& j) {
  TrialRow r;
  r.trial = j.at("trial").get<std::size_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.mean_score = j.at("mean_score").get<double>();
  r.min_cooperation = j.at("min_cooperation").get<double>();
  r.mean_cc = j.at("mean_cc").get<double>();
  r.mean_cd = j.at("mean_cd").get<double>();
  r.mean_dd = j.at("mean_dd").get<double>();
  r.min_homogeneity = j.at("min_homogeneity").get<double>();
  r.final_mean_score = j.at("final_mean_score").get<double>();
  r.final_cc = j.at("final_cc").get<double>();
  r.final_cd = j.at("final_cd").get<double>();
  r.final_dd = j.at("final_dd").get<double>();
  r.final_homogeneity = j.at("final_homogeneity").get<double>();
  r.first_homogeneous_generation = j.at("first_homogeneous_generation").get<long>();
  r.generations = j.at("generations").get<std::size_t>();
  return r;
}

// The part of the configuration that determines a trial's output.
json trial_identity(const RunConfig& config) {
  json c = config_to_json(config);
  for (const char* k : {"output_dir", "trials", "workers", "plots", "kind", "paradigms", "genotype_files",
                        "validation", "seed"}) {
    c.erase(k);
  }
  c["engine"].erase("workers");
  return c;
}

const char* mechanism_tag(MutationMechanism m) {
  return m == MutationMechanism::pairwise ? "pairwise" : "linear_normalization";
}

std::vector<std::uint64_t> trace_checkpoints(std::uint64_t iterations) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t decade = 10; decade <= iterations; decade *= 10) {
    for (const std::uint64_t m : {1, 2, 5}) {
      if (m * decade <= iterations) out.push_back(m * decade);
    }
  }
  if (out.empty() || out.back() != iterations) out.push_back(iterations);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

class Logger {
 public:
  explicit Logger(std::ostream* out) : out_(out) {}
  void line(const std::string& s) {
    if (!out_) return;
    std::lock_guard lock(mu_);
    *out_ << s << '\n' << std::flush;
  }

 private:
  std::ostream* out_;
  std::mutex mu_;
};

std::string fixed(double v, int digits = 4) {
  std::ostringstream o;
  o << std::fixed << std::setprecision(digits) << v;
  return o.str();
}

}  // namespace

std::string code_version() { return SMMEVO_CODE_VERSION; }

json RunManifest::to_json() const {
  json t = json::array();
  for (const auto& e : trials) {
    t.push_back({{"index", e.index}, {"seed", e.seed}, {"path", e.path}, {"seconds", e.seconds}, {"resumed", e.resumed}});
  }
  return {{"kind", kind},
          {"config", config},
          {"seed", seed},
          {"code_version", code_version},
          {"prng_family", prng_family},
          {"seed_scheme", seed_scheme},
          {"started_at", started_at},
          {"finished_at", finished_at},
          {"wall_seconds", wall_seconds},
          {"complete", complete},
          {"trials", t}};
}

RunManifest RunManifest::from_json(const json& doc) {
  RunManifest m;
  m.kind = doc.at("kind").get<std::string>();
  m.config = doc.at("config");
  m.seed = doc.at("seed").get<std::uint64_t>();
  m.code_version = doc.value("code_version", "");
  m.prng_family = doc.value("prng_family", "");
  m.seed_scheme = doc.value("seed_scheme", "");
  m.started_at = doc.value("started_at", "");
  m.finished_at = doc.value("finished_at", "");
  m.wall_seconds = doc.value("wall_seconds", 0.0);
  m.complete = doc.value("complete", false);
  for (const auto& e : doc.value("trials", json::array())) {
    m.trials.push_back({e.at("index").get<std::size_t>(), e.at("seed").get<std::uint64_t>(),
                        e.at("path").get<std::string>(), e.value("seconds", 0.0), e.value("resumed", false)});
  }
  return m;
}

void RunManifest::write(const std::string& dir) const { write_json(fs::path(dir) / "manifest.json", to_json()); }

RunManifest RunManifest::read(const std::string& dir) {
  return from_json(read_json(fs::path(dir) / "manifest.json"));
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t trial) {
  return Rng::derive_seed(master, "trial", {static_cast<std::uint64_t>(trial)});
}

std::uint64_t resolve_seed(const RunConfig& config) {
  if (config.seed) return *config.seed;
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

namespace {

RunManifest start_manifest(const RunConfig& config, std::uint64_t seed, const std::string& kind) {
  RunManifest m;
  m.kind = kind;
  RunConfig snapshot = config;
  snapshot.seed = seed;
  m.config = config_to_json(snapshot);
  m.seed = seed;
  m.code_version = code_version();
  m.prng_family = std::string(Rng::kFamily);
  m.seed_scheme =
      "derive(master, tag, [i...]): h = FNV-1a-64(tag); s = splitmix64(master ^ splitmix64(h)); "
      "for each index i: s = splitmix64(s ^ splitmix64(i + 1)); the stream is mt19937_64(s). "
      "Trial t: derive(seed, 'trial', [t]). Within a trial: 'init', 'eval0', and "
      "derive(trial, 'generation', [g]) for generation g";
  m.started_at = utc_now();
  return m;
}

}  // namespace

TrialRow summarize_trial(const std::vector<GenerationRecord>& records, std::size_t burn_in, std::size_t trial,
                         std::uint64_t seed) {
  std::vector<double> scores;
  scores.reserve(records.size());
  for (const auto& r : records) scores.push_back(r.mean_score);
  const TrialSummary s = trial_summary(scores, burn_in);
  TrialRow row;
  row.trial = trial;
  row.seed = seed;
  row.mean_score = s.mean_score;
  row.min_cooperation = s.min_cooperation;
  row.min_homogeneity = std::numeric_limits<double>::infinity();
  for (std::size_t g = burn_in; g < records.size(); ++g) {
    row.mean_cc += records[g].interaction_ratios[0];
    row.mean_cd += records[g].interaction_ratios[1];
    row.mean_dd += records[g].interaction_ratios[2];
    row.min_homogeneity = std::min(row.min_homogeneity, records[g].homogeneity);
  }
  const auto used = static_cast<double>(s.generations_used);
  row.mean_cc /= used;
  row.mean_cd /= used;
  row.mean_dd /= used;
  const auto& last = records.back();
  row.final_mean_score = last.mean_score;
  row.final_cc = last.interaction_ratios[0];
  row.final_cd = last.interaction_ratios[1];
  row.final_dd = last.interaction_ratios[2];
  row.final_homogeneity = last.homogeneity;
  for (const auto& r : records) {
    if (r.homogeneity < kHomogeneousBelow) {
      row.first_homogeneous_generation = static_cast<long>(r.generation);
      break;
    }
  }
  row.generations = records.size() - 1;
  return row;
}

EvolveResult run_evolve(const RunConfig& config, const std::string& dir, std::ostream* log) {
  config.validate();
  fs::create_directories(dir);
  const auto t0 = std::chrono::steady_clock::now();
  const std::uint64_t seed = resolve_seed(config);
  RunManifest manifest = start_manifest(config, seed, "evolve");
  manifest.trials.resize(config.trials);
  for (std::size_t t = 0; t < config.trials; ++t) {
    manifest.trials[t] = {t, trial_seed(seed, t), trial_dir_name(t), 0.0, false};
  }
  manifest.write(dir);

  const json identity = trial_identity(config);
  Logger logger(log);
  std::vector<TrialRow> rows(config.trials);
  parallel_for(config.trials, config.workers, [&](std::size_t t) {
    const auto start = std::chrono::steady_clock::now();
    const std::uint64_t s = manifest.trials[t].seed;
    const fs::path tdir = fs::path(dir) / manifest.trials[t].path;
    const fs::path marker = tdir / "trial.json";
    if (fs::exists(marker) && fs::exists(tdir / "generations.csv")) {
      try {
        const json done = read_json(marker);
        if (done.at("config") == identity && done.at("seed").get<std::uint64_t>() == s) {
          rows[t] = trial_row_from_json(done.at("summary"));
          manifest.trials[t].resumed = true;
          logger.line("trial " + std::to_string(t) + ": reused " + tdir.string());
          return;
        }
      } catch (const std::exception&) {
        // Unreadable marker: simulate again.
      }
    }
    fs::create_directories(tdir);
    fs::remove(marker);
    auto records = run_simulation(config.simulation, s);
    write_generations_csv((tdir / "generations.csv").string(), records);
    for (const auto& r : records) {
      if (r.genotypes.empty()) continue;
      json pop = json::array();
      for (const auto& g : r.genotypes) pop.push_back(genotype_to_json(g));
      char name[48];
      std::snprintf(name, sizeof name, "genotypes_g%05zu.json", r.generation);
      write_json(tdir / name, pop);
    }
    rows[t] = summarize_trial(records, config.burn_in, t, s);
    manifest.trials[t].seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_json(marker, {{"seed", s}, {"config", identity}, {"summary", trial_row_to_json(rows[t])}});
    logger.line("trial " + std::to_string(t) + ": mean score " + fixed(rows[t].mean_score) + " (" +
                fixed(manifest.trials[t].seconds, 1) + " s)");
  });

  write_trials_csv((fs::path(dir) / "trials.csv").string(), rows);
  manifest.finished_at = utc_now();
  manifest.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  manifest.complete = true;
  manifest.write(dir);
  if (config.plots) render_figures(dir);
  return {dir, seed, rows};
}

std::vector<EvolveResult> run_sweep(const RunConfig& config, const std::string& dir, std::ostream* log) {
  config.validate();
  fs::create_directories(dir);
  const auto t0 = std::chrono::steady_clock::now();
  const std::uint64_t seed = resolve_seed(config);
  RunManifest manifest = start_manifest(config, seed, "sweep");
  manifest.write(dir);

  std::vector<EvolveResult> results;
  std::vector<std::vector<std::string>> rows;
  for (std::size_t k = 0; k < config.paradigms.size(); ++k) {
    RunConfig sub = config;
    sub.kind = "evolve";
    sub.simulation.evolution.paradigm = SelectionParadigm::from_label(config.paradigms[k]);
    // Every paradigm sees the same trial seeds.
    sub.seed = seed;
    const std::string name = std::string("paradigm_") + sub.simulation.evolution.paradigm.label;
    if (log) *log << "paradigm " << sub.simulation.evolution.paradigm.describe() << '\n';
    results.push_back(run_evolve(sub, (fs::path(dir) / name).string(), log));
    manifest.trials.push_back({k, seed, name, 0.0, false});

    const auto& trials = results.back().trials;
    double sum = 0.0, lo = trials.front().mean_score, hi = lo;
    std::size_t hits = 0;
    for (const auto& r : trials) {
      sum += r.mean_score;
      lo = std::min(lo, r.mean_score);
      hi = std::max(hi, r.mean_score);
      hits += r.mean_score >= 2.75;
    }
    rows.push_back({std::string(1, sub.simulation.evolution.paradigm.label),
                    sub.simulation.evolution.paradigm.describe(), std::to_string(trials.size()),
                    format_double(sum / static_cast<double>(trials.size())),
                    format_double(static_cast<double>(hits) / static_cast<double>(trials.size())), format_double(lo),
                    format_double(hi)});
  }
  write_csv((fs::path(dir) / "sweep.csv").string(), "smmevo.sweep/1",
            {"paradigm", "description", "trials", "mean_of_trial_means", "fraction_at_least_2_75", "min", "max"},
            rows);
  manifest.finished_at = utc_now();
  manifest.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  manifest.complete = true;
  manifest.write(dir);
  return results;
}

MutationValidationResult run_validate_mutation(const RunConfig& config, const std::string& dir, std::ostream* log) {
  config.validate();
  fs::create_directories(dir);
  const auto t0 = std::chrono::steady_clock::now();
  const std::uint64_t seed = resolve_seed(config);
  RunManifest manifest = start_manifest(config, seed, "validate-mutation");
  manifest.write(dir);

  const auto& v = config.validation;
  MutationValidationResult out;
  out.dir = dir;
  out.seed = seed;
  const std::array<MutationMechanism, 2> mechanisms{MutationMechanism::pairwise,
                                                    MutationMechanism::linear_normalization};

  std::vector<std::vector<std::string>> fit_rows;
  for (std::size_t m = 0; m < mechanisms.size(); ++m) {
    MutationParams params;
    params.mechanism = mechanisms[m];
    params.sigma = v.sigma;
    const VectorMutator mutate = make_mutator(params);
    for (const int dim : v.dims) {
      Rng rng = Rng::derive(seed, "density", {m, static_cast<std::uint64_t>(dim)});
      DensityFitRow row{mechanisms[m], dim, density_fit(mutate, static_cast<std::size_t>(dim), v.iterations, v.bins, rng)};
      const auto& f = row.fit;
      std::vector<std::vector<std::string>> bins;
      for (std::size_t b = 0; b < f.counts.size(); ++b) {
        bins.push_back({format_double(f.edges[b]), format_double(f.edges[b + 1]), format_double(f.counts[b]),
                        format_double(f.expected_probs[b] * static_cast<double>(v.iterations))});
      }
      const std::string stem = std::string("density_") + mechanism_tag(mechanisms[m]) + "_d" + std::to_string(dim);
      write_csv((fs::path(dir) / (stem + ".csv")).string(), kDensitySchema,
                {"bin_lo", "bin_hi", "count", "expected_count"}, bins);
      fit_rows.push_back({mechanism_tag(mechanisms[m]), std::to_string(dim), format_double(f.fit.statistic),
                          std::to_string(f.fit.degrees_of_freedom), format_double(f.fit.p_value),
                          format_double(f.fit.complement_p), f.fit.p_value < 0.05 ? "1" : "0",
                          format_double(f.mass_at_zero), format_double(f.mass_at_one)});
      if (log) {
        *log << mechanism_tag(mechanisms[m]) << " dim " << dim << ": chi2 " << fixed(f.fit.statistic, 2) << " p "
             << f.fit.p_value << (f.fit.p_value < 0.05 ? " (rejected)" : " (not rejected)") << '\n';
      }
      out.fits.push_back(std::move(row));
    }
  }
  write_csv((fs::path(dir) / "fit_table.csv").string(), kFitTableSchema,
            {"mechanism", "dim", "statistic", "dof", "p_value", "complement_p", "rejected_at_0_05", "mass_at_zero",
             "mass_at_one"},
            fit_rows);

  const auto checkpoints = trace_checkpoints(v.iterations);
  std::vector<std::vector<std::string>> trace_rows;
  for (std::size_t m = 0; m < mechanisms.size(); ++m) {
    MutationParams params;
    params.mechanism = mechanisms[m];
    params.sigma = v.sigma;
    const VectorMutator mutate = make_mutator(params);
    for (std::size_t r = 0; r < v.trace_seeds; ++r) {
      Rng rng = Rng::derive(seed, "trace", {m, r});
      BiasTraceRun run{mechanisms[m], r, mutation_bias_trace(mutate, v.trace_dim, v.iterations, checkpoints, rng)};
      for (const auto& p : run.points) {
        trace_rows.push_back({mechanism_tag(mechanisms[m]), std::to_string(r), std::to_string(p.iteration),
                              format_double(p.fit.statistic), format_double(p.fit.p_value),
                              format_double(p.fit.complement_p)});
      }
      out.traces.push_back(std::move(run));
    }
  }
  write_csv((fs::path(dir) / "bias_trace.csv").string(), kBiasTraceSchema,
            {"mechanism", "replicate", "iteration", "statistic", "p_value", "complement_p"}, trace_rows);

  manifest.finished_at = utc_now();
  manifest.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  manifest.complete = true;
  manifest.write(dir);
  if (config.plots) render_figures(dir);
  return out;
}

PayoffComparison compare_backends(const Genotype& a, const Genotype& b, const GameSpec& game,
                                  const EngineParams& engine, std::uint64_t seed) {
  PayoffComparison c;
  c.results.push_back(marginal_fixed_point(a, b, game, engine.tol, engine.max_iter, engine.lagged_actions));
  c.results.push_back(joint_chain_payoff(a, b, game, engine.tol, engine.max_iter));
  Rng rng = Rng::derive(seed, "monte_carlo");
  c.results.push_back(monte_carlo_payoff(a, b, game, engine.rounds, engine.reps, rng));
  return c;
}

json pairwise_to_json(const PairwiseResult& r) {
  auto vec = [](const ProbVector& p) { return std::vector<double>(p.begin(), p.end()); };
  json j = {{"backend", to_string(r.backend)},
            {"u_i", r.u_i},
            {"u_j", r.u_j},
            {"time_avg_u_i", r.time_avg_u_i},
            {"time_avg_u_j", r.time_avg_u_j},
            {"a_i_horizon", vec(r.a_i_horizon)},
            {"a_j_horizon", vec(r.a_j_horizon)},
            {"outcome", {{"CC", r.outcome[0]}, {"CD", r.outcome[1]}, {"DC", r.outcome[2]}, {"DD", r.outcome[3]}}},
            {"iterations_to_converge", r.iterations_to_converge},
            {"converged", r.converged}};
  if (r.backend == Backend::monte_carlo) {
    j["se_u_i"] = r.se_u_i;
    j["se_u_j"] = r.se_u_j;
    j["se_time_avg_i"] = r.se_time_avg_i;
    j["se_time_avg_j"] = r.se_time_avg_j;
  }
  return j;
}

namespace {

void render_evolve(const fs::path& dir, const json& config, std::vector<std::string>& written) {
  const auto window = config.value("window", std::size_t{5});
  const auto trials = read_trials_csv((dir / "trials.csv").string());
  std::vector<double> means;
  for (const auto& r : trials) means.push_back(r.mean_score);
  double lo = 2.0, hi = 3.0;
  for (const double m : means) {
    lo = std::min(lo, std::floor(m * 10.0) / 10.0);
    hi = std::max(hi, std::ceil(m * 10.0) / 10.0);
  }
  std::string game = "game";
  if (config.contains("game") && config["game"].contains("name")) game = config["game"]["name"].get<std::string>();
  std::string paradigm = config.contains("paradigm") ? config["paradigm"].dump() : "";
  svg::Axes axes{"Trial mean scores (" + game + ", paradigm " + paradigm + ")", "mean score after burn-in",
                 "trials", std::nullopt, std::nullopt, false};
  const auto hist = (dir / "mean_scores.svg").string();
  svg::write_file(hist, svg::histogram(axes, means, static_cast<std::size_t>(std::lround((hi - lo) / 0.05)), lo, hi));
  written.push_back(hist);

  for (const auto& r : trials) {
    const fs::path tdir = dir / trial_dir_name(r.trial);
    if (!fs::exists(tdir / "generations.csv")) continue;
    const auto s = read_generations_csv((tdir / "generations.csv").string());
    const svg::Axes ratio_axes{"Interaction ratios, trial " + std::to_string(r.trial) + " (window " +
                                   std::to_string(window) + ")",
                               "generation", "fraction of interactions", std::nullopt, std::pair{0.0, 1.0}, false};
    const std::vector<svg::Series> ratios{{"CC", s.generation, moving_average(s.cc, window), "#2ca02c"},
                                          {"CD", s.generation, moving_average(s.cd, window), "#ff7f0e"},
                                          {"DD", s.generation, moving_average(s.dd, window), "#d62728"}};
    svg::write_file((tdir / "ratios.svg").string(), svg::line_chart(ratio_axes, ratios));
    written.push_back((tdir / "ratios.svg").string());

    const svg::Axes d_axes{"Homogeneity D(t), trial " + std::to_string(r.trial), "generation", "D(t)",
                           std::nullopt, std::nullopt, false};
    svg::write_file((tdir / "homogeneity.svg").string(),
                    svg::line_chart(d_axes, {{"D(t)", s.generation, s.homogeneity, "#1f77b4"}}));
    written.push_back((tdir / "homogeneity.svg").string());

    const svg::Axes m_axes{"Mean per-round score, trial " + std::to_string(r.trial), "generation", "mean score",
                           std::nullopt, std::nullopt, false};
    svg::write_file((tdir / "mean_score.svg").string(),
                    svg::line_chart(m_axes, {{"mean score", s.generation, s.mean_score, "#9467bd"}}));
    written.push_back((tdir / "mean_score.svg").string());
  }
}

void render_validation(const fs::path& dir, std::vector<std::string>& written) {
  std::vector<fs::path> densities;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (name.starts_with("density_") && e.path().extension() == ".csv") densities.push_back(e.path());
  }
  std::sort(densities.begin(), densities.end());
  for (const auto& p : densities) {
    const CsvTable t = read_csv(p.string(), kDensitySchema, {"bin_lo", "bin_hi", "count", "expected_count"});
    const std::string stem = p.stem().string();
    const int dim = std::stoi(stem.substr(stem.rfind("_d") + 2));
    double total = 0.0;
    for (std::size_t r = 0; r < t.rows.size(); ++r) total += t.number(r, "count");
    std::vector<double> edges, heights;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      const double lo = t.number(r, "bin_lo");
      const double hi = t.number(r, "bin_hi");
      if (r == 0) edges.push_back(lo);
      edges.push_back(hi);
      heights.push_back(total > 0.0 ? t.number(r, "count") / (total * (hi - lo)) : 0.0);
    }
    svg::Series ref{"(d-1)(1-k)^(d-2)", {}, {}, "#d62728"};
    for (int k = 0; k <= 100; ++k) {
      const double x = k / 100.0;
      ref.x.push_back(x);
      ref.y.push_back(marginal_density(x, dim));
    }
    const std::string mech = stem.substr(8, stem.rfind("_d") - 8);
    const svg::Axes axes{"Gene value density, " + mech + ", dim " + std::to_string(dim), "value", "density",
                         std::pair{0.0, 1.0}, std::nullopt, false};
    const auto out = (dir / (stem + ".svg")).string();
    svg::write_file(out, svg::bar_chart(axes, edges, heights, ref));
    written.push_back(out);
  }

  if (fs::exists(dir / "bias_trace.csv")) {
    const CsvTable t = read_csv((dir / "bias_trace.csv").string(), kBiasTraceSchema);
    std::map<std::string, std::map<double, std::pair<double, int>>> acc;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      auto& cell = acc[t.rows[r][t.column("mechanism")]][t.number(r, "iteration")];
      cell.first += t.number(r, "complement_p");
      cell.second += 1;
    }
    std::vector<svg::Series> series;
    const std::map<std::string, std::string> colors{{"pairwise", "#1f77b4"}, {"linear_normalization", "#d62728"}};
    for (const auto& [mech, points] : acc) {
      svg::Series s{mech, {}, {}, colors.contains(mech) ? colors.at(mech) : "#333333"};
      for (const auto& [it, sum] : points) {
        s.x.push_back(it);
        s.y.push_back(sum.first / sum.second);
      }
      series.push_back(std::move(s));
    }
    const svg::Axes axes{"Index bias of the largest gene (mean over replicates)", "iterations",
                         "1 - chi-square p-value", std::nullopt, std::pair{0.0, 1.0}, true};
    const auto out = (dir / "bias_trace.svg").string();
    svg::write_file(out, svg::line_chart(axes, series));
    written.push_back(out);
  }
}

}  // namespace

std::vector<std::string> render_figures(const std::string& dir_str) {
  const fs::path dir(dir_str);
  const RunManifest m = RunManifest::read(dir_str);
  std::vector<std::string> written;
  if (m.kind == "evolve") {
    render_evolve(dir, m.config, written);
  } else if (m.kind == "sweep") {
    for (const auto& t : m.trials) {
      const fs::path sub = dir / t.path;
      const auto more = render_figures(sub.string());
      written.insert(written.end(), more.begin(), more.end());
    }
  } else if (m.kind == "validate-mutation") {
    render_validation(dir, written);
  }
  return written;
}

}  // namespace smmevo
