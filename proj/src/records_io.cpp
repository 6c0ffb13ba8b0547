#include "smmevo/records_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace smmevo {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string join(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k) out += ',';
    out += cells[k];
  }
  return out;
}

constexpr std::string_view kSchemaPrefix = "# schema: ";

}  // namespace

std::string format_double(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::size_t CsvTable::column(std::string_view name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw CsvSchemaError("column '" + std::string(name) + "' missing");
  return static_cast<std::size_t>(it - header.begin());
}

double CsvTable::number(std::size_t row, std::string_view name) const {
  const std::string& cell = rows.at(row).at(column(name));
  double v = 0.0;
  const auto r = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (r.ec != std::errc{} || r.ptr != cell.data() + cell.size()) {
    throw CsvSchemaError("row " + std::to_string(row) + " column '" + std::string(name) + "': '" + cell +
                         "' is not a number");
  }
  return v;
}

void write_csv(const std::string& path, std::string_view schema, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << kSchemaPrefix << schema << '\n' << join(header) << '\n';
  for (const auto& r : rows) {
    if (r.size() != header.size()) throw std::logic_error("write_csv: row width differs from header");
    out << join(r) << '\n';
  }
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

CsvTable read_csv(const std::string& path, std::string_view expected_schema,
                  const std::vector<std::string>& expected_header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  CsvTable t;
  std::string line;
  if (!std::getline(in, line) || !line.starts_with(kSchemaPrefix)) {
    throw CsvSchemaError(path + ": missing schema line");
  }
  t.schema = line.substr(kSchemaPrefix.size());
  if (t.schema != expected_schema) {
    throw CsvSchemaError(path + ": schema '" + t.schema + "', expected '" + std::string(expected_schema) + "'");
  }
  if (!std::getline(in, line)) throw CsvSchemaError(path + ": missing header");
  t.header = split(line);
  if (!expected_header.empty() && t.header != expected_header) {
    throw CsvSchemaError(path + ": header does not match schema " + std::string(expected_schema));
  }
  std::size_t lineno = 2;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != t.header.size()) {
      throw CsvSchemaError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(t.header.size()) +
                           " cells, found " + std::to_string(cells.size()));
    }
    t.rows.push_back(std::move(cells));
  }
  return t;
}

const std::vector<std::string>& generations_header() {
  static const std::vector<std::string> h{"generation", "mean_score",  "cc",          "cd",
                                          "dd",         "homogeneity", "fitness_min", "fitness_max",
                                          "non_converged_pairs"};
  return h;
}

void write_generations_csv(const std::string& path, const std::vector<GenerationRecord>& records) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(records.size());
  for (const auto& r : records) {
    const auto [lo, hi] = std::minmax_element(r.fitness.begin(), r.fitness.end());
    rows.push_back({std::to_string(r.generation), format_double(r.mean_score),
                    format_double(r.interaction_ratios[0]), format_double(r.interaction_ratios[1]),
                    format_double(r.interaction_ratios[2]), format_double(r.homogeneity),
                    format_double(r.fitness.empty() ? 0.0 : *lo), format_double(r.fitness.empty() ? 0.0 : *hi),
                    std::to_string(r.non_converged_pairs)});
  }
  write_csv(path, kGenerationsSchema, generations_header(), rows);
}

GenerationSeries read_generations_csv(const std::string& path) {
  const CsvTable t = read_csv(path, kGenerationsSchema, generations_header());
  GenerationSeries s;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    s.generation.push_back(t.number(r, "generation"));
    s.mean_score.push_back(t.number(r, "mean_score"));
    s.cc.push_back(t.number(r, "cc"));
    s.cd.push_back(t.number(r, "cd"));
    s.dd.push_back(t.number(r, "dd"));
    s.homogeneity.push_back(t.number(r, "homogeneity"));
  }
  return s;
}

const std::vector<std::string>& trials_header() {
  static const std::vector<std::string> h{
      "trial",    "seed",     "mean_score",        "min_cooperation",
      "mean_cc",  "mean_cd",  "mean_dd",           "min_homogeneity",
      "final_mean_score", "final_cc", "final_cd", "final_dd",
      "final_homogeneity", "first_homogeneous_generation", "generations"};
  return h;
}

void write_trials_csv(const std::string& path, const std::vector<TrialRow>& rows) {
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rows) {
    cells.push_back({std::to_string(r.trial), std::to_string(r.seed), format_double(r.mean_score),
                     format_double(r.min_cooperation), format_double(r.mean_cc), format_double(r.mean_cd),
                     format_double(r.mean_dd), format_double(r.min_homogeneity), format_double(r.final_mean_score),
                     format_double(r.final_cc), format_double(r.final_cd), format_double(r.final_dd),
                     format_double(r.final_homogeneity), std::to_string(r.first_homogeneous_generation),
                     std::to_string(r.generations)});
  }
  write_csv(path, kTrialsSchema, trials_header(), cells);
}

std::vector<TrialRow> read_trials_csv(const std::string& path) {
  const CsvTable t = read_csv(path, kTrialsSchema, trials_header());
  std::vector<TrialRow> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    TrialRow row;
    row.trial = static_cast<std::size_t>(t.number(r, "trial"));
    row.seed = std::stoull(t.rows[r][t.column("seed")]);
    row.mean_score = t.number(r, "mean_score");
    row.min_cooperation = t.number(r, "min_cooperation");
    row.mean_cc = t.number(r, "mean_cc");
    row.mean_cd = t.number(r, "mean_cd");
    row.mean_dd = t.number(r, "mean_dd");
    row.min_homogeneity = t.number(r, "min_homogeneity");
    row.final_mean_score = t.number(r, "final_mean_score");
    row.final_cc = t.number(r, "final_cc");
    row.final_cd = t.number(r, "final_cd");
    row.final_dd = t.number(r, "final_dd");
    row.final_homogeneity = t.number(r, "final_homogeneity");
    row.first_homogeneous_generation = static_cast<long>(t.number(r, "first_homogeneous_generation"));
    row.generations = static_cast<std::size_t>(t.number(r, "generations"));
    out.push_back(row);
  }
  return out;
}

void write_payoff_matrix_csv(const std::string& path, const PopulationEvaluation& ev) {
  const auto m = ev.payoff_matrix();
  std::vector<std::string> header{"i"};
  for (std::size_t j = 0; j < ev.n; ++j) header.push_back("u_vs_" + std::to_string(j));
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < ev.n; ++i) {
    std::vector<std::string> r{std::to_string(i)};
    for (std::size_t j = 0; j < ev.n; ++j) r.push_back(format_double(m[i][j]));
    rows.push_back(std::move(r));
  }
  write_csv(path, kPayoffMatrixSchema, header, rows);
}

}  // namespace smmevo
