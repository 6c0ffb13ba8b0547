#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "smmevo/evolution.hpp"
#include "smmevo/metrics.hpp"
#include "smmevo/payoff.hpp"

namespace smmevo {

/// Every CSV written here starts with a "# schema: <name>/<version>" line
/// followed by a fixed header. Readers reject anything else.
class CsvSchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CsvTable {
  std::string schema;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;  // throws CsvSchemaError if absent
  double number(std::size_t row, std::string_view name) const;
};

inline constexpr std::string_view kGenerationsSchema = "smmevo.generations/1";
inline constexpr std::string_view kTrialsSchema = "smmevo.trials/1";
inline constexpr std::string_view kPayoffMatrixSchema = "smmevo.payoff_matrix/1";
inline constexpr std::string_view kDensitySchema = "smmevo.density/1";
inline constexpr std::string_view kBiasTraceSchema = "smmevo.bias_trace/1";
inline constexpr std::string_view kFitTableSchema = "smmevo.fit_table/1";

/// Formats a double so that reading it back gives the same value.
std::string format_double(double x);

void write_csv(const std::string& path, std::string_view schema, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);
/// Parses a file written by write_csv; checks the schema line and, when
/// expected_header is non-empty, the header.
CsvTable read_csv(const std::string& path, std::string_view expected_schema,
                  const std::vector<std::string>& expected_header = {});

const std::vector<std::string>& generations_header();
void write_generations_csv(const std::string& path, const std::vector<GenerationRecord>& records);

/// The per-generation series of one trial as stored on disk.
struct GenerationSeries {
  std::vector<double> generation;
  std::vector<double> mean_score;
  std::vector<double> cc, cd, dd;
  std::vector<double> homogeneity;
};
GenerationSeries read_generations_csv(const std::string& path);

struct TrialRow {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double mean_score = 0.0;
  double min_cooperation = 0.0;
  double mean_cc = 0.0;  // interaction ratios averaged after burn-in
  double mean_cd = 0.0;
  double mean_dd = 0.0;
  double min_homogeneity = 0.0;  // smallest D(t) after burn-in
  double final_mean_score = 0.0;
  double final_cc = 0.0;
  double final_cd = 0.0;
  double final_dd = 0.0;
  double final_homogeneity = 0.0;
  long first_homogeneous_generation = -1;  // first record with D(t) < 0.05, -1 if never
  std::size_t generations = 0;
};
const std::vector<std::string>& trials_header();
void write_trials_csv(const std::string& path, const std::vector<TrialRow>& rows);
std::vector<TrialRow> read_trials_csv(const std::string& path);

/// rows i, columns j, value: what i earns per round against j.
void write_payoff_matrix_csv(const std::string& path, const PopulationEvaluation& ev);

}  // namespace smmevo
