#pragma once

#include "mhardy/atomic.hpp"
#include "mhardy/io.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace mhardy {

/// One verification run: which suite, on which space, over which exponent
/// grid, how many seeded trials, where the outputs go.
struct ExperimentConfig {
  std::string suite;
  std::string space_selector = "dyadic:2:3";
  std::vector<std::vector<double>> exponents = {{2.0, 2.0}};
  int trials = 100;
  std::uint64_t seed = 1;
  int counterexample_n = 16;  // counterexample suite only
  double single_p = 2.0;      // counterexample suite only
  std::string out_path;       // empty = stdout
  std::string svg_path;       // empty = no histogram
  std::string kind = "s";     // decompose suite: s | P | Q | M | S-regular
  double t_exponent = 0.0;    // decompose suite: 0 = kind-specific default

  void validate() const;
};

/// Data rows of one suite run. Values are doubles; strings (suite name,
/// exponent vector) are carried per row as labels. Wall time is tracked for
/// the summary only and never becomes a CSV column.
struct SuiteResult {
  std::vector<std::string> columns;              // value column names
  std::vector<std::vector<std::string>> labels;  // [row] -> label cells
  std::vector<std::string> label_columns;
  std::vector<std::vector<double>> rows;
  int exact_failures = 0;  // violations of constant-free assertions
  std::vector<double> histogram_values;
  std::string summary;
  double wall_seconds = 0;
};

/// Deterministic CSV serialization (%.17g, '\n' line ends).
std::string to_csv(const SuiteResult& result);

void write_svg_histogram(const std::vector<double>& values, const std::string& path,
                         int bins = 30);

const std::vector<std::string>& suite_names();

/// Runs one suite; deterministic given the config (seeds derive from
/// config.seed and the trial index).
SuiteResult run_suite(const ExperimentConfig& config);

/// Full run: execute, write CSV (file or stdout) and optional SVG. Returns
/// the process exit code: 0 clean, 1 if any exact assertion failed.
int run_and_report(const ExperimentConfig& config);

ExperimentConfig config_from_json_file(const std::string& path);

}  // namespace mhardy
