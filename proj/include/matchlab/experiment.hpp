#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "matchlab/market.hpp"

namespace matchlab {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One experiment. Fields unused by `kind` are ignored.
//   validate        family, k
//   distinctness    family, k, measure (family default when empty)
//   pairwise        family, k, measure, pairs (0 = all), seed
//   count           market, mechanism, measure, vary, d_star, d_dagger, domain
//   type_to_menu_da market, d_star, d_dagger
// `market` is an example name or a path to a market file.
struct ExperimentConfig {
  std::string id;
  std::string kind;
  std::string family;
  int k = 0;
  std::string measure;
  std::string mechanism;
  std::string market;
  std::vector<std::string> vary;
  std::string d_star;
  std::string d_dagger;
  std::string domain = "singletons";
  std::uint64_t pairs = 0;
  std::uint64_t seed = 0;
  std::uint64_t ceiling = 10'000'000;
  int jobs = 1;
  bool timing = false;
};

// Accepts one experiment object or {"experiments": [...]}. Throws
// ConfigError naming the offending field.
std::vector<ExperimentConfig> parse_experiment_configs(const std::string& json_text);

struct ReportRow {
  std::string experiment;
  std::string quantity;
  std::string value;
  std::string expected;
  bool pass = true;
  std::int64_t runtime_ms = 0;
};

struct Report {
  std::vector<ReportRow> rows;

  bool all_pass() const;
  void append(const Report& other);
};

// runtime_ms stays 0 unless config.timing is set, so reports compare
// byte for byte across runs.
Report run_experiment(const ExperimentConfig& config);

// Example name first, then a file path. Throws std::invalid_argument when
// neither resolves.
Market load_market(const std::string& source);

enum class ReportFormat { Table, Csv };

std::string emit_report(const Report& report, ReportFormat format);
std::string csv_field(const std::string& s);

}  // namespace matchlab
