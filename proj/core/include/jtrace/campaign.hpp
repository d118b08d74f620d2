#pragma once

// Config-driven campaigns: expand suites into cells, evaluate them on a
// worker pool and stream one report row per cell in cell order.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "jtrace/monotonicity.hpp"
#include "jtrace/report.hpp"

namespace jtrace {

enum class OutputFormat { json, csv };

struct CampaignConfig {
  std::vector<std::string> suites;
  std::uint64_t seed_base = 0;
  std::uint64_t seed_count = 1;
  Eigen::Index dim_min = 2;
  Eigen::Index dim_max = 4;
  /// Catalog names; empty selects each suite's defaults.
  std::vector<std::string> functions;
  double tol = kDefaultRelTol;
  /// Empty writes rows to the caller's stream only.
  std::string output_path;
  OutputFormat format = OutputFormat::json;
  unsigned workers = 1;
  std::vector<std::size_t> lp_sizes = {101};
  std::uint64_t rst_trials = 10000;
};

/// Throws ConfigError on unknown keys, unknown suites or functions, empty
/// suite lists and out-of-range counts.
CampaignConfig parse_config(const nlohmann::json& j);
void validate(const CampaignConfig& config);

/// "a..b" or a single integer.
std::pair<Eigen::Index, Eigen::Index> parse_dim_range(const std::string& text);

OutputFormat parse_format(const std::string& text);

/// One unit of work. Axes a suite does not use are collapsed to one value.
struct Cell {
  std::string suite;
  std::uint64_t seed = 0;
  Eigen::Index dim = 0;
  std::string function;
  std::size_t lp_size = 0;
};

std::vector<Cell> expand_cells(const CampaignConfig& config);

/// Evaluates one cell. Generator and verifier errors become
/// precondition-failed rows carrying the message.
InequalityReport run_cell(const Cell& cell, const CampaignConfig& config);

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitAnomaly = 2;
inline constexpr int kExitCandidate = 3;
inline constexpr int kExitConfig = 4;

struct CampaignSummary {
  std::size_t rows = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t precondition_failed = 0;
  std::size_t anomalies = 0;
  std::size_t candidates = 0;
  /// anomaly > candidate > ordinary failure > pass.
  int exit_code = kExitPass;
  nlohmann::json extras = nlohmann::json::object();
};

nlohmann::json to_json(const CampaignSummary& s);

/// Runs every cell, writing rows to `rows` (and to config.output_path when
/// set, plus a summary next to it). Anomalies dump their instance manifest
/// to `diagnostics`.
CampaignSummary run_campaign(const CampaignConfig& config, std::ostream& rows,
                             std::ostream& diagnostics);

std::vector<std::string> suite_ids();
bool is_suite(const std::string& id);
/// Statement, preconditions and row schema of a suite. Throws ConfigError
/// for an unknown id.
std::string describe(const std::string& id);

}  // namespace jtrace
