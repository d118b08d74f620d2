#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace jtrace {

inline constexpr double kDefaultRelTol = 1e-9;

enum class Verdict { pass, fail, precondition_failed };

std::string_view to_string(Verdict v);
Verdict verdict_from_string(std::string_view s);

/// Outcome of one inequality evaluation: lhs <= rhs is expected.
struct InequalityReport {
  std::string id;
  /// Human-readable name of the statement being checked.
  std::string reference;
  std::uint64_t seed = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  /// rhs - lhs.
  double gap = 0.0;
  double tol = kDefaultRelTol;
  Verdict verdict = Verdict::precondition_failed;
  /// Every hypothesis of a proven statement was verified on this instance,
  /// so a failing verdict indicates a bug rather than a mathematical event.
  bool guaranteed = false;
  /// Violated precondition, or a note from the verifier.
  std::string detail;
  nlohmann::json metadata = nlohmann::json::object();

  [[nodiscard]] bool anomaly() const { return guaranteed && verdict == Verdict::fail; }
  /// Scale in the pass criterion gap >= -tol * scale.
  [[nodiscard]] double scale() const;
};

/// Fills gap and verdict: pass iff rhs - lhs >= -tol * (1 + |lhs| + |rhs|).
InequalityReport evaluated_report(std::string id, std::string reference, double lhs, double rhs,
                                  double tol, bool guaranteed);

/// A report that claims neither pass nor fail.
InequalityReport precondition_report(std::string id, std::string reference, std::string detail,
                                     double tol = kDefaultRelTol);

void to_json(nlohmann::json& j, const InequalityReport& r);
void from_json(const nlohmann::json& j, InequalityReport& r);

/// Column order shared by csv_header and csv_row.
std::string csv_header();
std::string csv_row(const InequalityReport& r);

}  // namespace jtrace
