#include "jtrace/report.hpp"

#include <cmath>
#include <sstream>

#include "jtrace/errors.hpp"

namespace jtrace {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::precondition_failed:
      return "precondition-failed";
  }
  return "precondition-failed";
}

Verdict verdict_from_string(std::string_view s) {
  if (s == "pass") return Verdict::pass;
  if (s == "fail") return Verdict::fail;
  if (s == "precondition-failed") return Verdict::precondition_failed;
  throw ConfigError("unknown verdict '" + std::string(s) + "'");
}

double InequalityReport::scale() const { return 1.0 + std::abs(lhs) + std::abs(rhs); }

InequalityReport evaluated_report(std::string id, std::string reference, double lhs, double rhs,
                                  double tol, bool guaranteed) {
  InequalityReport r;
  r.id = std::move(id);
  r.reference = std::move(reference);
  r.lhs = lhs;
  r.rhs = rhs;
  r.gap = rhs - lhs;
  r.tol = tol;
  r.guaranteed = guaranteed;
  r.verdict = r.gap >= -tol * r.scale() ? Verdict::pass : Verdict::fail;
  return r;
}

InequalityReport precondition_report(std::string id, std::string reference, std::string detail,
                                     double tol) {
  InequalityReport r;
  r.id = std::move(id);
  r.reference = std::move(reference);
  r.detail = std::move(detail);
  r.tol = tol;
  r.verdict = Verdict::precondition_failed;
  r.lhs = r.rhs = r.gap = std::nan("");
  return r;
}

namespace {

nlohmann::json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

double number_from(const nlohmann::json& j) {
  return j.is_null() ? std::nan("") : j.get<double>();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_number(double v) {
  if (!std::isfinite(v)) return "";
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

void to_json(nlohmann::json& j, const InequalityReport& r) {
  j = nlohmann::json{{"inequality-id", r.id},
                     {"paper-ref", r.reference},
                     {"seed", r.seed},
                     {"lhs", number_or_null(r.lhs)},
                     {"rhs", number_or_null(r.rhs)},
                     {"gap", number_or_null(r.gap)},
                     {"tol", r.tol},
                     {"verdict", std::string(to_string(r.verdict))}};
  if (r.guaranteed) j["guaranteed"] = true;
  if (!r.detail.empty()) j["detail"] = r.detail;
  if (!r.metadata.empty()) j["metadata"] = r.metadata;
}

void from_json(const nlohmann::json& j, InequalityReport& r) {
  j.at("inequality-id").get_to(r.id);
  j.at("paper-ref").get_to(r.reference);
  j.at("seed").get_to(r.seed);
  r.lhs = number_from(j.at("lhs"));
  r.rhs = number_from(j.at("rhs"));
  r.gap = number_from(j.at("gap"));
  j.at("tol").get_to(r.tol);
  r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  r.guaranteed = j.value("guaranteed", false);
  r.detail = j.value("detail", std::string());
  r.metadata = j.value("metadata", nlohmann::json::object());
}

std::string csv_header() { return "inequality-id,paper-ref,seed,lhs,rhs,gap,tol,verdict"; }

std::string csv_row(const InequalityReport& r) {
  std::ostringstream os;
  os << csv_escape(r.id) << ',' << csv_escape(r.reference) << ',' << r.seed << ','
     << csv_number(r.lhs) << ',' << csv_number(r.rhs) << ',' << csv_number(r.gap) << ','
     << csv_number(r.tol) << ',' << to_string(r.verdict);
  return os.str();
}

}  // namespace jtrace
