#pragma once

#include <string>
#include <utility>
#include <vector>

#include "norden/model.hpp"

namespace norden {

inline constexpr const char* kToolkitVersion = "0.1.0";

enum class Verdict { pass, fail, not_applicable };
std::string to_string(Verdict verdict);
Verdict verdict_from_string(const std::string& text);

struct CheckRecord {
  std::string check_id;
  std::string paper_ref;
  double residual = 0.0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::not_applicable;
  std::string note;

  friend bool operator==(const CheckRecord&, const CheckRecord&) = default;
};

struct ReportSummary {
  int pass = 0;
  int fail = 0;
  int not_applicable = 0;

  int total() const noexcept { return pass + fail + not_applicable; }
  friend bool operator==(const ReportSummary&, const ReportSummary&) = default;
};

struct VerificationReport {
  std::string instance_name;
  std::string toolkit_version = kToolkitVersion;
  Provenance provenance;
  std::vector<std::string> warnings;
  std::vector<std::pair<std::string, double>> measurements;
  std::vector<CheckRecord> checks;
  ReportSummary summary;

  const CheckRecord* find(const std::string& check_id) const;
  double measurement(const std::string& name) const;  // NaN when absent
  int exit_code() const noexcept { return summary.fail > 0 ? 1 : 0; }

  friend bool operator==(const VerificationReport&, const VerificationReport&) = default;
};

/// Static description of one registered check.
struct CheckInfo {
  std::string id;
  std::string paper_ref;
  std::string description;
  double base_tolerance = 0.0;
  bool uses_finite_differences = false;  // chart mode widens the base to kChartTolerance
};

inline constexpr double kChartTolerance = 1e-7;

const std::vector<CheckInfo>& check_catalog();
bool is_known_check(const std::string& id);

/// NORDEN_TOLERANCE_SCALE, default 1. Throws on an unparsable or non-positive value.
double tolerance_scale_from_env();

/// Runs the registered checks (all of them, or the listed ids in catalog order).
/// Throws ValidationError listing the violations when the model is not a valid
/// Norden structure, and Error for unknown check ids.
VerificationReport verify(const Model& model, const std::vector<std::string>& only = {});
VerificationReport verify(const Model& model, const std::vector<std::string>& only, double tolerance_scale);

void recount(VerificationReport& report);

}  // namespace norden
