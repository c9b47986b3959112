#pragma once

#include <string>
#include <vector>

#include "norden/checks.hpp"
#include "norden/forge.hpp"

namespace norden {

/// JSON form of one report; full double precision, stable key order.
std::string report_to_json(const VerificationReport& report);
/// Throws ModelFormatError (with a field path) on malformed input.
VerificationReport report_from_json(const std::string& text);

/// Human-readable table; residuals and tolerances with 3 significant digits.
std::string report_to_text(const VerificationReport& report);

/// Searches that produced no instance are carried along so the corpus report
/// surfaces them explicitly.
struct MissingInstance {
  std::string name;
  std::string kind;
  int dim = 0;
  std::uint64_t seed = 0;
  double best_residual = 0.0;
  std::string message;

  friend bool operator==(const MissingInstance&, const MissingInstance&) = default;
};

struct CorpusReport {
  std::string toolkit_version = kToolkitVersion;
  std::vector<VerificationReport> reports;  // ordered by instance name
  std::vector<MissingInstance> missing;
  std::vector<std::string> errors;  // "<file>: <message>" for instances that failed to load or validate

  ReportSummary totals() const;
  int exit_code() const noexcept;

  friend bool operator==(const CorpusReport&, const CorpusReport&) = default;
};

/// Verifies every *.json model under `dir`; MANIFEST rows with status
/// not_found become MissingInstance entries.
CorpusReport run_corpus(const std::filesystem::path& dir, double tolerance_scale);

std::string corpus_to_json(const CorpusReport& report);
CorpusReport corpus_from_json(const std::string& text);
std::string corpus_to_text(const CorpusReport& report);

}  // namespace norden
