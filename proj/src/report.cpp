#include "norden/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include "json.hpp"

#include "norden/model_io.hpp"

namespace norden {

using nlohmann::ordered_json;

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v == 0.0 ? 0.0 : v);
  return buf;
}

ordered_json report_node(const VerificationReport& r) {
  ordered_json j;
  j["instance_name"] = r.instance_name;
  j["toolkit_version"] = r.toolkit_version;
  ordered_json prov = ordered_json::object();
  for (const auto& [k, v] : r.provenance) prov[k] = v;
  j["provenance"] = prov;
  j["warnings"] = r.warnings;
  ordered_json meas = ordered_json::object();
  for (const auto& [k, v] : r.measurements) meas[k] = v;
  j["measurements"] = meas;
  ordered_json checks = ordered_json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"check_id", c.check_id},
                      {"paper_ref", c.paper_ref},
                      {"residual", c.residual},
                      {"tolerance", c.tolerance},
                      {"verdict", to_string(c.verdict)},
                      {"note", c.note}});
  }
  j["checks"] = checks;
  j["summary"] = {{"pass", r.summary.pass},
                  {"fail", r.summary.fail},
                  {"not_applicable", r.summary.not_applicable},
                  {"total", r.summary.total()}};
  return j;
}

template <class T>
T field(const ordered_json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) throw ModelFormatError(path + "/" + key, "missing field");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ModelFormatError(path + "/" + key, "wrong type");
  }
}

VerificationReport report_from_node(const ordered_json& j, const std::string& path) {
  VerificationReport r;
  r.instance_name = field<std::string>(j, "instance_name", path);
  r.toolkit_version = field<std::string>(j, "toolkit_version", path);
  const auto provenance = field<ordered_json>(j, "provenance", path);
  for (const auto& [k, v] : provenance.items()) {
    if (!v.is_string()) throw ModelFormatError(path + "/provenance/" + k, "expected a string");
    r.provenance.emplace_back(k, v.get<std::string>());
  }
  r.warnings = field<std::vector<std::string>>(j, "warnings", path);
  const auto measurements = field<ordered_json>(j, "measurements", path);
  for (const auto& [k, v] : measurements.items()) {
    if (!v.is_number()) throw ModelFormatError(path + "/measurements/" + k, "expected a number");
    r.measurements.emplace_back(k, v.get<double>());
  }
  const auto checks = field<ordered_json>(j, "checks", path);
  if (!checks.is_array()) throw ModelFormatError(path + "/checks", "expected an array");
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const std::string p = path + "/checks/" + std::to_string(i);
    CheckRecord c;
    c.check_id = field<std::string>(checks[i], "check_id", p);
    c.paper_ref = field<std::string>(checks[i], "paper_ref", p);
    c.residual = field<double>(checks[i], "residual", p);
    c.tolerance = field<double>(checks[i], "tolerance", p);
    try {
      c.verdict = verdict_from_string(field<std::string>(checks[i], "verdict", p));
    } catch (const ModelFormatError&) {
      throw;
    } catch (const Error& e) {
      throw ModelFormatError(p + "/verdict", e.what());
    }
    c.note = field<std::string>(checks[i], "note", p);
    r.checks.push_back(std::move(c));
  }
  const auto summary = field<ordered_json>(j, "summary", path);
  r.summary.pass = field<int>(summary, "pass", path + "/summary");
  r.summary.fail = field<int>(summary, "fail", path + "/summary");
  r.summary.not_applicable = field<int>(summary, "not_applicable", path + "/summary");
  return r;
}

ordered_json parse(const std::string& text) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelFormatError("byte " + std::to_string(e.byte), "malformed JSON");
  }
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

std::string report_to_json(const VerificationReport& r) { return report_node(r).dump(2) + "\n"; }

VerificationReport report_from_json(const std::string& text) { return report_from_node(parse(text), ""); }

std::string report_to_text(const VerificationReport& r) {
  std::string out = "instance " + r.instance_name + " (toolkit " + r.toolkit_version + ")\n";
  if (!r.provenance.empty()) {
    out += "provenance:";
    for (const auto& [k, v] : r.provenance) out += " " + k + "=" + v;
    out += "\n";
  }
  for (const auto& w : r.warnings) out += "warning: " + w + "\n";
  if (!r.measurements.empty()) {
    out += "measurements:\n";
    for (const auto& [k, v] : r.measurements) out += "  " + pad(k, 30) + sci(v) + "\n";
  }
  std::size_t width = 8;
  for (const auto& c : r.checks) width = std::max(width, c.check_id.size());
  out += "checks:\n  " + pad("check_id", width + 2) + pad("verdict", 16) + pad("residual", 11) + pad("tolerance", 11) +
         "paper_ref\n";
  for (const auto& c : r.checks) {
    const bool na = c.verdict == Verdict::not_applicable;
    out += "  " + pad(c.check_id, width + 2) + pad(to_string(c.verdict), 16) + pad(na ? "-" : sci(c.residual), 11) +
           pad(sci(c.tolerance), 11) + c.paper_ref;
    if (!c.note.empty() && (c.verdict != Verdict::pass)) out += "  [" + c.note + "]";
    out += "\n";
  }
  out += "summary: " + std::to_string(r.summary.pass) + " pass, " + std::to_string(r.summary.fail) + " fail, " +
         std::to_string(r.summary.not_applicable) + " not_applicable (" + std::to_string(r.summary.total()) +
         " checks)\n";
  return out;
}

ReportSummary CorpusReport::totals() const {
  ReportSummary s;
  for (const auto& r : reports) {
    s.pass += r.summary.pass;
    s.fail += r.summary.fail;
    s.not_applicable += r.summary.not_applicable;
  }
  return s;
}

int CorpusReport::exit_code() const noexcept {
  if (!errors.empty()) return 2;
  for (const auto& r : reports)
    if (r.summary.fail > 0) return 1;
  return 0;
}

CorpusReport run_corpus(const std::filesystem::path& dir, double tolerance_scale) {
  if (!std::filesystem::is_directory(dir)) throw Error("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());

  CorpusReport out;
  for (const auto& f : files) {
    try {
      out.reports.push_back(verify(load_model(f), {}, tolerance_scale));
    } catch (const Error& e) {
      out.errors.push_back(f.filename().string() + ": " + e.what());
    }
  }
  std::sort(out.reports.begin(), out.reports.end(),
            [](const auto& a, const auto& b) { return a.instance_name < b.instance_name; });

  const auto manifest = dir / "MANIFEST";
  if (std::filesystem::exists(manifest)) {
    for (const auto& e : read_manifest(manifest)) {
      if (e.status == "ok") continue;
      out.missing.push_back({e.recipe.name, to_string(e.recipe.kind), e.recipe.dim, e.recipe.seed, e.residual,
                             "not found, best residual " + sci(e.residual)});
    }
  }
  return out;
}

std::string corpus_to_json(const CorpusReport& c) {
  ordered_json j;
  j["toolkit_version"] = c.toolkit_version;
  ordered_json reports = ordered_json::array();
  for (const auto& r : c.reports) reports.push_back(report_node(r));
  j["instances"] = reports;
  ordered_json missing = ordered_json::array();
  for (const auto& m : c.missing)
    missing.push_back({{"name", m.name},
                       {"kind", m.kind},
                       {"dim", m.dim},
                       {"seed", m.seed},
                       {"best_residual", m.best_residual},
                       {"message", m.message}});
  j["not_found"] = missing;
  j["errors"] = c.errors;
  const ReportSummary t = c.totals();
  j["summary"] = {{"instances", c.reports.size()},
                  {"pass", t.pass},
                  {"fail", t.fail},
                  {"not_applicable", t.not_applicable},
                  {"not_found", c.missing.size()},
                  {"errors", c.errors.size()}};
  return j.dump(2) + "\n";
}

CorpusReport corpus_from_json(const std::string& text) {
  const ordered_json j = parse(text);
  CorpusReport c;
  c.toolkit_version = field<std::string>(j, "toolkit_version", "");
  const auto reports = field<ordered_json>(j, "instances", "");
  for (std::size_t i = 0; i < reports.size(); ++i)
    c.reports.push_back(report_from_node(reports[i], "/instances/" + std::to_string(i)));
  const auto missing = field<ordered_json>(j, "not_found", "");
  for (std::size_t i = 0; i < missing.size(); ++i) {
    const std::string p = "/not_found/" + std::to_string(i);
    c.missing.push_back({field<std::string>(missing[i], "name", p), field<std::string>(missing[i], "kind", p),
                         field<int>(missing[i], "dim", p), field<std::uint64_t>(missing[i], "seed", p),
                         field<double>(missing[i], "best_residual", p), field<std::string>(missing[i], "message", p)});
  }
  c.errors = field<std::vector<std::string>>(j, "errors", "");
  return c;
}

std::string corpus_to_text(const CorpusReport& c) {
  std::string out;
  std::size_t width = 8;
  for (const auto& r : c.reports) width = std::max(width, r.instance_name.size());
  out += pad("instance", width + 2) + pad("pass", 6) + pad("fail", 6) + pad("n/a", 6) + "failing checks\n";
  for (const auto& r : c.reports) {
    std::string failing;
    for (const auto& ch : r.checks)
      if (ch.verdict == Verdict::fail) failing += (failing.empty() ? "" : ",") + ch.check_id;
    out += pad(r.instance_name, width + 2) + pad(std::to_string(r.summary.pass), 6) +
           pad(std::to_string(r.summary.fail), 6) + pad(std::to_string(r.summary.not_applicable), 6) + failing + "\n";
  }
  for (const auto& m : c.missing) out += m.name + ": " + m.message + "\n";
  for (const auto& e : c.errors) out += "error: " + e + "\n";
  const ReportSummary t = c.totals();
  out += "total: " + std::to_string(c.reports.size()) + " instances, " + std::to_string(t.pass) + " pass, " +
         std::to_string(t.fail) + " fail, " + std::to_string(t.not_applicable) + " not_applicable, " +
         std::to_string(c.missing.size()) + " not found\n";
  return out;
}

}  // namespace norden
