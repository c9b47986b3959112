// Acceptance gate: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "norden/checks.hpp"
#include "norden/connections.hpp"
#include "norden/forge.hpp"
#include "norden/model_io.hpp"
#include "norden/report.hpp"

namespace fs = std::filesystem;
using namespace norden;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Corpus {
  std::vector<Model> models;
  std::vector<VerificationReport> reports;
  std::vector<ManifestEntry> manifest;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool is_w3(const VerificationReport& r) { return r.measurement("w3") == 1.0; }
bool is_kahler(const VerificationReport& r) { return r.measurement("kahler") == 1.0; }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Every report in `reports` that `select` accepts must pass all `ids`.
Outcome require_pass(const Corpus& c, const std::vector<std::string>& ids,
                     const std::function<bool(const VerificationReport&)>& select) {
  Outcome out;
  int seen = 0;
  for (const auto& r : c.reports) {
    if (!select(r)) continue;
    ++seen;
    for (const auto& id : ids) {
      const CheckRecord* rec = r.find(id);
      if (!rec || rec->verdict != Verdict::pass) {
        out.pass = false;
        out.detail += r.instance_name + ":" + id + "=" + (rec ? to_string(rec->verdict) : "missing") + " ";
      }
    }
  }
  if (seen == 0) {
    out.pass = false;
    out.detail += "no instances selected ";
  }
  out.detail = std::to_string(seen) + " instances; " + (out.detail.empty() ? "all pass" : out.detail);
  return out;
}

Outcome criterion_structure_axioms() {
  Outcome out;
  int count = 0;
  double worst = 0.0;
  for (int n : {2, 3, 4}) {
    for (std::uint64_t seed = 1; seed <= 18; ++seed) {
      const Model m = random_norden(n, 5000 + 100 * static_cast<std::uint64_t>(n) + seed);
      const ValidationOutcome v = validate(m);
      ++count;
      worst = std::max({worst, v.j_squared_residual, v.anti_isometry_residual});
      const Signature want{n, n, 0};
      if (!v.ok() || v.j_squared_residual > 1e-9 || v.anti_isometry_residual > 1e-9 ||
          !(v.metric_signature == want) || !(v.assoc_signature == want)) {
        out.pass = false;
        out.detail += m.name + " ";
      }
    }
  }
  out.detail = std::to_string(count) + " instances, worst residual " + fmt("%.2e", worst) +
               (out.pass ? "" : "; failing: " + out.detail);
  return out;
}

Outcome criterion_f_symmetries(const Corpus& c) {
  Outcome out = require_pass(c, {"eq_2_3_swap", "eq_2_3_chain", "eq_2_3_jj", "eq_2_3_shift"},
                             [](const VerificationReport&) { return true; });
  for (const auto& r : c.reports)
    for (const char* id : {"eq_2_3_swap", "eq_2_3_chain", "eq_2_3_jj", "eq_2_3_shift"})
      if (const auto* rec = r.find(id); rec && rec->residual > 1e-9) {
        out.pass = false;
        out.detail += " " + r.instance_name + ":" + id + " residual " + fmt("%.2e", rec->residual);
      }
  return out;
}

Outcome criterion_class_equivalence(const Corpus& c) {
  Outcome out = require_pass(c, {"class_equivalence"}, [](const VerificationReport&) { return true; });
  int pos = 0, neg = 0;
  for (const auto& r : c.reports) (is_w3(r) ? pos : neg)++;
  if (pos < 5 || neg < 5) out.pass = false;
  out.detail += "; W3 positives " + std::to_string(pos) + ", negatives " + std::to_string(neg);
  return out;
}

Outcome criterion_dual_norm(const Corpus& c) {
  Outcome out = require_pass(c, {"eq_2_10"}, is_w3);
  int gaps = 0;
  for (const auto& r : c.reports)
    if (!is_w3(r))
      if (const auto* rec = r.find("eq_2_10_gap"); rec && rec->verdict == Verdict::pass) ++gaps;
  if (gaps < 1) out.pass = false;
  out.detail += "; strict disagreement on " + std::to_string(gaps) + " non-W3 instances";
  return out;
}

Outcome criterion_canonical(const Corpus& c) {
  return require_pass(c, {"canonical_paths", "canonical_natural", "eq_4_4", "eq_4_5", "thm_4_2"}, is_w3);
}

Outcome criterion_scalar_curvature(const Corpus& c) {
  Outcome out = require_pass(c, {"thm_4_4"}, is_w3);
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& r : c.reports) {
    const double k = r.measurement("scalar_gap_coefficient");
    if (std::isnan(k)) continue;
    lo = std::min(lo, k);
    hi = std::max(hi, k);
  }
  out.detail += "; measured (tau'-tau)/|nabla J|^2 in [" + fmt("%.9f", lo) + ", " + fmt("%.9f", hi) + "]";
  int iso = 0;
  for (const auto& r : c.reports) {
    if (r.measurement("isotropic") != 1.0) continue;
    ++iso;
    const auto* rec = r.find("cor_4_5");
    if (!rec || rec->verdict != Verdict::pass) {
      out.pass = false;
      out.detail += "; " + r.instance_name + ":cor_4_5 not pass";
    }
  }
  out.detail += "; isotropic instances " + std::to_string(iso);
  return out;
}

Outcome criterion_curvature_routes(const Corpus& c) {
  Outcome a = require_pass(c, {"eq_4_16"}, [](const VerificationReport&) { return true; });
  Outcome b = require_pass(c, {"eq_4_17"}, is_w3);
  return {a.pass && b.pass, "deformation route: " + a.detail + "; Ricci route on W3: " + b.detail};
}

Outcome criterion_bianchi(const Corpus& c) {
  return require_pass(c, {"lemma_5_1", "lemma_5_1_verdict"}, is_w3);
}

Outcome criterion_mean_connection(const Corpus& c) {
  return require_pass(c, {"mean_connection", "kt_skew"}, is_w3);
}

Outcome criterion_parallel_torsion(const Corpus& c) {
  Outcome a = require_pass(c, {"prop_6_1"}, [](const VerificationReport&) { return true; });
  Outcome b = require_pass(c, {"eq_6_10", "eq_6_11"}, is_w3);
  Outcome out{a.pass && b.pass, "coincidence: " + a.detail + "; contractions: " + b.detail};
  int found = 0;
  for (const auto& r : c.reports) {
    if (r.measurement("isotropic") == 1.0) continue;
    const auto* rec = r.find("thm_6_3");
    if (!rec || rec->verdict == Verdict::not_applicable) continue;
    ++found;
    for (const char* id : {"thm_6_3", "thm_6_4"}) {
      const auto* t = r.find(id);
      if (!t || t->verdict != Verdict::pass) {
        out.pass = false;
        out.detail += "; " + r.instance_name + ":" + id + " " + (t ? to_string(t->verdict) : "missing");
      }
    }
  }
  for (const auto& e : c.manifest)
    if (e.recipe.kind == InstanceKind::parallel_torsion_search && e.status != "ok")
      out.detail += "; " + e.recipe.name + " not found, best residual " + fmt("%.3e", e.residual);
  out.detail += "; parallel-torsion instances verified " + std::to_string(found);
  return out;
}

template <class Fn>
bool throws_with(Fn&& fn, const std::string& fragment) {
  try {
    fn();
  } catch (const std::exception& e) {
    return std::string(e.what()).find(fragment) != std::string::npos;
  }
  return false;
}

Outcome criterion_negative_controls(const Corpus& c) {
  Outcome out;
  std::vector<std::string> notes;
  const Model base = c.models.front();  // any valid instance

  // Wrong signature: positive definite metric.
  Model broken = base;
  broken.structure = NordenStructure::from_components(DenseTensor::generate(base.structure.dim(), lower_slots(2),
                                                          [](int i, int j) { return i == j ? 1.0 : 0.0; }),
                                                      base.structure.J);
  const bool sig = throws_with([&] { verify(broken); }, "signature must be (n,n)");
  notes.push_back(std::string("wrong signature ") + (sig ? "rejected" : "ACCEPTED"));

  // Non-natural Q: Levi-Civita plus a deformation symmetric in its last pair.
  const Model* qk = nullptr;
  for (std::size_t i = 0; i < c.reports.size(); ++i)
    if (is_w3(c.reports[i]) && !is_kahler(c.reports[i])) qk = &c.models[i];
  bool non_natural = false;
  if (qk) {
    const PointData pd = point_data(*qk);
    const ConnectionCoeffs lc = levi_civita(pd);
    const DenseTensor dJ = nabla_J(lc, pd);
    const DenseTensor F = fundamental_F(dJ, pd.structure);
    const int d = pd.dim();
    const DenseTensor bad = DenseTensor::generate(d, lower_slots(3), [](int i, int j, int k) {
      return 0.1 * (i == 0 ? 1.0 : 0.0) * (j == k ? 1.0 : 0.0);
    });
    const NaturalityResult nr = naturality_check(deform(lc, pd, bad), pd, F);
    non_natural = !nr.natural && nr.q_skew_last_pair > nr.tolerance;
  }
  notes.push_back(std::string("non-natural Q ") + (non_natural ? "flagged" : "NOT FLAGGED"));

  // Non-antisymmetric T.
  const int d = base.structure.dim();
  const DenseTensor T = DenseTensor::generate(d, lower_slots(3), [](int i, int j, int) { return i == j ? 1.0 : 0.0; });
  const bool skew = throws_with([&] { torsion_projections(T, base.structure.J); }, "antisymmetric");
  notes.push_back(std::string("non-antisymmetric T ") + (skew ? "rejected" : "ACCEPTED"));

  // Quasi-Kaehler formula outside W3.
  bool path = false;
  for (std::size_t i = 0; i < c.reports.size(); ++i) {
    if (is_w3(c.reports[i])) continue;
    const PointData pd = point_data(c.models[i]);
    const ConnectionCoeffs lc = levi_civita(pd);
    path = throws_with([&] { canonical_connection(pd, lc, nabla_J(lc, pd), CanonicalPath::quasi_kahler); },
                       "requires class W");
    break;
  }
  notes.push_back(std::string("quasi-Kaehler path outside W3 ") + (path ? "rejected" : "ACCEPTED"));

  out.pass = sig && non_natural && skew && path;
  for (std::size_t i = 0; i < notes.size(); ++i) out.detail += (i ? ", " : "") + notes[i];
  return out;
}

Outcome criterion_determinism(const fs::path& corpus_dir, const Corpus& c) {
  Outcome out;
  const fs::path tmp = fs::temp_directory_path() / "norden_acceptance_regen";
  fs::remove_all(tmp);
  fs::create_directories(tmp);
  std::vector<InstanceRecipe> recipes;
  for (const auto& e : c.manifest) recipes.push_back(e.recipe);
  const auto entries = build_corpus(tmp, recipes);
  int same = 0, differ = 0;
  for (const auto& e : entries) {
    const fs::path a = corpus_dir / (e.recipe.name + ".json"), b = tmp / (e.recipe.name + ".json");
    if (fs::exists(a) != fs::exists(b) || (fs::exists(a) && read_file(a) != read_file(b))) {
      ++differ;
      out.detail += e.recipe.name + " differs; ";
    } else {
      ++same;
    }
  }
  if (read_file(corpus_dir / "MANIFEST") != read_file(tmp / "MANIFEST")) {
    ++differ;
    out.detail += "MANIFEST differs; ";
  }
  const std::string ja = corpus_to_json(run_corpus(corpus_dir, 1.0));
  const std::string jb = corpus_to_json(run_corpus(tmp, 1.0));
  const bool reports_equal = ja == jb;
  fs::remove_all(tmp);
  out.pass = differ == 0 && reports_equal;
  out.detail += std::to_string(same) + " manifest entries reproduced, " + std::to_string(differ) + " differ; JSON reports " +
                (reports_equal ? "identical" : "DIFFER");
  return out;
}

}  // namespace

int main() {
  const fs::path corpus_dir = fs::path(NORDEN_SOURCE_DIR) / "corpus";
  Corpus c;
  c.manifest = read_manifest(corpus_dir / "MANIFEST");

  const auto t0 = std::chrono::steady_clock::now();
  double slowest = 0.0;
  for (const auto& e : c.manifest) {
    if (e.status != "ok") continue;
    c.models.push_back(load_model(corpus_dir / (e.recipe.name + ".json")));
    const auto s = std::chrono::steady_clock::now();
    c.reports.push_back(verify(c.models.back()));
    slowest = std::max(slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() - s).count());
  }
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"structure axioms on generated instances", [] { return criterion_structure_axioms(); }},
      {"F symmetry suite", [&] { return criterion_f_symmetries(c); }},
      {"class equivalence", [&] { return criterion_class_equivalence(c); }},
      {"dual norm formula", [&] { return criterion_dual_norm(c); }},
      {"canonical connection", [&] { return criterion_canonical(c); }},
      {"scalar curvature gap", [&] { return criterion_scalar_curvature(c); }},
      {"curvature cross-check", [&] { return criterion_curvature_routes(c); }},
      {"torsion Bianchi equivalence", [&] { return criterion_bianchi(c); }},
      {"mean connection", [&] { return criterion_mean_connection(c); }},
      {"parallel torsion chain", [&] { return criterion_parallel_torsion(c); }},
      {"negative controls", [&] { return criterion_negative_controls(c); }},
      {"determinism", [&] { return criterion_determinism(corpus_dir, c); }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %2zu: %s  %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail.c_str());
  }
  std::printf("timing: %zu instances verified in %.3f s, slowest suite %.3f s\n", c.reports.size(), total, slowest);
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
