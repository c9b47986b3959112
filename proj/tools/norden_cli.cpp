// norden: verify Norden-structure identities on concrete instances.
//
// Exit codes: 0 all checks pass, 1 some check fails, 2 usage, I/O or an
// input that is not a valid Norden structure.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "norden/checks.hpp"
#include "norden/forge.hpp"
#include "norden/model_io.hpp"
#include "norden/report.hpp"

namespace fs = std::filesystem;
using namespace norden;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

std::vector<std::string> split_ids(const std::string& list) {
  std::vector<std::string> ids;
  std::stringstream ss(list);
  std::string id;
  while (std::getline(ss, id, ','))
    if (!id.empty()) ids.push_back(id);
  return ids;
}

int cmd_validate(const std::string& file) {
  const Model m = load_model(file);
  const ValidationOutcome vo = validate(m);
  const auto& sg = vo.metric_signature;
  const auto& sa = vo.assoc_signature;
  std::cout << m.name << ": signature g (" << sg.positive << "," << sg.negative << "), g~ (" << sa.positive << ","
            << sa.negative << ")\n";
  if (vo.ok()) {
    std::cout << "valid\n";
    return 0;
  }
  for (const auto& v : vo.violations) std::cout << "violation: " << v.message << " (residual " << v.residual << ")\n";
  return 1;
}

int cmd_verify(const std::string& file, const std::string& checks, const std::string& format, const std::string& json_out) {
  const Model m = load_model(file);
  VerificationReport r;
  try {
    r = verify(m, split_ids(checks));
  } catch (const ValidationError& e) {
    std::cerr << "error: " << file << ": " << e.what() << "\n";
    return 2;
  }
  std::cout << (format == "json" ? report_to_json(r) : report_to_text(r));
  if (!json_out.empty()) write_file(json_out, report_to_json(r));
  return r.exit_code();
}

int cmd_generate(const std::string& kind, int dim, std::uint64_t seed, int budget, std::string name, const std::string& out) {
  InstanceRecipe rec{std::move(name), instance_kind_from_string(kind), dim, seed, budget};
  if (rec.name.empty()) rec.name = fs::path(out).stem().string();
  const SearchOutcome o = generate(rec);
  if (!o.model) {
    std::cout << rec.name << ": " << o.message << "\n";
    return 1;
  }
  save_model(*o.model, out);
  std::cout << rec.name << ": written to " << out << "\n";
  return 0;
}

int cmd_corpus_run(const std::string& dir, const std::string& format, const std::string& json_out) {
  const CorpusReport c = run_corpus(dir, tolerance_scale_from_env());
  std::cout << (format == "json" ? corpus_to_json(c) : corpus_to_text(c));
  if (!json_out.empty()) write_file(json_out, corpus_to_json(c));
  return c.exit_code();
}

int cmd_corpus_build(const std::string& dir, bool from_manifest) {
  std::vector<InstanceRecipe> recipes;
  if (from_manifest) {
    for (const auto& e : read_manifest(fs::path(dir) / "MANIFEST")) recipes.push_back(e.recipe);
  } else {
    recipes = standard_corpus();
  }
  for (const auto& e : build_corpus(dir, recipes))
    std::cout << e.recipe.name << " " << e.status << "\n";
  return 0;
}

int cmd_report(const std::string& file, const std::string& format) {
  const std::string text = read_file(file);
  // Corpus reports carry an "instances" array; single reports an "instance_name".
  if (text.find("\"instances\"") != std::string::npos) {
    const CorpusReport c = corpus_from_json(text);
    std::cout << (format == "json" ? corpus_to_json(c) : corpus_to_text(c));
    return c.exit_code();
  }
  const VerificationReport r = report_from_json(text);
  std::cout << (format == "json" ? report_to_json(r) : report_to_text(r));
  return r.exit_code();
}

int cmd_checks(const std::string& format) {
  if (format == "markdown") {
    std::cout << "| check_id | paper_ref | description | base tolerance |\n|---|---|---|---|\n";
    for (const auto& c : check_catalog()) {
      char tol[32];
      std::snprintf(tol, sizeof tol, "%.0e", c.base_tolerance);
      std::cout << "| `" << c.id << "` | " << c.paper_ref << " | " << c.description << " | "
                << (c.base_tolerance == 0.0 ? "exact" : tol) << (c.uses_finite_differences ? " (chart: 1e-7)" : "")
                << " |\n";
    }
    return 0;
  }
  for (const auto& c : check_catalog()) std::cout << c.id << "\t" << c.paper_ref << "\t" << c.description << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Canonical, B- and KT-connections on Norden manifolds: instance generation and identity checks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolkitVersion);

  std::string file, dir, checks, json_out, kind = "flat", name, out;
  std::string format = "text";
  int dim = 4, budget = 0;
  std::uint64_t seed = 0;
  bool from_manifest = false;
  const std::vector<std::string> formats{"text", "json"};

  auto* validate_cmd = app.add_subcommand("validate", "check the Norden axioms of a model file");
  validate_cmd->add_option("file", file, "model file")->required();

  auto* verify_cmd = app.add_subcommand("verify", "run the identity checks on a model file");
  verify_cmd->add_option("file", file, "model file")->required();
  verify_cmd->add_option("--checks", checks, "comma-separated check ids (default: all)");
  verify_cmd->add_option("--format", format, "output format")->check(CLI::IsMember(formats));
  verify_cmd->add_option("--json", json_out, "also write the JSON report to this file");

  auto* generate_cmd = app.add_subcommand("generate", "generate or search for an instance");
  generate_cmd->add_option("--kind", kind, "flat|random_norden|quasi_kahler_search|isotropic_search|parallel_torsion_search|chart_norden");
  generate_cmd->add_option("--dim", dim, "even dimension 2n")->required();
  generate_cmd->add_option("--seed", seed, "random seed");
  generate_cmd->add_option("--budget", budget, "attempt budget (0 = default)");
  generate_cmd->add_option("--name", name, "instance name (default: output file stem)");
  generate_cmd->add_option("--out", out, "output model file")->required();

  auto* corpus_run = app.add_subcommand("corpus-run", "verify every model in a corpus directory");
  corpus_run->add_option("dir", dir, "corpus directory")->required();
  corpus_run->add_option("--format", format, "output format")->check(CLI::IsMember(formats));
  corpus_run->add_option("--json", json_out, "also write the JSON corpus report to this file");

  auto* corpus_build = app.add_subcommand("corpus-build", "generate the standard corpus");
  corpus_build->add_option("dir", dir, "output directory")->required();
  corpus_build->add_flag("--from-manifest", from_manifest, "regenerate the recipes listed in <dir>/MANIFEST");

  auto* report_cmd = app.add_subcommand("report", "render a saved JSON report");
  report_cmd->add_option("file", file, "JSON report (single instance or corpus)")->required();
  report_cmd->add_option("--format", format, "output format")->check(CLI::IsMember(formats));

  auto* checks_cmd = app.add_subcommand("checks", "list the registered checks");
  std::string checks_format = "text";
  checks_cmd->add_option("--format", checks_format, "text or markdown")->check(CLI::IsMember({"text", "markdown"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*validate_cmd) return cmd_validate(file);
    if (*verify_cmd) return cmd_verify(file, checks, format, json_out);
    if (*generate_cmd) return cmd_generate(kind, dim, seed, budget, name, out);
    if (*corpus_run) return cmd_corpus_run(dir, format, json_out);
    if (*corpus_build) return cmd_corpus_build(dir, from_manifest);
    if (*report_cmd) return cmd_report(file, format);
    if (*checks_cmd) return cmd_checks(checks_format);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
