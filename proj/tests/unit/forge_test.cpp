#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "norden/checks.hpp"
#include "norden/forge.hpp"
#include "support.hpp"

using namespace norden;
namespace fs = std::filesystem;

TEST_CASE("the generator follows the reference 64-bit Mersenne Twister") {
  // First output of mt19937_64 for its default seed 5489.
  Rng rng(5489);
  CHECK(rng.uniform() == static_cast<double>(14514284786278117030ULL >> 11) * 0x1.0p-53);
}

TEST_CASE("generator streams are reproducible and bounded") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const int k = a.below(7);
    CHECK(k == b.below(7));
    CHECK(k >= 0);
    CHECK(k < 7);
    CHECK(a.normal() == b.normal());
  }
}

TEST_CASE("random Norden instances are valid, reproducible and seed dependent") {
  const Model a = random_norden(2, 1), b = random_norden(2, 1), c = random_norden(2, 2);
  CHECK(validate(a).ok());
  CHECK(emit_model(a) == emit_model(b));
  CHECK(a.structure.g != c.structure.g);
  const VerificationReport ra = verify(a), rc = verify(c);
  CHECK(ra.measurement("max_F") > 0.0);
  CHECK(ra.measurement("max_F") != rc.measurement("max_F"));
}

TEST_CASE("generation errors are explicit") {
  CHECK_THROWS_WITH(instance_kind_from_string("torus"), "unknown instance kind 'torus'");
  CHECK_THROWS_WITH(random_norden(2, 3, 0), "generation failed; increase budget");
}

TEST_CASE("the flat model is Kaehler and in W3") {
  const VerificationReport r = verify(flat_model(3));
  CHECK(r.measurement("kahler") == 1.0);
  CHECK(r.measurement("w3") == 1.0);
  CHECK(r.summary.fail == 0);
}

TEST_CASE("quasi-Kaehler search returns a non-Kaehler W3 instance") {
  const Model m = quasi_kahler_search(2, 101);
  const VerificationReport r = verify(m);
  CHECK(r.measurement("w3") == 1.0);
  CHECK(r.measurement("kahler") == 0.0);
}

TEST_CASE("a failed search reports its best residual") {
  const SearchOutcome s = parallel_torsion_search(2, 22, 2);
  CHECK_FALSE(s.found());
  CHECK(s.best_residual > 0.0);
  CHECK(s.message.rfind("not found, best residual ", 0) == 0);
}

TEST_CASE("every corpus model is a valid instance with its provenance") {
  for (const ManifestEntry& e : read_manifest(support::corpus_dir() / "MANIFEST")) {
    if (e.status != "ok") continue;
    const Model m = support::corpus_model(e.recipe.name);
    CHECK_MESSAGE(validate(m).ok(), e.recipe.name);
    CHECK(m.name == e.recipe.name);
    CHECK(m.structure.dim() == e.recipe.dim);
    bool has_seed = false;
    for (const auto& [k, v] : m.provenance) has_seed |= k == "seed" && v == std::to_string(e.recipe.seed);
    if (e.recipe.kind != InstanceKind::flat) CHECK_MESSAGE(has_seed, e.recipe.name);
  }
}

TEST_CASE("the manifest round-trips") {
  const auto entries = read_manifest(support::corpus_dir() / "MANIFEST");
  REQUIRE(entries.size() == standard_corpus().size());
  const fs::path tmp = fs::temp_directory_path() / "norden_manifest_test";
  write_manifest(tmp, entries);
  const auto back = read_manifest(tmp);
  fs::remove(tmp);
  REQUIRE(back.size() == entries.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].recipe.name == entries[i].recipe.name);
    CHECK(back[i].recipe.kind == entries[i].recipe.kind);
    CHECK(back[i].recipe.seed == entries[i].recipe.seed);
    CHECK(back[i].status == entries[i].status);
  }
}

TEST_CASE("regenerating one corpus entry reproduces its file") {
  for (const ManifestEntry& e : read_manifest(support::corpus_dir() / "MANIFEST")) {
    if (e.recipe.name != "QK4" && e.recipe.name != "CH4") continue;
    const SearchOutcome s = generate(e.recipe);
    REQUIRE(s.found());
    std::ifstream in(support::corpus_dir() / (e.recipe.name + ".json"));
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(emit_model(*s.model) == ss.str());
  }
}
