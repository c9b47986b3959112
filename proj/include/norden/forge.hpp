#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "norden/model.hpp"

namespace norden {

/// Portable generator: mt19937_64 with explicit uniform and Gaussian maps, so
/// identical seeds give identical instances across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform();  // [0, 1) with 53 random bits
  double normal();   // Box-Muller
  int below(int n);  // uniform integer in [0, n)

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

enum class InstanceKind { flat, random_norden, quasi_kahler_search, isotropic_search, parallel_torsion_search, chart_norden };

std::string to_string(InstanceKind kind);
InstanceKind instance_kind_from_string(const std::string& text);

struct InstanceRecipe {
  std::string name;
  InstanceKind kind = InstanceKind::flat;
  int dim = 4;
  std::uint64_t seed = 0;
  int budget = 0;  // 0 selects the kind's default
};

struct SearchOutcome {
  std::optional<Model> model;
  double best_residual = 0.0;
  std::string message;  // "found" or "not found, best residual r"

  bool found() const noexcept { return model.has_value(); }
};

/// Abelian algebra, J e_i = e_{n+i}, J e_{n+i} = -e_i, g = diag(+1 x n, -1 x n).
Model flat_model(int n);

/// Random basis applied to the flat structure plus random 2-step nilpotent
/// brackets. Throws "generation failed; increase budget" when `budget` attempts fail.
Model random_norden(int n, std::uint64_t seed, int budget = 16);

/// Non-Kaehler instance with vanishing cyclic sum of F. Throws "no W₃ instance found".
Model quasi_kahler_search(int n, std::uint64_t seed, int budget = 20);

/// Quasi-Kaehler instance with zero square norm of nabla J but nonzero F.
SearchOutcome isotropic_search(int n, std::uint64_t seed, int budget = 20);
/// Quasi-Kaehler instance whose canonical connection has parallel torsion.
SearchOutcome parallel_torsion_search(int n, std::uint64_t seed, int budget = 6);

/// Polynomial chart g = [[A, B], [B, -A]] with constant J, conjugated by a random constant basis.
Model chart_norden(int n, std::uint64_t seed);

int default_budget(InstanceKind kind);
SearchOutcome generate(const InstanceRecipe& recipe);

struct ManifestEntry {
  InstanceRecipe recipe;
  std::string status;  // ok | not_found
  double residual = 0.0;
};

std::vector<InstanceRecipe> standard_corpus();
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries);

/// Generates every recipe into `dir` (model files plus MANIFEST).
std::vector<ManifestEntry> build_corpus(const std::filesystem::path& dir, const std::vector<InstanceRecipe>& recipes);

}  // namespace norden
