#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "norden/polynomial.hpp"
#include "norden/tensor.hpp"

namespace norden {

/// Metric g, complex structure J, inverse metric and associated metric at one point.
struct NordenStructure {
  DenseTensor g;        // g_{ij}
  DenseTensor g_inv;    // g^{ij}; empty when g is singular
  DenseTensor J;        // J^i_j
  DenseTensor g_assoc;  // g_{ik} J^k_j

  int dim() const noexcept { return g.dim(); }
  bool invertible() const noexcept { return g_inv.rank() == 2; }

  /// Fills g_inv and g_assoc. Does not validate; a singular g leaves g_inv empty.
  static NordenStructure from_components(DenseTensor g, DenseTensor J);
};

enum class FrameKind { lie_algebra, chart };

struct ChartData {
  PolyMatrix metric;  // g_{ij}(u)
  PolyMatrix J;       // J^i_j(u)
  std::vector<double> point;
  double fd_step = 1e-5;
};

struct FrameModel {
  FrameKind kind = FrameKind::lie_algebra;
  int dim = 0;
  DenseTensor structure_constants;  // C^k_{ij} as (k, i, j); lie_algebra only
  ChartData chart;                  // chart only

  static FrameModel lie_algebra(DenseTensor structure_constants);
  static FrameModel chart_frame(int dim, ChartData chart);
};

/// Ordered key/value echo of how an instance was produced.
using Provenance = std::vector<std::pair<std::string, std::string>>;

struct Model {
  std::string name;
  FrameModel frame;
  NordenStructure structure;  // at the evaluation point in chart mode
  Provenance provenance;
};

Model make_lie_model(std::string name, DenseTensor g, DenseTensor J, DenseTensor structure_constants);
Model make_chart_model(std::string name, int dim, ChartData chart);

/// Everything the frame calculus needs at one point: the structure, the
/// brackets of the frame and the frame derivatives of g and J.
struct PointData {
  NordenStructure structure;
  DenseTensor brackets;           // C^k_{ij}; zero for coordinate frames
  DenseTensor metric_derivative;  // (a, i, j) = e_a(g_{ij})
  DenseTensor J_derivative;       // (a, i, j) = e_a(J^i_j)

  int dim() const noexcept { return structure.dim(); }
};

PointData point_data(const Model& model);
/// Chart mode only: the data at coordinates `u`.
PointData point_data_at(const FrameModel& frame, std::span<const double> u);
NordenStructure structure_at(const ChartData& chart, int dim, std::span<const double> u);

struct Signature {
  int positive = 0;
  int negative = 0;
  int degenerate = 0;
  friend bool operator==(const Signature&, const Signature&) = default;
};

/// Eigenvalue sign count of a symmetric rank-2 tensor; |lambda| <= 1e-10 counts as degenerate.
Signature signature(const DenseTensor& metric);

struct Violation {
  std::string message;
  double residual = 0.0;
};

struct ValidationOutcome {
  std::vector<Violation> violations;
  Signature metric_signature;
  Signature assoc_signature;
  double j_squared_residual = 0.0;
  double anti_isometry_residual = 0.0;
  double jacobi_residual = 0.0;

  bool ok() const noexcept { return violations.empty(); }
};

ValidationOutcome validate(const NordenStructure& structure, const FrameModel& frame);
ValidationOutcome validate(const Model& model);

/// g~(x,y) = g(x,Jy).
DenseTensor associated_metric(const NordenStructure& structure);

/// [x,y] = x^i y^j C^k_{ij} e_k. Zero in chart mode (coordinate fields commute).
std::vector<double> bracket(const FrameModel& frame, std::span<const double> x, std::span<const double> y);

/// Cyclic sum of [[e_i,e_j],e_k] as (l, i, j, k).
DenseTensor jacobi_tensor(const DenseTensor& structure_constants);

}  // namespace norden
