#include "norden/model.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "eigen_bridge.hpp"

namespace norden {

namespace {

constexpr double kAxiomTol = 1e-9;
constexpr double kDegenerateTol = 1e-10;

DenseTensor eval_matrix(const PolyMatrix& m, int dim, std::span<const double> u,
                        std::vector<Variance> variance) {
  if (static_cast<int>(m.size()) != dim) throw Error("polynomial matrix has wrong size");
  return DenseTensor::generate(dim, std::move(variance), [&](int i, int j) {
    const auto& row = m[static_cast<std::size_t>(i)];
    if (static_cast<int>(row.size()) != dim) throw Error("polynomial matrix has wrong size");
    return row[static_cast<std::size_t>(j)].eval(u);
  });
}

DenseTensor derivative_table(const PolyMatrix& m, int dim, std::span<const double> u,
                             Variance first_slot) {
  return DenseTensor::generate(dim, {Variance::lower, first_slot, Variance::lower},
                               [&](int a, int i, int j) {
                                 return m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]
                                     .derivative(a)
                                     .eval(u);
                               });
}


// Checks the pointwise axioms; appends violations with `prefix` on each message.
void check_structure(const NordenStructure& s, ValidationOutcome& out, const std::string& prefix,
                     bool record_measurements) {
  const int d = s.dim();
  const int n = d / 2;
  auto add = [&](std::string msg, double r) { out.violations.push_back({prefix + msg, r}); };

  const double sym = max_abs_diff(s.g, permute(s.g, {1, 0}));
  const double gscale = std::max(1.0, s.g.max_abs());
  const double jscale = std::max(1.0, s.J.max_abs());
  if (sym > kAxiomTol * gscale) {
    add("metric not symmetric", sym);
    return;  // eigen-decomposition below assumes symmetry
  }

  const Signature sig = signature(s.g);
  if (record_measurements) out.metric_signature = sig;
  if (sig.degenerate > 0) {
    add("metric numerically degenerate", 0.0);
    return;
  }
  if (sig.positive != n || sig.negative != n)
    add("signature must be (n,n)", std::abs(sig.positive - n) + std::abs(sig.negative - n));

  const DenseTensor jj = contract(s.J, 1, s.J, 0);
  const double j2 = max_abs_diff(jj, -DenseTensor::identity(d));
  if (record_measurements) out.j_squared_residual = j2;
  if (j2 > kAxiomTol * jscale * jscale) add("J squared is not minus the identity", j2);

  const DenseTensor gjj = apply_J(apply_J(s.g, 0, s.J), 1, s.J);
  const double iso = (gjj + s.g).max_abs();
  if (record_measurements) out.anti_isometry_residual = iso;
  if (iso > kAxiomTol * gscale * jscale * jscale) add("J is not an anti-isometry of g", iso);

  const DenseTensor ga = associated_metric(s);
  const double asym = max_abs_diff(ga, permute(ga, {1, 0}));
  if (asym > kAxiomTol * gscale * jscale) {
    add("associated metric not symmetric", asym);
  } else {
    const Signature sa = signature(ga);
    if (record_measurements) out.assoc_signature = sa;
    if (sa.degenerate > 0 || sa.positive != n || sa.negative != n)
      add("associated metric signature must be (n,n)",
          std::abs(sa.positive - n) + std::abs(sa.negative - n) + sa.degenerate);
  }
}

}  // namespace

NordenStructure NordenStructure::from_components(DenseTensor g, DenseTensor J) {
  if (g.rank() != 2 || !g.all_lower()) throw Error("metric must be a rank-2 lower tensor");
  if (J.rank() != 2 || J.variance(0) != Variance::upper || J.variance(1) != Variance::lower)
    throw Error("J must be a (1,1) tensor");
  if (g.dim() != J.dim()) throw Error("metric and J dimensions differ");
  NordenStructure s;
  s.g = std::move(g);
  s.J = std::move(J);
  s.g_assoc = apply_J(s.g, 1, s.J);
  const Eigen::MatrixXd m = bridge::to_matrix(s.g);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  if (lu.isInvertible()) s.g_inv = bridge::from_matrix(lu.inverse(), {Variance::upper, Variance::upper});
  return s;
}

FrameModel FrameModel::lie_algebra(DenseTensor structure_constants) {
  const auto& c = structure_constants;
  if (c.rank() != 3 || c.variance(0) != Variance::upper || c.variance(1) != Variance::lower ||
      c.variance(2) != Variance::lower)
    throw Error("structure constants must be a (1,2) tensor C^k_{ij}");
  FrameModel f;
  f.kind = FrameKind::lie_algebra;
  f.dim = c.dim();
  f.structure_constants = std::move(structure_constants);
  return f;
}

FrameModel FrameModel::chart_frame(int dim, ChartData chart) {
  if (static_cast<int>(chart.point.size()) != dim) throw Error("chart point has wrong length");
  if (!(chart.fd_step > 0.0)) throw Error("fd_step must be positive");
  FrameModel f;
  f.kind = FrameKind::chart;
  f.dim = dim;
  f.chart = std::move(chart);
  return f;
}

Model make_lie_model(std::string name, DenseTensor g, DenseTensor J, DenseTensor structure_constants) {
  Model m;
  m.name = std::move(name);
  m.structure = NordenStructure::from_components(std::move(g), std::move(J));
  m.frame = FrameModel::lie_algebra(std::move(structure_constants));
  if (m.frame.dim != m.structure.dim()) throw Error("structure constants and metric dimensions differ");
  return m;
}

Model make_chart_model(std::string name, int dim, ChartData chart) {
  Model m;
  m.name = std::move(name);
  m.frame = FrameModel::chart_frame(dim, std::move(chart));
  m.structure = structure_at(m.frame.chart, dim, m.frame.chart.point);
  return m;
}

NordenStructure structure_at(const ChartData& chart, int dim, std::span<const double> u) {
  return NordenStructure::from_components(
      eval_matrix(chart.metric, dim, u, {Variance::lower, Variance::lower}),
      eval_matrix(chart.J, dim, u, {Variance::upper, Variance::lower}));
}

PointData point_data_at(const FrameModel& frame, std::span<const double> u) {
  if (frame.kind != FrameKind::chart) throw Error("point_data_at requires a chart frame");
  const int d = frame.dim;
  PointData p;
  p.structure = structure_at(frame.chart, d, u);
  p.brackets = DenseTensor::vector_valued(d, 2);
  p.metric_derivative = derivative_table(frame.chart.metric, d, u, Variance::lower);
  p.J_derivative = derivative_table(frame.chart.J, d, u, Variance::upper);
  return p;
}

PointData point_data(const Model& model) {
  if (model.frame.kind == FrameKind::chart) return point_data_at(model.frame, model.frame.chart.point);
  const int d = model.structure.dim();
  PointData p;
  p.structure = model.structure;
  p.brackets = model.frame.structure_constants;
  p.metric_derivative = DenseTensor::covariant(d, 3);
  p.J_derivative = DenseTensor(d, {Variance::lower, Variance::upper, Variance::lower});
  return p;
}

Signature signature(const DenseTensor& metric) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(bridge::to_matrix(metric), Eigen::EigenvaluesOnly);
  Signature s;
  const auto& ev = es.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  for (int i = 0; i < ev.size(); ++i) {
    if (std::abs(ev[i]) <= kDegenerateTol * scale) ++s.degenerate;
    else if (ev[i] > 0) ++s.positive;
    else ++s.negative;
  }
  return s;
}

DenseTensor associated_metric(const NordenStructure& structure) {
  return apply_J(structure.g, 1, structure.J);
}

DenseTensor jacobi_tensor(const DenseTensor& c) {
  const int d = c.dim();
  // A(l,i,j,k) = C^m_{ij} C^l_{mk}
  const DenseTensor a = DenseTensor::generate(d, {Variance::upper, Variance::lower, Variance::lower, Variance::lower},
                                              [&](int l, int i, int j, int k) {
                                                double s = 0.0;
                                                for (int m = 0; m < d; ++m) s += c(m, i, j) * c(l, m, k);
                                                return s;
                                              });
  return a + permute(a, {0, 2, 3, 1}) + permute(a, {0, 3, 1, 2});
}

ValidationOutcome validate(const NordenStructure& structure, const FrameModel& frame) {
  ValidationOutcome out;
  if (structure.dim() != frame.dim) {
    out.violations.push_back({"frame and structure dimensions differ", 0.0});
    return out;
  }
  check_structure(structure, out, "", true);

  if (frame.kind == FrameKind::lie_algebra) {
    const auto& c = frame.structure_constants;
    const double anti = (c + permute(c, {0, 2, 1})).max_abs();
    const double cscale = std::max(1.0, c.max_abs());
    if (anti > kAxiomTol * cscale) out.violations.push_back({"structure constants not antisymmetric", anti});
    out.jacobi_residual = jacobi_tensor(c).max_abs();
    if (out.jacobi_residual > kAxiomTol * cscale * cscale)
      out.violations.push_back({"Jacobi identity violated", out.jacobi_residual});
    return out;
  }

  const auto& ch = frame.chart;
  std::vector<double> u = ch.point;
  for (int a = 0; a < frame.dim; ++a) {
    for (double sgn : {1.0, -1.0}) {
      u = ch.point;
      u[static_cast<std::size_t>(a)] += sgn * ch.fd_step;
      ValidationOutcome local;
      check_structure(structure_at(ch, frame.dim, u), local,
                      "at stencil point u" + std::string(sgn > 0 ? "+" : "-") + "h*e_" + std::to_string(a + 1) + ": ",
                      false);
      for (auto& v : local.violations) out.violations.push_back(std::move(v));
    }
  }
  return out;
}

ValidationOutcome validate(const Model& model) { return validate(model.structure, model.frame); }

std::vector<double> bracket(const FrameModel& frame, std::span<const double> x, std::span<const double> y) {
  const int d = frame.dim;
  if (static_cast<int>(x.size()) != d || static_cast<int>(y.size()) != d) throw Error("bracket: vector length mismatch");
  std::vector<double> out(static_cast<std::size_t>(d), 0.0);
  if (frame.kind == FrameKind::chart) return out;
  const auto& c = frame.structure_constants;
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        out[static_cast<std::size_t>(k)] += x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)] * c(k, i, j);
  return out;
}

}  // namespace norden
