#include "norden/frame_calculus.hpp"

#include <algorithm>
#include <cmath>

namespace norden {

DenseTensor koszul_christoffels(const DenseTensor& g, const DenseTensor& g_inv, const DenseTensor& dg,
                                const DenseTensor& c) {
  const int d = g.dim();
  const DenseTensor cl = pair_with_metric(c, g);  // C_abc
  const DenseTensor lowered = DenseTensor::generate(d, lower_slots(3), [&](int i, int j, int l) {
    return 0.5 * (dg(i, j, l) + dg(j, i, l) - dg(l, i, j) + cl(i, j, l) - cl(j, l, i) + cl(l, i, j));
  });
  return vector_from_pairing(lowered, g_inv);
}

ConnectionCoeffs levi_civita(const PointData& p) {
  if (!p.structure.invertible()) throw Error("metric not invertible");
  ConnectionCoeffs conn;
  conn.gamma = koszul_christoffels(p.structure.g, p.structure.g_inv, p.metric_derivative, p.brackets);
  conn.metric_compatible = true;
  conn.torsion_free = true;
  return conn;
}

ConnectionCoeffs levi_civita(const Model& model) { return levi_civita(point_data(model)); }

DenseTensor christoffels_finite_difference(const FrameModel& frame) {
  if (frame.kind != FrameKind::chart) throw Error("finite-difference Christoffels require a chart frame");
  const int d = frame.dim;
  const auto& ch = frame.chart;
  const double h = ch.fd_step;
  std::vector<NordenStructure> plus, minus;
  for (int a = 0; a < d; ++a) {
    std::vector<double> u = ch.point;
    u[static_cast<std::size_t>(a)] += h;
    plus.push_back(structure_at(ch, d, u));
    u[static_cast<std::size_t>(a)] -= 2 * h;
    minus.push_back(structure_at(ch, d, u));
  }
  const DenseTensor dg = DenseTensor::generate(d, lower_slots(3), [&](int a, int i, int j) {
    return (plus[static_cast<std::size_t>(a)].g(i, j) - minus[static_cast<std::size_t>(a)].g(i, j)) / (2 * h);
  });
  const NordenStructure s = structure_at(ch, d, ch.point);
  if (!s.invertible()) throw Error("metric not invertible");
  return koszul_christoffels(s.g, s.g_inv, dg, DenseTensor::vector_valued(d, 2));
}

DenseTensor torsion_vector(const DenseTensor& gamma, const DenseTensor& c) {
  return gamma - permute(gamma, {0, 2, 1}) - c;
}

DenseTensor metric_covariant_derivative(const DenseTensor& gamma, const PointData& p) {
  const int d = p.dim();
  const auto& g = p.structure.g;
  return DenseTensor::generate(d, lower_slots(3), [&](int a, int b, int c) {
    double s = p.metric_derivative(a, b, c);
    for (int m = 0; m < d; ++m) s -= gamma(m, a, b) * g(m, c) + gamma(m, a, c) * g(b, m);
    return s;
  });
}

DenseTensor J_covariant_derivative(const DenseTensor& gamma, const PointData& p) {
  const int d = p.dim();
  const auto& J = p.structure.J;
  return DenseTensor::generate(d, vector_slots(2), [&](int k, int a, int b) {
    double s = p.J_derivative(a, k, b);
    for (int m = 0; m < d; ++m) s += gamma(k, a, m) * J(m, b) - J(k, m) * gamma(m, a, b);
    return s;
  });
}

DenseTensor nabla_J(const ConnectionCoeffs& conn, const PointData& p) {
  return J_covariant_derivative(conn.gamma, p);
}

double FSymmetryResiduals::max() const noexcept { return std::max({swap, chain, jj, shift}); }

FSymmetryResiduals f_symmetry_residuals(const DenseTensor& F, const DenseTensor& J) {
  const DenseTensor fjj = apply_J(apply_J(F, 1, J), 2, J);
  const DenseTensor fswap = permute(F, {0, 2, 1});
  FSymmetryResiduals r;
  r.swap = max_abs_diff(F, fswap);
  r.chain = max_abs_diff(fswap, fjj);
  r.jj = max_abs_diff(F, fjj);
  r.shift = (apply_J(F, 1, J) + apply_J(F, 2, J)).max_abs();
  return r;
}

DenseTensor fundamental_F(const DenseTensor& nabla_j, const NordenStructure& s) {
  if (nabla_j.rank() != 3 || nabla_j.variance(0) != Variance::upper || nabla_j.dim() != s.dim())
    throw Error("fundamental_F expects nabla J as (k, x, y)");
  DenseTensor F = pair_with_metric(nabla_j, s.g);
  const double tol = 1e-8 * (1.0 + F.max_abs()) * std::max(1.0, s.J.max_abs() * s.J.max_abs());
  if (f_symmetry_residuals(F, s.J).max() > tol) throw Error("not a fundamental tensor of a Norden structure");
  return F;
}

namespace {

// (k,a,b): (nabla_a J) J e_b and (nabla_{J e_a} J) e_b
DenseTensor d_then_J(const DenseTensor& D, const DenseTensor& J) { return apply_J(D, 2, J); }
DenseTensor J_then_d(const DenseTensor& D, const DenseTensor& J) { return apply_J(D, 1, J); }

}  // namespace

DenseTensor nijenhuis(const NordenStructure& s, const DenseTensor& D) {
  const DenseTensor dj = d_then_J(D, s.J);
  const DenseTensor jd = J_then_d(D, s.J);
  return dj - permute(dj, {0, 2, 1}) + jd - permute(jd, {0, 2, 1});
}

DenseTensor nijenhuis_assoc(const NordenStructure& s, const DenseTensor& D) {
  const DenseTensor dj = d_then_J(D, s.J);
  const DenseTensor jd = J_then_d(D, s.J);
  return dj + permute(dj, {0, 2, 1}) + jd + permute(jd, {0, 2, 1});
}

namespace {

double norm_contraction(const NordenStructure& s, const DenseTensor& D, bool alternative) {
  const int d = s.dim();
  const DenseTensor F = pair_with_metric(D, s.g);  // F(i,k,q) = g((nabla_i J) e_k, e_q)
  const auto& gi = s.g_inv;
  double total = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const double gij = gi(i, j);
      if (gij == 0.0) continue;
      for (int k = 0; k < d; ++k)
        for (int t = 0; t < d; ++t) {
          const double gks = gi(k, t);
          if (gks == 0.0) continue;
          double inner = 0.0;
          for (int q = 0; q < d; ++q) inner += F(i, k, q) * (alternative ? D(q, t, j) : D(q, j, t));
          total += gij * gks * inner;
        }
    }
  return alternative ? -2.0 * total : total;
}

}  // namespace

double square_norm(const NordenStructure& s, const DenseTensor& D) { return norm_contraction(s, D, false); }
double square_norm_alt(const NordenStructure& s, const DenseTensor& D) { return norm_contraction(s, D, true); }

DenseTensor trace_F_J(const DenseTensor& F, const NordenStructure& s) {
  const DenseTensor fj = apply_J(F, 0, s.J);
  const int d = s.dim();
  return DenseTensor::generate(d, lower_slots(1), [&](int z) {
    double t = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) t += s.g_inv(i, j) * fj(z, i, j);
    return t;
  });
}

DenseTensor nijenhuis_assoc_lowered(const DenseTensor& F, const DenseTensor& J) {
  const DenseTensor f1 = apply_J(F, 1, J);  // F(x,Jy,z)
  const DenseTensor f0 = apply_J(F, 0, J);  // F(Jx,y,z)
  return f1 + permute(f1, {1, 0, 2}) + f0 + permute(f0, {1, 0, 2});
}

ClassFlags class_membership(const DenseTensor& F, const NordenStructure& s) {
  ClassFlags c;
  c.f_max = F.max_abs();
  c.threshold = 1e-8 * (1.0 + c.f_max);
  c.cyclic_F = cyclic_sum(F).max_abs();
  c.cyclic_FJ = cyclic_sum(apply_J(F, 0, s.J)).max_abs();
  c.nstar = nijenhuis_assoc_lowered(F, s.J).max_abs();
  c.is_kahler = c.f_max <= c.threshold;
  c.is_quasi_kahler = c.cyclic_F <= c.threshold;
  c.cyclic_FJ_vanishes = c.cyclic_FJ <= c.threshold;
  c.nstar_vanishes = c.nstar <= c.threshold;
  return c;
}

}  // namespace norden
