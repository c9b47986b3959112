#include "norden/connections.hpp"

#include <algorithm>
#include <cmath>

namespace norden {

namespace {

double scale_of(const NordenStructure& s) {
  const double j = std::max(1.0, s.J.max_abs());
  return std::max(1.0, s.g.max_abs()) * j * j;
}

}  // namespace

std::string to_string(ConnectionLabel label) {
  switch (label) {
    case ConnectionLabel::canonical: return "canonical";
    case ConnectionLabel::b_connection: return "b_connection";
    case ConnectionLabel::kt_connection: return "kt_connection";
    case ConnectionLabel::custom: return "custom";
  }
  return "custom";
}

DeformedConnection deform(const ConnectionCoeffs& base, const PointData& p, DenseTensor Q, ConnectionLabel label) {
  if (Q.rank() != 3 || !Q.all_lower() || Q.dim() != p.dim()) throw Error("deformation tensor must be (0,3)");
  DeformedConnection dc;
  dc.base = base;
  dc.prime.gamma = base.gamma + vector_from_pairing(Q, p.structure.g_inv);
  dc.T = pair_with_metric(torsion_vector(dc.prime.gamma, p.brackets), p.structure.g);
  dc.Q = std::move(Q);
  dc.label = label;
  const double tol = 1e-9 * std::max(1.0, dc.Q.max_abs()) * scale_of(p.structure);
  dc.prime.metric_compatible = metric_covariant_derivative(dc.prime.gamma, p).max_abs() <= tol;
  dc.prime.torsion_free = dc.T.max_abs() <= tol;
  return dc;
}

DenseTensor phi_tensor(const DenseTensor& F, const DenseTensor& J) {
  const DenseTensor f0 = apply_J(F, 0, J);
  const DenseTensor f1 = apply_J(F, 1, J);
  const DenseTensor f2 = apply_J(F, 2, J);
  return 0.5 * (permute(f0, {2, 0, 1}) - f2 - permute(f1, {1, 2, 0}));
}

DenseTensor phi_from_associated_metric(const PointData& p) {
  const auto& s = p.structure;
  const int d = p.dim();
  const DenseTensor& ga = s.g_assoc;
  // e_a(g_ik J^k_j)
  const DenseTensor dga = DenseTensor::generate(d, lower_slots(3), [&](int a, int i, int j) {
    double v = 0.0;
    for (int k = 0; k < d; ++k) v += p.metric_derivative(a, i, k) * s.J(k, j) + s.g(i, k) * p.J_derivative(a, k, j);
    return v;
  });
  const DenseTensor ga_inv = inverse_metric(ga);
  const DenseTensor tilde = koszul_christoffels(ga, ga_inv, dga, p.brackets);
  const DenseTensor base = koszul_christoffels(s.g, s.g_inv, p.metric_derivative, p.brackets);
  return pair_with_metric(tilde - base, s.g);
}

DenseTensor canonical_Q_general(const DenseTensor& phi, const DenseTensor& J) {
  const DenseTensor pj = apply_J(apply_J(phi, 0, J), 2, J);  // Phi(Ja,b,Jc)
  return 0.25 * (2.0 * phi - permute(phi, {2, 0, 1}) - permute(pj, {2, 0, 1}));
}

DenseTensor canonical_Q_single_phi(const DenseTensor& phi, const DenseTensor& J) {
  const DenseTensor pj = apply_J(apply_J(phi, 0, J), 2, J);
  return 0.25 * (phi - permute(phi, {2, 0, 1}) - permute(pj, {2, 0, 1}));
}

DenseTensor canonical_Q_quasi_kahler(const DenseTensor& D, const NordenStructure& s) {
  const DenseTensor dj = apply_J(D, 2, s.J);  // (nabla_a J) J e_b
  const DenseTensor jd = apply_J(D, 1, s.J);  // (nabla_{J e_a} J) e_b
  const DenseTensor q = 0.25 * (permute(dj, {0, 2, 1}) - permute(jd, {0, 2, 1}) + 2.0 * dj);
  return pair_with_metric(q, s.g);
}

DenseTensor canonical_Q_from_F(const DenseTensor& F, const DenseTensor& J) {
  const DenseTensor f0 = apply_J(F, 0, J);
  const DenseTensor f1 = apply_J(F, 1, J);
  return 0.25 * (permute(f1, {1, 0, 2}) - permute(f0, {1, 0, 2}) + 2.0 * f1);
}

DenseTensor canonical_Q_three_term(const DenseTensor& F, const DenseTensor& J) {
  const DenseTensor f0 = apply_J(F, 0, J);
  const DenseTensor f2 = apply_J(F, 2, J);
  return 0.25 * (permute(f0, {2, 0, 1}) - f2 - permute(f0, {1, 0, 2}));
}

DenseTensor canonical_T_from_F(const DenseTensor& F, const DenseTensor& J) {
  return 0.5 * (apply_J(F, 1, J) + apply_J(F, 0, J));
}

DenseTensor b_connection_Q(const DenseTensor& F, const DenseTensor& J) { return 0.5 * apply_J(F, 1, J); }

DenseTensor kt_connection_Q(const DenseTensor& F, const DenseTensor& J) {
  return -0.25 * cyclic_sum(apply_J(F, 2, J));
}

DeformedConnection canonical_connection(const PointData& p, const ConnectionCoeffs& lc, const DenseTensor& D,
                                        CanonicalPath path) {
  const auto& s = p.structure;
  const DenseTensor F = pair_with_metric(D, s.g);
  if (path == CanonicalPath::quasi_kahler) {
    if (!class_membership(F, s).is_quasi_kahler) throw Error("quasi-Kähler form requires class W₃");
    return deform(lc, p, canonical_Q_quasi_kahler(D, s), ConnectionLabel::canonical);
  }
  return deform(lc, p, canonical_Q_general(phi_tensor(F, s.J), s.J), ConnectionLabel::canonical);
}

namespace {

DeformedConnection w3_connection(const PointData& p, const ConnectionCoeffs& lc, const DenseTensor& F,
                                 DenseTensor Q, ConnectionLabel label) {
  DeformedConnection dc = deform(lc, p, std::move(Q), label);
  if (!class_membership(F, p.structure).is_quasi_kahler)
    dc.warnings.push_back(to_string(label) + ": structure is not quasi-Kähler; naturality is not guaranteed");
  return dc;
}

}  // namespace

DeformedConnection b_connection(const PointData& p, const ConnectionCoeffs& lc, const DenseTensor& F) {
  return w3_connection(p, lc, F, b_connection_Q(F, p.structure.J), ConnectionLabel::b_connection);
}

DeformedConnection kt_connection(const PointData& p, const ConnectionCoeffs& lc, const DenseTensor& F) {
  return w3_connection(p, lc, F, kt_connection_Q(F, p.structure.J), ConnectionLabel::kt_connection);
}

double first_pair_antisymmetry(const DenseTensor& T) { return (T + permute(T, {1, 0, 2})).max_abs(); }

double total_skew_defect(const DenseTensor& T) {
  return std::max(first_pair_antisymmetry(T), (T + permute(T, {0, 2, 1})).max_abs());
}

TorsionProjections torsion_projections(const DenseTensor& T, const DenseTensor& J) {
  if (T.rank() != 3 || !T.all_lower()) throw Error("torsion projections expect a (0,3) tensor");
  if (first_pair_antisymmetry(T) > 1e-9 * std::max(1.0, T.max_abs()))
    throw Error("torsion must be antisymmetric in its first two arguments");
  const DenseTensor jj01 = apply_J(apply_J(T, 0, J), 1, J);  // T(Jx,Jy,z)
  const DenseTensor jj02 = apply_J(apply_J(T, 0, J), 2, J);  // T(Jx,y,Jz)
  const DenseTensor jj12 = apply_J(apply_J(T, 1, J), 2, J);  // T(x,Jy,Jz)
  TorsionProjections pr;
  pr.p1 = 0.25 * (T - jj01 - jj02 - jj12);
  pr.p2 = 0.25 * (T - jj01 + jj02 + jj12);
  // Terms shared by 8 p3 and 8 p4 with opposite sign:
  // T(y,z,x) + T(z,x,y) + T(Jy,z,Jx) + T(z,Jx,Jy) + T(Jy,Jz,x) + T(Jz,Jx,y) - T(y,Jz,Jx) - T(Jz,x,Jy)
  const DenseTensor shared = permute(T, {1, 2, 0}) + permute(T, {2, 0, 1}) + permute(jj02, {1, 2, 0}) +
                             permute(jj12, {2, 0, 1}) + permute(jj01, {1, 2, 0}) + permute(jj01, {2, 0, 1}) -
                             permute(jj12, {1, 2, 0}) - permute(jj02, {2, 0, 1});
  pr.p3 = 0.125 * (2.0 * T + 2.0 * jj01 - shared);
  pr.p4 = 0.125 * (2.0 * T + 2.0 * jj01 + shared);
  return pr;
}

DenseTensor nijenhuis_lowered(const DenseTensor& F, const DenseTensor& J) {
  const DenseTensor f1 = apply_J(F, 1, J);
  const DenseTensor f0 = apply_J(F, 0, J);
  return f1 - permute(f1, {1, 0, 2}) + f0 - permute(f0, {1, 0, 2});
}

NaturalityResult naturality_check(const DeformedConnection& dc, const PointData& p, const DenseTensor& F) {
  const auto& s = p.structure;
  const auto& J = s.J;
  NaturalityResult r;
  r.nabla_J = J_covariant_derivative(dc.prime.gamma, p).max_abs();
  r.nabla_g = metric_covariant_derivative(dc.prime.gamma, p).max_abs();
  r.f_from_q = (F - (apply_J(dc.Q, 2, J) - apply_J(dc.Q, 1, J))).max_abs();
  r.q_skew_last_pair = (dc.Q + permute(dc.Q, {0, 2, 1})).max_abs();

  const DenseTensor phi = phi_tensor(F, J);
  const DenseTensor n = nijenhuis_lowered(F, J);
  const TorsionProjections pr = torsion_projections(dc.T, J);
  const DenseTensor phi_zxy = permute(phi, {2, 0, 1});
  r.p2_vs_nijenhuis = (4.0 * pr.p2 - n).max_abs();
  r.nijenhuis_vs_phi = (n - 2.0 * (apply_J(apply_J(phi_zxy, 0, J), 1, J) - phi_zxy)).max_abs();
  const DenseTensor pjj = apply_J(apply_J(phi, 1, J), 2, J);  // Phi(a,Jb,Jc)
  const DenseTensor p3_rhs = -phi + permute(phi, {1, 2, 0}) + pjj + permute(pjj, {1, 2, 0}) - 2.0 * permute(pjj, {2, 0, 1});
  r.p3_vs_phi = (4.0 * pr.p3 - p3_rhs).max_abs();

  const double scale = std::max({1.0, F.max_abs(), dc.Q.max_abs()}) * scale_of(s);
  r.tolerance = 1e-9 * scale;
  r.natural = r.nabla_J <= r.tolerance && r.nabla_g <= r.tolerance;
  return r;
}

DenseTensor hayden_Q_from_T(const DenseTensor& T) {
  return 0.5 * (T - permute(T, {1, 2, 0}) + permute(T, {2, 0, 1}));
}

DenseTensor f_from_torsion(const DenseTensor& T, const DenseTensor& J) {
  return permute(apply_J(T, 2, J), {0, 2, 1}) - apply_J(T, 1, J);
}

DenseTensor canonical_torsion_condition(const DenseTensor& T, const DenseTensor& J) {
  const DenseTensor jj02 = apply_J(apply_J(T, 0, J), 2, J);
  const DenseTensor jj12 = apply_J(apply_J(T, 1, J), 2, J);
  return T + permute(T, {1, 2, 0}) - jj02 - permute(jj12, {1, 2, 0});
}

DenseTensor trace_first_pair(const DenseTensor& Q, const NordenStructure& s) {
  const int d = s.dim();
  return DenseTensor::generate(d, lower_slots(1), [&](int z) {
    double t = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) t += s.g_inv(i, j) * Q(i, j, z);
    return t;
  });
}

}  // namespace norden
