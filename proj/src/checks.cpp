#include "norden/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>

#include "norden/connections.hpp"
#include "norden/curvature.hpp"

namespace norden {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::not_applicable: return "not_applicable";
  }
  return "not_applicable";
}

Verdict verdict_from_string(const std::string& text) {
  if (text == "pass") return Verdict::pass;
  if (text == "fail") return Verdict::fail;
  if (text == "not_applicable") return Verdict::not_applicable;
  throw Error("unknown verdict '" + text + "'");
}

const CheckRecord* VerificationReport::find(const std::string& id) const {
  for (const auto& c : checks)
    if (c.check_id == id) return &c;
  return nullptr;
}

double VerificationReport::measurement(const std::string& name) const {
  for (const auto& [k, v] : measurements)
    if (k == name) return v;
  return std::numeric_limits<double>::quiet_NaN();
}

void recount(VerificationReport& r) {
  r.summary = {};
  for (const auto& c : r.checks) {
    if (c.verdict == Verdict::pass) ++r.summary.pass;
    else if (c.verdict == Verdict::fail) ++r.summary.fail;
    else ++r.summary.not_applicable;
  }
}

double tolerance_scale_from_env() {
  const char* env = std::getenv("NORDEN_TOLERANCE_SCALE");
  if (env == nullptr || *env == '\0') return 1.0;
  char* end = nullptr;
  const double v = std::strtod(env, &end);
  if (end == env || *end != '\0' || !(v > 0.0) || !std::isfinite(v))
    throw Error(std::string("NORDEN_TOLERANCE_SCALE must be a positive number, got '") + env + "'");
  return v;
}

namespace {

struct Local {
  ConnectionCoeffs lc;
  DenseTensor D;
  DenseTensor F;
  DeformedConnection can;
};

Local local_at(const PointData& p) {
  Local l;
  l.lc = levi_civita(p);
  l.D = nabla_J(l.lc, p);
  l.F = pair_with_metric(l.D, p.structure.g);
  l.can = canonical_connection(p, l.lc, l.D);
  return l;
}

double max_of(std::initializer_list<double> xs) { return std::max(xs); }

// Everything the checks read, computed once per instance.
struct Analysis {
  explicit Analysis(const Model& m);

  const Model& model;
  PointStencil stencil;
  const PointData& p;
  const NordenStructure& s;
  ValidationOutcome validation;
  Local loc;
  const DenseTensor& F;
  const DenseTensor& D;
  const DenseTensor& J;
  const DeformedConnection& can;

  ClassFlags flags;
  bool w3 = false;
  bool kahler = false;
  double f_scale = 1.0;  // max(1, max|F|)
  double j_scale = 1.0;  // max(1, max|J|)
  FSymmetryResiduals fsym;
  double norm = 0.0;
  double norm_alt = 0.0;
  double iso_threshold = 0.0;
  bool isotropic = false;

  DenseTensor N, Nstar, phi, phi_dual;
  std::optional<DeformedConnection> can_qk;
  DeformedConnection b, kt;
  NaturalityResult nat;
  TorsionProjections proj;

  CurvatureData R, Rp;
  KahlerCheck k_R, k_Rp;
  DenseTensor nabla_Q;    // Levi-Civita derivative of the canonical Q
  DenseTensor nablap_T;   // canonical derivative of T, Q, F
  DenseTensor nablap_Q;
  DenseTensor nablap_F;
  DenseTensor bianchi_T;  // torsion form of the first Bianchi identity
  double tau_tolerance = 0.0;
  bool parallel_T = false, parallel_Q = false, parallel_F = false;
  double curvature_scale = 1.0;
};

Analysis::Analysis(const Model& m)
    : model(m),
      stencil(m),
      p(stencil.center()),
      s(p.structure),
      validation(validate(m)),
      loc(local_at(p)),
      F(loc.F),
      D(loc.D),
      J(s.J),
      can(loc.can) {
  flags = class_membership(F, s);
  w3 = flags.is_quasi_kahler;
  kahler = flags.is_kahler;
  f_scale = std::max(1.0, F.max_abs());
  j_scale = std::max(1.0, J.max_abs());
  fsym = f_symmetry_residuals(F, J);
  norm = square_norm(s, D);
  norm_alt = square_norm_alt(s, D);
  iso_threshold = 1e-8 * (1.0 + F.max_abs()) * (1.0 + F.max_abs());
  isotropic = std::abs(norm) <= iso_threshold;

  N = nijenhuis(s, D);
  Nstar = nijenhuis_assoc(s, D);
  phi = phi_tensor(F, J);
  phi_dual = phi_from_associated_metric(p);
  if (w3) can_qk = canonical_connection(p, loc.lc, D, CanonicalPath::quasi_kahler);
  b = b_connection(p, loc.lc, F);
  kt = kt_connection(p, loc.lc, F);
  nat = naturality_check(can, p, F);
  proj = torsion_projections(can.T, J);

  R = curvature(stencil, [](const PointData& q) { return levi_civita(q).gamma; }, "levi_civita");
  Rp = curvature(stencil, [](const PointData& q) { return local_at(q).can.prime.gamma; }, "canonical");
  k_R = kahler_tensor_check(R.R, s);
  k_Rp = kahler_tensor_check(Rp.R, s);

  const auto Q_field = [](const PointData& q) { return local_at(q).can.Q; };
  const auto T_field = [](const PointData& q) { return local_at(q).can.T; };
  const auto F_field = [](const PointData& q) { return local_at(q).F; };
  nabla_Q = covariant_derivative(stencil, Q_field, loc.lc.gamma);
  nablap_T = covariant_derivative(stencil, T_field, can.prime.gamma);
  nablap_Q = covariant_derivative(stencil, Q_field, can.prime.gamma);
  nablap_F = covariant_derivative(stencil, F_field, can.prime.gamma);
  bianchi_T = bianchi_torsion_residual(can.T, nablap_T, s);

  tau_tolerance = 1e-8 * (1.0 + std::abs(R.scalar) + std::abs(Rp.scalar));
  parallel_T = nablap_T.max_abs() <= 1e-8 * (1.0 + can.T.max_abs());
  parallel_Q = nablap_Q.max_abs() <= 1e-8 * (1.0 + can.Q.max_abs());
  parallel_F = nablap_F.max_abs() <= 1e-8 * (1.0 + F.max_abs());
  curvature_scale = max_of({1.0, R.R.max_abs(), Rp.R.max_abs(), f_scale * f_scale * j_scale * j_scale});
}

// Result of one evaluator before the tolerance is attached.
struct Eval {
  bool applicable = true;
  double residual = 0.0;
  double scale = 1.0;
  std::string note;
};

Eval na(std::string note) { return {false, 0.0, 1.0, std::move(note)}; }
Eval value(double residual, double scale = 1.0, std::string note = {}) {
  return {true, residual, scale, std::move(note)};
}
Eval diff(const DenseTensor& a, const DenseTensor& b, double extra_scale = 1.0) {
  return value(max_abs_diff(a, b), max_of({a.max_abs(), b.max_abs(), extra_scale}));
}
Eval zero(const DenseTensor& a, double scale) { return value(a.max_abs(), std::max(scale, a.max_abs())); }
// Boolean agreement: residual 0 when the verdicts agree, 1 otherwise (tolerance 0).
Eval agree(bool ok, std::string note) { return value(ok ? 0.0 : 1.0, 1.0, std::move(note)); }
// "Nonzero" requirement: residual is the shortfall below `floor`.
Eval nonzero(double magnitude, double floor, const std::string& what) {
  std::ostringstream os;
  os << what << " = " << magnitude;
  return value(magnitude >= floor ? 0.0 : floor - magnitude, 1.0, os.str());
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

constexpr const char* kNotW3 = "instance is not in W3";
constexpr const char* kKahler = "instance is Kaehler (F = 0)";

struct Check {
  CheckInfo info;
  std::function<Eval(const Analysis&)> eval;
};

Eval relative(double lhs, double rhs) {
  return value(std::abs(lhs - rhs), 1.0 + std::abs(lhs) + std::abs(rhs),
               "lhs = " + fmt(lhs) + ", rhs = " + fmt(rhs));
}

double signature_defect(const Signature& sig, int n) {
  return std::abs(sig.positive - n) + std::abs(sig.negative - n) + sig.degenerate;
}

const std::vector<Check>& registry();

}  // namespace

namespace {

using A = const Analysis&;

Eval w3_only(A a, const std::function<Eval()>& fn) { return a.w3 ? fn() : na(kNotW3); }
Eval w3_non_kahler(A a, const std::function<Eval()>& fn) {
  if (!a.w3) return na(kNotW3);
  if (a.kahler) return na(kKahler);
  return fn();
}

DenseTensor phi_expected_on_w3(A a) { return permute(apply_J(a.F, 0, a.J), {2, 0, 1}); }

DenseTensor natural_defect(const DeformedConnection& dc, A a) {
  return J_covariant_derivative(dc.prime.gamma, a.p);
}

Eval natural(const DeformedConnection& dc, A a) {
  const double nj = natural_defect(dc, a).max_abs();
  const double ng = metric_covariant_derivative(dc.prime.gamma, a.p).max_abs();
  return value(std::max(nj, ng), max_of({a.f_scale, dc.Q.max_abs()}) * a.j_scale * std::max(1.0, a.s.g.max_abs()),
               "max|nabla' J| = " + fmt(nj) + ", max|nabla' g| = " + fmt(ng));
}

std::string not_parallel_note(A a) {
  return "torsion not parallel, max|nabla' T| = " + fmt(a.nablap_T.max_abs());
}

Eval kahler_rprime_gate(A a, const std::function<Eval()>& fn) {
  if (!a.w3) return na(kNotW3);
  if (!a.k_Rp.kahler) return na("R' is not a Kaehler tensor on this instance");
  return fn();
}

Eval parallel_gate(A a, const std::function<Eval()>& fn) {
  if (!a.w3) return na(kNotW3);
  if (!a.parallel_T) return na(not_parallel_note(a));
  return fn();
}

const std::vector<Check>& registry() {
  static const std::vector<Check> checks = {
      // structure
      {{"eq_2_1_J_squared", "Eq. (2.1) J^2 x = -x", "J squared is minus the identity", 1e-9},
       [](A a) { return value(a.validation.j_squared_residual, a.j_scale * a.j_scale); }},
      {{"eq_2_1_anti_isometry", "Eq. (2.1) g(Jx,Jy) = -g(x,y)", "J is an anti-isometry of g", 1e-9},
       [](A a) {
         return value(a.validation.anti_isometry_residual, a.j_scale * a.j_scale * std::max(1.0, a.s.g.max_abs()));
       }},
      {{"signature_g", "Sec. 1 signature of g is (n,n)", "eigenvalue sign count of g", 0.0},
       [](A a) {
         const auto& sig = a.validation.metric_signature;
         return value(signature_defect(sig, a.s.dim() / 2), 1.0,
                      "(" + std::to_string(sig.positive) + "," + std::to_string(sig.negative) + ")");
       }},
      {{"signature_g_assoc", "Sec. 1 associated metric is a Norden metric", "eigenvalue sign count of g~", 0.0},
       [](A a) {
         const auto& sig = a.validation.assoc_signature;
         return value(signature_defect(sig, a.s.dim() / 2), 1.0,
                      "(" + std::to_string(sig.positive) + "," + std::to_string(sig.negative) + ")");
       }},
      {{"jacobi", "plumbing", "Jacobi identity of the structure constants", 1e-9},
       [](A a) {
         if (a.model.frame.kind != FrameKind::lie_algebra) return na("chart frame");
         const double c = std::max(1.0, a.model.frame.structure_constants.max_abs());
         return value(a.validation.jacobi_residual, c * c);
       }},
      {{"levi_civita_metric", "plumbing", "Levi-Civita connection is metric", 1e-9},
       [](A a) {
         return zero(metric_covariant_derivative(a.loc.lc.gamma, a.p),
                     std::max(1.0, a.s.g.max_abs()) * std::max(1.0, a.loc.lc.gamma.max_abs()));
       }},
      {{"levi_civita_torsion", "plumbing", "Levi-Civita connection is torsion free", 1e-9},
       [](A a) {
         return zero(torsion_vector(a.loc.lc.gamma, a.p.brackets),
                     std::max(a.loc.lc.gamma.max_abs(), a.p.brackets.max_abs()));
       }},
      {{"christoffel_fd", "plumbing", "chart Christoffel symbols: exact derivatives against central differences", 1e-6},
       [](A a) {
         if (a.model.frame.kind != FrameKind::chart) return na("Lie-algebra frame");
         return diff(a.loc.lc.gamma, christoffels_finite_difference(a.model.frame));
       }},

      // fundamental tensor and classes
      {{"eq_2_3_swap", "Eq. (2.3) F(x,y,z) = F(x,z,y)", "F symmetric in its last two arguments", 1e-9},
       [](A a) { return value(a.fsym.swap, a.f_scale * a.j_scale * a.j_scale); }},
      {{"eq_2_3_chain", "Eq. (2.3) F(x,z,y) = F(x,Jy,Jz)", "F(x,z,y) = F(x,Jy,Jz)", 1e-9},
       [](A a) { return value(a.fsym.chain, a.f_scale * a.j_scale * a.j_scale); }},
      {{"eq_2_3_jj", "Eq. (2.3) F(x,y,z) = F(x,Jy,Jz)", "F invariant under J on its last two arguments", 1e-9},
       [](A a) { return value(a.fsym.jj, a.f_scale * a.j_scale * a.j_scale); }},
      {{"eq_2_3_shift", "Eq. (2.3) F(x,Jy,z) = -F(x,y,Jz)", "J moves across the last two arguments of F with a sign",
        1e-9},
       [](A a) { return value(a.fsym.shift, a.f_scale * a.j_scale * a.j_scale); }},
      {{"nabla_J_anticommutes", "plumbing", "(nabla_x J)J = -J(nabla_x J)", 1e-9},
       [](A a) {
         return diff(apply_J(a.D, 2, a.J), -contract(a.J, 1, a.D, 0), a.D.max_abs() * a.j_scale);
       }},
      {{"trace_F_J", "Sec. 4 proof of Theorem 4.4: g^ij F(Jz,e_i,e_j) = 0", "trace of F(Jz,.,.) vanishes", 1e-9},
       [](A a) {
         return zero(trace_F_J(a.F, a.s), a.f_scale * a.j_scale * std::max(1.0, a.s.g_inv.max_abs()) * a.s.dim());
       }},
      {{"class_equivalence", "Eqs. (2.4), (2.7), (2.8)", "the three W3 membership tests agree", 0.0},
       [](A a) {
         const auto& f = a.flags;
         return agree(f.consistent(), "cyclic F = " + fmt(f.cyclic_F) + ", N* = " + fmt(f.nstar) +
                                          ", cyclic F(J.) = " + fmt(f.cyclic_FJ) + ", threshold " + fmt(f.threshold));
       }},
      {{"kahler_implies_w3", "Sec. 1 W0 lies in every class", "Kaehler flag implies the W3 flag", 0.0},
       [](A a) { return agree(!a.kahler || a.w3, a.kahler ? "Kaehler" : "not Kaehler"); }},
      {{"nijenhuis_antisymmetric", "Eq. (2.5) N(x,y) = -N(y,x)", "Nijenhuis tensor is antisymmetric", 1e-9},
       [](A a) { return diff(a.N, -permute(a.N, {0, 2, 1})); }},
      {{"nijenhuis_assoc_symmetric", "Eq. (2.6) N*(x,y) = N*(y,x)", "associated Nijenhuis tensor is symmetric", 1e-9},
       [](A a) { return diff(a.Nstar, permute(a.Nstar, {0, 2, 1})); }},
      {{"eq_2_7_w3", "Eq. (2.7) N* = 0 on W3", "N* vanishes on W3 instances", 1e-9},
       [](A a) { return w3_only(a, [&] { return zero(a.Nstar, a.f_scale * a.j_scale); }); }},
      {{"nijenhuis_nonzero_w3", "Sec. 1 J non-integrable on W3", "N does not vanish on non-Kaehler W3 instances", 0.0},
       [](A a) { return w3_non_kahler(a, [&] { return nonzero(a.N.max_abs(), 1e-6 * a.f_scale, "max|N|"); }); }},
      {{"eq_2_10", "Eq. (2.10) = Eq. (2.9) on W3", "alternative contraction of nabla J equals its square norm",
        1e-9},
       [](A a) { return w3_only(a, [&] { return relative(a.norm, a.norm_alt); }); }},
      {{"eq_2_10_gap", "Eq. (2.10) differs from Eq. (2.9) outside W3",
        "the alternative contraction is not the square norm outside W3", 0.0},
       [](A a) {
         if (a.w3) return na("instance is in W3");
         return nonzero(std::abs(a.norm - a.norm_alt), 1e-6 * (1.0 + std::abs(a.norm)), "|(2.9) - (2.10)|");
       }},

      // Phi and the canonical connection
      {{"phi_dual", "Eq. (3.10) against Eq. (3.7)", "Phi from F equals the difference of the two Levi-Civita connections",
        1e-9},
       [](A a) { return diff(a.phi, a.phi_dual, a.f_scale * a.j_scale); }},
      {{"eq_3_11", "Eq. (3.11) Phi(x,y,z) = F(Jz,x,y)", "Phi reduces to F(Jz,x,y) on W3", 1e-9},
       [](A a) { return w3_only(a, [&] { return diff(a.phi, phi_expected_on_w3(a), a.f_scale * a.j_scale); }); }},
      {{"canonical_paths", "Eq. (4.3) against Eq. (4.7)", "general and quasi-Kaehler forms of the canonical connection agree",
        1e-9},
       [](A a) { return w3_only(a, [&] { return diff(a.can.prime.gamma, a.can_qk->prime.gamma, a.f_scale * a.j_scale); }); }},
      {{"canonical_natural", "Sec. 2 natural connection; Sec. 3 canonical connection", "canonical connection has nabla'J = nabla'g = 0",
        1e-9},
       [](A a) { return natural(a.can, a); }},
      {{"eq_3_2", "Eq. (3.2) T(x,y,z) = Q(x,y,z) - Q(y,x,z)", "torsion from the deformation tensor", 1e-9},
       [](A a) { return diff(a.can.T, a.can.Q - permute(a.can.Q, {1, 0, 2})); }},
      {{"eq_3_3", "Eq. (3.3) T(x,y,z) = -T(y,x,z)", "torsion antisymmetric in its first two arguments", 1e-9},
       [](A a) { return value(first_pair_antisymmetry(a.can.T), std::max(1.0, a.can.T.max_abs())); }},
      {{"eq_3_5", "Eq. (3.5) F(x,y,z) = Q(x,y,Jz) - Q(x,Jy,z)", "naturality condition on Q from nabla'J = 0", 1e-9},
       [](A a) { return value(a.nat.f_from_q, max_of({a.f_scale, a.can.Q.max_abs()}) * a.j_scale); }},
      {{"eq_3_6", "Eq. (3.6) Q(x,y,z) = -Q(x,z,y)", "naturality condition on Q from nabla'g = 0", 1e-9},
       [](A a) { return value(a.nat.q_skew_last_pair, std::max(1.0, a.can.Q.max_abs())); }},
      {{"eq_3_8_first", "Eq. (3.8) 4 p2(x,y,z) = g(N(x,y),z)", "Theorem 3.1, first equality", 1e-9},
       [](A a) { return value(a.nat.p2_vs_nijenhuis, a.f_scale * a.j_scale * a.j_scale); }},
      {{"eq_3_8_second", "Eq. (3.8) g(N(x,y),z) = 2{Phi(z,Jx,Jy) - Phi(z,x,y)}", "Theorem 3.1, second equality", 1e-9},
       [](A a) { return value(a.nat.nijenhuis_vs_phi, a.f_scale * a.j_scale * a.j_scale); }},
      {{"eq_3_9", "Eq. (3.9)", "Theorem 3.1, p3 through Phi", 1e-9},
       [](A a) { return value(a.nat.p3_vs_phi, a.f_scale * a.j_scale * a.j_scale); }},
      {{"projection_sum", "Eq. (3.4) p1 + p2 + p3 + p4 = T", "torsion projections sum to T", 1e-9},
       [](A a) { return diff(a.proj.sum(), a.can.T); }},
      {{"eq_4_1", "Eq. (4.1)", "defining torsion condition of the canonical connection", 1e-9},
       [](A a) { return zero(canonical_torsion_condition(a.can.T, a.J), std::max(1.0, a.can.T.max_abs()) * a.j_scale * a.j_scale); }},
      {{"eq_4_4", "Eq. (4.4) T(Jx,y,z) = -T(x,y,Jz)", "canonical torsion moves J from first to last argument", 1e-9},
       [](A a) {
         return w3_only(a, [&] { return diff(apply_J(a.can.T, 0, a.J), -apply_J(a.can.T, 2, a.J)); });
       }},
      {{"eq_4_5", "Eq. (4.5) T(Jx,y,z) = T(x,Jy,z) = -T(x,y,Jz), T(x,y,z) = -T(y,x,z)", "canonical torsion J-symmetries", 1e-9},
       [](A a) {
         return w3_only(a, [&] {
           const DenseTensor t0 = apply_J(a.can.T, 0, a.J);
           const double r = max_of({max_abs_diff(t0, apply_J(a.can.T, 1, a.J)), max_abs_diff(t0, -apply_J(a.can.T, 2, a.J)),
                                    first_pair_antisymmetry(a.can.T)});
           return value(r, std::max(1.0, t0.max_abs()));
         });
       }},
      {{"thm_4_2", "Theorem 4.2 T = p2; Eq. (4.2) p1 = p4 = 0", "canonical torsion lies in the second component", 1e-9},
       [](A a) {
         return w3_only(a, [&] {
           const double r = max_of({max_abs_diff(a.can.T, a.proj.p2), a.proj.p1.max_abs(), a.proj.p3.max_abs(),
                                    a.proj.p4.max_abs()});
           return value(r, std::max(1.0, a.can.T.max_abs()) * a.j_scale * a.j_scale);
         });
       }},
      {{"thm_3_3", "Theorem 3.3 p2 != 0, p3 = 0", "W3 non-Kaehler: p2 nonzero and p3 zero", 1e-9},
       [](A a) {
         return w3_non_kahler(a, [&] {
           const double p2 = a.proj.p2.max_abs();
           const double floor = 1e-6 * a.f_scale;
           const double r = std::max(a.proj.p3.max_abs(), p2 >= floor ? 0.0 : floor - p2 + 1.0);
           return value(r, std::max(1.0, a.can.T.max_abs()) * a.j_scale * a.j_scale, "max|p2| = " + fmt(p2));
         });
       }},
      {{"w0_torsion_free", "Sec. 3 W0 characterized by T = 0", "Kaehler instances have vanishing canonical torsion", 1e-9},
       [](A a) {
         if (!a.kahler) return na("instance is not Kaehler");
         return value(std::max(a.can.T.max_abs(), a.can.Q.max_abs()), 1.0);
       }},
      {{"eq_4_9", "Eq. (4.9) T(x,y,z) = 1/2{F(x,Jy,z) + F(Jx,y,z)}", "canonical torsion from F", 1e-9},
       [](A a) { return w3_only(a, [&] { return diff(a.can.T, canonical_T_from_F(a.F, a.J), a.f_scale * a.j_scale); }); }},
      {{"eq_4_10", "Eq. (4.10) F(x,y,z) = T(x,z,Jy) - T(x,Jy,z)", "F recovered from the canonical torsion", 1e-9},
       [](A a) { return w3_only(a, [&] { return diff(a.F, f_from_torsion(a.can.T, a.J), a.f_scale * a.j_scale); }); }},
      {{"eq_4_11", "Eq. (4.11)", "canonical deformation tensor from F", 1e-9},
       [](A a) { return w3_only(a, [&] { return diff(a.can.Q, canonical_Q_from_F(a.F, a.J), a.f_scale * a.j_scale); }); }},
      {{"eq_4_12", "Eq. (4.12) Q(x,y,z) = -Q(y,x,z) + F(Jz,x,y)", "canonical Q against its transpose", 1e-9},
       [](A a) {
         return w3_only(a, [&] {
           return diff(a.can.Q, -permute(a.can.Q, {1, 0, 2}) + phi_expected_on_w3(a), a.f_scale * a.j_scale);
         });
       }},
      {{"eq_4_14", "Eq. (4.14) g^ij Q(e_i,e_j,z) = 0", "trace of the canonical Q over its first pair", 1e-9},
       [](A a) {
         return w3_only(a, [&] {
           return zero(trace_first_pair(a.can.Q, a.s),
                       std::max(1.0, a.can.Q.max_abs()) * std::max(1.0, a.s.g_inv.max_abs()) * a.s.dim());
         });
       }},
      {{"hayden_Q", "Eq. (6.2) Q = 1/2{T(x,y,z) - T(y,z,x) + T(z,x,y)}", "metric connection Q recovered from its torsion",
        1e-9},
       [](A a) { return diff(a.can.Q, hayden_Q_from_T(a.can.T)); }},
      {{"q_canonical_three_term", "Sec. 7 Q^C", "three-term form of the canonical deformation tensor", 1e-9},
       [](A a) { return w3_only(a, [&] { return diff(a.can.Q, canonical_Q_three_term(a.F, a.J), a.f_scale * a.j_scale); }); }},

      // B- and KT-connections
      {{"mean_connection", "Sec. 7 Proposition Q^B = 1/2(Q^KT + Q^C)", "B-connection is the mean of the canonical and KT-connections",
        1e-9},
       [](A a) { return w3_only(a, [&] { return diff(a.b.Q, 0.5 * (a.kt.Q + a.can.Q), a.f_scale * a.j_scale); }); }},
      {{"kt_skew", "Sec. 7 KT torsion totally skew-symmetric", "KT torsion antisymmetric in all arguments", 1e-9},
       [](A a) { return w3_only(a, [&] { return value(total_skew_defect(a.kt.T), std::max(1.0, a.kt.T.max_abs())); }); }},
      {{"b_natural", "Sec. 7 Q^B(x,y,z) = 1/2 F(x,Jy,z)", "B-connection is natural on W3", 1e-9},
       [](A a) { return w3_only(a, [&] { return natural(a.b, a); }); }},
      {{"kt_natural", "Sec. 7 Q^KT(x,y,z) = -1/4 S F(x,y,Jz)", "KT-connection is natural on W3", 1e-9},
       [](A a) { return w3_only(a, [&] { return natural(a.kt, a); }); }},
      {{"b_torsion_negative_control", "Eq. (4.10) applied to the B-connection",
        "B torsion does not reproduce F through the canonical inversion formula", 0.0},
       [](A a) {
         return w3_non_kahler(a, [&] {
           return nonzero(max_abs_diff(f_from_torsion(a.b.T, a.J), a.F), 1e-6 * a.f_scale, "max|F_B - F|");
         });
       }},
      {{"levi_civita_not_natural", "Sec. 2 natural connection", "Levi-Civita connection fails nabla J = 0 on non-Kaehler W3",
        0.0},
       [](A a) { return w3_non_kahler(a, [&] { return nonzero(a.D.max_abs(), 1e-6, "max|nabla J|"); }); }},

      // curvature
      {{"lc_curvature_antisymmetry", "Eq. (2.11)", "Levi-Civita curvature antisymmetries", 1e-9, true},
       [](A a) { return value(std::max(a.k_R.antisym_first, a.k_R.antisym_last), a.curvature_scale); }},
      {{"lc_bianchi", "Eq. (2.12)", "first Bianchi identity of the Levi-Civita curvature", 1e-9, true},
       [](A a) { return value(a.k_R.bianchi, a.curvature_scale); }},
      {{"rprime_2_11", "Eq. (2.11) for R'", "canonical curvature antisymmetries", 1e-9, true},
       [](A a) { return value(std::max(a.k_Rp.antisym_first, a.k_Rp.antisym_last), a.curvature_scale); }},
      {{"rprime_2_13", "Eq. (2.13) R'(x,y,Jz,Jw) = -R'(x,y,z,w)", "canonical curvature is J-anti-invariant in its last pair",
        1e-9, true},
       [](A a) { return value(a.k_Rp.j_invariance, a.curvature_scale); }},
      {{"eq_4_16", "Eq. (4.16)", "canonical curvature: direct against the deformation formula", 1e-9, true},
       [](A a) { return diff(a.Rp.R, rprime_via_deformation(a.R.R, a.can.Q, a.nabla_Q, a.s), a.curvature_scale); }},
      {{"eq_4_17", "Eq. (4.17)", "canonical Ricci tensor: contraction against the deformation formula", 1e-9, true},
       [](A a) {
         // The contraction drops two traces of Q that vanish only on W3.
         return w3_only(a, [&] {
           return diff(a.Rp.ricci, ricci_via_deformation(a.R.ricci, a.can.Q, a.nabla_Q, a.s),
                       a.curvature_scale * std::max(1.0, a.s.g_inv.max_abs()) * a.s.dim());
         });
       }},
      {{"eq_4_18", "Eq. (4.18)", "scalar curvatures through the quadratic Q contraction", 1e-9, true},
       [](A a) {
         return w3_only(a, [&] { return relative(a.Rp.scalar, a.R.scalar + scalar_deformation_term(a.can.Q, a.s)); });
       }},
      {{"eq_4_19_p_form", "Eq. (4.19) P_jk form", "quadratic Q contraction equals 1/16 of the P contraction", 1e-9},
       [](A a) {
         return w3_only(a, [&] { return relative(scalar_deformation_term(a.can.Q, a.s), p_form_contraction(a.D, a.s)); });
       }},
      {{"eq_4_19_norm", "Eq. (4.19) = -1/4 ||nabla J||", "P contraction against the square norm", 1e-9},
       [](A a) { return w3_only(a, [&] { return relative(p_form_contraction(a.D, a.s), -0.25 * a.norm); }); }},
      {{"thm_4_4", "Theorem 4.4, Eq. (4.13) tau' = tau - 1/4 ||nabla J||", "scalar curvature relation", 1e-8, true},
       [](A a) {
         return w3_only(a, [&] {
           const double lhs = a.Rp.scalar - a.R.scalar;
           std::string note = "tau = " + fmt(a.R.scalar) + ", tau' = " + fmt(a.Rp.scalar) + ", ||nabla J|| = " + fmt(a.norm);
           if (!a.isotropic) note += ", (tau' - tau)/||nabla J|| = " + fmt(lhs / a.norm);
           return value(std::abs(lhs + 0.25 * a.norm), 1.0 + std::abs(a.R.scalar) + std::abs(a.Rp.scalar), note);
         });
       }},
      {{"cor_4_5", "Corollary 4.5 tau' = tau iff ||nabla J|| = 0", "isotropic-Kaehler verdict agrees with equal scalar curvatures",
        0.0, true},
       [](A a) {
         return w3_only(a, [&] {
           const bool equal = std::abs(a.Rp.scalar - a.R.scalar) <= a.tau_tolerance;
           return agree(equal == a.isotropic, std::string("tau' = tau: ") + (equal ? "yes" : "no") +
                                                  ", isotropic: " + (a.isotropic ? "yes" : "no"));
         });
       }},

      // Bianchi identity with torsion and Kaehler R'
      {{"lemma_5_1", "Lemma 5.1, Eq. (5.1)", "cyclic sum of R' equals the torsion Bianchi expression", 1e-9, true},
       [](A a) { return diff(cyclic_sum(a.Rp.R), a.bianchi_T, a.curvature_scale); }},
      {{"lemma_5_1_verdict", "Lemma 5.1", "R' Kaehler iff the torsion Bianchi expression vanishes", 0.0, true},
       [](A a) {
         const bool vanishes = a.bianchi_T.max_abs() <= a.k_Rp.tolerance;
         return agree(vanishes == a.k_Rp.kahler, std::string("R' Kaehler: ") + (a.k_Rp.kahler ? "yes" : "no") +
                                                     ", max|(5.1)| = " + fmt(a.bianchi_T.max_abs()));
       }},
      {{"thm_5_2", "Theorem 5.2", "inner-product identity when R' is Kaehler", 1e-9, true},
       [](A a) {
         return kahler_rprime_gate(a, [&] { return zero(kahler_rprime_identity(a.D, a.s), a.curvature_scale); });
       }},
      {{"torsion_of_torsion", "Sec. 4 T(T(z,x),y,w) = 0", "torsion of torsion vanishes when R' is Kaehler", 1e-9, true},
       [](A a) {
         return kahler_rprime_gate(a, [&] { return zero(torsion_of_torsion(a.can.T, a.s), a.curvature_scale); });
       }},
      {{"eq_5_3", "Eq. (5.3)", "torsion identity when R' is Kaehler", 1e-9, true},
       [](A a) {
         return kahler_rprime_gate(a, [&] { return zero(torsion_gap_identity(a.can.T, a.D, a.s), a.curvature_scale); });
       }},

      // parallel torsion
      {{"prop_6_1", "Proposition 6.1", "T, Q and F are parallel together", 0.0, true},
       [](A a) {
         return agree(a.parallel_T == a.parallel_Q && a.parallel_Q == a.parallel_F,
                      "max|nabla'T| = " + fmt(a.nablap_T.max_abs()) + ", max|nabla'Q| = " + fmt(a.nablap_Q.max_abs()) +
                          ", max|nabla'F| = " + fmt(a.nablap_F.max_abs()));
       }},
      {{"eq_6_10", "Eq. (6.10) = -1/2 ||nabla J||", "crossed Q contraction against the square norm", 1e-9},
       [](A a) { return w3_only(a, [&] { return relative(crossed_q_contraction(a.can.Q, a.s), -0.5 * a.norm); }); }},
      {{"eq_6_11", "Eq. (6.11) = 1/4 ||nabla J||", "nabla J against torsion contraction", 1e-9},
       [](A a) {
         return w3_only(a, [&] { return relative(nabla_J_torsion_contraction(a.D, a.can.T, a.s), 0.25 * a.norm); });
       }},
      {{"lemma_6_2", "Lemma 6.2, Eq. (6.4)", "canonical curvature under parallel torsion, first form", 1e-9, true},
       [](A a) {
         return parallel_gate(a, [&] {
           return diff(a.Rp.R, rprime_parallel_lemma(a.R.R, a.can.Q, a.can.T, a.s), a.curvature_scale);
         });
       }},
      {{"thm_6_3", "Theorem 6.3, Eq. (6.5)", "canonical curvature under parallel torsion", 1e-9, true},
       [](A a) {
         return parallel_gate(a, [&] {
           return diff(a.Rp.R, rprime_parallel_theorem(a.R.R, a.can.Q, a.can.T, a.D, a.s), a.curvature_scale);
         });
       }},
      {{"thm_6_4", "Theorem 6.4", "parallel canonical torsion forces ||nabla J|| = 0", 1e-8, true},
       [](A a) {
         return parallel_gate(a, [&] {
           return value(std::abs(a.norm), a.f_scale * a.f_scale, "||nabla J|| = " + fmt(a.norm));
         });
       }},
  };
  return checks;
}

std::vector<std::pair<std::string, double>> measurements(A a) {
  std::vector<std::pair<std::string, double>> m;
  m.emplace_back("tau", a.R.scalar);
  m.emplace_back("tau_prime", a.Rp.scalar);
  m.emplace_back("norm_nabla_J", a.norm);
  m.emplace_back("norm_nabla_J_alt", a.norm_alt);
  m.emplace_back("max_F", a.F.max_abs());
  m.emplace_back("w3", a.w3 ? 1.0 : 0.0);
  m.emplace_back("kahler", a.kahler ? 1.0 : 0.0);
  m.emplace_back("isotropic", a.isotropic ? 1.0 : 0.0);
  m.emplace_back("max_nabla_prime_T", a.nablap_T.max_abs());
  m.emplace_back("lc_curvature_J_defect", a.k_R.j_invariance);
  {
    // Printed single-Phi form of the general canonical connection: how far from natural it is.
    const DeformedConnection printed = deform(a.loc.lc, a.p, canonical_Q_single_phi(a.phi, a.J));
    m.emplace_back("printed_canonical_nabla_J", natural_defect(printed, a).max_abs());
  }
  if (a.w3 && !a.isotropic) {
    m.emplace_back("scalar_gap_coefficient", (a.Rp.scalar - a.R.scalar) / a.norm);
    m.emplace_back("p_form_coefficient", p_form_contraction(a.D, a.s) / a.norm);
    m.emplace_back("crossed_q_coefficient", crossed_q_contraction(a.can.Q, a.s) / a.norm);
    m.emplace_back("nabla_J_torsion_coefficient", nabla_J_torsion_contraction(a.D, a.can.T, a.s) / a.norm);
  }
  return m;
}

}  // namespace

const std::vector<CheckInfo>& check_catalog() {
  static const std::vector<CheckInfo> infos = [] {
    std::vector<CheckInfo> out;
    for (const auto& c : registry()) out.push_back(c.info);
    return out;
  }();
  return infos;
}

bool is_known_check(const std::string& id) {
  for (const auto& c : check_catalog())
    if (c.id == id) return true;
  return false;
}

VerificationReport verify(const Model& model, const std::vector<std::string>& only) {
  return verify(model, only, tolerance_scale_from_env());
}

VerificationReport verify(const Model& model, const std::vector<std::string>& only, double tolerance_scale) {
  for (const auto& id : only)
    if (!is_known_check(id)) throw Error("unknown check id '" + id + "'");
  const ValidationOutcome vo = validate(model);
  if (!vo.ok()) {
    std::string msg;
    for (const auto& v : vo.violations) msg += (msg.empty() ? "" : "; ") + v.message;
    throw ValidationError(msg);
  }

  const Analysis a(model);
  const bool chart = model.frame.kind == FrameKind::chart;
  VerificationReport r;
  r.instance_name = model.name;
  r.provenance = model.provenance;
  for (const auto* dc : {&a.can, &a.b, &a.kt})
    for (const auto& w : dc->warnings) r.warnings.push_back(w);
  r.measurements = measurements(a);
  for (const auto& c : registry()) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.info.id) == only.end()) continue;
    const Eval e = c.eval(a);
    CheckRecord rec;
    rec.check_id = c.info.id;
    rec.paper_ref = c.info.paper_ref;
    rec.note = e.note;
    const double base = (chart && c.info.uses_finite_differences) ? std::max(c.info.base_tolerance, kChartTolerance)
                                                                   : c.info.base_tolerance;
    rec.tolerance = c.info.base_tolerance == 0.0 ? 0.0 : base * std::max(1.0, e.scale) * tolerance_scale;
    if (!e.applicable) {
      rec.verdict = Verdict::not_applicable;
    } else {
      rec.residual = e.residual;
      rec.verdict = e.residual <= rec.tolerance ? Verdict::pass : Verdict::fail;
    }
    r.checks.push_back(std::move(rec));
  }
  recount(r);
  return r;
}

}  // namespace norden
