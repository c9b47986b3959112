#include "norden/forge.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "eigen_bridge.hpp"
#include "norden/connections.hpp"
#include "norden/curvature.hpp"
#include "norden/model_io.hpp"

namespace norden {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(phi);
  has_spare_ = true;
  return r * std::cos(phi);
}

int Rng::below(int n) { return std::min(n - 1, static_cast<int>(uniform() * n)); }

std::string to_string(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::flat: return "flat";
    case InstanceKind::random_norden: return "random_norden";
    case InstanceKind::quasi_kahler_search: return "quasi_kahler_search";
    case InstanceKind::isotropic_search: return "isotropic_search";
    case InstanceKind::parallel_torsion_search: return "parallel_torsion_search";
    case InstanceKind::chart_norden: return "chart_norden";
  }
  return "flat";
}

InstanceKind instance_kind_from_string(const std::string& text) {
  for (auto k : {InstanceKind::flat, InstanceKind::random_norden, InstanceKind::quasi_kahler_search,
                 InstanceKind::isotropic_search, InstanceKind::parallel_torsion_search, InstanceKind::chart_norden})
    if (to_string(k) == text) return k;
  throw Error("unknown instance kind '" + text + "'");
}

namespace {

struct Basis {
  DenseTensor g;
  DenseTensor J;
};

DenseTensor flat_J(int n) {
  const int d = 2 * n;
  DenseTensor J(d, {Variance::upper, Variance::lower});
  for (int i = 0; i < n; ++i) {
    J(n + i, i) = 1.0;
    J(i, n + i) = -1.0;
  }
  return J;
}

DenseTensor flat_g(int n) {
  const int d = 2 * n;
  return DenseTensor::generate(d, lower_slots(2), [&](int i, int j) { return i == j ? (i < n ? 1.0 : -1.0) : 0.0; });
}

// g' = P^T g P, J' = P^{-1} J P for a random well-conditioned P = I + 0.5 N(0,1).
Basis random_basis(int n, Rng& rng) {
  const int d = 2 * n;
  Eigen::MatrixXd P(d, d);
  while (true) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) P(i, j) = (i == j ? 1.0 : 0.0) + 0.5 * rng.normal();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(P);
    const auto& s = svd.singularValues();
    if (s(d - 1) > 0.0 && s(0) / s(d - 1) <= 30.0) break;
  }
  const Eigen::MatrixXd Pi = P.inverse();
  const Eigen::MatrixXd g = P.transpose() * bridge::to_matrix(flat_g(n)) * P;
  const Eigen::MatrixXd J = Pi * bridge::to_matrix(flat_J(n)) * P;
  return {bridge::from_matrix(0.5 * (g + g.transpose()), {Variance::lower, Variance::lower}),
          bridge::from_matrix(J, {Variance::upper, Variance::lower})};
}

DenseTensor bracket_element(int d, int k, int i, int j) {
  DenseTensor c = DenseTensor::vector_valued(d, 2);
  c(k, i, j) = 1.0;
  c(k, j, i) = -1.0;
  return c;
}

// Brackets of the first p frame vectors into the span of the rest: 2-step
// nilpotent, so the Jacobi identity holds for every choice of coefficients.
std::vector<DenseTensor> nilpotent_elements(int d, int p) {
  std::vector<DenseTensor> out;
  for (int k = p; k < d; ++k)
    for (int i = 0; i < p; ++i)
      for (int j = i + 1; j < p; ++j) out.push_back(bracket_element(d, k, i, j));
  return out;
}

std::vector<DenseTensor> all_elements(int d) {
  std::vector<DenseTensor> out;
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) out.push_back(bracket_element(d, k, i, j));
  return out;
}

PointData lie_point(const NordenStructure& s, const DenseTensor& c) {
  PointData p;
  p.structure = s;
  p.brackets = c;
  p.metric_derivative = DenseTensor::covariant(s.dim(), 3);
  p.J_derivative = DenseTensor(s.dim(), {Variance::lower, Variance::upper, Variance::lower});
  return p;
}

DenseTensor combine(const std::vector<DenseTensor>& xs, const Eigen::VectorXd& c) {
  DenseTensor out = 0.0 * xs.front();
  auto dst = out.components();
  for (std::size_t q = 0; q < xs.size(); ++q) {
    const double w = c(static_cast<Eigen::Index>(q));
    if (w == 0.0) continue;
    const auto src = xs[q].components();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += w * src[i];
  }
  return out;
}

// Structure constants ranging over the null space of the cyclic-sum-of-F
// constraint inside span(elements). Every quantity below is linear in C for a
// left-invariant structure, so it is tabulated once per null-space direction.
struct Family {
  NordenStructure s;
  std::vector<DenseTensor> C, gamma, D, F, Q, T;
  bool jacobi_automatic = false;

  int size() const { return static_cast<int>(C.size()); }
};

std::optional<Family> w3_family(const NordenStructure& s, const std::vector<DenseTensor>& elements, bool nilpotent) {
  const int d = s.dim();
  const Eigen::Index rows = static_cast<Eigen::Index>(d) * d * d;
  const Eigen::Index m = static_cast<Eigen::Index>(elements.size());
  if (m == 0) return std::nullopt;
  Eigen::MatrixXd A(rows, m);
  for (Eigen::Index b = 0; b < m; ++b) {
    const PointData p = lie_point(s, elements[static_cast<std::size_t>(b)]);
    const DenseTensor F = pair_with_metric(nabla_J(levi_civita(p), p), s.g);
    const DenseTensor cyc_t = cyclic_sum(F);
    const auto cyc = cyc_t.components();
    for (Eigen::Index r = 0; r < rows; ++r) A(r, b) = cyc[static_cast<std::size_t>(r)];
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-10 * smax) ++rank;
  if (rank >= m) return std::nullopt;

  Family fam;
  fam.s = s;
  fam.jacobi_automatic = nilpotent;
  const Eigen::MatrixXd& V = svd.matrixV();
  for (Eigen::Index q = rank; q < m; ++q) {
    const DenseTensor c = combine(elements, V.col(q));
    const PointData p = lie_point(s, c);
    const ConnectionCoeffs lc = levi_civita(p);
    const DenseTensor D = nabla_J(lc, p);
    const DenseTensor F = pair_with_metric(D, s.g);
    const DenseTensor Q = canonical_Q_general(phi_tensor(F, s.J), s.J);
    const DeformedConnection dc = deform(lc, p, Q, ConnectionLabel::canonical);
    fam.C.push_back(c);
    fam.gamma.push_back(lc.gamma);
    fam.D.push_back(D);
    fam.F.push_back(F);
    fam.Q.push_back(Q);
    fam.T.push_back(dc.T);
  }
  return fam;
}

double frob2(const DenseTensor& t) {
  double s = 0.0;
  for (double v : t.components()) s += v * v;
  return s;
}

using Residual = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

void append(std::vector<double>& out, const DenseTensor& t) {
  const auto c = t.components();
  out.insert(out.end(), c.begin(), c.end());
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Levenberg-Marquardt with central-difference Jacobians (exact for the
// quadratic residuals used here).
double levenberg_marquardt(const Residual& f, Eigen::VectorXd& c, int iterations) {
  const Eigen::Index m = c.size();
  Eigen::VectorXd r = f(c);
  double lambda = 1e-3;
  const double h = 1e-3;
  for (int it = 0; it < iterations && r.norm() > 1e-14; ++it) {
    Eigen::MatrixXd jac(r.size(), m);
    for (Eigen::Index p = 0; p < m; ++p) {
      Eigen::VectorXd cp = c, cm = c;
      cp(p) += h;
      cm(p) -= h;
      jac.col(p) = (f(cp) - f(cm)) / (2 * h);
    }
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd jtr = jac.transpose() * r;
    bool improved = false;
    while (!improved && lambda < 1e12) {
      Eigen::MatrixXd a = jtj;
      a.diagonal().array() += lambda;
      const Eigen::VectorXd step = a.ldlt().solve(-jtr);
      const Eigen::VectorXd cn = c + step;
      const Eigen::VectorXd rn = f(cn);
      if (rn.norm() < r.norm()) {
        c = cn;
        r = rn;
        lambda = std::max(lambda / 3.0, 1e-12);
        improved = true;
      } else {
        lambda *= 5.0;
      }
    }
    if (!improved) break;
  }
  return r.norm();
}

Eigen::VectorXd random_vector(Rng& rng, int m) {
  Eigen::VectorXd v(m);
  for (int i = 0; i < m; ++i) v(i) = rng.normal();
  return v;
}

// Rescales c so that the Frobenius norm of F is one.
void normalize_F(const Family& fam, Eigen::VectorXd& c) {
  const double n = std::sqrt(frob2(combine(fam.F, c)));
  if (n > 0.0) c /= n;
}

Model family_model(const Family& fam, const Eigen::VectorXd& c, const std::string& name) {
  return make_lie_model(name, fam.s.g, fam.s.J, combine(fam.C, c));
}

bool acceptable_w3(const Model& m) {
  if (!validate(m).ok()) return false;
  const PointData p = point_data(m);
  const DenseTensor F = pair_with_metric(nabla_J(levi_civita(p), p), p.structure.g);
  const ClassFlags flags = class_membership(F, p.structure);
  return flags.is_quasi_kahler && !flags.is_kahler;
}

// Residual of the general family: Jacobi entries (unless automatic), F normalisation, extras.
Residual family_residual(const Family& fam, std::function<void(const Eigen::VectorXd&, std::vector<double>&)> extra) {
  return [&fam, extra](const Eigen::VectorXd& c) {
    std::vector<double> out;
    if (!fam.jacobi_automatic) append(out, jacobi_tensor(combine(fam.C, c)));
    out.push_back(frob2(combine(fam.F, c)) - 1.0);
    if (extra) extra(c, out);
    return to_vector(out);
  };
}

std::optional<Family> nilpotent_w3_family(const NordenStructure& s) {
  const int d = s.dim();
  for (int p = d - 1; p >= 2; --p) {
    auto fam = w3_family(s, nilpotent_elements(d, p), true);
    if (!fam) continue;
    // F must not vanish identically on the family.
    double fmax = 0.0;
    for (const auto& f : fam->F) fmax = std::max(fmax, f.max_abs());
    if (fmax > 1e-8) return fam;
  }
  return std::nullopt;
}

NordenStructure structure_of(const Basis& b) { return NordenStructure::from_components(b.g, b.J); }

double parallel_residual(const Family& fam, const Eigen::VectorXd& c) {
  const DenseTensor gp = combine(fam.gamma, c) + vector_from_pairing(combine(fam.Q, c), fam.s.g_inv);
  const DenseTensor T = combine(fam.T, c);
  return covariant_derivative(T, DenseTensor::covariant(T.dim(), 4), gp).max_abs();
}

std::string format_residual(double r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", r);
  return buf;
}

}  // namespace

Model flat_model(int n) {
  if (n < 1) throw Error("flat_model requires n >= 1");
  Model m = make_lie_model("F" + std::to_string(2 * n), flat_g(n), flat_J(n), DenseTensor::vector_valued(2 * n, 2));
  m.provenance = {{"kind", "flat"}, {"dim", std::to_string(2 * n)}};
  return m;
}

Model random_norden(int n, std::uint64_t seed, int budget) {
  if (n < 1) throw Error("random_norden requires n >= 1");
  const int d = 2 * n;
  Rng rng(seed);
  for (int attempt = 0; attempt < budget; ++attempt) {
    const Basis b = random_basis(n, rng);
    DenseTensor c = DenseTensor::vector_valued(d, 2);
    if (d > 2) {
      const int p = 2 + rng.below(d - 2);  // 2 <= p <= d-1
      for (int k = p; k < d; ++k)
        for (int i = 0; i < p; ++i)
          for (int j = i + 1; j < p; ++j) {
            const double v = rng.normal();
            c(k, i, j) = v;
            c(k, j, i) = -v;
          }
    }
    Model m = make_lie_model("RN" + std::to_string(d), b.g, b.J, std::move(c));
    if (validate(m).ok()) {
      m.provenance = {{"kind", "random_norden"}, {"dim", std::to_string(d)}, {"seed", std::to_string(seed)}};
      return m;
    }
  }
  throw Error("generation failed; increase budget");
}

Model quasi_kahler_search(int n, std::uint64_t seed, int budget) {
  if (n < 1) throw Error("quasi_kahler_search requires n >= 1");
  const int d = 2 * n;
  Rng rng(seed);
  for (int attempt = 0; attempt < budget; ++attempt) {
    const NordenStructure s = structure_of(random_basis(n, rng));
    std::optional<Model> found;
    if (auto fam = nilpotent_w3_family(s)) {
      Eigen::VectorXd c = random_vector(rng, fam->size());
      normalize_F(*fam, c);
      Model m = family_model(*fam, c, "QK" + std::to_string(d));
      if (acceptable_w3(m)) found = std::move(m);
    }
    if (!found) {
      if (auto fam = w3_family(s, all_elements(d), false)) {
        const Residual f = family_residual(*fam, nullptr);
        Eigen::VectorXd c = random_vector(rng, fam->size());
        normalize_F(*fam, c);
        levenberg_marquardt(f, c, 200);
        Model m = family_model(*fam, c, "QK" + std::to_string(d));
        if (acceptable_w3(m)) found = std::move(m);
      }
    }
    if (found) {
      found->provenance = {{"kind", "quasi_kahler_search"}, {"dim", std::to_string(d)}, {"seed", std::to_string(seed)}};
      return *found;
    }
  }
  throw Error("no W₃ instance found");
}

SearchOutcome isotropic_search(int n, std::uint64_t seed, int budget) {
  if (n < 2) throw Error("isotropic_search requires n >= 2");
  const int d = 2 * n;
  Rng rng(seed);
  SearchOutcome out;
  out.best_residual = std::numeric_limits<double>::infinity();
  auto norm_of = [](const Family& fam, const Eigen::VectorXd& c) { return square_norm(fam.s, combine(fam.D, c)); };

  for (int attempt = 0; attempt < budget; ++attempt) {
    const NordenStructure s = structure_of(random_basis(n, rng));
    std::optional<Model> found;
    double residual = std::numeric_limits<double>::infinity();
    // In a Jacobi-free family the square norm is a quadratic form in c: mix a
    // positive and a negative direction to land on its zero set.
    if (auto fam = nilpotent_w3_family(s)) {
      Eigen::VectorXd a = random_vector(rng, fam->size());
      Eigen::VectorXd b = random_vector(rng, fam->size());
      normalize_F(*fam, a);
      normalize_F(*fam, b);
      const double qa = norm_of(*fam, a);
      const double qb = norm_of(*fam, b);
      if (qa * qb < 0.0) {
        const double qab = 0.5 * (norm_of(*fam, a + b) - qa - qb);
        Eigen::VectorXd c = a + ((-qab + std::sqrt(qab * qab - qa * qb)) / qb) * b;
        normalize_F(*fam, c);
        residual = std::abs(norm_of(*fam, c));
        Model m = family_model(*fam, c, "ISO" + std::to_string(d));
        if (residual <= 1e-8 && acceptable_w3(m)) found = std::move(m);
      }
    }
    if (!found) {
      if (auto fam = w3_family(s, all_elements(d), false)) {
        const Family& fr = *fam;
        const Residual f = family_residual(fr, [&fr, &norm_of](const Eigen::VectorXd& c, std::vector<double>& r) {
          r.push_back(norm_of(fr, c));
        });
        Eigen::VectorXd c = random_vector(rng, fr.size());
        normalize_F(fr, c);
        residual = std::min(residual, levenberg_marquardt(f, c, 200));
        Model m = family_model(fr, c, "ISO" + std::to_string(d));
        const double r = std::abs(norm_of(fr, c));
        if (r <= 1e-8 && acceptable_w3(m)) {
          found = std::move(m);
          residual = r;
        }
      }
    }
    out.best_residual = std::min(out.best_residual, residual);
    if (found) {
      found->provenance = {{"kind", "isotropic_search"}, {"dim", std::to_string(d)}, {"seed", std::to_string(seed)}};
      out.model = std::move(found);
      out.best_residual = residual;
      out.message = "found";
      return out;
    }
  }
  out.message = "not found, best residual " + format_residual(out.best_residual);
  return out;
}

SearchOutcome parallel_torsion_search(int n, std::uint64_t seed, int budget) {
  if (n < 2) throw Error("parallel_torsion_search requires n >= 2");
  const int d = 2 * n;
  Rng rng(seed);
  SearchOutcome out;
  out.best_residual = std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt < budget; ++attempt) {
    const NordenStructure s = structure_of(random_basis(n, rng));
    auto fam = w3_family(s, all_elements(d), false);
    if (!fam) continue;
    const Family& fr = *fam;
    const Residual f = family_residual(fr, [&fr](const Eigen::VectorXd& c, std::vector<double>& r) {
      const DenseTensor gp = combine(fr.gamma, c) + vector_from_pairing(combine(fr.Q, c), fr.s.g_inv);
      const DenseTensor T = combine(fr.T, c);
      append(r, covariant_derivative(T, DenseTensor::covariant(T.dim(), 4), gp));
    });
    Eigen::VectorXd c = random_vector(rng, fr.size());
    normalize_F(fr, c);
    const double total = levenberg_marquardt(f, c, 400);
    out.best_residual = std::min(out.best_residual, total);
    const double par = parallel_residual(fr, c);
    Model m = family_model(fr, c, "PT" + std::to_string(d));
    if (par <= 1e-8 * (1.0 + combine(fr.T, c).max_abs()) && acceptable_w3(m)) {
      m.provenance = {{"kind", "parallel_torsion_search"}, {"dim", std::to_string(d)}, {"seed", std::to_string(seed)}};
      out.model = std::move(m);
      out.best_residual = par;
      out.message = "found";
      return out;
    }
  }
  out.message = "not found, best residual " + format_residual(out.best_residual);
  return out;
}

Model chart_norden(int n, std::uint64_t seed) {
  if (n < 1) throw Error("chart_norden requires n >= 1");
  const int d = 2 * n;
  Rng rng(seed);
  auto random_entry = [&](double constant) {
    std::vector<Monomial> terms;
    if (constant != 0.0) terms.push_back({constant, std::vector<int>(static_cast<std::size_t>(d), 0)});
    for (int v = 0; v < d; ++v) {
      std::vector<int> e(static_cast<std::size_t>(d), 0);
      e[static_cast<std::size_t>(v)] = 1;
      terms.push_back({0.3 * rng.normal(), e});
    }
    std::vector<int> e(static_cast<std::size_t>(d), 0);
    ++e[static_cast<std::size_t>(rng.below(d))];
    ++e[static_cast<std::size_t>(rng.below(d))];
    terms.push_back({0.2 * rng.normal(), e});
    return Polynomial(d, std::move(terms)).simplified();
  };
  for (int attempt = 0; attempt < 16; ++attempt) {
    PolyMatrix A(static_cast<std::size_t>(n), std::vector<Polynomial>(static_cast<std::size_t>(n)));
    PolyMatrix B = A;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = random_entry(i == j ? 1.0 : 0.0);
        A[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        B[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = random_entry(0.0);
        B[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = B[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      }
    ChartData ch;
    ch.metric.assign(static_cast<std::size_t>(d), std::vector<Polynomial>(static_cast<std::size_t>(d)));
    ch.J.assign(static_cast<std::size_t>(d), std::vector<Polynomial>(static_cast<std::size_t>(d)));
    const DenseTensor J = flat_J(n);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const auto bi = static_cast<std::size_t>(i % n);
        const auto bj = static_cast<std::size_t>(j % n);
        const bool top = i < n;
        const bool left = j < n;
        Polynomial p = (top == left) ? A[bi][bj] : B[bi][bj];
        if (!top && !left) p *= -1.0;
        ch.metric[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = p;
        ch.J[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = Polynomial::constant(d, J(i, j));
      }
    for (int v = 0; v < d; ++v) ch.point.push_back(0.3 * rng.normal());
    Model m = make_chart_model("CH" + std::to_string(d), d, std::move(ch));
    if (validate(m).ok()) {
      m.provenance = {{"kind", "chart_norden"}, {"dim", std::to_string(d)}, {"seed", std::to_string(seed)}};
      return m;
    }
  }
  throw Error("generation failed; increase budget");
}

int default_budget(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::flat: return 0;
    case InstanceKind::random_norden: return 16;
    case InstanceKind::quasi_kahler_search: return 20;
    case InstanceKind::isotropic_search: return 20;
    case InstanceKind::parallel_torsion_search: return 6;
    case InstanceKind::chart_norden: return 16;
  }
  return 0;
}

SearchOutcome generate(const InstanceRecipe& r) {
  if (r.dim < 2 || r.dim % 2 != 0) throw Error("dimension must be even and >= 2");
  const int n = r.dim / 2;
  const int budget = r.budget > 0 ? r.budget : default_budget(r.kind);
  SearchOutcome out;
  switch (r.kind) {
    case InstanceKind::flat: out.model = flat_model(n); break;
    case InstanceKind::random_norden: out.model = random_norden(n, r.seed, budget); break;
    case InstanceKind::quasi_kahler_search: out.model = quasi_kahler_search(n, r.seed, budget); break;
    case InstanceKind::isotropic_search: out = isotropic_search(n, r.seed, budget); break;
    case InstanceKind::parallel_torsion_search: out = parallel_torsion_search(n, r.seed, budget); break;
    case InstanceKind::chart_norden: out.model = chart_norden(n, r.seed); break;
  }
  if (out.model) {
    if (!r.name.empty()) out.model->name = r.name;
    if (out.message.empty()) out.message = "found";
    auto& prov = out.model->provenance;
    if (r.kind != InstanceKind::flat) prov.emplace_back("budget", std::to_string(budget));
  }
  return out;
}

std::vector<InstanceRecipe> standard_corpus() {
  using K = InstanceKind;
  return {
      {"F2", K::flat, 2, 0, 0},
      {"F4", K::flat, 4, 0, 0},
      {"F6", K::flat, 6, 0, 0},
      {"RN4", K::random_norden, 4, 11, 0},
      {"RN4b", K::random_norden, 4, 12, 0},
      {"RN6", K::random_norden, 6, 13, 0},
      {"RN6b", K::random_norden, 6, 14, 0},
      {"RN8", K::random_norden, 8, 15, 0},
      {"QK4", K::quasi_kahler_search, 4, 7, 0},
      {"QK4b", K::quasi_kahler_search, 4, 8, 0},
      {"QK4c", K::quasi_kahler_search, 4, 9, 0},
      {"QK6", K::quasi_kahler_search, 6, 11, 0},
      {"QK6b", K::quasi_kahler_search, 6, 12, 0},
      {"QK8", K::quasi_kahler_search, 8, 13, 0},
      {"ISO4", K::isotropic_search, 4, 21, 0},
      {"ISO6", K::isotropic_search, 6, 21, 0},
      {"PT4", K::parallel_torsion_search, 4, 22, 2},
      {"PT6", K::parallel_torsion_search, 6, 22, 0},
      {"CH4", K::chart_norden, 4, 5, 0},
  };
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<ManifestEntry> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    ManifestEntry e;
    std::string kind;
    if (!(is >> e.recipe.name >> kind >> e.recipe.dim >> e.recipe.seed >> e.recipe.budget >> e.status >> e.residual))
      throw ModelFormatError(path.string() + ":" + std::to_string(lineno), "expected: name kind dim seed budget status residual");
    e.recipe.kind = instance_kind_from_string(kind);
    out.push_back(std::move(e));
  }
  return out;
}

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << "# name kind dim seed budget status residual\n";
  for (const auto& e : entries) {
    out << e.recipe.name << ' ' << to_string(e.recipe.kind) << ' ' << e.recipe.dim << ' ' << e.recipe.seed << ' '
        << e.recipe.budget << ' ' << e.status << ' ' << format_residual(e.residual) << '\n';
  }
}

std::vector<ManifestEntry> build_corpus(const std::filesystem::path& dir, const std::vector<InstanceRecipe>& recipes) {
  std::filesystem::create_directories(dir);
  std::vector<ManifestEntry> entries;
  for (const auto& r : recipes) {
    SearchOutcome o = generate(r);
    ManifestEntry e{r, o.found() ? "ok" : "not_found", o.best_residual};
    if (o.model) save_model(*o.model, dir / (r.name + ".json"));
    entries.push_back(std::move(e));
  }
  write_manifest(dir / "MANIFEST", entries);
  return entries;
}

}  // namespace norden
