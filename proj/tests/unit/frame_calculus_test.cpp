#include "doctest.h"
#include "norden/frame_calculus.hpp"
#include "support.hpp"

using namespace norden;

namespace {

Polynomial constant(double c) { return Polynomial::constant(4, c); }

// diag(1 + u1^2, 1, -(1 + u1^2), -1) with J e1 = e3, J e2 = e4.
Model warped_chart(double u1) {
  const Polynomial a(4, {{1.0, {0, 0, 0, 0}}, {1.0, {2, 0, 0, 0}}});
  PolyMatrix g(4, std::vector<Polynomial>(4, constant(0.0)));
  g[0][0] = a;
  g[1][1] = constant(1.0);
  g[2][2] = -1.0 * a;
  g[3][3] = constant(-1.0);
  PolyMatrix J(4, std::vector<Polynomial>(4, constant(0.0)));
  J[2][0] = constant(1.0);
  J[3][1] = constant(1.0);
  J[0][2] = constant(-1.0);
  J[1][3] = constant(-1.0);
  return make_chart_model("warped", 4, ChartData{g, J, {u1, 0.2, -0.1, 0.4}, 1e-5});
}

}  // namespace

TEST_CASE("chart Christoffel symbols match the closed form") {
  const double u = 0.7;
  const Model m = warped_chart(u);
  REQUIRE(validate(m).ok());
  const DenseTensor gamma = levi_civita(m).gamma;
  const double c = u / (1.0 + u * u);
  DenseTensor expected = DenseTensor::vector_valued(4, 2);
  expected(0, 0, 0) = c;
  expected(0, 2, 2) = c;
  expected(2, 0, 2) = c;
  expected(2, 2, 0) = c;
  CHECK(max_abs_diff(gamma, expected) < 1e-12);
}

TEST_CASE("finite-difference Christoffel symbols agree with the exact route") {
  for (const Model& m : {warped_chart(0.3), support::corpus_model("CH4")}) {
    const DenseTensor exact = levi_civita(m).gamma;
    const DenseTensor fd = christoffels_finite_difference(m.frame);
    CHECK(max_abs_diff(exact, fd) < 1e-6);
  }
}

TEST_CASE("the flat model has a flat Levi-Civita connection") {
  const Model m = flat_model(3);
  const ConnectionCoeffs lc = levi_civita(m);
  CHECK(lc.gamma.max_abs() == 0.0);
  CHECK(lc.metric_compatible);
  CHECK(lc.torsion_free);
}

TEST_CASE("Levi-Civita is metric and torsion free on every corpus instance") {
  for (const char* name : {"RN4", "RN8", "QK6", "ISO6", "PT6", "CH4"}) {
    const Model m = support::corpus_model(name);
    const PointData pd = point_data(m);
    const ConnectionCoeffs lc = levi_civita(pd);
    CHECK(lc.metric_compatible);
    CHECK(lc.torsion_free);
    const double scale = 1.0 + lc.gamma.max_abs();
    CHECK(metric_covariant_derivative(lc.gamma, pd).max_abs() < 1e-9 * scale * (1.0 + pd.structure.g.max_abs()));
    CHECK(torsion_vector(lc.gamma, pd.brackets).max_abs() < 1e-9 * scale);
  }
}

TEST_CASE("nabla J anticommutes with J and F has the Norden symmetries") {
  for (const char* name : {"RN4", "RN6b", "QK4", "ISO4", "CH4"}) {
    const Model m = support::corpus_model(name);
    const PointData pd = point_data(m);
    const DenseTensor dJ = nabla_J(levi_civita(pd), pd);
    const auto& J = pd.structure.J;
    // (nabla_a J) J + J (nabla_a J) = 0, per entry.
    const int d = pd.dim();
    double worst = 0.0;
    for (int a = 0; a < d; ++a)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          double s = 0.0;
          for (int k = 0; k < d; ++k) s += dJ(i, a, k) * J(k, j) + J(i, k) * dJ(k, a, j);
          worst = std::max(worst, std::abs(s));
        }
    CHECK(worst < 1e-9 * (1.0 + dJ.max_abs()) * (1.0 + J.max_abs()));
    const DenseTensor F = fundamental_F(dJ, pd.structure);
    CHECK(f_symmetry_residuals(F, J).max() < 1e-9 * (1.0 + F.max_abs()) * (1.0 + J.max_abs()) * (1.0 + J.max_abs()));
  }
}

TEST_CASE("fundamental_F rejects a tensor without the Norden symmetries") {
  const Model m = flat_model(2);
  DenseTensor junk = DenseTensor::vector_valued(4, 2);
  junk(0, 0, 1) = 1.0;
  CHECK_THROWS_WITH(fundamental_F(junk, m.structure), "not a fundamental tensor of a Norden structure");
}

TEST_CASE("class membership separates quasi-Kaehler and general instances") {
  auto flags_of = [](const char* name) {
    const Model m = support::corpus_model(name);
    const PointData pd = point_data(m);
    const DenseTensor F = fundamental_F(nabla_J(levi_civita(pd), pd), pd.structure);
    return class_membership(F, pd.structure);
  };
  const ClassFlags flat = flags_of("F4");
  CHECK(flat.is_kahler);
  CHECK(flat.is_quasi_kahler);
  for (const char* qk : {"QK4", "QK6b", "QK8", "ISO4", "PT6"}) {
    const ClassFlags f = flags_of(qk);
    CHECK_MESSAGE(f.is_quasi_kahler, qk);
    CHECK_MESSAGE(!f.is_kahler, qk);
    CHECK_MESSAGE(f.consistent(), qk);
  }
  for (const char* rn : {"RN4", "RN4b", "RN6", "RN8", "CH4"}) {
    const ClassFlags f = flags_of(rn);
    CHECK_MESSAGE(!f.is_quasi_kahler, rn);
    CHECK_MESSAGE(f.consistent(), rn);
  }
}

TEST_CASE("Nijenhuis tensors have their symmetries") {
  const Model m = support::corpus_model("RN6");
  const PointData pd = point_data(m);
  const DenseTensor dJ = nabla_J(levi_civita(pd), pd);
  const DenseTensor N = nijenhuis(pd.structure, dJ);
  const DenseTensor Ns = nijenhuis_assoc(pd.structure, dJ);
  CHECK(max_abs_diff(N, -permute(N, {0, 2, 1})) < 1e-9 * (1.0 + N.max_abs()));
  CHECK(max_abs_diff(Ns, permute(Ns, {0, 2, 1})) < 1e-9 * (1.0 + Ns.max_abs()));
  CHECK(N.max_abs() > 1e-3);
}

TEST_CASE("the two norm formulas agree on W3 and differ elsewhere") {
  for (const char* name : {"QK4", "QK6", "QK8", "PT6"}) {
    const Model m = support::corpus_model(name);
    const PointData pd = point_data(m);
    const DenseTensor dJ = nabla_J(levi_civita(pd), pd);
    const double a = square_norm(pd.structure, dJ), b = square_norm_alt(pd.structure, dJ);
    CHECK(std::abs(a - b) <= 1e-9 * (1.0 + std::abs(a)));
  }
  int gaps = 0;
  for (const char* name : {"RN4", "RN4b", "RN6", "RN6b", "RN8"}) {
    const Model m = support::corpus_model(name);
    const PointData pd = point_data(m);
    const DenseTensor dJ = nabla_J(levi_civita(pd), pd);
    if (std::abs(square_norm(pd.structure, dJ) - square_norm_alt(pd.structure, dJ)) > 1e-6) ++gaps;
  }
  CHECK(gaps >= 1);
}

TEST_CASE("isotropic instances have a null nabla J with nonzero F") {
  for (const char* name : {"ISO4", "ISO6"}) {
    const Model m = support::corpus_model(name);
    const PointData pd = point_data(m);
    const DenseTensor dJ = nabla_J(levi_civita(pd), pd);
    CHECK(std::abs(square_norm(pd.structure, dJ)) < 1e-8);
    CHECK(fundamental_F(dJ, pd.structure).max_abs() > 1e-3);
  }
}
