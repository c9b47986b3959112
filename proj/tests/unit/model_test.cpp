#include <fstream>

#include "doctest.h"
#include "norden/model_io.hpp"
#include "support.hpp"

using namespace norden;

namespace {

bool has_violation(const ValidationOutcome& v, const std::string& text) {
  for (const auto& x : v.violations)
    if (x.message.find(text) != std::string::npos) return true;
  return false;
}

DenseTensor flat_g(int d) {
  return DenseTensor::generate(d, lower_slots(2), [d](int i, int j) { return i == j ? (i < d / 2 ? 1.0 : -1.0) : 0.0; });
}

}  // namespace

TEST_CASE("flat models satisfy the axioms") {
  for (int n : {1, 2, 3, 4}) {
    const ValidationOutcome v = validate(flat_model(n));
    CHECK(v.ok());
    CHECK(v.metric_signature == Signature{n, n, 0});
    CHECK(v.assoc_signature == Signature{n, n, 0});
    CHECK(v.j_squared_residual == 0.0);
  }
}

TEST_CASE("a definite metric is rejected for its signature") {
  Model m = flat_model(2);
  m.structure = NordenStructure::from_components(
      DenseTensor::generate(4, lower_slots(2), [](int i, int j) { return i == j ? 1.0 : 0.0; }), m.structure.J);
  const ValidationOutcome v = validate(m);
  CHECK_FALSE(v.ok());
  CHECK(has_violation(v, "signature must be (n,n)"));
  CHECK(has_violation(v, "J is not an anti-isometry of g"));
}

TEST_CASE("a non-symmetric metric is rejected") {
  Model m = flat_model(2);
  DenseTensor g = m.structure.g;
  g(0, 1) = 0.25;
  m.structure = NordenStructure::from_components(g, m.structure.J);
  CHECK(has_violation(validate(m), "metric not symmetric"));
}

TEST_CASE("J with J^2 != -1 is rejected") {
  Model m = flat_model(2);
  DenseTensor J = m.structure.J;
  J(2, 0) = 2.0;
  m.structure = NordenStructure::from_components(m.structure.g, J);
  CHECK(has_violation(validate(m), "J squared is not minus the identity"));
}

TEST_CASE("brackets that break the Jacobi identity are rejected") {
  // [e1,e2] = e3, [e2,e3] = e1, [e3,e1] = e1 is not a Lie algebra.
  DenseTensor C = DenseTensor::vector_valued(4, 2);
  auto set = [&](int k, int i, int j, double v) {
    C(k, i, j) = v;
    C(k, j, i) = -v;
  };
  set(2, 0, 1, 1.0);
  set(0, 1, 2, 1.0);
  set(0, 2, 0, 1.0);
  const Model flat = flat_model(2);
  const Model m = make_lie_model("bad", flat.structure.g, flat.structure.J, C);
  const ValidationOutcome v = validate(m);
  CHECK(has_violation(v, "Jacobi identity violated"));
  CHECK(v.jacobi_residual > 0.5);
}

TEST_CASE("associated metric matches a per-entry sum and squares to minus g") {
  const Model m = support::corpus_model("RN6");
  const auto& s = m.structure;
  const DenseTensor ga = associated_metric(s);
  const int d = s.dim();
  double worst = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double sum = 0.0;
      for (int k = 0; k < d; ++k) sum += s.g(i, k) * s.J(k, j);
      worst = std::max(worst, std::abs(ga(i, j) - sum));
    }
  CHECK(worst < 1e-12);
  // g~(x, Jy) = -g(x,y)
  CHECK(max_abs_diff(apply_J(ga, 1, s.J), -s.g) < 1e-9 * (1.0 + s.g.max_abs()));
}

TEST_CASE("signature counts eigenvalue signs") {
  CHECK(signature(flat_g(6)) == Signature{3, 3, 0});
  DenseTensor g = flat_g(4);
  g(0, 0) = 0.0;
  CHECK(signature(g) == Signature{1, 2, 1});
}

TEST_CASE("bracket evaluates the structure constants bilinearly") {
  const Model m = support::corpus_model("QK4");
  const std::vector<double> x{1.0, 0.0, 0.0, 0.0}, y{0.0, 1.0, 0.0, 0.0};
  const auto b = bracket(m.frame, x, y);
  for (int k = 0; k < 4; ++k) CHECK(b[static_cast<std::size_t>(k)] == m.frame.structure_constants(k, 0, 1));
  const auto bb = bracket(m.frame, y, x);
  for (int k = 0; k < 4; ++k) CHECK(bb[static_cast<std::size_t>(k)] == -b[static_cast<std::size_t>(k)]);
}

TEST_CASE("model files round-trip byte for byte") {
  for (const char* name : {"F4", "RN8", "QK6", "PT6", "CH4"}) {
    const Model m = support::corpus_model(name);
    const std::string text = emit_model(m);
    const Model back = parse_model(text);
    CHECK(emit_model(back) == text);
    CHECK(back.name == m.name);
    CHECK(back.structure.g == m.structure.g);
    CHECK(back.structure.J == m.structure.J);
    CHECK(back.provenance == m.provenance);
  }
}

TEST_CASE("syntax errors carry a line and column") {
  try {
    parse_model("{\n  \"dim\": 4,\n  \"metric\": [1, 2,,]\n}\n");
    FAIL("expected a parse error");
  } catch (const ModelFormatError& e) {
    CHECK(e.location().rfind("line 3, column", 0) == 0);
  }
}

TEST_CASE("field errors carry a JSON path") {
  const std::string good = emit_model(support::corpus_model("F4"));
  auto expect_location = [](const std::string& text, const std::string& where) {
    try {
      parse_model(text);
      FAIL("expected a format error");
    } catch (const ModelFormatError& e) {
      CHECK(e.location() == where);
    }
  };
  std::string no_metric = good;
  no_metric.replace(no_metric.find("\"metric\""), 8, "\"metrik\"");
  expect_location(no_metric, "/metric");
  std::string odd_dim = good;
  odd_dim.replace(odd_dim.find("\"dim\": 4"), 8, "\"dim\": 3");
  expect_location(odd_dim, "/dim");
  expect_location(R"({"kind": "lie_algebra", "dim": 2, "metric": [[1,0],[0,-1]], "J": [[0,-1],[1,0]],
                      "structure_constants": [[1, 2, 3, 1.0]]})",
                  "/structure_constants/0/2");
}

TEST_CASE("structure constants use 1-based indices and imply the antisymmetric partner") {
  const Model m = parse_model(R"({"kind": "lie_algebra", "dim": 2, "metric": [[1,0],[0,-1]], "J": [[0,-1],[1,0]],
                                  "structure_constants": [[1, 2, 2, 0.5]]})",
                              "tiny");
  CHECK(m.name == "tiny");
  CHECK(m.frame.structure_constants(1, 0, 1) == 0.5);
  CHECK(m.frame.structure_constants(1, 1, 0) == -0.5);
  CHECK(validate(m).ok());
}

TEST_CASE("loading a missing file is an error") {
  CHECK_THROWS_AS(load_model("/nonexistent/model.json"), Error);
}

TEST_CASE("a freshly generated model keeps its provenance order through a round trip") {
  const Model m = random_norden(3, 77);
  const std::string text = emit_model(m);
  CHECK(emit_model(parse_model(text)) == text);
  CHECK(parse_model(text).provenance == m.provenance);
}
