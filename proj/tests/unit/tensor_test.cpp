#include "doctest.h"
#include "support.hpp"

using namespace norden;

TEST_CASE("contract matches an explicit triple loop") {
  Rng rng(11);
  for (int d : {2, 4, 6}) {
    const DenseTensor a = support::random_tensor(d, {Variance::lower, Variance::upper, Variance::lower}, rng);
    const DenseTensor b = support::random_tensor(d, {Variance::lower, Variance::lower}, rng);
    const DenseTensor c = contract(a, 1, b, 0);
    REQUIRE(c.rank() == 3);
    CHECK(c.variance() == lower_slots(3));
    double worst = 0.0;
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          double s = 0.0;
          for (int m = 0; m < d; ++m) s += a(i, m, k) * b(m, l);
          worst = std::max(worst, std::abs(c(i, k, l) - s));
        }
    CHECK(worst < 1e-13);
  }
}

TEST_CASE("contract rejects equal variance and mismatched dimensions") {
  const DenseTensor a = DenseTensor::covariant(4, 2);
  CHECK_THROWS_WITH(contract(a, 0, a, 1), "contraction requires opposite variance");
  CHECK_THROWS_WITH(contract(DenseTensor::identity(4), 0, DenseTensor::covariant(2, 1), 0),
                    "contraction requires matching dimensions");
  CHECK_THROWS(contract(a, 2, a, 0));
}

TEST_CASE("metric times inverse metric is the identity") {
  Rng rng(3);
  for (int d : {4, 6, 8}) {
    const DenseTensor g = support::random_metric(d, rng);
    const DenseTensor delta = contract(g, 1, inverse_metric(g), 0);
    CHECK(max_abs_diff(DenseTensor::generate(d, lower_slots(2), [&](int i, int j) { return delta(i, j); }),
                       DenseTensor::generate(d, lower_slots(2), [](int i, int j) { return i == j ? 1.0 : 0.0; })) <
          1e-11);
  }
}

TEST_CASE("inverse of a singular metric is reported") {
  DenseTensor g = DenseTensor::covariant(4, 2);
  g(0, 0) = 1.0;
  CHECK_THROWS_WITH(inverse_metric(g), "metric not invertible");
}

TEST_CASE("raising one slot matches a per-entry sum with the inverse metric") {
  Rng rng(5);
  const int d = 4;
  const DenseTensor g = support::random_metric(d, rng);
  const DenseTensor gi = inverse_metric(g);
  const DenseTensor t = support::random_tensor(d, lower_slots(3), rng);
  const DenseTensor up = raise_lower(t, 1, g, Direction::raise);
  CHECK(up.variance(1) == Variance::upper);
  double worst = 0.0;
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k)
      for (int l = 0; l < d; ++l) {
        double s = 0.0;
        for (int m = 0; m < d; ++m) s += gi(k, m) * t(i, m, l);
        worst = std::max(worst, std::abs(up(i, k, l) - s));
      }
  CHECK(worst < 1e-12);
}

TEST_CASE("raise then lower is the identity on random tensors") {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 * (1 + trial % 3);
    const DenseTensor g = support::random_metric(d, rng);
    const DenseTensor t = support::random_tensor(d, lower_slots(3), rng);
    const int slot = trial % 3;
    const DenseTensor back = raise_lower(raise_lower(t, slot, g, Direction::raise), slot, g, Direction::lower);
    CHECK(max_abs_diff(t, back) < 1e-10 * (1.0 + t.max_abs()));
  }
}

TEST_CASE("raise_lower refuses a slot of the wrong variance and a non-symmetric metric") {
  const Model m = flat_model(2);
  const DenseTensor t = DenseTensor::covariant(4, 2);
  CHECK_THROWS_WITH(raise_lower(t, 0, m.structure.g, Direction::lower), "raise_lower: slot is already lower");
  DenseTensor g = m.structure.g;
  g(0, 1) = 0.5;
  CHECK_THROWS_WITH(raise_lower(t, 0, g, Direction::raise), "metric not symmetric");
}

TEST_CASE("applying J twice negates every lower slot") {
  for (const char* name : {"RN4", "QK6", "RN8"}) {
    const Model m = support::corpus_model(name);
    Rng rng(7);
    const int d = m.structure.dim();
    const DenseTensor t = support::random_tensor(d, lower_slots(3), rng);
    for (int slot = 0; slot < 3; ++slot) {
      const DenseTensor twice = apply_J(apply_J(t, slot, m.structure.J), slot, m.structure.J);
      CHECK(max_abs_diff(twice, -t) < 1e-9 * (1.0 + t.max_abs()));
    }
  }
}

TEST_CASE("apply_J uses the column convention J e_j = J^i_j e_i") {
  const Model m = flat_model(2);
  DenseTensor covector = DenseTensor::covariant(4, 1);
  covector(2) = 1.0;  // picks the e_3 component
  const DenseTensor shifted = apply_J(covector, 0, m.structure.J);
  // J e_1 = e_3, so omega(J e_1) = 1.
  CHECK(shifted(0) == doctest::Approx(1.0));
  CHECK(shifted(2) == doctest::Approx(0.0));
  CHECK_THROWS_WITH(apply_J(DenseTensor::identity(4), 0, m.structure.J), "apply_J: slot must be a lower (argument) slot");
}

TEST_CASE("contraction and apply_J are bilinear") {
  Rng rng(99);
  const Model m = support::corpus_model("RN6");
  const int d = 6;
  for (int trial = 0; trial < 10; ++trial) {
    const double s = rng.normal(), u = rng.normal();
    const DenseTensor a = support::random_tensor(d, {Variance::upper, Variance::lower}, rng);
    const DenseTensor a2 = support::random_tensor(d, {Variance::upper, Variance::lower}, rng);
    const DenseTensor b = support::random_tensor(d, lower_slots(2), rng);
    const DenseTensor lhs = contract(s * a + u * a2, 0, b, 1);
    const DenseTensor rhs = s * contract(a, 0, b, 1) + u * contract(a2, 0, b, 1);
    CHECK(max_abs_diff(lhs, rhs) < 1e-11 * (1.0 + rhs.max_abs()));
    const DenseTensor jl = apply_J(s * b, 1, m.structure.J);
    CHECK(max_abs_diff(jl, s * apply_J(b, 1, m.structure.J)) < 1e-11 * (1.0 + jl.max_abs()));
  }
}

TEST_CASE("permute follows the argument-order convention") {
  Rng rng(4);
  const DenseTensor t = support::random_tensor(4, lower_slots(3), rng);
  const DenseTensor p = permute(t, {1, 2, 0});
  CHECK(p(0, 1, 2) == t(1, 2, 0));
  CHECK(p(3, 0, 2) == t(0, 2, 3));
  const DenseTensor c = cyclic_sum(t);
  CHECK(c(0, 1, 3) == doctest::Approx(t(0, 1, 3) + t(1, 3, 0) + t(3, 0, 1)));
  CHECK_THROWS_WITH(permute(t, {0, 0, 1}), "permute: order is not a permutation");
}

TEST_CASE("pairing with the metric round-trips through the inverse") {
  Rng rng(8);
  const DenseTensor g = support::random_metric(4, rng);
  const DenseTensor A = support::random_tensor(4, vector_slots(2), rng);
  const DenseTensor back = vector_from_pairing(pair_with_metric(A, g), inverse_metric(g));
  CHECK(max_abs_diff(A, back) < 1e-11);
}

TEST_CASE("tensors require an even dimension") {
  CHECK_THROWS_WITH(DenseTensor::covariant(3, 2), "tensor dimension must be even and >= 2");
}
