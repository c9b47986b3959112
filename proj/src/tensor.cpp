#include "norden/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "eigen_bridge.hpp"

namespace norden {

namespace {

std::size_t ipow(int base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

void require_same_shape(const DenseTensor& a, const DenseTensor& b, const char* what) {
  if (!a.same_shape(b)) throw Error(std::string(what) + ": shape mismatch");
}

void require_slot(const DenseTensor& t, int slot, const char* what) {
  if (slot < 0 || slot >= t.rank()) throw Error(std::string(what) + ": slot out of range");
}

void require_metric(const DenseTensor& metric, int dim, const char* what) {
  if (metric.rank() != 2 || metric.dim() != dim || !metric.all_lower())
    throw Error(std::string(what) + ": metric must be a rank-2 lower tensor of matching dimension");
}

}  // namespace

DenseTensor::DenseTensor(int dim, std::vector<Variance> variance)
    : dim_(dim), variance_(std::move(variance)) {
  if (dim < 2 || dim % 2 != 0) throw Error("tensor dimension must be even and >= 2");
  data_.assign(ipow(dim, rank()), 0.0);
}

DenseTensor DenseTensor::covariant(int dim, int rank) { return DenseTensor(dim, lower_slots(rank)); }

DenseTensor DenseTensor::vector_valued(int dim, int lower_rank) {
  return DenseTensor(dim, vector_slots(lower_rank));
}

DenseTensor DenseTensor::identity(int dim) {
  return generate(dim, {Variance::upper, Variance::lower},
                  [](int i, int j) { return i == j ? 1.0 : 0.0; });
}

Variance DenseTensor::variance(int slot) const {
  if (slot < 0 || slot >= rank()) throw Error("slot out of range");
  return variance_[static_cast<std::size_t>(slot)];
}

std::size_t DenseTensor::offset(std::span<const int> idx) const {
  if (static_cast<int>(idx.size()) != rank()) throw Error("index count does not match rank");
  std::size_t off = 0;
  for (int i : idx) {
    if (i < 0 || i >= dim_) throw Error("index out of range");
    off = off * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
  }
  return off;
}

double DenseTensor::max_abs() const noexcept {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

bool DenseTensor::same_shape(const DenseTensor& other) const noexcept {
  return dim_ == other.dim_ && variance_ == other.variance_;
}

bool DenseTensor::all_lower() const noexcept {
  return std::all_of(variance_.begin(), variance_.end(),
                     [](Variance v) { return v == Variance::lower; });
}

DenseTensor& DenseTensor::operator+=(const DenseTensor& rhs) {
  require_same_shape(*this, rhs, "operator+=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

DenseTensor& DenseTensor::operator-=(const DenseTensor& rhs) {
  require_same_shape(*this, rhs, "operator-=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
  return *this;
}

DenseTensor& DenseTensor::operator*=(double s) noexcept {
  for (double& v : data_) v *= s;
  return *this;
}

DenseTensor operator+(DenseTensor a, const DenseTensor& b) { return a += b; }
DenseTensor operator-(DenseTensor a, const DenseTensor& b) { return a -= b; }
DenseTensor operator-(DenseTensor a) { return a *= -1.0; }
DenseTensor operator*(double s, DenseTensor a) { return a *= s; }
DenseTensor operator*(DenseTensor a, double s) { return a *= s; }

double max_abs_diff(const DenseTensor& a, const DenseTensor& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  const auto ca = a.components();
  const auto cb = b.components();
  for (std::size_t i = 0; i < ca.size(); ++i) m = std::max(m, std::abs(ca[i] - cb[i]));
  return m;
}

DenseTensor contract(const DenseTensor& a, int slot_a, const DenseTensor& b, int slot_b) {
  require_slot(a, slot_a, "contract");
  require_slot(b, slot_b, "contract");
  if (a.dim() != b.dim()) throw Error("contraction requires matching dimensions");
  if (a.variance(slot_a) == b.variance(slot_b))
    throw Error("contraction requires opposite variance");

  std::vector<Variance> variance;
  for (int s = 0; s < a.rank(); ++s)
    if (s != slot_a) variance.push_back(a.variance(s));
  for (int s = 0; s < b.rank(); ++s)
    if (s != slot_b) variance.push_back(b.variance(s));

  const int dim = a.dim();
  const int ra = a.rank() - 1;
  std::vector<int> ia(static_cast<std::size_t>(a.rank()));
  std::vector<int> ib(static_cast<std::size_t>(b.rank()));
  return DenseTensor::generate(dim, std::move(variance), [&](std::span<const int> idx) {
    for (int s = 0, p = 0; s < a.rank(); ++s)
      if (s != slot_a) ia[static_cast<std::size_t>(s)] = idx[static_cast<std::size_t>(p++)];
    for (int s = 0, p = ra; s < b.rank(); ++s)
      if (s != slot_b) ib[static_cast<std::size_t>(s)] = idx[static_cast<std::size_t>(p++)];
    double sum = 0.0;
    for (int m = 0; m < dim; ++m) {
      ia[static_cast<std::size_t>(slot_a)] = m;
      ib[static_cast<std::size_t>(slot_b)] = m;
      sum += a.at(ia) * b.at(ib);
    }
    return sum;
  });
}

namespace {

// t with slot `slot` transformed by the matrix m: out(..a..) = sum_b m(a,b) t(..b..).
DenseTensor transform_slot(const DenseTensor& t, int slot, const DenseTensor& m, Variance result) {
  auto variance = t.variance();
  variance[static_cast<std::size_t>(slot)] = result;
  std::vector<int> src(static_cast<std::size_t>(t.rank()));
  return DenseTensor::generate(t.dim(), std::move(variance), [&](std::span<const int> idx) {
    std::copy(idx.begin(), idx.end(), src.begin());
    const int a = idx[static_cast<std::size_t>(slot)];
    double sum = 0.0;
    for (int b = 0; b < t.dim(); ++b) {
      src[static_cast<std::size_t>(slot)] = b;
      sum += m(a, b) * t.at(src);
    }
    return sum;
  });
}

}  // namespace

DenseTensor raise_lower(const DenseTensor& t, int slot, const DenseTensor& metric,
                        Direction direction) {
  require_slot(t, slot, "raise_lower");
  require_metric(metric, t.dim(), "raise_lower");
  if (max_abs_diff(metric, permute(metric, {1, 0})) > 1e-12 * (1.0 + metric.max_abs()))
    throw Error("metric not symmetric");
  if (direction == Direction::lower) {
    if (t.variance(slot) != Variance::upper) throw Error("raise_lower: slot is already lower");
    return transform_slot(t, slot, metric, Variance::lower);
  }
  if (t.variance(slot) != Variance::lower) throw Error("raise_lower: slot is already upper");
  return transform_slot(t, slot, inverse_metric(metric), Variance::upper);
}

DenseTensor apply_J(const DenseTensor& t, int slot, const DenseTensor& J) {
  require_slot(t, slot, "apply_J");
  if (J.rank() != 2 || J.dim() != t.dim() || J.variance(0) != Variance::upper ||
      J.variance(1) != Variance::lower)
    throw Error("apply_J: J must be a (1,1) tensor of matching dimension");
  if (t.variance(slot) != Variance::lower) throw Error("apply_J: slot must be a lower (argument) slot");
  // t(.., J e_a, ..) = sum_b J^b_a t(.., e_b, ..)
  std::vector<int> src(static_cast<std::size_t>(t.rank()));
  return DenseTensor::generate(t.dim(), t.variance(), [&](std::span<const int> idx) {
    std::copy(idx.begin(), idx.end(), src.begin());
    const int a = idx[static_cast<std::size_t>(slot)];
    double sum = 0.0;
    for (int b = 0; b < t.dim(); ++b) {
      const double jba = J(b, a);
      if (jba == 0.0) continue;
      src[static_cast<std::size_t>(slot)] = b;
      sum += jba * t.at(src);
    }
    return sum;
  });
}

DenseTensor permute(const DenseTensor& t, std::span<const int> order) {
  if (static_cast<int>(order.size()) != t.rank()) throw Error("permute: order size does not match rank");
  std::vector<int> check(order.begin(), order.end());
  std::sort(check.begin(), check.end());
  for (int i = 0; i < t.rank(); ++i)
    if (check[static_cast<std::size_t>(i)] != i) throw Error("permute: order is not a permutation");

  std::vector<Variance> variance(static_cast<std::size_t>(t.rank()));
  for (int s = 0; s < t.rank(); ++s)
    variance[static_cast<std::size_t>(order[static_cast<std::size_t>(s)])] = t.variance(s);
  // result slot q holds argument a_q, which sits in t's slot s where order[s] == q,
  // so the variance of slot q is t.variance(s).
  std::vector<int> src(static_cast<std::size_t>(t.rank()));
  return DenseTensor::generate(t.dim(), std::move(variance), [&](std::span<const int> idx) {
    for (std::size_t s = 0; s < src.size(); ++s) src[s] = idx[static_cast<std::size_t>(order[s])];
    return t.at(src);
  });
}

DenseTensor permute(const DenseTensor& t, std::initializer_list<int> order) {
  return permute(t, std::span<const int>(order.begin(), order.size()));
}

DenseTensor cyclic_sum(const DenseTensor& t) {
  if (t.rank() < 3) throw Error("cyclic_sum requires rank >= 3");
  std::vector<int> o1(static_cast<std::size_t>(t.rank()));
  std::iota(o1.begin(), o1.end(), 0);
  std::vector<int> o2 = o1;
  o1[0] = 1, o1[1] = 2, o1[2] = 0;
  o2[0] = 2, o2[1] = 0, o2[2] = 1;
  return t + permute(t, o1) + permute(t, o2);
}

DenseTensor pair_with_metric(const DenseTensor& a, const DenseTensor& g) {
  if (a.rank() != 3 || a.variance(0) != Variance::upper) throw Error("pair_with_metric expects A^k_{ij}");
  const int d = a.dim();
  return DenseTensor::generate(d, lower_slots(3), [&](int i, int j, int l) {
    double s = 0.0;
    for (int k = 0; k < d; ++k) s += g(k, l) * a(k, i, j);
    return s;
  });
}

DenseTensor vector_from_pairing(const DenseTensor& lowered, const DenseTensor& g_inv) {
  if (lowered.rank() != 3 || !lowered.all_lower()) throw Error("vector_from_pairing expects a (0,3) tensor");
  const int d = lowered.dim();
  return DenseTensor::generate(d, vector_slots(2), [&](int k, int i, int j) {
    double s = 0.0;
    for (int l = 0; l < d; ++l) s += g_inv(k, l) * lowered(i, j, l);
    return s;
  });
}

DenseTensor inverse_metric(const DenseTensor& g) {
  if (g.rank() != 2) throw Error("inverse_metric expects a rank-2 tensor");
  const Eigen::MatrixXd m = bridge::to_matrix(g);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  if (!lu.isInvertible()) throw Error("metric not invertible");
  std::vector<Variance> variance(2, g.variance(0) == Variance::lower ? Variance::upper : Variance::lower);
  return bridge::from_matrix(lu.inverse(), std::move(variance));
}

}  // namespace norden
