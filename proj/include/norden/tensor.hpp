#pragma once

// Dense component arrays over a fixed 2n-dimensional real vector space.
//
// Conventions used throughout the toolkit:
//  * (0,k) tensors have all slots lower; slot order equals argument order,
//    so F(x,y,z) is F(i,j,k) with x=e_i, y=e_j, z=e_k.
//  * Vector-valued tensors A(x,y) = A^k_{ij} e_k keep the upper slot first:
//    components are addressed as A(k, i, j). Structure constants, Christoffel
//    symbols, torsion vectors and nabla J all use this layout.
//  * J is stored as a (1,1) tensor J(i, j) = J^i_j, i.e. J e_j = J^i_j e_i.
//  * Substitutions x -> Jx are performed with apply_J on a lower slot.

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "norden/error.hpp"

namespace norden {

enum class Variance : std::uint8_t { upper, lower };
enum class Direction : std::uint8_t { raise, lower };

class DenseTensor {
 public:
  DenseTensor() = default;
  DenseTensor(int dim, std::vector<Variance> variance);

  /// All-lower tensor of the given rank, zero-initialised.
  static DenseTensor covariant(int dim, int rank);
  /// Upper slot followed by `lower_rank` lower slots, zero-initialised.
  static DenseTensor vector_valued(int dim, int lower_rank);
  /// Kronecker delta as a (1,1) tensor.
  static DenseTensor identity(int dim);

  /// Fills every component from `fn`. `fn` is called either with one int per
  /// slot (ranks 1-4) or with a `std::span<const int>` of indices.
  template <class Fn>
  static DenseTensor generate(int dim, std::vector<Variance> variance, Fn&& fn);

  int dim() const noexcept { return dim_; }
  int rank() const noexcept { return static_cast<int>(variance_.size()); }
  const std::vector<Variance>& variance() const noexcept { return variance_; }
  Variance variance(int slot) const;
  std::size_t size() const noexcept { return data_.size(); }

  std::span<const double> components() const noexcept { return data_; }
  std::span<double> components() noexcept { return data_; }

  template <std::integral... I>
  double& operator()(I... idx) {
    return data_[offset_of(idx...)];
  }
  template <std::integral... I>
  double operator()(I... idx) const {
    return data_[offset_of(idx...)];
  }

  double at(std::span<const int> idx) const { return data_[offset(idx)]; }
  double& at(std::span<const int> idx) { return data_[offset(idx)]; }

  double max_abs() const noexcept;
  bool same_shape(const DenseTensor& other) const noexcept;
  bool all_lower() const noexcept;

  DenseTensor& operator+=(const DenseTensor& rhs);
  DenseTensor& operator-=(const DenseTensor& rhs);
  DenseTensor& operator*=(double s) noexcept;

  friend bool operator==(const DenseTensor&, const DenseTensor&) = default;

 private:
  template <class... I>
  std::size_t offset_of(I... idx) const noexcept {
    std::size_t off = 0;
    ((off = off * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(idx)), ...);
    return off;
  }
  std::size_t offset(std::span<const int> idx) const;

  int dim_ = 0;
  std::vector<Variance> variance_;
  std::vector<double> data_;
};

DenseTensor operator+(DenseTensor a, const DenseTensor& b);
DenseTensor operator-(DenseTensor a, const DenseTensor& b);
DenseTensor operator-(DenseTensor a);
DenseTensor operator*(double s, DenseTensor a);
DenseTensor operator*(DenseTensor a, double s);

/// max_i |a_i - b_i|; throws on shape mismatch.
double max_abs_diff(const DenseTensor& a, const DenseTensor& b);

/// Sums slot `slot_a` of `a` against slot `slot_b` of `b`. The result carries
/// the remaining slots of `a` followed by the remaining slots of `b`.
DenseTensor contract(const DenseTensor& a, int slot_a, const DenseTensor& b, int slot_b);

/// Raises or lowers one slot with a rank-2 symmetric metric (all-lower
/// components). The slot keeps its position.
DenseTensor raise_lower(const DenseTensor& t, int slot, const DenseTensor& metric,
                        Direction direction);

/// Precomposes the argument in lower slot `slot` with J: t(.., Jx, ..).
DenseTensor apply_J(const DenseTensor& t, int slot, const DenseTensor& J);

/// Argument permutation: result(a_0, .., a_{r-1}) = t(a_{order[0]}, .., a_{order[r-1]}).
/// So permute(t, {1,2,0}) is the tensor (x,y,z) -> t(y,z,x).
DenseTensor permute(const DenseTensor& t, std::span<const int> order);
DenseTensor permute(const DenseTensor& t, std::initializer_list<int> order);

/// Cyclic sum over the first three slots: t(x,y,z,..) + t(y,z,x,..) + t(z,x,y,..).
DenseTensor cyclic_sum(const DenseTensor& t);

/// Lowers the upper (first) slot of a vector-valued tensor and moves it last:
/// A^k_{ij} -> g(A(e_i,e_j), e_l) addressed as (i, j, l).
DenseTensor pair_with_metric(const DenseTensor& vector_valued, const DenseTensor& g);

/// Inverse of pair_with_metric: (i, j, l) -> A^k_{ij} with the upper slot first.
DenseTensor vector_from_pairing(const DenseTensor& lowered, const DenseTensor& g_inv);

/// Inverse of a rank-2 metric; throws "metric not invertible" when singular.
DenseTensor inverse_metric(const DenseTensor& g);

// ---------------------------------------------------------------------------

namespace detail {
template <class Fn>
void for_each_index(int dim, int rank, Fn&& fn) {
  std::vector<int> idx(static_cast<std::size_t>(rank), 0);
  if (rank == 0) {
    fn(std::span<const int>(idx));
    return;
  }
  while (true) {
    fn(std::span<const int>(idx));
    int s = rank - 1;
    while (s >= 0 && ++idx[static_cast<std::size_t>(s)] == dim) {
      idx[static_cast<std::size_t>(s)] = 0;
      --s;
    }
    if (s < 0) return;
  }
}
}  // namespace detail

template <class Fn>
DenseTensor DenseTensor::generate(int dim, std::vector<Variance> variance, Fn&& fn) {
  DenseTensor out(dim, std::move(variance));
  const int r = out.rank();
  const auto d = dim;
  auto& data = out.data_;
  std::size_t pos = 0;
  if constexpr (std::invocable<Fn, int>) {
    if (r != 1) throw Error("generate: functor arity does not match rank");
    for (int i = 0; i < d; ++i) data[pos++] = fn(i);
  } else if constexpr (std::invocable<Fn, int, int>) {
    if (r != 2) throw Error("generate: functor arity does not match rank");
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) data[pos++] = fn(i, j);
  } else if constexpr (std::invocable<Fn, int, int, int>) {
    if (r != 3) throw Error("generate: functor arity does not match rank");
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) data[pos++] = fn(i, j, k);
  } else if constexpr (std::invocable<Fn, int, int, int, int>) {
    if (r != 4) throw Error("generate: functor arity does not match rank");
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          for (int l = 0; l < d; ++l) data[pos++] = fn(i, j, k, l);
  } else {
    detail::for_each_index(d, r, [&](std::span<const int> idx) { data[pos++] = fn(idx); });
  }
  return out;
}

/// Shorthands for the variance lists used most often.
inline std::vector<Variance> lower_slots(int rank) {
  return std::vector<Variance>(static_cast<std::size_t>(rank), Variance::lower);
}
inline std::vector<Variance> vector_slots(int lower_rank) {
  std::vector<Variance> v(static_cast<std::size_t>(lower_rank) + 1, Variance::lower);
  v.front() = Variance::upper;
  return v;
}

}  // namespace norden
