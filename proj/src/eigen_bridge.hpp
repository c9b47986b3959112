#pragma once

// Conversions between DenseTensor and Eigen matrices. Private to src/.

#include <Eigen/Dense>

#include "norden/tensor.hpp"

namespace norden::bridge {

inline Eigen::MatrixXd to_matrix(const DenseTensor& t) {
  const int d = t.dim();
  Eigen::MatrixXd m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = t(i, j);
  return m;
}

inline DenseTensor from_matrix(const Eigen::MatrixXd& m, std::vector<Variance> variance) {
  return DenseTensor::generate(static_cast<int>(m.rows()), std::move(variance),
                               [&](int i, int j) { return m(i, j); });
}

}  // namespace norden::bridge
