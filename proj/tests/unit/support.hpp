#pragma once

#include <filesystem>
#include <string>

#include "norden/forge.hpp"
#include "norden/model_io.hpp"
#include "norden/tensor.hpp"

namespace support {

inline std::filesystem::path corpus_dir() { return std::filesystem::path(NORDEN_SOURCE_DIR) / "corpus"; }

inline norden::Model corpus_model(const std::string& name) {
  return norden::load_model(corpus_dir() / (name + ".json"));
}

inline norden::DenseTensor random_tensor(int dim, std::vector<norden::Variance> variance, norden::Rng& rng) {
  return norden::DenseTensor::generate(dim, std::move(variance),
                                       [&](std::span<const int>) { return rng.normal(); });
}

/// Random symmetric metric of signature (n,n): B^T diag(+1,..,-1,..) B.
inline norden::DenseTensor random_metric(int dim, norden::Rng& rng) {
  std::vector<double> b(static_cast<std::size_t>(dim * dim));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) b[static_cast<std::size_t>(i * dim + j)] = (i == j ? 1.0 : 0.0) + 0.3 * rng.normal();
  return norden::DenseTensor::generate(dim, norden::lower_slots(2), [&](int i, int j) {
    double s = 0.0;
    for (int k = 0; k < dim; ++k)
      s += b[static_cast<std::size_t>(k * dim + i)] * (k < dim / 2 ? 1.0 : -1.0) * b[static_cast<std::size_t>(k * dim + j)];
    return s;
  });
}

}  // namespace support
