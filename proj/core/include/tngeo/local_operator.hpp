#pragma once

#include "tngeo/linalg.hpp"

namespace tngeo {

// One-site observable: d x d Hermitian matrix.
struct LocalOperator {
  std::size_t dim = 0;
  Matrix mat;

  LocalOperator() = default;
  LocalOperator(std::size_t d, Matrix m);

  static LocalOperator identity(std::size_t d);
  // seeded random traceless Hermitian; the default probe for correlator sweeps
  static LocalOperator random_traceless(std::size_t d, std::uint64_t seed);
};

}  // namespace tngeo
