#include "tngeo/local_operator.hpp"

namespace tngeo {

LocalOperator::LocalOperator(std::size_t d, Matrix m) : dim(d), mat(std::move(m)) {
  if (mat.rows != d || mat.cols != d)
    throw config_error("local operator: matrix is not d x d");
  if (!mat.is_hermitian(1e-12))
    throw numeric_error("local operator: matrix not Hermitian within 1e-12");
}

LocalOperator LocalOperator::identity(std::size_t d) {
  return LocalOperator(d, Matrix::identity(d));
}

LocalOperator LocalOperator::random_traceless(std::size_t d, std::uint64_t seed) {
  Matrix g = random_gaussian_matrix(d, d, seed);
  Matrix h = g + g.dagger();
  for (cplx& v : h.a) v *= 0.5;
  const cplx tr = h.trace();
  for (std::size_t i = 0; i < d; ++i) h(i, i) -= tr / static_cast<double>(d);
  for (std::size_t i = 0; i < d; ++i) h(i, i) = cplx(h(i, i).real(), 0.0);
  return LocalOperator(d, std::move(h));
}

}  // namespace tngeo
