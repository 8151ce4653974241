#pragma once

#include <cstddef>
#include <vector>

#include "tngeo/common.hpp"
#include "tngeo/tensor.hpp"

namespace tngeo {

// Minimal dense complex matrix, row-major. The numeric workhorse behind the
// tensor operations; kept self-contained on purpose (desk-scale dims).
struct Matrix {
  std::size_t rows = 0, cols = 0;
  std::vector<cplx> a;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, cplx(0, 0)) {}

  cplx& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  static Matrix identity(std::size_t n);
  Matrix dagger() const;
  Matrix transpose() const;
  Matrix conj() const;
  Matrix operator*(const Matrix& rhs) const;
  Matrix operator+(const Matrix& rhs) const;
  Matrix operator-(const Matrix& rhs) const;
  Matrix scaled(cplx f) const;
  std::vector<cplx> apply(const std::vector<cplx>& v) const;        // A v
  std::vector<cplx> apply_dagger(const std::vector<cplx>& v) const; // A† v
  cplx trace() const;
  double frobenius_norm() const;
  double max_abs() const;
  bool is_hermitian(double tol) const;
  bool all_finite() const;

  Tensor to_tensor(const std::string& row_label, const std::string& col_label) const;
  static Matrix from_tensor(const Tensor& t, const std::string& row_label,
                            const std::string& col_label);
};

Matrix kron(const Matrix& a, const Matrix& b);

// ---- Hermitian eigensolver (cyclic Jacobi) --------------------------------

struct HermitianEig {
  std::vector<double> values;  // descending
  Matrix vectors;              // column k is the eigenvector of values[k]
};

// Cyclic Jacobi with complex rotations. Throws numeric_error on
// non-Hermitian input (tolerance 1e-10 relative) or failure to converge.
HermitianEig hermitian_eig(const Matrix& m);

// ---- Dominant spectrum of a general square matrix -------------------------

struct DominantEig {
  cplx value;
  std::vector<cplx> vector;   // right eigenvector, unit norm
  bool modulus_tie = false;   // |value| within 1e-10 of a neighbour's modulus
};

// k eigenvalues of largest modulus, modulus-descending. Power iteration with
// Schur-Wielandt deflation (tolerance 1e-12, cap 1e5 iterations); when the
// iteration stalls (typically on complex-conjugate pairs) it falls back to a
// dense Hessenberg + shifted-QR solve, with eigenvectors recovered by inverse
// iteration so the residual contract still holds.
std::vector<DominantEig> dominant_eigs(const Matrix& m, std::size_t k);

// All eigenvalues via the dense route (Hessenberg + complex shifted QR).
std::vector<cplx> dense_eigenvalues(Matrix m);

// ---- Random isometries -----------------------------------------------------

// rows x cols with W†W = I (rows >= cols). Complex Gaussian fill from the
// seeded mt19937_64 stream, then twice-iterated modified Gram-Schmidt; the
// triangular factor's diagonal comes out real positive, which pins the phase
// convention and makes the output seed-deterministic across platforms.
Matrix random_isometry(std::size_t rows, std::size_t cols, std::uint64_t seed);

Matrix random_gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed);

// ---- Thin SVD --------------------------------------------------------------

struct Svd {
  Matrix u;                    // rows x rank
  std::vector<double> sigma;   // descending, > rel_cutoff * sigma[0]
  Matrix vdag;                 // rank x cols
};

// Thin SVD via a Hermitian eigensolve of the smaller Gram matrix. Singular
// values below rel_cutoff * sigma_max are dropped (rank-revealing; no other
// truncation).
Svd svd_thin(const Matrix& m, double rel_cutoff = 1e-10);

// ---- Small helpers ---------------------------------------------------------

double vec_norm(const std::vector<cplx>& v);
cplx vec_dot(const std::vector<cplx>& x, const std::vector<cplx>& y);  // conj(x).y
void vec_scale(std::vector<cplx>& v, cplx f);

}  // namespace tngeo
