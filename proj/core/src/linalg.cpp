#include "tngeo/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tngeo/rng.hpp"

namespace tngeo {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::dagger() const {
  Matrix m(cols, rows);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

Matrix Matrix::transpose() const {
  Matrix m(cols, rows);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(j, i) = (*this)(i, j);
  return m;
}

Matrix Matrix::conj() const {
  Matrix m = *this;
  for (cplx& v : m.a) v = std::conj(v);
  return m;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
  if (cols != rhs.rows) throw config_error("matrix multiply: shape mismatch");
  Matrix out(rows, rhs.cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t k = 0; k < cols; ++k) {
      const cplx aik = (*this)(i, k);
      if (aik == cplx(0, 0)) continue;
      const cplx* brow = rhs.a.data() + k * rhs.cols;
      cplx* orow = out.a.data() + i * rhs.cols;
      for (std::size_t j = 0; j < rhs.cols; ++j) orow[j] += aik * brow[j];
    }
  }
  return out;
}

Matrix Matrix::operator+(const Matrix& rhs) const {
  if (rows != rhs.rows || cols != rhs.cols) throw config_error("matrix add: shape mismatch");
  Matrix out = *this;
  for (std::size_t i = 0; i < a.size(); ++i) out.a[i] += rhs.a[i];
  return out;
}

Matrix Matrix::operator-(const Matrix& rhs) const {
  if (rows != rhs.rows || cols != rhs.cols) throw config_error("matrix sub: shape mismatch");
  Matrix out = *this;
  for (std::size_t i = 0; i < a.size(); ++i) out.a[i] -= rhs.a[i];
  return out;
}

Matrix Matrix::scaled(cplx f) const {
  Matrix out = *this;
  for (cplx& v : out.a) v *= f;
  return out;
}

std::vector<cplx> Matrix::apply(const std::vector<cplx>& v) const {
  if (v.size() != cols) throw config_error("matrix apply: size mismatch");
  std::vector<cplx> out(rows, cplx(0, 0));
  for (std::size_t i = 0; i < rows; ++i) {
    cplx s(0, 0);
    const cplx* row = a.data() + i * cols;
    for (std::size_t j = 0; j < cols; ++j) s += row[j] * v[j];
    out[i] = s;
  }
  return out;
}

std::vector<cplx> Matrix::apply_dagger(const std::vector<cplx>& v) const {
  if (v.size() != rows) throw config_error("matrix apply_dagger: size mismatch");
  std::vector<cplx> out(cols, cplx(0, 0));
  for (std::size_t i = 0; i < rows; ++i) {
    const cplx vi = v[i];
    const cplx* row = a.data() + i * cols;
    for (std::size_t j = 0; j < cols; ++j) out[j] += std::conj(row[j]) * vi;
  }
  return out;
}

cplx Matrix::trace() const {
  cplx s(0, 0);
  for (std::size_t i = 0; i < std::min(rows, cols); ++i) s += (*this)(i, i);
  return s;
}

double Matrix::frobenius_norm() const {
  double s = 0.0;
  for (const cplx& v : a) s += std::norm(v);
  return std::sqrt(s);
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (const cplx& v : a) m = std::max(m, std::abs(v));
  return m;
}

bool Matrix::is_hermitian(double tol) const {
  if (rows != cols) return false;
  const double scale = std::max(1.0, max_abs());
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = i; j < cols; ++j)
      if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol * scale) return false;
  return true;
}

bool Matrix::all_finite() const {
  for (const cplx& v : a)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

Tensor Matrix::to_tensor(const std::string& row_label, const std::string& col_label) const {
  return Tensor({rows, cols}, {row_label, col_label}, a);
}

Matrix Matrix::from_tensor(const Tensor& t, const std::string& row_label,
                           const std::string& col_label) {
  const Tensor p = t.permuted({row_label, col_label});
  Matrix m(p.dims()[0], p.dims()[1]);
  m.a = p.data();
  return m;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows * b.rows, a.cols * b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) {
      const cplx f = a(i, j);
      if (f == cplx(0, 0)) continue;
      for (std::size_t k = 0; k < b.rows; ++k)
        for (std::size_t l = 0; l < b.cols; ++l)
          out(i * b.rows + k, j * b.cols + l) = f * b(k, l);
    }
  return out;
}

// ---- Jacobi ----------------------------------------------------------------

HermitianEig hermitian_eig(const Matrix& m) {
  if (m.rows != m.cols) throw config_error("hermitian_eig: matrix not square");
  if (!m.is_hermitian(1e-10))
    throw numeric_error("hermitian_eig: input not Hermitian within 1e-10");

  const std::size_t n = m.rows;
  Matrix a = m;
  // enforce exact Hermiticity so rotations stay stable
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = cplx(a(i, i).real(), 0.0);
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx avg = 0.5 * (a(i, j) + std::conj(a(j, i)));
      a(i, j) = avg;
      a(j, i) = std::conj(avg);
    }
  }
  Matrix v = Matrix::identity(n);

  const double scale = std::max(1.0, a.frobenius_norm());
  const double tol = 1e-15 * scale;
  const int max_sweeps = 80;
  bool converged = (n <= 1);
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(2.0 * off) < tol) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double absb = std::abs(apq);
        if (absb <= 1e-300) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const cplx phase = apq / absb;  // strip phase, then rotate real block
        const double tau = (aqq - app) / (2.0 * absb);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // J = [[c, s*phase], [-s*conj(phase), c]] applied as A <- J† A J
        const cplx jpq = s * phase;
        for (std::size_t r = 0; r < n; ++r) {
          const cplx arp = a(r, p), arq = a(r, q);
          a(r, p) = c * arp - std::conj(jpq) * arq;
          a(r, q) = jpq * arp + c * arq;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const cplx apr = a(p, r), aqr = a(q, r);
          a(p, r) = c * apr - jpq * aqr;
          a(q, r) = std::conj(jpq) * apr + c * aqr;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const cplx vrp = v(r, p), vrq = v(r, q);
          v(r, p) = c * vrp - std::conj(jpq) * vrq;
          v(r, q) = jpq * vrp + c * vrq;
        }
        a(p, q) = cplx(0.0, 0.0);
        a(q, p) = cplx(0.0, 0.0);
        a(p, p) = cplx(a(p, p).real(), 0.0);
        a(q, q) = cplx(a(q, q).real(), 0.0);
      }
    }
  }
  if (!converged) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(2.0 * off) >= 1e-11 * scale)
      throw numeric_error("hermitian_eig: Jacobi sweeps did not converge");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a(x, x).real() > a(y, y).real();
  });

  HermitianEig out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

// ---- dense general eigenvalues (Hessenberg + shifted QR) -------------------

namespace {

void hessenberg_inplace(Matrix& a) {
  const std::size_t n = a.rows;
  for (std::size_t k = 0; k + 2 < n; ++k) {
    // Householder vector for column k below the subdiagonal
    double xnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) xnorm += std::norm(a(i, k));
    xnorm = std::sqrt(xnorm);
    if (xnorm <= 1e-300) continue;
    const cplx x0 = a(k + 1, k);
    const cplx alpha = (std::abs(x0) > 0.0 ? -(x0 / std::abs(x0)) * xnorm
                                           : cplx(-xnorm, 0.0));
    std::vector<cplx> vv(n, cplx(0, 0));
    for (std::size_t i = k + 1; i < n; ++i) vv[i] = a(i, k);
    vv[k + 1] -= alpha;
    double vnorm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vnorm2 += std::norm(vv[i]);
    if (vnorm2 <= 1e-300) continue;
    // A <- H A H with H = I - 2 v v† / (v†v)
    for (std::size_t j = 0; j < n; ++j) {  // left: rows k+1..n
      cplx s(0, 0);
      for (std::size_t i = k + 1; i < n; ++i) s += std::conj(vv[i]) * a(i, j);
      s *= 2.0 / vnorm2;
      for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= s * vv[i];
    }
    for (std::size_t i = 0; i < n; ++i) {  // right: cols k+1..n
      cplx s(0, 0);
      for (std::size_t j = k + 1; j < n; ++j) s += a(i, j) * vv[j];
      s *= 2.0 / vnorm2;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= s * std::conj(vv[j]);
    }
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = cplx(0, 0);
    a(k + 1, k) = alpha;
  }
}

}  // namespace

std::vector<cplx> dense_eigenvalues(Matrix a) {
  if (a.rows != a.cols) throw config_error("dense_eigenvalues: not square");
  const std::size_t n = a.rows;
  if (n == 0) return {};
  if (n == 1) return {a(0, 0)};
  hessenberg_inplace(a);

  std::vector<cplx> eigs;
  eigs.reserve(n);
  std::size_t hi = n - 1;
  const double eps = 1e-15;
  std::size_t iter_total = 0;
  const std::size_t iter_cap = 400 * n;

  auto offdiag_small = [&](std::size_t i) {
    const double s = std::abs(a(i - 1, i - 1)) + std::abs(a(i, i));
    return std::abs(a(i, i - 1)) <= eps * std::max(s, 1e-300);
  };

  while (true) {
    // deflate converged trailing 1x1 blocks
    while (hi > 0 && offdiag_small(hi)) {
      eigs.push_back(a(hi, hi));
      --hi;
    }
    if (hi == 0) {
      eigs.push_back(a(0, 0));
      break;
    }
    if (++iter_total > iter_cap)
      throw numeric_error("dense_eigenvalues: QR iteration cap exceeded");

    // active block [lo, hi]
    std::size_t lo = hi;
    while (lo > 0 && !offdiag_small(lo)) --lo;

    // Wilkinson shift from trailing 2x2
    const cplx h11 = a(hi - 1, hi - 1), h12 = a(hi - 1, hi);
    const cplx h21 = a(hi, hi - 1), h22 = a(hi, hi);
    const cplx tr = h11 + h22;
    const cplx det = h11 * h22 - h12 * h21;
    const cplx disc = std::sqrt(tr * tr - 4.0 * det);
    const cplx r1 = 0.5 * (tr + disc), r2 = 0.5 * (tr - disc);
    cplx shift = (std::abs(r1 - h22) < std::abs(r2 - h22)) ? r1 : r2;
    if (iter_total % 29 == 0)  // stagnation kick
      shift += cplx(1e-3, 1e-3) * std::max(std::abs(h22), 1e-10);

    // explicit shifted QR step on the active block via Givens rotations:
    // A - shift = QR, then A <- RQ + shift
    for (std::size_t i = lo; i <= hi; ++i) a(i, i) -= shift;
    std::vector<cplx> cs(hi - lo), sn(hi - lo);
    for (std::size_t k = lo; k < hi; ++k) {
      const cplx f = a(k, k), g = a(k + 1, k);
      const double r = std::sqrt(std::norm(f) + std::norm(g));
      cplx c(1, 0), s(0, 0);
      if (r > 1e-300) {
        c = f / r;
        s = g / r;
      }
      cs[k - lo] = c;
      sn[k - lo] = s;
      // rows k, k+1 <- [[c*, s*], [-s, c]] . rows
      for (std::size_t j = k; j < n; ++j) {
        const cplx t1 = a(k, j), t2 = a(k + 1, j);
        a(k, j) = std::conj(c) * t1 + std::conj(s) * t2;
        a(k + 1, j) = -s * t1 + c * t2;
      }
      a(k + 1, k) = cplx(0, 0);
    }
    for (std::size_t k = lo; k < hi; ++k) {
      const cplx c = cs[k - lo], s = sn[k - lo];
      // cols k, k+1 <- cols . [[c, -s*], [s, c*]]
      const std::size_t top = std::min(hi, k + 1);
      for (std::size_t i = 0; i <= top; ++i) {
        const cplx t1 = a(i, k), t2 = a(i, k + 1);
        a(i, k) = c * t1 + s * t2;
        a(i, k + 1) = -std::conj(s) * t1 + std::conj(c) * t2;
      }
    }
    for (std::size_t i = lo; i <= hi; ++i) a(i, i) += shift;
  }

  return eigs;
}

namespace {

// LU solve with partial pivoting; used by inverse iteration
struct Lu {
  Matrix lu;
  std::vector<std::size_t> piv;
  bool singular = false;
};

Lu lu_factor(Matrix m) {
  const std::size_t n = m.rows;
  Lu f{std::move(m), std::vector<std::size_t>(n), false};
  for (std::size_t i = 0; i < n; ++i) f.piv[i] = i;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(f.lu(k, k));
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(f.lu(i, k)) > best) {
        best = std::abs(f.lu(i, k));
        p = i;
      }
    if (best <= 1e-300) {
      f.lu(k, k) = cplx(1e-300, 0.0);  // perturb; inverse iteration tolerates it
      f.singular = true;
    }
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(p, j));
      std::swap(f.piv[k], f.piv[p]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      f.lu(i, k) /= f.lu(k, k);
      const cplx lik = f.lu(i, k);
      if (lik == cplx(0, 0)) continue;
      for (std::size_t j = k + 1; j < n; ++j) f.lu(i, j) -= lik * f.lu(k, j);
    }
  }
  return f;
}

std::vector<cplx> lu_solve(const Lu& f, const std::vector<cplx>& b) {
  const std::size_t n = f.lu.rows;
  std::vector<cplx> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[f.piv[i]];
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) x[i] -= f.lu(i, j) * x[j];
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = i + 1; j < n; ++j) x[i] -= f.lu(i, j) * x[j];
    x[i] /= f.lu(i, i);
  }
  return x;
}

std::vector<cplx> inverse_iteration_vector(const Matrix& m, cplx lambda,
                                           std::uint64_t seed) {
  const std::size_t n = m.rows;
  Matrix shifted = m;
  const double scale = std::max(m.frobenius_norm(), 1e-30);
  const cplx mu = lambda + cplx(1e-11 * scale, 0.0);
  for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= mu;
  const Lu f = lu_factor(std::move(shifted));
  Rng rng(seed);
  std::vector<cplx> v(n);
  for (cplx& x : v) x = rng.gaussian_complex();
  vec_scale(v, 1.0 / vec_norm(v));
  for (int it = 0; it < 6; ++it) {
    v = lu_solve(f, v);
    const double nn = vec_norm(v);
    if (!(nn > 0.0) || !std::isfinite(nn)) break;
    vec_scale(v, 1.0 / nn);
  }
  return v;
}

double residual(const Matrix& m, cplx lambda, const std::vector<cplx>& v) {
  std::vector<cplx> mv = m.apply(v);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += std::norm(mv[i] - lambda * v[i]);
  return std::sqrt(s);
}

}  // namespace

std::vector<DominantEig> dominant_eigs(const Matrix& m, std::size_t k) {
  if (m.rows != m.cols) throw config_error("dominant_eigs: matrix not square");
  const std::size_t n = m.rows;
  if (k == 0 || k > n) throw config_error("dominant_eigs: k out of range");
  const double mnorm = m.frobenius_norm();
  std::vector<DominantEig> out;

  if (mnorm <= 1e-300) {
    for (std::size_t j = 0; j < k; ++j) {
      DominantEig e;
      e.value = cplx(0, 0);
      e.vector.assign(n, cplx(0, 0));
      e.vector[j % n] = 1.0;
      out.push_back(std::move(e));
    }
    return out;
  }

  // --- stage 1: power iteration with Schur-Wielandt deflation
  const double tol = 1e-12;
  const std::size_t iter_cap = 100000;
  Matrix work = m;
  bool stalled = false;
  for (std::size_t j = 0; j < k && !stalled; ++j) {
    Rng rng(0x7e57ed5eedull + j);
    std::vector<cplx> v(n);
    for (cplx& x : v) x = rng.gaussian_complex();
    vec_scale(v, 1.0 / vec_norm(v));
    cplx lambda(0, 0);
    bool converged = false;
    double prev_res = 1e300;
    std::size_t no_progress = 0;
    for (std::size_t it = 0; it < iter_cap; ++it) {
      std::vector<cplx> w = work.apply(v);
      const double wn = vec_norm(w);
      if (wn <= 1e-300) break;  // deflated to zero: remaining eigenvalues ~ 0
      vec_scale(w, 1.0 / wn);
      lambda = vec_dot(w, work.apply(w));
      const double res = residual(work, lambda, w);
      v = std::move(w);
      if (res <= tol * mnorm) {
        converged = true;
        break;
      }
      if (res > prev_res * 0.9999) {
        if (++no_progress > 500) break;  // oscillating: complex pair, bail out
      } else {
        no_progress = 0;
      }
      prev_res = std::min(prev_res, res);
    }
    if (!converged) {
      stalled = true;
      break;
    }
    // left eigenvector for deflation
    std::vector<cplx> u(n);
    {
      Rng rng2(0xfeedbeefull + j);
      for (cplx& x : u) x = rng2.gaussian_complex();
      vec_scale(u, 1.0 / vec_norm(u));
      bool lconv = false;
      for (std::size_t it = 0; it < iter_cap; ++it) {
        std::vector<cplx> w = work.apply_dagger(u);
        const double wn = vec_norm(w);
        if (wn <= 1e-300) break;
        vec_scale(w, 1.0 / wn);
        const cplx lam_l = vec_dot(w, work.apply_dagger(w));
        double res = 0.0;
        std::vector<cplx> mw = work.apply_dagger(w);
        for (std::size_t i = 0; i < n; ++i) res += std::norm(mw[i] - lam_l * w[i]);
        u = std::move(w);
        if (std::sqrt(res) <= tol * mnorm) {
          lconv = true;
          break;
        }
        if (it > 2000 && std::sqrt(res) > 1e-6 * mnorm) break;
      }
      if (!lconv) {
        stalled = true;
        break;
      }
    }
    const cplx uv = vec_dot(u, v);
    if (std::abs(uv) < 1e-8) {
      stalled = true;  // defective/ill-conditioned pair; use dense route
      break;
    }
    DominantEig e;
    e.value = lambda;
    e.vector = v;
    out.push_back(std::move(e));
    // work <- work - lambda v u† / (u†v)
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        work(r, c) -= lambda * v[r] * std::conj(u[c]) / std::conj(uv);
  }

  // deflation preserves the other eigenpairs only for simple spectra; check
  // the survivors against the original matrix before trusting them
  if (out.size() == k) {
    for (const DominantEig& e : out)
      if (residual(m, e.value, e.vector) > 1e-8 * mnorm) {
        out.clear();
        break;
      }
  }

  // --- stage 2: dense fallback
  if (out.size() < k) {
    std::vector<cplx> eigs = dense_eigenvalues(m);
    std::sort(eigs.begin(), eigs.end(),
              [](cplx a, cplx b) { return std::abs(a) > std::abs(b); });
    out.clear();
    for (std::size_t j = 0; j < k; ++j) {
      DominantEig e;
      e.value = eigs[j];
      e.vector = inverse_iteration_vector(m, eigs[j], 0xabcdull + j);
      // polish the eigenvalue with a Rayleigh quotient
      const cplx rq = vec_dot(e.vector, m.apply(e.vector));
      if (std::abs(rq - e.value) < 1e-6 * std::max(1.0, mnorm)) e.value = rq;
      out.push_back(std::move(e));
    }
  }

  std::sort(out.begin(), out.end(), [](const DominantEig& a, const DominantEig& b) {
    return std::abs(a.value) > std::abs(b.value);
  });
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double aj = std::abs(out[j].value);
    if (j > 0 && std::abs(aj - std::abs(out[j - 1].value)) < 1e-10) {
      out[j].modulus_tie = true;
      out[j - 1].modulus_tie = true;
    }
  }
  return out;
}

// ---- random isometry -------------------------------------------------------

Matrix random_gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Matrix m(rows, cols);
  Rng rng(seed);
  for (cplx& v : m.a) v = rng.gaussian_complex();
  return m;
}

Matrix random_isometry(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  if (rows < cols) throw config_error("random_isometry: rows < cols");
  Matrix w = random_gaussian_matrix(rows, cols, seed);
  // modified Gram-Schmidt, run twice; normalisation keeps R's diagonal real
  // positive, fixing the phase convention
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t j = 0; j < cols; ++j) {
      for (std::size_t kcol = 0; kcol < j; ++kcol) {
        cplx proj(0, 0);
        for (std::size_t i = 0; i < rows; ++i) proj += std::conj(w(i, kcol)) * w(i, j);
        for (std::size_t i = 0; i < rows; ++i) w(i, j) -= proj * w(i, kcol);
      }
      double nrm = 0.0;
      for (std::size_t i = 0; i < rows; ++i) nrm += std::norm(w(i, j));
      nrm = std::sqrt(nrm);
      if (nrm <= 1e-14)
        throw numeric_error("random_isometry: rank-deficient Gaussian draw");
      for (std::size_t i = 0; i < rows; ++i) w(i, j) /= nrm;
    }
  }
  return w;
}

// ---- thin SVD ---------------------------------------------------------------

Svd svd_thin(const Matrix& m, double rel_cutoff) {
  Svd out;
  const bool tall = m.rows >= m.cols;
  // Gram matrix of the smaller side
  Matrix g = tall ? (m.dagger() * m) : (m * m.dagger());
  HermitianEig eig = hermitian_eig(g);
  const double smax2 = eig.values.empty() ? 0.0 : std::max(eig.values[0], 0.0);
  const double cut2 = std::max(smax2 * rel_cutoff * rel_cutoff, 0.0);
  std::size_t rank = 0;
  for (double lv : eig.values)
    if (lv > cut2 && lv > 1e-300) ++rank;
  if (rank == 0) rank = 0;

  out.sigma.resize(rank);
  if (tall) {
    out.vdag = Matrix(rank, m.cols);
    out.u = Matrix(m.rows, rank);
    for (std::size_t kk = 0; kk < rank; ++kk) {
      const double s = std::sqrt(std::max(eig.values[kk], 0.0));
      out.sigma[kk] = s;
      std::vector<cplx> v(m.cols);
      for (std::size_t i = 0; i < m.cols; ++i) v[i] = eig.vectors(i, kk);
      std::vector<cplx> u = m.apply(v);
      for (std::size_t i = 0; i < m.rows; ++i) out.u(i, kk) = u[i] / s;
      for (std::size_t i = 0; i < m.cols; ++i) out.vdag(kk, i) = std::conj(v[i]);
    }
  } else {
    out.u = Matrix(m.rows, rank);
    out.vdag = Matrix(rank, m.cols);
    for (std::size_t kk = 0; kk < rank; ++kk) {
      const double s = std::sqrt(std::max(eig.values[kk], 0.0));
      out.sigma[kk] = s;
      std::vector<cplx> u(m.rows);
      for (std::size_t i = 0; i < m.rows; ++i) u[i] = eig.vectors(i, kk);
      std::vector<cplx> v = m.apply_dagger(u);  // v = M† u, norm s
      for (std::size_t i = 0; i < m.rows; ++i) out.u(i, kk) = u[i];
      for (std::size_t i = 0; i < m.cols; ++i) out.vdag(kk, i) = std::conj(v[i] / s);
    }
  }
  return out;
}

double vec_norm(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const cplx& x : v) s += std::norm(x);
  return std::sqrt(s);
}

cplx vec_dot(const std::vector<cplx>& x, const std::vector<cplx>& y) {
  if (x.size() != y.size()) throw config_error("vec_dot: size mismatch");
  cplx s(0, 0);
  for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

void vec_scale(std::vector<cplx>& v, cplx f) {
  for (cplx& x : v) x *= f;
}

}  // namespace tngeo
