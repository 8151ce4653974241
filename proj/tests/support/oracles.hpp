#pragma once

// Test-only reference implementations, kept independent of the library's
// computation paths on purpose.

#include <complex>
#include <vector>

#include "tngeo/linalg.hpp"
#include "tngeo/tensor.hpp"

namespace oracle {

using tngeo::cplx;
using tngeo::Matrix;
using tngeo::Tensor;

// contraction by direct summation over all index assignments
inline Tensor contract_bruteforce(
    const Tensor& a, const Tensor& b,
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<std::size_t> a_c, b_c;
  for (const auto& [la, lb] : pairs) {
    a_c.push_back(a.axis_of(la));
    b_c.push_back(b.axis_of(lb));
  }
  std::vector<std::size_t> a_free, b_free;
  std::vector<std::size_t> out_dims;
  std::vector<std::string> out_labels;
  for (std::size_t i = 0; i < a.rank(); ++i)
    if (std::find(a_c.begin(), a_c.end(), i) == a_c.end()) {
      a_free.push_back(i);
      out_dims.push_back(a.dims()[i]);
      out_labels.push_back(a.labels()[i]);
    }
  for (std::size_t i = 0; i < b.rank(); ++i)
    if (std::find(b_c.begin(), b_c.end(), i) == b_c.end()) {
      b_free.push_back(i);
      out_dims.push_back(b.dims()[i]);
      out_labels.push_back(b.labels()[i]);
    }
  std::size_t out_size = 1, csize = 1;
  for (std::size_t d : out_dims) out_size *= d;
  for (std::size_t ax : a_c) csize *= a.dims()[ax];

  Tensor out(out_dims.empty() ? std::vector<std::size_t>{} : out_dims,
             out_labels.empty() ? std::vector<std::string>{} : out_labels);
  if (out_dims.empty()) out = Tensor::scalar(cplx(0, 0));

  std::vector<std::size_t> ai(a.rank(), 0), bi(b.rank(), 0), oi(out_dims.size(), 0);
  for (std::size_t o = 0; o < out_size; ++o) {
    // decode output index
    {
      std::size_t rem = o;
      for (std::size_t k = out_dims.size(); k-- > 0;) {
        oi[k] = rem % out_dims[k];
        rem /= out_dims[k];
      }
    }
    for (std::size_t k = 0; k < a_free.size(); ++k) ai[a_free[k]] = oi[k];
    for (std::size_t k = 0; k < b_free.size(); ++k) bi[b_free[k]] = oi[a_free.size() + k];
    cplx acc(0, 0);
    for (std::size_t c = 0; c < csize; ++c) {
      std::size_t rem = c;
      for (std::size_t k = a_c.size(); k-- > 0;) {
        const std::size_t v = rem % a.dims()[a_c[k]];
        rem /= a.dims()[a_c[k]];
        ai[a_c[k]] = v;
        bi[b_c[k]] = v;
      }
      acc += a.at(ai) * b.at(bi);
    }
    if (out_dims.empty())
      out.mutable_data()[0] = acc;
    else
      out.mutable_data()[out.flat_index(oi)] = acc;
  }
  return out;
}

// characteristic polynomial via Newton's identities on trace powers
inline std::vector<cplx> char_poly(const Matrix& m) {
  const std::size_t n = m.rows;
  std::vector<cplx> power_sums(n + 1, cplx(0, 0));
  Matrix acc = m;
  for (std::size_t k = 1; k <= n; ++k) {
    power_sums[k] = acc.trace();
    if (k < n) acc = acc * m;
  }
  std::vector<cplx> e(n + 1, cplx(0, 0));
  e[0] = 1.0;
  for (std::size_t k = 1; k <= n; ++k) {
    cplx s(0, 0);
    double sign = 1.0;
    for (std::size_t i = 1; i <= k; ++i) {
      s += sign * e[k - i] * power_sums[i];
      sign = -sign;
    }
    e[k] = s / static_cast<double>(k);
  }
  // p(x) = sum_k coeff[k] x^k with coeff[n] = 1
  std::vector<cplx> coeff(n + 1);
  double sign = 1.0;
  for (std::size_t k = 0; k <= n; ++k) {
    coeff[n - k] = sign * e[k];
    sign = -sign;
  }
  return coeff;
}

// all roots of a monic-normalisable polynomial, Aberth-Ehrlich iteration
inline std::vector<cplx> poly_roots(std::vector<cplx> coeff) {
  const std::size_t n = coeff.size() - 1;
  for (auto& c : coeff) c /= coeff[n];
  auto eval = [&](cplx x, cplx& deriv) {
    cplx p = coeff[n], d(0, 0);
    for (std::size_t k = n; k-- > 0;) {
      d = d * x + p;
      p = p * x + coeff[k];
    }
    deriv = d;
    return p;
  };
  double radius = 0.0;
  for (std::size_t k = 0; k < n; ++k) radius = std::max(radius, std::abs(coeff[k]));
  radius = 1.0 + radius;
  std::vector<cplx> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double ang = 2.0 * 3.14159265358979323846 * (static_cast<double>(i) + 0.35) /
                       static_cast<double>(n);
    z[i] = radius * cplx(std::cos(ang), std::sin(ang));
  }
  for (int it = 0; it < 400; ++it) {
    double moved = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cplx d;
      const cplx p = eval(z[i], d);
      if (std::abs(d) < 1e-300) continue;
      const cplx ratio = p / d;
      cplx sum(0, 0);
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) sum += 1.0 / (z[i] - z[j]);
      const cplx w = ratio / (1.0 - ratio * sum);
      z[i] -= w;
      moved = std::max(moved, std::abs(w));
    }
    if (moved < 1e-14) break;
  }
  return z;
}

inline std::vector<cplx> eigenvalues_bruteforce(const Matrix& m) {
  std::vector<cplx> roots = poly_roots(char_poly(m));
  std::sort(roots.begin(), roots.end(),
            [](cplx a, cplx b) { return std::abs(a) > std::abs(b); });
  return roots;
}

}  // namespace oracle
