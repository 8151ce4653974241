#include "tngeo/entropy.hpp"

#include <cmath>

#include "tngeo/linalg.hpp"

namespace tngeo {

double entropy_bits(const std::vector<double>& probs) {
  double total = 0.0;
  for (double p : probs)
    if (p > 0.0) total += p;
  if (total <= 0.0) return 0.0;
  double s = 0.0;
  for (double p : probs) {
    if (p <= 1e-300) continue;
    const double q = p / total;
    s -= q * std::log2(q);
  }
  return s;
}

std::vector<double> schmidt_spectrum(const std::vector<cplx>& psi,
                                     std::size_t dim_left, std::size_t dim_right) {
  if (psi.size() != dim_left * dim_right)
    throw config_error("schmidt_spectrum: state size mismatch");
  const bool left_small = dim_left <= dim_right;
  const std::size_t ds = left_small ? dim_left : dim_right;
  Matrix g(ds, ds);
  if (left_small) {
    // G_{i i'} = sum_j psi(i,j) conj(psi(i',j))
    for (std::size_t i = 0; i < ds; ++i)
      for (std::size_t ip = i; ip < ds; ++ip) {
        cplx acc(0, 0);
        const cplx* ri = psi.data() + i * dim_right;
        const cplx* rp = psi.data() + ip * dim_right;
        for (std::size_t j = 0; j < dim_right; ++j) acc += ri[j] * std::conj(rp[j]);
        g(i, ip) = std::conj(acc);
        g(ip, i) = acc;
      }
  } else {
    // G_{j j'} = sum_i psi(i,j) conj(psi(i,j'))
    for (std::size_t i = 0; i < dim_left; ++i) {
      const cplx* row = psi.data() + i * dim_right;
      for (std::size_t j = 0; j < ds; ++j)
        for (std::size_t jp = j; jp < ds; ++jp) g(j, jp) += std::conj(row[j]) * row[jp];
    }
    for (std::size_t j = 0; j < ds; ++j)
      for (std::size_t jp = 0; jp < j; ++jp) g(j, jp) = std::conj(g(jp, j));
  }
  HermitianEig eig = hermitian_eig(g);
  for (double& v : eig.values) v = std::max(v, 0.0);
  return eig.values;
}

double bipartite_entropy_bits(const std::vector<cplx>& psi, std::size_t dim_left,
                              std::size_t dim_right) {
  return entropy_bits(schmidt_spectrum(psi, dim_left, dim_right));
}

double block_entropy_bits(const std::vector<cplx>& psi, std::size_t site_dim,
                          std::size_t n_sites, std::size_t block_start,
                          std::size_t block_len) {
  if (block_start + block_len > n_sites)
    throw config_error("block_entropy_bits: block out of range");
  if (block_len == 0 || block_len >= n_sites)
    throw config_error("block_entropy_bits: block must be a proper subset");
  std::size_t d_pre = 1, d_mid = 1, d_post = 1;
  for (std::size_t i = 0; i < block_start; ++i) d_pre *= site_dim;
  for (std::size_t i = 0; i < block_len; ++i) d_mid *= site_dim;
  for (std::size_t i = block_start + block_len; i < n_sites; ++i) d_post *= site_dim;
  if (psi.size() != d_pre * d_mid * d_post)
    throw config_error("block_entropy_bits: state size mismatch");

  // permute the block to the front: M[mid, (pre, post)]
  std::vector<cplx> m(psi.size());
  for (std::size_t pre = 0; pre < d_pre; ++pre)
    for (std::size_t mid = 0; mid < d_mid; ++mid) {
      const cplx* src = psi.data() + (pre * d_mid + mid) * d_post;
      cplx* dst = m.data() + (mid * d_pre + pre) * d_post;
      for (std::size_t post = 0; post < d_post; ++post) dst[post] = src[post];
    }
  return bipartite_entropy_bits(m, d_mid, d_pre * d_post);
}

}  // namespace tngeo
