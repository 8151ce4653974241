#pragma once

#include "tngeo/local_operator.hpp"
#include "tngeo/tensor.hpp"

namespace tngeo {

// Homogeneous matrix product state: one repeated site tensor A with index
// order (left, physical, right), plus boundary vectors emulating the infinite
// chain on open finite windows.
struct HomogeneousMPS {
  Tensor site;  // dims (chi, d, chi), labels l, p, r
  std::vector<cplx> left_boundary;
  std::vector<cplx> right_boundary;
  double normalization = 1.0;  // scale removed by normalize()
  bool normalized = false;

  std::size_t chi() const { return site.dims()[0]; }
  std::size_t d() const { return site.dims()[1]; }
};

HomogeneousMPS random_homogeneous_mps(std::size_t chi, std::size_t d,
                                      std::uint64_t seed);
HomogeneousMPS product_state_mps(const std::vector<cplx>& site_amplitudes);
HomogeneousMPS mps_from_site_tensor(Tensor site);

// chi^2 x chi^2 transfer matrix, row (a,a'), column (b,b');
// E = sum_s A^s (x) conj(A^s)
Matrix transfer_matrix(const HomogeneousMPS& m);
// operator-dressed variant; dressed_transfer(m, identity) == transfer_matrix(m)
Matrix dressed_transfer(const HomogeneousMPS& m, const LocalOperator& op);

// Rescales A so the dominant transfer eigenvalue is exactly 1 and installs
// boundary vectors derived from the dominant transfer eigenmatrices (their
// leading Schmidt vectors), so finite windows probe the bulk state.
HomogeneousMPS normalize(const HomogeneousMPS& m);

struct CorrelationLength {
  enum class Status { ok, uncorrelated, infinite_or_degenerate };
  Status status = Status::ok;
  double xi = 0.0;
  double lambda2_mod = 0.0;
  bool modulus_tie = false;  // conjugate-pair tie on lambda_2 (xi still defined)
};

// xi = -1 / ln|lambda_2|. Product states report Status::uncorrelated with
// xi = 0; |lambda_2| within 1e-10 of 1 reports infinite_or_degenerate. A
// modulus tie between genuinely different modes (not a conjugate pair) throws.
CorrelationLength correlation_length(const HomogeneousMPS& m);

// Connected correlator <P_x1 Q_x2> - <P_x1><Q_x2> on the open boundary-vector
// chain of n_sites sites (positions 1-based).
cplx two_point_correlator(const HomogeneousMPS& m, const LocalOperator& p,
                          const LocalOperator& q, long x1, long x2, long n_sites);

// Same correlator in the infinite bulk at separation r >= 1, evaluated with
// the dominant transfer eigenmatrices as environments.
cplx bulk_correlator(const HomogeneousMPS& m, const LocalOperator& p,
                     const LocalOperator& q, long r);

// Entropy (bits) of L contiguous central sites of an n_sites chain, computed
// exactly through transfer matrices (cost polynomial in chi, independent of
// the d^N state size).
double block_entropy(const HomogeneousMPS& m, long block_len, long n_sites);

// Brute-force amplitudes of the n_sites boundary-vector chain (d^N <= 2^20).
Tensor state_vector(const HomogeneousMPS& m, long n_sites, bool normalize_output = true);

// ---- site-dependent open chain ----------------------------------------------

struct FiniteMPS {
  std::vector<Tensor> sites;  // dims (chi_{i-1}, d, chi_i), labels l, p, r

  std::size_t n_sites() const { return sites.size(); }
  std::vector<std::size_t> bond_dims() const;  // interior bonds, size n-1
  std::size_t max_bond_dim() const;
  void validate() const;
};

Tensor state_vector(const FiniteMPS& m, bool normalize_output = true);

}  // namespace tngeo
