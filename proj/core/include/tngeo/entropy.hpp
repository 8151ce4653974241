#pragma once

#include <vector>

#include "tngeo/common.hpp"

namespace tngeo {

// entanglement entropy in bits from a probability vector (clips negatives
// from roundoff, renormalises)
double entropy_bits(const std::vector<double>& probs);

// Schmidt spectrum (eigenvalues of the reduced density matrix, descending)
// of a pure state split as dim_left x dim_right; works on the smaller side.
std::vector<double> schmidt_spectrum(const std::vector<cplx>& psi,
                                     std::size_t dim_left, std::size_t dim_right);

double bipartite_entropy_bits(const std::vector<cplx>& psi, std::size_t dim_left,
                              std::size_t dim_right);

// entropy of the contiguous block [block_start, block_start + block_len) of an
// n_sites chain with uniform site dimension, site 0 most significant
double block_entropy_bits(const std::vector<cplx>& psi, std::size_t site_dim,
                          std::size_t n_sites, std::size_t block_start,
                          std::size_t block_len);

}  // namespace tngeo
