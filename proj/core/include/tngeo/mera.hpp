#pragma once

#include "tngeo/graph.hpp"
#include "tngeo/local_operator.hpp"
#include "tngeo/tensor.hpp"

namespace tngeo {

// One coarse-graining layer: disentangler u ((dim_in^2) x (dim_in^2) unitary,
// pairs (2i+1, 2i+2) mod width) followed by isometries w ((dim_in^2) x dim_out
// tall, W†W = 1, absorbing (2j, 2j+1)). Descending towards the physical
// lattice applies w then u.
struct MeraLayer {
  Matrix u;
  Matrix w;
  std::size_t dim_in = 0;   // site dimension of the finer lattice
  std::size_t dim_out = 0;  // site dimension after coarse-graining
};

struct BinaryMERA {
  std::vector<MeraLayer> layers;  // layer 0 touches the physical lattice
  std::vector<cplx> top;          // state on the width-n_top top lattice
  long n_sites = 0;
  long n_top = 1;
  bool scale_invariant = false;

  long depth() const { return static_cast<long>(layers.size()); }
  std::size_t d() const { return layers.empty() ? 0 : layers.front().dim_in; }
  std::size_t dim_at(long z) const;  // lattice site dimension at scale z
  std::size_t top_site_dim() const;
  void check_constraints(double tol = 1e-12) const;
};

// Random isometric tensors throughout, deterministic per seed. chi must
// satisfy d <= chi <= d^2 at layer 0; scale-invariant states additionally
// need chi == d so one (u, w) pair fits every layer.
BinaryMERA random_mera(long n_sites, long layers, std::size_t chi, std::size_t d,
                       std::uint64_t seed, bool scale_invariant);

// identity disentanglers and embedding isometries: an unentangled state
BinaryMERA product_mera(long n_sites, long layers, std::size_t d);

// Exact amplitudes by top-down contraction (d^N <= 2^20); unit norm follows
// from the isometric constraints plus the normalised top.
Tensor state_vector(const BinaryMERA& m);

// Connected correlator evaluated inside the joint causal cone of {x1, x2}
// (cost polynomial in chi, linear in depth). Positions whose cones cannot be
// merged within the window budget fall back to the state-vector route; if
// that is out of reach too, throws numeric_error.
cplx correlator_causal_cone(const BinaryMERA& m, const LocalOperator& p,
                            const LocalOperator& q, long x1, long x2);

// expectation of a single local operator, same machinery
cplx expectation_causal_cone(const BinaryMERA& m, const LocalOperator& p, long x);

// dense oracle route (d^N <= 2^20)
cplx correlator_dense(const BinaryMERA& m, const LocalOperator& p,
                      const LocalOperator& q, long x1, long x2);

struct ScalingSpectrum {
  Matrix superoperator;            // (d^2) x (d^2) one-site ascending channel
  std::vector<cplx> eigenvalues;   // modulus-descending, lambda_1 = 1
  std::vector<double> exponents;   // q_k = -2 log2 |lambda_k|
};

// One-site scaling superoperator of a scale-invariant MERA: the average of
// the two parity ascents, closed with a normalised partial trace so the
// identity stays a fixed point.
ScalingSpectrum scaling_spectrum(const BinaryMERA& m);

// entropy (bits) of L contiguous central sites via the state-vector route
double block_entropy(const BinaryMERA& m, long block_len);

// geometry with this state's actual per-layer bond dimensions
TNGraph to_graph(const BinaryMERA& m);

// ---- shared layer machinery (used by the finite-range variant too) --------

namespace detail {

// state over `width` sites of dimension `dim` each, site 0 most significant
std::vector<cplx> descend_one_layer(const std::vector<cplx>& state, long coarse_width,
                                    const MeraLayer& layer);

std::vector<cplx> random_unit_vector(std::size_t dim, std::uint64_t seed);

// operators travelling up the network
struct OpWindow {
  long start = 0;  // leftmost site, unwrapped (may be negative)
  long width = 0;
  Tensor op;  // legs o0..o_{w-1}, i0..i_{w-1}, each of the layer's site dim
};

OpWindow make_window(const LocalOperator& op, long site);
OpWindow ascend_window(const OpWindow& win, const MeraLayer& layer, long lattice_width);
bool windows_separable(const OpWindow& a, const OpWindow& b, long lattice_width);
OpWindow merge_windows(const OpWindow& a, const OpWindow& b, long lattice_width,
                       std::size_t dim);

// dense helpers for the near-top regime
Matrix window_to_full_matrix(const OpWindow& win, long lattice_width, std::size_t dim);
Matrix layer_descent_matrix(const MeraLayer& layer, long coarse_width);

// evaluate windows against the tower of layers above `z0` and the top state
cplx cone_value(const std::vector<MeraLayer>& layers, const std::vector<cplx>& top,
                long n_top, std::vector<OpWindow> windows, long lattice_width);

}  // namespace detail

}  // namespace tngeo
