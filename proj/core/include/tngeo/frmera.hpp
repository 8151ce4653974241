#pragma once

#include "tngeo/mera.hpp"

namespace tngeo {

// Finite-range MERA: z_xi scale-invariant layers (one shared (u, w) pair),
// dz free layers, and a product top with no correlations between coarse
// sites. Models a gapped state with correlation length ~ 2^z_xi.
struct FiniteRangeMERA {
  std::vector<MeraLayer> layers;  // size z_xi + dz; layer 0 physical
  long z_xi = 0;
  long dz = 0;
  std::vector<cplx> site_vector;  // the repeated per-site top vector
  long n_sites = 0;

  long z0() const { return z_xi + dz; }
  long top_width() const { return n_sites >> z0(); }
  std::size_t d() const { return layers.empty() ? site_vector.size() : layers.front().dim_in; }
  std::size_t dim_at(long z) const;
  void check_constraints(double tol = 1e-12) const;
};

// z_xi + dz <= log2(N). z_xi = dz = 0 is the bare product state.
FiniteRangeMERA build_finite_range_mera(long n_sites, long z_xi, long dz,
                                        std::size_t chi, std::size_t d,
                                        std::uint64_t seed);

// same state with the scale-invariant layers copied from the given MERA
FiniteRangeMERA finite_range_from_mera(const BinaryMERA& parent, long n_sites,
                                       long z_xi, long dz, std::uint64_t seed);

Tensor state_vector(const FiniteRangeMERA& m);
TNGraph to_graph(const FiniteRangeMERA& m);

double block_entropy(const FiniteRangeMERA& m, long block_len);

// causal-cone correlator; the product top closes cones site by site, so this
// works at any N for clean position families
cplx correlator_causal_cone(const FiniteRangeMERA& m, const LocalOperator& p,
                            const LocalOperator& q, long x1, long x2);
cplx expectation_causal_cone(const FiniteRangeMERA& m, const LocalOperator& p, long x);

// ---- diagnostics ------------------------------------------------------------

struct CrossoverRow {
  long r = 0;
  long geodesic_len = 0;
  bool in_log_regime = false;
};

struct CrossoverReport {
  std::vector<CrossoverRow> rows;
  bool linear_regime_detected = false;
  double kink = 0.0;             // r at the regime change (0 when none)
  double log_slope = 0.0;        // vs log2 r, below the kink
  double linear_slope = 0.0;     // vs r, above the kink
  double r2_joint = 0.0;
};

// Geodesic lengths on a finite-range MERA graph over the given separations,
// classified into log and linear regimes with the kink location.
CrossoverReport crossover_diagnostics(const TNGraph& g, const std::vector<long>& rs);

struct SaturationRow {
  long block_len = 0;
  double entropy_bits = -1.0;  // <0: state-vector route out of reach
  std::size_t mincut_count = 0;
  double mincut_weight = 0.0;
};

// S(L) (where the state-vector route reaches) and min-cut values per block.
std::vector<SaturationRow> entropy_saturation(const FiniteRangeMERA& m,
                                              const std::vector<long>& block_lens);

}  // namespace tngeo
