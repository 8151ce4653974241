#pragma once

#include "tngeo/frmera.hpp"
#include "tngeo/mps.hpp"

namespace tngeo {

struct ConversionReport {
  std::size_t chi_mera = 0;
  long z0 = 0;
  std::size_t chi_mps_max = 1;
  std::vector<std::size_t> chi_mps_per_bond;
  double fidelity = 0.0;
  FiniteMPS mps;

  // {chi_mera, z0, chi_mps_max, chi_mps_per_bond, fidelity}
  std::string to_json_string() const;
};

// Exact compilation of a finite-range MERA into an open-boundary MPS by
// successive rank-revealing splits; no truncation, so the fidelity is 1 up
// to roundoff. Bond dimensions are the exact column-cut ranks and stay below
// chi^(2 z0), the per-column vertical-cut bound (two crossed bonds per layer).
ConversionReport mera_to_mps(const FiniteRangeMERA& m);

}  // namespace tngeo
