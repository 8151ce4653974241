#pragma once

#include "tngeo/graph.hpp"

namespace tngeo {

struct MinCutResult {
  std::size_t bond_count = 0;  // minimal number of crossing bonds
  double weight_bits = 0.0;    // minimal sum of log2(chi_e) over a cut
  bool whole_lattice = false;  // region covered every site: 0 by convention
};

// Minimum over node partitions separating region A's site legs from the
// complement's, of the number (respectively log2-weight) of crossing bonds.
// Solved by max-flow; open site legs enter as cuttable indices of the site's
// dimension, so tensors carrying legs of both regions are handled. Count and
// weight are optimised independently (they coincide for uniform chi).
MinCutResult min_cut(const TNGraph& g, const Region& region);

}  // namespace tngeo
