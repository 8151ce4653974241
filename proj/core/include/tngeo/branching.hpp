#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tngeo/common.hpp"

namespace tngeo {

// How block entropy (equivalently the minimal cut) scales with block size L.
enum class ScalingClass {
  constant,      // saturation
  log_l,         // log2(L)
  boundary,      // L^(D-1)
  boundary_log,  // L^(D-1) * log2(L)
  volume,        // L^D
};

const char* scaling_class_name(ScalingClass c);

// Holographic branching tree. A branch spans scales [z_start, z_end) and, if
// it ends, hands over to its children at z_end. Children may share structure
// (the self-similar trees below reuse subtrees), so multiplicities are counted
// by path, with memoisation.
class BranchingTree {
 public:
  struct Branch {
    long z_start = 0;
    std::optional<long> z_end;  // nullopt: extends to arbitrarily large scale
    std::vector<std::shared_ptr<const Branch>> children;
  };

  BranchingTree() = default;
  explicit BranchingTree(std::shared_ptr<const Branch> root, int spatial_dim = 1);

  // single branch over [0, z_end) or unbounded
  static BranchingTree single(std::optional<long> z_end, int spatial_dim = 1);
  // each branch splits into `children_per_split` at every scale; splits repeat
  // self-similarly without bound (depth only caps the materialised part)
  static BranchingTree splitting_every_scale(int children_per_split, int spatial_dim = 1,
                                             long materialised_depth = 48);
  // Fermi-surface dictionary: a Gamma-dimensional surface maps to 2^Gamma
  // children per scale step; Gamma = 0 is the single unbounded branch
  static BranchingTree fermi_surface(int spatial_dim, int gamma);
  // gapped system: single branch of finite extent z0
  static BranchingTree gapped(int spatial_dim, long z0);

  const std::shared_ptr<const Branch>& root() const { return root_; }
  int spatial_dim() const { return spatial_dim_; }
  bool valid() const;

  // number of branches alive at scale z (path-counted over shared subtrees)
  double multiplicity(long z) const;
  // true when every root-to-leaf path terminates at a finite scale
  bool finite_extent() const;
  // asymptotic growth rate gamma with m(z) ~ 2^(gamma z)
  double asymptotic_split_rate() const;

 private:
  std::shared_ptr<const Branch> root_;
  int spatial_dim_ = 1;
  long self_similar_children_ = 0;  // >0: materialised tree repeats forever
  long materialised_depth_ = 0;
};

// ---- layer-sum predictor ----------------------------------------------------

struct LayerSumPrediction {
  double predicted_n = 0.0;            // sum over scales of m(z) * c * |dA_z|
  std::vector<double> per_scale;       // individual contributions
  ScalingClass scaling = ScalingClass::constant;
  std::string formula;                 // human-readable layer sum
};

// Evaluates n(A) ~ sum_z m(z) * c * (L / 2^z)^(D-1) over T coarse-graining
// steps, with branch multiplicity m(z) (m = 1 without a tree), and classifies
// the asymptotic L-dependence. The proportionality constant c is not fixed by
// the scaling laws; it rescales predicted_n only, never the class.
LayerSumPrediction layer_sum_predictor(int dim, long block_size, long depth,
                                       const BranchingTree* tree = nullptr,
                                       double c = 1.0);

// Scaling class of S(L) for the given holographic tree; delegates to the
// layer-sum predictor.
LayerSumPrediction classify_branching(const BranchingTree& tree, int dim);

}  // namespace tngeo
