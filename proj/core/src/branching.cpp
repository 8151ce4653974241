#include "tngeo/branching.hpp"

#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace tngeo {

const char* scaling_class_name(ScalingClass c) {
  switch (c) {
    case ScalingClass::constant: return "constant";
    case ScalingClass::log_l: return "log L";
    case ScalingClass::boundary: return "L^(D-1)";
    case ScalingClass::boundary_log: return "L^(D-1) log L";
    case ScalingClass::volume: return "volume";
  }
  return "?";
}

BranchingTree::BranchingTree(std::shared_ptr<const Branch> root, int spatial_dim)
    : root_(std::move(root)), spatial_dim_(spatial_dim) {
  if (!valid()) throw config_error("branching tree: invalid scale bookkeeping");
}

BranchingTree BranchingTree::single(std::optional<long> z_end, int spatial_dim) {
  auto b = std::make_shared<Branch>();
  b->z_start = 0;
  b->z_end = z_end;
  return BranchingTree(b, spatial_dim);
}

BranchingTree BranchingTree::splitting_every_scale(int children_per_split,
                                                   int spatial_dim,
                                                   long materialised_depth) {
  if (children_per_split < 2)
    throw config_error("branching tree: need at least 2 children per split");
  // build bottom-up with shared subtrees: level-z node has k pointers to the
  // single level-(z+1) node
  auto leaf = std::make_shared<Branch>();
  leaf->z_start = materialised_depth;
  leaf->z_end = std::nullopt;
  std::shared_ptr<const Branch> below = leaf;
  for (long z = materialised_depth; z-- > 0;) {
    auto b = std::make_shared<Branch>();
    b->z_start = z;
    b->z_end = z + 1;
    b->children.assign(children_per_split, below);
    below = b;
  }
  BranchingTree t(below, spatial_dim);
  t.self_similar_children_ = children_per_split;
  t.materialised_depth_ = materialised_depth;
  return t;
}

BranchingTree BranchingTree::fermi_surface(int spatial_dim, int gamma) {
  if (gamma < 0 || gamma >= std::max(spatial_dim, 1) + 1)
    throw config_error("branching tree: Gamma out of range");
  if (gamma == 0) return single(std::nullopt, spatial_dim);
  return splitting_every_scale(1 << gamma, spatial_dim);
}

BranchingTree BranchingTree::gapped(int spatial_dim, long z0) {
  if (z0 < 0) throw config_error("branching tree: negative extent");
  return single(z0, spatial_dim);
}

namespace {

bool validate_branch(const BranchingTree::Branch& b,
                     std::set<const BranchingTree::Branch*>& on_path) {
  if (on_path.count(&b)) return false;  // cycle
  if (b.z_end && *b.z_end <= b.z_start) return false;
  if (!b.z_end && !b.children.empty()) return false;
  on_path.insert(&b);
  for (const auto& c : b.children) {
    if (!c) return false;
    if (b.z_end && c->z_start != *b.z_end) return false;
    if (!validate_branch(*c, on_path)) return false;
  }
  on_path.erase(&b);
  return true;
}

double multiplicity_rec(const BranchingTree::Branch& b, long z,
                        std::map<const BranchingTree::Branch*, double>& memo) {
  if (z < b.z_start) return 0.0;
  if (!b.z_end || z < *b.z_end) return 1.0;
  const auto it = memo.find(&b);
  if (it != memo.end()) return it->second;
  double m = 0.0;
  for (const auto& c : b.children) m += multiplicity_rec(*c, z, memo);
  memo[&b] = m;
  return m;
}

bool finite_rec(const BranchingTree::Branch& b,
                std::map<const BranchingTree::Branch*, bool>& memo) {
  if (!b.z_end) return false;
  if (b.children.empty()) return true;
  const auto it = memo.find(&b);
  if (it != memo.end()) return it->second;
  bool fin = true;
  for (const auto& c : b.children) fin = fin && finite_rec(*c, memo);
  memo[&b] = fin;
  return fin;
}

}  // namespace

bool BranchingTree::valid() const {
  if (!root_) return false;
  if (root_->z_start != 0) return false;
  std::set<const Branch*> on_path;
  return validate_branch(*root_, on_path);
}

double BranchingTree::multiplicity(long z) const {
  if (!root_) return 0.0;
  if (self_similar_children_ > 0 && z >= materialised_depth_) {
    // beyond the materialised part the splitting repeats: m(z) = k^z
    return std::pow(static_cast<double>(self_similar_children_),
                    static_cast<double>(z));
  }
  std::map<const Branch*, double> memo;
  return multiplicity_rec(*root_, z, memo);
}

bool BranchingTree::finite_extent() const {
  if (!root_) return true;
  if (self_similar_children_ > 0) return false;
  std::map<const Branch*, bool> memo;
  return finite_rec(*root_, memo);
}

double BranchingTree::asymptotic_split_rate() const {
  if (!root_) return 0.0;
  if (self_similar_children_ > 0)
    return std::log2(static_cast<double>(self_similar_children_));
  if (finite_extent()) return 0.0;
  // explicit finite tree with surviving branches: splits exhaust, so the
  // multiplicity is eventually constant
  return 0.0;
}

// ---- layer-sum predictor ------------------------------------------------------

namespace {

double boundary_sites(int dim, double ell) {
  switch (dim) {
    case 1: return 2.0;
    case 2: return 4.0 * ell;
    case 3: return 6.0 * ell * ell;
    default: throw config_error("layer sum: D must be 1, 2 or 3");
  }
}

ScalingClass classify(int dim, const BranchingTree* tree) {
  const bool finite = tree ? tree->finite_extent() : false;
  if (finite) return dim == 1 ? ScalingClass::constant : ScalingClass::boundary;
  const double gamma = tree ? tree->asymptotic_split_rate() : 0.0;
  const double excess = gamma - static_cast<double>(dim - 1);
  const double tol = 1e-9;
  if (excess < -tol) return ScalingClass::boundary;
  if (excess <= tol)
    return dim == 1 ? ScalingClass::log_l : ScalingClass::boundary_log;
  // faster-than-boundary growth; the sum is dominated by the deepest scale
  if (gamma >= static_cast<double>(dim) - tol) return ScalingClass::volume;
  return ScalingClass::volume;
}

}  // namespace

LayerSumPrediction layer_sum_predictor(int dim, long block_size, long depth,
                                       const BranchingTree* tree, double c) {
  if (dim < 1 || dim > 3) throw config_error("layer sum: D must be in {1,2,3}");
  if (block_size < 2) throw config_error("layer sum: block size must be >= 2");
  if (depth < 1) throw config_error("layer sum: depth must be >= 1");
  if (tree && !tree->valid()) throw config_error("layer sum: invalid tree");

  LayerSumPrediction out;
  double ell = static_cast<double>(block_size);
  for (long z = 0; z < depth && ell >= 1.0; ++z) {
    const double m = tree ? tree->multiplicity(z) : 1.0;
    const double n_z = m * c * boundary_sites(dim, ell);
    out.per_scale.push_back(n_z);
    out.predicted_n += n_z;
    ell /= 2.0;
  }
  out.scaling = classify(dim, tree);

  std::ostringstream os;
  os << "n(A) ~ sum_{z=0}^{" << depth - 1 << "} m(z) * " << c << " * |dA_z|, "
     << "|dA_z| = " << (dim == 1 ? "2" : (dim == 2 ? "4*(L/2^z)" : "6*(L/2^z)^2"));
  if (!tree)
    os << ", m(z) = 1";
  else if (tree->finite_extent())
    os << ", m(z) -> 0 above the last scale";
  else
    os << ", m(z) ~ 2^(" << tree->asymptotic_split_rate() << " z)";
  out.formula = os.str();
  return out;
}

LayerSumPrediction classify_branching(const BranchingTree& tree, int dim) {
  // representative desk-scale block; the class does not depend on it
  return layer_sum_predictor(dim, 256, 8, &tree, 1.0);
}

}  // namespace tngeo
