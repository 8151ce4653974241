#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "tngeo/branching.hpp"

using namespace tngeo;

TEST_CASE("multiplicity counting on explicit and self-similar trees") {
  const BranchingTree single = BranchingTree::single(std::nullopt);
  CHECK(single.multiplicity(0) == 1.0);
  CHECK(single.multiplicity(17) == 1.0);
  CHECK(!single.finite_extent());

  const BranchingTree gapped = BranchingTree::gapped(1, 3);
  CHECK(gapped.multiplicity(2) == 1.0);
  CHECK(gapped.multiplicity(3) == 0.0);
  CHECK(gapped.finite_extent());

  const BranchingTree bin = BranchingTree::splitting_every_scale(2);
  CHECK(bin.multiplicity(0) == 1.0);
  CHECK(bin.multiplicity(1) == 2.0);
  CHECK(bin.multiplicity(10) == doctest::Approx(1024.0));
  CHECK(bin.asymptotic_split_rate() == doctest::Approx(1.0));

  const BranchingTree quad = BranchingTree::splitting_every_scale(4);
  CHECK(quad.multiplicity(3) == doctest::Approx(64.0));
  CHECK(quad.asymptotic_split_rate() == doctest::Approx(2.0));
}

TEST_CASE("invalid trees are rejected") {
  auto root = std::make_shared<BranchingTree::Branch>();
  root->z_start = 0;
  root->z_end = 2;
  auto child = std::make_shared<BranchingTree::Branch>();
  child->z_start = 5;  // must equal the parent's z_end
  child->z_end = std::nullopt;
  root->children = {child, child};
  CHECK_THROWS_AS(BranchingTree(root, 1), config_error);
}

TEST_CASE("layer sum predictor: unbranched classes") {
  // D=1, T = log2 L: logarithmic with two bonds per scale
  const LayerSumPrediction d1 = layer_sum_predictor(1, 64, 6);
  CHECK(d1.scaling == ScalingClass::log_l);
  CHECK(d1.predicted_n == doctest::Approx(2.0 * 6));

  // D=2: boundary law, geometric sum dominated by z=0
  const LayerSumPrediction d2 = layer_sum_predictor(2, 64, 6);
  CHECK(d2.scaling == ScalingClass::boundary);
  CHECK(d2.per_scale[0] == doctest::Approx(4.0 * 64));
  CHECK(d2.predicted_n < 2.0 * 4.0 * 64);

  // D=2 with doubling multiplicity: every scale contributes equally
  const BranchingTree bin = BranchingTree::splitting_every_scale(2, 2);
  const LayerSumPrediction d2b = layer_sum_predictor(2, 64, 6, &bin);
  CHECK(d2b.scaling == ScalingClass::boundary_log);
  for (std::size_t z = 1; z < d2b.per_scale.size(); ++z)
    CHECK(d2b.per_scale[z] == doctest::Approx(d2b.per_scale[0]));

  CHECK_THROWS_AS(layer_sum_predictor(4, 64, 6), config_error);
  CHECK_THROWS_AS(layer_sum_predictor(2, 1, 6), config_error);
}

TEST_CASE("classifier reproduces the free-fermion table") {
  // D=1: gapped saturates, point surface gives log L
  CHECK(classify_branching(BranchingTree::gapped(1, 3), 1).scaling ==
        ScalingClass::constant);
  CHECK(classify_branching(BranchingTree::fermi_surface(1, 0), 1).scaling ==
        ScalingClass::log_l);
  // D=2: gapped L, Gamma=0 L, Gamma=1 L log L
  CHECK(classify_branching(BranchingTree::gapped(2, 3), 2).scaling ==
        ScalingClass::boundary);
  CHECK(classify_branching(BranchingTree::fermi_surface(2, 0), 2).scaling ==
        ScalingClass::boundary);
  CHECK(classify_branching(BranchingTree::fermi_surface(2, 1), 2).scaling ==
        ScalingClass::boundary_log);
  // D=3: gapped L^2, Gamma=0 L^2, Gamma=1 L^2, Gamma=2 L^2 log L
  CHECK(classify_branching(BranchingTree::gapped(3, 3), 3).scaling ==
        ScalingClass::boundary);
  CHECK(classify_branching(BranchingTree::fermi_surface(3, 0), 3).scaling ==
        ScalingClass::boundary);
  CHECK(classify_branching(BranchingTree::fermi_surface(3, 1), 3).scaling ==
        ScalingClass::boundary);
  CHECK(classify_branching(BranchingTree::fermi_surface(3, 2), 3).scaling ==
        ScalingClass::boundary_log);
}

TEST_CASE("classifier matches the unbranched predictor for trivial trees") {
  for (int dim : {1, 2, 3}) {
    const BranchingTree trivial = BranchingTree::single(std::nullopt, dim);
    const LayerSumPrediction with_tree = layer_sum_predictor(dim, 128, 7, &trivial);
    const LayerSumPrediction without = layer_sum_predictor(dim, 128, 7);
    CHECK(with_tree.scaling == without.scaling);
    CHECK(with_tree.predicted_n == doctest::Approx(without.predicted_n));
  }
}

TEST_CASE("volume law from over-branched D=1 geometry") {
  const BranchingTree bin = BranchingTree::splitting_every_scale(2, 1);
  CHECK(classify_branching(bin, 1).scaling == ScalingClass::volume);
}
