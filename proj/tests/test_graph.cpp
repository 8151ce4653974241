#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "tngeo/graph.hpp"
#include "tngeo/mincut.hpp"

using namespace tngeo;

TEST_CASE("mps graph: counts and bond dims") {
  const TNGraph g2 = build_mps_graph(2, 2);
  CHECK(g2.num_nodes() == 2);
  CHECK(g2.num_bonds() == 1);

  const TNGraph g = build_mps_graph(64, 2);
  CHECK(g.num_nodes() == 64);
  CHECK(g.num_bonds() == 63);
  CHECK(g.connected());

  const TNGraph g3 = build_mps_graph(16, 3);
  for (const Bond& b : g3.bonds) CHECK(b.chi == 3);

  CHECK_THROWS_AS(build_mps_graph(1, 2), config_error);
}

TEST_CASE("peps graph: grid counts and site legs") {
  const TNGraph g22 = build_peps_graph(2, 2, 2);
  CHECK(g22.num_nodes() == 4);
  CHECK(g22.num_bonds() == 4);

  const TNGraph g = build_peps_graph(8, 8, 2);
  CHECK(g.num_nodes() == 64);
  CHECK(g.num_bonds() == 112);  // 2 * 8 * 7
  CHECK(g.site_legs.size() == 64);
  std::set<std::uint32_t> carriers;
  for (const auto& [coord, node] : g.site_legs) carriers.insert(node);
  CHECK(carriers.size() == 64);  // one leg per node, each exactly once

  CHECK_THROWS_AS(build_peps_graph(1, 8, 2), config_error);
}

TEST_CASE("mera graph: construction counts") {
  const TNGraph g42 = build_mera_graph(4, 2, 2);
  // widths 4 -> 2 -> 1: (2u+2w) + (1u+1w) + top
  CHECK(g42.num_nodes() == 7);
  CHECK(g42.connected());

  // hand count for N=16, T=4: 8+8 + 4+4 + 2+2 + 1+1 + top = 31
  const TNGraph g = build_mera_graph(16, 4, 2);
  CHECK(g.num_nodes() == 31);
  CHECK(g.site_legs.size() == 16);
  CHECK(g.connected());

  // every physical site leg lands on a disentangler (periodic pairing)
  for (const auto& [coord, node] : g.site_legs)
    CHECK(g.nodes[node].role == NodeRole::disentangler);

  CHECK_THROWS_AS(build_mera_graph(12, 3, 2), config_error);
}

TEST_CASE("finite-range mera graph: product top") {
  const TNGraph g1 = build_finite_range_mera_graph(8, 1, 2);
  // one layer (4u+4w) + 4 product tops
  CHECK(g1.num_nodes() == 12);

  const TNGraph g = build_finite_range_mera_graph(16, 2, 2);
  // (8u+8w) + (4u+4w) + 4 tops
  CHECK(g.num_nodes() == 28);
  long top_count = 0;
  const auto adj = g.adjacency();
  for (std::size_t n = 0; n < g.num_nodes(); ++n)
    if (g.nodes[n].role == NodeRole::top) {
      ++top_count;
      CHECK(adj[n].size() == 1);  // leaves: no bonds among product nodes
      CHECK(g.nodes[adj[n][0].first].role == NodeRole::isometry);
    }
  CHECK(top_count == 4);
  CHECK(g.connected());
}

TEST_CASE("finite-range mera graph at z0 = 0 is a product chain") {
  const TNGraph g = build_finite_range_mera_graph(8, 0, 2);
  CHECK(g.num_nodes() == 8);
  CHECK(g.num_bonds() == 7);
  for (const Bond& b : g.bonds) CHECK(b.chi == 1);
  // geodesic grows linearly with unit slope from the start
  CHECK(geodesic(g, {0, 0}, {5, 0}) == 6);
  CHECK(geodesic(g, {2, 0}, {3, 0}) == 2);
}

TEST_CASE("branching mera graph: empty schedule reproduces the plain mera") {
  const TNGraph plain = build_mera_graph(16, 4, 2);
  const TNGraph branched = build_branching_mera_graph_1d(16, {}, 2);
  CHECK(plain.to_text() == branched.to_text());
}

TEST_CASE("branching mera graph: single branch scale") {
  const TNGraph g = build_branching_mera_graph_1d(16, {1}, 2);
  // z0 normal (8u+8w), z1 split (4u), two branches: z2 (2u+2w each),
  // z3 (1u+1w each), 2 tops: 16 + 4 + 8 + 4 + 2 = 34
  CHECK(g.num_nodes() == 34);
  const TNGraph plain = build_mera_graph(16, 4, 2);
  CHECK(g.num_nodes() > plain.num_nodes());
  long tops = 0;
  for (const auto& n : g.nodes)
    if (n.role == NodeRole::top) ++tops;
  CHECK(tops == 2);
  CHECK(g.connected());
}

TEST_CASE("branching mera graph: branch at every available scale") {
  // N=8 allows splits at z=0 and z=1; the width-2 branches then coarse-grain
  const TNGraph g = build_branching_mera_graph_1d(8, {0, 1}, 2);
  long tops = 0;
  for (const auto& n : g.nodes)
    if (n.role == NodeRole::top) ++tops;
  CHECK(tops == 4);  // N/2
  // hand count: split 4u, 2x split 2u = 4u, 4x (1u+1w) = 8, 4 tops
  CHECK(g.num_nodes() == 20);
  CHECK_THROWS_AS(build_branching_mera_graph_1d(8, {0, 1, 2}, 2), config_error);
}

TEST_CASE("geodesic: mps distances and conventions") {
  const TNGraph g = build_mps_graph(64, 2);
  CHECK(geodesic(g, {3, 0}, {10, 0}) == 8);  // |x1-x2| + 1 tensors
  CHECK(geodesic(g, {5, 0}, {5, 0}) == 1);
  CHECK(geodesic(g, {3, 0}, {10, 0}, true) == 7);  // link-count variant
  CHECK(geodesic(g, {10, 0}, {3, 0}) == 8);        // symmetry
  CHECK_THROWS_AS(geodesic(g, {0, 0}, {99, 0}), config_error);
}

TEST_CASE("geodesic: symmetry and triangle inequality on a mera graph") {
  const TNGraph g = build_mera_graph(64, 6, 2);
  const SiteCoord a{3, 0}, b{17, 0}, c{42, 0};
  const long ab = geodesic(g, a, b), ba = geodesic(g, b, a);
  const long bc = geodesic(g, b, c), ac = geodesic(g, a, c);
  CHECK(ab == ba);
  // node counts: D(a,c) <= D(a,b) + D(b,c) - 1 (b's tensor shared)
  CHECK(ac <= ab + bc - 1);
}

TEST_CASE("mera geodesics grow logarithmically") {
  const TNGraph g = build_mera_graph(256, 8, 2);
  const long d2 = geodesic(g, {0, 0}, {2, 0});
  const long d128 = geodesic(g, {0, 0}, {128, 0});
  CHECK(d2 < d128);
  CHECK(d128 <= 40);  // far below the physical distance 129
}

TEST_CASE("graph text export is stable and parseable") {
  const TNGraph g = build_mps_graph(4, 3);
  const std::string text = g.to_text();
  CHECK(text == g.to_text());
  CHECK(text.find("node 0 site-tensor") != std::string::npos);
  CHECK(text.find("bond 0 1 3") != std::string::npos);
  CHECK(text.find("site 2 2") != std::string::npos);
}

TEST_CASE("min cut: mps interior block has n(A) = 2") {
  const TNGraph g = build_mps_graph(64, 4);
  const MinCutResult cut = min_cut(g, Region::interval(20, 40));
  CHECK(cut.bond_count == 2);
  CHECK(cut.weight_bits == doctest::Approx(2.0 * std::log2(4.0)).epsilon(1e-9));
}

TEST_CASE("min cut: peps 16x16 interior 4x4 block") {
  const TNGraph g = build_peps_graph(16, 16, 2);
  const MinCutResult cut = min_cut(g, Region::block2d(6, 6, 9, 9));
  CHECK(cut.bond_count == 16);  // 4L with L=4
}

TEST_CASE("min cut: complement symmetry and whole-lattice convention") {
  const TNGraph g = build_mps_graph(16, 2);
  Region inner = Region::interval(5, 9);
  Region outer;
  for (int x = 0; x < 16; ++x)
    if (x < 5 || x > 9) outer.sites.insert({x, 0});
  outer.contiguous = false;
  const MinCutResult a = min_cut(g, inner);
  const MinCutResult b = min_cut(g, outer);
  CHECK(a.bond_count == b.bond_count);
  CHECK(a.weight_bits == doctest::Approx(b.weight_bits).epsilon(1e-9));

  const MinCutResult whole = min_cut(g, Region::interval(0, 15));
  CHECK(whole.whole_lattice);
  CHECK(whole.bond_count == 0);
}

TEST_CASE("min cut: mera block grows logarithmically and beats explicit cuts") {
  const TNGraph g = build_mera_graph(256, 8, 2);
  std::size_t prev = 0;
  for (long l : {4L, 16L, 64L}) {
    const long start = (256 - l) / 2;
    const MinCutResult cut =
        min_cut(g, Region::interval(start, start + l - 1));
    CHECK(cut.bond_count >= prev);
    prev = cut.bond_count;
    CHECK(cut.bond_count <= static_cast<std::size_t>(2 * 8 + 4));
  }
}

TEST_CASE("min cut: region validation") {
  const TNGraph g = build_mps_graph(8, 2);
  Region bad;
  bad.contiguous = true;  // empty
  CHECK_THROWS_AS(min_cut(g, bad), config_error);
  Region off = Region::interval(6, 12);  // outside the lattice
  CHECK_THROWS_AS(min_cut(g, off), config_error);
  Region wrong_flag;
  wrong_flag.sites = {{0, 0}, {2, 0}};
  wrong_flag.contiguous = true;  // actually split
  CHECK_THROWS_AS(min_cut(g, wrong_flag), config_error);
}
