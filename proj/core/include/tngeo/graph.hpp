#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tngeo/common.hpp"

namespace tngeo {

enum class NodeRole { site_tensor, disentangler, isometry, top, peps_site };

const char* role_name(NodeRole r);

// Physical site coordinate; y stays 0 for one-dimensional lattices.
struct SiteCoord {
  int x = 0;
  int y = 0;
  auto operator<=>(const SiteCoord&) const = default;
};

std::string coord_to_string(const SiteCoord& c);
SiteCoord coord_from_string(const std::string& s);

struct Bond {
  std::uint32_t u = 0, v = 0;
  std::size_t chi = 1;
};

// Abstract tensor-network geometry: nodes with roles, weighted bonds and the
// map from physical sites to the node carrying that open leg. Instances are
// immutable after build; queries are pure.
struct TNGraph {
  struct Node {
    NodeRole role;
  };

  std::vector<Node> nodes;
  std::vector<Bond> bonds;
  std::map<SiteCoord, std::uint32_t> site_legs;
  std::map<SiteCoord, std::size_t> site_dims;  // open-leg dimension per site

  std::string kind;                        // mps | peps | mera | frmera | branching-mera
  std::map<std::string, long> params;      // N, T, z0, Lx, Ly, chi, ...

  std::uint32_t add_node(NodeRole role);
  void add_bond(std::uint32_t u, std::uint32_t v, std::size_t chi);

  std::size_t num_nodes() const { return nodes.size(); }
  std::size_t num_bonds() const { return bonds.size(); }

  // adjacency as (neighbour node, bond index)
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> adjacency() const;

  bool connected() const;
  void validate() const;

  // line-oriented text format, stable ordering:
  //   node <id> <role>
  //   bond <u> <v> <chi>
  //   site <coord> <node>
  std::string to_text() const;
};

// ---- geometry builders -----------------------------------------------------

// site_dim 0 defaults to chi
TNGraph build_mps_graph(long n_sites, std::size_t chi, std::size_t site_dim = 0);
TNGraph build_peps_graph(long lx, long ly, std::size_t chi);

// Binary MERA, periodic pairing at every layer: at width w the disentangler i
// acts on sites (2i+1, 2i+2 mod w) and the isometry j absorbs (2j, 2j+1).
// Site dims default to chi; per-layer dims may be supplied by tensor engines.
TNGraph build_mera_graph(long n_sites, long layers, std::size_t chi);
TNGraph build_mera_graph_dims(long n_sites, long layers,
                              const std::vector<std::size_t>& layer_dims);

// z0 MERA layers topped by per-site product nodes. For z0 >= 1 the product
// nodes are bondless leaves; for z0 = 0 the product row is connected as a
// chi=1 chain so the graph stays connected and geodesics stay defined.
TNGraph build_finite_range_mera_graph(long n_sites, long z0, std::size_t chi);
TNGraph build_finite_range_mera_graph_dims(long n_sites, long z0,
                                           const std::vector<std::size_t>& layer_dims);

// At each scale in the schedule every branch splits into two independent
// continuations (disentangler row, then even/odd rerouting); other scales
// coarse-grain as usual. A split needs per-branch width >= 4.
TNGraph build_branching_mera_graph_1d(long n_sites, const std::set<long>& branch_scales,
                                      std::size_t chi);

// ---- geometric queries -----------------------------------------------------

// Region of the physical lattice.
struct Region {
  std::set<SiteCoord> sites;
  bool contiguous = false;

  static Region interval(int first, int last);           // 1D [first, last]
  static Region block2d(int x0, int y0, int x1, int y1);  // inclusive corners
  void validate(const TNGraph& g) const;
};

// Minimal number of tensors on any path connecting the two site legs,
// counting both endpoint tensors. link_count = false gives that tensor count;
// true gives the bond count (tensors - 1).
long geodesic(const TNGraph& g, const SiteCoord& x1, const SiteCoord& x2,
              bool link_count = false);

}  // namespace tngeo
