#include "tngeo/graph.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace tngeo {

const char* role_name(NodeRole r) {
  switch (r) {
    case NodeRole::site_tensor: return "site-tensor";
    case NodeRole::disentangler: return "disentangler";
    case NodeRole::isometry: return "isometry";
    case NodeRole::top: return "top";
    case NodeRole::peps_site: return "peps-site";
  }
  return "?";
}

std::string coord_to_string(const SiteCoord& c) {
  std::ostringstream os;
  os << c.x;
  if (c.y != 0) os << "," << c.y;
  return os.str();
}

std::string coord_to_string_2d(const SiteCoord& c) {
  std::ostringstream os;
  os << c.x << "," << c.y;
  return os.str();
}

SiteCoord coord_from_string(const std::string& s) {
  SiteCoord c;
  const auto comma = s.find(',');
  try {
    if (comma == std::string::npos) {
      c.x = std::stoi(s);
    } else {
      c.x = std::stoi(s.substr(0, comma));
      c.y = std::stoi(s.substr(comma + 1));
    }
  } catch (const std::exception&) {
    throw config_error("bad site coordinate '" + s + "'");
  }
  return c;
}

std::uint32_t TNGraph::add_node(NodeRole role) {
  nodes.push_back({role});
  return static_cast<std::uint32_t>(nodes.size() - 1);
}

void TNGraph::add_bond(std::uint32_t u, std::uint32_t v, std::size_t chi) {
  if (u >= nodes.size() || v >= nodes.size())
    throw config_error("add_bond: node id out of range");
  if (chi < 1) throw config_error("add_bond: bond dimension must be >= 1");
  if (u > v) std::swap(u, v);
  bonds.push_back({u, v, chi});
}

std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> TNGraph::adjacency()
    const {
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> adj(nodes.size());
  for (std::uint32_t b = 0; b < bonds.size(); ++b) {
    adj[bonds[b].u].push_back({bonds[b].v, b});
    adj[bonds[b].v].push_back({bonds[b].u, b});
  }
  return adj;
}

bool TNGraph::connected() const {
  if (nodes.empty()) return false;
  const auto adj = adjacency();
  std::vector<char> seen(nodes.size(), 0);
  std::deque<std::uint32_t> q{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!q.empty()) {
    const std::uint32_t n = q.front();
    q.pop_front();
    for (const auto& [m, b] : adj[n])
      if (!seen[m]) {
        seen[m] = 1;
        ++count;
        q.push_back(m);
      }
  }
  return count == nodes.size();
}

void TNGraph::validate() const {
  for (const Bond& b : bonds)
    if (b.chi < 1) throw config_error("graph: bond dimension < 1");
  for (const auto& [coord, node] : site_legs)
    if (node >= nodes.size()) throw config_error("graph: site leg points nowhere");
  if (!connected()) throw numeric_error("graph: not connected");
}

std::string TNGraph::to_text() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    os << "node " << i << " " << role_name(nodes[i].role) << "\n";
  std::vector<Bond> sorted_bonds = bonds;
  std::stable_sort(sorted_bonds.begin(), sorted_bonds.end(),
                   [](const Bond& a, const Bond& b) {
                     return std::tie(a.u, a.v, a.chi) < std::tie(b.u, b.v, b.chi);
                   });
  for (const Bond& b : sorted_bonds)
    os << "bond " << b.u << " " << b.v << " " << b.chi << "\n";
  const bool two_d = (kind == "peps");
  for (const auto& [coord, node] : site_legs)
    os << "site " << (two_d ? coord_to_string_2d(coord) : coord_to_string(coord))
       << " " << node << "\n";
  return os.str();
}

// ---- builders ---------------------------------------------------------------

TNGraph build_mps_graph(long n_sites, std::size_t chi, std::size_t site_dim) {
  if (n_sites < 2) throw config_error("mps graph: need at least 2 sites");
  if (site_dim == 0) site_dim = chi;
  TNGraph g;
  g.kind = "mps";
  g.params["N"] = n_sites;
  g.params["chi"] = static_cast<long>(chi);
  for (long i = 0; i < n_sites; ++i) {
    const std::uint32_t n = g.add_node(NodeRole::site_tensor);
    g.site_legs[{static_cast<int>(i), 0}] = n;
    g.site_dims[{static_cast<int>(i), 0}] = site_dim;
    if (i > 0) g.add_bond(n - 1, n, chi);
  }
  return g;
}

TNGraph build_peps_graph(long lx, long ly, std::size_t chi) {
  if (lx < 2 || ly < 2) throw config_error("peps graph: need Lx, Ly >= 2");
  TNGraph g;
  g.kind = "peps";
  g.params["Lx"] = lx;
  g.params["Ly"] = ly;
  g.params["chi"] = static_cast<long>(chi);
  auto id = [&](long x, long y) { return static_cast<std::uint32_t>(y * lx + x); };
  for (long y = 0; y < ly; ++y)
    for (long x = 0; x < lx; ++x) {
      const std::uint32_t n = g.add_node(NodeRole::peps_site);
      g.site_legs[{static_cast<int>(x), static_cast<int>(y)}] = n;
      g.site_dims[{static_cast<int>(x), static_cast<int>(y)}] = chi;
      (void)n;
    }
  for (long y = 0; y < ly; ++y)
    for (long x = 0; x < lx; ++x) {
      if (x + 1 < lx) g.add_bond(id(x, y), id(x + 1, y), chi);
      if (y + 1 < ly) g.add_bond(id(x, y), id(x, y + 1), chi);
    }
  return g;
}

namespace {

// index of the disentangler touching site s at lattice width w
// (pairing: u_i acts on sites (2i+1, 2i+2 mod w))
std::size_t u_index_touching(long s, long w) {
  if (s % 2 == 1) return static_cast<std::size_t>((s - 1) / 2);
  return static_cast<std::size_t>(((s - 2 + w) / 2) % (w / 2));
}

// One MERA layer on a lattice of width w whose site s is fed by feeder[s]
// (empty feeder row = physical layer; site legs are attached instead).
// Returns the isometry row: coarse site j is the output of iso[j].
struct LayerResult {
  std::vector<std::uint32_t> u_row;
  std::vector<std::uint32_t> w_row;  // empty for split steps
};

LayerResult add_u_row(TNGraph& g, long w, const std::vector<std::uint32_t>& feeder,
                      std::size_t in_dim, long site_offset) {
  LayerResult res;
  const long half = w / 2;
  for (long i = 0; i < half; ++i) res.u_row.push_back(g.add_node(NodeRole::disentangler));
  for (long s = 0; s < w; ++s) {
    const std::uint32_t u = res.u_row[u_index_touching(s, w)];
    if (feeder.empty()) {
      g.site_legs[{static_cast<int>(site_offset + s), 0}] = u;
      g.site_dims[{static_cast<int>(site_offset + s), 0}] = in_dim;
    } else {
      g.add_bond(feeder[s], u, in_dim);
    }
  }
  return res;
}

void add_w_row(TNGraph& g, long w, LayerResult& layer, std::size_t mid_dim) {
  const long half = w / 2;
  for (long j = 0; j < half; ++j) layer.w_row.push_back(g.add_node(NodeRole::isometry));
  for (long j = 0; j < half; ++j) {
    // isometry j absorbs post-u sites (2j, 2j+1)
    g.add_bond(layer.u_row[u_index_touching(2 * j, w)], layer.w_row[j], mid_dim);
    g.add_bond(layer.u_row[u_index_touching(2 * j + 1, w)], layer.w_row[j], mid_dim);
  }
}

void check_mera_sizes(long n, long layers) {
  if (layers < 1) throw config_error("mera graph: need at least one layer");
  long w = n;
  for (long z = 0; z < layers; ++z) {
    if (w < 2 || w % 2 != 0)
      throw config_error("mera graph: N not compatible with layer count");
    w /= 2;
  }
}

}  // namespace

TNGraph build_mera_graph_dims(long n_sites, long layers,
                              const std::vector<std::size_t>& layer_dims) {
  check_mera_sizes(n_sites, layers);
  if (layer_dims.size() != static_cast<std::size_t>(layers) + 1)
    throw config_error("mera graph: need layers+1 dims");
  TNGraph g;
  g.kind = "mera";
  g.params["N"] = n_sites;
  g.params["T"] = layers;
  g.params["chi"] = static_cast<long>(layer_dims.back());

  std::vector<std::uint32_t> feeder;  // empty: physical layer
  long w = n_sites;
  for (long z = 0; z < layers; ++z) {
    LayerResult layer = add_u_row(g, w, feeder, layer_dims[z], 0);
    add_w_row(g, w, layer, layer_dims[z]);
    feeder = layer.w_row;
    w /= 2;
  }
  const std::uint32_t top = g.add_node(NodeRole::top);
  for (std::uint32_t f : feeder) g.add_bond(f, top, layer_dims[layers]);
  return g;
}

TNGraph build_mera_graph(long n_sites, long layers, std::size_t chi) {
  return build_mera_graph_dims(n_sites, layers,
                               std::vector<std::size_t>(layers + 1, chi));
}

TNGraph build_finite_range_mera_graph_dims(long n_sites, long z0,
                                           const std::vector<std::size_t>& layer_dims) {
  if (z0 < 0) throw config_error("frmera graph: z0 must be >= 0");
  TNGraph g;
  if (z0 == 0) {
    // product state straight away: a chi=1 chain of product nodes, so the
    // geometry collapses onto the physical line
    if (n_sites < 2) throw config_error("frmera graph: need at least 2 sites");
    g.kind = "frmera";
    g.params["N"] = n_sites;
    g.params["z0"] = 0;
    g.params["chi"] = static_cast<long>(layer_dims.at(0));
    for (long i = 0; i < n_sites; ++i) {
      const std::uint32_t n = g.add_node(NodeRole::top);
      g.site_legs[{static_cast<int>(i), 0}] = n;
      g.site_dims[{static_cast<int>(i), 0}] = layer_dims.at(0);
      if (i > 0) g.add_bond(n - 1, n, 1);
    }
    return g;
  }
  check_mera_sizes(n_sites, z0);
  if (layer_dims.size() != static_cast<std::size_t>(z0) + 1)
    throw config_error("frmera graph: need z0+1 dims");
  g.kind = "frmera";
  g.params["N"] = n_sites;
  g.params["z0"] = z0;
  g.params["chi"] = static_cast<long>(layer_dims.back());

  std::vector<std::uint32_t> feeder;
  long w = n_sites;
  for (long z = 0; z < z0; ++z) {
    LayerResult layer = add_u_row(g, w, feeder, layer_dims[z], 0);
    add_w_row(g, w, layer, layer_dims[z]);
    feeder = layer.w_row;
    w /= 2;
  }
  // product fixed point: one bondless-above top node per coarse site
  for (std::uint32_t f : feeder) {
    const std::uint32_t t = g.add_node(NodeRole::top);
    g.add_bond(f, t, layer_dims[z0]);
  }
  return g;
}

TNGraph build_finite_range_mera_graph(long n_sites, long z0, std::size_t chi) {
  return build_finite_range_mera_graph_dims(
      n_sites, z0, std::vector<std::size_t>(std::max<long>(z0, 0) + 1, chi));
}

TNGraph build_branching_mera_graph_1d(long n_sites, const std::set<long>& branch_scales,
                                      std::size_t chi) {
  if (n_sites < 4 || (n_sites & (n_sites - 1)) != 0)
    throw config_error("branching mera graph: N must be a power of two >= 4");
  TNGraph g;
  g.kind = "branching-mera";
  g.params["N"] = n_sites;
  g.params["chi"] = static_cast<long>(chi);

  struct BranchState {
    long width;
    std::vector<std::uint32_t> feeder;  // empty only at z = 0
  };
  std::vector<BranchState> branches{{n_sites, {}}};

  long z = 0;
  while (true) {
    bool any_alive = false;
    for (const BranchState& b : branches)
      if (b.width > 1) any_alive = true;
    if (!any_alive) break;

    const bool split = branch_scales.count(z) > 0;
    std::vector<BranchState> next;
    for (BranchState& b : branches) {
      if (b.width == 1) {
        next.push_back(std::move(b));
        continue;
      }
      if (split) {
        if (b.width < 4)
          throw config_error("branching mera graph: schedule exceeds available depth");
        LayerResult layer = add_u_row(g, b.width, b.feeder, chi, 0);
        // reroute: even post-u sites continue in one branch, odd in the other
        BranchState even{b.width / 2, {}}, odd{b.width / 2, {}};
        for (long s = 0; s < b.width; s += 2)
          even.feeder.push_back(layer.u_row[u_index_touching(s, b.width)]);
        for (long s = 1; s < b.width; s += 2)
          odd.feeder.push_back(layer.u_row[u_index_touching(s, b.width)]);
        next.push_back(std::move(even));
        next.push_back(std::move(odd));
      } else {
        LayerResult layer = add_u_row(g, b.width, b.feeder, chi, 0);
        add_w_row(g, b.width, layer, chi);
        next.push_back({b.width / 2, layer.w_row});
      }
    }
    branches = std::move(next);
    ++z;
  }
  if (!branch_scales.empty() && *branch_scales.rbegin() >= z)
    throw config_error("branching mera graph: schedule exceeds available depth");
  for (const BranchState& b : branches) {
    const std::uint32_t t = g.add_node(NodeRole::top);
    g.add_bond(b.feeder.at(0), t, chi);
  }
  return g;
}

// ---- regions & geodesics ----------------------------------------------------

Region Region::interval(int first, int last) {
  if (last < first) std::swap(first, last);
  Region r;
  for (int x = first; x <= last; ++x) r.sites.insert({x, 0});
  r.contiguous = true;
  return r;
}

Region Region::block2d(int x0, int y0, int x1, int y1) {
  if (x1 < x0) std::swap(x0, x1);
  if (y1 < y0) std::swap(y0, y1);
  Region r;
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) r.sites.insert({x, y});
  r.contiguous = true;
  return r;
}

void Region::validate(const TNGraph& g) const {
  if (sites.empty()) throw config_error("region: empty");
  for (const SiteCoord& s : sites)
    if (!g.site_legs.count(s))
      throw config_error("region: site " + coord_to_string(s) + " not in lattice");
  // contiguity check: 4-neighbour connectivity over the coordinate set
  std::deque<SiteCoord> q{*sites.begin()};
  std::set<SiteCoord> seen{*sites.begin()};
  while (!q.empty()) {
    const SiteCoord c = q.front();
    q.pop_front();
    const SiteCoord nb[4] = {{c.x - 1, c.y}, {c.x + 1, c.y}, {c.x, c.y - 1}, {c.x, c.y + 1}};
    for (const SiteCoord& m : nb)
      if (sites.count(m) && !seen.count(m)) {
        seen.insert(m);
        q.push_back(m);
      }
  }
  const bool actually_contiguous = seen.size() == sites.size();
  if (contiguous != actually_contiguous)
    throw config_error("region: contiguity flag inconsistent with coordinates");
}

long geodesic(const TNGraph& g, const SiteCoord& x1, const SiteCoord& x2,
              bool link_count) {
  const auto it1 = g.site_legs.find(x1);
  const auto it2 = g.site_legs.find(x2);
  if (it1 == g.site_legs.end())
    throw config_error("geodesic: unknown site " + coord_to_string(x1));
  if (it2 == g.site_legs.end())
    throw config_error("geodesic: unknown site " + coord_to_string(x2));
  const std::uint32_t a = it1->second, b = it2->second;
  if (a == b) return link_count ? 0 : 1;

  const auto adj = g.adjacency();
  std::vector<long> dist(g.nodes.size(), -1);
  std::deque<std::uint32_t> q{a};
  dist[a] = 0;
  while (!q.empty()) {
    const std::uint32_t n = q.front();
    q.pop_front();
    if (n == b) break;
    for (const auto& [m, bond] : adj[n])
      if (dist[m] < 0) {
        dist[m] = dist[n] + 1;
        q.push_back(m);
      }
  }
  if (dist[b] < 0) throw numeric_error("geodesic: sites not connected");
  return link_count ? dist[b] : dist[b] + 1;
}

}  // namespace tngeo
