#include "tngeo/mincut.hpp"

#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>

namespace tngeo {

namespace {

// Dinic max-flow on a directed residual network.
template <class Cap>
struct Dinic {
  struct Edge {
    std::uint32_t to;
    Cap cap;
  };
  std::vector<Edge> edges;                    // paired: e and e^1 are reverses
  std::vector<std::vector<std::uint32_t>> adj;
  std::vector<int> level;
  std::vector<std::uint32_t> iter;
  Cap eps;

  explicit Dinic(std::size_t n, Cap epsilon) : adj(n), level(n), iter(n), eps(epsilon) {}

  void add_edge(std::uint32_t u, std::uint32_t v, Cap cap_fwd, Cap cap_bwd) {
    adj[u].push_back(static_cast<std::uint32_t>(edges.size()));
    edges.push_back({v, cap_fwd});
    adj[v].push_back(static_cast<std::uint32_t>(edges.size()));
    edges.push_back({u, cap_bwd});
  }

  bool bfs(std::uint32_t s, std::uint32_t t) {
    std::fill(level.begin(), level.end(), -1);
    std::deque<std::uint32_t> q{s};
    level[s] = 0;
    while (!q.empty()) {
      const std::uint32_t u = q.front();
      q.pop_front();
      for (std::uint32_t e : adj[u]) {
        if (edges[e].cap > eps && level[edges[e].to] < 0) {
          level[edges[e].to] = level[u] + 1;
          q.push_back(edges[e].to);
        }
      }
    }
    return level[t] >= 0;
  }

  Cap dfs(std::uint32_t u, std::uint32_t t, Cap pushed) {
    if (u == t) return pushed;
    for (std::uint32_t& i = iter[u]; i < adj[u].size(); ++i) {
      const std::uint32_t e = adj[u][i];
      const std::uint32_t v = edges[e].to;
      if (edges[e].cap > eps && level[v] == level[u] + 1) {
        const Cap got = dfs(v, t, std::min(pushed, edges[e].cap));
        if (got > eps) {
          edges[e].cap -= got;
          edges[e ^ 1].cap += got;
          return got;
        }
      }
    }
    level[u] = -1;
    return Cap(0);
  }

  Cap max_flow(std::uint32_t s, std::uint32_t t) {
    Cap flow(0);
    const Cap inf = std::numeric_limits<Cap>::max() / Cap(4);
    while (bfs(s, t)) {
      std::fill(iter.begin(), iter.end(), 0);
      Cap got;
      while ((got = dfs(s, t, inf)) > eps) flow += got;
    }
    return flow;
  }
};

template <class Cap, class BondCapFn, class SiteCapFn>
Cap solve(const TNGraph& g, const Region& region, Cap eps, BondCapFn bond_cap,
          SiteCapFn site_cap) {
  // network nodes: tensors, one terminal per site, source, sink
  const std::size_t nt = g.nodes.size();
  const std::size_t ns = g.site_legs.size();
  const std::uint32_t src = static_cast<std::uint32_t>(nt + ns);
  const std::uint32_t snk = src + 1;
  Dinic<Cap> net(nt + ns + 2, eps);
  const Cap inf = std::numeric_limits<Cap>::max() / Cap(8);

  for (const Bond& b : g.bonds) {
    const Cap c = bond_cap(b.chi);
    net.add_edge(b.u, b.v, c, c);
  }
  std::uint32_t term = static_cast<std::uint32_t>(nt);
  for (const auto& [coord, carrier] : g.site_legs) {
    const Cap c = site_cap(g.site_dims.at(coord));
    net.add_edge(term, carrier, c, c);
    if (region.sites.count(coord))
      net.add_edge(src, term, inf, Cap(0));
    else
      net.add_edge(term, snk, inf, Cap(0));
    ++term;
  }
  return net.max_flow(src, snk);
}

}  // namespace

MinCutResult min_cut(const TNGraph& g, const Region& region) {
  region.validate(g);
  MinCutResult res;
  if (region.sites.size() >= g.site_legs.size()) {
    res.whole_lattice = true;
    return res;
  }

  const auto unit = [](std::size_t) { return std::int64_t(1); };
  const auto unit_site = [](std::size_t) { return std::int64_t(1); };
  res.bond_count = static_cast<std::size_t>(
      solve<std::int64_t>(g, region, 0, unit, unit_site));

  const auto wcap = [](std::size_t chi) { return std::log2(static_cast<double>(chi)); };
  res.weight_bits = solve<double>(g, region, 1e-12, wcap, wcap);
  return res;
}

}  // namespace tngeo
