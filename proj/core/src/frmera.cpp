#include "tngeo/frmera.hpp"

#include <algorithm>
#include <cmath>

#include "tngeo/entropy.hpp"
#include "tngeo/fit.hpp"
#include "tngeo/mincut.hpp"
#include "tngeo/rng.hpp"

namespace tngeo {

namespace {

constexpr std::size_t kStateCap = std::size_t(1) << 20;
constexpr std::size_t kWindowBudget = std::size_t(4) << 20;

std::size_t ipow(std::size_t base, long exp) {
  std::size_t r = 1;
  for (long i = 0; i < exp; ++i) r *= base;
  return r;
}

bool pow_within(std::size_t base, long exp, std::size_t cap) {
  double v = 1.0;
  for (long i = 0; i < exp; ++i) {
    v *= static_cast<double>(base);
    if (v > static_cast<double>(cap)) return false;
  }
  return true;
}

std::string oleg(long j) { return "o" + std::to_string(j); }
std::string ileg(long j) { return "i" + std::to_string(j); }

}  // namespace

std::size_t FiniteRangeMERA::dim_at(long z) const {
  if (z < 0 || z > z0()) throw config_error("frmera: scale out of range");
  if (layers.empty()) return site_vector.size();
  if (z == 0) return layers.front().dim_in;
  return layers[z - 1].dim_out;
}

void FiniteRangeMERA::check_constraints(double tol) const {
  for (const MeraLayer& l : layers) {
    const Matrix uu = l.u.dagger() * l.u;
    const Matrix ww = l.w.dagger() * l.w;
    if ((uu - Matrix::identity(l.dim_in * l.dim_in)).max_abs() > tol)
      throw numeric_error("frmera: disentangler is not unitary");
    if ((ww - Matrix::identity(l.dim_out)).max_abs() > tol)
      throw numeric_error("frmera: isometry violates w†w = 1");
  }
  double nrm = 0.0;
  for (const cplx& v : site_vector) nrm += std::norm(v);
  if (std::abs(std::sqrt(nrm) - 1.0) > tol)
    throw numeric_error("frmera: product vector is not normalised");
}

FiniteRangeMERA build_finite_range_mera(long n_sites, long z_xi, long dz,
                                        std::size_t chi, std::size_t d,
                                        std::uint64_t seed) {
  if (z_xi < 0 || dz < 0) throw config_error("frmera: negative layer counts");
  const long z0 = z_xi + dz;
  if (n_sites < 2) throw config_error("frmera: need at least 2 sites");
  if (z0 > 0 && n_sites % (1L << z0) != 0)
    throw config_error("frmera: depth exceeds lattice");
  if (d < 2) throw config_error("frmera: need d >= 2");
  if (z0 > 0 && (chi < d || chi > d * d))
    throw config_error("frmera: need d <= chi <= d^2");
  if (z_xi >= 2 && chi != d)
    throw config_error("frmera: shared scale-invariant layers need chi == d");

  FiniteRangeMERA m;
  m.n_sites = n_sites;
  m.z_xi = z_xi;
  m.dz = dz;
  for (long z = 0; z < z0; ++z) {
    MeraLayer layer;
    layer.dim_in = (z == 0) ? d : chi;
    layer.dim_out = chi;
    const bool shared = (z > 0 && z < z_xi);
    if (shared) {
      layer.u = m.layers.front().u;
      layer.w = m.layers.front().w;
    } else {
      const std::size_t din2 = layer.dim_in * layer.dim_in;
      const std::uint64_t base = (z < z_xi) ? 0 : 2 * z;
      layer.u = random_isometry(din2, din2, Rng::derive(seed, base));
      layer.w = random_isometry(din2, layer.dim_out, Rng::derive(seed, base + 1));
    }
    m.layers.push_back(std::move(layer));
  }
  const std::size_t top_dim = (z0 == 0) ? d : chi;
  m.site_vector = detail::random_unit_vector(top_dim, Rng::derive(seed, 0x51e));
  return m;
}

FiniteRangeMERA finite_range_from_mera(const BinaryMERA& parent, long n_sites,
                                       long z_xi, long dz, std::uint64_t seed) {
  if (!parent.scale_invariant)
    throw config_error("frmera: parent must be scale-invariant");
  if (z_xi > parent.depth()) throw config_error("frmera: parent too shallow");
  const std::size_t chi = parent.d();
  FiniteRangeMERA m = build_finite_range_mera(n_sites, z_xi, dz, chi, chi, seed);
  for (long z = 0; z < z_xi; ++z) m.layers[z] = parent.layers[z];
  return m;
}

namespace {

std::vector<cplx> product_top_state(const FiniteRangeMERA& m) {
  const long w = m.top_width();
  std::vector<cplx> state{cplx(1, 0)};
  for (long i = 0; i < w; ++i) {
    std::vector<cplx> next(state.size() * m.site_vector.size());
    std::size_t k = 0;
    for (const cplx& a : state)
      for (const cplx& b : m.site_vector) next[k++] = a * b;
    state = std::move(next);
  }
  return state;
}

}  // namespace

Tensor state_vector(const FiniteRangeMERA& m) {
  if (!pow_within(m.d(), m.n_sites, kStateCap))
    throw config_error("frmera state_vector: d^N exceeds the 2^20 cap");
  std::vector<cplx> state = product_top_state(m);
  long width = m.top_width();
  for (long z = m.z0() - 1; z >= 0; --z) {
    state = detail::descend_one_layer(state, width, m.layers[z]);
    width *= 2;
  }
  std::vector<std::size_t> dims(m.n_sites, m.d());
  std::vector<std::string> labels;
  for (long i = 0; i < m.n_sites; ++i) labels.push_back("s" + std::to_string(i));
  Tensor t(dims, labels, std::move(state));
  t.check_finite("frmera state_vector");
  return t;
}

TNGraph to_graph(const FiniteRangeMERA& m) {
  std::vector<std::size_t> dims;
  for (long z = 0; z <= m.z0(); ++z) dims.push_back(m.dim_at(z));
  return build_finite_range_mera_graph_dims(m.n_sites, m.z0(), dims);
}

double block_entropy(const FiniteRangeMERA& m, long block_len) {
  if (block_len < 1 || block_len >= m.n_sites)
    throw config_error("block_entropy: need 1 <= L < N");
  const Tensor psi = state_vector(m);
  const long start = (m.n_sites - block_len) / 2;
  return block_entropy_bits(psi.data(), m.d(), m.n_sites, start, block_len);
}

// ---- product-top causal cones -------------------------------------------------

namespace {

cplx window_product_expectation(const detail::OpWindow& win,
                                const std::vector<cplx>& v) {
  Tensor t = win.op;
  const Tensor vin({v.size()}, {"pv"}, v);
  const Tensor vout = vin.conjugated().relabeled({"pvc"});
  for (long p = 0; p < win.width; ++p) {
    t = contract(t, vin, {{ileg(p), "pv"}});
    t = contract(t, vout, {{oleg(p), "pvc"}});
  }
  return t.data()[0];
}

cplx product_cone_value(const FiniteRangeMERA& m,
                        std::vector<detail::OpWindow> windows) {
  bool full_mode = false;
  Matrix full_op;
  long width = m.n_sites;
  const long depth = m.z0();

  for (long z = 0; z <= depth; ++z) {
    const std::size_t dim = m.dim_at(z);
    if (!full_mode && z < depth) {
      long max_w = 0;
      for (const auto& w : windows) max_w = std::max(max_w, w.width);
      if (width <= max_w + 4) {
        if (!pow_within(dim, 2 * width, kWindowBudget))
          throw numeric_error("cone: window exceeds lattice before dense regime");
        full_op = Matrix::identity(ipow(dim, width));
        for (const auto& w : windows)
          full_op = full_op * detail::window_to_full_matrix(w, width, dim);
        full_mode = true;
      }
    }
    if (z == depth) break;
    if (full_mode) {
      const Matrix md = detail::layer_descent_matrix(m.layers[z], width / 2);
      full_op = md.dagger() * (full_op * md);
      width /= 2;
      continue;
    }
    for (bool again = true; again;) {
      again = false;
      for (std::size_t i = 0; i < windows.size() && !again; ++i)
        for (std::size_t j = i + 1; j < windows.size() && !again; ++j) {
          if (detail::windows_separable(windows[i], windows[j], width)) continue;
          const long combined = windows[i].width + windows[j].width + width;  // bound
          if (!pow_within(dim, 2 * std::min<long>(combined, windows[i].width +
                                                                windows[j].width + 4 + 4),
                          kWindowBudget))
            throw numeric_error("cone: windows collide beyond the merge budget");
          detail::OpWindow merged =
              detail::merge_windows(windows[i], windows[j], width, dim);
          if (!pow_within(dim, 2 * (merged.width + 4), kWindowBudget))
            throw numeric_error("cone: merged window beyond the budget");
          windows.erase(windows.begin() + j);
          windows[i] = std::move(merged);
          again = true;
        }
    }
    for (auto& w : windows) w = detail::ascend_window(w, m.layers[z], width);
    width /= 2;
  }

  if (full_mode) {
    std::vector<cplx> prod{cplx(1, 0)};
    for (long i = 0; i < width; ++i) {
      std::vector<cplx> next(prod.size() * m.site_vector.size());
      std::size_t k = 0;
      for (const cplx& a : prod)
        for (const cplx& b : m.site_vector) next[k++] = a * b;
      prod = std::move(next);
    }
    return vec_dot(prod, full_op.apply(prod));
  }
  cplx val(1, 0);
  for (const auto& w : windows) val *= window_product_expectation(w, m.site_vector);
  return val;
}

}  // namespace

cplx expectation_causal_cone(const FiniteRangeMERA& m, const LocalOperator& p, long x) {
  if (x < 0 || x >= m.n_sites) throw config_error("cone: site out of range");
  if (p.dim != m.d()) throw config_error("cone: operator dim mismatch");
  return product_cone_value(m, {detail::make_window(p, x)});
}

cplx correlator_causal_cone(const FiniteRangeMERA& m, const LocalOperator& p,
                            const LocalOperator& q, long x1, long x2) {
  if (x1 == x2) throw config_error("correlator: x1 == x2");
  if (x1 < 0 || x2 < 0 || x1 >= m.n_sites || x2 >= m.n_sites)
    throw config_error("correlator: site out of range");
  if (p.dim != m.d() || q.dim != m.d())
    throw config_error("correlator: operator dim mismatch");
  try {
    const cplx joint =
        product_cone_value(m, {detail::make_window(p, x1), detail::make_window(q, x2)});
    const cplx mp = expectation_causal_cone(m, p, x1);
    const cplx mq = expectation_causal_cone(m, q, x2);
    return joint - mp * mq;
  } catch (const numeric_error&) {
    if (!pow_within(m.d(), m.n_sites, kStateCap)) throw;
    // dense fallback through the state vector
    const Tensor psi = state_vector(m);
    const std::vector<cplx>& amps = psi.data();
    const std::size_t d = m.d();
    auto apply_site = [&](const std::vector<cplx>& v, const Matrix& op, long x) {
      const std::size_t post = ipow(d, m.n_sites - 1 - x);
      const std::size_t pre = v.size() / (post * d);
      std::vector<cplx> out(v.size(), cplx(0, 0));
      for (std::size_t a = 0; a < pre; ++a)
        for (std::size_t s = 0; s < d; ++s)
          for (std::size_t sp = 0; sp < d; ++sp) {
            const cplx o = op(s, sp);
            if (o == cplx(0, 0)) continue;
            const cplx* src = v.data() + (a * d + sp) * post;
            cplx* dst = out.data() + (a * d + s) * post;
            for (std::size_t b = 0; b < post; ++b) dst[b] += o * src[b];
          }
      return out;
    };
    const cplx joint = vec_dot(amps, apply_site(apply_site(amps, q.mat, x2), p.mat, x1));
    const cplx mp = vec_dot(amps, apply_site(amps, p.mat, x1));
    const cplx mq = vec_dot(amps, apply_site(amps, q.mat, x2));
    return joint - mp * mq;
  }
}

// ---- diagnostics ----------------------------------------------------------------

CrossoverReport crossover_diagnostics(const TNGraph& g, const std::vector<long>& rs) {
  if (rs.size() < 5)
    throw config_error("crossover_diagnostics: need at least 5 separations");
  std::vector<std::pair<double, double>> pts;
  CrossoverReport rep;
  for (long r : rs) {
    CrossoverRow row;
    row.r = r;
    row.geodesic_len = geodesic(g, {0, 0}, {static_cast<int>(r), 0});
    rep.rows.push_back(row);
    pts.push_back({static_cast<double>(r), static_cast<double>(row.geodesic_len)});
  }
  const GeodesicCrossoverFit fit = fit_geodesic_crossover(pts);
  rep.linear_regime_detected = fit.linear_regime;
  rep.kink = fit.kink;
  rep.log_slope = fit.log_part.slope;
  rep.linear_slope = fit.lin_part.slope;
  rep.r2_joint = fit.r2_joint;
  for (CrossoverRow& row : rep.rows)
    row.in_log_regime = !fit.linear_regime || row.r < fit.kink;
  return rep;
}

std::vector<SaturationRow> entropy_saturation(const FiniteRangeMERA& m,
                                              const std::vector<long>& block_lens) {
  const TNGraph g = to_graph(m);
  const bool state_reachable = pow_within(m.d(), m.n_sites, kStateCap);
  Tensor psi;
  if (state_reachable) psi = state_vector(m);
  std::vector<SaturationRow> rows;
  for (long len : block_lens) {
    SaturationRow row;
    row.block_len = len;
    const long start = (m.n_sites - len) / 2;
    const MinCutResult cut =
        min_cut(g, Region::interval(static_cast<int>(start),
                                    static_cast<int>(start + len - 1)));
    row.mincut_count = cut.bond_count;
    row.mincut_weight = cut.weight_bits;
    if (state_reachable && len < m.n_sites)
      row.entropy_bits =
          block_entropy_bits(psi.data(), m.d(), m.n_sites, start, len);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace tngeo
