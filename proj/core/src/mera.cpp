#include "tngeo/mera.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tngeo/entropy.hpp"
#include "tngeo/rng.hpp"

namespace tngeo {

namespace {

constexpr std::size_t kStateCap = std::size_t(1) << 20;
constexpr std::size_t kWindowBudget = std::size_t(4) << 20;  // tensor entries

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

}  // namespace

std::size_t BinaryMERA::dim_at(long z) const {
  if (z < 0 || z > depth()) throw config_error("mera: scale out of range");
  if (z == 0) return layers.empty() ? 0 : layers.front().dim_in;
  return layers[z - 1].dim_out;
}

std::size_t BinaryMERA::top_site_dim() const { return dim_at(depth()); }

void BinaryMERA::check_constraints(double tol) const {
  for (const MeraLayer& l : layers) {
    const Matrix uu = l.u.dagger() * l.u;
    const Matrix ww = l.w.dagger() * l.w;
    const Matrix iu = Matrix::identity(l.dim_in * l.dim_in);
    const Matrix iw = Matrix::identity(l.dim_out);
    if ((uu - iu).max_abs() > tol)
      throw numeric_error("mera: disentangler is not unitary");
    if ((ww - iw).max_abs() > tol)
      throw numeric_error("mera: isometry violates w†w = 1");
  }
  double nrm = 0.0;
  for (const cplx& v : top) nrm += std::norm(v);
  if (std::abs(std::sqrt(nrm) - 1.0) > tol)
    throw numeric_error("mera: top tensor is not normalised");
}

namespace detail {

std::vector<cplx> random_unit_vector(std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<cplx> v(dim);
  for (cplx& x : v) x = rng.gaussian_complex();
  const double n = vec_norm(v);
  if (n <= 1e-300) throw numeric_error("random_unit_vector: zero draw");
  vec_scale(v, 1.0 / n);
  return v;
}

}  // namespace detail

BinaryMERA random_mera(long n_sites, long layers, std::size_t chi, std::size_t d,
                       std::uint64_t seed, bool scale_invariant) {
  if (layers < 1) throw config_error("mera: need at least one layer");
  if (d < 2) throw config_error("mera: need d >= 2");
  if (chi < d || chi > d * d)
    throw config_error("mera: need d <= chi <= d^2");
  if (scale_invariant && chi != d)
    throw config_error("mera: scale-invariant layers need chi == d");
  if (n_sites % (1L << layers) != 0)
    throw config_error("mera: N not compatible with layer count");
  const long n_top = n_sites >> layers;
  if (n_top < 1) throw config_error("mera: N too small for depth");

  BinaryMERA m;
  m.n_sites = n_sites;
  m.n_top = n_top;
  m.scale_invariant = scale_invariant;
  for (long z = 0; z < layers; ++z) {
    MeraLayer layer;
    layer.dim_in = (z == 0) ? d : chi;
    layer.dim_out = chi;
    if (scale_invariant && z > 0) {
      layer.u = m.layers.front().u;
      layer.w = m.layers.front().w;
    } else {
      const std::size_t din2 = layer.dim_in * layer.dim_in;
      layer.u = random_isometry(din2, din2, Rng::derive(seed, 2 * z));
      layer.w = random_isometry(din2, layer.dim_out, Rng::derive(seed, 2 * z + 1));
    }
    m.layers.push_back(std::move(layer));
  }
  m.top = detail::random_unit_vector(ipow(m.top_site_dim(), n_top),
                                     Rng::derive(seed, 0x707));
  return m;
}

BinaryMERA product_mera(long n_sites, long layers, std::size_t d) {
  if (layers < 1 || d < 2) throw config_error("mera: bad product construction");
  if (n_sites % (1L << layers) != 0)
    throw config_error("mera: N not compatible with layer count");
  BinaryMERA m;
  m.n_sites = n_sites;
  m.n_top = n_sites >> layers;
  m.scale_invariant = true;
  MeraLayer layer;
  layer.dim_in = d;
  layer.dim_out = d;
  layer.u = Matrix::identity(d * d);
  layer.w = Matrix(d * d, d);  // |c> -> |c> (x) |0>
  for (std::size_t c = 0; c < d; ++c) layer.w(c * d + 0, c) = 1.0;
  for (long z = 0; z < layers; ++z) m.layers.push_back(layer);
  m.top.assign(ipow(d, m.n_top), cplx(0, 0));
  m.top[0] = 1.0;
  return m;
}

namespace detail {

std::vector<cplx> descend_one_layer(const std::vector<cplx>& state, long coarse_width,
                                    const MeraLayer& layer) {
  const std::size_t dc = layer.dim_out, df = layer.dim_in;
  const std::size_t df2 = df * df;
  if (state.size() != ipow(dc, coarse_width))
    throw config_error("descend: state size mismatch");

  // isometries: coarse site j -> fine pair (2j, 2j+1), processed right-to-left
  std::vector<cplx> cur = state;
  for (long j = coarse_width - 1; j >= 0; --j) {
    const std::size_t pre = ipow(dc, j);
    const std::size_t post = cur.size() / (pre * dc);
    std::vector<cplx> next(pre * df2 * post, cplx(0, 0));
    for (std::size_t p = 0; p < pre; ++p)
      for (std::size_t c = 0; c < dc; ++c) {
        const cplx* src = cur.data() + (p * dc + c) * post;
        for (std::size_t f = 0; f < df2; ++f) {
          const cplx wfc = layer.w(f, c);
          if (wfc == cplx(0, 0)) continue;
          cplx* dst = next.data() + (p * df2 + f) * post;
          for (std::size_t q = 0; q < post; ++q) dst[q] += wfc * src[q];
        }
      }
    cur = std::move(next);
  }

  // disentanglers act on pairs (2i+1, 2i+2) mod width: rotate one site left,
  // apply on contiguous pairs, rotate back
  const long fine_width = 2 * coarse_width;
  const std::size_t total = cur.size();
  const std::size_t high = total / df;
  std::vector<cplx> shifted(total);
  for (std::size_t t = 0; t < total; ++t)
    shifted[t] = cur[(t % df) * high + t / df];

  for (long k = 0; k < coarse_width; ++k) {
    const std::size_t pre = ipow(df2, k);
    const std::size_t post = total / (pre * df2);
    std::vector<cplx> next(total, cplx(0, 0));
    for (std::size_t p = 0; p < pre; ++p)
      for (std::size_t x = 0; x < df2; ++x) {
        const cplx* src = shifted.data() + (p * df2 + x) * post;
        for (std::size_t y = 0; y < df2; ++y) {
          const cplx uyx = layer.u(y, x);
          if (uyx == cplx(0, 0)) continue;
          cplx* dst = next.data() + (p * df2 + y) * post;
          for (std::size_t q = 0; q < post; ++q) dst[q] += uyx * src[q];
        }
      }
    shifted = std::move(next);
  }

  std::vector<cplx> out(total);
  for (std::size_t t = 0; t < total; ++t)
    out[(t % df) * high + t / df] = shifted[t];
  (void)fine_width;
  return out;
}

}  // namespace detail

Tensor state_vector(const BinaryMERA& m) {
  if (m.layers.empty()) throw config_error("state_vector: empty mera");
  if (!pow_within(m.d(), m.n_sites, kStateCap))
    throw config_error("state_vector: d^N exceeds the 2^20 cap");
  std::vector<cplx> state = m.top;
  long width = m.n_top;
  for (long z = m.depth() - 1; z >= 0; --z) {
    state = detail::descend_one_layer(state, width, m.layers[z]);
    width *= 2;
  }
  std::vector<std::size_t> dims(m.n_sites, m.d());
  std::vector<std::string> labels;
  for (long i = 0; i < m.n_sites; ++i) labels.push_back("s" + std::to_string(i));
  Tensor t(dims, labels, std::move(state));
  t.check_finite("mera state_vector");
  return t;
}

// ---- causal-cone machinery ---------------------------------------------------

namespace detail {

namespace {

std::string oleg(long j) { return "o" + std::to_string(j); }
std::string ileg(long j) { return "i" + std::to_string(j); }

Tensor identity_tensor(std::size_t dim, const std::string& lo, const std::string& li) {
  Tensor t({dim, dim}, {lo, li});
  for (std::size_t i = 0; i < dim; ++i) t.mutable_data()[i * dim + i] = 1.0;
  return t;
}

Tensor u_tensor(const Matrix& u, std::size_t dim) {
  return Tensor({dim, dim, dim, dim}, {"uo1", "uo2", "ui1", "ui2"}, u.a);
}

Tensor w_tensor(const Matrix& w, std::size_t df, std::size_t dc) {
  return Tensor({df, df, dc}, {"f1", "f2", "c"}, w.a);
}

// canonical label order o0..o_{w-1}, i0..i_{w-1}
Tensor canonicalize(Tensor t, long width) {
  std::vector<std::string> order;
  for (long j = 0; j < width; ++j) order.push_back(oleg(j));
  for (long j = 0; j < width; ++j) order.push_back(ileg(j));
  return t.permuted(order);
}

long floor_mod(long a, long m) { return ((a % m) + m) % m; }

}  // namespace

OpWindow make_window(const LocalOperator& op, long site) {
  OpWindow w;
  w.start = site;
  w.width = 1;
  w.op = Tensor({op.dim, op.dim}, {"o0", "i0"}, op.mat.a);
  return w;
}

namespace {

// pad with identity legs on both sides, renumbering positions
Tensor pad_window(const Tensor& op, long width, long left, long right, std::size_t dim) {
  Tensor t = op;
  if (left > 0) {
    std::vector<std::string> labels = t.labels();
    for (std::string& l : labels) {
      const long j = std::stol(l.substr(1));
      l = l[0] + std::to_string(j + left);
    }
    t = t.relabeled(labels);
  }
  for (long p = 0; p < left; ++p)
    t = contract(t, identity_tensor(dim, oleg(p), ileg(p)), {});
  for (long p = 0; p < right; ++p)
    t = contract(t, identity_tensor(dim, oleg(width + left + p), ileg(width + left + p)), {});
  return t;
}

}  // namespace

OpWindow ascend_window(const OpWindow& win, const MeraLayer& layer, long lattice_width) {
  const std::size_t df = layer.dim_in, dc = layer.dim_out;
  const long a = win.start, e = win.start + win.width - 1;
  // align to disentangler pairs (odd, even)
  const long a1 = (floor_mod(a, 2) == 1) ? a : a - 1;
  const long e1 = (floor_mod(e, 2) == 0) ? e : e + 1;
  const long uw = e1 - a1 + 1;
  if (uw + 2 > lattice_width)
    throw numeric_error("ascend_window: window no longer fits the lattice");

  Tensor op = pad_window(win.op, win.width, a - a1, e1 - e, df);
  const Tensor ut = u_tensor(layer.u, df);
  const Tensor ut_conj = ut.conjugated();
  for (long k = 0; k < uw / 2; ++k) {
    const long p = 2 * k;
    op = contract(op, ut, {{ileg(p), "uo1"}, {ileg(p + 1), "uo2"}});
    op = op.renamed("ui1", ileg(p)).renamed("ui2", ileg(p + 1));
    op = contract(ut_conj, op, {{"uo1", oleg(p)}, {"uo2", oleg(p + 1)}});
    op = op.renamed("ui1", oleg(p)).renamed("ui2", oleg(p + 1));
  }

  // align to isometry pairs (even, odd): exactly one pad site each side
  op = pad_window(op, uw, 1, 1, df);
  const long a2 = a1 - 1, e2 = e1 + 1;
  const long ww = e2 - a2 + 1;
  const Tensor wt = w_tensor(layer.w, df, dc);
  const Tensor wt_conj = wt.conjugated();
  for (long k = 0; k < ww / 2; ++k) {
    const long p = 2 * k;
    op = contract(op, wt, {{ileg(p), "f1"}, {ileg(p + 1), "f2"}});
    op = op.renamed("c", "tmp_i" + std::to_string(k));
    op = contract(wt_conj, op, {{"f1", oleg(p)}, {"f2", oleg(p + 1)}});
    op = op.renamed("c", "tmp_o" + std::to_string(k));
  }
  std::vector<std::string> labels = op.labels();
  for (std::string& l : labels) {
    if (l.rfind("tmp_o", 0) == 0) l = "o" + l.substr(5);
    else if (l.rfind("tmp_i", 0) == 0) l = "i" + l.substr(5);
  }
  op = op.relabeled(labels);

  OpWindow out;
  out.width = ww / 2;
  out.start = a2 / 2;
  out.op = canonicalize(std::move(op), out.width);
  return out;
}

bool windows_separable(const OpWindow& a, const OpWindow& b, long lattice_width) {
  // worst-case claimed spans: two extra sites each side
  std::vector<char> used(lattice_width, 0);
  for (long s = a.start - 2; s <= a.start + a.width + 1; ++s)
    used[floor_mod(s, lattice_width)] = 1;
  for (long s = b.start - 2; s <= b.start + b.width + 1; ++s)
    if (used[floor_mod(s, lattice_width)]) return false;
  return true;
}

OpWindow merge_windows(const OpWindow& a, const OpWindow& b, long lattice_width,
                       std::size_t dim) {
  const OpWindow* first = &a;
  const OpWindow* second = &b;
  long s1 = floor_mod(a.start, lattice_width);
  long s2 = floor_mod(b.start, lattice_width);
  if (s2 < s1) {
    std::swap(first, second);
    std::swap(s1, s2);
  }
  // two ways around the ring; take the smaller non-negative gap
  const long gap_right = s2 - (s1 + first->width);
  const long gap_left = s1 + lattice_width - (s2 + second->width);
  long gap;
  if (gap_right >= 0 && (gap_left < 0 || gap_right <= gap_left)) {
    gap = gap_right;
  } else if (gap_left >= 0) {
    std::swap(first, second);
    s1 = s2;
    gap = gap_left;
  } else {
    throw numeric_error("merge_windows: overlapping windows");
  }
  // relabel second window's legs after the gap
  Tensor right = second->op;
  {
    std::vector<std::string> labels = right.labels();
    for (std::string& l : labels) {
      const long j = std::stol(l.substr(1));
      l = l[0] + std::to_string(j + first->width + gap);
    }
    right = right.relabeled(labels);
  }
  Tensor op = contract(first->op, right, {});
  for (long p = 0; p < gap; ++p)
    op = contract(op, identity_tensor(dim, oleg(first->width + p), ileg(first->width + p)), {});

  OpWindow out;
  out.start = s1;
  out.width = first->width + gap + second->width;
  out.op = canonicalize(std::move(op), out.width);
  return out;
}

namespace {

Matrix window_to_matrix(const OpWindow& win, std::size_t dim) {
  const std::size_t n = ipow(dim, win.width);
  Matrix m(n, n);
  m.a = win.op.data();  // canonical order (o0..o_{w-1}, i0..i_{w-1}) is row-major
  return m;
}

}  // namespace

// embed a window into the full ring, handling wrap-around
Matrix window_to_full_matrix(const OpWindow& win, long lattice_width, std::size_t dim) {
  const long s0 = floor_mod(win.start, lattice_width);
  const std::size_t full = ipow(dim, lattice_width);
  const Matrix wm = window_to_matrix(win, dim);
  const std::size_t wn = wm.rows;
  Matrix out(full, full);
  // indices: site j has stride dim^(lattice_width-1-j)
  std::vector<std::size_t> stride(lattice_width);
  for (long j = 0; j < lattice_width; ++j) stride[j] = ipow(dim, lattice_width - 1 - j);
  // enumerate window configs and environment configs
  const long env_sites = lattice_width - win.width;
  const std::size_t env_count = ipow(dim, env_sites);
  std::vector<long> win_pos(win.width), env_pos(env_sites);
  for (long k = 0; k < win.width; ++k) win_pos[k] = floor_mod(s0 + k, lattice_width);
  {
    std::vector<char> in_win(lattice_width, 0);
    for (long p : win_pos) in_win[p] = 1;
    long idx = 0;
    for (long j = 0; j < lattice_width; ++j)
      if (!in_win[j]) env_pos[idx++] = j;
  }
  for (std::size_t envc = 0; envc < env_count; ++envc) {
    std::size_t base = 0;
    std::size_t tmp = envc;
    for (long k = env_sites - 1; k >= 0; --k) {
      base += (tmp % dim) * stride[env_pos[k]];
      tmp /= dim;
    }
    for (std::size_t r = 0; r < wn; ++r) {
      std::size_t row = base;
      std::size_t tr = r;
      for (long k = win.width - 1; k >= 0; --k) {
        row += (tr % dim) * stride[win_pos[k]];
        tr /= dim;
      }
      for (std::size_t c = 0; c < wn; ++c) {
        const cplx v = wm(r, c);
        if (v == cplx(0, 0)) continue;
        std::size_t col = base;
        std::size_t tc = c;
        for (long k = win.width - 1; k >= 0; --k) {
          col += (tc % dim) * stride[win_pos[k]];
          tc /= dim;
        }
        out(row, col) += v;
      }
    }
  }
  return out;
}

// full layer descent as an explicit (dim_f^(2w) x dim_c^w) matrix
Matrix layer_descent_matrix(const MeraLayer& layer, long coarse_width) {
  const std::size_t cols = ipow(layer.dim_out, coarse_width);
  const std::size_t rows = ipow(layer.dim_in, 2 * coarse_width);
  Matrix m(rows, cols);
  std::vector<cplx> basis(cols, cplx(0, 0));
  for (std::size_t c = 0; c < cols; ++c) {
    basis[c] = 1.0;
    const std::vector<cplx> col = descend_one_layer(basis, coarse_width, layer);
    basis[c] = 0.0;
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = col[r];
  }
  return m;
}

cplx cone_value(const std::vector<MeraLayer>& layers, const std::vector<cplx>& top,
                long n_top, std::vector<OpWindow> windows, long lattice_width) {
  bool full_mode = false;
  Matrix full_op;
  long width = lattice_width;

  for (std::size_t z = 0; z <= layers.size(); ++z) {
    const std::size_t dim = (z < layers.size()) ? layers[z].dim_in
                                                : (layers.empty() ? 0 : layers.back().dim_out);
    if (!full_mode) {
      long max_w = 0;
      for (const OpWindow& w : windows) max_w = std::max(max_w, w.width);
      const bool must_go_full = (z == layers.size()) || (width <= max_w + 4);
      const bool can_go_full = pow_within(dim, 2 * width, kWindowBudget);
      if (must_go_full || can_go_full) {
        if (!can_go_full)
          throw numeric_error("cone: window exceeds lattice before dense regime");
        full_op = Matrix::identity(ipow(dim, width));
        for (const OpWindow& w : windows)
          full_op = full_op * window_to_full_matrix(w, width, dim);
        full_mode = true;
      }
    }
    if (z == layers.size()) break;

    if (full_mode) {
      const Matrix m = layer_descent_matrix(layers[z], width / 2);
      full_op = m.dagger() * (full_op * m);
      width /= 2;
      continue;
    }

    // resolve collisions by merging within budget
    for (bool again = true; again;) {
      again = false;
      for (std::size_t i = 0; i < windows.size() && !again; ++i)
        for (std::size_t j = i + 1; j < windows.size() && !again; ++j) {
          if (windows_separable(windows[i], windows[j], width)) continue;
          long s1 = floor_mod(windows[i].start, width);
          long s2 = floor_mod(windows[j].start, width);
          long gap = (s2 >= s1) ? s2 - (s1 + windows[i].width)
                                : s1 - (s2 + windows[j].width);
          const long combined =
              windows[i].width + windows[j].width + std::max<long>(gap, 0);
          if (gap < 0 || !pow_within(dim, 2 * (combined + 4), kWindowBudget))
            throw numeric_error("cone: windows collide beyond the merge budget");
          OpWindow merged = merge_windows(windows[i], windows[j], width, dim);
          windows.erase(windows.begin() + j);
          windows[i] = std::move(merged);
          again = true;
        }
    }
    for (OpWindow& w : windows) w = ascend_window(w, layers[z], width);
    width /= 2;
  }

  if (width != n_top) throw numeric_error("cone: top width mismatch");
  const std::vector<cplx> applied = full_op.apply(top);
  return vec_dot(top, applied);
}

}  // namespace detail

cplx expectation_causal_cone(const BinaryMERA& m, const LocalOperator& p, long x) {
  if (x < 0 || x >= m.n_sites) throw config_error("cone: site out of range");
  if (p.dim != m.d()) throw config_error("cone: operator dim mismatch");
  return detail::cone_value(m.layers, m.top, m.n_top, {detail::make_window(p, x)},
                            m.n_sites);
}

cplx correlator_dense(const BinaryMERA& m, const LocalOperator& p,
                      const LocalOperator& q, long x1, long x2) {
  const Tensor psi = state_vector(m);
  const std::vector<cplx>& amps = psi.data();
  const std::size_t d = m.d();
  const long n = m.n_sites;
  auto apply_site = [&](const std::vector<cplx>& v, const Matrix& op, long x) {
    const std::size_t post = ipow(d, n - 1 - x);
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
  const std::vector<cplx> qpsi = apply_site(amps, q.mat, x2);
  const std::vector<cplx> pqpsi = apply_site(qpsi, p.mat, x1);
  const cplx joint = vec_dot(amps, pqpsi);
  const cplx mp = vec_dot(amps, apply_site(amps, p.mat, x1));
  const cplx mq = vec_dot(amps, apply_site(amps, q.mat, x2));
  return joint - mp * mq;
}

cplx correlator_causal_cone(const BinaryMERA& m, const LocalOperator& p,
                            const LocalOperator& q, long x1, long x2) {
  if (x1 == x2) throw config_error("correlator: x1 == x2");
  if (x1 < 0 || x2 < 0 || x1 >= m.n_sites || x2 >= m.n_sites)
    throw config_error("correlator: site out of range");
  if (p.dim != m.d() || q.dim != m.d())
    throw config_error("correlator: operator dim mismatch");
  try {
    const cplx joint = detail::cone_value(
        m.layers, m.top, m.n_top,
        {detail::make_window(p, x1), detail::make_window(q, x2)}, m.n_sites);
    const cplx mp = expectation_causal_cone(m, p, x1);
    const cplx mq = expectation_causal_cone(m, q, x2);
    return joint - mp * mq;
  } catch (const numeric_error&) {
    // awkward geometry: fall back to the dense route when it is in reach
    if (!pow_within(m.d(), m.n_sites, kStateCap)) throw;
    return correlator_dense(m, p, q, x1, x2);
  }
}

// ---- scaling superoperator ----------------------------------------------------

ScalingSpectrum scaling_spectrum(const BinaryMERA& m) {
  if (!m.scale_invariant)
    throw config_error("scaling_spectrum: state is not scale-invariant");
  const MeraLayer& l = m.layers.front();
  const std::size_t d = l.dim_in;
  if (l.dim_out != d)
    throw config_error("scaling_spectrum: need equal dims across scales");

  const Matrix ww = kron(l.w, l.w);  // (d^4) x (d^2)
  const Matrix id = Matrix::identity(d);

  auto channel = [&](const Matrix& o, bool odd_parity) {
    const Matrix slot = odd_parity ? kron(o, id) : kron(id, o);
    const Matrix interm = l.u.dagger() * (slot * l.u);
    const Matrix mid = kron(kron(id, interm), id);  // four-site sandwich
    const Matrix coarse2 = ww.dagger() * (mid * ww);
    // reduce to the target coarse site, trace weight 1/d keeps 1 fixed
    Matrix out(d, d);
    for (std::size_t s = 0; s < d; ++s)
      for (std::size_t sp = 0; sp < d; ++sp) {
        cplx acc(0, 0);
        for (std::size_t t = 0; t < d; ++t)
          acc += odd_parity ? coarse2(s * d + t, sp * d + t)   // trace second
                            : coarse2(t * d + s, t * d + sp);  // trace first
        out(s, sp) = acc / static_cast<double>(d);
      }
    return out;
  };

  ScalingSpectrum spec;
  spec.superoperator = Matrix(d * d, d * d);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t lcol = 0; lcol < d; ++lcol) {
      Matrix basis(d, d);
      basis(k, lcol) = 1.0;
      const Matrix even = channel(basis, false);
      const Matrix odd = channel(basis, true);
      for (std::size_t s = 0; s < d; ++s)
        for (std::size_t sp = 0; sp < d; ++sp)
          spec.superoperator(s * d + sp, k * d + lcol) =
              0.5 * (even(s, sp) + odd(s, sp));
    }

  spec.eigenvalues = dense_eigenvalues(spec.superoperator);
  std::sort(spec.eigenvalues.begin(), spec.eigenvalues.end(),
            [](cplx a, cplx b) { return std::abs(a) > std::abs(b); });
  for (const cplx& ev : spec.eigenvalues) {
    const double mod = std::abs(ev);
    spec.exponents.push_back(mod > 1e-300 ? -2.0 * std::log2(mod)
                                          : std::numeric_limits<double>::infinity());
  }
  return spec;
}

double block_entropy(const BinaryMERA& m, long block_len) {
  if (block_len < 1 || block_len >= m.n_sites)
    throw config_error("block_entropy: need 1 <= L < N");
  const Tensor psi = state_vector(m);
  const long start = (m.n_sites - block_len) / 2;
  return block_entropy_bits(psi.data(), m.d(), m.n_sites, start, block_len);
}

TNGraph to_graph(const BinaryMERA& m) {
  std::vector<std::size_t> dims;
  for (long z = 0; z <= m.depth(); ++z) dims.push_back(m.dim_at(z));
  return build_mera_graph_dims(m.n_sites, m.depth(), dims);
}

}  // namespace tngeo
