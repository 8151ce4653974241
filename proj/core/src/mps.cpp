#include "tngeo/mps.hpp"

#include <cmath>

#include "tngeo/entropy.hpp"
#include "tngeo/rng.hpp"

namespace tngeo {

namespace {

constexpr std::size_t kStateVectorCap = std::size_t(1) << 20;

// row-vector times matrix: out[(b)] = sum_a v[a] M[a, b]
std::vector<cplx> row_apply(const std::vector<cplx>& v, const Matrix& m) {
  if (v.size() != m.rows) throw config_error("row_apply: size mismatch");
  std::vector<cplx> out(m.cols, cplx(0, 0));
  for (std::size_t a = 0; a < m.rows; ++a) {
    const cplx va = v[a];
    if (va == cplx(0, 0)) continue;
    const cplx* row = m.a.data() + a * m.cols;
    for (std::size_t b = 0; b < m.cols; ++b) out[b] += va * row[b];
  }
  return out;
}

Matrix hermitized_from_vec(const std::vector<cplx>& v, std::size_t chi) {
  Matrix x(chi, chi);
  x.a = v;
  Matrix h = x + x.dagger();
  for (cplx& e : h.a) e *= 0.5;
  if (h.trace().real() < 0.0) h = h.scaled(-1.0);
  return h;
}

std::vector<cplx> leading_schmidt_vector(const Matrix& hermitian_psd) {
  HermitianEig eig = hermitian_eig(hermitian_psd);
  std::vector<cplx> v(hermitian_psd.rows);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = eig.vectors(i, 0);
  return v;
}

void require_normalized(const HomogeneousMPS& m, const char* who) {
  if (!m.normalized)
    throw config_error(std::string(who) + ": call normalize() first");
}

}  // namespace

HomogeneousMPS mps_from_site_tensor(Tensor site) {
  if (site.rank() != 3) throw config_error("mps: site tensor must have rank 3");
  if (site.dims()[0] != site.dims()[2])
    throw config_error("mps: left/right bond dims differ");
  HomogeneousMPS m;
  m.site = site.relabeled({"l", "p", "r"});
  m.left_boundary.assign(m.chi(), cplx(0, 0));
  m.right_boundary.assign(m.chi(), cplx(0, 0));
  m.left_boundary[0] = 1.0;
  m.right_boundary[0] = 1.0;
  return m;
}

HomogeneousMPS random_homogeneous_mps(std::size_t chi, std::size_t d,
                                      std::uint64_t seed) {
  if (chi < 1 || d < 2) throw config_error("mps: need chi >= 1, d >= 2");
  Rng rng(seed);
  Tensor site({chi, d, chi}, {"l", "p", "r"});
  for (cplx& v : site.mutable_data()) v = rng.gaussian_complex();
  return normalize(mps_from_site_tensor(std::move(site)));
}

HomogeneousMPS product_state_mps(const std::vector<cplx>& site_amplitudes) {
  if (site_amplitudes.size() < 2) throw config_error("mps: product state needs d >= 2");
  Tensor site({1, site_amplitudes.size(), 1}, {"l", "p", "r"});
  for (std::size_t s = 0; s < site_amplitudes.size(); ++s)
    site.mutable_data()[s] = site_amplitudes[s];
  return normalize(mps_from_site_tensor(std::move(site)));
}

Matrix transfer_matrix(const HomogeneousMPS& m) {
  return dressed_transfer(m, LocalOperator::identity(m.d()));
}

Matrix dressed_transfer(const HomogeneousMPS& m, const LocalOperator& op) {
  const std::size_t chi = m.chi(), d = m.d();
  if (op.dim != d) throw config_error("dressed_transfer: operator dim mismatch");
  Matrix e(chi * chi, chi * chi);
  const auto& a = m.site.data();  // layout (l, p, r) row-major
  for (std::size_t s = 0; s < d; ++s)
    for (std::size_t sp = 0; sp < d; ++sp) {
      const cplx w = op.mat(sp, s);  // <s'|P|s>
      if (w == cplx(0, 0)) continue;
      for (std::size_t al = 0; al < chi; ++al)
        for (std::size_t ar = 0; ar < chi; ++ar) {
          const cplx x = w * a[(al * d + s) * chi + ar];
          if (x == cplx(0, 0)) continue;
          for (std::size_t bl = 0; bl < chi; ++bl)
            for (std::size_t br = 0; br < chi; ++br)
              e(al * chi + bl, ar * chi + br) +=
                  x * std::conj(a[(bl * d + sp) * chi + br]);
        }
    }
  return e;
}

HomogeneousMPS normalize(const HomogeneousMPS& m) {
  if (m.site.norm() <= 1e-300) throw numeric_error("normalize: zero site tensor");
  HomogeneousMPS out = m;
  const Matrix e = transfer_matrix(m);
  const auto dom = dominant_eigs(e, 1);
  const double lambda1 = std::abs(dom[0].value);
  if (lambda1 <= 1e-300) throw numeric_error("normalize: zero transfer spectrum");
  out.site = m.site.scaled(1.0 / std::sqrt(lambda1));
  out.normalization = m.normalization * std::sqrt(lambda1);

  const std::size_t chi = m.chi();
  if (chi == 1) {
    out.left_boundary = {cplx(1, 0)};
    out.right_boundary = {cplx(1, 0)};
  } else {
    const Matrix r_fix = hermitized_from_vec(dom[0].vector, chi);
    out.right_boundary = leading_schmidt_vector(r_fix);
    const auto dom_left = dominant_eigs(e.transpose(), 1);
    const Matrix l_fix = hermitized_from_vec(dom_left[0].vector, chi);
    out.left_boundary = leading_schmidt_vector(l_fix);
  }
  out.normalized = true;
  return out;
}

CorrelationLength correlation_length(const HomogeneousMPS& m) {
  require_normalized(m, "correlation_length");
  CorrelationLength out;
  const std::size_t chi = m.chi();
  if (chi == 1) {
    out.status = CorrelationLength::Status::uncorrelated;
    out.xi = 0.0;  // no subleading transfer mode by convention
    return out;
  }
  const Matrix e = transfer_matrix(m);
  const std::size_t k = std::min<std::size_t>(3, chi * chi);
  const auto eigs = dominant_eigs(e, k);
  const double l1 = std::abs(eigs[0].value);
  const double l2 = std::abs(eigs[1].value);
  if (std::abs(l2 - l1) < 1e-10)
    throw numeric_error("correlation_length: degenerate dominant eigenvalue");
  out.lambda2_mod = l2;
  if (l2 >= 1.0 - 1e-10) {
    out.status = CorrelationLength::Status::infinite_or_degenerate;
    return out;
  }
  if (l2 <= 1e-14) {
    out.status = CorrelationLength::Status::uncorrelated;
    out.xi = 0.0;
    return out;
  }
  if (k >= 3) {
    const double l3 = std::abs(eigs[2].value);
    if (std::abs(l3 - l2) < 1e-10) {
      // conjugate pairs share a modulus and define the same xi; anything else
      // is silently ambiguous and gets refused
      const bool conj_pair =
          std::abs(eigs[2].value - std::conj(eigs[1].value)) < 1e-8 * std::max(l2, 1e-30);
      out.modulus_tie = true;
      if (!conj_pair)
        throw numeric_error(
            "correlation_length: modulus tie between distinct transfer modes");
    }
  }
  out.xi = -1.0 / std::log(l2);
  return out;
}

namespace {

struct CorrelatorEnv {
  std::vector<cplx> left;   // row vector in the doubled space
  std::vector<cplx> right;  // column vector
  Matrix e;
};

CorrelatorEnv finite_env(const HomogeneousMPS& m) {
  const std::size_t chi = m.chi();
  CorrelatorEnv env;
  env.e = transfer_matrix(m);
  env.left.assign(chi * chi, cplx(0, 0));
  env.right.assign(chi * chi, cplx(0, 0));
  for (std::size_t a = 0; a < chi; ++a)
    for (std::size_t ap = 0; ap < chi; ++ap) {
      env.left[a * chi + ap] = m.left_boundary[a] * std::conj(m.left_boundary[ap]);
      env.right[a * chi + ap] = m.right_boundary[a] * std::conj(m.right_boundary[ap]);
    }
  return env;
}

cplx sandwich(const CorrelatorEnv& env, const std::vector<const Matrix*>& ops,
              const std::vector<long>& gaps) {
  // <left| E^gap0 ops0 E^gap1 ops1 ... |right>
  std::vector<cplx> v = env.left;
  for (std::size_t k = 0; k < ops.size(); ++k) {
    for (long i = 0; i < gaps[k]; ++i) v = row_apply(v, env.e);
    v = row_apply(v, *ops[k]);
  }
  for (long i = 0; i < gaps.back(); ++i) v = row_apply(v, env.e);
  cplx acc(0, 0);
  for (std::size_t i = 0; i < v.size(); ++i) acc += v[i] * env.right[i];
  return acc;
}

}  // namespace

cplx two_point_correlator(const HomogeneousMPS& m, const LocalOperator& p,
                          const LocalOperator& q, long x1, long x2, long n_sites) {
  require_normalized(m, "two_point_correlator");
  if (p.dim != m.d() || q.dim != m.d())
    throw config_error("two_point_correlator: operator dim mismatch");
  if (x1 == x2) throw config_error("two_point_correlator: x1 == x2");
  if (x1 < 1 || x2 < 1 || x1 > n_sites || x2 > n_sites)
    throw config_error("two_point_correlator: site out of range");
  const LocalOperator& first = (x1 < x2) ? p : q;
  const LocalOperator& second = (x1 < x2) ? q : p;
  const long a = std::min(x1, x2), b = std::max(x1, x2);

  const CorrelatorEnv env = finite_env(m);
  const Matrix ep = dressed_transfer(m, first);
  const Matrix eq = dressed_transfer(m, second);

  const cplx den = sandwich(env, {}, {n_sites});
  if (std::abs(den) <= 1e-300)
    throw numeric_error("two_point_correlator: vanishing norm");
  const cplx joint = sandwich(env, {&ep, &eq}, {a - 1, b - a - 1, n_sites - b});
  const cplx mean1 = sandwich(env, {&ep}, {a - 1, n_sites - a});
  const cplx mean2 = sandwich(env, {&eq}, {b - 1, n_sites - b});
  return joint / den - (mean1 / den) * (mean2 / den);
}

cplx bulk_correlator(const HomogeneousMPS& m, const LocalOperator& p,
                     const LocalOperator& q, long r) {
  require_normalized(m, "bulk_correlator");
  if (r < 1) throw config_error("bulk_correlator: separation must be >= 1");
  const std::size_t chi = m.chi();
  const Matrix e = transfer_matrix(m);

  CorrelatorEnv env;
  env.e = e;
  if (chi == 1) {
    env.left = {cplx(1, 0)};
    env.right = {cplx(1, 0)};
  } else {
    env.right = dominant_eigs(e, 1)[0].vector;
    env.left = dominant_eigs(e.transpose(), 1)[0].vector;
    // hermitise the fixed points; phases cancel in the normalised ratios
    const Matrix rm = hermitized_from_vec(env.right, chi);
    const Matrix lm = hermitized_from_vec(env.left, chi);
    env.right = rm.a;
    env.left = lm.a;
  }

  const cplx den = sandwich(env, {}, {1});
  if (std::abs(den) <= 1e-300) throw numeric_error("bulk_correlator: vanishing norm");
  const Matrix ep = dressed_transfer(m, p);
  const Matrix eq = dressed_transfer(m, q);
  const cplx joint = sandwich(env, {&ep, &eq}, {0, r - 1, 0});
  const cplx mean_p = sandwich(env, {&ep}, {0, 0});
  const cplx mean_q = sandwich(env, {&eq}, {0, 0});
  // joint spans r+1 sites; normalise per site
  const cplx den_joint = [&] {
    std::vector<cplx> v = env.left;
    for (long i = 0; i < r + 1; ++i) v = row_apply(v, env.e);
    cplx acc(0, 0);
    for (std::size_t i = 0; i < v.size(); ++i) acc += v[i] * env.right[i];
    return acc;
  }();
  return joint / den_joint - (mean_p / den) * (mean_q / den);
}

double block_entropy(const HomogeneousMPS& m, long block_len, long n_sites) {
  require_normalized(m, "block_entropy");
  if (block_len < 1 || block_len >= n_sites)
    throw config_error("block_entropy: need 1 <= L < N");
  const std::size_t chi = m.chi();
  const long left_sites = (n_sites - block_len) / 2;
  const long right_sites = n_sites - block_len - left_sites;

  const Matrix e = transfer_matrix(m);
  CorrelatorEnv env = finite_env(m);
  std::vector<cplx> lvec = env.left;
  for (long i = 0; i < left_sites; ++i) lvec = row_apply(lvec, e);
  std::vector<cplx> rvec = env.right;
  for (long i = 0; i < right_sites; ++i) rvec = e.apply(rvec);

  const Matrix lmat = hermitized_from_vec(lvec, chi);
  const Matrix rmat = hermitized_from_vec(rvec, chi);

  // factor L = X†X and R = YY† from their spectra (clipping roundoff)
  HermitianEig le = hermitian_eig(lmat);
  HermitianEig re = hermitian_eig(rmat);
  Matrix x(chi, chi), y(chi, chi);
  for (std::size_t k = 0; k < chi; ++k) {
    const double sl = std::sqrt(std::max(le.values[k], 0.0));
    const double sr = std::sqrt(std::max(re.values[k], 0.0));
    for (std::size_t i = 0; i < chi; ++i) {
      x(k, i) = sl * le.vectors(i, k);  // X = sqrt(D) V^T, so X†X = conj(L)
      y(i, k) = sr * re.vectors(i, k);  // Y = V sqrt(D), so YY† = R
    }
  }

  // F = sum_s conj(A^s) (x) A^s ; block Gram = kron(conj X, X) F^L kron(conj Y, Y)
  const std::size_t d = m.d();
  Matrix f(chi * chi, chi * chi);
  const auto& a = m.site.data();
  for (std::size_t s = 0; s < d; ++s)
    for (std::size_t al = 0; al < chi; ++al)
      for (std::size_t ar = 0; ar < chi; ++ar) {
        const cplx left = std::conj(a[(al * d + s) * chi + ar]);
        if (left == cplx(0, 0)) continue;
        for (std::size_t bl = 0; bl < chi; ++bl)
          for (std::size_t br = 0; br < chi; ++br)
            f(al * chi + bl, ar * chi + br) += left * a[(bl * d + s) * chi + br];
      }

  Matrix fl = Matrix::identity(chi * chi);
  for (long i = 0; i < block_len; ++i) fl = f * fl;
  const Matrix w = kron(x.conj(), x) * fl * kron(y.conj(), y);

  // regroup (alpha alpha'),(beta beta') -> (alpha beta),(alpha' beta')
  Matrix rho(chi * chi, chi * chi);
  for (std::size_t al = 0; al < chi; ++al)
    for (std::size_t ap = 0; ap < chi; ++ap)
      for (std::size_t be = 0; be < chi; ++be)
        for (std::size_t bp = 0; bp < chi; ++bp)
          rho(al * chi + be, ap * chi + bp) = w(al * chi + ap, be * chi + bp);
  Matrix h = rho + rho.dagger();
  for (cplx& v : h.a) v *= 0.5;
  HermitianEig spec = hermitian_eig(h);
  return entropy_bits(spec.values);
}

Tensor state_vector(const HomogeneousMPS& m, long n_sites, bool normalize_output) {
  if (n_sites < 1) throw config_error("state_vector: need at least one site");
  const std::size_t chi = m.chi(), d = m.d();
  double total = 1.0;
  for (long i = 0; i < n_sites; ++i) {
    total *= static_cast<double>(d);
    if (total > static_cast<double>(kStateVectorCap))
      throw config_error("state_vector: d^N exceeds the 2^20 cap");
  }
  const std::size_t dn = static_cast<std::size_t>(total);

  // cur[prefix, b]
  std::vector<cplx> cur = m.left_boundary;
  std::size_t prefix = 1;
  const auto& a = m.site.data();
  for (long i = 0; i < n_sites; ++i) {
    std::vector<cplx> next(prefix * d * chi, cplx(0, 0));
    for (std::size_t pfx = 0; pfx < prefix; ++pfx)
      for (std::size_t b = 0; b < chi; ++b) {
        const cplx v = cur[pfx * chi + b];
        if (v == cplx(0, 0)) continue;
        for (std::size_t s = 0; s < d; ++s)
          for (std::size_t c = 0; c < chi; ++c)
            next[(pfx * d + s) * chi + c] += v * a[(b * d + s) * chi + c];
      }
    cur = std::move(next);
    prefix *= d;
  }
  std::vector<cplx> amps(dn, cplx(0, 0));
  for (std::size_t pfx = 0; pfx < dn; ++pfx) {
    cplx acc(0, 0);
    for (std::size_t b = 0; b < chi; ++b) acc += cur[pfx * chi + b] * m.right_boundary[b];
    amps[pfx] = acc;
  }
  if (normalize_output) {
    const double nrm = vec_norm(amps);
    if (nrm <= 1e-300) throw numeric_error("state_vector: zero state");
    for (cplx& v : amps) v /= nrm;
  }
  std::vector<std::size_t> dims(n_sites, d);
  std::vector<std::string> labels;
  for (long i = 0; i < n_sites; ++i) labels.push_back("s" + std::to_string(i));
  Tensor t(dims, labels, std::move(amps));
  t.check_finite("state_vector");
  return t;
}

// ---- FiniteMPS ---------------------------------------------------------------

std::vector<std::size_t> FiniteMPS::bond_dims() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i + 1 < sites.size(); ++i) out.push_back(sites[i].dims()[2]);
  return out;
}

std::size_t FiniteMPS::max_bond_dim() const {
  std::size_t m = 1;
  for (std::size_t b : bond_dims()) m = std::max(m, b);
  return m;
}

void FiniteMPS::validate() const {
  if (sites.empty()) throw config_error("finite mps: empty");
  if (sites.front().dims()[0] != 1 || sites.back().dims()[2] != 1)
    throw config_error("finite mps: boundary bonds must have dimension 1");
  for (std::size_t i = 0; i + 1 < sites.size(); ++i)
    if (sites[i].dims()[2] != sites[i + 1].dims()[0])
      throw config_error("finite mps: adjacent bond dims inconsistent");
}

Tensor state_vector(const FiniteMPS& m, bool normalize_output) {
  m.validate();
  const std::size_t n = m.sites.size();
  std::size_t dn = 1;
  for (const Tensor& t : m.sites) {
    dn *= t.dims()[1];
    if (dn > kStateVectorCap) throw config_error("state_vector: d^N exceeds the cap");
  }
  std::vector<cplx> cur{cplx(1, 0)};  // cur[prefix, bond]
  std::size_t prefix = 1, bond = 1;
  for (const Tensor& t : m.sites) {
    const std::size_t dl = t.dims()[0], d = t.dims()[1], dr = t.dims()[2];
    std::vector<cplx> next(prefix * d * dr, cplx(0, 0));
    const auto& a = t.data();
    for (std::size_t pfx = 0; pfx < prefix; ++pfx)
      for (std::size_t b = 0; b < dl; ++b) {
        const cplx v = cur[pfx * bond + b];
        if (v == cplx(0, 0)) continue;
        for (std::size_t s = 0; s < d; ++s)
          for (std::size_t c = 0; c < dr; ++c)
            next[(pfx * d + s) * dr + c] += v * a[(b * d + s) * dr + c];
      }
    cur = std::move(next);
    prefix *= d;
    bond = dr;
  }
  std::vector<cplx> amps(prefix);
  for (std::size_t i = 0; i < prefix; ++i) amps[i] = cur[i];
  if (normalize_output) {
    const double nrm = vec_norm(amps);
    if (nrm <= 1e-300) throw numeric_error("state_vector: zero state");
    for (cplx& v : amps) v /= nrm;
  }
  std::vector<std::size_t> dims;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) {
    dims.push_back(m.sites[i].dims()[1]);
    labels.push_back("s" + std::to_string(i));
  }
  return Tensor(dims, labels, std::move(amps));
}

}  // namespace tngeo
