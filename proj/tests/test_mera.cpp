#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "tngeo/entropy.hpp"
#include "tngeo/fit.hpp"
#include "tngeo/mera.hpp"
#include "tngeo/mincut.hpp"

using namespace tngeo;

namespace {

// independent top-down contraction through the generic tensor engine
Tensor descend_via_tensor_contractions(const BinaryMERA& m) {
  auto site_label = [](long z, long s) {
    return "z" + std::to_string(z) + "_" + std::to_string(s);
  };
  const long t = m.depth();
  std::vector<std::size_t> top_dims(m.n_top, m.top_site_dim());
  std::vector<std::string> top_labels;
  for (long s = 0; s < m.n_top; ++s) top_labels.push_back(site_label(t, s));
  Tensor state(top_dims, top_labels, m.top);

  for (long z = t - 1; z >= 0; --z) {
    const MeraLayer& layer = m.layers[z];
    const std::size_t df = layer.dim_in, dc = layer.dim_out;
    const long wc = m.n_top << (t - 1 - z);  // coarse width at this layer
    for (long j = 0; j < wc; ++j) {
      Tensor wt({df, df, dc}, {"f1", "f2", "c"}, layer.w.a);
      state = contract(state, wt, {{site_label(z + 1, j), "c"}});
      state = state.renamed("f1", "m" + std::to_string(2 * j))
                  .renamed("f2", "m" + std::to_string(2 * j + 1));
    }
    const long wf = 2 * wc;
    for (long i = 0; i < wc; ++i) {
      const long s1 = 2 * i + 1, s2 = (2 * i + 2) % wf;
      Tensor ut({df, df, df, df}, {"uo1", "uo2", "ui1", "ui2"}, layer.u.a);
      state = contract(state, ut, {{"m" + std::to_string(s1), "ui1"},
                                   {"m" + std::to_string(s2), "ui2"}});
      state = state.renamed("uo1", site_label(z, s1)).renamed("uo2", site_label(z, s2));
    }
    // untouched-by-u legs (none with this pairing), rename leftovers
    std::vector<std::string> labels = state.labels();
    for (std::string& l : labels)
      if (l.rfind("m", 0) == 0) l = site_label(z, std::stol(l.substr(1)));
    state = state.relabeled(labels);
  }
  std::vector<std::string> order;
  for (long s = 0; s < m.n_sites; ++s) order.push_back(site_label(0, s));
  return state.permuted(order);
}

}  // namespace

TEST_CASE("random mera: constraints, determinism, bad sizes") {
  const BinaryMERA m = random_mera(4, 2, 2, 2, 7, true);
  m.check_constraints(1e-12);

  const BinaryMERA a = random_mera(8, 3, 2, 2, 5, true);
  const BinaryMERA b = random_mera(8, 3, 2, 2, 5, true);
  const Tensor sa = state_vector(a), sb = state_vector(b);
  for (std::size_t i = 0; i < sa.size(); ++i) CHECK(sa.data()[i] == sb.data()[i]);

  CHECK_THROWS_AS(random_mera(12, 3, 2, 2, 1, true), config_error);
  CHECK_THROWS_AS(random_mera(8, 2, 5, 2, 1, false), config_error);  // chi > d^2
  CHECK_THROWS_AS(random_mera(8, 2, 3, 2, 1, true), config_error);   // si needs chi==d
}

TEST_CASE("product mera is unentangled") {
  const BinaryMERA m = product_mera(8, 3, 2);
  const Tensor psi = state_vector(m);
  CHECK(std::abs(std::abs(psi.data()[0]) - 1.0) < 1e-12);
  for (long l : {1L, 2L, 4L}) CHECK(block_entropy(m, l) < 1e-12);

  const LocalOperator p = LocalOperator::random_traceless(2, 1);
  const LocalOperator q = LocalOperator::random_traceless(2, 2);
  CHECK(std::abs(correlator_causal_cone(m, p, q, 1, 6)) < 1e-14);
}

TEST_CASE("single identity layer leaves the top amplitudes verbatim") {
  BinaryMERA m;
  m.n_sites = 2;
  m.n_top = 1;
  m.scale_invariant = false;
  MeraLayer layer;
  layer.dim_in = 2;
  layer.dim_out = 2;
  layer.u = Matrix::identity(4);
  layer.w = Matrix(4, 2);
  layer.w(0, 0) = 1.0;  // |c> -> |c>|0>
  layer.w(2, 1) = 1.0;
  m.layers.push_back(layer);
  m.top = detail::random_unit_vector(2, 99);
  const Tensor psi = state_vector(m);
  CHECK(std::abs(psi.at({0, 0}) - m.top[0]) < 1e-14);
  CHECK(std::abs(psi.at({1, 0}) - m.top[1]) < 1e-14);
  CHECK(std::abs(psi.at({0, 1})) < 1e-14);
}

TEST_CASE("state vector: unit norm without renormalisation") {
  for (std::uint64_t seed : {1, 2, 3}) {
    const BinaryMERA m = random_mera(16, 4, 2, 2, seed, false);
    const Tensor psi = state_vector(m);
    double nrm = 0.0;
    for (const cplx& v : psi.data()) nrm += std::norm(v);
    CHECK(std::sqrt(nrm) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("state vector agrees with an independent contraction order") {
  const BinaryMERA m = random_mera(16, 4, 2, 2, 11, false);
  const Tensor fast = state_vector(m);
  const Tensor slow = descend_via_tensor_contractions(m);
  REQUIRE(fast.size() == slow.size());
  for (std::size_t i = 0; i < fast.size(); ++i)
    CHECK(std::abs(fast.data()[i] - slow.data()[i]) < 1e-10);
}

TEST_CASE("causal-cone correlators equal dense correlators on all pairs") {
  const BinaryMERA m = random_mera(16, 4, 2, 2, 23, true);
  const LocalOperator p = LocalOperator::random_traceless(2, 31);
  const LocalOperator q = LocalOperator::random_traceless(2, 32);
  for (long x1 = 0; x1 < 16; ++x1)
    for (long x2 = x1 + 1; x2 < 16; ++x2) {
      const cplx cone = correlator_causal_cone(m, p, q, x1, x2);
      const cplx dense = correlator_dense(m, p, q, x1, x2);
      CHECK(std::abs(cone - dense) < 1e-9);
    }
}

TEST_CASE("causal-cone correlators handle chi=3 non-scale-invariant states") {
  const BinaryMERA m = random_mera(16, 4, 3, 2, 29, false);
  const LocalOperator p = LocalOperator::random_traceless(2, 41);
  const LocalOperator q = LocalOperator::random_traceless(2, 42);
  for (const auto& [x1, x2] : {std::pair<long, long>{0, 8}, {1, 6}, {3, 12}}) {
    const cplx cone = correlator_causal_cone(m, p, q, x1, x2);
    const cplx dense = correlator_dense(m, p, q, x1, x2);
    CHECK(std::abs(cone - dense) < 1e-9);
  }
}

TEST_CASE("scaling superoperator: fixed point and spectrum bounds") {
  const BinaryMERA m = random_mera(16, 4, 2, 2, 3, true);
  const ScalingSpectrum spec = scaling_spectrum(m);
  CHECK(std::abs(spec.eigenvalues[0] - cplx(1, 0)) < 1e-10);
  for (const cplx& ev : spec.eigenvalues) CHECK(std::abs(ev) <= 1.0 + 1e-10);
  // identity is a fixed point
  Matrix vec_id(4, 1);
  vec_id(0, 0) = 1.0;
  vec_id(3, 0) = 1.0;
  const Matrix out = spec.superoperator * vec_id;
  CHECK(std::abs(out(0, 0) - cplx(1, 0)) < 1e-10);
  CHECK(std::abs(out(3, 0) - cplx(1, 0)) < 1e-10);
  CHECK(std::abs(out(1, 0)) < 1e-10);

  const BinaryMERA prod = product_mera(16, 4, 2);
  const ScalingSpectrum pspec = scaling_spectrum(prod);
  for (std::size_t k = 1; k < pspec.eigenvalues.size(); ++k)
    CHECK(std::abs(pspec.eigenvalues[k]) < 1e-12);

  const BinaryMERA nsi = random_mera(16, 4, 2, 2, 3, false);
  CHECK_THROWS_AS(scaling_spectrum(nsi), config_error);
}

TEST_CASE("block entropy grows with log-like increments and obeys the bound") {
  const BinaryMERA m = random_mera(16, 4, 2, 2, 17, true);
  const double s2 = block_entropy(m, 2);
  const double s4 = block_entropy(m, 4);
  const double s8 = block_entropy(m, 8);
  CHECK(s2 < s4);
  CHECK(s4 < s8);
  const double inc1 = s4 - s2, inc2 = s8 - s4;
  CHECK(inc1 > 0.0);
  CHECK(inc2 > 0.0);
  CHECK(inc2 < 2.0 * inc1 + 1e-9);
  CHECK(inc1 < 2.0 * inc2 + 1e-9);

  const TNGraph g = to_graph(m);
  for (long l = 1; l < 16; ++l) {
    const long start = (16 - l) / 2;
    const MinCutResult cut = min_cut(g, Region::interval(start, start + l - 1));
    CHECK(block_entropy(m, l) <= cut.weight_bits + 1e-9);
  }
}

TEST_CASE("to_graph carries the per-layer bond dimensions") {
  const BinaryMERA m = random_mera(16, 4, 3, 2, 13, false);
  const TNGraph g = to_graph(m);
  std::size_t d2 = 0, d3 = 0;
  for (const Bond& b : g.bonds) {
    if (b.chi == 2) ++d2;
    if (b.chi == 3) ++d3;
  }
  CHECK(d2 > 0);  // physical layer bonds
  CHECK(d3 > 0);  // coarse bonds
  for (const auto& [coord, dim] : g.site_dims) CHECK(dim == 2);
}
