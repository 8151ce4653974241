#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support/oracles.hpp"
#include "tngeo/rng.hpp"
#include "tngeo/tensor.hpp"

using namespace tngeo;

namespace {

Tensor random_tensor(std::vector<std::size_t> dims, std::vector<std::string> labels,
                     std::uint64_t seed) {
  Tensor t(std::move(dims), std::move(labels));
  Rng rng(seed);
  for (cplx& v : t.mutable_data()) v = rng.gaussian_complex();
  return t;
}

double max_diff(const Tensor& a, const Tensor& b) {
  REQUIRE(a.dims() == b.dims());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

}  // namespace

TEST_CASE("identity contraction returns the vector") {
  Tensor id({3, 3}, {"a", "b"});
  for (std::size_t i = 0; i < 3; ++i) id.mutable_data()[i * 3 + i] = 1.0;
  Tensor v = random_tensor({3}, {"x"}, 5);
  const Tensor got = contract(id, v, {{"b", "x"}});
  REQUIRE(got.rank() == 1);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(std::abs(got.data()[i] - v.data()[i]) < 1e-15);
}

TEST_CASE("full contraction of two identities is the trace") {
  Tensor id1({3, 3}, {"a", "b"});
  Tensor id2({3, 3}, {"c", "d"});
  for (std::size_t i = 0; i < 3; ++i) {
    id1.mutable_data()[i * 3 + i] = 1.0;
    id2.mutable_data()[i * 3 + i] = 1.0;
  }
  const Tensor got = contract(id1, id2, {{"a", "c"}, {"b", "d"}});
  REQUIRE(got.rank() == 0);
  CHECK(std::abs(got.data()[0] - cplx(3.0, 0.0)) < 1e-15);
}

TEST_CASE("contraction agrees with the brute-force loop oracle") {
  const Tensor a = random_tensor({2, 3, 4}, {"p", "q", "r"}, 11);
  const Tensor b = random_tensor({4, 3}, {"s", "t"}, 12);
  const Tensor got = contract(a, b, {{"r", "s"}, {"q", "t"}});
  const Tensor want = oracle::contract_bruteforce(a, b, {{"r", "s"}, {"q", "t"}});
  CHECK(max_diff(got, want) < 1e-12);
}

TEST_CASE("contract is bilinear in the first argument") {
  const Tensor a = random_tensor({3, 4}, {"i", "j"}, 21);
  const Tensor b = random_tensor({4, 2}, {"k", "l"}, 22);
  const cplx alpha(0.7, -1.3);
  const Tensor lhs = contract(a.scaled(alpha), b, {{"j", "k"}});
  const Tensor rhs = contract(a, b, {{"j", "k"}}).scaled(alpha);
  CHECK(max_diff(lhs, rhs) < 1e-12);
}

TEST_CASE("three-tensor chain contraction is associative") {
  const Tensor a = random_tensor({3, 4}, {"i", "j"}, 31);
  const Tensor b = random_tensor({4, 5}, {"j2", "k"}, 32);
  const Tensor c = random_tensor({5, 2}, {"k2", "l"}, 33);
  const Tensor left = contract(contract(a, b, {{"j", "j2"}}), c, {{"k", "k2"}});
  const Tensor right = contract(a, contract(b, c, {{"k", "k2"}}), {{"j", "j2"}});
  CHECK(max_diff(left, right) < 1e-10);
}

TEST_CASE("contraction errors") {
  const Tensor a = random_tensor({3, 4}, {"i", "j"}, 41);
  const Tensor b = random_tensor({5, 2}, {"k", "l"}, 42);
  CHECK_THROWS_AS(contract(a, b, {{"j", "k"}}), config_error);   // 4 vs 5
  CHECK_THROWS_AS(contract(a, b, {{"z", "k"}}), config_error);   // unknown label
  const Tensor c = random_tensor({4, 2}, {"i", "m"}, 43);        // duplicate "i"
  CHECK_THROWS_AS(contract(a, c, {{"j", "m"}}), config_error);
}

TEST_CASE("duplicate labels are rejected") {
  CHECK_THROWS_AS(Tensor({2, 2}, {"a", "a"}), config_error);
}

TEST_CASE("permute round-trips") {
  const Tensor a = random_tensor({2, 3, 4}, {"x", "y", "z"}, 51);
  const Tensor p = a.permuted({"z", "x", "y"});
  const Tensor back = p.permuted({"x", "y", "z"});
  CHECK(max_diff(a, back) == 0.0);
  CHECK(std::abs(a.at({1, 2, 3}) - p.at({3, 1, 2})) == 0.0);
}

TEST_CASE("trace_pair matches manual partial trace") {
  const Tensor a = random_tensor({3, 2, 3}, {"u", "m", "v"}, 61);
  const Tensor tr = trace_pair(a, "u", "v");
  for (std::size_t m = 0; m < 2; ++m) {
    cplx want(0, 0);
    for (std::size_t i = 0; i < 3; ++i) want += a.at({i, m, i});
    CHECK(std::abs(tr.data()[m] - want) < 1e-14);
  }
}

TEST_CASE("non-finite entries are caught after contraction") {
  Tensor a({2, 2}, {"i", "j"});
  a.mutable_data()[0] = cplx(std::numeric_limits<double>::infinity(), 0);
  const Tensor b = random_tensor({2}, {"k"}, 71);
  CHECK_THROWS_AS(contract(a, b, {{"j", "k"}}), numeric_error);
}
