#include "tngeo/convert.hpp"

#include <cmath>

#include "json.hpp"

namespace tngeo {

namespace {

// relative singular-value cutoff: safely above the Gram-eigensolver noise
// floor (~1e-8) yet far below any genuine Schmidt value of these states
constexpr double kRankCutoff = 1e-7;

}  // namespace

ConversionReport mera_to_mps(const FiniteRangeMERA& m) {
  m.check_constraints(1e-10);
  ConversionReport rep;
  rep.chi_mera = (m.z0() > 0) ? m.layers.front().dim_out : 1;
  rep.z0 = m.z0();

  const Tensor psi = state_vector(m);
  const std::size_t d = m.d();
  const long n = m.n_sites;

  std::vector<cplx> cur = psi.data();
  std::size_t left = 1;
  for (long i = 0; i + 1 < n; ++i) {
    const std::size_t rows = left * d;
    const std::size_t cols = cur.size() / rows;
    Matrix mcur(rows, cols);
    mcur.a = cur;
    const Svd s = svd_thin(mcur, kRankCutoff);
    const std::size_t rank = s.sigma.size();
    if (rank == 0) throw numeric_error("mera_to_mps: zero state");

    Tensor site({left, d, rank},
                {"l", "p", "r"});
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t k = 0; k < rank; ++k)
        site.mutable_data()[r * rank + k] = s.u(r, k);
    rep.mps.sites.push_back(std::move(site));
    rep.chi_mps_per_bond.push_back(rank);
    rep.chi_mps_max = std::max(rep.chi_mps_max, rank);

    cur.assign(rank * cols, cplx(0, 0));
    for (std::size_t k = 0; k < rank; ++k)
      for (std::size_t c = 0; c < cols; ++c)
        cur[k * cols + c] = s.sigma[k] * s.vdag(k, c);
    left = rank;
  }
  Tensor last({left, d, 1}, {"l", "p", "r"}, cur);
  rep.mps.sites.push_back(std::move(last));
  rep.mps.validate();

  const Tensor rebuilt = state_vector(rep.mps);
  cplx overlap(0, 0);
  for (std::size_t i = 0; i < psi.size(); ++i)
    overlap += std::conj(psi.data()[i]) * rebuilt.data()[i];
  rep.fidelity = std::abs(overlap);
  return rep;
}

std::string ConversionReport::to_json_string() const {
  nlohmann::json j;
  j["chi_mera"] = chi_mera;
  j["z0"] = z0;
  j["chi_mps_max"] = chi_mps_max;
  j["chi_mps_per_bond"] = chi_mps_per_bond;
  j["fidelity"] = fidelity;
  return j.dump(2);
}

}  // namespace tngeo
