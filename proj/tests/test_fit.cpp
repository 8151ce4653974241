#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "tngeo/fit.hpp"

using namespace tngeo;

namespace {

std::vector<std::pair<double, double>> synth(double lo, double hi, double step,
                                             double (*f)(double)) {
  std::vector<std::pair<double, double>> pts;
  for (double x = lo; x <= hi; x += step) pts.push_back({x, f(x)});
  return pts;
}

}  // namespace

TEST_CASE("fit_decay: pure exponential") {
  const auto pts = synth(1, 30, 1, [](double r) { return std::exp(-r / 3.0); });
  const ScalingReport rep = fit_decay(pts);
  CHECK(rep.model == "exponential");
  CHECK(rep.params.at("xi") == doctest::Approx(3.0).epsilon(0.01));
  CHECK(rep.r2 > 0.999);
  CHECK(rep.decision_margin > 0.0);
}

TEST_CASE("fit_decay: pure power law") {
  const auto pts = synth(1, 50, 1, [](double r) { return std::pow(r, -2.0); });
  const ScalingReport rep = fit_decay(pts);
  CHECK(rep.model == "power");
  CHECK(rep.params.at("q") == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("fit_decay: combined form locates the crossover") {
  const auto pts = synth(2, 100, 1,
                         [](double r) { return std::exp(-r / 20.0) / (r * r); });
  const ScalingReport rep = fit_decay(pts, true);
  CHECK(rep.model == "combined");
  CHECK(rep.params.at("crossover") >= 10.0);
  CHECK(rep.params.at("crossover") <= 40.0);
  CHECK(rep.params.at("q") == doctest::Approx(2.0).epsilon(0.05));
  CHECK(rep.params.at("xi") == doctest::Approx(20.0).epsilon(0.05));
}

TEST_CASE("fit_decay: floor handling and failure modes") {
  std::vector<std::pair<double, double>> pts;
  for (double r = 1; r <= 8; ++r) pts.push_back({r, std::exp(-r)});
  pts.push_back({40.0, 1e-17});  // numeric zero, dropped
  const ScalingReport rep = fit_decay(pts);
  CHECK(rep.dropped_points == 1);
  CHECK(rep.points.size() == 8);

  std::vector<std::pair<double, double>> few{{1, 0.5}, {2, 0.2}, {3, 0.1}, {4, 0.05}};
  CHECK_THROWS_AS(fit_decay(few), config_error);
}

TEST_CASE("fit_entropy: the four synthetic classes") {
  const auto c = synth(2, 20, 2, [](double) { return 1.7; });
  CHECK(fit_entropy(c).model == "constant");

  const auto lg = synth(2, 64, 2, [](double l) { return std::log2(l) / 3.0; });
  const ScalingReport lrep = fit_entropy(lg);
  CHECK(lrep.model == "log");
  CHECK(lrep.params.at("prefactor") == doctest::Approx(1.0 / 3.0).epsilon(0.02));

  const auto ln = synth(2, 40, 2, [](double l) { return 0.5 * l + 0.3; });
  CHECK(fit_entropy(ln).model == "linear");

  const auto nl = synth(2, 40, 2, [](double l) { return l * std::log2(l); });
  CHECK(fit_entropy(nl).model == "nlogn");
}

TEST_CASE("fit_entropy: model choice is scale invariant") {
  const auto lg = synth(2, 64, 2, [](double l) { return std::log2(l) / 3.0; });
  auto scaled = lg;
  for (auto& [l, s] : scaled) s *= 10.0;
  CHECK(fit_entropy(lg).model == fit_entropy(scaled).model);

  auto tiny = lg;
  for (auto& [l, s] : tiny) s *= 1e-3;
  CHECK(fit_entropy(tiny).model == "log");
}

TEST_CASE("fit_entropy: degenerate grids are rejected") {
  std::vector<std::pair<double, double>> pts{{4, 1}, {4, 1}, {4, 1}, {4, 1}};
  CHECK_THROWS_AS(fit_entropy(pts), config_error);
  std::vector<std::pair<double, double>> few{{2, 1}, {4, 2}, {8, 3}};
  CHECK_THROWS_AS(fit_entropy(few), config_error);
}

TEST_CASE("report json embeds the raw points") {
  const auto pts = synth(1, 10, 1, [](double r) { return std::exp(-r / 2.0); });
  const ScalingReport rep = fit_decay(pts);
  const std::string json = rep.to_json_string();
  CHECK(json.find("\"points\"") != std::string::npos);
  CHECK(json.find("\"model\"") != std::string::npos);
  CHECK(json.find("exponential") != std::string::npos);
}

TEST_CASE("geodesic crossover fit: synthetic two-regime data") {
  std::vector<std::pair<double, double>> pts;
  for (double r : {2, 4}) pts.push_back({r, 3.0 + 2.0 * std::log2(r)});
  for (double r : {8, 16, 32, 64, 128}) pts.push_back({r, 5.0 + 0.5 * r});
  const GeodesicCrossoverFit fit = fit_geodesic_crossover(pts);
  CHECK(fit.linear_regime);
  CHECK(fit.kink == doctest::Approx(8.0));
  CHECK(fit.lin_part.slope == doctest::Approx(0.5).epsilon(0.01));

  std::vector<std::pair<double, double>> logonly;
  for (double r : {2, 4, 8, 16, 32, 64, 128})
    logonly.push_back({r, 1.0 + 4.0 * std::log2(r)});
  CHECK(!fit_geodesic_crossover(logonly).linear_regime);
}
