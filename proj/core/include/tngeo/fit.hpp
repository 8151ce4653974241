#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tngeo/common.hpp"

namespace tngeo {

struct LinFit {
  double intercept = 0.0;
  double slope = 0.0;
  double sse = 0.0;
  double r2 = 0.0;
  std::size_t n = 0;
};

LinFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys);

// Fitted model report. Model selection uses a BIC-style score
// n*ln(SSE/n) + k*ln(n) on the residuals in the fit coordinate; the raw
// points ride along for auditability.
struct ScalingReport {
  std::string family;   // "decay" or "entropy"
  std::string model;    // decay: exponential | power | combined
                        // entropy: constant | log | linear | nlogn
  std::map<std::string, double> params;
  double r2 = 0.0;
  double bic = 0.0;
  double decision_margin = 0.0;  // BIC gap to the runner-up
  bool tie = false;
  std::vector<double> residuals;
  std::vector<std::pair<double, double>> points;  // points actually fitted
  std::size_t dropped_points = 0;                 // below the 1e-14 floor

  std::string to_json_string() const;
};

// Correlator-decay model selection between exponential (ln|C| vs r) and
// power (ln|C| vs ln r); with try_combined also the product form
// A * r^-q * exp(-r/xi), whose crossover location is reported as xi.
// Magnitudes below 1e-14 are dropped (counted); needs >= 5 surviving points.
ScalingReport fit_decay(const std::vector<std::pair<double, double>>& points,
                        bool try_combined = false);

// Entropy-scaling model selection among constant, a + b log2 L, a + b L and
// a + b L log2 L; needs >= 4 points.
ScalingReport fit_entropy(const std::vector<std::pair<double, double>>& points);

// Two-regime geodesic fit: a + b log2 r below the kink, a' + b' r above.
struct GeodesicCrossoverFit {
  bool linear_regime = false;
  double kink = 0.0;  // first separation of the linear regime
  LinFit log_part;    // vs log2 r
  LinFit lin_part;    // vs r
  double r2_joint = 0.0;
};

GeodesicCrossoverFit fit_geodesic_crossover(
    const std::vector<std::pair<double, double>>& points);

}  // namespace tngeo
