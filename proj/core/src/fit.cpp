#include "tngeo/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace tngeo {

namespace {

constexpr double kMagnitudeFloor = 1e-14;
constexpr double kInf = std::numeric_limits<double>::infinity();

double bic_score(double sse, std::size_t n, std::size_t k) {
  const double mse = std::max(sse / static_cast<double>(n), 1e-300);
  return static_cast<double>(n) * std::log(mse) +
         static_cast<double>(k) * std::log(static_cast<double>(n));
}

struct Candidate {
  std::string name;
  double bic = kInf;
  double r2 = 0.0;
  std::map<std::string, double> params;
  std::vector<double> residuals;
};

void finish_report(ScalingReport& rep, std::vector<Candidate> cands) {
  std::sort(cands.begin(), cands.end(),
            [](const Candidate& a, const Candidate& b) { return a.bic < b.bic; });
  const Candidate& best = cands.front();
  if (!std::isfinite(best.bic))
    throw numeric_error("fit: no admissible model for these points");
  rep.model = best.name;
  rep.params = best.params;
  rep.r2 = best.r2;
  rep.bic = best.bic;
  rep.residuals = best.residuals;
  if (cands.size() > 1 && std::isfinite(cands[1].bic)) {
    rep.decision_margin = cands[1].bic - best.bic;
    rep.tie = rep.decision_margin < 1e-9;
  } else {
    rep.decision_margin = kInf;
  }
}

}  // namespace

LinFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw config_error("linear_fit: need >= 2 points");
  const std::size_t n = xs.size();
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  LinFit f;
  f.n = n;
  if (sxx <= 1e-300) throw config_error("linear_fit: degenerate abscissae");
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ys[i] - (f.intercept + f.slope * xs[i]);
    f.sse += r * r;
  }
  f.r2 = (syy <= 1e-300) ? 1.0 : std::max(0.0, 1.0 - f.sse / syy);
  return f;
}

ScalingReport fit_decay(const std::vector<std::pair<double, double>>& points,
                        bool try_combined) {
  ScalingReport rep;
  rep.family = "decay";
  std::vector<double> rs, ys;
  for (const auto& [r, c] : points) {
    if (!(c > kMagnitudeFloor)) {
      ++rep.dropped_points;
      continue;
    }
    if (r <= 0.0) throw config_error("fit_decay: separations must be positive");
    rs.push_back(r);
    ys.push_back(std::log(c));
    rep.points.push_back({r, c});
  }
  if (rs.size() < 5)
    throw config_error("fit_decay: need at least 5 points above the floor");
  const std::size_t n = rs.size();

  std::vector<Candidate> cands;
  {  // exponential: ln C = a - r/xi
    const LinFit f = linear_fit(rs, ys);
    Candidate c;
    c.name = "exponential";
    if (f.slope < 0.0) {
      c.bic = bic_score(f.sse, n, 2);
      c.r2 = f.r2;
      c.params["xi"] = -1.0 / f.slope;
      c.params["lnA"] = f.intercept;
      for (std::size_t i = 0; i < n; ++i)
        c.residuals.push_back(ys[i] - (f.intercept + f.slope * rs[i]));
    }
    cands.push_back(std::move(c));
  }
  {  // power: ln C = a - q ln r
    std::vector<double> lx(n);
    for (std::size_t i = 0; i < n; ++i) lx[i] = std::log(rs[i]);
    const LinFit f = linear_fit(lx, ys);
    Candidate c;
    c.name = "power";
    if (f.slope < 0.0) {
      c.bic = bic_score(f.sse, n, 2);
      c.r2 = f.r2;
      c.params["q"] = -f.slope;
      c.params["lnA"] = f.intercept;
      for (std::size_t i = 0; i < n; ++i)
        c.residuals.push_back(ys[i] - (f.intercept + f.slope * lx[i]));
    }
    cands.push_back(std::move(c));
  }
  if (try_combined && n >= 6) {
    // ln C = a - q ln r - r/xi, linear least squares in (1, ln r, r)
    double m[3][3] = {{0}}, b[3] = {0};
    for (std::size_t i = 0; i < n; ++i) {
      const double row[3] = {1.0, std::log(rs[i]), rs[i]};
      for (int p = 0; p < 3; ++p) {
        b[p] += row[p] * ys[i];
        for (int q = 0; q < 3; ++q) m[p][q] += row[p] * row[q];
      }
    }
    // gaussian elimination, 3x3
    double a[3][4];
    for (int p = 0; p < 3; ++p) {
      for (int q = 0; q < 3; ++q) a[p][q] = m[p][q];
      a[p][3] = b[p];
    }
    bool singular = false;
    for (int p = 0; p < 3 && !singular; ++p) {
      int piv = p;
      for (int q = p + 1; q < 3; ++q)
        if (std::abs(a[q][p]) > std::abs(a[piv][p])) piv = q;
      if (std::abs(a[piv][p]) < 1e-12) {
        singular = true;
        break;
      }
      std::swap_ranges(a[p], a[p] + 4, a[piv]);
      for (int q = p + 1; q < 3; ++q) {
        const double f = a[q][p] / a[p][p];
        for (int k = p; k < 4; ++k) a[q][k] -= f * a[p][k];
      }
    }
    if (!singular) {
      double sol[3];
      for (int p = 2; p >= 0; --p) {
        sol[p] = a[p][3];
        for (int q = p + 1; q < 3; ++q) sol[p] -= a[p][q] * sol[q];
        sol[p] /= a[p][p];
      }
      const double q_exp = -sol[1], inv_xi = -sol[2];
      Candidate c;
      c.name = "combined";
      if (q_exp > 0.0 && inv_xi > 0.0) {
        double sse = 0.0, syy = 0.0, my = 0.0;
        for (double y : ys) my += y;
        my /= n;
        for (std::size_t i = 0; i < n; ++i) {
          const double pred = sol[0] + sol[1] * std::log(rs[i]) + sol[2] * rs[i];
          const double r = ys[i] - pred;
          c.residuals.push_back(r);
          sse += r * r;
          syy += (ys[i] - my) * (ys[i] - my);
        }
        c.bic = bic_score(sse, n, 3);
        c.r2 = (syy <= 1e-300) ? 1.0 : std::max(0.0, 1.0 - sse / syy);
        c.params["q"] = q_exp;
        c.params["xi"] = 1.0 / inv_xi;
        c.params["lnA"] = sol[0];
        c.params["crossover"] = 1.0 / inv_xi;  // scale where the decay regime turns
      }
      cands.push_back(std::move(c));
    }
  }
  finish_report(rep, std::move(cands));
  return rep;
}

ScalingReport fit_entropy(const std::vector<std::pair<double, double>>& points) {
  ScalingReport rep;
  rep.family = "entropy";
  if (points.size() < 4) throw config_error("fit_entropy: need at least 4 points");
  std::vector<double> ls, ys;
  for (const auto& [l, s] : points) {
    if (l < 2.0) throw config_error("fit_entropy: block sizes must be >= 2");
    ls.push_back(l);
    ys.push_back(s);
    rep.points.push_back({l, s});
  }
  {  // degenerate grid guard
    bool all_same = true;
    for (double l : ls) all_same = all_same && (l == ls.front());
    if (all_same) throw config_error("fit_entropy: degenerate block grid");
  }
  const std::size_t n = ls.size();

  std::vector<Candidate> cands;
  {  // constant
    double mean = 0.0;
    for (double y : ys) mean += y;
    mean /= n;
    double sse = 0.0;
    Candidate c;
    c.name = "constant";
    for (double y : ys) {
      c.residuals.push_back(y - mean);
      sse += (y - mean) * (y - mean);
    }
    c.bic = bic_score(sse, n, 1);
    c.r2 = (sse <= 1e-300) ? 1.0 : 0.0;
    c.params["value"] = mean;
    cands.push_back(std::move(c));
  }
  const auto add_linear_model = [&](const std::string& name,
                                    const std::vector<double>& xs) {
    const LinFit f = linear_fit(xs, ys);
    Candidate c;
    c.name = name;
    if (f.slope > 0.0) {  // entropy grows (or the constant model wins anyway)
      c.bic = bic_score(f.sse, n, 2);
      c.r2 = f.r2;
      c.params["prefactor"] = f.slope;
      c.params["offset"] = f.intercept;
      for (std::size_t i = 0; i < n; ++i)
        c.residuals.push_back(ys[i] - (f.intercept + f.slope * xs[i]));
    }
    cands.push_back(std::move(c));
  };
  {
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = std::log2(ls[i]);
    add_linear_model("log", xs);
  }
  add_linear_model("linear", ls);
  {
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = ls[i] * std::log2(ls[i]);
    add_linear_model("nlogn", xs);
  }
  finish_report(rep, std::move(cands));
  return rep;
}

GeodesicCrossoverFit fit_geodesic_crossover(
    const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 5)
    throw config_error("fit_geodesic_crossover: need at least 5 points");
  std::vector<std::pair<double, double>> pts = points;
  std::sort(pts.begin(), pts.end());
  const std::size_t n = pts.size();
  std::vector<double> rs(n), ds(n), lrs(n);
  for (std::size_t i = 0; i < n; ++i) {
    rs[i] = pts[i].first;
    ds[i] = pts[i].second;
    lrs[i] = std::log2(pts[i].first);
  }

  GeodesicCrossoverFit out;
  const LinFit single = linear_fit(lrs, ds);
  const double bic_single = bic_score(single.sse, n, 2);

  double best_bic = kInf;
  std::size_t best_k = 0;
  LinFit best_log, best_lin;
  for (std::size_t k = 2; k + 2 <= n; ++k) {
    const std::vector<double> lx(lrs.begin(), lrs.begin() + k);
    const std::vector<double> ly(ds.begin(), ds.begin() + k);
    const std::vector<double> rx(rs.begin() + k, rs.end());
    const std::vector<double> ry(ds.begin() + k, ds.end());
    const LinFit fl = linear_fit(lx, ly);
    const LinFit fr = linear_fit(rx, ry);
    if (fr.slope <= 0.0) continue;
    const double bic = bic_score(fl.sse + fr.sse, n, 5);
    if (bic < best_bic) {
      best_bic = bic;
      best_k = k;
      best_log = fl;
      best_lin = fr;
    }
  }

  if (best_bic < bic_single) {
    out.linear_regime = true;
    out.kink = rs[best_k];
    out.log_part = best_log;
    out.lin_part = best_lin;
    double sst = 0.0, my = 0.0;
    for (double d : ds) my += d;
    my /= n;
    for (double d : ds) sst += (d - my) * (d - my);
    out.r2_joint =
        (sst <= 1e-300) ? 1.0 : std::max(0.0, 1.0 - (best_log.sse + best_lin.sse) / sst);
  } else {
    out.linear_regime = false;
    out.log_part = single;
    out.r2_joint = single.r2;
  }
  return out;
}

std::string ScalingReport::to_json_string() const {
  nlohmann::json j;
  j["family"] = family;
  j["model"] = model;
  nlohmann::json jp;
  for (const auto& [k, v] : params) jp[k] = v;
  j["params"] = jp;
  j["r2"] = r2;
  j["bic"] = std::isfinite(bic) ? bic : 0.0;
  j["decision_margin"] = std::isfinite(decision_margin) ? decision_margin : -1.0;
  j["tie"] = tie;
  j["dropped_points"] = dropped_points;
  nlohmann::json pj = nlohmann::json::array();
  for (const auto& [x, y] : points) pj.push_back({x, y});
  j["points"] = pj;
  nlohmann::json rj = nlohmann::json::array();
  for (double r : residuals) rj.push_back(r);
  j["residuals"] = rj;
  return j.dump(2);
}

}  // namespace tngeo
