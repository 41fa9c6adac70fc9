#include "gevre/mle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <json.hpp>

#include "gevre/errors.hpp"

namespace gevre {

namespace {

constexpr double kBig = 1e300;
constexpr double kLogSigmaBound = 30.0;
constexpr double kEpsBound = 5.0;
constexpr double kEulerGamma = 0.57721566490153286;

using Point = std::array<double, 3>;  // (mu, log_sigma, eps)

double neg_loglik(const std::vector<double>& x, const Point& theta) {
  if (std::fabs(theta[1]) > kLogSigmaBound || std::fabs(theta[2]) > kEpsBound) {
    return kBig;
  }
  GevParams p{theta[0], std::exp(theta[1]), theta[2]};
  double total = 0.0;
  for (double v : x) {
    double lp = log_pdf(p, v);
    if (!std::isfinite(lp)) return kBig;
    total -= lp;
  }
  return std::isfinite(total) ? total : kBig;
}

struct SimplexResult {
  Point best{};
  double f_best = kBig;
  bool tol_met = false;
};

// Classic Nelder-Mead (reflection 1, expansion 2, contraction 0.5,
// shrink 0.5) in three dimensions.
SimplexResult nelder_mead(const std::function<double(const Point&)>& f,
                          const Point& start, const Point& steps,
                          int max_iter) {
  std::array<Point, 4> pts;
  std::array<double, 4> fev;
  pts[0] = start;
  for (int i = 1; i < 4; ++i) {
    pts[i] = start;
    pts[i][i - 1] += steps[i - 1];
  }
  for (int i = 0; i < 4; ++i) fev[i] = f(pts[i]);

  auto order = [&]() {
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) {
        if (fev[j] < fev[i]) {
          std::swap(fev[i], fev[j]);
          std::swap(pts[i], pts[j]);
        }
      }
    }
  };

  SimplexResult result;
  for (int iter = 0; iter < max_iter; ++iter) {
    order();
    if (std::fabs(fev[3] - fev[0]) <
        1e-11 * (std::fabs(fev[0]) + 1e-11)) {
      result.tol_met = true;
      break;
    }
    Point centroid{};
    for (int i = 0; i < 3; ++i) {
      for (int d = 0; d < 3; ++d) centroid[d] += pts[i][d] / 3.0;
    }
    auto blend = [&](double coef) {
      Point p;
      for (int d = 0; d < 3; ++d) {
        p[d] = centroid[d] + coef * (pts[3][d] - centroid[d]);
      }
      return p;
    };
    Point refl = blend(-1.0);
    double f_refl = f(refl);
    if (f_refl < fev[0]) {
      Point expd = blend(-2.0);
      double f_expd = f(expd);
      if (f_expd < f_refl) {
        pts[3] = expd;
        fev[3] = f_expd;
      } else {
        pts[3] = refl;
        fev[3] = f_refl;
      }
    } else if (f_refl < fev[2]) {
      pts[3] = refl;
      fev[3] = f_refl;
    } else {
      Point contr = blend(f_refl < fev[3] ? -0.5 : 0.5);
      double f_contr = f(contr);
      if (f_contr < std::min(f_refl, fev[3])) {
        pts[3] = contr;
        fev[3] = f_contr;
      } else {
        for (int i = 1; i < 4; ++i) {
          for (int d = 0; d < 3; ++d) {
            pts[i][d] = pts[0][d] + 0.5 * (pts[i][d] - pts[0][d]);
          }
          fev[i] = f(pts[i]);
        }
      }
    }
  }
  order();
  result.best = pts[0];
  result.f_best = fev[0];
  return result;
}

// Central-difference Hessian of f at theta (natural parameters).
std::array<std::array<double, 3>, 3> fd_hessian(
    const std::function<double(const Point&)>& f, const Point& theta) {
  std::array<double, 3> h;
  for (int i = 0; i < 3; ++i) h[i] = 1e-4 * std::max(std::fabs(theta[i]), 0.1);
  std::array<std::array<double, 3>, 3> H{};
  double f0 = f(theta);
  for (int i = 0; i < 3; ++i) {
    Point up = theta, dn = theta;
    up[i] += h[i];
    dn[i] -= h[i];
    H[i][i] = (f(up) + f(dn) - 2.0 * f0) / (h[i] * h[i]);
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      Point pp = theta, pm = theta, mp = theta, mm = theta;
      pp[i] += h[i]; pp[j] += h[j];
      pm[i] += h[i]; pm[j] -= h[j];
      mp[i] -= h[i]; mp[j] += h[j];
      mm[i] -= h[i]; mm[j] -= h[j];
      H[i][j] = H[j][i] =
          (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * h[i] * h[j]);
    }
  }
  return H;
}

bool invert3(const std::array<std::array<double, 3>, 3>& A,
             std::array<std::array<double, 3>, 3>* inv) {
  double det = A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1]) -
               A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0]) +
               A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]);
  if (!std::isfinite(det) || std::fabs(det) < 1e-300) return false;
  auto& B = *inv;
  B[0][0] = (A[1][1] * A[2][2] - A[1][2] * A[2][1]) / det;
  B[0][1] = (A[0][2] * A[2][1] - A[0][1] * A[2][2]) / det;
  B[0][2] = (A[0][1] * A[1][2] - A[0][2] * A[1][1]) / det;
  B[1][0] = (A[1][2] * A[2][0] - A[1][0] * A[2][2]) / det;
  B[1][1] = (A[0][0] * A[2][2] - A[0][2] * A[2][0]) / det;
  B[1][2] = (A[0][2] * A[1][0] - A[0][0] * A[1][2]) / det;
  B[2][0] = (A[1][0] * A[2][1] - A[1][1] * A[2][0]) / det;
  B[2][1] = (A[0][1] * A[2][0] - A[0][0] * A[2][1]) / det;
  B[2][2] = (A[0][0] * A[1][1] - A[0][1] * A[1][0]) / det;
  return true;
}

bool positive_definite(const std::array<std::array<double, 3>, 3>& A) {
  double m1 = A[0][0];
  double m2 = A[0][0] * A[1][1] - A[0][1] * A[1][0];
  double m3 = A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1]) -
              A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0]) +
              A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]);
  return m1 > 0.0 && m2 > 0.0 && m3 > 0.0;
}

}  // namespace

MleFit mle_fit(const BlockSeries& bs) {
  const std::vector<double> x = maxima_values(bs);
  if (x.size() < 10) {
    throw DataError("MLE needs at least 10 maxima, have " +
                    std::to_string(x.size()));
  }

  double m = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  double s = std::sqrt(ss / static_cast<double>(x.size() - 1));
  if (!(s > 0.0)) s = 1e-8;  // constant-ish data; carry on and flag later

  // Gumbel moment start.
  double sigma0 = s * std::sqrt(6.0) / M_PI;
  double mu0 = m - kEulerGamma * sigma0;

  auto objective = [&](const Point& p) { return neg_loglik(x, p); };
  Point steps{0.5 * sigma0, 0.25, 0.15};

  SimplexResult best;
  bool any_tol = false;
  for (double eps0 : {-0.1, 0.1}) {
    Point start{mu0, std::log(sigma0), eps0};
    SimplexResult r = nelder_mead(objective, start, steps, 2000);
    // polish from the incumbent with a smaller simplex
    SimplexResult r2 = nelder_mead(objective, r.best,
                                   {0.05 * sigma0, 0.05, 0.03}, 2000);
    if (r2.f_best < r.f_best) r = r2;
    any_tol = any_tol || r.tol_met || r2.tol_met;
    if (r.f_best < best.f_best) best = r;
  }

  MleFit fit;
  fit.params = {best.best[0], std::exp(best.best[1]), best.best[2]};
  fit.log_likelihood_at_max = -best.f_best;

  bool at_bound = std::fabs(best.best[1]) > kLogSigmaBound - 1.0 ||
                  std::fabs(best.best[2]) > kEpsBound - 0.5;

  // Observed information in natural (mu, sigma, eps) coordinates.
  auto natural = [&](const Point& p) -> double {
    if (!(p[1] > 0.0)) return kBig;
    GevParams gp{p[0], p[1], p[2]};
    double total = 0.0;
    for (double v : x) {
      double lp = log_pdf(gp, v);
      if (!std::isfinite(lp)) return kBig;
      total -= lp;
    }
    return total;
  };
  Point theta{fit.params.mu, fit.params.sigma, fit.params.eps};
  auto H = fd_hessian(natural, theta);

  bool cov_ok = positive_definite(H) && invert3(H, &fit.covariance);
  if (cov_ok) {
    double z = 1.959963984540054;
    fit.ci_mu = {theta[0] - z * std::sqrt(fit.covariance[0][0]),
                 theta[0] + z * std::sqrt(fit.covariance[0][0])};
    fit.ci_sigma = {theta[1] - z * std::sqrt(fit.covariance[1][1]),
                    theta[1] + z * std::sqrt(fit.covariance[1][1])};
    fit.ci_eps = {theta[2] - z * std::sqrt(fit.covariance[2][2]),
                  theta[2] + z * std::sqrt(fit.covariance[2][2])};
  }
  fit.converged = any_tol && cov_ok && !at_bound && best.f_best < kBig;
  return fit;
}

RkDeltaCi return_level_ci(const MleFit& fit, double k) {
  RkDeltaCi out;
  out.point = return_level(fit.params, k);
  // Gradient of R^k in (mu, sigma, eps) by central differences.
  Point theta{fit.params.mu, fit.params.sigma, fit.params.eps};
  std::array<double, 3> grad;
  for (int i = 0; i < 3; ++i) {
    double h = 1e-5 * std::max(std::fabs(theta[i]), 0.1);
    Point up = theta, dn = theta;
    up[i] += h;
    dn[i] -= h;
    double r_up = return_level({up[0], up[1], up[2]}, k);
    double r_dn = return_level({dn[0], dn[1], dn[2]}, k);
    grad[i] = (r_up - r_dn) / (2.0 * h);
  }
  double var = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      var += grad[i] * fit.covariance[i][j] * grad[j];
    }
  }
  double half = 1.959963984540054 * std::sqrt(std::max(var, 0.0));
  out.ci = {out.point - half, out.point + half};
  return out;
}

std::string mle_to_json(const MleFit& fit, double k_for_ci) {
  nlohmann::json j;
  j["params"] = {{"mu", fit.params.mu},
                 {"sigma", fit.params.sigma},
                 {"eps", fit.params.eps}};
  j["log_likelihood"] = fit.log_likelihood_at_max;
  j["converged"] = fit.converged;
  j["covariance"] = fit.covariance;
  j["ci95"] = {{"mu", {fit.ci_mu.lower, fit.ci_mu.upper}},
               {"sigma", {fit.ci_sigma.lower, fit.ci_sigma.upper}},
               {"eps", {fit.ci_eps.lower, fit.ci_eps.upper}}};
  if (fit.converged) {
    RkDeltaCi rk = return_level_ci(fit, k_for_ci);
    j["return_level"] = {{"k", k_for_ci},
                         {"point", rk.point},
                         {"ci95", {rk.ci.lower, rk.ci.upper}}};
  }
  return j.dump(2);
}

}  // namespace gevre
