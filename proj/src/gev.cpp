#include "gevre/gev.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gevre {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEulerGamma = 0.57721566490153286;

bool is_gumbel(double eps) { return std::fabs(eps) < kGumbelTol; }
}  // namespace

void validate(const GevParams& p) {
  if (!std::isfinite(p.mu) || !std::isfinite(p.sigma) || !std::isfinite(p.eps)) {
    throw std::invalid_argument("GEV parameters must be finite");
  }
  if (p.sigma <= 0.0) {
    throw std::invalid_argument("GEV scale must be > 0");
  }
}

double cdf(const GevParams& p, double x) {
  validate(p);
  double z = (x - p.mu) / p.sigma;
  if (is_gumbel(p.eps)) {
    return std::exp(-std::exp(-z));
  }
  double t = 1.0 + p.eps * z;
  if (t <= 0.0) {
    // eps > 0: x at or below the lower endpoint; eps < 0: at or above the upper.
    return p.eps > 0.0 ? 0.0 : 1.0;
  }
  return std::exp(-std::pow(t, -1.0 / p.eps));
}

double log_pdf(const GevParams& p, double x) {
  validate(p);
  double z = (x - p.mu) / p.sigma;
  if (is_gumbel(p.eps)) {
    return -std::log(p.sigma) - z - std::exp(-z);
  }
  double t = 1.0 + p.eps * z;
  if (t <= 0.0) {
    return -kInf;
  }
  double log_t = std::log(t);
  return -std::log(p.sigma) - (1.0 + 1.0 / p.eps) * log_t - std::exp(-log_t / p.eps);
}

double quantile(const GevParams& p, double prob) {
  validate(p);
  if (!(prob > 0.0 && prob < 1.0)) {
    throw std::domain_error("quantile probability must lie in (0, 1)");
  }
  double y = -std::log(prob);  // > 0
  if (is_gumbel(p.eps)) {
    return p.mu - p.sigma * std::log(y);
  }
  // mu - (sigma/eps) * (1 - y^-eps), with 1 - y^-eps = -expm1(-eps*log(y))
  // so the expression degrades gracefully into the Gumbel branch as eps -> 0.
  return p.mu + (p.sigma / p.eps) * std::expm1(-p.eps * std::log(y));
}

double return_level(const GevParams& p, double k) {
  if (!(k > 1.0)) {
    throw std::domain_error("return level requires k > 1");
  }
  return quantile(p, 1.0 - 1.0 / k);
}

SupportInterval support(const GevParams& p) {
  validate(p);
  if (is_gumbel(p.eps)) {
    return {-kInf, kInf};
  }
  double endpoint = p.mu - p.sigma / p.eps;
  if (p.eps < 0.0) {
    return {-kInf, endpoint};
  }
  return {endpoint, kInf};
}

double mean(const GevParams& p) {
  validate(p);
  if (is_gumbel(p.eps)) {
    return p.mu + p.sigma * kEulerGamma;
  }
  if (p.eps >= 1.0) {
    return kInf;
  }
  // Gamma(1 - eps) through lgamma; 1 - eps > 0 here so the sign is +1.
  double g = std::exp(std::lgamma(1.0 - p.eps));
  return p.mu + p.sigma * (g - 1.0) / p.eps;
}

std::vector<double> sample(const GevParams& p, std::size_t n, Rng& rng) {
  validate(p);
  std::vector<double> draws(n);
  for (std::size_t i = 0; i < n; ++i) {
    draws[i] = quantile(p, rng.uniform01());
  }
  return draws;
}

}  // namespace gevre
