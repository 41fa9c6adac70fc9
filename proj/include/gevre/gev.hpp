#pragma once

#include <vector>

#include "gevre/rng.hpp"

namespace gevre {

// |eps| below this routes to the Gumbel branch; the eps != 0 closed forms
// lose precision near zero.
inline constexpr double kGumbelTol = 1e-9;

// GEV parameter triple: location mu, scale sigma (> 0), shape eps.
// eps < 0 is Weibull-type, eps = 0 Gumbel, eps > 0 Frechet-type.
struct GevParams {
  double mu = 0.0;
  double sigma = 1.0;
  double eps = 0.0;
};

// Throws std::invalid_argument unless sigma > 0 and all fields are finite.
void validate(const GevParams& p);

struct SupportInterval {
  double lower;  // may be -inf
  double upper;  // may be +inf
};

// H(x); exactly 0 below and 1 above the support (limits, not errors).
double cdf(const GevParams& p, double x);

// log h(x) with h = dH/dx; -inf outside the support.
double log_pdf(const GevParams& p, double x);

// Inverse CDF for p in (0, 1); throws std::domain_error otherwise.
double quantile(const GevParams& p, double prob);

// R^k = quantile(1 - 1/k), the level exceeded with probability 1/k.
// Requires k > 1.
double return_level(const GevParams& p, double k);

SupportInterval support(const GevParams& p);

// mu + sigma*gamma for eps = 0; mu + sigma*(Gamma(1-eps)-1)/eps for eps < 1;
// +inf for eps >= 1 (heavy tail, a diagnostic rather than an error).
double mean(const GevParams& p);

// n i.i.d. inverse-transform draws. Deterministic given the rng state.
std::vector<double> sample(const GevParams& p, std::size_t n, Rng& rng);

}  // namespace gevre
