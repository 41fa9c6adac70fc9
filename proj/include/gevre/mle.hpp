#pragma once

#include <array>
#include <string>

#include "gevre/block_maxima.hpp"
#include "gevre/gev.hpp"

namespace gevre {

struct WaldInterval {
  double lower = 0.0;
  double upper = 0.0;
};

struct MleFit {
  GevParams params;
  double log_likelihood_at_max = 0.0;
  // Inverse observed information for (mu, sigma, eps).
  std::array<std::array<double, 3>, 3> covariance{};
  WaldInterval ci_mu, ci_sigma, ci_eps;
  bool converged = false;
};

// Fixed-location GEV maximum likelihood by Nelder-Mead simplex from a
// moment-based start with eps in {-0.1, +0.1} (the likelihood has
// support-boundary kinks, so no gradients). Hessian by central finite
// differences at the optimum. Requires >= 10 maxima; never throws on
// numerically awkward data -- it flags converged = false instead.
MleFit mle_fit(const BlockSeries& bs);

struct RkDeltaCi {
  double point = 0.0;
  WaldInterval ci;
};

// Delta-method 95% CI for the k-year return level at the MLE.
RkDeltaCi return_level_ci(const MleFit& fit, double k);

std::string mle_to_json(const MleFit& fit, double k_for_ci = 10.0);

}  // namespace gevre
