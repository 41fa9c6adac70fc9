#pragma once

#include <cstdint>
#include <vector>

#include "gevre/block_maxima.hpp"

namespace gevre {

struct PanelTruth {
  double mu = 0.0;
  double sigma = 1.0;
  double eps = 0.0;
  double tau = 0.0;
  std::vector<double> deltas;  // one per group, drawn from N(0, tau^2)
};

struct SyntheticPanel {
  BlockSeries data;
  PanelTruth truth;
  std::uint64_t seed = 0;
};

// delta_g ~ N(0, tau^2), then per_group inverse-transform GEV draws at
// location mu + delta_g. tau = 0 gives i.i.d. fixed-location data.
// Replayable: the same seed reproduces the panel exactly.
SyntheticPanel simulate_panel(double mu, double sigma, double eps, double tau,
                              std::size_t groups, std::size_t per_group,
                              std::uint64_t seed);

}  // namespace gevre
