#include "gevre/simulate.hpp"

#include <cstdio>
#include <stdexcept>

#include "gevre/gev.hpp"
#include "gevre/rng.hpp"

namespace gevre {

SyntheticPanel simulate_panel(double mu, double sigma, double eps, double tau,
                              std::size_t groups, std::size_t per_group,
                              std::uint64_t seed) {
  if (groups < 1 || per_group < 1) {
    throw std::invalid_argument("simulate_panel needs groups >= 1, n >= 1");
  }
  if (tau < 0.0) {
    throw std::invalid_argument("tau must be >= 0");
  }
  SyntheticPanel panel;
  panel.seed = seed;
  panel.truth = {mu, sigma, eps, tau, {}};
  panel.data.kind = ExtremumKind::kMax;

  Rng rng(seed);
  for (std::size_t g = 0; g < groups; ++g) {
    panel.truth.deltas.push_back(tau * rng.normal());
  }
  for (std::size_t g = 0; g < groups; ++g) {
    GevParams p{mu + panel.truth.deltas[g], sigma, eps};
    char gbuf[32];
    std::snprintf(gbuf, sizeof(gbuf), "g%02zu", g + 1);
    auto draws = sample(p, per_group, rng);
    for (std::size_t i = 0; i < draws.size(); ++i) {
      char lbuf[64];
      std::snprintf(lbuf, sizeof(lbuf), "%s-%04zu", gbuf, i + 1);
      BlockRecord rec;
      rec.maximum = draws[i];
      rec.block_label = lbuf;
      rec.group_tags["group"] = gbuf;
      panel.data.records.push_back(std::move(rec));
    }
  }
  return panel;
}

}  // namespace gevre
