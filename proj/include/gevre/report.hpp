#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gevre/block_maxima.hpp"
#include "gevre/mcmc.hpp"

namespace gevre {

// population: delta = 0 per draw; group: mu + delta_<label> per draw.
struct ReportScope {
  bool population = true;
  std::string group_label;

  static ReportScope pop() { return {true, ""}; }
  static ReportScope group(std::string label) {
    return {false, std::move(label)};
  }
  std::string describe() const {
    return population ? "population" : "group:" + group_label;
  }
};

// One R^k value per retained draw. Requires mu, sigma, eps columns (plus the
// scope's delta column for group scope).
std::vector<double> return_level_posterior(const ChainDraws& draws, double k,
                                           const ReportScope& scope);

struct ReturnLevelReport {
  double k = 0.0;
  double estimate = 0.0;  // posterior mean of per-draw R^k
  double sd = 0.0;
  double lower95 = 0.0;
  double upper95 = 0.0;
  // Empirical percentile of each bound in the observed maxima, unrounded.
  double percentile_lower = 0.0;
  double percentile_estimate = 0.0;
  double percentile_upper = 0.0;
  std::string scope = "population";
  // Set when k > 10 x number of blocks: the estimate extrapolates far
  // beyond the observed record.
  bool extrapolation_flag = false;
};

ReturnLevelReport build_report(const std::vector<double>& rk_draws,
                               const BlockSeries& bs, double k,
                               const ReportScope& scope = ReportScope::pop());

struct CoverageCheck {
  bool covered = false;
  double target_value = 0.0;  // empirical percentile value of the maxima
  std::string narrative;
};

// True iff the empirical `target_percentile` value of the observed maxima
// lies inside [lower95, upper95].
CoverageCheck coverage_check(const ReturnLevelReport& report,
                             const BlockSeries& bs, double target_percentile);

// Aligned-text table: estimate and bounds at two decimals, percentile
// annotations as integers.
void render_report_text(std::ostream& out, const ReturnLevelReport& report);

// Full-precision machine-readable form.
std::string report_to_json(const ReturnLevelReport& report);

}  // namespace gevre
