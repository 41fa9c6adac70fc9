#include "gevre/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "gevre/errors.hpp"
#include "gevre/gev.hpp"

namespace gevre {

std::vector<double> return_level_posterior(const ChainDraws& draws, double k,
                                           const ReportScope& scope) {
  if (!(k > 1.0)) throw std::domain_error("return level requires k > 1");
  std::size_t c_mu = draws.column("mu");
  std::size_t c_sigma = draws.column("sigma");
  std::size_t c_eps = draws.column("eps");
  std::size_t c_delta = 0;
  if (!scope.population) {
    c_delta = draws.column("delta_" + scope.group_label);
  }
  std::vector<double> rk;
  rk.reserve(draws.draws.size());
  for (const auto& row : draws.draws) {
    double value = return_level({row[c_mu], row[c_sigma], row[c_eps]}, k);
    // R^k is linear in the location, so the group effect is a plain shift;
    // adding it after the fact keeps group draws bit-identical to
    // population + delta.
    if (!scope.population) value += row[c_delta];
    rk.push_back(value);
  }
  return rk;
}

ReturnLevelReport build_report(const std::vector<double>& rk_draws,
                               const BlockSeries& bs, double k,
                               const ReportScope& scope) {
  if (rk_draws.empty()) throw DataError("no return-level draws");
  ReturnLevelReport r;
  r.k = k;
  r.scope = scope.describe();
  // Mean and sd over residuals from the first draw: constant chains report
  // exactly zero spread, and a location shift of the draws moves the
  // summaries by exactly that shift.
  double offset = rk_draws[0];
  double resid_sum = 0.0;
  for (double x : rk_draws) resid_sum += x - offset;
  double resid_mean = resid_sum / static_cast<double>(rk_draws.size());
  r.estimate = offset + resid_mean;
  if (rk_draws.size() > 1) {
    double ss = 0.0;
    for (double x : rk_draws) {
      double d = (x - offset) - resid_mean;
      ss += d * d;
    }
    r.sd = std::sqrt(ss / static_cast<double>(rk_draws.size() - 1));
  }
  r.lower95 = sample_quantile(rk_draws, 0.025);
  r.upper95 = sample_quantile(rk_draws, 0.975);
  r.percentile_lower = empirical_percentile(r.lower95, bs);
  r.percentile_estimate = empirical_percentile(r.estimate, bs);
  r.percentile_upper = empirical_percentile(r.upper95, bs);
  r.extrapolation_flag = k > 10.0 * static_cast<double>(bs.records.size());
  return r;
}

CoverageCheck coverage_check(const ReturnLevelReport& report,
                             const BlockSeries& bs, double target_percentile) {
  CoverageCheck c;
  c.target_value = sample_quantile(maxima_values(bs), target_percentile / 100.0);
  c.covered = report.lower95 <= c.target_value && c.target_value <= report.upper95;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "%.0fth percentile of the maxima (%.2f) is %s the 95%% "
                "interval (%.2f, %.2f)",
                target_percentile, c.target_value,
                c.covered ? "within" : "outside", report.lower95,
                report.upper95);
  c.narrative = buf;
  return c;
}

void render_report_text(std::ostream& out, const ReturnLevelReport& report) {
  char line[256];
  std::snprintf(line, sizeof(line), "R^%g (%s)%s\n", report.k,
                report.scope.c_str(),
                report.extrapolation_flag ? "  [extrapolation: k > 10x blocks]"
                                          : "");
  out << line;
  auto annotated = [](double value, double percentile) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.2f %.0f%%", value, std::round(percentile));
    return std::string(buf);
  };
  char sd[32];
  std::snprintf(sd, sizeof(sd), "%.2f", report.sd);
  std::snprintf(line, sizeof(line), "%-18s%-12s%-18s%-18s\n", "Estimate", "Sd",
                "95% Lower Bound", "95% Upper Bound");
  out << line;
  std::snprintf(line, sizeof(line), "%-18s%-12s%-18s%-18s\n",
                annotated(report.estimate, report.percentile_estimate).c_str(),
                sd,
                annotated(report.lower95, report.percentile_lower).c_str(),
                annotated(report.upper95, report.percentile_upper).c_str());
  out << line;
}

std::string report_to_json(const ReturnLevelReport& report) {
  nlohmann::json j;
  j["k"] = report.k;
  j["scope"] = report.scope;
  j["estimate"] = report.estimate;
  j["sd"] = report.sd;
  j["lower95"] = report.lower95;
  j["upper95"] = report.upper95;
  j["percentile_of"] = {{"lower", report.percentile_lower},
                        {"estimate", report.percentile_estimate},
                        {"upper", report.percentile_upper}};
  j["extrapolation_flag"] = report.extrapolation_flag;
  return j.dump(2);
}

}  // namespace gevre
