#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gevre/model.hpp"
#include "gevre/rng.hpp"

namespace gevre {

struct McmcConfig {
  std::size_t iterations = 20000;
  std::size_t burn_in = 4000;
  std::size_t thin = 5;
  std::uint64_t seed = 1;
  std::size_t chains = 1;
  std::size_t adapt_window = 50;
  double target_accept = 0.44;
  // Diagnostic mode: the likelihood term is dropped and the chain targets
  // the prior, whose moments are known in closed form.
  bool prior_only = false;
};

// Post-burn-in, thinned draws on the natural scale. Columns are mu, sigma,
// eps and, in random mode, tau, tau_sq and one delta_<group> per group.
struct ChainDraws {
  std::vector<std::string> parameter_names;
  std::vector<std::vector<double>> draws;  // retained x parameters
  std::vector<std::string> block_names;
  std::vector<double> acceptance_rates;  // per block, post burn-in
  std::uint64_t seed_used = 0;
  // Proposal scales are frozen at burn-in end; both snapshots are kept so
  // the no-adaptation invariant is checkable.
  std::vector<double> scales_at_burn_in_end;
  std::vector<double> scales_final;

  std::size_t column(const std::string& name) const;  // throws if absent
  bool has_column(const std::string& name) const;
  std::vector<double> column_values(std::size_t index) const;
};

// Adaptive random-walk Metropolis-within-Gibbs over the ParamState blocks
// (mu), (log sigma), (eps), (log tau), (each delta_g). Deterministic given
// the seed. Throws NumericalError when no finite-posterior initial state is
// found after bounded retries.
ChainDraws run_chain(const ModelSpec& spec, const McmcConfig& config, Rng& rng);
ChainDraws run_chain(const ModelSpec& spec, const McmcConfig& config);

// config.chains independent chains on child streams of config.seed, run
// concurrently, returned in chain order. Chain 0 reproduces the single-chain
// run with the same seed.
std::vector<ChainDraws> run_chains(const ModelSpec& spec,
                                   const McmcConfig& config);

struct ParameterSummary {
  std::string name;
  double mean = 0.0;
  double sd = 0.0;
  double lower95 = 0.0;  // 2.5% quantile
  double upper95 = 0.0;  // 97.5% quantile
  double ess = 0.0;
};

struct PosteriorSummary {
  std::vector<ParameterSummary> parameters;
  const ParameterSummary& at(const std::string& name) const;
};

// Means, sds, equal-tail 95% bounds (order-statistic interpolation) and
// ESS per parameter. Requires >= 10 retained draws.
PosteriorSummary summarize(const ChainDraws& draws);

// Empirical quantile with linear interpolation between order statistics
// (position 1 + (n-1)p on the sorted sample).
double sample_quantile(std::vector<double> values, double p);

// Effective sample size by initial-positive-sequence truncation of the
// autocorrelation sum. Zero-variance sequences report 0.
double effective_sample_size(const std::vector<double>& values);

struct DiagnosticsEntry {
  std::string name;
  double ess = 0.0;
  double geweke_z = 0.0;  // first 10% vs last 50%
  bool degenerate = false;
};

struct DiagnosticsReport {
  std::vector<DiagnosticsEntry> parameters;
  std::vector<std::string> block_names;
  std::vector<double> acceptance_rates;
  std::vector<std::string> warnings;  // |z| > 3 and degeneracies, non-fatal
};

// Requires >= 100 retained draws.
DiagnosticsReport diagnostics(const ChainDraws& draws);

}  // namespace gevre
