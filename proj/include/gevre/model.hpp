#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gevre/block_maxima.hpp"

namespace gevre {

enum class LocationMode { kFixed, kRandom };

struct NormalPrior {
  double mean = 0.0;
  double sd = 1.0;
};

// Proper but diffuse relative to the data scale; see default_priors.
struct PriorSpec {
  NormalPrior mu;
  NormalPrior log_sigma;
  NormalPrior eps{0.0, 1.0};
  double tau_scale = 1.0;  // half-normal scale on tau (random mode)
};

// mu ~ N(mean of maxima, (10 sd)^2), log sigma ~ N(log sd, 10^2),
// eps ~ N(0, 1), tau ~ half-normal(2 x sd of group means).
PriorSpec default_priors(const BlockSeries& data, LocationMode mode,
                         const std::string& group_tag);

// Sampling-scale parameter vector. sigma lives on the log scale; tau is kept
// on the standard-deviation scale (tau^2 is a reporting transform). deltas
// are parallel to ModelSpec::group_labels().
struct ParamState {
  double mu = 0.0;
  double log_sigma = 0.0;
  double eps = 0.0;
  double tau = 0.0;
  std::vector<double> deltas;
};

// Fixed-location GEV or random-location GEV with one latent delta per group.
class ModelSpec {
 public:
  static ModelSpec fixed(BlockSeries data, PriorSpec priors);
  static ModelSpec random(BlockSeries data, std::string group_tag,
                          PriorSpec priors);

  // Defaults-from-data convenience.
  static ModelSpec fixed(BlockSeries data);
  static ModelSpec random(BlockSeries data, std::string group_tag);

  LocationMode mode() const { return mode_; }
  const std::string& group_tag() const { return group_tag_; }
  const std::vector<std::string>& group_labels() const { return group_labels_; }
  std::size_t group_count() const { return group_labels_.size(); }
  const std::vector<double>& values() const { return values_; }
  // Record -> group index; all zero in fixed mode.
  const std::vector<std::size_t>& group_of() const { return group_of_; }
  const PriorSpec& priors() const { return priors_; }
  const BlockSeries& data() const { return data_; }

 private:
  ModelSpec() = default;
  LocationMode mode_ = LocationMode::kFixed;
  std::string group_tag_;
  std::vector<std::string> group_labels_;
  std::vector<double> values_;
  std::vector<std::size_t> group_of_;
  PriorSpec priors_;
  BlockSeries data_;
};

// Sum over records of log_pdf((mu + delta_g, sigma, eps), x); -inf when any
// observation leaves the shifted support.
double log_likelihood(const ModelSpec& spec, const ParamState& state);

// Likelihood contribution of one group's records.
double group_log_likelihood(const ModelSpec& spec, const ParamState& state,
                            std::size_t group);

// Prior log density; tau <= 0 gives -inf in random mode.
double log_prior(const ModelSpec& spec, const ParamState& state);

double log_posterior(const ModelSpec& spec, const ParamState& state);

double normal_log_density(double x, double mean, double sd);
double half_normal_log_density(double x, double scale);

}  // namespace gevre
