#include "gevre/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "gevre/errors.hpp"
#include "gevre/gev.hpp"

namespace gevre {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogSqrt2Pi = 0.9189385332046727;  // log sqrt(2 pi)

void check_dims(const ModelSpec& spec, const ParamState& state) {
  if (spec.mode() == LocationMode::kRandom &&
      state.deltas.size() != spec.group_count()) {
    throw std::invalid_argument("state has " +
                                std::to_string(state.deltas.size()) +
                                " deltas for " +
                                std::to_string(spec.group_count()) + " groups");
  }
}
}  // namespace

double normal_log_density(double x, double mean, double sd) {
  double z = (x - mean) / sd;
  return -kLogSqrt2Pi - std::log(sd) - 0.5 * z * z;
}

double half_normal_log_density(double x, double scale) {
  if (x < 0.0) return -kInf;
  double z = x / scale;
  return std::log(2.0) - kLogSqrt2Pi - std::log(scale) - 0.5 * z * z;
}

PriorSpec default_priors(const BlockSeries& data, LocationMode mode,
                         const std::string& group_tag) {
  auto overall = summarize(data).back();
  if (overall.count < 2 || !(overall.sd > 0.0)) {
    throw DataError("need at least two distinct maxima to set priors");
  }
  PriorSpec p;
  p.mu = {overall.mean, 10.0 * overall.sd};
  p.log_sigma = {std::log(overall.sd), 10.0};
  p.eps = {0.0, 1.0};
  if (mode == LocationMode::kRandom) {
    auto groups = summarize(data, group_tag);
    groups.pop_back();  // drop the overall row
    double gm = 0.0;
    for (const auto& g : groups) gm += g.mean;
    gm /= static_cast<double>(groups.size());
    double ss = 0.0;
    for (const auto& g : groups) ss += (g.mean - gm) * (g.mean - gm);
    double sd_means = groups.size() > 1
                          ? std::sqrt(ss / static_cast<double>(groups.size() - 1))
                          : 0.0;
    p.tau_scale = sd_means > 0.0 ? 2.0 * sd_means : overall.sd;
  }
  return p;
}

ModelSpec ModelSpec::fixed(BlockSeries data, PriorSpec priors) {
  if (data.records.empty()) throw DataError("model needs data");
  ModelSpec spec;
  spec.mode_ = LocationMode::kFixed;
  spec.values_ = maxima_values(data);
  spec.group_of_.assign(spec.values_.size(), 0);
  spec.group_labels_ = {"all"};
  spec.priors_ = priors;
  spec.data_ = std::move(data);
  return spec;
}

ModelSpec ModelSpec::random(BlockSeries data, std::string group_tag,
                            PriorSpec priors) {
  if (data.records.empty()) throw DataError("model needs data");
  ModelSpec spec;
  spec.mode_ = LocationMode::kRandom;
  spec.group_labels_ = tag_values(data, group_tag);  // throws if tag absent
  if (spec.group_labels_.size() < 2) {
    throw DataError("random location needs >= 2 groups under tag '" +
                    group_tag + "'");
  }
  spec.group_tag_ = std::move(group_tag);
  spec.values_ = maxima_values(data);
  spec.group_of_.resize(spec.values_.size());
  for (std::size_t i = 0; i < data.records.size(); ++i) {
    const auto& value = data.records[i].group_tags.at(spec.group_tag_);
    for (std::size_t g = 0; g < spec.group_labels_.size(); ++g) {
      if (spec.group_labels_[g] == value) {
        spec.group_of_[i] = g;
        break;
      }
    }
  }
  spec.priors_ = priors;
  spec.data_ = std::move(data);
  return spec;
}

ModelSpec ModelSpec::fixed(BlockSeries data) {
  PriorSpec p = default_priors(data, LocationMode::kFixed, "");
  return fixed(std::move(data), p);
}

ModelSpec ModelSpec::random(BlockSeries data, std::string group_tag) {
  PriorSpec p = default_priors(data, LocationMode::kRandom, group_tag);
  return random(std::move(data), std::move(group_tag), p);
}

double group_log_likelihood(const ModelSpec& spec, const ParamState& state,
                            std::size_t group) {
  check_dims(spec, state);
  double delta = 0.0;
  if (spec.mode() == LocationMode::kRandom) delta = state.deltas[group];
  GevParams p{state.mu + delta, std::exp(state.log_sigma), state.eps};
  double total = 0.0;
  const auto& values = spec.values();
  const auto& group_of = spec.group_of();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (group_of[i] != group) continue;
    double lp = log_pdf(p, values[i]);
    if (lp == -kInf) return -kInf;
    total += lp;
  }
  return total;
}

double log_likelihood(const ModelSpec& spec, const ParamState& state) {
  check_dims(spec, state);
  if (spec.mode() == LocationMode::kFixed) {
    GevParams p{state.mu, std::exp(state.log_sigma), state.eps};
    double total = 0.0;
    for (double x : spec.values()) {
      double lp = log_pdf(p, x);
      if (lp == -kInf) return -kInf;
      total += lp;
    }
    return total;
  }
  double total = 0.0;
  for (std::size_t g = 0; g < spec.group_count(); ++g) {
    double lg = group_log_likelihood(spec, state, g);
    if (lg == -kInf) return -kInf;
    total += lg;
  }
  return total;
}

double log_prior(const ModelSpec& spec, const ParamState& state) {
  check_dims(spec, state);
  const PriorSpec& pr = spec.priors();
  double total = normal_log_density(state.mu, pr.mu.mean, pr.mu.sd) +
                 normal_log_density(state.log_sigma, pr.log_sigma.mean,
                                    pr.log_sigma.sd) +
                 normal_log_density(state.eps, pr.eps.mean, pr.eps.sd);
  if (spec.mode() == LocationMode::kRandom) {
    if (!(state.tau > 0.0)) return -kInf;
    total += half_normal_log_density(state.tau, pr.tau_scale);
    for (double d : state.deltas) {
      total += normal_log_density(d, 0.0, state.tau);
    }
  }
  return total;
}

double log_posterior(const ModelSpec& spec, const ParamState& state) {
  double lp = log_prior(spec, state);
  if (lp == -kInf) return -kInf;
  double ll = log_likelihood(spec, state);
  if (ll == -kInf) return -kInf;
  return lp + ll;
}

}  // namespace gevre
