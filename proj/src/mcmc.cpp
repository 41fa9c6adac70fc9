#include "gevre/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>

#include "gevre/errors.hpp"

namespace gevre {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Block {
  enum class Kind { kMu, kLogSigma, kEps, kLogTau, kDelta };
  Kind kind;
  std::size_t group = 0;  // kDelta only
  std::string name;
  double scale = 0.1;
  // adaptation bookkeeping
  std::size_t window_proposals = 0;
  std::size_t window_accepts = 0;
  std::size_t adapt_rounds = 0;
  // post-burn-in acceptance
  std::size_t post_proposals = 0;
  std::size_t post_accepts = 0;
};

double sd_of_group_means(const ModelSpec& spec) {
  std::size_t G = spec.group_count();
  std::vector<double> means(G, 0.0);
  std::vector<std::size_t> counts(G, 0);
  for (std::size_t i = 0; i < spec.values().size(); ++i) {
    means[spec.group_of()[i]] += spec.values()[i];
    ++counts[spec.group_of()[i]];
  }
  double grand = 0.0;
  for (std::size_t g = 0; g < G; ++g) {
    means[g] /= static_cast<double>(counts[g]);
    grand += means[g];
  }
  grand /= static_cast<double>(G);
  double ss = 0.0;
  for (double m : means) ss += (m - grand) * (m - grand);
  return G > 1 ? std::sqrt(ss / static_cast<double>(G - 1)) : 0.0;
}

ParamState initial_state(const ModelSpec& spec) {
  auto overall = summarize(spec.data()).back();
  ParamState state;
  state.mu = overall.mean;
  state.log_sigma = std::log(overall.sd);
  state.eps = 0.1;
  if (spec.mode() == LocationMode::kRandom) {
    double tau0 = 0.5 * sd_of_group_means(spec);
    state.tau = tau0 > 0.0 ? tau0 : std::max(0.1 * overall.sd, 1e-3);
    state.deltas.assign(spec.group_count(), 0.0);
  }
  return state;
}
}  // namespace

ChainDraws run_chain(const ModelSpec& spec, const McmcConfig& config) {
  Rng rng(config.seed);
  return run_chain(spec, config, rng);
}

std::vector<ChainDraws> run_chains(const ModelSpec& spec,
                                   const McmcConfig& config) {
  if (config.chains < 1) throw std::invalid_argument("chains must be >= 1");
  std::vector<std::future<ChainDraws>> futures;
  futures.reserve(config.chains);
  for (std::size_t i = 0; i < config.chains; ++i) {
    McmcConfig chain_cfg = config;
    if (i > 0) chain_cfg.seed = Rng(config.seed).child(i).seed();
    futures.push_back(std::async(std::launch::async, [&spec, chain_cfg] {
      return run_chain(spec, chain_cfg);
    }));
  }
  std::vector<ChainDraws> out;
  out.reserve(config.chains);
  for (auto& f : futures) out.push_back(f.get());
  return out;
}

ChainDraws run_chain(const ModelSpec& spec, const McmcConfig& config,
                     Rng& rng) {
  if (config.burn_in >= config.iterations) {
    throw std::invalid_argument("burn_in must be < iterations");
  }
  if (config.thin < 1) throw std::invalid_argument("thin must be >= 1");

  const bool random_mode = spec.mode() == LocationMode::kRandom;
  const std::size_t G = random_mode ? spec.group_count() : 1;

  auto prior_of = [&](const ParamState& s) { return log_prior(spec, s); };
  auto group_ll = [&](const ParamState& s, std::size_t g) {
    return config.prior_only ? 0.0 : group_log_likelihood(spec, s, g);
  };

  // Initial state: data-derived start; shrink eps toward zero while the
  // posterior is non-finite (support constraints bite for eps away from 0).
  ParamState state = initial_state(spec);
  bool finite_start = false;
  for (int attempt = 0; attempt <= 20; ++attempt) {
    double lp = prior_of(state);
    if (lp != -kInf && std::isfinite(lp)) {
      double ll = 0.0;
      for (std::size_t g = 0; g < G && ll != -kInf; ++g) {
        double lg = group_ll(state, g);
        ll = (lg == -kInf) ? -kInf : ll + lg;
      }
      if (ll != -kInf && std::isfinite(ll)) {
        finite_start = true;
        break;
      }
    }
    state.eps *= 0.5;
  }
  if (!finite_start) {
    throw NumericalError(
        "no finite-posterior initial state after 20 shape retries; "
        "check the data scale");
  }

  auto overall = summarize(spec.data()).back();
  double n = static_cast<double>(spec.values().size());

  std::vector<Block> blocks;
  blocks.push_back({Block::Kind::kMu, 0, "mu",
                    std::max(overall.sd / std::sqrt(n), 1e-3)});
  blocks.push_back({Block::Kind::kLogSigma, 0, "log_sigma", 0.1});
  blocks.push_back({Block::Kind::kEps, 0, "eps", 0.1});
  if (random_mode) {
    blocks.push_back({Block::Kind::kLogTau, 0, "log_tau", 0.5});
    for (std::size_t g = 0; g < G; ++g) {
      blocks.push_back({Block::Kind::kDelta, g,
                        "delta_" + spec.group_labels()[g],
                        std::max(state.tau, 1e-3)});
    }
  }

  // Cached pieces of the target. Global-parameter proposals recompute every
  // group; a delta_g proposal touches only group g's likelihood.
  std::vector<double> ll_groups(G);
  for (std::size_t g = 0; g < G; ++g) ll_groups[g] = group_ll(state, g);
  double lp_prior = prior_of(state);

  ChainDraws out;
  out.seed_used = config.seed;
  out.parameter_names = {"mu", "sigma", "eps"};
  if (random_mode) {
    out.parameter_names.push_back("tau");
    out.parameter_names.push_back("tau_sq");
    for (const auto& label : spec.group_labels()) {
      out.parameter_names.push_back("delta_" + label);
    }
  }
  std::size_t retained = (config.iterations - config.burn_in) / config.thin;
  out.draws.reserve(retained);

  if (config.burn_in == 0) {
    for (const auto& b : blocks) out.scales_at_burn_in_end.push_back(b.scale);
  }

  for (std::size_t iter = 1; iter <= config.iterations; ++iter) {
    bool adapting = iter <= config.burn_in;

    for (auto& block : blocks) {
      double step = block.scale * rng.normal();
      ParamState proposal = state;
      double log_jacobian = 0.0;
      bool delta_move = false;
      switch (block.kind) {
        case Block::Kind::kMu:
          proposal.mu += step;
          break;
        case Block::Kind::kLogSigma:
          proposal.log_sigma += step;
          break;
        case Block::Kind::kEps:
          proposal.eps += step;
          break;
        case Block::Kind::kLogTau:
          // random walk on log tau; the induced proposal on tau needs the
          // log-Jacobian correction log(tau') - log(tau)
          proposal.tau = std::exp(std::log(state.tau) + step);
          log_jacobian = std::log(proposal.tau) - std::log(state.tau);
          break;
        case Block::Kind::kDelta:
          proposal.deltas[block.group] += step;
          delta_move = true;
          break;
      }

      double new_prior = prior_of(proposal);
      double log_ratio;
      std::vector<double> new_ll_groups;
      double new_ll_g = 0.0;
      if (new_prior == -kInf) {
        log_ratio = -kInf;
      } else if (block.kind == Block::Kind::kLogTau) {
        // likelihood does not involve tau
        log_ratio = new_prior - lp_prior + log_jacobian;
      } else if (delta_move) {
        new_ll_g = group_ll(proposal, block.group);
        log_ratio = (new_ll_g == -kInf)
                        ? -kInf
                        : new_ll_g - ll_groups[block.group] + new_prior - lp_prior;
      } else {
        new_ll_groups.resize(G);
        double sum_new = 0.0, sum_old = 0.0;
        log_ratio = 0.0;
        for (std::size_t g = 0; g < G; ++g) {
          new_ll_groups[g] = group_ll(proposal, g);
          if (new_ll_groups[g] == -kInf) {
            log_ratio = -kInf;
            break;
          }
          sum_new += new_ll_groups[g];
          sum_old += ll_groups[g];
        }
        if (log_ratio != -kInf) {
          log_ratio = sum_new - sum_old + new_prior - lp_prior;
        }
      }

      bool accept =
          log_ratio >= 0.0 || std::log(rng.uniform01()) < log_ratio;
      if (accept) {
        state = std::move(proposal);
        lp_prior = new_prior;
        if (block.kind == Block::Kind::kDelta) {
          ll_groups[block.group] = new_ll_g;
        } else if (block.kind != Block::Kind::kLogTau) {
          ll_groups = std::move(new_ll_groups);
        }
      }

      if (adapting) {
        ++block.window_proposals;
        if (accept) ++block.window_accepts;
        if (block.window_proposals >= config.adapt_window) {
          ++block.adapt_rounds;
          double rate = static_cast<double>(block.window_accepts) /
                        static_cast<double>(block.window_proposals);
          double ls = std::log(block.scale) +
                      (rate - config.target_accept) /
                          std::sqrt(static_cast<double>(block.adapt_rounds));
          block.scale = std::exp(std::clamp(ls, -18.0, 18.0));
          block.window_proposals = 0;
          block.window_accepts = 0;
        }
      } else {
        ++block.post_proposals;
        if (accept) ++block.post_accepts;
      }
    }

    if (iter == config.burn_in) {
      for (const auto& b : blocks) out.scales_at_burn_in_end.push_back(b.scale);
    }

    if (iter > config.burn_in && (iter - config.burn_in) % config.thin == 0) {
      std::vector<double> row;
      row.reserve(out.parameter_names.size());
      row.push_back(state.mu);
      row.push_back(std::exp(state.log_sigma));
      row.push_back(state.eps);
      if (random_mode) {
        row.push_back(state.tau);
        row.push_back(state.tau * state.tau);
        for (double d : state.deltas) row.push_back(d);
      }
      out.draws.push_back(std::move(row));
    }
  }

  for (const auto& b : blocks) {
    out.block_names.push_back(b.name);
    out.scales_final.push_back(b.scale);
    out.acceptance_rates.push_back(
        b.post_proposals == 0
            ? 0.0
            : static_cast<double>(b.post_accepts) /
                  static_cast<double>(b.post_proposals));
  }
  return out;
}

std::size_t ChainDraws::column(const std::string& name) const {
  for (std::size_t i = 0; i < parameter_names.size(); ++i) {
    if (parameter_names[i] == name) return i;
  }
  throw DataError("chain has no column '" + name + "'");
}

bool ChainDraws::has_column(const std::string& name) const {
  return std::find(parameter_names.begin(), parameter_names.end(), name) !=
         parameter_names.end();
}

std::vector<double> ChainDraws::column_values(std::size_t index) const {
  std::vector<double> v;
  v.reserve(draws.size());
  for (const auto& row : draws) v.push_back(row[index]);
  return v;
}

double sample_quantile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("quantile of empty sample");
  std::sort(values.begin(), values.end());
  double h = 1.0 + (static_cast<double>(values.size()) - 1.0) * p;
  auto lo = static_cast<std::size_t>(std::floor(h));
  lo = std::min(lo, values.size());
  double frac = h - static_cast<double>(lo);
  double a = values[lo - 1];
  double b = lo < values.size() ? values[lo] : a;
  return a + frac * (b - a);
}

double effective_sample_size(const std::vector<double>& values) {
  std::size_t n = values.size();
  if (n < 2) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n);
  if (!(var > 0.0)) return 0.0;

  auto autocorr = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) {
      s += (values[i] - mean) * (values[i + lag] - mean);
    }
    return s / (static_cast<double>(n) * var);
  };

  // Geyer initial positive sequence: sum rho in consecutive pairs while the
  // pair sums stay positive.
  double tau = -1.0;
  for (std::size_t m = 0; 2 * m + 1 < n; ++m) {
    double pair = autocorr(2 * m) + autocorr(2 * m + 1);
    if (pair <= 0.0) break;
    tau += 2.0 * pair;
  }
  tau = std::max(tau, 1e-12);
  return static_cast<double>(n) / tau;
}

PosteriorSummary summarize(const ChainDraws& draws) {
  if (draws.draws.size() < 10) {
    throw NumericalError("summary needs at least 10 retained draws, have " +
                         std::to_string(draws.draws.size()));
  }
  PosteriorSummary out;
  for (std::size_t c = 0; c < draws.parameter_names.size(); ++c) {
    std::vector<double> v = draws.column_values(c);
    ParameterSummary s;
    s.name = draws.parameter_names[c];
    double sum = 0.0;
    for (double x : v) sum += x;
    s.mean = sum / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
    s.lower95 = sample_quantile(v, 0.025);
    s.upper95 = sample_quantile(v, 0.975);
    s.ess = effective_sample_size(v);
    out.parameters.push_back(std::move(s));
  }
  return out;
}

const ParameterSummary& PosteriorSummary::at(const std::string& name) const {
  for (const auto& p : parameters) {
    if (p.name == name) return p;
  }
  throw DataError("summary has no parameter '" + name + "'");
}

namespace {
// Segment mean and its squared standard error, inflated by the integrated
// autocorrelation time of the segment.
void segment_stats(const std::vector<double>& v, std::size_t begin,
                   std::size_t end, double* mean, double* se_sq) {
  std::vector<double> seg(v.begin() + static_cast<std::ptrdiff_t>(begin),
                          v.begin() + static_cast<std::ptrdiff_t>(end));
  double m = 0.0;
  for (double x : seg) m += x;
  m /= static_cast<double>(seg.size());
  double var = 0.0;
  for (double x : seg) var += (x - m) * (x - m);
  var /= static_cast<double>(seg.size());
  double ess = effective_sample_size(seg);
  *mean = m;
  *se_sq = ess > 0.0 ? var / ess : 0.0;
}
}  // namespace

DiagnosticsReport diagnostics(const ChainDraws& draws) {
  std::size_t n = draws.draws.size();
  if (n < 100) {
    throw NumericalError("diagnostics need at least 100 retained draws");
  }
  DiagnosticsReport report;
  report.block_names = draws.block_names;
  report.acceptance_rates = draws.acceptance_rates;

  std::size_t n_head = n / 10;
  std::size_t n_tail = n / 2;
  for (std::size_t c = 0; c < draws.parameter_names.size(); ++c) {
    std::vector<double> v = draws.column_values(c);
    DiagnosticsEntry e;
    e.name = draws.parameter_names[c];
    e.ess = effective_sample_size(v);

    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= static_cast<double>(n);
    if (!(var > 0.0)) {
      e.degenerate = true;
      e.geweke_z = 0.0;
      report.warnings.push_back("parameter '" + e.name +
                                "' is degenerate (zero variance)");
    } else {
      double m_a, se_a, m_b, se_b;
      segment_stats(v, 0, n_head, &m_a, &se_a);
      segment_stats(v, n - n_tail, n, &m_b, &se_b);
      double denom = std::sqrt(se_a + se_b);
      e.geweke_z = denom > 0.0 ? (m_a - m_b) / denom : 0.0;
      if (std::fabs(e.geweke_z) > 3.0) {
        report.warnings.push_back("parameter '" + e.name +
                                  "' Geweke |z| > 3; chain may not have "
                                  "converged");
      }
    }
    report.parameters.push_back(std::move(e));
  }
  return report;
}

}  // namespace gevre
