// gevre: block-maxima extreme value analysis with GEV location random effects.
//
// Subcommands: blocks, fit, returns, simulate, mle, replicate-study.
// Exit codes: 0 success, 1 usage, 2 data error, 3 numerical error.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gevre/block_maxima.hpp"
#include "gevre/csv.hpp"
#include "gevre/errors.hpp"
#include "gevre/mcmc.hpp"
#include "gevre/mle.hpp"
#include "gevre/model.hpp"
#include "gevre/report.hpp"
#include "gevre/rng.hpp"
#include "gevre/simulate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using KV = std::vector<std::pair<std::string, std::string>>;

void ensure_outdir(const std::string& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw gevre::DataError("cannot create output directory '" + out + "'");
}

// Replayable run record: plain key=value, usable as a --config file.
void write_manifest(const std::string& outdir, const std::string& command,
                    const KV& entries) {
  std::ofstream out(fs::path(outdir) / "manifest.txt");
  if (!out) throw gevre::DataError("cannot write manifest in '" + outdir + "'");
  out << "command=" << command << '\n';
  for (const auto& [k, v] : entries) out << k << '=' << v << '\n';
}

std::string fmt(double v) { return gevre::format_double(v); }

std::string k_slug(double k) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", k);
  std::string s = buf;
  std::replace(s.begin(), s.end(), '.', 'p');
  return s;
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw gevre::DataError("cannot write '" + path.string() + "'");
  out << content;
}

// Flat key=value config. '#' starts a comment; unknown keys are ignored so a
// manifest (which carries a command= line) replays directly.
KV read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw gevre::DataError("cannot open '" + path + "'");
  KV kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto strip = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string stripped = strip(line);
    if (stripped.empty()) continue;
    auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw gevre::DataError(path + ": line " + std::to_string(line_no) +
                             ": expected key=value");
    }
    kv.emplace_back(strip(stripped.substr(0, eq)), strip(stripped.substr(eq + 1)));
  }
  return kv;
}

double config_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw gevre::DataError("config key '" + key + "': bad number '" + value + "'");
  }
}

std::uint64_t config_uint(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    unsigned long long v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw gevre::DataError("config key '" + key + "': bad count '" + value + "'");
  }
}

// ---------------------------------------------------------------- blocks --

struct BlocksOptions {
  std::string input;
  std::string rule = "year";
  std::string kind = "max";
  std::string out;
  bool percent_change = false;
  bool drop_partial = false;
};

std::string summary_table(const std::vector<gevre::GroupStats>& rows,
                          const std::string& heading) {
  std::ostringstream os;
  os << heading << "\n";
  os << "Group            Count   Mean      Sd\n";
  char line[160];
  for (const auto& r : rows) {
    if (std::isnan(r.sd)) {
      std::snprintf(line, sizeof(line), "%-16s %5zu   %-9.4f n/a\n",
                    r.group.c_str(), r.count, r.mean);
    } else {
      std::snprintf(line, sizeof(line), "%-16s %5zu   %-9.4f %-9.4f\n",
                    r.group.c_str(), r.count, r.mean, r.sd);
    }
    os << line;
  }
  return os.str();
}

void run_blocks(const BlocksOptions& opt) {
  ensure_outdir(opt.out);
  auto series = gevre::read_raw_series_file(opt.input);
  if (opt.percent_change) gevre::to_percent_change(series);
  auto rule = gevre::parse_block_rule(opt.rule);
  auto kind = opt.kind == "min" ? gevre::ExtremumKind::kMin
                                : gevre::ExtremumKind::kMax;
  gevre::ExtractOptions ex;
  ex.drop_partial = opt.drop_partial;
  auto bs = gevre::extract_block_maxima(series, rule, kind, ex);

  gevre::write_block_series_file((fs::path(opt.out) / "maxima.csv").string(), bs);

  bool multi = series.size() > 1 || !series[0].label.empty();
  auto rows = gevre::summarize(bs, multi ? "series" : "");
  std::ostringstream os;
  os << summary_table(rows, "Block maxima summary (rule=" + opt.rule +
                                ", kind=" + opt.kind + ")");
  os << "blocks=" << bs.records.size() << " empty_skipped=" << bs.skips.empty_blocks
     << " partial=" << bs.skips.partial_blocks.size()
     << " dropped_partial=" << bs.skips.dropped_partial << "\n";
  for (const auto& p : bs.skips.partial_blocks) {
    os << "partial_block=" << p << "\n";
  }
  write_text_file(fs::path(opt.out) / "summary.txt", os.str());

  write_manifest(opt.out, "blocks",
                 {{"input", opt.input},
                  {"rule", opt.rule},
                  {"kind", opt.kind},
                  {"percent-change", opt.percent_change ? "true" : "false"},
                  {"drop-partial", opt.drop_partial ? "true" : "false"},
                  {"out", opt.out}});
}

// ------------------------------------------------------------------- fit --

struct PriorOverrides {
  double mu_mean = NAN, mu_sd = NAN;
  double log_sigma_mean = NAN, log_sigma_sd = NAN;
  double eps_mean = NAN, eps_sd = NAN;
  double tau_scale = NAN;
};

struct FitOptions {
  std::string config;
  std::string input;
  std::string mode = "fixed";
  std::string group_tag;
  gevre::McmcConfig mcmc;
  PriorOverrides prior;
  std::string out;
};

// Config supplies values only for flags the user did not pass.
void apply_fit_config(const CLI::App& fit, FitOptions& opt) {
  auto given = [&](const char* flag) { return fit.count(flag) > 0; };
  for (const auto& [key, value] : read_config_file(opt.config)) {
    if (key == "input" && !given("--input")) opt.input = value;
    else if (key == "mode" && !given("--mode")) {
      if (value != "fixed" && value != "random") {
        throw gevre::DataError("config key 'mode': expected fixed|random");
      }
      opt.mode = value;
    } else if (key == "group-tag" && !given("--group-tag")) opt.group_tag = value;
    else if (key == "iterations" && !given("--iterations")) opt.mcmc.iterations = config_uint(key, value);
    else if (key == "burn-in" && !given("--burn-in")) opt.mcmc.burn_in = config_uint(key, value);
    else if (key == "thin" && !given("--thin")) opt.mcmc.thin = config_uint(key, value);
    else if (key == "seed" && !given("--seed")) opt.mcmc.seed = config_uint(key, value);
    else if (key == "adapt-window" && !given("--adapt-window")) opt.mcmc.adapt_window = config_uint(key, value);
    else if (key == "target-accept" && !given("--target-accept")) opt.mcmc.target_accept = config_double(key, value);
    else if (key == "prior-mu-mean" && !given("--prior-mu-mean")) opt.prior.mu_mean = config_double(key, value);
    else if (key == "prior-mu-sd" && !given("--prior-mu-sd")) opt.prior.mu_sd = config_double(key, value);
    else if (key == "prior-log-sigma-mean" && !given("--prior-log-sigma-mean")) opt.prior.log_sigma_mean = config_double(key, value);
    else if (key == "prior-log-sigma-sd" && !given("--prior-log-sigma-sd")) opt.prior.log_sigma_sd = config_double(key, value);
    else if (key == "prior-eps-mean" && !given("--prior-eps-mean")) opt.prior.eps_mean = config_double(key, value);
    else if (key == "prior-eps-sd" && !given("--prior-eps-sd")) opt.prior.eps_sd = config_double(key, value);
    else if (key == "prior-tau-scale" && !given("--prior-tau-scale")) opt.prior.tau_scale = config_double(key, value);
    else if (key == "out" && !given("--out")) opt.out = value;
    // anything else (command=, k=, ...) is deliberately ignored
  }
  if (opt.input.empty()) throw gevre::DataError("fit needs --input (flag or config)");
  if (opt.out.empty()) throw gevre::DataError("fit needs --out (flag or config)");
}

gevre::ModelSpec build_model(const gevre::BlockSeries& bs,
                             const std::string& mode,
                             const std::string& group_tag,
                             const PriorOverrides& ov) {
  auto loc = mode == "random" ? gevre::LocationMode::kRandom
                              : gevre::LocationMode::kFixed;
  if (loc == gevre::LocationMode::kRandom && group_tag.empty()) {
    throw gevre::DataError("random mode needs --group-tag");
  }
  gevre::PriorSpec priors = gevre::default_priors(bs, loc, group_tag);
  if (!std::isnan(ov.mu_mean)) priors.mu.mean = ov.mu_mean;
  if (!std::isnan(ov.mu_sd)) priors.mu.sd = ov.mu_sd;
  if (!std::isnan(ov.log_sigma_mean)) priors.log_sigma.mean = ov.log_sigma_mean;
  if (!std::isnan(ov.log_sigma_sd)) priors.log_sigma.sd = ov.log_sigma_sd;
  if (!std::isnan(ov.eps_mean)) priors.eps.mean = ov.eps_mean;
  if (!std::isnan(ov.eps_sd)) priors.eps.sd = ov.eps_sd;
  if (!std::isnan(ov.tau_scale)) priors.tau_scale = ov.tau_scale;
  return loc == gevre::LocationMode::kRandom
             ? gevre::ModelSpec::random(bs, group_tag, priors)
             : gevre::ModelSpec::fixed(bs, priors);
}

std::string posterior_table(const gevre::PosteriorSummary& summary) {
  std::ostringstream os;
  os << "Parameter        Estimate    Sd          95% Lower   95% Upper   ESS\n";
  char line[200];
  for (const auto& p : summary.parameters) {
    std::snprintf(line, sizeof(line), "%-16s %-11.4f %-11.4f %-11.4f %-11.4f %.1f\n",
                  p.name.c_str(), p.mean, p.sd, p.lower95, p.upper95, p.ess);
    os << line;
  }
  return os.str();
}

json diagnostics_json(const gevre::DiagnosticsReport& report,
                      const gevre::ChainDraws& draws) {
  json j;
  j["retained"] = draws.draws.size();
  j["seed"] = draws.seed_used;
  j["parameters"] = json::array();
  for (const auto& p : report.parameters) {
    j["parameters"].push_back({{"name", p.name},
                               {"ess", p.ess},
                               {"geweke_z", p.geweke_z},
                               {"degenerate", p.degenerate}});
  }
  j["acceptance_rates"] = json::object();
  for (std::size_t i = 0; i < report.block_names.size(); ++i) {
    j["acceptance_rates"][report.block_names[i]] = report.acceptance_rates[i];
  }
  j["warnings"] = report.warnings;
  return j;
}

KV fit_manifest_entries(const FitOptions& opt) {
  KV kv{{"input", opt.input},
        {"mode", opt.mode},
        {"group-tag", opt.group_tag},
        {"iterations", std::to_string(opt.mcmc.iterations)},
        {"burn-in", std::to_string(opt.mcmc.burn_in)},
        {"thin", std::to_string(opt.mcmc.thin)},
        {"adapt-window", std::to_string(opt.mcmc.adapt_window)},
        {"target-accept", fmt(opt.mcmc.target_accept)},
        {"seed", std::to_string(opt.mcmc.seed)},
        {"out", opt.out}};
  auto add = [&](const char* name, double v) {
    if (!std::isnan(v)) kv.emplace_back(name, fmt(v));
  };
  add("prior-mu-mean", opt.prior.mu_mean);
  add("prior-mu-sd", opt.prior.mu_sd);
  add("prior-log-sigma-mean", opt.prior.log_sigma_mean);
  add("prior-log-sigma-sd", opt.prior.log_sigma_sd);
  add("prior-eps-mean", opt.prior.eps_mean);
  add("prior-eps-sd", opt.prior.eps_sd);
  add("prior-tau-scale", opt.prior.tau_scale);
  return kv;
}

void run_fit(const FitOptions& opt) {
  ensure_outdir(opt.out);
  auto bs = gevre::read_block_series_file(opt.input);
  auto spec = build_model(bs, opt.mode, opt.group_tag, opt.prior);
  write_manifest(opt.out, "fit", fit_manifest_entries(opt));

  auto draws = gevre::run_chain(spec, opt.mcmc);
  gevre::write_matrix_file((fs::path(opt.out) / "chain.csv").string(),
                           draws.parameter_names, draws.draws);
  auto summary = gevre::summarize(draws);
  write_text_file(fs::path(opt.out) / "summary.txt", posterior_table(summary));
  if (draws.draws.size() >= 100) {
    auto report = gevre::diagnostics(draws);
    write_text_file(fs::path(opt.out) / "diagnostics.json",
                    diagnostics_json(report, draws).dump(2) + "\n");
  }
}

// --------------------------------------------------------------- returns --

struct ReturnsOptions {
  std::string chain;
  std::string input;
  std::vector<double> ks{};
  std::string scope = "population";
  std::string out;
};

gevre::ChainDraws chain_from_matrix(const gevre::Matrix& m) {
  gevre::ChainDraws draws;
  draws.parameter_names = m.columns;
  draws.draws = m.rows;
  return draws;
}

void run_returns(const ReturnsOptions& opt) {
  ensure_outdir(opt.out);
  auto chain = chain_from_matrix(gevre::read_matrix_file(opt.chain));
  auto bs = gevre::read_block_series_file(opt.input);

  gevre::ReportScope scope = gevre::ReportScope::pop();
  if (opt.scope != "population") {
    if (opt.scope.rfind("group:", 0) != 0) {
      throw gevre::DataError("scope must be 'population' or 'group:<label>'");
    }
    scope = gevre::ReportScope::group(opt.scope.substr(6));
  }

  std::vector<double> ks = opt.ks.empty() ? std::vector<double>{10.0} : opt.ks;
  KV kv{{"chain", opt.chain},
        {"input", opt.input},
        {"scope", opt.scope},
        {"out", opt.out}};
  for (double k : ks) kv.emplace_back("k", fmt(k));
  write_manifest(opt.out, "returns", kv);

  for (double k : ks) {
    auto rk = gevre::return_level_posterior(chain, k, scope);
    auto report = gevre::build_report(rk, bs, k, scope);
    std::string slug = k_slug(k);
    std::ostringstream text;
    gevre::render_report_text(text, report);
    write_text_file(fs::path(opt.out) / ("report_k" + slug + ".txt"), text.str());
    write_text_file(fs::path(opt.out) / ("report_k" + slug + ".json"),
                    gevre::report_to_json(report) + "\n");
    gevre::write_matrix_file(
        (fs::path(opt.out) / ("rk_draws_k" + slug + ".csv")).string(),
        {"rk"}, [&] {
          std::vector<std::vector<double>> rows;
          rows.reserve(rk.size());
          for (double v : rk) rows.push_back({v});
          return rows;
        }());
  }
}

// -------------------------------------------------------------- simulate --

struct SimulateOptions {
  double mu = 0.0, sigma = 1.0, eps = 0.0, tau = 0.0;
  std::size_t groups = 1, per_group = 100;
  std::uint64_t seed = 1;
  std::string out;
};

void run_simulate(const SimulateOptions& opt) {
  ensure_outdir(opt.out);
  auto panel = gevre::simulate_panel(opt.mu, opt.sigma, opt.eps, opt.tau,
                                     opt.groups, opt.per_group, opt.seed);
  gevre::write_block_series_file((fs::path(opt.out) / "panel.csv").string(),
                                 panel.data);
  json truth;
  truth["mu"] = panel.truth.mu;
  truth["sigma"] = panel.truth.sigma;
  truth["eps"] = panel.truth.eps;
  truth["tau"] = panel.truth.tau;
  truth["deltas"] = panel.truth.deltas;
  truth["seed"] = panel.seed;
  write_text_file(fs::path(opt.out) / "truth.json", truth.dump(2) + "\n");
  write_manifest(opt.out, "simulate",
                 {{"mu", fmt(opt.mu)},
                  {"sigma", fmt(opt.sigma)},
                  {"eps", fmt(opt.eps)},
                  {"tau", fmt(opt.tau)},
                  {"groups", std::to_string(opt.groups)},
                  {"per-group", std::to_string(opt.per_group)},
                  {"seed", std::to_string(opt.seed)},
                  {"out", opt.out}});
}

// ------------------------------------------------------------------- mle --

struct MleOptions {
  std::string input;
  double k = 10.0;
  std::string out;
};

void run_mle(const MleOptions& opt) {
  ensure_outdir(opt.out);
  auto bs = gevre::read_block_series_file(opt.input);
  auto fit = gevre::mle_fit(bs);
  write_text_file(fs::path(opt.out) / "mle.json",
                  gevre::mle_to_json(fit, opt.k) + "\n");
  write_manifest(opt.out, "mle",
                 {{"input", opt.input},
                  {"k", fmt(opt.k)},
                  {"out", opt.out}});
}

// -------------------------------------------------------- replicate-study --

struct StudyOptions {
  std::size_t replicates = 10;
  double mu = 3.0, sigma = 1.5, eps = 0.1, tau = 0.0;
  std::size_t groups = 1, per_group = 200;
  std::string method = "mle";  // mle | mcmc
  gevre::McmcConfig mcmc;
  std::uint64_t seed = 1;
  std::string out;
};

struct ReplicateResult {
  std::size_t index;
  double mu, sigma, eps;
  bool converged;
  bool cover_mu, cover_sigma, cover_eps;
};

ReplicateResult one_replicate(const StudyOptions& opt, std::size_t index) {
  gevre::Rng master(opt.seed);
  std::uint64_t rep_seed = master.child(index).seed();
  auto panel = gevre::simulate_panel(opt.mu, opt.sigma, opt.eps, opt.tau,
                                     opt.groups, opt.per_group, rep_seed);
  ReplicateResult r{};
  r.index = index;
  if (opt.method == "mcmc") {
    auto spec = opt.tau > 0.0 ? gevre::ModelSpec::random(panel.data, "group")
                              : gevre::ModelSpec::fixed(panel.data);
    gevre::McmcConfig cfg = opt.mcmc;
    cfg.seed = rep_seed ^ 0x5eedULL;
    auto draws = gevre::run_chain(spec, cfg);
    auto summary = gevre::summarize(draws);
    r.mu = summary.at("mu").mean;
    r.sigma = summary.at("sigma").mean;
    r.eps = summary.at("eps").mean;
    r.converged = true;
    r.cover_mu = summary.at("mu").lower95 <= opt.mu && opt.mu <= summary.at("mu").upper95;
    r.cover_sigma = summary.at("sigma").lower95 <= opt.sigma &&
                    opt.sigma <= summary.at("sigma").upper95;
    r.cover_eps = summary.at("eps").lower95 <= opt.eps && opt.eps <= summary.at("eps").upper95;
  } else {
    auto fit = gevre::mle_fit(panel.data);
    r.mu = fit.params.mu;
    r.sigma = fit.params.sigma;
    r.eps = fit.params.eps;
    r.converged = fit.converged;
    r.cover_mu = fit.ci_mu.lower <= opt.mu && opt.mu <= fit.ci_mu.upper;
    r.cover_sigma = fit.ci_sigma.lower <= opt.sigma && opt.sigma <= fit.ci_sigma.upper;
    r.cover_eps = fit.ci_eps.lower <= opt.eps && opt.eps <= fit.ci_eps.upper;
  }
  return r;
}

void run_study(const StudyOptions& opt) {
  ensure_outdir(opt.out);
  // Replicates run concurrently on isolated streams; results are merged by
  // replicate index so the output is independent of scheduling.
  std::vector<std::future<ReplicateResult>> futures;
  futures.reserve(opt.replicates);
  for (std::size_t i = 0; i < opt.replicates; ++i) {
    futures.push_back(std::async(std::launch::async,
                                 [&opt, i] { return one_replicate(opt, i); }));
  }
  std::vector<ReplicateResult> results;
  results.reserve(opt.replicates);
  for (auto& f : futures) results.push_back(f.get());
  std::sort(results.begin(), results.end(),
            [](const auto& a, const auto& b) { return a.index < b.index; });

  std::ostringstream csv;
  csv << "replicate,mu,sigma,eps,converged,cover_mu,cover_sigma,cover_eps\n";
  std::size_t n_mu = 0, n_sigma = 0, n_eps = 0, n_conv = 0;
  for (const auto& r : results) {
    csv << r.index << ',' << fmt(r.mu) << ',' << fmt(r.sigma) << ',' << fmt(r.eps)
        << ',' << (r.converged ? 1 : 0) << ',' << (r.cover_mu ? 1 : 0) << ','
        << (r.cover_sigma ? 1 : 0) << ',' << (r.cover_eps ? 1 : 0) << '\n';
    n_mu += r.cover_mu;
    n_sigma += r.cover_sigma;
    n_eps += r.cover_eps;
    n_conv += r.converged;
  }
  write_text_file(fs::path(opt.out) / "study.csv", csv.str());

  json j;
  j["replicates"] = opt.replicates;
  j["method"] = opt.method;
  j["truth"] = {{"mu", opt.mu}, {"sigma", opt.sigma}, {"eps", opt.eps}, {"tau", opt.tau}};
  j["converged"] = n_conv;
  j["coverage"] = {{"mu", n_mu}, {"sigma", n_sigma}, {"eps", n_eps}};
  write_text_file(fs::path(opt.out) / "study.json", j.dump(2) + "\n");

  write_manifest(opt.out, "replicate-study",
                 {{"replicates", std::to_string(opt.replicates)},
                  {"method", opt.method},
                  {"mu", fmt(opt.mu)},
                  {"sigma", fmt(opt.sigma)},
                  {"eps", fmt(opt.eps)},
                  {"tau", fmt(opt.tau)},
                  {"groups", std::to_string(opt.groups)},
                  {"per-group", std::to_string(opt.per_group)},
                  {"seed", std::to_string(opt.seed)},
                  {"out", opt.out}});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block-maxima extreme value analysis: GEV fits with optional "
               "random location effects, MCMC inference and return levels"};
  app.require_subcommand(1);

  BlocksOptions blocks_opt;
  auto* blocks = app.add_subcommand("blocks", "Extract block maxima from a raw series CSV");
  blocks->add_option("--input", blocks_opt.input, "Raw CSV (date,value or series,date,value)")->required();
  blocks->add_option("--rule", blocks_opt.rule, "Block rule: year|month|size:N")
      ->check([](const std::string& r) {
        try {
          gevre::parse_block_rule(r);
        } catch (const std::exception& e) {
          return std::string(e.what());
        }
        return std::string();
      });
  blocks->add_option("--kind", blocks_opt.kind, "max or min")
      ->check(CLI::IsMember({"max", "min"}));
  blocks->add_flag("--percent-change", blocks_opt.percent_change,
                   "Convert levels to simple percent daily changes first");
  blocks->add_flag("--drop-partial", blocks_opt.drop_partial,
                   "Drop partial first/last blocks instead of flagging them");
  blocks->add_option("--out", blocks_opt.out, "Output directory")->required();

  FitOptions fit_opt;
  auto* fit = app.add_subcommand("fit", "Fit the GEV model by MCMC on a maxima CSV");
  fit->add_option("--config", fit_opt.config,
                  "key=value config file; flags override");
  fit->add_option("--input", fit_opt.input, "Block-maxima CSV");
  fit->add_option("--mode", fit_opt.mode, "fixed or random location")
      ->check(CLI::IsMember({"fixed", "random"}));
  fit->add_option("--group-tag", fit_opt.group_tag, "Grouping tag for random mode");
  fit->add_option("--iterations", fit_opt.mcmc.iterations, "MCMC iterations");
  fit->add_option("--burn-in", fit_opt.mcmc.burn_in, "Burn-in iterations");
  fit->add_option("--thin", fit_opt.mcmc.thin, "Thinning stride");
  fit->add_option("--seed", fit_opt.mcmc.seed, "RNG seed");
  fit->add_option("--adapt-window", fit_opt.mcmc.adapt_window, "Adaptation window");
  fit->add_option("--target-accept", fit_opt.mcmc.target_accept, "Target acceptance rate");
  fit->add_option("--prior-mu-mean", fit_opt.prior.mu_mean, "Override mu prior mean");
  fit->add_option("--prior-mu-sd", fit_opt.prior.mu_sd, "Override mu prior sd");
  fit->add_option("--prior-log-sigma-mean", fit_opt.prior.log_sigma_mean,
                  "Override log-sigma prior mean");
  fit->add_option("--prior-log-sigma-sd", fit_opt.prior.log_sigma_sd,
                  "Override log-sigma prior sd");
  fit->add_option("--prior-eps-mean", fit_opt.prior.eps_mean, "Override eps prior mean");
  fit->add_option("--prior-eps-sd", fit_opt.prior.eps_sd, "Override eps prior sd");
  fit->add_option("--prior-tau-scale", fit_opt.prior.tau_scale,
                  "Override tau half-normal scale");
  fit->add_option("--out", fit_opt.out, "Output directory");

  ReturnsOptions returns_opt;
  auto* returns = app.add_subcommand("returns", "Return-level reports from a chain CSV");
  returns->add_option("--chain", returns_opt.chain, "Chain CSV from fit")->required();
  returns->add_option("--input", returns_opt.input, "Block-maxima CSV for percentiles")->required();
  returns->add_option("--k", returns_opt.ks, "Return period k > 1 (repeatable)")
      ->check(CLI::Range(std::nextafter(1.0, 2.0), 1e12));
  returns->add_option("--scope", returns_opt.scope, "population or group:<label>")
      ->check([](const std::string& s) {
        if (s == "population" || (s.rfind("group:", 0) == 0 && s.size() > 6)) {
          return std::string();
        }
        return std::string("expected 'population' or 'group:<label>'");
      });
  returns->add_option("--out", returns_opt.out, "Output directory")->required();

  SimulateOptions sim_opt;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic GEV panel");
  simulate->add_option("--mu", sim_opt.mu, "Location");
  simulate->add_option("--sigma", sim_opt.sigma, "Scale")->check(CLI::PositiveNumber);
  simulate->add_option("--eps", sim_opt.eps, "Shape");
  simulate->add_option("--tau", sim_opt.tau, "Random-effect sd")->check(CLI::NonNegativeNumber);
  simulate->add_option("--groups", sim_opt.groups, "Number of groups");
  simulate->add_option("--per-group", sim_opt.per_group, "Observations per group");
  simulate->add_option("--seed", sim_opt.seed, "RNG seed");
  simulate->add_option("--out", sim_opt.out, "Output directory")->required();

  MleOptions mle_opt;
  auto* mle = app.add_subcommand("mle", "Maximum-likelihood fixed-location fit");
  mle->add_option("--input", mle_opt.input, "Block-maxima CSV")->required();
  mle->add_option("--k", mle_opt.k, "Return period for the delta-method CI")
      ->check(CLI::Range(std::nextafter(1.0, 2.0), 1e12));
  mle->add_option("--out", mle_opt.out, "Output directory")->required();

  StudyOptions study_opt;
  auto* study = app.add_subcommand("replicate-study",
                                   "Parameter-recovery study over simulated replicates");
  study->add_option("--replicates", study_opt.replicates, "Number of replicates");
  study->add_option("--method", study_opt.method, "mle or mcmc")
      ->check(CLI::IsMember({"mle", "mcmc"}));
  study->add_option("--mu", study_opt.mu, "True location");
  study->add_option("--sigma", study_opt.sigma, "True scale")->check(CLI::PositiveNumber);
  study->add_option("--eps", study_opt.eps, "True shape");
  study->add_option("--tau", study_opt.tau, "True random-effect sd")
      ->check(CLI::NonNegativeNumber);
  study->add_option("--groups", study_opt.groups, "Groups per replicate");
  study->add_option("--per-group", study_opt.per_group, "Observations per group");
  study->add_option("--iterations", study_opt.mcmc.iterations, "MCMC iterations");
  study->add_option("--burn-in", study_opt.mcmc.burn_in, "Burn-in iterations");
  study->add_option("--thin", study_opt.mcmc.thin, "Thinning stride");
  study->add_option("--seed", study_opt.seed, "Master seed");
  study->add_option("--out", study_opt.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
    if (*blocks) run_blocks(blocks_opt);
    if (*fit) {
      if (!fit_opt.config.empty()) {
        apply_fit_config(*fit, fit_opt);
      } else if (fit_opt.input.empty() || fit_opt.out.empty()) {
        throw CLI::RequiredError("fit needs --input and --out");
      }
      run_fit(fit_opt);
    }
    if (*returns) run_returns(returns_opt);
    if (*simulate) run_simulate(sim_opt);
    if (*mle) run_mle(mle_opt);
    if (*study) run_study(study_opt);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: E_USAGE: " << e.what() << "\n";
    return 1;
  } catch (const gevre::DataError& e) {
    std::cerr << "error: E_DATA: " << e.what() << "\n";
    return 2;
  } catch (const gevre::NumericalError& e) {
    std::cerr << "error: E_NUMERIC: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "error: E_USAGE: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: E_USAGE: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: E_NUMERIC: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
