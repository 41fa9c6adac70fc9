#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "gevre/block_maxima.hpp"
#include "gevre/csv.hpp"
#include "gevre/errors.hpp"
#include "gevre/gev.hpp"
#include "gevre/mcmc.hpp"
#include "gevre/mle.hpp"
#include "gevre/model.hpp"
#include "gevre/report.hpp"
#include "gevre/simulate.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

gevre::BlockSeries block_series_from_lists(
    const std::vector<double>& maxima,
    const std::vector<std::string>& block_labels,
    const std::map<std::string, std::vector<std::string>>& tags) {
  if (!block_labels.empty() && block_labels.size() != maxima.size()) {
    throw std::invalid_argument("block_labels length must match maxima");
  }
  gevre::BlockSeries bs;
  for (std::size_t i = 0; i < maxima.size(); ++i) {
    gevre::BlockRecord rec;
    rec.maximum = maxima[i];
    rec.block_label =
        block_labels.empty() ? "b" + std::to_string(i + 1) : block_labels[i];
    for (const auto& [name, values] : tags) {
      if (values.size() != maxima.size()) {
        throw std::invalid_argument("tag '" + name + "' length mismatch");
      }
      rec.group_tags[name] = values[i];
    }
    bs.records.push_back(std::move(rec));
  }
  return bs;
}

gevre::RawSeries raw_series_from_lists(const std::vector<std::string>& dates,
                                       const std::vector<double>& values,
                                       const std::string& label) {
  if (dates.size() != values.size()) {
    throw std::invalid_argument("dates and values must have equal length");
  }
  gevre::RawSeries s{label, {}};
  for (std::size_t i = 0; i < dates.size(); ++i) {
    s.observations.push_back({gevre::parse_date(dates[i]), values[i]});
  }
  return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Block-maxima extreme value analysis: GEV distribution math, "
            "hierarchical random-location models, MCMC fitting and "
            "return-level reports";

  py::register_exception<gevre::DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<gevre::NumericalError>(m, "NumericalError",
                                                PyExc_RuntimeError);

  py::class_<gevre::GevParams>(m, "GevParams")
      .def(py::init<double, double, double>(), "mu"_a = 0.0, "sigma"_a = 1.0,
           "eps"_a = 0.0)
      .def_readwrite("mu", &gevre::GevParams::mu)
      .def_readwrite("sigma", &gevre::GevParams::sigma)
      .def_readwrite("eps", &gevre::GevParams::eps)
      .def("__repr__", [](const gevre::GevParams& p) {
        std::ostringstream os;
        os << "GevParams(mu=" << p.mu << ", sigma=" << p.sigma
           << ", eps=" << p.eps << ")";
        return os.str();
      });

  m.def("cdf", &gevre::cdf, "params"_a, "x"_a);
  m.def("log_pdf", &gevre::log_pdf, "params"_a, "x"_a);
  m.def("quantile", &gevre::quantile, "params"_a, "p"_a);
  m.def("return_level", &gevre::return_level, "params"_a, "k"_a);
  m.def("gev_mean", &gevre::mean, "params"_a);
  m.def(
      "support",
      [](const gevre::GevParams& p) {
        auto s = gevre::support(p);
        return py::make_tuple(s.lower, s.upper);
      },
      "params"_a);
  m.def(
      "sample",
      [](const gevre::GevParams& p, std::size_t n, std::uint64_t seed) {
        gevre::Rng rng(seed);
        return gevre::sample(p, n, rng);
      },
      "params"_a, "n"_a, "seed"_a);

  py::class_<gevre::BlockRecord>(m, "BlockRecord")
      .def_readonly("maximum", &gevre::BlockRecord::maximum)
      .def_readonly("block_label", &gevre::BlockRecord::block_label)
      .def_readonly("group_tags", &gevre::BlockRecord::group_tags);

  py::class_<gevre::BlockSeries>(m, "BlockSeries")
      .def_readonly("records", &gevre::BlockSeries::records)
      .def("__len__", [](const gevre::BlockSeries& bs) { return bs.records.size(); })
      .def("maxima", [](const gevre::BlockSeries& bs) { return maxima_values(bs); });

  m.def("block_series", &block_series_from_lists, "maxima"_a,
        "block_labels"_a = std::vector<std::string>{},
        "tags"_a = std::map<std::string, std::vector<std::string>>{},
        "Build a BlockSeries from parallel lists");

  m.def(
      "extract_block_maxima",
      [](const std::vector<std::string>& dates, const std::vector<double>& values,
         const std::string& rule, const std::string& kind,
         const std::string& label, bool drop_partial) {
        auto series = raw_series_from_lists(dates, values, label);
        gevre::ExtractOptions opts;
        opts.drop_partial = drop_partial;
        return gevre::extract_block_maxima(
            series, gevre::parse_block_rule(rule),
            kind == "min" ? gevre::ExtremumKind::kMin : gevre::ExtremumKind::kMax,
            opts);
      },
      "dates"_a, "values"_a, "rule"_a = "year", "kind"_a = "max",
      "label"_a = "", "drop_partial"_a = false);

  m.def("read_block_series", &gevre::read_block_series_file, "path"_a);
  m.def("empirical_percentile", &gevre::empirical_percentile, "value"_a, "bs"_a);
  m.def(
      "summarize_blocks",
      [](const gevre::BlockSeries& bs, const std::string& tag) {
        py::list out;
        for (const auto& g : gevre::summarize(bs, tag)) {
          out.append(py::dict("group"_a = g.group, "count"_a = g.count,
                              "mean"_a = g.mean, "sd"_a = g.sd));
        }
        return out;
      },
      "bs"_a, "tag"_a = "");

  py::class_<gevre::McmcConfig>(m, "McmcConfig")
      .def(py::init<>())
      .def_readwrite("iterations", &gevre::McmcConfig::iterations)
      .def_readwrite("burn_in", &gevre::McmcConfig::burn_in)
      .def_readwrite("thin", &gevre::McmcConfig::thin)
      .def_readwrite("seed", &gevre::McmcConfig::seed)
      .def_readwrite("adapt_window", &gevre::McmcConfig::adapt_window)
      .def_readwrite("target_accept", &gevre::McmcConfig::target_accept)
      .def_readwrite("prior_only", &gevre::McmcConfig::prior_only);

  py::class_<gevre::ChainDraws>(m, "ChainDraws")
      .def_readonly("parameter_names", &gevre::ChainDraws::parameter_names)
      .def_readonly("draws", &gevre::ChainDraws::draws)
      .def_readonly("acceptance_rates", &gevre::ChainDraws::acceptance_rates)
      .def_readonly("block_names", &gevre::ChainDraws::block_names)
      .def_readonly("seed_used", &gevre::ChainDraws::seed_used)
      .def("__len__", [](const gevre::ChainDraws& d) { return d.draws.size(); })
      .def("column", [](const gevre::ChainDraws& d, const std::string& name) {
        return d.column_values(d.column(name));
      });

  m.def(
      "fit_mcmc",
      [](const gevre::BlockSeries& bs, const std::string& mode,
         const std::string& group_tag, const gevre::McmcConfig& cfg) {
        auto spec = mode == "random" ? gevre::ModelSpec::random(bs, group_tag)
                                     : gevre::ModelSpec::fixed(bs);
        return gevre::run_chain(spec, cfg);
      },
      "bs"_a, "mode"_a = "fixed", "group_tag"_a = "",
      "config"_a = gevre::McmcConfig{});

  m.def("summarize_chain", [](const gevre::ChainDraws& draws) {
    py::dict out;
    for (const auto& p : gevre::summarize(draws).parameters) {
      out[p.name.c_str()] =
          py::dict("mean"_a = p.mean, "sd"_a = p.sd, "lower95"_a = p.lower95,
                   "upper95"_a = p.upper95, "ess"_a = p.ess);
    }
    return out;
  });

  m.def(
      "return_level_posterior",
      [](const gevre::ChainDraws& draws, double k, const std::string& group) {
        auto scope = group.empty() ? gevre::ReportScope::pop()
                                   : gevre::ReportScope::group(group);
        return gevre::return_level_posterior(draws, k, scope);
      },
      "draws"_a, "k"_a, "group"_a = "");

  py::class_<gevre::ReturnLevelReport>(m, "ReturnLevelReport")
      .def_readonly("k", &gevre::ReturnLevelReport::k)
      .def_readonly("estimate", &gevre::ReturnLevelReport::estimate)
      .def_readonly("sd", &gevre::ReturnLevelReport::sd)
      .def_readonly("lower95", &gevre::ReturnLevelReport::lower95)
      .def_readonly("upper95", &gevre::ReturnLevelReport::upper95)
      .def_readonly("percentile_lower", &gevre::ReturnLevelReport::percentile_lower)
      .def_readonly("percentile_estimate",
                    &gevre::ReturnLevelReport::percentile_estimate)
      .def_readonly("percentile_upper", &gevre::ReturnLevelReport::percentile_upper)
      .def_readonly("scope", &gevre::ReturnLevelReport::scope)
      .def_readonly("extrapolation_flag",
                    &gevre::ReturnLevelReport::extrapolation_flag)
      .def("to_json", &gevre::report_to_json);

  m.def(
      "build_report",
      [](const std::vector<double>& rk, const gevre::BlockSeries& bs, double k,
         const std::string& group) {
        auto scope = group.empty() ? gevre::ReportScope::pop()
                                   : gevre::ReportScope::group(group);
        return gevre::build_report(rk, bs, k, scope);
      },
      "rk_draws"_a, "bs"_a, "k"_a, "group"_a = "");

  m.def(
      "coverage_check",
      [](const gevre::ReturnLevelReport& report, const gevre::BlockSeries& bs,
         double target_percentile) {
        auto c = gevre::coverage_check(report, bs, target_percentile);
        return py::dict("covered"_a = c.covered,
                        "target_value"_a = c.target_value,
                        "narrative"_a = c.narrative);
      },
      "report"_a, "bs"_a, "target_percentile"_a);

  py::class_<gevre::MleFit>(m, "MleFit")
      .def_readonly("params", &gevre::MleFit::params)
      .def_readonly("log_likelihood_at_max", &gevre::MleFit::log_likelihood_at_max)
      .def_readonly("converged", &gevre::MleFit::converged)
      .def_property_readonly("ci_mu",
                             [](const gevre::MleFit& f) {
                               return py::make_tuple(f.ci_mu.lower, f.ci_mu.upper);
                             })
      .def_property_readonly("ci_sigma",
                             [](const gevre::MleFit& f) {
                               return py::make_tuple(f.ci_sigma.lower,
                                                     f.ci_sigma.upper);
                             })
      .def_property_readonly("ci_eps",
                             [](const gevre::MleFit& f) {
                               return py::make_tuple(f.ci_eps.lower, f.ci_eps.upper);
                             })
      .def("to_json", &gevre::mle_to_json, "k_for_ci"_a = 10.0);

  m.def("mle_fit", &gevre::mle_fit, "bs"_a);
  m.def(
      "return_level_ci",
      [](const gevre::MleFit& fit, double k) {
        auto rk = gevre::return_level_ci(fit, k);
        return py::dict("point"_a = rk.point, "lower"_a = rk.ci.lower,
                        "upper"_a = rk.ci.upper);
      },
      "fit"_a, "k"_a = 10.0);

  m.def(
      "simulate_panel",
      [](double mu, double sigma, double eps, double tau, std::size_t groups,
         std::size_t per_group, std::uint64_t seed) {
        auto panel = gevre::simulate_panel(mu, sigma, eps, tau, groups,
                                           per_group, seed);
        return py::dict("data"_a = panel.data,
                        "deltas"_a = panel.truth.deltas, "seed"_a = panel.seed);
      },
      "mu"_a, "sigma"_a, "eps"_a, "tau"_a, "groups"_a, "per_group"_a, "seed"_a);
}
