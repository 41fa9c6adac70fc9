#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "gevre/errors.hpp"
#include "gevre/gev.hpp"
#include "gevre/model.hpp"
#include "gevre/simulate.hpp"

using namespace gevre;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

BlockSeries tiny_groups() {
  BlockSeries bs;
  bs.records.push_back({4.2, "a1", {{"g", "A"}}});
  bs.records.push_back({5.1, "a2", {{"g", "A"}}});
  bs.records.push_back({3.9, "b1", {{"g", "B"}}});
  bs.records.push_back({6.0, "b2", {{"g", "B"}}});
  bs.records.push_back({4.7, "c1", {{"g", "C"}}});
  return bs;
}

PriorSpec flat_priors() {
  PriorSpec p;
  p.mu = {0.0, 100.0};
  p.log_sigma = {0.0, 10.0};
  p.eps = {0.0, 1.0};
  p.tau_scale = 5.0;
  return p;
}
}  // namespace

TEST_CASE("fixed-mode likelihood equals sum of log_pdf terms") {
  BlockSeries bs = tiny_groups();
  auto spec = ModelSpec::fixed(bs, flat_priors());
  ParamState s;
  s.mu = 4.0;
  s.log_sigma = std::log(1.5);
  s.eps = 0.1;
  double expect = 0.0;
  for (const auto& r : bs.records) {
    expect += log_pdf({4.0, 1.5, 0.1}, r.maximum);
  }
  CHECK(log_likelihood(spec, s) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("single record at mu with unit scale gives -1") {
  BlockSeries bs;
  bs.records.push_back({4.0, "x", {}});
  bs.records.push_back({4.0 + 1e9, "pad", {}});  // keeps sd positive, far away
  auto spec = ModelSpec::fixed(bs, flat_priors());
  ParamState s;
  s.mu = 4.0;
  s.log_sigma = 0.0;
  s.eps = 0.0;
  // only the first term; subtract the pad's contribution
  double pad = log_pdf({4.0, 1.0, 0.0}, 4.0 + 1e9);
  CHECK(log_likelihood(spec, s) - pad == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("random mode with zero deltas reduces to fixed mode exactly") {
  BlockSeries bs = tiny_groups();
  auto fixed = ModelSpec::fixed(bs, flat_priors());
  auto random = ModelSpec::random(bs, "g", flat_priors());
  ParamState sf;
  sf.mu = 4.5;
  sf.log_sigma = 0.2;
  sf.eps = -0.05;
  ParamState sr = sf;
  sr.tau = 1.0;
  sr.deltas.assign(3, 0.0);
  CHECK(log_likelihood(random, sr) == log_likelihood(fixed, sf));
}

TEST_CASE("random mode sums per-record terms with shifted locations") {
  BlockSeries bs = tiny_groups();
  auto spec = ModelSpec::random(bs, "g", flat_priors());
  ParamState s;
  s.mu = 4.5;
  s.log_sigma = std::log(1.2);
  s.eps = 0.05;
  s.tau = 0.7;
  s.deltas = {0.3, -0.2, 0.9};  // A, B, C in first-appearance order
  double expect = log_pdf({4.8, 1.2, 0.05}, 4.2) + log_pdf({4.8, 1.2, 0.05}, 5.1) +
                  log_pdf({4.3, 1.2, 0.05}, 3.9) + log_pdf({4.3, 1.2, 0.05}, 6.0) +
                  log_pdf({5.4, 1.2, 0.05}, 4.7);
  CHECK(log_likelihood(spec, s) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("translation coupling leaves the likelihood unchanged") {
  BlockSeries bs = tiny_groups();
  auto spec = ModelSpec::random(bs, "g", flat_priors());
  ParamState s;
  s.mu = 4.5;
  s.log_sigma = 0.1;
  s.eps = 0.05;
  s.tau = 0.7;
  s.deltas = {0.3, -0.2, 0.9};
  double base = log_likelihood(spec, s);
  double c = 1.37;
  ParamState shifted = s;
  shifted.mu += c;
  for (double& d : shifted.deltas) d -= c;
  CHECK(log_likelihood(spec, shifted) == doctest::Approx(base).epsilon(1e-13));
}

TEST_CASE("support gating flips likelihood to -inf") {
  BlockSeries bs = tiny_groups();
  auto spec = ModelSpec::fixed(bs, flat_priors());
  ParamState s;
  s.mu = 4.5;
  s.log_sigma = std::log(0.5);
  s.eps = 0.1;
  CHECK(log_likelihood(spec, s) > -kInf);
  // eps = 2: lower endpoint mu - sigma/eps = 4.25 excludes the 3.9 record
  s.eps = 2.0;
  CHECK(log_likelihood(spec, s) == -kInf);
}

TEST_CASE("log_prior closed form at prior means") {
  BlockSeries bs = tiny_groups();
  PriorSpec p = flat_priors();
  auto spec = ModelSpec::fixed(bs, p);
  ParamState s;
  s.mu = 0.0;
  s.log_sigma = 0.0;
  s.eps = 0.0;
  double expect = -3.0 * 0.5 * std::log(2.0 * M_PI) - std::log(100.0) -
                  std::log(10.0) - std::log(1.0);
  CHECK(log_prior(spec, s) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("log_prior matches per-density oracle in random mode") {
  BlockSeries bs = tiny_groups();
  PriorSpec p = flat_priors();
  auto spec = ModelSpec::random(bs, "g", p);
  ParamState s;
  s.mu = 3.3;
  s.log_sigma = -0.4;
  s.eps = 0.21;
  s.tau = 1.7;
  s.deltas = {0.5, -1.0, 0.2};

  auto norm = [](double x, double m, double sd) {
    return -0.5 * std::log(2.0 * M_PI) - std::log(sd) -
           0.5 * (x - m) * (x - m) / (sd * sd);
  };
  double expect = norm(3.3, 0.0, 100.0) + norm(-0.4, 0.0, 10.0) +
                  norm(0.21, 0.0, 1.0) +
                  std::log(2.0) + norm(1.7, 0.0, 5.0) +  // half-normal
                  norm(0.5, 0.0, 1.7) + norm(-1.0, 0.0, 1.7) + norm(0.2, 0.0, 1.7);
  CHECK(log_prior(spec, s) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("tau at or below zero gives -inf prior in random mode") {
  BlockSeries bs = tiny_groups();
  auto spec = ModelSpec::random(bs, "g", flat_priors());
  ParamState s;
  s.tau = -0.5;
  s.deltas = {0.1, 0.0, 0.0};
  CHECK(log_prior(spec, s) == -kInf);
  s.tau = 0.0;
  CHECK(log_prior(spec, s) == -kInf);
}

TEST_CASE("log_posterior propagates -inf and adds otherwise") {
  BlockSeries bs = tiny_groups();
  auto spec = ModelSpec::fixed(bs, flat_priors());
  ParamState s;
  s.mu = 4.5;
  s.log_sigma = std::log(0.5);
  s.eps = 2.0;  // out of support
  CHECK(log_posterior(spec, s) == -kInf);
  s.eps = 0.1;
  CHECK(log_posterior(spec, s) ==
        doctest::Approx(log_likelihood(spec, s) + log_prior(spec, s)));
}

TEST_CASE("posterior differences track likelihood under diffuse priors") {
  BlockSeries bs = tiny_groups();
  PriorSpec p;
  p.mu = {0.0, 1e6};
  p.log_sigma = {0.0, 1e6};
  p.eps = {0.0, 1e3};
  auto spec = ModelSpec::fixed(bs, p);
  ParamState a, b;
  a.mu = 4.4;
  a.log_sigma = 0.3;
  a.eps = 0.05;
  b.mu = 4.9;
  b.log_sigma = 0.1;
  b.eps = -0.02;
  double d_post = log_posterior(spec, a) - log_posterior(spec, b);
  double d_lik = log_likelihood(spec, a) - log_likelihood(spec, b);
  CHECK(d_post == doctest::Approx(d_lik).epsilon(1e-6));
}

TEST_CASE("dimension mismatch raises") {
  BlockSeries bs = tiny_groups();
  auto spec = ModelSpec::random(bs, "g", flat_priors());
  ParamState s;
  s.tau = 1.0;
  s.deltas = {0.0, 0.0};  // 2 deltas, 3 groups
  CHECK_THROWS_AS(log_likelihood(spec, s), std::invalid_argument);
}

TEST_CASE("random mode requires the tag and at least two groups") {
  BlockSeries bs = tiny_groups();
  CHECK_THROWS_WITH_AS(ModelSpec::random(bs, "nope", flat_priors()),
                       doctest::Contains("nope"), DataError);
  BlockSeries one;
  one.records.push_back({1.0, "x", {{"g", "A"}}});
  one.records.push_back({2.0, "y", {{"g", "A"}}});
  CHECK_THROWS_AS(ModelSpec::random(one, "g", flat_priors()), DataError);
}

TEST_CASE("default priors scale with the data") {
  auto panel = simulate_panel(10.0, 2.0, 0.1, 1.0, 4, 50, 99);
  PriorSpec p = default_priors(panel.data, LocationMode::kRandom, "group");
  auto overall = summarize(panel.data).back();
  CHECK(p.mu.mean == doctest::Approx(overall.mean));
  CHECK(p.mu.sd == doctest::Approx(10.0 * overall.sd));
  CHECK(p.log_sigma.mean == doctest::Approx(std::log(overall.sd)));
  CHECK(p.log_sigma.sd == 10.0);
  CHECK(p.eps.sd == 1.0);
  CHECK(p.tau_scale > 0.0);
}
