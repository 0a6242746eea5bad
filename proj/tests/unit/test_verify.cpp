#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "lmopt/verify.hpp"

using namespace lmopt;
using testing::for_all;
using testing::Gen;

namespace {

// f(x) = scale * ||x||^2 / 2 + offset, one "sample".
class Quadratic final : public Problem {
 public:
  Quadratic(std::size_t d, double scale, double offset = 0.0) : d_(d), scale_(scale), offset_(offset) {}
  std::size_t dim() const override { return d_; }
  std::size_t num_samples() const override { return 1; }
  double value_grad(std::span<const double> x, const MiniBatch&, std::span<double> g) const override {
    for (std::size_t i = 0; i < d_; ++i) g[i] = scale_ * x[i];
    return 0.5 * scale_ * dot(x, x) + offset_;
  }
  void hvp(std::span<const double>, std::span<const double> v, const MiniBatch&, std::span<double> out) const override {
    for (std::size_t i = 0; i < d_; ++i) out[i] = scale_ * v[i];
  }

 private:
  std::size_t d_;
  double scale_, offset_;
};

// f(x) = exp(x) in one dimension: |f''| = |f'|.
class Exp1D final : public Problem {
 public:
  std::size_t dim() const override { return 1; }
  std::size_t num_samples() const override { return 1; }
  double value_grad(std::span<const double> x, const MiniBatch&, std::span<double> g) const override {
    g[0] = std::exp(x[0]);
    return g[0];
  }
  void hvp(std::span<const double> x, std::span<const double> v, const MiniBatch&, std::span<double> out) const override {
    out[0] = std::exp(x[0]) * v[0];
  }
};

const MiniBatch kOne{{0}};

}  // namespace

TEST_CASE("finite differences on analytic functions") {
  for_all(30, 71, [](Gen& g) {
    const std::size_t d = g.size(1, 10);
    const Quadratic q(d, 1.0);
    const ParamVector x = g.vec(d, 3.0), v = g.vec(d);
    CHECK(rel_error(fd_gradient(q, x, kOne), x) < 1e-9);
    CHECK(rel_error(fd_hvp(q, x, v, kOne), v) < 1e-9);
    CHECK(fd_hvp(q, x, ParamVector(d, 0.0), kOne) == ParamVector(d, 0.0));
    const Quadratic flat(d, 0.0, 4.2);
    CHECK(norm2(fd_gradient(flat, x, kOne)) == 0.0);
  });
}

TEST_CASE("smoothness probe") {
  const Quadratic q(3, 1.0);
  Gen g(72);
  std::vector<ParamVector> traj;
  for (int i = 0; i < 20; ++i) traj.push_back(g.vec(3));
  traj.push_back(traj.back());  // duplicate pair is skipped
  const auto pts = smoothness_probe(q, NormSpec{}, traj);
  CHECK(pts.size() == 19);
  for (const auto& p : pts) CHECK(p.curvature == doctest::Approx(1.0).epsilon(1e-12));
  const auto fit = fit_affine(pts);
  CHECK(std::abs(fit.L1) < 1e-10);
  CHECK(fit.L0 == doctest::Approx(1.0).epsilon(1e-10));

  CHECK(smoothness_probe(q, NormSpec{}, std::vector<ParamVector>{{1, 2, 3}}).empty());
  CHECK(smoothness_probe(q, NormSpec{}, std::vector<ParamVector>{}).empty());
  CHECK(fit_affine(std::vector<ProbePoint>{}).L1 == 0.0);
}

TEST_CASE("smoothness probe recovers L1 = 1 for exp") {
  const Exp1D f;
  std::vector<ParamVector> grid;
  for (int i = 0; i <= 400; ++i) grid.push_back({-4.0 + 8.0 * i / 400.0});
  const auto fit = fit_affine(smoothness_probe(f, NormSpec{}, grid));
  // The secant slope over a step h is exp(x) (e^h - 1)/h against max gradient exp(x + h).
  const double h = 8.0 / 400.0;
  CHECK(fit.L1 == doctest::Approx((std::exp(h) - 1.0) / h / std::exp(h)).epsilon(1e-6));
  CHECK(std::abs(fit.L1 - 1.0) < 0.02);
  CHECK(std::abs(fit.L0) < 1e-6);
}

TEST_CASE("lmo sampling check") {
  Rng rng(73);
  for_all(60, 74, [&](Gen& g) {
    const ParamVector m = g.vec(g.size(1, 12));
    for (NormKind k : {NormKind::Euclidean, NormKind::LInf, NormKind::L1}) {
      const auto r = lmo_bruteforce_check(NormSpec{k}, m, g.log_uniform(1e-2, 1e2), 500, rng);
      CHECK(r.ok);
      CHECK(r.worst_gap <= 1e-10);
    }
  });
}

TEST_CASE("equivalence suite") {
  const auto rep = equivalence_suite();
  CHECK(rep.passed());
  std::size_t expected_diff = 0;
  for (const auto& c : rep.checks) {
    CAPTURE(c.name);
    if (c.name.find("anchor=old") != std::string::npos) {
      CHECK(c.status == CheckStatus::ExpectedDifferent);
      ++expected_diff;
    } else {
      CHECK(c.status == CheckStatus::Pass);
      CHECK(c.max_abs_diff == 0.0);
      CHECK_FALSE(c.first_diverging_k);
    }
  }
  CHECK(expected_diff == 2);
  CHECK(rep.to_json().at("passed").get<bool>());
}

TEST_CASE("corrupted beta wiring is caught at k = 0") {
  EquivalenceOptions opt;
  opt.mutate_beta = true;
  const auto rep = equivalence_suite(opt);
  CHECK_FALSE(rep.passed());
  std::size_t failed = 0;
  for (const auto& c : rep.checks) {
    if (c.status != CheckStatus::Fail) continue;
    ++failed;
    REQUIRE(c.first_diverging_k);
    CHECK(*c.first_diverging_k == 0);
  }
  CHECK(failed >= 8);
}

TEST_CASE("verify suite report") {
  VerifyOptions opt;
  opt.derivative_points = 5;
  opt.lmo_triples = 50;
  opt.lmo_samples = 100;
  const auto j = run_verify_suite(opt);
  CHECK(j.at("passed").get<bool>());
  CHECK(j.at("derivatives").at("passed").get<bool>());
  CHECK(j.at("lmo").at("failures").get<int>() == 0);
  CHECK(j.at("equivalence").at("passed").get<bool>());
}
