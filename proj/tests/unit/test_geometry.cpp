#include <catch_amalgamated.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "random_seeds.hpp"
#include "toda/error.hpp"
#include "toda/geometry.hpp"
#include "toda/verify.hpp"

using namespace toda;

namespace {

SeedData make(int n, std::vector<double> gamma, const std::vector<std::vector<complex>>& polys, int order = 30) {
  std::vector<TruncatedSeries> g;
  for (const auto& p : polys) g.push_back(TruncatedSeries::polynomial(p, order));
  return normalize(make_seed(make_exponent_data(n, gamma), std::move(g)));
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("norms of the associated curves") {
  const auto flat = make(1, {0}, {{1}, {1}});
  CHECK(std::abs(lambda_norm_sq(flat, 0, 1.0) - 2.0) < 1e-14);
  const auto veronese = make(2, {0, 0}, {{1}, {1}, {0.5}});
  CHECK(std::abs(lambda_norm_sq(veronese, 0, 1.0) - 2.25) < 1e-14);

  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 5; ++trial) {
    const auto seed = toda::testing::random_normalized_seed(rng, 2 + trial % 2);
    for (double r : {0.05, 0.3, 0.6})
      CHECK(std::abs(lambda_norm_sq(seed, seed.n(), std::polar(r, 0.7 * trial)) - 1.0) < 1e-9);
  }
}

TEST_CASE("norms against brute-force minors") {
  const std::vector<double> betas{-1.0 / 3.0, 2.0 / 3.0, 8.0 / 3.0};
  const std::vector<std::vector<complex>> polys{{1.0, 0.2}, {0.9, complex(0, 0.1)}, {1.1, -0.1, 0.05}};
  std::vector<TruncatedSeries> g;
  for (const auto& p : polys) g.push_back(TruncatedSeries::polynomial(p, 30));
  const SeedData seed = make_seed(make_exponent_data(2, std::vector<double>{0.0, 1.0}), std::move(g));
  const CanonicalCurve curve(seed);
  for (complex z : {complex(0.3, 0.2), complex(-0.4, 0.1), complex(0.1, -0.5)})
    for (int k = 0; k <= 2; ++k)
      CHECK(rel(curve.lambda_norm_sq(k, z), toda::testing::brute_lambda_norm_sq(betas, polys, k, z)) < 1e-12);
}

TEST_CASE("documented solution values") {
  const auto flat = make(1, {0}, {{1}, {1}});
  const auto s = u_value(flat, 1, 1.0);
  CHECK(std::abs(s.u + 2.0 * std::log(2.0)) < 1e-14);
  CHECK(std::abs(s.remainder + 2.0 * std::log(2.0)) < 1e-14);
  CHECK(std::abs(s.density - 0.25) < 1e-14);
  CHECK(std::abs(u_value(flat, 1, 1e-8).remainder) < 1e-15);

  const auto veronese = make(2, {0, 0}, {{1}, {1}, {0.5}});
  const std::vector<std::vector<complex>> polys{{1}, {1}, {0.5}};
  const std::vector<double> betas{0, 1, 2};
  const double l0 = toda::testing::brute_lambda_norm_sq(betas, polys, 0, 1.0);
  const double l1 = toda::testing::brute_lambda_norm_sq(betas, polys, 1, 1.0);
  CHECK(std::abs(l0 - 2.25) < 1e-14);
  CHECK(std::abs(u_value(veronese, 1, 1.0).u - std::log(l1 / (l0 * l0))) < 1e-13);
}

TEST_CASE("evaluation domain") {
  const auto flat = make(1, {0}, {{1}, {1}});
  CHECK_THROWS_AS(u_value(flat, 1, 0.0), Error);
  CHECK_THROWS_AS(u_value(flat, 1, 1.5), Error);
}

TEST_CASE("remainders stay bounded and densities positive") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 6; ++trial) {
    const auto seed = toda::testing::random_normalized_seed(rng, 2 + trial % 2);
    const CanonicalCurve curve(seed);
    for (int k = 1; k <= seed.n(); ++k) {
      std::vector<double> r;
      for (int m = 2; m <= 7; ++m) {
        const auto sample = curve.u_value(k, std::polar(std::pow(10.0, -m), 0.4));
        CHECK(sample.density > 0.0);
        r.push_back(sample.remainder);
      }
      const double sup = std::max({std::abs(r[0]), std::abs(r[1]), std::abs(r[2])});
      CHECK(sup <= 2.0 * std::abs(r[0]) + 1e-12);
      for (std::size_t m = 2; m < r.size(); ++m) CHECK(std::abs(r[m] - r[m - 1]) <= std::abs(r[m - 1] - r[m - 2]) + 1e-13);
    }
  }
}

TEST_CASE("solutions are single-valued") {
  // Real coefficients make u symmetric under conjugation, so the two sides of
  // the cut agree exactly; in general only the same point seen from both sides does.
  const CanonicalCurve real_seed(normalize(make_seed(make_exponent_data(2, std::vector<double>{0.5, 1.5}),
                                                      {TruncatedSeries::polynomial(std::vector<complex>{1, 0.2}, 30),
                                                       TruncatedSeries::polynomial(std::vector<complex>{1, -0.1}, 30),
                                                       TruncatedSeries::polynomial(std::vector<complex>{0.7, 0.1, 0.05}, 30)})));
  for (int k = 1; k <= 2; ++k) {
    const auto a = real_seed.u_value(k, std::polar(0.5, std::numbers::pi - 1e-6));
    const auto b = real_seed.u_value(k, std::polar(0.5, -std::numbers::pi + 1e-6));
    CHECK(std::abs(a.u - b.u) < 1e-10);
  }
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 6; ++trial) {
    const CanonicalCurve curve(toda::testing::random_normalized_seed(rng, 2 + trial % 2));
    for (int k = 1; k <= curve.n(); ++k) {
      CHECK(std::abs(curve.u_value(k, {-0.5, 0.0}).u - curve.u_value(k, {-0.5, -0.0}).u) < 1e-10);
      const auto a = curve.u_value(k, std::polar(0.5, std::numbers::pi - 1e-6));
      const auto b = curve.u_value(k, std::polar(0.5, -std::numbers::pi + 1e-6));
      CHECK(std::abs(a.u - b.u) < 1e-5);  // two points 1e-6 apart
    }
  }
}

TEST_CASE("normalized chart") {
  const auto constants = make(1, {0.5}, {{2}, {3}});
  const auto chart = normalized_chart(constants);
  CHECK(chart.tilde_g.empty());
  const complex c = std::pow(constants.g[1][0] / constants.g[0][0], 1.0 / 1.5);
  CHECK(std::abs(chart.forward[1] - c) < 1e-14);
  for (int k = 2; k <= chart.reversion.order(); ++k) CHECK(std::abs(chart.reversion[k]) < 1e-14);

  // A perturbed n = 2 seed: the first two components become pure powers of xi.
  const auto seed = make(2, {0, 0}, {{1}, {1, 0.2}, {0.5, -0.1, 0.02}});
  const auto ch = normalized_chart(seed);
  REQUIRE(ch.tilde_g.size() == 1);
  CHECK(std::abs(ch.tilde_g[0][0]) > 0.1);
  const auto& beta = seed.exponents.beta;
  for (int p = 0; p < 10; ++p) {
    const complex xi = std::polar(ch.validity_radius * (p + 1) / 11.0, -2.5 + 0.5 * p);
    const complex z = ch.z_of(xi);
    const complex ratio = branched_power(z, beta[1] - beta[0]) * seed.g[1](z) / seed.g[0](z);
    CHECK(std::abs(ratio - branched_power(xi, beta[1] - beta[0])) < 1e-10 * std::abs(ratio));
  }
  CHECK_THROWS_AS(normalized_chart(make(2, {0, 0}, {{1}, {0, 1}, {1}})), Error);
}

TEST_CASE("chart densities") {
  for (double gamma : {0.5, 1.0, 2.0, 5.0}) {
    const auto seed = make(1, {gamma}, {{1}, {1}});
    const auto chart = normalized_chart(seed);
    for (int p = 0; p < 20; ++p) {
      const complex xi = std::polar(0.04 + 0.045 * p, 0.3 * p - 3.0);
      const double r = std::abs(xi);
      const double expected = std::pow(gamma + 1, 2) * std::pow(r, 2 * gamma) / std::pow(1 + std::pow(r, 2 * gamma + 2), 2);
      CHECK(rel(xi_metric_density(chart, seed.exponents, xi), expected) < 1e-10);
    }
  }
  const auto flat = make(1, {0}, {{1}, {1}});
  CHECK(std::abs(xi_metric_density(normalized_chart(flat), flat.exponents, 1.0) - 0.25) < 1e-14);

  const auto veronese = make(2, {0, 0}, {{1}, {1}, {0.5}});
  const auto chart = normalized_chart(veronese);
  const complex xi = 0.5;
  const complex z = chart.z_of(xi);
  const double transported = std::norm(chart.dz_dxi(xi)) * u_value(veronese, 1, z).density;
  CHECK(rel(xi_metric_density(chart, veronese.exponents, xi), transported) < 1e-8);

  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 4; ++trial) {
    const CanonicalCurve curve(toda::testing::random_normalized_seed(rng, 2 + trial % 2));
    const auto entry = chart_invariance(curve, GridSpec{});
    CHECK(entry.status == CheckStatus::Pass);
    CHECK(entry.max_residual < 1e-8);
  }
}
