#include <catch_amalgamated.hpp>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "random_seeds.hpp"
#include "toda/error.hpp"
#include "toda/verify.hpp"

using namespace toda;

namespace {

CanonicalCurve curve(int n, std::vector<double> gamma, const std::vector<std::vector<complex>>& polys, int order = 30) {
  std::vector<TruncatedSeries> g;
  for (const auto& p : polys) g.push_back(TruncatedSeries::polynomial(p, order));
  return CanonicalCurve(normalize(make_seed(make_exponent_data(n, gamma), std::move(g))));
}

CanonicalCurve liouville() { return curve(1, {0}, {{1}, {1}}); }
CanonicalCurve veronese() { return curve(2, {0, 0}, {{1}, {1}, {0.5}}); }

double extrapolated(const CheckEntry& e, int k) {
  return e.metrics["metrics"][static_cast<std::size_t>(k - 1)]["extrapolated"].get<double>();
}

}  // namespace

TEST_CASE("grid invariants") {
  CHECK_NOTHROW(check_grid(GridSpec{}));
  CHECK_THROWS_AS(check_grid(GridSpec{0.002, 0.6, 5, 16, 1e-3}), Error);
  CHECK_THROWS_AS(check_grid(GridSpec{0.2, 0.6, 5, 16, 0.05}), Error);
  CHECK_THROWS_AS(check_grid(GridSpec{0.6, 0.2, 5, 16, 1e-3}), Error);
  CHECK_THROWS_AS(check_grid(GridSpec{}, 0.55), Error);
  const auto points = grid_points(GridSpec{0.2, 0.6, 3, 4, 1e-3});
  CHECK(points.size() == 12);
  for (const auto& z : points) CHECK(std::abs(std::arg(z)) < std::numbers::pi);
}

TEST_CASE("parallel_for visits every index once and rethrows the lowest failure") {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
  for (const auto& h : hits) CHECK(h.load() == 1);
  try {
    parallel_for(100, 4, [](std::size_t i) {
      if (i == 37 || i == 80) throw std::runtime_error(std::to_string(i));
    });
    FAIL("expected a throw");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "37");
  }
}

TEST_CASE("finite-difference checks on closed-form seeds") {
  const auto pde = pde_residual(liouville(), GridSpec{});
  CHECK(pde.status == CheckStatus::Pass);
  CHECK(std::abs(pde.metrics["order"].get<double>() - 2.0) < 0.1);
  CHECK(pde.max_residual <= 1.0 * 1e-6);

  const auto plucker = plucker_residual(liouville(), GridSpec{});
  CHECK(plucker.status == CheckStatus::Pass);
  CHECK(std::abs(plucker.metrics["order"].get<double>() - 2.0) < 0.1);

  CHECK(pde_residual(veronese(), GridSpec{}).max_residual <= 1e-6);
  CHECK(plucker_residual(veronese(), GridSpec{}).max_residual <= 1e-6);

  GridSpec empty;
  empty.n_r = 0;
  CHECK(pde_residual(liouville(), empty).status == CheckStatus::Skipped);
  CHECK(plucker_residual(liouville(), empty).status == CheckStatus::Skipped);
}

TEST_CASE("finite-difference error on random seeds is pure truncation") {
  // The h^2 term dominates; after Richardson elimination only a small defect is left.
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 4; ++trial) {
    const CanonicalCurve c(toda::testing::random_normalized_seed(rng, 2 + trial % 2));
    for (const auto& e : {pde_residual(c, GridSpec{}), plucker_residual(c, GridSpec{})}) {
      CHECK(std::abs(e.metrics["order"].get<double>() - 2.0) <= 0.2);
      CHECK(e.metrics["richardson_residual"].get<double>() <= 1e-6);
      CHECK(e.metrics["richardson_residual"].get<double>() < 0.1 * e.max_residual);
    }
  }
}

TEST_CASE("cone angles") {
  const auto flat = cone_angle(liouville());
  CHECK(flat.status == CheckStatus::Pass);
  CHECK(std::abs(extrapolated(flat, 1) - 2 * std::numbers::pi) < 1e-8);

  const auto bryant = cone_angle(curve(1, {1}, {{1}, {1}}));
  CHECK(bryant.status == CheckStatus::Pass);
  CHECK(std::abs(extrapolated(bryant, 1) - 4 * std::numbers::pi) <= 0.01 * 4 * std::numbers::pi);

  const auto second = cone_angle(curve(2, {0, 1}, {{1, 0.1}, {1, complex(0, 0.2)}, {0.7, -0.1, 0.05}}));
  CHECK(second.status == CheckStatus::Pass);
  CHECK(std::abs(extrapolated(second, 2) - 4 * std::numbers::pi) <= 0.01 * 4 * std::numbers::pi);

  const auto smooth = cone_angle(curve(3, {0, 0, 0}, {{1, 0.2}, {1}, {0.5, 0.1}, {0.3}}));
  CHECK(smooth.status == CheckStatus::Pass);
  for (int k = 1; k <= 3; ++k) CHECK(std::abs(extrapolated(smooth, k) - 2 * std::numbers::pi) <= 0.01 * 2 * std::numbers::pi);
}

TEST_CASE("energy") {
  EnergyOptions unit_disk;
  unit_disk.radius = 1.0;
  const auto est = energy_estimate(liouville(), 1, unit_disk);
  CHECK(std::abs(est.extrapolated - std::numbers::pi / 2) <= 1e-6);
  CHECK(energy(liouville(), unit_disk).status == CheckStatus::Pass);

  const auto singular = curve(1, {-0.5}, {{1}, {1}});
  const auto s = energy_estimate(singular, 1);
  CHECK(std::abs(std::log10(s.cauchy_ratio) + 1.0) <= 0.3);
  CHECK(energy(singular).status == CheckStatus::Pass);

  double previous = 0.0;
  for (double r : {0.1, 0.2, 0.4, 0.6}) {
    const double v = annulus_energy(singular, 1, 1e-3, r);
    CHECK(v > previous);
    previous = v;
  }
}

TEST_CASE("branch consistency") {
  GridSpec ring{0.3, 0.3, 1, 16, 1e-3};
  CHECK(branch_consistency(liouville(), ring).max_residual <= 1e-14);
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 3; ++trial) {
    const CanonicalCurve c(toda::testing::random_normalized_seed(rng, 3));
    const auto e = branch_consistency(c, ring);
    CHECK(e.status == CheckStatus::Pass);
    CHECK(e.max_residual <= 1e-10);
  }
}

TEST_CASE("reports are independent of the thread count") {
  const auto c = veronese();
  FdOptions one;
  FdOptions four;
  four.threads = 4;
  CHECK(pde_residual(c, GridSpec{}, one).metrics == pde_residual(c, GridSpec{}, four).metrics);
  CHECK(branch_consistency(c, GridSpec{}, {1e-10, 1}).metrics == branch_consistency(c, GridSpec{}, {1e-10, 3}).metrics);
}
