#include "toda/wronskian.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "toda/error.hpp"

namespace toda {

namespace {

std::size_t sz(int k) { return static_cast<std::size_t>(k); }

double falling_factorial(double x, int m) {
  double p = 1.0;
  for (int i = 0; i < m; ++i) p *= x - i;
  return p;
}

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

int min_order(std::span<const TruncatedSeries> gs) {
  int order = gs.front().order();
  for (const auto& g : gs) order = std::min(order, g.order());
  return order;
}

// Laplace expansion row by row: dp[mask] is the minor on the first
// popcount(mask) rows and the columns in mask.
std::vector<std::optional<TruncatedSeries>> minor_table(const std::vector<std::vector<TruncatedSeries>>& rows,
                                                        int row_count) {
  const int cols = static_cast<int>(rows.front().size());
  std::vector<std::optional<TruncatedSeries>> dp(std::size_t{1} << cols);
  int order = rows.front().front().order();
  for (const auto& row : rows)
    for (const auto& e : row) order = std::min(order, e.order());
  dp[0] = TruncatedSeries::constant(1.0, order);
  for (unsigned mask = 0; mask < dp.size(); ++mask) {
    if (!dp[mask]) continue;
    const int r = std::popcount(mask);
    if (r >= row_count) continue;
    for (int c = 0; c < cols; ++c) {
      if (mask & (1u << c)) continue;
      const int above = std::popcount(mask >> (c + 1));
      TruncatedSeries term = rows[sz(r)][sz(c)] * *dp[mask];
      if (above % 2) term = -term;
      auto& slot = dp[mask | (1u << c)];
      if (slot)
        *slot += term;
      else
        slot = std::move(term);
    }
  }
  return dp;
}

std::vector<std::vector<TruncatedSeries>> wronskian_rows(std::span<const double> betas,
                                                         std::span<const TruncatedSeries> gs, int levels) {
  std::vector<std::vector<TruncatedSeries>> rows(sz(levels));
  for (int l = 0; l < levels; ++l)
    for (std::size_t i = 0; i < gs.size(); ++i) rows[sz(l)].push_back(euler_row(betas[i], gs[i], l));
  return rows;
}

void check_shapes(std::span<const double> betas, std::span<const TruncatedSeries> gs) {
  if (gs.empty() || betas.size() != gs.size())
    raise(ErrorKind::ArityMismatch, "need one exponent per seed series");
}

}  // namespace

SeedData make_seed(ExponentData exponents, std::vector<TruncatedSeries> g, double validity_cap, double tail_tol) {
  const int n = exponents.n;
  if (static_cast<int>(g.size()) != n + 1)
    raise(ErrorKind::ArityMismatch,
          "rank " + std::to_string(n) + " needs " + std::to_string(n + 1) + " seeds, got " + std::to_string(g.size()));
  SeedData seed;
  seed.exponents = std::move(exponents);
  seed.g = std::move(g);
  seed.order = min_order(seed.g);
  double radius = validity_cap;
  for (const auto& s : seed.g) radius = std::min(radius, tail_radius(s, tail_tol));
  seed.validity_radius = radius;
  return seed;
}

TruncatedSeries euler_row(double beta, const TruncatedSeries& g, int l) {
  if (g.order() < l) raise(ErrorKind::InsufficientOrder, "row " + std::to_string(l) + " needs order >= " + std::to_string(l));
  const int order = g.order() - l;
  TruncatedSeries row = TruncatedSeries::constant(0.0, order);
  TruncatedSeries deriv = g;
  for (int j = 0; j <= l; ++j) {
    if (j > 0) deriv = derivative(deriv);
    const double c = binomial(l, j) * falling_factorial(beta, l - j);
    if (c != 0.0) row += c * (TruncatedSeries::monomial(1.0, j, order) * deriv);
  }
  return row;
}

TruncatedSeries series_determinant(const std::vector<std::vector<TruncatedSeries>>& rows) {
  const int n = static_cast<int>(rows.size());
  if (n == 0) raise(ErrorKind::ArityMismatch, "empty determinant");
  for (const auto& row : rows)
    if (static_cast<int>(row.size()) != n) raise(ErrorKind::ArityMismatch, "determinant of a non-square matrix");
  if (n > 20) raise(ErrorKind::ArityMismatch, "determinant too large for subset expansion");
  auto dp = minor_table(rows, n);
  return *dp.back();
}

TruncatedSeries reduced_wronskian(std::span<const double> betas, std::span<const TruncatedSeries> gs) {
  check_shapes(betas, gs);
  const int k = static_cast<int>(gs.size()) - 1;
  if (min_order(gs) < k)
    raise(ErrorKind::InsufficientOrder, "G_" + std::to_string(k) + " needs order >= " + std::to_string(k));
  return series_determinant(wronskian_rows(betas, gs, k + 1));
}

complex wronskian_at_zero(std::span<const double> betas, std::span<const TruncatedSeries> gs) {
  check_shapes(betas, gs);
  complex value = 1.0;
  for (const auto& g : gs) value *= g[0];
  for (std::size_t i = 0; i < betas.size(); ++i)
    for (std::size_t j = i + 1; j < betas.size(); ++j) value *= betas[j] - betas[i];
  return value;
}

std::vector<TruncatedSeries> all_reduced_minors(std::span<const double> betas, std::span<const TruncatedSeries> gs) {
  check_shapes(betas, gs);
  const int n = static_cast<int>(gs.size()) - 1;
  if (min_order(gs) < n) raise(ErrorKind::InsufficientOrder, "all minors need order >= " + std::to_string(n));
  auto dp = minor_table(wronskian_rows(betas, gs, n + 1), n + 1);
  std::vector<TruncatedSeries> out(dp.size());
  for (std::size_t mask = 1; mask < dp.size(); ++mask) {
    // Each level-k minor only uses rows 0..k, so restore its own validity.
    const int k = std::popcount(mask) - 1;
    out[mask] = dp[mask]->truncated(min_order(gs) - k);
  }
  return out;
}

double normalization_defect(const SeedData& seed) {
  TruncatedSeries g = reduced_wronskian(seed.exponents.beta, seed.g);
  g -= TruncatedSeries::constant(1.0, g.order());
  return g.max_abs();
}

SeedData normalize(const SeedData& seed, double tol) {
  const int n = seed.n();
  const TruncatedSeries top = reduced_wronskian(seed.exponents.beta, seed.g);
  const double scale = std::max(1.0, top.max_abs());
  if (std::abs(top[0]) <= 1e-14 * scale)
    raise(ErrorKind::DegenerateSeed, "G_n(0) = 0: the curve is ramified at the origin");

  TruncatedSeries defect = top;
  defect -= TruncatedSeries::constant(1.0, top.order());
  if (defect.max_abs() <= tol) {
    SeedData out = seed;
    out.normalized = true;
    return out;
  }

  const TruncatedSeries factor = power(top, -1.0 / (n + 1));
  SeedData out = seed;
  for (auto& g : out.g) {
    g = g * factor;
    out.validity_radius = std::min(out.validity_radius, tail_radius(g, kDefaultTailTolerance));
  }
  out.order = min_order(out.g);
  out.normalized = true;
  out.normalization_root = 1.0 / factor[0];
  return out;
}

std::vector<LambdaExpansion> lambda_expansions(const SeedData& seed) {
  const int n = seed.n();
  const auto& beta = seed.exponents.beta;
  const auto minors = all_reduced_minors(beta, seed.g);
  std::vector<LambdaExpansion> levels(sz(n + 1));
  for (int k = 0; k <= n; ++k) levels[sz(k)].k = k;

  // Enumerate subsets in lexicographic order of their index lists.
  const unsigned full = (1u << (n + 1)) - 1;
  std::vector<std::vector<int>> subsets;
  for (unsigned mask = 1; mask <= full; ++mask) {
    std::vector<int> idx;
    for (int i = 0; i <= n; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    subsets.push_back(std::move(idx));
  }
  std::sort(subsets.begin(), subsets.end());
  for (auto& idx : subsets) {
    const int k = static_cast<int>(idx.size()) - 1;
    unsigned mask = 0;
    double exponent = -0.5 * k * (k + 1);
    for (int i : idx) {
      mask |= 1u << i;
      exponent += beta[sz(i)];
    }
    levels[sz(k)].terms.push_back(LambdaTerm{std::move(idx), exponent, minors[mask]});
  }
  return levels;
}

LambdaExpansion lambda_expansion(const SeedData& seed, int k) {
  if (!seed.normalized) raise(ErrorKind::DegenerateSeed, "lambda expansion requires a normalized seed");
  if (k < 0 || k > seed.n()) raise(ErrorKind::ArityMismatch, "level k must lie in 0..n");
  if (seed.order < seed.n()) raise(ErrorKind::InsufficientOrder, "seed order below n");
  auto levels = lambda_expansions(seed);
  return std::move(levels[sz(k)]);
}

}  // namespace toda
