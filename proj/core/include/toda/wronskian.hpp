#pragma once

#include <optional>
#include <span>
#include <vector>

#include "toda/exponents.hpp"
#include "toda/series.hpp"

namespace toda {

/// Holomorphic seed data g_0..g_n of the canonical curve
/// z -> [z^{beta_0} g_0(z), ..., z^{beta_n} g_n(z)].
struct SeedData {
  ExponentData exponents;
  std::vector<TruncatedSeries> g;
  int order = 0;
  bool normalized = false;
  /// Radius inside which the truncated seeds are trusted.
  double validity_radius = 1.0;
  /// The (n+1)-th root of G_n(0) divided out by normalize(), if any.
  std::optional<complex> normalization_root;

  int n() const noexcept { return exponents.n; }
};

/// Default validity cap and tail tolerance for make_seed.
inline constexpr double kDefaultValidityCap = 1.0;
inline constexpr double kDefaultTailTolerance = 1e-9;

/// Checks arity (ArityMismatch) and derives the truncation order and validity
/// radius: min(cap, radius where the truncation tail estimate reaches tail_tol).
SeedData make_seed(ExponentData exponents, std::vector<TruncatedSeries> g,
                   double validity_cap = kDefaultValidityCap, double tail_tol = kDefaultTailTolerance);

/// Row g_{i l} with (z^beta g)^{(l)} = z^{beta - l} g_{i l}, built by the
/// falling-factorial Leibniz expansion sum_j C(l,j) (beta)_{l-j} z^j g^{(j)}.
/// Valid to order N - l.
TruncatedSeries euler_row(double beta, const TruncatedSeries& g, int l);

/// Determinant of a square matrix of series by Laplace expansion over column
/// subsets (no division, so vanishing pivots are harmless).
/// `rows[r][c]` is the entry in row r, column c.
TruncatedSeries series_determinant(const std::vector<std::vector<TruncatedSeries>>& rows);

/// Reduced Wronskian G_k(beta_0..beta_k; g_0..g_k): the Wronskian of the
/// z^{beta_i} g_i with the factor z^{sum beta - k(k+1)/2} removed exactly.
/// Valid to order N - k; InsufficientOrder if N < k.
TruncatedSeries reduced_wronskian(std::span<const double> betas, std::span<const TruncatedSeries> gs);

/// prod g_i(0) * prod_{i<j} (beta_j - beta_i).
complex wronskian_at_zero(std::span<const double> betas, std::span<const TruncatedSeries> gs);

/// Reduced Wronskians of every subset of the n+1 seeds at once; entry `mask`
/// holds G_{|mask|-1} of the seeds whose bits are set (entry 0 is unused).
std::vector<TruncatedSeries> all_reduced_minors(std::span<const double> betas, std::span<const TruncatedSeries> gs);

/// Largest |coefficient| of G_n - 1 over the valid order.
double normalization_defect(const SeedData& seed);

/// Divides every g_i by the principal (n+1)-th root of G_n so that G_n == 1.
/// The validity radius shrinks to the tail radius of the rescaled series.
/// Seeds already within `tol` of the condition are returned unchanged (with
/// normalized = true). Throws DegenerateSeed if G_n(0) = 0.
SeedData normalize(const SeedData& seed, double tol = 1e-10);

struct LambdaTerm {
  std::vector<int> indices;     ///< i_0 < ... < i_k
  double exponent = 0.0;        ///< sum beta_{i_j} - k(k+1)/2
  TruncatedSeries coefficient;  ///< G_k of the selected seeds
};

/// Lambda_k = nu ^ nu' ^ ... ^ nu^{(k)} expanded in the basis e_{i_0} ^ ... ^ e_{i_k}.
struct LambdaExpansion {
  int k = 0;
  std::vector<LambdaTerm> terms;  ///< lexicographic in the index sets

  /// The (0, 1, ..., k) term, carrying the lowest exponent -alpha_{k+1}.
  const LambdaTerm& leading() const { return terms.front(); }
};

/// Level-k expansion of a normalized seed. Throws DegenerateSeed for
/// unnormalized input and InsufficientOrder when the order is too small.
LambdaExpansion lambda_expansion(const SeedData& seed, int k);

/// Expansions for every level 0..n without requiring normalization.
std::vector<LambdaExpansion> lambda_expansions(const SeedData& seed);

}  // namespace toda
