#pragma once

#include <memory>
#include <vector>

#include "toda/wronskian.hpp"

namespace toda {

/// Value of the k-th solution component at one point.
struct MetricSample {
  complex z;
  int k = 0;
  double density = 0.0;    ///< e^{u_k}, against |dz|^2
  double u = 0.0;          ///< u_k(z)
  double remainder = 0.0;  ///< R_k(z) = u_k - 2 gamma_k log|z|
};

/// Both routes to log ||Lambda_k||^2 at a point, for k = 0..n.
struct NormLogs {
  double log_abs_z = 0.0;
  /// log r_{k+1}: the bounded factor left after pulling out |z|^{-2 alpha_{k+1}}.
  std::vector<double> log_bounded;
  /// log of the directly summed ||Lambda_k||^2; may be non-finite for tiny |z|.
  std::vector<double> log_direct;
};

/// Evaluation engine for the canonical curve of one seed. All reduced
/// Wronskians are expanded once on construction; evaluation is then pure and
/// safe to call concurrently.
class CanonicalCurve {
 public:
  explicit CanonicalCurve(SeedData seed);

  const SeedData& seed() const noexcept { return seed_; }
  const ExponentData& exponents() const noexcept { return seed_.exponents; }
  int n() const noexcept { return seed_.n(); }
  const std::vector<LambdaExpansion>& levels() const noexcept { return levels_; }

  /// Lowest exponent at level k, i.e. -alpha_{k+1} for k < n.
  double leading_exponent(int k) const;

  /// Both log-norm routes for every level. Throws SingularEvaluation at 0 and
  /// OutOfDomain beyond the validity radius.
  NormLogs norm_logs(complex z) const;

  /// ||Lambda_k||^2 summed term by term; ||Lambda_{-1}|| = 1.
  double lambda_norm_sq(int k, complex z) const;

  /// ||Lambda_k||^2 assembled from the branched components z^{e} G(z) on the
  /// given sheet; only the moduli survive, so the sheet must not matter.
  double lambda_norm_sq_branched(int k, complex z, int winding) const;

  /// u_k through the bounded remainder R_k, cross-checked against
  /// -sum_j a_kj log ||Lambda_{j-1}||^2 (InternalInconsistency beyond 1e-10).
  MetricSample u_value(int k, complex z) const;

  /// u_1..u_n from precomputed logs without the cross-check.
  std::vector<MetricSample> samples(complex z) const;
  std::vector<MetricSample> samples(complex z, const NormLogs& logs) const;

 private:
  void check_point(complex z) const;

  SeedData seed_;
  std::vector<LambdaExpansion> levels_;
};

/// Formula-level entry points; each builds a temporary CanonicalCurve.
double lambda_norm_sq(const SeedData& seed, int k, complex z);
MetricSample u_value(const SeedData& seed, int k, complex z);

/// Coordinate xi = z (g_1/g_0)^{1/(beta_1-beta_0)} in which the first two
/// components of the curve become xi^{beta_0} and xi^{beta_1}.
struct NormalizedChart {
  TruncatedSeries forward;              ///< xi as a series in z
  TruncatedSeries reversion;            ///< z as a series in xi
  std::vector<TruncatedSeries> tilde_g; ///< g~_2 .. g~_n as series in xi
  double validity_radius = 0.0;         ///< in the xi plane
  /// Curve (xi^{beta_0}, xi^{beta_1}, xi^{beta_j} g~_j) for higher levels.
  std::shared_ptr<const CanonicalCurve> tilde_curve;

  complex z_of(complex xi) const { return reversion(xi); }
  complex xi_of(complex z) const { return forward(z); }
  complex dz_dxi(complex xi) const;
};

/// Throws DegenerateSeed if g_0(0) g_1(0) = 0.
NormalizedChart normalized_chart(const SeedData& seed);

/// Density of e^{u_k}|dz|^2 in the xi chart. For k = 1 this is the simplified
/// closed form with the full denominator sum over j = 0..n; for k >= 2 the
/// Pluecker quotient ||L_{k-2}||^2 ||L_k||^2 / ||L_{k-1}||^4 of the tilded curve.
double xi_metric_density(const NormalizedChart& chart, const ExponentData& exponents, complex xi, int k = 1);

}  // namespace toda
