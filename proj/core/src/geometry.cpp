#include "toda/geometry.hpp"

#include <cmath>
#include <string>

#include "toda/error.hpp"

namespace toda {

namespace {

std::size_t sz(int k) { return static_cast<std::size_t>(k); }

}  // namespace

CanonicalCurve::CanonicalCurve(SeedData seed) : seed_(std::move(seed)) {
  if (seed_.order < seed_.n())
    raise(ErrorKind::InsufficientOrder, "seed order " + std::to_string(seed_.order) + " below rank");
  levels_ = lambda_expansions(seed_);
}

double CanonicalCurve::leading_exponent(int k) const { return levels_.at(sz(k)).leading().exponent; }

void CanonicalCurve::check_point(complex z) const {
  const double r = std::abs(z);
  if (r == 0.0) raise(ErrorKind::SingularEvaluation, "norms are evaluated off the origin only");
  if (r > seed_.validity_radius)
    raise(ErrorKind::OutOfDomain,
          "|z| = " + std::to_string(r) + " beyond validity radius " + std::to_string(seed_.validity_radius));
}

NormLogs CanonicalCurve::norm_logs(complex z) const {
  check_point(z);
  NormLogs out;
  const double abs_z = std::abs(z);
  out.log_abs_z = std::log(abs_z);
  out.log_bounded.reserve(levels_.size());
  out.log_direct.reserve(levels_.size());
  for (const auto& level : levels_) {
    const double e0 = level.leading().exponent;
    double bounded = 0.0;
    double direct = 0.0;
    for (const auto& term : level.terms) {
      const double v = std::norm(term.coefficient(z));
      bounded += std::exp(2.0 * (term.exponent - e0) * out.log_abs_z) * v;
      direct += std::pow(abs_z, 2.0 * term.exponent) * v;
    }
    out.log_bounded.push_back(std::log(bounded));
    out.log_direct.push_back(std::log(direct));
  }
  return out;
}

double CanonicalCurve::lambda_norm_sq(int k, complex z) const {
  if (k == -1) return 1.0;
  check_point(z);
  double sum = 0.0;
  for (const auto& term : levels_.at(sz(k)).terms)
    sum += std::pow(std::abs(z), 2.0 * term.exponent) * std::norm(term.coefficient(z));
  return sum;
}

double CanonicalCurve::lambda_norm_sq_branched(int k, complex z, int winding) const {
  if (k == -1) return 1.0;
  check_point(z);
  double sum = 0.0;
  for (const auto& term : levels_.at(sz(k)).terms)
    sum += std::norm(branched_power(z, term.exponent, winding) * term.coefficient(z));
  return sum;
}

std::vector<MetricSample> CanonicalCurve::samples(complex z, const NormLogs& logs) const {
  const int n = this->n();
  const auto& ex = seed_.exponents;
  std::vector<MetricSample> out;
  out.reserve(sz(n));
  for (int k = 1; k <= n; ++k) {
    double remainder = 0.0;
    for (int j = 1; j <= n; ++j) {
      const int a = ex.a(k, j);
      if (a != 0) remainder -= a * logs.log_bounded[sz(j - 1)];
    }
    const double u = 2.0 * ex.gamma[sz(k - 1)] * logs.log_abs_z + remainder;
    out.push_back(MetricSample{z, k, std::exp(u), u, remainder});
  }
  return out;
}

std::vector<MetricSample> CanonicalCurve::samples(complex z) const { return samples(z, norm_logs(z)); }

MetricSample CanonicalCurve::u_value(int k, complex z) const {
  if (k < 1 || k > n()) raise(ErrorKind::ArityMismatch, "u_k needs 1 <= k <= n");
  const NormLogs logs = norm_logs(z);
  MetricSample s = samples(z, logs)[sz(k - 1)];
  double direct = 0.0;
  bool finite = true;
  for (int j = 1; j <= n(); ++j) {
    const int a = exponents().a(k, j);
    if (a == 0) continue;
    finite = finite && std::isfinite(logs.log_direct[sz(j - 1)]);
    direct -= a * logs.log_direct[sz(j - 1)];
  }
  if (finite && std::abs(direct - s.u) > 1e-10 * std::max(1.0, std::abs(s.u))) {
    raise(ErrorKind::InternalInconsistency, "u_" + std::to_string(k) + " routes disagree: " + std::to_string(s.u) +
                                                " vs " + std::to_string(direct));
  }
  return s;
}

double lambda_norm_sq(const SeedData& seed, int k, complex z) { return CanonicalCurve(seed).lambda_norm_sq(k, z); }

MetricSample u_value(const SeedData& seed, int k, complex z) { return CanonicalCurve(seed).u_value(k, z); }

complex NormalizedChart::dz_dxi(complex xi) const { return derivative(reversion)(xi); }

NormalizedChart normalized_chart(const SeedData& seed) {
  const int n = seed.n();
  const auto& beta = seed.exponents.beta;
  const auto& g = seed.g;
  if (g[0][0] == complex{} || g[1][0] == complex{})
    raise(ErrorKind::DegenerateSeed, "chart needs g_0(0) g_1(0) != 0");
  if (seed.order < 2) raise(ErrorKind::InsufficientOrder, "chart needs seed order >= 2");

  const int order = seed.order;
  NormalizedChart chart;
  const TruncatedSeries ratio = g[1] / g[0];
  chart.forward = TruncatedSeries::monomial(1.0, 1, order) * power(ratio, 1.0 / (beta[1] - beta[0]));
  chart.reversion = revert(chart.forward);

  const TruncatedSeries z_over_xi = divide_by_z_power(chart.reversion, 1);
  for (int j = 2; j <= n; ++j) {
    const TruncatedSeries quotient = g[sz(j)] / g[0];
    chart.tilde_g.push_back(power(z_over_xi, beta[sz(j)] - beta[0]) * compose(quotient, chart.reversion));
  }

  double radius = std::abs(chart.forward[1]) * seed.validity_radius;
  radius = std::min(radius, tail_radius(chart.reversion, kDefaultTailTolerance));
  for (const auto& t : chart.tilde_g) radius = std::min(radius, tail_radius(t, kDefaultTailTolerance));
  chart.validity_radius = radius;

  const int tilde_order = chart.tilde_g.empty() ? order : chart.tilde_g.front().order();
  std::vector<TruncatedSeries> tilde_seeds{TruncatedSeries::constant(1.0, tilde_order),
                                           TruncatedSeries::constant(1.0, tilde_order)};
  for (const auto& t : chart.tilde_g) tilde_seeds.push_back(t);
  SeedData tilde = make_seed(seed.exponents, std::move(tilde_seeds), radius);
  chart.tilde_curve = std::make_shared<const CanonicalCurve>(std::move(tilde));
  return chart;
}

double xi_metric_density(const NormalizedChart& chart, const ExponentData& exponents, complex xi, int k) {
  const int n = exponents.n;
  if (k < 1 || k > n) raise(ErrorKind::ArityMismatch, "metric index k must lie in 1..n");
  const double r = std::abs(xi);
  if (r > chart.validity_radius)
    raise(ErrorKind::OutOfDomain,
          "|xi| = " + std::to_string(r) + " beyond chart radius " + std::to_string(chart.validity_radius));
  const auto& beta = exponents.beta;
  const double gamma = exponents.gamma[sz(k - 1)];
  if (r == 0.0 && (gamma < 0.0 || k >= 2))
    raise(ErrorKind::SingularEvaluation, "xi-metric density at the cone point");

  if (k >= 2) {
    const NormLogs logs = chart.tilde_curve->norm_logs(xi);
    auto log_norm = [&](int level) {
      if (level < 0) return 0.0;
      return 2.0 * chart.tilde_curve->leading_exponent(level) * logs.log_abs_z + logs.log_bounded[sz(level)];
    };
    return std::exp(log_norm(k - 2) + log_norm(k) - 2.0 * log_norm(k - 1));
  }

  const double gap = beta[1] - beta[0];
  double numerator = gap * gap;
  if (n >= 2) {
    const double alpha2 = exponents.alpha[1];
    for (const auto& term : chart.tilde_curve->levels()[1].terms) {
      const int i0 = term.indices[0];
      const int i1 = term.indices[1];
      if (i1 <= 1) continue;
      const double e = 2.0 * (beta[sz(i0)] + beta[sz(i1)] - 1.0 + alpha2);
      numerator += std::pow(r, e) * std::norm(term.coefficient(xi));
    }
  }
  double denominator = 1.0 + std::pow(r, 2.0 * gap);
  for (int j = 2; j <= n; ++j)
    denominator += std::pow(r, 2.0 * (beta[sz(j)] - beta[0])) * std::norm(chart.tilde_g[sz(j - 2)](xi));
  return std::pow(r, 2.0 * gamma) * numerator / (denominator * denominator);
}

}  // namespace toda
