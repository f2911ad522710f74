#include "toda/fuchsian.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "toda/error.hpp"

namespace toda {

namespace {

std::size_t sz(int k) { return static_cast<std::size_t>(k); }

complex falling(complex x, int m) {
  complex p = 1.0;
  for (int i = 0; i < m; ++i) p *= x - static_cast<double>(i);
  return p;
}

// Monomial coefficients of x(x-1)...(x-m+1).
std::vector<complex> falling_poly(int m) {
  std::vector<complex> p{1.0};
  for (int i = 0; i < m; ++i) {
    std::vector<complex> next(p.size() + 1, complex{});
    for (std::size_t j = 0; j < p.size(); ++j) {
      next[j + 1] += p[j];
      next[j] -= static_cast<double>(i) * p[j];
    }
    p = std::move(next);
  }
  return p;
}

complex horner(const std::vector<complex>& p, complex x) {
  complex acc{};
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double magnitude_scale(const std::vector<complex>& p, double x) {
  double s = 0.0;
  double xp = 1.0;
  for (const auto& c : p) {
    s += std::abs(c) * xp;
    xp *= std::abs(x);
  }
  return s;
}

std::vector<complex> polynomial_roots(const std::vector<complex>& p) {
  const int degree = static_cast<int>(p.size()) - 1;
  const complex lead = p.back();
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(degree, degree);
  for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < degree; ++i) companion(i, degree - 1) = -p[sz(i)] / lead;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  std::vector<complex> roots(solver.eigenvalues().data(), solver.eigenvalues().data() + degree);

  std::vector<complex> dp;
  for (int i = 1; i <= degree; ++i) dp.push_back(static_cast<double>(i) * p[sz(i)]);
  for (auto& r : roots) {
    for (int it = 0; it < 4; ++it) {
      const complex d = horner(dp, r);
      if (d == complex{}) break;
      const complex step = horner(p, r) / d;
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
      r -= step;
    }
  }
  return roots;
}

// Holomorphic T_k with z^{n+1} Z_{k+1} = T_k, for k = 0..n+1 (T_n = 0, T_{n+1} = 1).
std::vector<TruncatedSeries> normalized_coefficients(const FuchsianOperator& op) {
  const int n = op.n;
  const int order = op.order();
  std::vector<TruncatedSeries> t;
  for (int k = 0; k < n; ++k) {
    const auto& c = op.coefficients[sz(k)];
    const int shift = n + 1 - k - c.pole_order;
    t.push_back(TruncatedSeries::monomial(1.0, shift, order) * c.series.truncated(order));
  }
  t.push_back(TruncatedSeries::constant(0.0, order));
  t.push_back(TruncatedSeries::constant(1.0, order));
  return t;
}

}  // namespace

complex LaurentCoefficient::operator()(complex z) const { return series(z) / std::pow(z, pole_order); }

int FuchsianOperator::order() const {
  int order = std::numeric_limits<int>::max();
  for (const auto& c : coefficients) order = std::min(order, c.series.order());
  return coefficients.empty() ? 0 : order;
}

FuchsianOperator reconstruct(const SeedData& seed, const FuchsianOptions& options) {
  const int n = seed.n();
  const auto& beta = seed.exponents.beta;
  if (seed.order < n + 1) raise(ErrorKind::InsufficientOrder, "reconstruction needs seed order >= n + 1");

  std::vector<std::vector<TruncatedSeries>> rows(sz(n + 2));
  for (int l = 0; l <= n + 1; ++l)
    for (int i = 0; i <= n; ++i) rows[sz(l)].push_back(euler_row(beta[sz(i)], seed.g[sz(i)], l));

  auto minor_without = [&](int skipped) {
    std::vector<std::vector<TruncatedSeries>> m;
    for (int l = 0; l <= n + 1; ++l)
      if (l != skipped) m.push_back(rows[sz(l)]);
    return series_determinant(m);
  };

  const TruncatedSeries top = minor_without(n + 1);
  if (std::abs(top[0]) <= 1e-14 * std::max(1.0, top.max_abs()))
    raise(ErrorKind::DegenerateSeed, "top Wronskian vanishes at 0");

  double beta_sum = 0.0;
  for (double b : beta) beta_sum += b;
  const double top_exponent = beta_sum - 0.5 * n * (n + 1);

  FuchsianOperator op;
  op.n = n;
  for (int k = 0; k <= n; ++k) {
    // Row set {0..n+1} \ {k} strips z^{sum beta - ((n+1)(n+2)/2 - k)}.
    const double minor_exponent = beta_sum - (0.5 * (n + 1) * (n + 2) - k);
    const double pole = top_exponent - minor_exponent;
    const int pole_order = static_cast<int>(std::lround(pole));
    if (std::abs(pole - pole_order) > 1e-9)
      raise(ErrorKind::InternalInconsistency, "fractional exponents failed to cancel");

    TruncatedSeries coefficient = minor_without(k) / top;
    if ((n + 1 - k) % 2) coefficient = -coefficient;
    if (k == n) {
      op.dropped_trace = coefficient.max_abs();
      if (op.dropped_trace > options.trace_tolerance) {
        std::ostringstream os;
        os << "y^(n) coefficient has size " << op.dropped_trace << "; the seed is not normalized";
        raise(ErrorKind::NonvanishingTrace, os.str());
      }
      break;
    }
    op.coefficients.push_back(LaurentCoefficient{pole_order, std::move(coefficient)});
  }
  return op;
}

std::vector<complex> indicial_polynomial(const FuchsianOperator& op) {
  const int n = op.n;
  std::vector<complex> p = falling_poly(n + 1);
  for (int k = 0; k < n; ++k) {
    const auto& c = op.coefficients[sz(k)];
    if (c.pole_order > n + 1 - k)
      raise(ErrorKind::InternalInconsistency, "pole order exceeds the Fuchsian bound");
    if (c.pole_order < n + 1 - k) continue;
    const auto f = falling_poly(k);
    for (std::size_t i = 0; i < f.size(); ++i) p[i] += c.series[0] * f[i];
  }
  return p;
}

std::vector<double> indicial_roots(const FuchsianOperator& op) {
  const auto roots = polynomial_roots(indicial_polynomial(op));
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j)
      if (std::abs(roots[i] - roots[j]) < 1e-6 * std::max(1.0, std::abs(roots[i])))
        raise(ErrorKind::RepeatedExponents, "indicial polynomial has a repeated root");
  std::vector<double> real;
  for (const auto& r : roots) {
    if (std::abs(r.imag()) > 1e-8 * std::max(1.0, std::abs(r))) {
      std::ostringstream os;
      os << "indicial root " << r << " is not real";
      raise(ErrorKind::NonRealExponents, os.str());
    }
    real.push_back(r.real());
  }
  std::sort(real.begin(), real.end());
  return real;
}

BranchedFunction apply_operator(const FuchsianOperator& op, const BranchedFunction& f) {
  const int n = op.n;
  const double rho = f.exponent();
  if (f.unit().order() < n + 1) raise(ErrorKind::InsufficientOrder, "operator needs input order >= n + 1");
  const auto t = normalized_coefficients(op);
  TruncatedSeries out = euler_row(rho, f.unit(), n + 1);
  for (int k = 0; k < n; ++k) out += t[sz(k)] * euler_row(rho, f.unit(), k);
  return BranchedFunction::residual(rho - (n + 1), std::move(out));
}

TruncatedSeries frobenius_series(const FuchsianOperator& op, double rho, int order, const FrobeniusOptions& options) {
  const int n = op.n;
  const auto t = normalized_coefficients(op);
  const int max_order = std::min(order, op.order());
  if (max_order < 0) raise(ErrorKind::InsufficientOrder, "negative Frobenius order");

  // Q_s(x) = sum_k T_{k,s} (x)_k; Q_0 is the indicial polynomial.
  auto q = [&](int s, complex x) {
    complex acc{};
    for (int k = 0; k <= n + 1; ++k) {
      const complex c = t[sz(k)][s];
      if (c != complex{}) acc += c * falling(x, k);
    }
    return acc;
  };

  const auto poly = indicial_polynomial(op);
  if (std::abs(horner(poly, rho)) > options.exponent_tolerance * magnitude_scale(poly, rho)) {
    std::ostringstream os;
    os << rho << " is not a local exponent";
    raise(ErrorKind::NotAnExponent, os.str());
  }
  const auto roots = polynomial_roots(poly);
  // Size of the operator's coefficients, so obstructions built from roundoff-level
  // coefficients are judged against the operator rather than against themselves.
  std::vector<double> t_size;
  for (const auto& s : t) t_size.push_back(s.max_abs());

  std::vector<complex> c(sz(max_order + 1), complex{});
  c[0] = 1.0;
  for (int m = 1; m <= max_order; ++m) {
    complex rhs{};
    double largest = 0.0;
    for (int j = 0; j < m; ++j) {
      rhs += c[sz(j)] * q(m - j, rho + j);
      double bound = 0.0;
      for (int k = 0; k <= n + 1; ++k) bound += t_size[sz(k)] * std::abs(falling(rho + j, k));
      largest = std::max(largest, std::abs(c[sz(j)]) * bound);
    }
    bool resonant = false;
    for (const auto& r : roots)
      if (std::abs(r - complex{rho + m, 0.0}) < 1e-6 * std::max(1.0, std::abs(r))) resonant = true;
    if (resonant) {
      if (std::abs(rhs) > options.obstruction_tolerance * std::max(largest, 1e-300)) {
        std::ostringstream os;
        os << "resonance at order " << m << " from exponent " << rho << " has obstruction " << std::abs(rhs);
        raise(ErrorKind::LogarithmRequired, os.str());
      }
      c[sz(m)] = 0.0;
      continue;
    }
    c[sz(m)] = -rhs / q(0, rho + m);
  }
  return TruncatedSeries(std::move(c));
}

SeedData resynthesize_seed(const FuchsianOperator& op, const SeedData& reference, const FrobeniusOptions& options) {
  const int n = reference.n();
  const auto& beta = reference.exponents.beta;
  std::vector<TruncatedSeries> phi;
  for (int i = 0; i <= n; ++i) phi.push_back(frobenius_series(op, beta[sz(i)], reference.order, options));

  std::vector<TruncatedSeries> synth;
  for (int i = 0; i <= n; ++i) {
    const TruncatedSeries& target = reference.g[sz(i)];
    TruncatedSeries s = target[0] * phi[sz(i)];
    for (int j = i + 1; j <= n; ++j) {
      const double gap = beta[sz(j)] - beta[sz(i)];
      const long m = std::lround(gap);
      if (std::abs(gap - static_cast<double>(m)) > 1e-9 || m < 1 || m > s.order()) continue;
      const int shift = static_cast<int>(m);
      const complex d = target[shift] - s[shift];
      s += d * (TruncatedSeries::monomial(1.0, shift, s.order()) * phi[sz(j)]);
    }
    synth.push_back(std::move(s));
  }
  SeedData out = make_seed(reference.exponents, std::move(synth), reference.validity_radius);
  return normalize(out);
}

}  // namespace toda
