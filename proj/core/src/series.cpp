#include "toda/series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "toda/error.hpp"

namespace toda {

namespace {

std::size_t idx(int k) { return static_cast<std::size_t>(k); }

}  // namespace

TruncatedSeries::TruncatedSeries() : coeffs_(1, complex{0.0, 0.0}) {}

TruncatedSeries::TruncatedSeries(std::vector<complex> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) raise(ErrorKind::InsufficientOrder, "a series needs at least one coefficient");
}

TruncatedSeries TruncatedSeries::constant(complex c, int order) {
  std::vector<complex> v(idx(order + 1), complex{});
  v[0] = c;
  return TruncatedSeries(std::move(v));
}

TruncatedSeries TruncatedSeries::monomial(complex c, int power, int order) {
  std::vector<complex> v(idx(order + 1), complex{});
  if (power >= 0 && power <= order) v[idx(power)] = c;
  return TruncatedSeries(std::move(v));
}

TruncatedSeries TruncatedSeries::polynomial(std::span<const complex> coeffs, int order) {
  std::vector<complex> v(idx(order + 1), complex{});
  const auto n = std::min(coeffs.size(), v.size());
  std::copy_n(coeffs.begin(), n, v.begin());
  return TruncatedSeries(std::move(v));
}

TruncatedSeries TruncatedSeries::truncated(int order) const {
  if (order >= this->order()) return *this;
  if (order < 0) raise(ErrorKind::InsufficientOrder, "cannot truncate below order 0");
  return TruncatedSeries({coeffs_.begin(), coeffs_.begin() + order + 1});
}

complex TruncatedSeries::operator()(complex z) const noexcept {
  complex acc{};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double TruncatedSeries::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

TruncatedSeries TruncatedSeries::operator-() const {
  TruncatedSeries r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& other) {
  coeffs_.resize(idx(std::min(order(), other.order()) + 1));
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += other.coeffs_[k];
  return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& other) {
  coeffs_.resize(idx(std::min(order(), other.order()) + 1));
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= other.coeffs_[k];
  return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(complex s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
  TruncatedSeries r = a;
  r += b;
  return r;
}

TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
  TruncatedSeries r = a;
  r -= b;
  return r;
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
  const int n = std::min(a.order(), b.order());
  std::vector<complex> out(idx(n + 1), complex{});
  const auto ac = a.coeffs();
  const auto bc = b.coeffs();
  for (int i = 0; i <= n; ++i) {
    if (ac[idx(i)] == complex{}) continue;
    for (int j = 0; i + j <= n; ++j) out[idx(i + j)] += ac[idx(i)] * bc[idx(j)];
  }
  return TruncatedSeries(std::move(out));
}

TruncatedSeries operator*(complex s, const TruncatedSeries& a) {
  TruncatedSeries r = a;
  r *= s;
  return r;
}

TruncatedSeries operator*(const TruncatedSeries& a, complex s) { return s * a; }

TruncatedSeries operator/(const TruncatedSeries& a, const TruncatedSeries& b) {
  const complex b0 = b[0];
  if (b0 == complex{}) raise(ErrorKind::DegenerateDivision, "divisor has vanishing constant term");
  const int n = std::min(a.order(), b.order());
  std::vector<complex> q(idx(n + 1), complex{});
  for (int k = 0; k <= n; ++k) {
    complex acc = a[k];
    for (int j = 0; j < k; ++j) acc -= q[idx(j)] * b[k - j];
    q[idx(k)] = acc / b0;
  }
  return TruncatedSeries(std::move(q));
}

TruncatedSeries derivative(const TruncatedSeries& a) {
  if (a.order() < 1) raise(ErrorKind::InsufficientOrder, "derivative of an order-0 series");
  std::vector<complex> d(idx(a.order()), complex{});
  for (int k = 1; k <= a.order(); ++k) d[idx(k - 1)] = static_cast<double>(k) * a[k];
  return TruncatedSeries(std::move(d));
}

TruncatedSeries exp(const TruncatedSeries& a) {
  // e' = a' e gives k e_k = sum_{j=1}^{k} j a_j e_{k-j}.
  const int n = a.order();
  std::vector<complex> e(idx(n + 1), complex{});
  e[0] = std::exp(a[0]);
  for (int k = 1; k <= n; ++k) {
    complex acc{};
    for (int j = 1; j <= k; ++j) acc += static_cast<double>(j) * a[j] * e[idx(k - j)];
    e[idx(k)] = acc / static_cast<double>(k);
  }
  return TruncatedSeries(std::move(e));
}

TruncatedSeries log(const TruncatedSeries& a) {
  if (a[0] == complex{}) raise(ErrorKind::DegenerateRoot, "logarithm of a series vanishing at 0");
  const int n = a.order();
  std::vector<complex> l(idx(n + 1), complex{});
  l[0] = std::log(a[0]);
  if (n >= 1) {
    const TruncatedSeries q = derivative(a) / a.truncated(n - 1);
    for (int k = 1; k <= n; ++k) l[idx(k)] = q[k - 1] / static_cast<double>(k);
  }
  return TruncatedSeries(std::move(l));
}

TruncatedSeries power(const TruncatedSeries& a, double s) {
  if (a[0] == complex{}) raise(ErrorKind::DegenerateRoot, "fractional power of a series vanishing at 0");
  return exp(complex{s, 0.0} * log(a));
}

TruncatedSeries compose(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (b[0] != complex{}) raise(ErrorKind::IllegalComposition, "inner series must vanish at 0");
  const int n = std::min(a.order(), b.order());
  const TruncatedSeries inner = b.truncated(n);
  TruncatedSeries acc = TruncatedSeries::constant(a[n], n);
  for (int k = n - 1; k >= 0; --k) {
    acc = acc * inner;
    acc += TruncatedSeries::constant(a[k], n);
  }
  return acc;
}

TruncatedSeries revert(const TruncatedSeries& b) {
  if (b[0] != complex{}) raise(ErrorKind::IllegalComposition, "reversion needs b(0) = 0");
  if (b.order() < 1 || b[1] == complex{})
    raise(ErrorKind::NotInvertibleAtOrigin, "reversion needs b'(0) != 0");
  const int n = b.order();
  const complex b1 = b[1];
  // w = (z - sum_{j>=2} b_j w^j) / b1; every sweep fixes one more coefficient.
  TruncatedSeries nonlinear = b;
  nonlinear -= TruncatedSeries::monomial(b1, 1, n);
  const TruncatedSeries z = TruncatedSeries::monomial(1.0, 1, n);
  TruncatedSeries w = TruncatedSeries::monomial(1.0 / b1, 1, n);
  for (int sweep = 1; sweep < n; ++sweep) {
    TruncatedSeries next = z - compose(nonlinear, w);
    next *= 1.0 / b1;
    w = std::move(next);
  }
  return w;
}

TruncatedSeries divide_by_z_power(const TruncatedSeries& a, int k, double tol) {
  if (k < 0) raise(ErrorKind::InsufficientOrder, "negative shift");
  if (k > a.order()) raise(ErrorKind::InsufficientOrder, "shift exceeds the series order");
  for (int j = 0; j < k; ++j) {
    if (std::abs(a[j]) > tol)
      raise(ErrorKind::DegenerateDivision, "coefficient " + std::to_string(j) + " does not vanish");
  }
  return TruncatedSeries({a.coeffs().begin() + k, a.coeffs().end()});
}

double tail_radius(const TruncatedSeries& a, double tol) {
  const int n = a.order();
  double radius = std::numeric_limits<double>::infinity();
  for (int k = std::max(1, n / 2 + 1); k <= n; ++k) {
    const double c = std::abs(a[k]);
    if (c == 0.0) continue;
    radius = std::min(radius, std::pow(tol / c, 1.0 / k));
  }
  return radius;
}

BranchedFunction::BranchedFunction(double exponent, TruncatedSeries unit, double validity_radius)
    : exponent_(exponent), unit_(std::move(unit)), validity_radius_(validity_radius) {
  if (unit_[0] == complex{}) raise(ErrorKind::NotAUnit, "branched function needs unit(0) != 0");
}

BranchedFunction BranchedFunction::residual(double exponent, TruncatedSeries series) {
  BranchedFunction f;
  f.exponent_ = exponent;
  f.unit_ = std::move(series);
  return f;
}

complex branched_power(complex z, double beta, int winding) {
  const double arg = std::arg(z) + 2.0 * std::numbers::pi * winding;
  return std::polar(std::pow(std::abs(z), beta), beta * arg);
}

complex eval(const BranchedFunction& f, complex z, int winding) {
  const double r = std::abs(z);
  if (r == 0.0) {
    if (f.exponent() < 0.0) raise(ErrorKind::SingularEvaluation, "negative exponent at z = 0");
    return f.exponent() == 0.0 ? f.unit()[0] : complex{};
  }
  if (r > f.validity_radius())
    raise(ErrorKind::OutOfDomain, "|z| = " + std::to_string(r) + " exceeds validity radius " +
                                      std::to_string(f.validity_radius()));
  return branched_power(z, f.exponent(), winding) * f.unit()(z);
}

}  // namespace toda
