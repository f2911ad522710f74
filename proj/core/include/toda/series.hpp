#pragma once

#include <complex>
#include <limits>
#include <span>
#include <vector>

namespace toda {

using complex = std::complex<double>;

/// Holomorphic germ c_0 + c_1 z + ... + c_N z^N known to order N.
///
/// The order is the index of the last trustworthy coefficient. Binary
/// operations return the smaller of their operands' orders, so accuracy loss
/// in nested computations is always visible in the result.
class TruncatedSeries {
 public:
  /// The zero series of order 0.
  TruncatedSeries();
  /// Takes ownership of c_0..c_N; the order is coeffs.size() - 1.
  explicit TruncatedSeries(std::vector<complex> coeffs);

  static TruncatedSeries constant(complex c, int order);
  /// c * z^power truncated at `order` (zero if power > order).
  static TruncatedSeries monomial(complex c, int power, int order);
  /// Zero-padded polynomial c_0 + ... + c_d z^d carried to `order`.
  static TruncatedSeries polynomial(std::span<const complex> coeffs, int order);

  int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const complex> coeffs() const noexcept { return coeffs_; }
  complex operator[](int k) const { return coeffs_[static_cast<std::size_t>(k)]; }

  /// Drops coefficients above `order`; never extends.
  TruncatedSeries truncated(int order) const;

  /// Horner evaluation of the truncated polynomial.
  complex operator()(complex z) const noexcept;

  /// Largest coefficient modulus.
  double max_abs() const noexcept;

  TruncatedSeries operator-() const;
  TruncatedSeries& operator+=(const TruncatedSeries& other);
  TruncatedSeries& operator-=(const TruncatedSeries& other);
  TruncatedSeries& operator*=(complex s);

 private:
  std::vector<complex> coeffs_;
};

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries operator*(complex s, const TruncatedSeries& a);
TruncatedSeries operator*(const TruncatedSeries& a, complex s);
/// Throws DegenerateDivision when b has vanishing constant term.
TruncatedSeries operator/(const TruncatedSeries& a, const TruncatedSeries& b);

/// Term-wise derivative; the order drops by one. Throws InsufficientOrder at order 0.
TruncatedSeries derivative(const TruncatedSeries& a);

/// exp(a) for any constant term.
TruncatedSeries exp(const TruncatedSeries& a);
/// Principal logarithm; throws DegenerateRoot when a(0) = 0.
TruncatedSeries log(const TruncatedSeries& a);
/// a^s = exp(s log a) on the principal branch of a(0)^s.
TruncatedSeries power(const TruncatedSeries& a, double s);

/// a(b(z)); requires b(0) = 0, otherwise IllegalComposition.
TruncatedSeries compose(const TruncatedSeries& a, const TruncatedSeries& b);

/// Compositional inverse w with b(w(z)) = z. Requires b(0) = 0 and b'(0) != 0.
TruncatedSeries revert(const TruncatedSeries& b);

/// Coefficients of z^{k} g(z) -> the series of a / z^k for a with k leading zeros.
/// The order drops by k. Throws DegenerateDivision if a low coefficient exceeds `tol`.
TruncatedSeries divide_by_z_power(const TruncatedSeries& a, int k, double tol = 0.0);

/// Radius inside which the neglected tail of `a` is estimated below `tol`.
/// Returns +inf when the upper half of the coefficients vanishes identically.
double tail_radius(const TruncatedSeries& a, double tol);

/// z^beta * unit(z) on the plane slit along the negative real axis.
class BranchedFunction {
 public:
  /// Requires unit(0) != 0 (NotAUnit otherwise).
  BranchedFunction(double exponent, TruncatedSeries unit,
                   double validity_radius = std::numeric_limits<double>::infinity());

  /// Residual-style values whose leading coefficient may vanish, such as the
  /// output of a differential operator applied to a solution.
  static BranchedFunction residual(double exponent, TruncatedSeries series);

  double exponent() const noexcept { return exponent_; }
  const TruncatedSeries& unit() const noexcept { return unit_; }
  double validity_radius() const noexcept { return validity_radius_; }

 private:
  BranchedFunction() = default;

  double exponent_ = 0.0;
  TruncatedSeries unit_;
  double validity_radius_ = std::numeric_limits<double>::infinity();
};

/// z^beta = exp(beta (log|z| + i (Arg z + 2 pi winding))); Arg in (-pi, pi].
complex branched_power(complex z, double beta, int winding = 0);

/// Evaluates z^beta unit(z). Throws SingularEvaluation at z = 0 with beta < 0
/// and OutOfDomain beyond the validity radius.
complex eval(const BranchedFunction& f, complex z, int winding = 0);

}  // namespace toda
