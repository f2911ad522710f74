#pragma once

#include <vector>

#include "toda/wronskian.hpp"

namespace toda {

/// z^{-pole_order} * series(z).
struct LaurentCoefficient {
  int pole_order = 0;
  TruncatedSeries series;

  complex operator()(complex z) const;
};

/// y^{(n+1)} + sum_{k=0}^{n-1} Z_{k+1} y^{(k)} = 0 around z = 0.
/// `coefficients[k]` is Z_{k+1}, the coefficient of y^{(k)}, whose pole order
/// never exceeds n + 1 - k.
struct FuchsianOperator {
  int n = 0;
  std::vector<LaurentCoefficient> coefficients;
  /// Largest |coefficient| of the y^{(n)} term dropped during reconstruction.
  double dropped_trace = 0.0;

  /// Highest order to which every coefficient series is known.
  int order() const;
};

struct FuchsianOptions {
  double trace_tolerance = 1e-10;
};

/// Operator whose solution space is spanned by the components of the
/// canonical curve, obtained by bordered-Wronskian elimination:
/// Z_{k+1} = (-1)^{n+1-k} z^{-(n+1-k)} G^{(k)} / G_n, where G^{(k)} is the
/// reduced determinant of derivative rows {0..n+1} \ {k}.
/// Throws NonvanishingTrace if the y^{(n)} coefficient does not vanish.
FuchsianOperator reconstruct(const SeedData& seed, const FuchsianOptions& options = {});

/// Coefficients p_0..p_{n+1} (monomial basis, ascending) of the indicial
/// polynomial rho(rho-1)...(rho-n) + sum_k c_k rho(rho-1)...(rho-k+1).
std::vector<complex> indicial_polynomial(const FuchsianOperator& op);

/// Real local exponents at 0, ascending. Throws NonRealExponents or
/// RepeatedExponents outside the regime of distinct real exponents.
std::vector<double> indicial_roots(const FuchsianOperator& op);

/// L(z^rho h) returned as z^{rho-(n+1)} times a series (leading term may vanish).
BranchedFunction apply_operator(const FuchsianOperator& op, const BranchedFunction& f);

struct FrobeniusOptions {
  /// Size of the resonance obstruction that forces a logarithm, relative to
  /// the largest term |c_j| sum_k |T_k| |(rho+j)_k| of the recursion.
  double obstruction_tolerance = 1e-8;
  /// Relative |P(rho)| accepted for rho to count as an exponent.
  double exponent_tolerance = 1e-8;
};

/// Unit series g with L(z^rho g) = 0 and g(0) = 1. Free coefficients at
/// resonant orders are set to zero. Throws NotAnExponent or LogarithmRequired.
TruncatedSeries frobenius_series(const FuchsianOperator& op, double rho, int order,
                                 const FrobeniusOptions& options = {});

/// Rebuilds seeds from Frobenius solutions at each beta_i of `reference`,
/// fixing the gauge (leading scale and the free resonant coefficients) from
/// the reference seed, then renormalizes.
SeedData resynthesize_seed(const FuchsianOperator& op, const SeedData& reference,
                           const FrobeniusOptions& options = {});

}  // namespace toda
