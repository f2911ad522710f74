#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <span>
#include <vector>

namespace toda {

using Rational = boost::rational<std::int64_t>;

/// Dense row-major square matrix; small sizes only.
template <typename T>
struct SquareMatrix {
  int size = 0;
  std::vector<T> entries;

  SquareMatrix() = default;
  explicit SquareMatrix(int n, T fill = T{}) : size(n), entries(static_cast<std::size_t>(n * n), fill) {}

  T& operator()(int i, int j) { return entries[static_cast<std::size_t>(i * size + j)]; }
  const T& operator()(int i, int j) const { return entries[static_cast<std::size_t>(i * size + j)]; }
  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;
};

/// Cartan matrix of su(n+1): 2 on the diagonal, -1 next to it.
SquareMatrix<int> cartan_matrix(int n);

/// Exact inverse by Gauss-Jordan elimination over the rationals.
SquareMatrix<Rational> exact_inverse(const SquareMatrix<int>& m);

/// Cone weights gamma_1..gamma_n (each > -1) together with the derived
/// alpha = A^{-1} gamma and local exponents beta_0 < ... < beta_n.
/// Indices in the vectors are zero-based: gamma[i-1] is gamma_i.
struct ExponentData {
  int n = 0;
  std::vector<double> gamma;
  std::vector<double> alpha;
  std::vector<double> beta;
  SquareMatrix<int> cartan;
  SquareMatrix<Rational> cartan_inverse;

  /// a_{ij} with one-based indices as in the Toda system.
  int a(int i, int j) const { return cartan(i - 1, j - 1); }
};

/// Builds ExponentData, computing beta twice (through the inverse Cartan
/// matrix and by telescoping beta_i - beta_{i-1} = gamma_i + 1 under
/// sum beta = n(n+1)/2). Throws IllegalWeight for gamma_i <= -1 and
/// InternalInconsistency if the two routes disagree beyond 1e-12.
ExponentData make_exponent_data(int n, std::span<const double> gamma);

/// The telescoping route on its own.
std::vector<double> beta_by_telescoping(std::span<const double> gamma);

/// Potentials w_0..w_n with w_i = w_0 + (u_1 + ... + u_i)/2 and sum w_i = 0.
std::vector<double> w_from_u(std::span<const double> u);
/// Inverse map u_i = 2 (w_i - w_{i-1}).
std::vector<double> u_from_w(std::span<const double> w);

}  // namespace toda
