#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "toda/series.hpp"

namespace toda::testing {

/// Falling factorial x (x-1) ... (x-m+1).
inline double falling_factorial(double x, int m) {
  double p = 1.0;
  for (int i = 0; i < m; ++i) p *= x - i;
  return p;
}

/// Full Wronskian of f_i = z^{beta_i} p_i(z) for polynomial p_i at one point,
/// each entry differentiated term by term: (z^{beta+m})^{(l)} = (beta+m)_l z^{beta+m-l}.
inline complex brute_wronskian(const std::vector<double>& betas, const std::vector<std::vector<complex>>& polys,
                               complex z) {
  const int size = static_cast<int>(betas.size());
  Eigen::MatrixXcd w(size, size);
  for (int l = 0; l < size; ++l)
    for (int i = 0; i < size; ++i) {
      complex entry{};
      const auto& p = polys[static_cast<std::size_t>(i)];
      for (std::size_t m = 0; m < p.size(); ++m) {
        const double e = betas[static_cast<std::size_t>(i)] + static_cast<double>(m);
        entry += p[m] * falling_factorial(e, l) * branched_power(z, e - l);
      }
      w(l, i) = entry;
    }
  return w.determinant();
}

/// sum_i |f_i^{(0)} ^ ... ^ f_i^{(k)}|^2 over (k+1)-subsets: the squared norm of
/// the k-th associated curve, from brute-force minors.
inline double brute_lambda_norm_sq(const std::vector<double>& betas, const std::vector<std::vector<complex>>& polys,
                                   int k, complex z) {
  const int n1 = static_cast<int>(betas.size());
  double total = 0.0;
  std::vector<int> idx(static_cast<std::size_t>(k + 1));
  for (int i = 0; i <= k; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (;;) {
    std::vector<double> b;
    std::vector<std::vector<complex>> p;
    for (int i : idx) {
      b.push_back(betas[static_cast<std::size_t>(i)]);
      p.push_back(polys[static_cast<std::size_t>(i)]);
    }
    total += std::norm(brute_wronskian(b, p, z));
    int pos = k;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n1 - k - 1 + pos) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (int j = pos + 1; j <= k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return total;
}

}  // namespace toda::testing
