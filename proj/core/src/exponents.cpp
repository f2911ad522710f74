#include "toda/exponents.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "toda/error.hpp"

namespace toda {

SquareMatrix<int> cartan_matrix(int n) {
  SquareMatrix<int> a(n, 0);
  for (int i = 0; i < n; ++i) {
    a(i, i) = 2;
    if (i + 1 < n) {
      a(i, i + 1) = -1;
      a(i + 1, i) = -1;
    }
  }
  return a;
}

SquareMatrix<Rational> exact_inverse(const SquareMatrix<int>& m) {
  const int n = m.size;
  SquareMatrix<Rational> work(n), inv(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) work(i, j) = Rational(m(i, j));
    inv(i, i) = Rational(1);
  }
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    while (pivot < n && work(pivot, col) == Rational(0)) ++pivot;
    if (pivot == n) raise(ErrorKind::InternalInconsistency, "singular integer matrix");
    if (pivot != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(work(col, j), work(pivot, j));
        std::swap(inv(col, j), inv(pivot, j));
      }
    }
    const Rational p = work(col, col);
    for (int j = 0; j < n; ++j) {
      work(col, j) /= p;
      inv(col, j) /= p;
    }
    for (int i = 0; i < n; ++i) {
      if (i == col || work(i, col) == Rational(0)) continue;
      const Rational f = work(i, col);
      for (int j = 0; j < n; ++j) {
        work(i, j) -= f * work(col, j);
        inv(i, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

std::vector<double> beta_by_telescoping(std::span<const double> gamma) {
  const int n = static_cast<int>(gamma.size());
  // (n+1) beta_0 + sum_i (n-i+1)(gamma_i+1) = n(n+1)/2
  double weighted = 0.0;
  for (int i = 1; i <= n; ++i) weighted += (n - i + 1) * (gamma[static_cast<std::size_t>(i - 1)] + 1.0);
  std::vector<double> beta(static_cast<std::size_t>(n + 1));
  beta[0] = (0.5 * n * (n + 1) - weighted) / (n + 1);
  for (int i = 1; i <= n; ++i)
    beta[static_cast<std::size_t>(i)] = beta[static_cast<std::size_t>(i - 1)] + gamma[static_cast<std::size_t>(i - 1)] + 1.0;
  return beta;
}

ExponentData make_exponent_data(int n, std::span<const double> gamma) {
  if (n < 1) raise(ErrorKind::ArityMismatch, "rank n must be at least 1");
  if (static_cast<int>(gamma.size()) != n)
    raise(ErrorKind::ArityMismatch, "expected " + std::to_string(n) + " weights, got " + std::to_string(gamma.size()));
  for (int i = 0; i < n; ++i) {
    const double g = gamma[static_cast<std::size_t>(i)];
    if (!(g > -1.0) || !std::isfinite(g)) {
      std::ostringstream os;
      os << "gamma_" << i + 1 << " = " << g << " must be a finite number > -1";
      raise(ErrorKind::IllegalWeight, os.str());
    }
  }

  ExponentData d;
  d.n = n;
  d.gamma.assign(gamma.begin(), gamma.end());
  d.cartan = cartan_matrix(n);
  d.cartan_inverse = exact_inverse(d.cartan);

  d.alpha.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += boost::rational_cast<double>(d.cartan_inverse(i, j)) * d.gamma[static_cast<std::size_t>(j)];
    d.alpha[static_cast<std::size_t>(i)] = s;
  }

  auto alpha = [&](int i) { return d.alpha[static_cast<std::size_t>(i - 1)]; };
  d.beta.assign(static_cast<std::size_t>(n + 1), 0.0);
  d.beta[0] = -alpha(1);
  for (int i = 1; i <= n - 1; ++i) d.beta[static_cast<std::size_t>(i)] = alpha(i) - alpha(i + 1) + i;
  d.beta[static_cast<std::size_t>(n)] = alpha(n) + n;

  const auto telescoped = beta_by_telescoping(gamma);
  for (int i = 0; i <= n; ++i) {
    const double a = d.beta[static_cast<std::size_t>(i)];
    const double b = telescoped[static_cast<std::size_t>(i)];
    if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(b))) {
      std::ostringstream os;
      os.precision(17);
      os << "beta_" << i << ": inverse-Cartan route " << a << " vs telescoping route " << b;
      raise(ErrorKind::InternalInconsistency, os.str());
    }
  }
  return d;
}

std::vector<double> w_from_u(std::span<const double> u) {
  const int n = static_cast<int>(u.size());
  double weighted = 0.0;
  for (int i = 1; i <= n; ++i) weighted += (n - i + 1) * u[static_cast<std::size_t>(i - 1)];
  std::vector<double> w(static_cast<std::size_t>(n + 1));
  w[0] = -weighted / (2.0 * (n + 1));
  double partial = 0.0;
  for (int i = 1; i <= n; ++i) {
    partial += u[static_cast<std::size_t>(i - 1)];
    w[static_cast<std::size_t>(i)] = w[0] + 0.5 * partial;
  }
  return w;
}

std::vector<double> u_from_w(std::span<const double> w) {
  std::vector<double> u;
  for (std::size_t i = 1; i < w.size(); ++i) u.push_back(2.0 * (w[i] - w[i - 1]));
  return u;
}

}  // namespace toda
