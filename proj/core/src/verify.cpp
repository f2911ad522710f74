#include "toda/verify.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cfloat>
#include <cmath>
#include <exception>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include "toda/error.hpp"
#include "toda/fuchsian.hpp"

namespace toda {

namespace {

std::size_t sz(int k) { return static_cast<std::size_t>(k); }

constexpr double kTwoPi = 2.0 * std::numbers::pi;

CheckEntry skipped(std::string name, std::string why) {
  CheckEntry e;
  e.name = std::move(name);
  e.status = CheckStatus::Skipped;
  e.message = std::move(why);
  return e;
}

nlohmann::json grid_json(const GridSpec& g) {
  return {{"r_min", g.r_min}, {"r_max", g.r_max}, {"n_r", g.n_r}, {"n_theta", g.n_theta}, {"fd_step", g.fd_step}};
}

// Values f_i whose five-point Laplacian is formed, and sources s_i, at one point.
struct FdSample {
  std::vector<double> values;
  std::vector<double> sources;
};
using FdField = std::function<FdSample(const CanonicalCurve&, complex)>;

struct FdPass {
  std::vector<std::vector<double>> laplacians;  // per point, Delta_h f_i / 4
  std::vector<std::vector<double>> sources;
  double noise = 0.0;  // roundoff floor of the stencil
};

FdPass fd_pass(const CanonicalCurve& curve, const std::vector<complex>& points, double h, const FdField& field,
               int threads) {
  FdPass out;
  out.laplacians.resize(points.size());
  out.sources.resize(points.size());
  std::vector<double> magnitudes(points.size());
  parallel_for(points.size(), threads, [&](std::size_t p) {
    const complex z = points[p];
    FdSample centre = field(curve, z);
    std::vector<double> lap(centre.values.size());
    for (std::size_t i = 0; i < lap.size(); ++i) lap[i] = -4.0 * centre.values[i];
    double magnitude = 0.0;
    for (const complex step : {complex{h, 0.0}, complex{-h, 0.0}, complex{0.0, h}, complex{0.0, -h}}) {
      const FdSample s = field(curve, z + step);
      for (std::size_t i = 0; i < lap.size(); ++i) {
        lap[i] += s.values[i];
        magnitude = std::max(magnitude, std::abs(s.values[i]));
      }
    }
    for (auto& v : lap) v /= 4.0 * h * h;
    out.laplacians[p] = std::move(lap);
    out.sources[p] = std::move(centre.sources);
    magnitudes[p] = magnitude;
  });
  // Eight rounding errors of size eps |f| in the stencil sum, divided by 4 h^2.
  out.noise = 2.0 * DBL_EPSILON * *std::max_element(magnitudes.begin(), magnitudes.end()) / (h * h);
  return out;
}

// max over points of |w_h L_h + w_f L_{h/2} + source| per component.
std::vector<double> fd_residuals(const FdPass& coarse, const FdPass* fine, double w_coarse, double w_fine) {
  std::vector<double> worst(coarse.laplacians.front().size(), 0.0);
  for (std::size_t p = 0; p < coarse.laplacians.size(); ++p)
    for (std::size_t i = 0; i < worst.size(); ++i) {
      double lap = w_coarse * coarse.laplacians[p][i];
      if (fine) lap += w_fine * fine->laplacians[p][i];
      worst[i] = std::max(worst[i], std::abs(lap + coarse.sources[p][i]));
    }
  return worst;
}

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

CheckEntry fd_check(std::string name, const CanonicalCurve& curve, const GridSpec& grid, const FdOptions& options,
                    const FdField& field) {
  if (grid.empty()) return skipped(std::move(name), "empty grid");
  check_grid(grid, curve.seed().validity_radius);
  const auto points = grid_points(grid);
  const double h = grid.fd_step;
  const FdPass coarse = fd_pass(curve, points, h, field, options.threads);
  const FdPass fine = fd_pass(curve, points, 0.5 * h, field, options.threads);
  const auto per_component = fd_residuals(coarse, nullptr, 1.0, 0.0);
  const double at_h = max_of(per_component);
  const double at_half = max_of(fd_residuals(fine, nullptr, 1.0, 0.0));
  // (4 L_{h/2} - L_h) / 3 cancels the h^2 term: what remains is the defect of the identity itself.
  const double richardson = max_of(fd_residuals(coarse, &fine, -1.0 / 3.0, 4.0 / 3.0));

  CheckEntry e;
  e.name = std::move(name);
  e.max_residual = at_h;
  e.tolerance = options.tolerance;
  e.parameters = {{"grid", grid_json(grid)}, {"order_band", options.order_band}, {"laplacian", "five-point, d2/dzdzbar = Laplacian/4"}};
  const bool measurable = at_half > 10.0 * fine.noise;
  const double order = std::log2(at_h / at_half);
  e.metrics = {{"residual_h", at_h},
               {"residual_h_half", at_half},
               {"richardson_residual", richardson},
               {"noise_floor_h_half", fine.noise},
               {"order_measurable", measurable},
               {"per_component", per_component},
               {"points", points.size()}};
  if (std::isfinite(order)) e.metrics["order"] = order;
  const bool order_ok = !measurable || std::abs(order - 2.0) <= options.order_band;
  const bool residual_ok = at_h <= options.tolerance;
  e.status = residual_ok && order_ok ? CheckStatus::Pass : CheckStatus::Fail;
  if (!residual_ok) {
    std::ostringstream os;
    os << "residual " << at_h << " above tolerance " << options.tolerance;
    e.message = os.str();
  } else if (!order_ok) {
    std::ostringstream os;
    os << "measured order " << order << " outside 2 +- " << options.order_band;
    e.message = os.str();
  } else if (!measurable) {
    e.message = "residual at roundoff level; order not measurable";
  }
  return e;
}

double periodic_trapezoid(const std::function<double(double)>& f, double rel_tol) {
  int m = 32;
  double sum = 0.0;
  for (int j = 0; j < m; ++j) sum += f(kTwoPi * j / m);
  double value = kTwoPi * sum / m;
  for (; m <= (1 << 16); m *= 2) {
    for (int j = 0; j < m; ++j) sum += f(kTwoPi * (j + 0.5) / m);
    const double next = kTwoPi * sum / (2 * m);
    const bool done = std::abs(next - value) <= rel_tol * std::abs(next);
    value = next;
    if (done) return value;
  }
  raise(ErrorKind::QuadratureFailure, "angular trapezoid rule did not converge");
}

double kronrod(const std::function<double(double)>& f, double a, double b) {
  double error = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, 1e-13, &error);
  if (!std::isfinite(value) || error > 1e-9 * std::abs(value)) {
    std::ostringstream os;
    os << "Gauss-Kronrod error estimate " << error << " on [" << a << ", " << b << "]";
    raise(ErrorKind::QuadratureFailure, os.str());
  }
  return value;
}

// Endpoint-singular integrands on [0, 1], such as powers s^a with 0 < a < 1.
double tanh_sinh(const std::function<double(double)>& f) {
  boost::math::quadrature::tanh_sinh<double> rule;
  double error = 0.0;
  const double value = rule.integrate(f, 0.0, 1.0, 1e-13, &error);
  if (!std::isfinite(value) || error > 1e-9 * std::abs(value)) {
    std::ostringstream os;
    os << "tanh-sinh error estimate " << error << " on [0, 1]";
    raise(ErrorKind::QuadratureFailure, os.str());
  }
  return value;
}

double remainder_at(const CanonicalCurve& curve, int k, complex z) { return curve.samples(z)[sz(k - 1)].remainder; }

double aitken(const std::vector<double>& x) {
  if (x.size() < 3) return x.back();
  const double a = x[x.size() - 3];
  const double b = x[x.size() - 2];
  const double c = x.back();
  const double denom = c - 2.0 * b + a;
  if (std::abs(denom) <= 1e-15 * std::abs(c)) return c;
  return c - (c - b) * (c - b) / denom;
}

double relative_difference(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), DBL_MIN});
  return std::abs(a - b) / scale;
}

}  // namespace

void check_grid(const GridSpec& grid) {
  if (grid.empty()) return;
  auto fail = [](const std::string& what) { raise(ErrorKind::GridInvariant, what); };
  if (!(grid.r_min > 0.0) || !(grid.r_max >= grid.r_min)) fail("need 0 < r_min <= r_max");
  if (!(grid.fd_step > 0.0)) fail("fd_step must be positive");
  if (!(grid.r_min - 2.0 * grid.fd_step > 0.0)) fail("stencil would reach the origin: r_min - 2h <= 0");
  if (grid.fd_step > grid.r_min / 10.0) fail("fd_step exceeds r_min / 10");
}

void check_grid(const GridSpec& grid, double validity_radius) {
  check_grid(grid);
  if (grid.empty()) return;
  if (grid.r_max + 2.0 * grid.fd_step > validity_radius) {
    std::ostringstream os;
    os << "r_max + 2h = " << grid.r_max + 2.0 * grid.fd_step << " exceeds validity radius " << validity_radius;
    raise(ErrorKind::GridInvariant, os.str());
  }
}

std::vector<complex> grid_points(const GridSpec& grid) {
  std::vector<complex> out;
  if (grid.empty()) return out;
  for (int i = 0; i < grid.n_r; ++i) {
    const double r = grid.n_r == 1 ? grid.r_min : grid.r_min + (grid.r_max - grid.r_min) * i / (grid.n_r - 1);
    for (int j = 0; j < grid.n_theta; ++j) out.push_back(std::polar(r, -std::numbers::pi + kTwoPi * (j + 0.5) / grid.n_theta));
  }
  return out;
}

std::string to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skipped: return "skipped";
    case CheckStatus::Error: return "error";
  }
  return "error";
}

bool VerificationReport::all_passed() const {
  return std::none_of(checks.begin(), checks.end(), [](const CheckEntry& e) {
    return e.status == CheckStatus::Fail || e.status == CheckStatus::Error;
  });
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::size_t> error_index(workers, count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::size_t begin = count * w / workers;
      const std::size_t end = count * (w + 1) / workers;
      for (std::size_t i = begin; i < end; ++i) {
        try {
          body(i);
        } catch (...) {
          errors[w] = std::current_exception();
          error_index[w] = i;
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  // Chunks are contiguous and ordered, so the first failing chunk holds the lowest index.
  for (std::size_t w = 0; w < workers; ++w)
    if (errors[w]) std::rethrow_exception(errors[w]);
}

CheckEntry pde_residual(const CanonicalCurve& curve, const GridSpec& grid, const FdOptions& options) {
  const int n = curve.n();
  const auto& ex = curve.exponents();
  return fd_check("pde", curve, grid, options, [n, &ex](const CanonicalCurve& c, complex z) {
    const auto s = c.samples(z);
    FdSample out;
    for (int i = 1; i <= n; ++i) {
      out.values.push_back(s[sz(i - 1)].remainder);
      double source = 0.0;
      for (int j = 1; j <= n; ++j) source += ex.a(i, j) * s[sz(j - 1)].density;
      out.sources.push_back(source);
    }
    return out;
  });
}

CheckEntry plucker_residual(const CanonicalCurve& curve, const GridSpec& grid, const FdOptions& options) {
  const int n = curve.n();
  return fd_check("plucker", curve, grid, options, [n](const CanonicalCurve& c, complex z) {
    const NormLogs logs = c.norm_logs(z);
    auto log_norm = [&](int level) {
      if (level < 0) return 0.0;
      return 2.0 * c.leading_exponent(level) * logs.log_abs_z + logs.log_bounded[sz(level)];
    };
    FdSample out;
    for (int k = 0; k < n; ++k) {
      out.values.push_back(logs.log_bounded[sz(k)]);
      out.sources.push_back(-std::exp(log_norm(k - 1) + log_norm(k + 1) - 2.0 * log_norm(k)));
    }
    return out;
  });
}

ConeSample cone_sample(const CanonicalCurve& curve, int k, double radius, double theta0) {
  const double gamma = curve.exponents().gamma[sz(k - 1)];
  const double p = 1.0 + gamma;
  const double angular =
      periodic_trapezoid([&](double t) { return std::exp(0.5 * remainder_at(curve, k, std::polar(radius, t))); }, 1e-14);
  // t = r s^{1/(1+gamma)} turns t^gamma dt into r^{1+gamma} ds / (1 + gamma).
  // R(t) - R(0) carries powers t^{2(beta_j - beta_i)}, so the integrand is only Hoelder at s = 0.
  const double radial = tanh_sinh(
      [&](double s) {
        // Nodes crowd s = 0 until s^{1/p} underflows; the integrand is continuous there.
        const double t = std::max(radius * std::pow(s, 1.0 / p), 1e-300);
        return std::exp(0.5 * remainder_at(curve, k, std::polar(t, theta0)));
      });
  const double scale = std::pow(radius, p);
  return ConeSample{radius, scale * angular, scale * radial / p};
}

CheckEntry cone_angle(const CanonicalCurve& curve, const ConeOptions& options) {
  CheckEntry e;
  e.name = "cone-angle";
  e.tolerance = options.tolerance;
  e.parameters = {{"radii", options.radii}, {"theta0", options.theta0}, {"extrapolation", "aitken"}};
  if (options.radii.empty()) return skipped("cone-angle", "no radii");
  bool ok = true;
  nlohmann::json per_k = nlohmann::json::array();
  for (int k = 1; k <= curve.n(); ++k) {
    std::vector<double> ratios;
    for (double r : options.radii) ratios.push_back(cone_sample(curve, k, r, options.theta0).ratio());
    const double limit = aitken(ratios);
    const double target = kTwoPi * (1.0 + curve.exponents().gamma[sz(k - 1)]);
    const double err = std::abs(limit - target) / target;
    e.max_residual = std::max(e.max_residual, err);
    ok = ok && err <= options.tolerance;
    per_k.push_back({{"k", k}, {"ratios", ratios}, {"extrapolated", limit}, {"expected", target}, {"relative_error", err}});
  }
  e.metrics = {{"metrics", per_k}};
  e.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
  if (!ok) e.message = "extrapolated cone angle outside tolerance";
  return e;
}

double annulus_energy(const CanonicalCurve& curve, int k, double eps, double r) {
  const double gamma = curve.exponents().gamma[sz(k - 1)];
  // rho = e^s: e^{u} rho drho = e^{(2 gamma + 2) s} e^{R} ds.
  return kronrod(
      [&](double s) {
        const double rho = std::exp(s);
        const double angular =
            periodic_trapezoid([&](double t) { return std::exp(remainder_at(curve, k, std::polar(rho, t))); }, 1e-14);
        return std::exp((2.0 * gamma + 2.0) * s) * angular;
      },
      std::log(eps), std::log(r));
}

EnergyEstimate energy_estimate(const CanonicalCurve& curve, int k, const EnergyOptions& options) {
  std::vector<double> eps = options.epsilons;
  std::sort(eps.begin(), eps.end(), std::greater<>());
  EnergyEstimate out;
  double value = 0.0;
  double upper = options.radius;
  for (double e : eps) {
    value += annulus_energy(curve, k, e, upper);
    out.values.push_back(value);
    upper = e;
  }
  out.extrapolated = out.values.back();
  if (out.values.size() >= 3) {
    const std::size_t m = out.values.size();
    const double d1 = out.values[m - 2] - out.values[m - 3];
    const double d2 = out.values[m - 1] - out.values[m - 2];
    out.cauchy_ratio = d1 != 0.0 ? d2 / d1 : 0.0;
    if (out.cauchy_ratio > 0.0 && out.cauchy_ratio < 1.0)
      out.extrapolated += d2 * out.cauchy_ratio / (1.0 - out.cauchy_ratio);
  }
  return out;
}

CheckEntry energy(const CanonicalCurve& curve, const EnergyOptions& options) {
  CheckEntry e;
  e.name = "energy";
  e.tolerance = options.ratio_band;
  e.parameters = {{"radius", options.radius}, {"epsilons", options.epsilons}, {"ratio_band", options.ratio_band},
                  {"residual", "|log10(cauchy ratio) + (2 gamma_k + 2) log10(1/step)|"}};
  if (options.epsilons.size() < 3) return skipped("energy", "need three epsilons for a Cauchy ratio");
  std::vector<double> eps = options.epsilons;
  std::sort(eps.begin(), eps.end(), std::greater<>());
  const double step = eps[eps.size() - 1] / eps[eps.size() - 2];

  bool ok = true;
  nlohmann::json per_k = nlohmann::json::array();
  for (int k = 1; k <= curve.n(); ++k) {
    const EnergyEstimate est = energy_estimate(curve, k, options);
    const double gamma = curve.exponents().gamma[sz(k - 1)];
    const std::size_t m = est.values.size();
    const double last_diff = est.values[m - 1] - est.values[m - 2];
    const double expected = (2.0 * gamma + 2.0) * std::log10(step);
    nlohmann::json entry = {{"k", k},          {"values", est.values},  {"extrapolated", est.extrapolated},
                            {"cauchy_ratio", est.cauchy_ratio}, {"expected_log10_ratio", expected}};
    bool pass = false;
    if (std::abs(last_diff) <= 1e-12 * std::abs(est.values.back())) {
      entry["at_noise_level"] = true;
      pass = true;
    } else if (est.cauchy_ratio > 0.0) {
      const double dev = std::abs(std::log10(est.cauchy_ratio) - expected);
      entry["log10_deviation"] = dev;
      e.max_residual = std::max(e.max_residual, dev);
      pass = dev <= options.ratio_band;
    }
    ok = ok && pass;
    per_k.push_back(entry);
  }
  e.metrics = {{"metrics", per_k}};
  e.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
  if (!ok) e.message = "Cauchy differences do not shrink at the integrability rate";
  return e;
}

CheckEntry branch_consistency(const CanonicalCurve& curve, const GridSpec& grid, const BranchOptions& options) {
  if (grid.empty()) return skipped("branch", "empty grid");
  check_grid(grid, curve.seed().validity_radius);
  const int n = curve.n();
  const auto points = grid_points(grid);

  std::vector<double> sheet_err(points.size());
  parallel_for(points.size(), options.threads, [&](std::size_t p) {
    double worst = 0.0;
    for (int k = 0; k <= n; ++k) {
      const double moduli = curve.lambda_norm_sq(k, points[p]);
      for (int w : {0, 1, -1})
        worst = std::max(worst, relative_difference(moduli, curve.lambda_norm_sq_branched(k, points[p], w)));
    }
    sheet_err[p] = worst;
  });
  const double sheets = *std::max_element(sheet_err.begin(), sheet_err.end());

  std::set<double> radii;
  for (const auto& z : points) radii.insert(std::abs(z));
  double sides = 0.0;
  bool continuous = true;
  double worst_jump = 0.0;
  for (double r : radii) {
    const complex upper{-r, 0.0};
    const complex lower{-r, -0.0};
    const auto su = curve.samples(upper);
    const auto sl = curve.samples(lower);
    for (int k = 0; k < n; ++k) sides = std::max(sides, std::abs(su[sz(k)].u - sl[sz(k)].u));
    for (int k = 0; k <= n; ++k)
      for (int w : {0, 1, -1})
        sides = std::max(sides, relative_difference(curve.lambda_norm_sq_branched(k, upper, w),
                                                    curve.lambda_norm_sq_branched(k, lower, w)));
    std::vector<double> jumps;
    for (double delta : {1e-6, 1e-7}) {
      const auto a = curve.samples(std::polar(r, std::numbers::pi - delta));
      const auto b = curve.samples(std::polar(r, -std::numbers::pi + delta));
      double jump = 0.0;
      for (int k = 0; k < n; ++k) jump = std::max(jump, std::abs(a[sz(k)].u - b[sz(k)].u));
      jumps.push_back(jump);
    }
    worst_jump = std::max(worst_jump, jumps[0]);
    // A genuine jump would not shrink with the gap; smooth data shrinks linearly.
    continuous = continuous && jumps[1] <= 0.2 * jumps[0] + options.tolerance;
  }

  CheckEntry e;
  e.name = "branch";
  e.tolerance = options.tolerance;
  e.max_residual = std::max(sheets, sides);
  e.parameters = {{"grid", grid_json(grid)}, {"windings", {0, 1, -1}}, {"cut_offsets", {1e-6, 1e-7}}};
  e.metrics = {{"sheet_discrepancy", sheets}, {"cut_side_discrepancy", sides},
               {"cut_jump_at_1e-6", worst_jump}, {"continuous_across_cut", continuous}};
  const bool ok = e.max_residual <= options.tolerance && continuous;
  e.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
  if (!ok) e.message = continuous ? "norms depend on the branch" : "u_k jumps across the cut";
  return e;
}

CheckEntry chart_invariance(const CanonicalCurve& curve, const GridSpec& grid, const ChartOptions& options) {
  if (grid.empty()) return skipped("chart", "empty grid");
  check_grid(grid);
  const int n = curve.n();
  const NormalizedChart chart = normalized_chart(curve.seed());
  const TruncatedSeries dxi = derivative(chart.forward);
  const auto points = grid_points(grid);

  std::vector<double> errs(points.size(), -1.0);
  parallel_for(points.size(), options.threads, [&](std::size_t p) {
    const complex z = points[p];
    if (std::abs(z) > curve.seed().validity_radius) return;
    const complex xi = chart.xi_of(z);
    if (std::abs(xi) >= chart.validity_radius) return;
    const auto s = curve.samples(z);
    const double jac = 1.0 / std::norm(dxi(z));
    double worst = 0.0;
    for (int k = 1; k <= n; ++k)
      worst = std::max(worst, relative_difference(s[sz(k - 1)].density * jac, xi_metric_density(chart, curve.exponents(), xi, k)));
    errs[p] = worst;
  });
  std::size_t used = 0;
  double worst = 0.0;
  for (double v : errs)
    if (v >= 0.0) {
      ++used;
      worst = std::max(worst, v);
    }
  if (used == 0) return skipped("chart", "no grid point inside the chart radius");

  CheckEntry e;
  e.name = "chart";
  e.tolerance = options.tolerance;
  e.max_residual = worst;
  e.parameters = {{"grid", grid_json(grid)}, {"comparison", "e^{u_k}|dz/dxi|^2 vs xi-chart density, relative"}};
  e.metrics = {{"points_used", used}, {"chart_radius", chart.validity_radius}, {"dxi_dz_at_0", chart.forward[1].real()}};
  e.status = worst <= options.tolerance ? CheckStatus::Pass : CheckStatus::Fail;
  if (e.status == CheckStatus::Fail) e.message = "pull-back metric differs between charts";
  return e;
}

CheckEntry fuchsian_round_trip(const CanonicalCurve& curve, const GridSpec& grid, const FuchsianCheckOptions& options) {
  const SeedData& seed = curve.seed();
  const int n = seed.n();
  const auto& beta = seed.exponents.beta;
  const FuchsianOperator op = reconstruct(seed, FuchsianOptions{options.trace_tolerance});
  const auto roots = indicial_roots(op);

  double root_err = 0.0;
  for (int i = 0; i <= n; ++i) root_err = std::max(root_err, std::abs(roots[sz(i)] - beta[sz(i)]));

  bool poles_ok = true;
  nlohmann::json poles = nlohmann::json::array();
  for (int k = 0; k < n; ++k) {
    const int bound = n + 1 - k;
    poles.push_back({{"k", k}, {"pole_order", op.coefficients[sz(k)].pole_order}, {"bound", bound}});
    poles_ok = poles_ok && op.coefficients[sz(k)].pole_order <= bound;
  }

  double op_residual = 0.0;
  for (int i = 0; i <= n; ++i)
    op_residual = std::max(op_residual, apply_operator(op, BranchedFunction(beta[sz(i)], seed.g[sz(i)])).unit().max_abs());

  const FrobeniusOptions frob{options.obstruction_tolerance, 1e-8};
  const CanonicalCurve rebuilt(resynthesize_seed(op, seed, frob));
  const double radius = std::min(seed.validity_radius, rebuilt.seed().validity_radius);
  std::vector<complex> points;
  for (const auto& z : grid_points(grid))
    if (std::abs(z) <= radius) points.push_back(z);
  if (points.empty())
    for (int j = 0; j < 8; ++j) points.push_back(std::polar(0.5 * radius, kTwoPi * (j + 0.5) / 8));
  double frob_err = 0.0;
  for (const auto& z : points)
    for (int k = 0; k <= n; ++k)
      frob_err = std::max(frob_err, relative_difference(curve.lambda_norm_sq(k, z), rebuilt.lambda_norm_sq(k, z)));

  std::vector<TruncatedSeries> phis;
  for (int i = 0; i <= n; ++i) phis.push_back(frobenius_series(op, beta[sz(i)], op.order(), frob));
  const double independence = std::abs(reduced_wronskian(beta, phis)(points.front()));

  struct Sub {
    const char* name;
    double value;
    double tolerance;
  };
  const Sub subs[] = {{"exponent_error", root_err, options.exponent_tolerance},
                      {"dropped_trace", op.dropped_trace, options.trace_tolerance},
                      {"operator_residual", op_residual, options.operator_tolerance},
                      {"frobenius_norm_error", frob_err, options.frobenius_tolerance}};
  CheckEntry e;
  e.name = "fuchsian";
  e.tolerance = 1.0;
  e.parameters = {{"residual", "largest value-to-tolerance ratio over sub-checks"},
                  {"obstruction_tolerance", options.obstruction_tolerance}};
  bool ok = poles_ok && independence > 0.0;
  for (const auto& s : subs) {
    e.metrics[s.name] = {{"value", s.value}, {"tolerance", s.tolerance}};
    e.max_residual = std::max(e.max_residual, s.value / s.tolerance);
    ok = ok && s.value <= s.tolerance;
  }
  e.metrics["indicial_roots"] = roots;
  e.metrics["beta"] = beta;
  e.metrics["pole_orders"] = poles;
  e.metrics["frobenius_wronskian_at_sample"] = independence;
  e.metrics["operator_order"] = op.order();
  e.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
  if (!ok) e.message = poles_ok ? "round trip outside tolerance" : "pole order above the Fuchsian bound";
  return e;
}

}  // namespace toda
