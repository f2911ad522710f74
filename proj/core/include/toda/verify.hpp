#pragma once

#include <cstddef>
#include <functional>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "toda/geometry.hpp"

namespace toda {

/// Polar sampling grid with radii r_min..r_max (n_r values, inclusive) and
/// n_theta angles -pi + 2 pi (j + 1/2) / n_theta; fd_step is the stencil step h.
struct GridSpec {
  double r_min = 0.2;
  double r_max = 0.6;
  int n_r = 5;
  int n_theta = 16;
  double fd_step = 1e-3;

  bool empty() const noexcept { return n_r <= 0 || n_theta <= 0; }
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Seed-independent invariants: 0 < r_min <= r_max, r_min - 2h > 0, h <= r_min / 10.
void check_grid(const GridSpec& grid);
/// Additionally requires the stencils to stay inside the validity radius.
void check_grid(const GridSpec& grid, double validity_radius);
std::vector<complex> grid_points(const GridSpec& grid);

enum class CheckStatus { Pass, Fail, Skipped, Error };
std::string to_string(CheckStatus status);

struct CheckEntry {
  std::string name;
  CheckStatus status = CheckStatus::Skipped;
  double max_residual = 0.0;
  double tolerance = 0.0;
  nlohmann::json parameters = nlohmann::json::object();
  nlohmann::json metrics = nlohmann::json::object();
  std::string message;
};

struct VerificationReport {
  std::vector<CheckEntry> checks;
  std::string fingerprint;
  nlohmann::json timings = nlohmann::json::object();

  bool all_passed() const;
};

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
/// handled exactly once and results must be written to per-index slots, so
/// the outcome does not depend on scheduling. The exception thrown at the
/// lowest index is rethrown.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

struct FdOptions {
  double tolerance = 1e-6;
  /// Accepted deviation of the measured order from 2.
  double order_band = 0.2;
  int threads = 1;
};

/// max_{i, z} |Delta_h R_i / 4 + sum_j a_ij e^{u_j}| with the five-point
/// Laplacian of the bounded remainder R_i (2 gamma_i log|z| is harmonic off 0),
/// at h and h/2. Skipped on an empty grid.
CheckEntry pde_residual(const CanonicalCurve& curve, const GridSpec& grid, const FdOptions& options = {});

/// max_{k, z} |Delta_h log r_{k+1} / 4 - ||L_{k-1}||^2 ||L_{k+1}||^2 / ||L_k||^4|
/// for k = 0..n-1, in the same units as pde_residual.
CheckEntry plucker_residual(const CanonicalCurve& curve, const GridSpec& grid, const FdOptions& options = {});

struct ConeOptions {
  std::vector<double> radii{1e-2, 1e-3, 1e-4};
  double theta0 = 0.0;
  /// Relative tolerance on the extrapolated angle.
  double tolerance = 0.01;
};

/// Circumference over radial length for one metric at one radius.
struct ConeSample {
  double radius = 0.0;
  double circumference = 0.0;
  double radial_length = 0.0;
  double ratio() const { return circumference / radial_length; }
};

ConeSample cone_sample(const CanonicalCurve& curve, int k, double radius, double theta0);

/// L(r)/d(r) over the configured radii for every k, Aitken-extrapolated and
/// compared with 2 pi (1 + gamma_k).
CheckEntry cone_angle(const CanonicalCurve& curve, const ConeOptions& options = {});

struct EnergyOptions {
  double radius = 0.5;
  std::vector<double> epsilons{1e-2, 1e-3, 1e-4};
  /// Accepted deviation of log10 of the Cauchy ratio from -(2 gamma_k + 2).
  double ratio_band = 0.3;
};

/// Integral of e^{u_k} over eps < |z| < r.
double annulus_energy(const CanonicalCurve& curve, int k, double eps, double r);

struct EnergyEstimate {
  std::vector<double> values;  ///< one per epsilon
  double extrapolated = 0.0;   ///< geometric tail added to the last value
  double cauchy_ratio = 0.0;   ///< last difference over the one before
};

EnergyEstimate energy_estimate(const CanonicalCurve& curve, int k, const EnergyOptions& options = {});

/// Energy of every metric; passes when the differences in epsilon shrink at
/// the rate 10^{-(2 gamma_k + 2)} per decade or are already at roundoff level.
CheckEntry energy(const CanonicalCurve& curve, const EnergyOptions& options = {});

struct BranchOptions {
  double tolerance = 1e-10;
  int threads = 1;
};

/// Compares norms and u_k across sheets (windings 0, +1, -1) and at the two
/// signed-zero sides of the cut, and checks continuity across it.
CheckEntry branch_consistency(const CanonicalCurve& curve, const GridSpec& grid, const BranchOptions& options = {});

struct ChartOptions {
  double tolerance = 1e-8;
  int threads = 1;
};

/// e^{u_k(z)} |dz/dxi|^2 against xi_metric_density(xi(z), k) at grid points
/// inside the chart radius.
CheckEntry chart_invariance(const CanonicalCurve& curve, const GridSpec& grid, const ChartOptions& options = {});

struct FuchsianCheckOptions {
  double trace_tolerance = 1e-10;
  double exponent_tolerance = 1e-10;
  double operator_tolerance = 1e-9;
  double frobenius_tolerance = 1e-8;
  double obstruction_tolerance = 1e-8;
};

/// Reconstruction, exponents, pole orders, operator residuals on every nu_i
/// and the Frobenius re-synthesis compared through ||Lambda_k||^2.
CheckEntry fuchsian_round_trip(const CanonicalCurve& curve, const GridSpec& grid,
                               const FuchsianCheckOptions& options = {});

}  // namespace toda
