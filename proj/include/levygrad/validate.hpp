#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "levygrad/bismut.hpp"
#include "levygrad/clock.hpp"
#include "levygrad/coefficients.hpp"
#include "levygrad/estimator.hpp"
#include "levygrad/subordinator.hpp"
#include "levygrad/test_functions.hpp"

namespace levygrad {

/// Monte Carlo P_t f(x) = E f(X_t(x)) over pure-jump paths truncated at eps_cut.
EstimatorResult estimate_pt(const Vec& x, const TestFunction& f, const CoefficientField& field,
                            const BernsteinSpec& spec, double t, double eps_cut, const MonteCarloOptions& options);

/// (P_t |f|^p)^{1/p}(x); the standard error comes from the delta method.
EstimatorResult estimate_power_mean(const Vec& x, const TestFunction& f, const CoefficientField& field,
                                    const BernsteinSpec& spec, double t, double p, double eps_cut,
                                    const MonteCarloOptions& options);

inline double default_fd_step(const Vec& x) { return 1e-3 * (1.0 + x.norm()); }

/// Central difference (f(X_t(x + hv)) - f(X_t(x - hv))) / 2h. With
/// common_random_numbers both sides share the jump path and increments;
/// otherwise the minus side uses an independent stream. h <= 0 selects
/// default_fd_step.
EstimatorResult fd_gradient(const GradientProblem& problem, const BernsteinSpec& spec, double h, double eps_cut,
                            const MonteCarloOptions& options, bool common_random_numbers = true);

struct ComparisonReport {
  enum class Kind { kEqual, kGreater };

  std::string label;
  Kind kind = Kind::kEqual;
  EstimatorResult lhs;
  std::optional<EstimatorResult> rhs_estimate;
  double rhs_value = 0.0;
  double difference = 0.0;
  double combined_se = 0.0;
  double z_score = 0.0;
  double threshold = 3.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// |lhs - value| <= threshold * se + tolerance.
ComparisonReport compare_to_value(const std::string& label, const EstimatorResult& lhs, double value,
                                  double threshold = 3.0, double tolerance = 0.0);
/// |lhs - rhs| <= threshold * sqrt(se_l^2 + se_r^2) + tolerance.
ComparisonReport compare_estimates(const std::string& label, const EstimatorResult& lhs,
                                   const EstimatorResult& rhs, double threshold = 3.0, double tolerance = 0.0);
/// (lhs - rhs) / combined se >= threshold.
ComparisonReport compare_greater(const std::string& label, const EstimatorResult& lhs, const EstimatorResult& rhs,
                                 double threshold);

struct BoundPoint {
  double t = 0.0;
  double eps_cut = 0.0;
  EstimatorResult gradient;
  EstimatorResult power_mean;
  double ratio = 0.0;
  double ratio_se = 0.0;
  double scaled_ratio = 0.0;  // ratio * t^{1/alpha}
};

struct BoundReport {
  std::vector<BoundPoint> points;
  double slope = 0.0;
  double slope_se = 0.0;
  double intercept = 0.0;
  double expected_slope = 0.0;
  double slope_tolerance = 0.15;
  double c_estimate = 0.0;
  bool complete = true;
  bool pass = false;
};

struct BoundOptions {
  double p = 2.0;
  /// Truncation at t = 1; each t uses eps_unit * t^{2/alpha}, which keeps
  /// the jump-count law identical across the grid.
  double eps_unit = 1e-3;
  /// Cap level per t; <= 0 selects default_level_R.
  double level = 0.0;
  double slope_tolerance = 0.15;
};

/// Fits log rho(t) = log |grad_v P_t f| - log (P_t|f|^p)^{1/p} against log t.
BoundReport check_gradient_bound(const std::shared_ptr<const CoefficientField>& field, const BernsteinSpec& spec,
                                 const TestFunction& f, const Vec& x, const Vec& v,
                                 const std::vector<double>& t_grid, const BoundOptions& bound,
                                 const MonteCarloOptions& options);

/// l^eps(t) = (1/eps) int_t^{t+eps} 1{s >= 1} ds + eps t.
double mollified_clock(double t, double eps);

struct CounterexampleResult {
  EstimatorResult jump_moment;
  EstimatorResult mollified_moment;
  double jump_target = 1.0;
  double mollified_target = 0.0;
  double lower_bound = 0.0;  // e - 1
};

/// E|X_1|^2 for dX = sqrt(1 + X^2) dW_l, X_0 = 0, under the unit jump clock
/// 1{t >= 1} and under its mollification (Euler-Maruyama on a uniform grid).
CounterexampleResult counterexample_moments(double eps_mollify, const MonteCarloOptions& options,
                                            double grid_step = 1e-3);

/// E|sum <xi, dW^beta_i>|^2 over jumps up to the path horizon vs |xi|^2 lambda^beta(l_T).
ComparisonReport burkholder_isometry_check(const Vec& xi, const JumpPath& path, const ClockSpec& clock,
                                           const MonteCarloOptions& options);

struct TruncationStep {
  double eps = 0.0;
  std::size_t kept_jumps = 0;
  double dropped_mass = 0.0;
  double exact = 0.0;  // |xi|^2 (lambda^beta(l_T) - lambda^beta(l^eps_T))
  EstimatorResult discrepancy;
  ComparisonReport comparison;
};

struct TruncationReport {
  std::vector<TruncationStep> steps;
  bool nonincreasing = true;
  bool pass = false;
};

/// E|int xi dW^beta_{l^eps} - int xi dW^beta_l|^2 with both integrals driven
/// by one Brownian motion on the clock axis.
TruncationReport truncation_convergence_check(const JumpPath& path, const ClockSpec& clock, const Vec& xi,
                                              const std::vector<double>& eps_list, const MonteCarloOptions& options);

}  // namespace levygrad
