#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "levygrad/rng.hpp"

namespace levygrad {

// Laplace exponent B of a subordinator: E exp(-u S_t) = exp(-t B(u)).
class BernsteinSpec {
 public:
  enum class Kind { kAlphaStable, kDriftOnly, kCustom };

  /// B(u) = u^(alpha/2), alpha in (0, 2).
  static BernsteinSpec alpha_stable(double alpha);
  /// B(u) = rate * u, i.e. the deterministic clock S_t = rate * t.
  static BernsteinSpec drift_only(double rate);
  /// User evaluator. Only B(0) = 0 and monotonicity on a test grid are checked.
  static BernsteinSpec custom(std::function<double(double)> evaluator, std::string label = "custom");

  Kind kind() const { return kind_; }
  double alpha() const;
  double rate() const;
  /// Stability index alpha/2 of the subordinator itself.
  double stable_index() const { return 0.5 * alpha(); }
  const std::string& label() const { return label_; }

  double operator()(double u) const;

 private:
  BernsteinSpec() = default;
  Kind kind_ = Kind::kAlphaStable;
  double param_ = 1.0;
  std::function<double(double)> custom_;
  std::string label_;
};

struct Jump {
  double time;
  double size;
};

/// Finite-jump realization of a subordinator on [0, horizon].
class JumpPath {
 public:
  JumpPath() = default;
  JumpPath(double horizon, std::vector<Jump> jumps, double compensation_drift = 0.0);

  double horizon() const { return horizon_; }
  const std::vector<Jump>& jumps() const { return jumps_; }
  std::size_t size() const { return jumps_.size(); }
  bool empty() const { return jumps_.empty(); }
  double compensation_drift() const { return drift_; }

  /// Cumulative clock value after jump i (drift excluded).
  double cumulative(std::size_t i) const { return cumulative_[i]; }

  /// Right-continuous value at t: drift * t + sum of jumps with time <= t.
  double value(double t) const;
  /// Left limit at t.
  double value_before(double t) const;
  /// Number of jumps with time <= t.
  std::size_t count_until(double t) const;

  JumpPath with_drift(double drift) const;

 private:
  double horizon_ = 0.0;
  std::vector<Jump> jumps_;
  std::vector<double> cumulative_;
  double drift_ = 0.0;
};

/// Marked-Poisson sample of the jumps of an alpha-stable subordinator with
/// size >= eps_cut on (0, horizon]. The returned path is pure-jump.
JumpPath sample_jump_path(const BernsteinSpec& spec, double horizon, double eps_cut, RngStream& rng);

/// Keeps exactly the jumps with size >= eps.
JumpPath truncate_jumps(const JumpPath& path, double eps);

struct Passage {
  double tau;
  double value_before;
  double value_at;
};

/// First time the path reaches level R > 0.
std::optional<Passage> first_passage(const JumpPath& path, double level);

class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// E S_t^{-gamma} = Gamma(gamma)^{-1} int_0^inf u^{gamma-1} exp(-t B(u)) du.
double inverse_moment(const BernsteinSpec& spec, double t, double gamma);

// Levy measure of the alpha-stable subordinator:
// nu(dx) = c x^{-1-a} dx with a = alpha/2 and c = a / Gamma(1 - a).
double levy_density(double alpha, double x);
/// nu([eps, inf)).
double levy_tail_mass(double alpha, double eps);
/// Expected clock mass carried by jumps below eps over [0, horizon].
double dropped_mass_mean(double alpha, double eps, double horizon);
/// Variance of that dropped mass.
double dropped_mass_variance(double alpha, double eps, double horizon);

/// Adds the mean small-jump mass as a linear drift. Plain trajectory
/// simulation only; Bismut weights require a pure-jump clock.
JumpPath compensate_small_jumps(const JumpPath& path, const BernsteinSpec& spec, double eps_cut);

struct EpsCutChoice {
  double eps_cut;
  double expected_jumps;
  double dropped_mass_mean;
  /// Dropped mass relative to the clock scale t^{2/alpha}.
  double relative_dropped;
  bool mass_rule_met;
};

struct EpsCutPolicy {
  double relative_tolerance = 1e-3;
  double max_expected_jumps = 1000.0;
};

/// Smallest cut meeting the relative dropped-mass rule, coarsened if the
/// expected jump count would exceed the policy's budget.
EpsCutChoice default_eps_cut(const BernsteinSpec& spec, double horizon, const EpsCutPolicy& policy = {});

/// Eps at which the expected jump count over [0, horizon] equals `jumps`.
double eps_for_expected_jumps(double alpha, double horizon, double jumps);

/// Throws std::invalid_argument if B(0) != 0 or B decreases on a test grid.
void check_bernstein(const BernsteinSpec& spec);

}  // namespace levygrad
