#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "levygrad/clock.hpp"
#include "levygrad/coefficients.hpp"
#include "levygrad/estimator.hpp"
#include "levygrad/flow.hpp"
#include "levygrad/subordinator.hpp"
#include "levygrad/test_functions.hpp"

namespace levygrad {

/// Three-term weight along one realization; weight() = (I1 + I2 + I3) / normalizer.
///   I1 = sum <sigma^{-1} grad_v X_{s-}, dW^beta>
///   I2 = -sum Tr(sigma^{-1} grad_{grad_v X_{s-}} sigma) dbeta
///   I3 = sum <sigma^{-1} grad_{grad_v X_{s-}} sigma dW^beta, dW>
/// I2 carries its sign, so E[I2 + I3 | X_{s-}] = 0 and E weight = 0.
struct BismutWeight {
  double i1 = 0.0;
  double i2 = 0.0;
  double i3 = 0.0;
  double normalizer = 0.0;

  double weight() const { return (i1 + i2 + i3) / normalizer; }
};

/// nullopt signals a rejected path (normalizer beta(l_t) <= 0).
std::optional<BismutWeight> accumulate_weight(const FlowTrajectory& trajectory, const CoefficientField& field,
                                              const PathRealization& realization, const ClockSpec& clock, double t);
std::optional<BismutWeight> accumulate_weight(const FlowTrajectory& trajectory, const CoefficientField& field,
                                              const PathRealization& realization, const ResolvedClock& clock,
                                              double t);

struct GradientProblem {
  Vec x;
  Vec v;
  TestFunction f;
  std::shared_ptr<const CoefficientField> field;
  double t = 1.0;
};

struct MonteCarloOptions {
  std::size_t n_paths = 10000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  int substeps_per_unit = kDefaultSubstepsPerUnit;
  /// Average each path with its mirrored increments (dW -> -dW).
  bool antithetic = false;
  /// Number of leading per-path rows to keep (0 = none).
  std::size_t capture_samples = 0;
};

struct SampleRow {
  std::size_t sample_index = 0;
  double f_value = 0.0;
  double weight = 0.0;
  double i1 = 0.0;
  double i2 = 0.0;
  double i3 = 0.0;
  double normalizer = 0.0;
};

inline constexpr double kMaxRejectionFraction = 1e-3;

/// Monte Carlo mean of f(X_t) * weight over random subordinator paths, with
/// the clock capped at the first passage of level R (R <= 0 selects
/// default_level_R).
EstimatorResult estimate_gradient(const GradientProblem& problem, const BernsteinSpec& spec, double level,
                                  double eps_cut, const MonteCarloOptions& options,
                                  std::vector<SampleRow>* samples = nullptr);

/// Same, conditioned on one deterministic jump path: only the Gaussian
/// increments are resampled.
EstimatorResult estimate_gradient_fixed_clock(const GradientProblem& problem, const JumpPath& path,
                                              const ClockSpec& clock, const MonteCarloOptions& options,
                                              std::vector<SampleRow>* samples = nullptr);

/// median(S_1) * t^{2/alpha}, so the cap is hit before t about half the time.
double default_level_R(const BernsteinSpec& spec, double t);

/// Empirical median of S_1 (10^4 drift-compensated paths, fixed seed), cached per alpha.
double stable_unit_median(double alpha);

}  // namespace levygrad
