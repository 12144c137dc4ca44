#include "levygrad/validate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "levygrad/flow.hpp"

namespace levygrad {

namespace {

void require_stable(const BernsteinSpec& spec) {
  if (spec.kind() != BernsteinSpec::Kind::kAlphaStable) {
    throw std::invalid_argument("path simulation needs an alpha-stable spec");
  }
}

FlowState plain_state(const Vec& x) { return FlowState{0.0, x, Mat(x.size(), 0)}; }

// One clock path plus increments for path index i.
void realize(PathRealization& out, const BernsteinSpec& spec, double t, double eps_cut, int d, std::uint64_t seed,
             std::size_t i) {
  RngStream clock_rng(seed, i, StreamPurpose::kClock);
  RngStream noise_rng(seed, i, StreamPurpose::kIncrements);
  const JumpPath path = sample_jump_path(spec, t, eps_cut, clock_rng);
  sample_increments_into(out, path, d, noise_rng);
}

void check_plain(const Vec& x, const CoefficientField& field, const BernsteinSpec& spec, double t, double eps_cut) {
  require_stable(spec);
  if (x.size() != field.dimension()) throw std::invalid_argument("x must match the field dimension");
  if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
  if (!(eps_cut > 0.0)) throw std::invalid_argument("eps_cut must be positive");
}

EstimatorResult plain_moment(const Vec& x, const TestFunction& f, const CoefficientField& field,
                             const BernsteinSpec& spec, double t, double eps_cut, const MonteCarloOptions& options,
                             double power) {
  check_plain(x, field, spec, t, eps_cut);
  const int d = field.dimension();
  auto stats = run_paths<1>(options.n_paths, options.workers, [&](std::size_t i) {
    thread_local PathRealization realization;
    thread_local FlowTrajectory traj;
    realize(realization, spec, t, eps_cut, d, options.seed, i);
    simulate_flow_into(traj, plain_state(x), field, realization, t, options.substeps_per_unit);
    const double value = f(traj.final_state.x);
    return std::optional<std::array<double, 1>>{{power > 0.0 ? std::pow(std::abs(value), power) : value}};
  });
  return to_result(stats.channels[0], stats.rejected);
}

double combined(double a, double b) { return std::sqrt(a * a + b * b); }

double z_of(double difference, double se) {
  if (se > 0.0) return difference / se;
  if (difference == 0.0) return 0.0;
  return std::copysign(std::numeric_limits<double>::infinity(), difference);
}

}  // namespace

EstimatorResult estimate_pt(const Vec& x, const TestFunction& f, const CoefficientField& field,
                            const BernsteinSpec& spec, double t, double eps_cut, const MonteCarloOptions& options) {
  return plain_moment(x, f, field, spec, t, eps_cut, options, 0.0);
}

EstimatorResult estimate_power_mean(const Vec& x, const TestFunction& f, const CoefficientField& field,
                                    const BernsteinSpec& spec, double t, double p, double eps_cut,
                                    const MonteCarloOptions& options) {
  if (!(p >= 1.0)) throw std::invalid_argument("p must be at least 1");
  EstimatorResult m = plain_moment(x, f, field, spec, t, eps_cut, options, p);
  EstimatorResult r = m;
  r.mean = std::pow(m.mean, 1.0 / p);
  r.std_error = m.mean > 0.0 ? r.mean / (p * m.mean) * m.std_error : 0.0;
  r.diagnostics["raw_moment_mean"] = m.mean;
  r.diagnostics["raw_moment_se"] = m.std_error;
  r.diagnostics["p"] = p;
  return r;
}

EstimatorResult fd_gradient(const GradientProblem& problem, const BernsteinSpec& spec, double h, double eps_cut,
                            const MonteCarloOptions& options, bool common_random_numbers) {
  if (!problem.field) throw std::invalid_argument("gradient problem has no coefficient field");
  const CoefficientField& field = *problem.field;
  check_plain(problem.x, field, spec, problem.t, eps_cut);
  if (problem.v.size() != field.dimension()) throw std::invalid_argument("v must match the field dimension");
  if (!(h > 0.0)) h = default_fd_step(problem.x);
  const int d = field.dimension();
  const Vec plus = problem.x + h * problem.v;
  const Vec minus = problem.x - h * problem.v;
  const std::uint64_t other_seed = common_random_numbers ? options.seed
                                                         : mix_seed(options.seed, 1, StreamPurpose::kInternal);

  auto stats = run_paths<1>(options.n_paths, options.workers, [&](std::size_t i) {
    thread_local PathRealization realization;
    thread_local FlowTrajectory traj;
    realize(realization, spec, problem.t, eps_cut, d, options.seed, i);
    simulate_flow_into(traj, plain_state(plus), field, realization, problem.t, options.substeps_per_unit);
    const double f_plus = problem.f(traj.final_state.x);
    if (!common_random_numbers) realize(realization, spec, problem.t, eps_cut, d, other_seed, i);
    simulate_flow_into(traj, plain_state(minus), field, realization, problem.t, options.substeps_per_unit);
    const double f_minus = problem.f(traj.final_state.x);
    return std::optional<std::array<double, 1>>{{(f_plus - f_minus) / (2.0 * h)}};
  });
  EstimatorResult r = to_result(stats.channels[0], stats.rejected);
  r.diagnostics["h"] = h;
  r.diagnostics["eps_cut"] = eps_cut;
  return r;
}

ComparisonReport compare_to_value(const std::string& label, const EstimatorResult& lhs, double value,
                                  double threshold, double tolerance) {
  ComparisonReport c;
  c.label = label;
  c.lhs = lhs;
  c.rhs_value = value;
  c.difference = lhs.mean - value;
  c.combined_se = lhs.std_error;
  c.z_score = z_of(c.difference, c.combined_se);
  c.threshold = threshold;
  c.tolerance = tolerance;
  c.pass = lhs.valid && std::abs(c.difference) <= threshold * c.combined_se + tolerance;
  return c;
}

ComparisonReport compare_estimates(const std::string& label, const EstimatorResult& lhs, const EstimatorResult& rhs,
                                   double threshold, double tolerance) {
  ComparisonReport c = compare_to_value(label, lhs, rhs.mean, threshold, tolerance);
  c.rhs_estimate = rhs;
  c.combined_se = combined(lhs.std_error, rhs.std_error);
  c.z_score = z_of(c.difference, c.combined_se);
  c.pass = lhs.valid && rhs.valid && std::abs(c.difference) <= threshold * c.combined_se + tolerance;
  return c;
}

ComparisonReport compare_greater(const std::string& label, const EstimatorResult& lhs, const EstimatorResult& rhs,
                                 double threshold) {
  ComparisonReport c = compare_estimates(label, lhs, rhs, threshold, 0.0);
  c.kind = ComparisonReport::Kind::kGreater;
  c.pass = lhs.valid && rhs.valid && c.z_score >= threshold;
  return c;
}

BoundReport check_gradient_bound(const std::shared_ptr<const CoefficientField>& field, const BernsteinSpec& spec,
                                 const TestFunction& f, const Vec& x, const Vec& v,
                                 const std::vector<double>& t_grid, const BoundOptions& bound,
                                 const MonteCarloOptions& options) {
  require_stable(spec);
  if (!field) throw std::invalid_argument("missing coefficient field");
  if (t_grid.size() < 2) throw std::invalid_argument("t_grid needs at least two points");
  if (!(bound.p > 1.0)) throw std::invalid_argument("p must exceed 1");
  for (double t : t_grid) {
    if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("t_grid must lie in (0, 1]");
  }
  const double alpha = spec.alpha();
  BoundReport report;
  report.expected_slope = -1.0 / alpha;
  report.slope_tolerance = bound.slope_tolerance;

  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    const double t = t_grid[k];
    BoundPoint point;
    point.t = t;
    point.eps_cut = bound.eps_unit * std::pow(t, 2.0 / alpha);
    MonteCarloOptions numerator = options;
    numerator.seed = mix_seed(options.seed, 2 * k, StreamPurpose::kInternal);
    numerator.capture_samples = 0;
    MonteCarloOptions denominator = numerator;
    denominator.seed = mix_seed(options.seed, 2 * k + 1, StreamPurpose::kInternal);
    const double level = bound.level > 0.0 ? bound.level * std::pow(t, 2.0 / alpha) : 0.0;
    const GradientProblem problem{x, v, f, field, t};
    point.gradient = estimate_gradient(problem, spec, level, point.eps_cut, numerator);
    point.power_mean = estimate_power_mean(x, f, *field, spec, t, bound.p, point.eps_cut, denominator);
    const double g = std::abs(point.gradient.mean);
    const double pm = point.power_mean.mean;
    if (!point.gradient.valid || !(g > 0.0) || !(pm > 0.0)) report.complete = false;
    point.ratio = pm > 0.0 ? g / pm : 0.0;
    const double rel_g = g > 0.0 ? point.gradient.std_error / g : 0.0;
    const double rel_pm = pm > 0.0 ? point.power_mean.std_error / pm : 0.0;
    point.ratio_se = point.ratio * combined(rel_g, rel_pm);
    point.scaled_ratio = point.ratio * std::pow(t, 1.0 / alpha);
    report.c_estimate = std::max(report.c_estimate, point.scaled_ratio);
    report.points.push_back(point);
  }

  if (report.complete) {
    const double n = static_cast<double>(report.points.size());
    double mx = 0.0, my = 0.0;
    for (const BoundPoint& p : report.points) {
      mx += std::log(p.t) / n;
      my += std::log(p.ratio) / n;
    }
    double sxx = 0.0, sxy = 0.0;
    for (const BoundPoint& p : report.points) {
      const double dx = std::log(p.t) - mx;
      sxx += dx * dx;
      sxy += dx * (std::log(p.ratio) - my);
    }
    report.slope = sxy / sxx;
    report.intercept = my - report.slope * mx;
    double var = 0.0;
    for (const BoundPoint& p : report.points) {
      const double w = (std::log(p.t) - mx) / sxx;
      const double rel = p.ratio_se / p.ratio;
      var += w * w * rel * rel;
    }
    report.slope_se = std::sqrt(var);
    report.pass = std::abs(report.slope - report.expected_slope) <= report.slope_tolerance;
  }
  return report;
}

double mollified_clock(double t, double eps) {
  return std::clamp((t + eps - 1.0) / eps, 0.0, 1.0) + eps * t;
}

CounterexampleResult counterexample_moments(double eps_mollify, const MonteCarloOptions& options, double grid_step) {
  if (!(eps_mollify > 0.0 && eps_mollify < 0.5)) throw std::invalid_argument("eps_mollify must lie in (0, 0.5)");
  if (!(grid_step > 0.0 && grid_step <= 1e-3)) throw std::invalid_argument("grid_step must lie in (0, 1e-3]");
  const auto field = catalog("pythagoras_1d", 1);
  CounterexampleResult result;
  result.mollified_target = std::exp(1.0 + eps_mollify) - 1.0;
  result.lower_bound = std::exp(1.0) - 1.0;

  const JumpPath unit_jump(1.0, {Jump{1.0, 1.0}});
  const Vec x0 = Vec::Zero(1);
  auto jump_stats = run_paths<1>(options.n_paths, options.workers, [&](std::size_t i) {
    thread_local PathRealization realization;
    thread_local FlowTrajectory traj;
    RngStream rng(options.seed, i, StreamPurpose::kIncrements);
    sample_increments_into(realization, unit_jump, 1, rng);
    simulate_flow_into(traj, plain_state(x0), *field, realization, 1.0, options.substeps_per_unit);
    return std::optional<std::array<double, 1>>{{traj.final_state.x.squaredNorm()}};
  });
  result.jump_moment = to_result(jump_stats.channels[0], jump_stats.rejected);

  const auto n_steps = static_cast<std::size_t>(std::llround(1.0 / grid_step));
  std::vector<double> root_dl(n_steps);
  for (std::size_t k = 0; k < n_steps; ++k) {
    const double a = static_cast<double>(k) / static_cast<double>(n_steps);
    const double b = static_cast<double>(k + 1) / static_cast<double>(n_steps);
    root_dl[k] = std::sqrt(mollified_clock(b, eps_mollify) - mollified_clock(a, eps_mollify));
  }
  const MonteCarloOptions& o = options;
  const std::uint64_t mollified_seed = mix_seed(o.seed, 1, StreamPurpose::kInternal);
  auto moll_stats = run_paths<1>(o.n_paths, o.workers, [&](std::size_t i) {
    RngStream rng(mollified_seed, i, StreamPurpose::kIncrements);
    double x = 0.0;
    for (std::size_t k = 0; k < n_steps; ++k) x += std::sqrt(1.0 + x * x) * root_dl[k] * rng.normal();
    return std::optional<std::array<double, 1>>{{x * x}};
  });
  result.mollified_moment = to_result(moll_stats.channels[0], moll_stats.rejected);
  result.mollified_moment.diagnostics["clock_at_1"] = mollified_clock(1.0, eps_mollify);
  result.mollified_moment.diagnostics["grid_step"] = grid_step;
  return result;
}

ComparisonReport burkholder_isometry_check(const Vec& xi, const JumpPath& path, const ClockSpec& clock,
                                           const MonteCarloOptions& options) {
  if (path.compensation_drift() != 0.0) throw std::invalid_argument("isometry check needs a pure-jump path");
  const int d = static_cast<int>(xi.size());
  if (d < 1 || d > kMaxDim) throw std::invalid_argument("xi dimension must lie in [1, 8]");
  const bool aux = clock.kind() == ClockSpec::Kind::kPiecewiseLinear;
  const double horizon = path.horizon();

  auto stats = run_paths<1>(options.n_paths, options.workers, [&](std::size_t i) {
    thread_local PathRealization realization;
    RngStream rng(options.seed, i, StreamPurpose::kIncrements);
    sample_increments_into(realization, path, d, rng, aux);
    const ResolvedClock resolved(clock, realization.path);
    double sum = 0.0;
    const std::size_t n = realization.path.count_until(horizon);
    for (std::size_t j = 0; j < n; ++j) {
      const Vec* a = aux ? &realization.auxiliary[j] : nullptr;
      sum += xi.dot(resolved.increment(j, realization.increments[j], a).dw_beta);
    }
    return std::optional<std::array<double, 1>>{{sum * sum}};
  });
  const ResolvedClock resolved(clock, path);
  const double target = xi.squaredNorm() * resolved.lambda(path.value(horizon));
  ComparisonReport c = compare_to_value("isometry", to_result(stats.channels[0], stats.rejected), target);
  c.lhs.diagnostics["lambda_at_horizon"] = resolved.lambda(path.value(horizon));
  return c;
}

TruncationReport truncation_convergence_check(const JumpPath& path, const ClockSpec& clock, const Vec& xi,
                                              const std::vector<double>& eps_list,
                                              const MonteCarloOptions& options) {
  if (path.compensation_drift() != 0.0) throw std::invalid_argument("truncation check needs a pure-jump path");
  if (eps_list.empty()) throw std::invalid_argument("eps_list is empty");
  for (std::size_t k = 0; k < eps_list.size(); ++k) {
    if (!(eps_list[k] > 0.0)) throw std::invalid_argument("eps values must be positive");
    if (k > 0 && !(eps_list[k] < eps_list[k - 1])) throw std::invalid_argument("eps_list must be decreasing");
  }
  const int d = static_cast<int>(xi.size());
  if (d < 1 || d > kMaxDim) throw std::invalid_argument("xi dimension must lie in [1, 8]");
  const double horizon = path.horizon();
  const double full = path.value(horizon);
  const ResolvedClock resolved(clock, path);

  TruncationReport report;
  std::vector<double> grid{0.0, full};
  std::vector<double> truncated_end;
  for (double eps : eps_list) {
    const JumpPath kept = truncate_jumps(path, eps);
    TruncationStep step;
    step.eps = eps;
    step.kept_jumps = kept.size();
    const double end = kept.value(horizon);
    step.dropped_mass = full - end;
    step.exact = xi.squaredNorm() * (resolved.lambda(full) - resolved.lambda(end));
    truncated_end.push_back(end);
    grid.push_back(end);
    report.steps.push_back(step);
  }
  if (clock.kind() == ClockSpec::Kind::kPiecewiseLinear) {
    for (const auto& knot : clock.knots()) {
      if (knot.first < full) grid.push_back(knot.first);
    }
  } else if (resolved.cap() < full) {
    grid.push_back(resolved.cap());
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<double> root_du(grid.size() - 1), slope(grid.size() - 1);
  for (std::size_t c = 0; c + 1 < grid.size(); ++c) {
    const double du = grid[c + 1] - grid[c];
    root_du[c] = std::sqrt(du);
    slope[c] = (resolved.beta(grid[c + 1]) - resolved.beta(grid[c])) / du;
  }
  auto index_of = [&](double u) {
    return static_cast<std::size_t>(std::lower_bound(grid.begin(), grid.end(), u) - grid.begin());
  };
  const std::size_t full_index = index_of(full);
  std::vector<std::size_t> end_index;
  for (double e : truncated_end) end_index.push_back(index_of(e));

  const std::size_t K = eps_list.size();
  auto stats = run_paths_dynamic(options.n_paths, options.workers, 2 * K - 1,
                                 [&](std::size_t i, std::vector<double>& values) {
    RngStream rng(options.seed, i, StreamPurpose::kIncrements);
    // <xi, W^beta(u)> at each grid point.
    std::vector<double> projected(grid.size(), 0.0);
    for (std::size_t c = 0; c + 1 < grid.size(); ++c) {
      double increment = 0.0;
      for (int j = 0; j < d; ++j) increment += xi[j] * rng.normal();
      projected[c + 1] = projected[c] + slope[c] * root_du[c] * increment;
    }
    for (std::size_t k = 0; k < K; ++k) {
      const double gap = projected[full_index] - projected[end_index[k]];
      values[k] = gap * gap;
    }
    for (std::size_t k = 0; k + 1 < K; ++k) values[K + k] = values[k] - values[k + 1];
    return true;
  });

  report.pass = true;
  for (std::size_t k = 0; k < K; ++k) {
    TruncationStep& step = report.steps[k];
    step.discrepancy = to_result(stats.channels[k], stats.rejected);
    step.comparison = compare_to_value("truncation", step.discrepancy, step.exact);
    report.pass = report.pass && step.comparison.pass;
    if (k + 1 < K) {
      const RunningStat& diff = stats.channels[K + k];
      const bool exact_ok = step.exact >= report.steps[k + 1].exact - 1e-15 * std::max(1.0, step.exact);
      const bool empirical_ok = diff.mean >= -3.0 * diff.std_error();
      report.nonincreasing = report.nonincreasing && exact_ok && empirical_ok;
    }
  }
  report.pass = report.pass && report.nonincreasing;
  return report;
}

}  // namespace levygrad
