#include "levygrad/bismut.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace levygrad {

std::optional<BismutWeight> accumulate_weight(const FlowTrajectory& trajectory, const CoefficientField& field,
                                              const PathRealization& realization, const ResolvedClock& clock,
                                              double t) {
  const double normalizer = clock.normalizer(t);
  if (!(normalizer > 0.0)) return std::nullopt;

  BismutWeight w;
  w.normalizer = normalizer;
  const bool additive = field.additive();
  for (const JumpSnapshot& snap : trajectory.jumps) {
    if (!snap.before.is_directional()) {
      throw std::invalid_argument("weights need directional tangents");
    }
    const std::size_t i = snap.jump_index;
    const double s = realization.path.jumps()[i].time;
    if (s > t) break;
    const Vec& dw = realization.increments[i];
    const Vec* aux = realization.auxiliary.empty() ? nullptr : &realization.auxiliary[i];
    const ClockIncrement inc = clock.increment(i, dw, aux);
    if (inc.dbeta == 0.0 && inc.dlambda == 0.0) continue;

    const Vec& x = snap.before.x;
    const Vec jv = snap.before.tangent.col(0);
    const Mat inv = field.sigma_inverse(s, x);
    w.i1 += inv.lazyProduct(jv).dot(inc.dw_beta);
    if (additive) continue;
    const Mat a = inv.lazyProduct(field.sigma_directional(s, x, jv));
    w.i2 -= a.trace() * inc.dbeta;
    w.i3 += a.lazyProduct(inc.dw_beta).dot(dw);
  }
  return w;
}

std::optional<BismutWeight> accumulate_weight(const FlowTrajectory& trajectory, const CoefficientField& field,
                                              const PathRealization& realization, const ClockSpec& clock, double t) {
  const ResolvedClock resolved(clock, realization.path);
  return accumulate_weight(trajectory, field, realization, resolved, t);
}

namespace {

// Channels per path: f*w, f*I1/n, f*I2/n, f*I3/n, sup |grad_v X|^2, jumps, f.
constexpr std::size_t kChannels = 7;
using Channels = std::array<double, kChannels>;

struct PathOutcome {
  double f_value;
  BismutWeight weight;
  double sup_tangent_sq;
};

double sup_tangent_sq(const FlowTrajectory& traj, const Vec& v) {
  double sup = v.squaredNorm();
  for (const JumpSnapshot& snap : traj.jumps) {
    sup = std::max({sup, snap.before.tangent.squaredNorm(), snap.after.tangent.squaredNorm()});
  }
  return std::max(sup, traj.final_state.tangent.squaredNorm());
}

std::optional<PathOutcome> evaluate(const GradientProblem& problem, const PathRealization& realization,
                                    const ResolvedClock& clock, int substeps, FlowTrajectory& traj) {
  simulate_flow_into(traj, FlowState::directional(problem.x, problem.v), *problem.field, realization, problem.t,
                     substeps);
  const auto w = accumulate_weight(traj, *problem.field, realization, clock, problem.t);
  if (!w) return std::nullopt;
  return PathOutcome{problem.f(traj.final_state.x), *w, sup_tangent_sq(traj, problem.v)};
}

void mirror(PathRealization& realization) {
  for (Vec& dw : realization.increments) dw = -dw;
  for (Vec& z : realization.auxiliary) z = -z;
}

// Evaluates one path (and its mirror when antithetic) into channel values.
std::optional<Channels> path_channels(const GradientProblem& problem, PathRealization& realization,
                                      const ResolvedClock& clock, const MonteCarloOptions& options,
                                      FlowTrajectory& traj, std::size_t index, std::vector<SampleRow>* samples) {
  auto first = evaluate(problem, realization, clock, options.substeps_per_unit, traj);
  if (!first) return std::nullopt;
  std::optional<PathOutcome> second;
  if (options.antithetic) {
    mirror(realization);
    second = evaluate(problem, realization, clock, options.substeps_per_unit, traj);
    mirror(realization);
    if (!second) return std::nullopt;
  }

  auto terms = [](const PathOutcome& o) {
    const double n = o.weight.normalizer;
    return Channels{o.f_value * o.weight.weight(), o.f_value * o.weight.i1 / n, o.f_value * o.weight.i2 / n,
                    o.f_value * o.weight.i3 / n, o.sup_tangent_sq, 0.0, o.f_value};
  };
  Channels values = terms(*first);
  if (second) {
    const Channels other = terms(*second);
    for (std::size_t k = 0; k < kChannels; ++k) values[k] = 0.5 * (values[k] + other[k]);
  }
  values[5] = static_cast<double>(realization.path.count_until(problem.t));

  if (samples != nullptr && index < samples->size()) {
    const PathOutcome& o = *first;
    (*samples)[index] = SampleRow{index, o.f_value, o.weight.weight(), o.weight.i1,
                                  o.weight.i2, o.weight.i3, o.weight.normalizer};
  }
  return values;
}

EstimatorResult summarize(const ChannelStats<kChannels>& stats) {
  EstimatorResult result = to_result(stats.channels[0], stats.rejected);
  const double total = static_cast<double>(result.n_samples + result.n_rejected);
  const double fraction = total > 0.0 ? static_cast<double>(result.n_rejected) / total : 0.0;
  result.valid = fraction <= kMaxRejectionFraction && result.n_samples > 0;
  result.diagnostics["rejection_fraction"] = fraction;
  const char* names[] = {"I1", "I2", "I3"};
  for (std::size_t k = 0; k < 3; ++k) {
    result.diagnostics[std::string("term_") + names[k] + "_mean"] = stats.channels[k + 1].mean;
    result.diagnostics[std::string("term_") + names[k] + "_se"] = stats.channels[k + 1].std_error();
  }
  result.diagnostics["sup_tangent_sq_mean"] = stats.channels[4].mean;
  result.diagnostics["sup_tangent_sq_se"] = stats.channels[4].std_error();
  result.diagnostics["mean_jump_count"] = stats.channels[5].mean;
  result.diagnostics["f_mean"] = stats.channels[6].mean;
  return result;
}

void check_problem(const GradientProblem& problem) {
  if (!problem.field) throw std::invalid_argument("gradient problem has no coefficient field");
  const int d = problem.field->dimension();
  if (problem.x.size() != d || problem.v.size() != d) {
    throw std::invalid_argument("x and v must match the field dimension");
  }
  if (!(problem.t > 0.0)) throw std::invalid_argument("t must be positive");
  if (!problem.f.eval) throw std::invalid_argument("test function is empty");
}

}  // namespace

EstimatorResult estimate_gradient(const GradientProblem& problem, const BernsteinSpec& spec, double level,
                                  double eps_cut, const MonteCarloOptions& options, std::vector<SampleRow>* samples) {
  check_problem(problem);
  if (spec.kind() != BernsteinSpec::Kind::kAlphaStable) {
    throw std::invalid_argument("random-clock gradient estimation needs an alpha-stable spec");
  }
  if (!(eps_cut > 0.0)) throw std::invalid_argument("eps_cut must be positive");
  const double R = level > 0.0 ? level : default_level_R(spec, problem.t);
  const ClockSpec clock = ClockSpec::cap_at_first_passage(R);
  const int d = problem.field->dimension();
  if (samples != nullptr) samples->assign(std::min(options.capture_samples, options.n_paths), SampleRow{});

  auto stats = run_paths<kChannels>(options.n_paths, options.workers, [&](std::size_t i) {
    thread_local PathRealization realization;
    thread_local FlowTrajectory traj;
    RngStream clock_rng(options.seed, i, StreamPurpose::kClock);
    RngStream noise_rng(options.seed, i, StreamPurpose::kIncrements);
    const JumpPath path = sample_jump_path(spec, problem.t, eps_cut, clock_rng);
    sample_increments_into(realization, path, d, noise_rng);
    const ResolvedClock resolved(clock, realization.path);
    return path_channels(problem, realization, resolved, options, traj, i, samples);
  });

  EstimatorResult result = summarize(stats);
  const double alpha = spec.alpha();
  const double scale = std::pow(problem.t, 2.0 / alpha);
  result.diagnostics["eps_cut"] = eps_cut;
  result.diagnostics["level_R"] = R;
  result.diagnostics["expected_jump_count"] = problem.t * levy_tail_mass(alpha, eps_cut);
  result.diagnostics["dropped_clock_mass_mean"] = dropped_mass_mean(alpha, eps_cut, problem.t);
  result.diagnostics["dropped_clock_mass_relative"] = dropped_mass_mean(alpha, eps_cut, problem.t) / scale;
  return result;
}

EstimatorResult estimate_gradient_fixed_clock(const GradientProblem& problem, const JumpPath& path,
                                              const ClockSpec& clock, const MonteCarloOptions& options,
                                              std::vector<SampleRow>* samples) {
  check_problem(problem);
  if (path.compensation_drift() != 0.0) throw std::invalid_argument("fixed clock must be pure-jump");
  if (problem.t > path.horizon()) throw std::invalid_argument("t exceeds the path horizon");
  const ResolvedClock probe(clock, path);
  if (!(probe.normalizer(problem.t) > 0.0)) {
    throw std::invalid_argument("beta(l_t) = 0: the derivative formula needs beta(l_t) > 0");
  }
  const int d = problem.field->dimension();
  if (samples != nullptr) samples->assign(std::min(options.capture_samples, options.n_paths), SampleRow{});

  auto stats = run_paths<kChannels>(options.n_paths, options.workers, [&](std::size_t i) {
    thread_local PathRealization realization;
    thread_local FlowTrajectory traj;
    RngStream noise_rng(options.seed, i, StreamPurpose::kIncrements);
    sample_increments_into(realization, path, d, noise_rng, clock.kind() == ClockSpec::Kind::kPiecewiseLinear);
    const ResolvedClock resolved(clock, realization.path);
    return path_channels(problem, realization, resolved, options, traj, i, samples);
  });

  EstimatorResult result = summarize(stats);
  result.diagnostics["normalizer"] = probe.normalizer(problem.t);
  result.diagnostics["clock_value"] = path.value(problem.t);
  return result;
}

double stable_unit_median(double alpha) {
  static std::mutex mutex;
  static std::map<double, double> cache;
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(alpha); it != cache.end()) return it->second;
  }
  constexpr std::size_t kPaths = 10000;
  constexpr std::uint64_t kSeed = 0x5eed0fc10c4ULL;
  const BernsteinSpec spec = BernsteinSpec::alpha_stable(alpha);
  const double eps = eps_for_expected_jumps(alpha, 1.0, 1000.0);
  std::vector<double> values(kPaths);
  for (std::size_t i = 0; i < kPaths; ++i) {
    RngStream rng(kSeed, i, StreamPurpose::kInternal);
    values[i] = compensate_small_jumps(sample_jump_path(spec, 1.0, eps, rng), spec, eps).value(1.0);
  }
  std::nth_element(values.begin(), values.begin() + kPaths / 2, values.end());
  const double median = values[kPaths / 2];
  std::lock_guard<std::mutex> lock(mutex);
  cache.emplace(alpha, median);
  return median;
}

double default_level_R(const BernsteinSpec& spec, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
  switch (spec.kind()) {
    case BernsteinSpec::Kind::kAlphaStable:
      return stable_unit_median(spec.alpha()) * std::pow(t, 2.0 / spec.alpha());
    case BernsteinSpec::Kind::kDriftOnly:
      return spec.rate() * t;
    case BernsteinSpec::Kind::kCustom:
      break;
  }
  throw std::invalid_argument("custom Bernstein specs need an explicit level R");
}

}  // namespace levygrad
