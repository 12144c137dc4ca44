#include "levygrad/subordinator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace levygrad {

BernsteinSpec BernsteinSpec::alpha_stable(double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0)) {
    throw std::invalid_argument("alpha must lie in (0, 2), got " + std::to_string(alpha));
  }
  BernsteinSpec spec;
  spec.kind_ = Kind::kAlphaStable;
  spec.param_ = alpha;
  spec.label_ = "alpha_stable";
  return spec;
}

BernsteinSpec BernsteinSpec::drift_only(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw std::invalid_argument("drift rate must be positive and finite");
  }
  BernsteinSpec spec;
  spec.kind_ = Kind::kDriftOnly;
  spec.param_ = rate;
  spec.label_ = "drift_only";
  return spec;
}

BernsteinSpec BernsteinSpec::custom(std::function<double(double)> evaluator, std::string label) {
  if (!evaluator) throw std::invalid_argument("custom Bernstein evaluator is empty");
  BernsteinSpec spec;
  spec.kind_ = Kind::kCustom;
  spec.custom_ = std::move(evaluator);
  spec.label_ = std::move(label);
  check_bernstein(spec);
  return spec;
}

double BernsteinSpec::alpha() const {
  if (kind_ != Kind::kAlphaStable) throw std::invalid_argument("spec is not alpha-stable");
  return param_;
}

double BernsteinSpec::rate() const {
  if (kind_ != Kind::kDriftOnly) throw std::invalid_argument("spec is not drift-only");
  return param_;
}

double BernsteinSpec::operator()(double u) const {
  switch (kind_) {
    case Kind::kAlphaStable:
      return std::pow(u, 0.5 * param_);
    case Kind::kDriftOnly:
      return param_ * u;
    case Kind::kCustom:
      return custom_(u);
  }
  return 0.0;
}

void check_bernstein(const BernsteinSpec& spec) {
  const double at_zero = spec(0.0);
  if (std::abs(at_zero) > 1e-12) {
    throw std::invalid_argument("Bernstein function must vanish at 0, B(0) = " + std::to_string(at_zero));
  }
  double previous = at_zero;
  for (int k = -12; k <= 12; ++k) {
    for (double mantissa : {1.0, 2.5, 5.0}) {
      const double u = mantissa * std::pow(10.0, k);
      const double value = spec(u);
      if (!std::isfinite(value) || value < previous - 1e-12 * std::abs(previous)) {
        throw std::invalid_argument("Bernstein function is not nondecreasing near u = " + std::to_string(u));
      }
      previous = value;
    }
  }
}

// ---------------------------------------------------------------------------
// JumpPath

JumpPath::JumpPath(double horizon, std::vector<Jump> jumps, double compensation_drift)
    : horizon_(horizon), jumps_(std::move(jumps)), drift_(compensation_drift) {
  if (!(horizon_ >= 0.0) || !std::isfinite(horizon_)) {
    throw std::invalid_argument("jump path horizon must be finite and nonnegative");
  }
  if (!(drift_ >= 0.0)) throw std::invalid_argument("compensation drift must be nonnegative");
  cumulative_.reserve(jumps_.size());
  double running = 0.0;
  double last_time = 0.0;
  for (const Jump& jump : jumps_) {
    if (!(jump.time > last_time) || jump.time > horizon_) {
      throw std::invalid_argument("jump times must be strictly increasing in (0, horizon]");
    }
    if (!(jump.size > 0.0) || !std::isfinite(jump.size)) {
      throw std::invalid_argument("jump sizes must be positive and finite");
    }
    running += jump.size;
    cumulative_.push_back(running);
    last_time = jump.time;
  }
}

std::size_t JumpPath::count_until(double t) const {
  auto it = std::upper_bound(jumps_.begin(), jumps_.end(), t,
                             [](double value, const Jump& jump) { return value < jump.time; });
  return static_cast<std::size_t>(it - jumps_.begin());
}

double JumpPath::value(double t) const {
  if (t <= 0.0) return 0.0;
  const std::size_t n = count_until(t);
  const double jumps = n == 0 ? 0.0 : cumulative_[n - 1];
  return drift_ * t + jumps;
}

double JumpPath::value_before(double t) const {
  if (t <= 0.0) return 0.0;
  auto it = std::lower_bound(jumps_.begin(), jumps_.end(), t,
                             [](const Jump& jump, double value) { return jump.time < value; });
  const auto n = static_cast<std::size_t>(it - jumps_.begin());
  const double jumps = n == 0 ? 0.0 : cumulative_[n - 1];
  return drift_ * t + jumps;
}

JumpPath JumpPath::with_drift(double drift) const { return JumpPath(horizon_, jumps_, drift); }

// ---------------------------------------------------------------------------
// Levy measure of the stable subordinator

namespace {

void require_stable_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw std::invalid_argument("alpha must lie in (0, 2)");
}

}  // namespace

double levy_density(double alpha, double x) {
  require_stable_alpha(alpha);
  if (x <= 0.0) return 0.0;
  const double a = 0.5 * alpha;
  return a / std::tgamma(1.0 - a) * std::pow(x, -1.0 - a);
}

double levy_tail_mass(double alpha, double eps) {
  require_stable_alpha(alpha);
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  const double a = 0.5 * alpha;
  return std::pow(eps, -a) / std::tgamma(1.0 - a);
}

double dropped_mass_mean(double alpha, double eps, double horizon) {
  require_stable_alpha(alpha);
  if (eps <= 0.0) return 0.0;
  const double a = 0.5 * alpha;
  return horizon * a * std::pow(eps, 1.0 - a) / ((1.0 - a) * std::tgamma(1.0 - a));
}

double dropped_mass_variance(double alpha, double eps, double horizon) {
  require_stable_alpha(alpha);
  if (eps <= 0.0) return 0.0;
  const double a = 0.5 * alpha;
  return horizon * a / std::tgamma(1.0 - a) * std::pow(eps, 2.0 - a) / (2.0 - a);
}

double eps_for_expected_jumps(double alpha, double horizon, double jumps) {
  require_stable_alpha(alpha);
  if (!(horizon > 0.0) || !(jumps > 0.0)) {
    throw std::invalid_argument("horizon and jump budget must be positive");
  }
  const double a = 0.5 * alpha;
  return std::pow(jumps * std::tgamma(1.0 - a) / horizon, -1.0 / a);
}

EpsCutChoice default_eps_cut(const BernsteinSpec& spec, double horizon, const EpsCutPolicy& policy) {
  if (spec.kind() != BernsteinSpec::Kind::kAlphaStable) {
    throw std::invalid_argument("default eps_cut is defined for alpha-stable specs only");
  }
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  const double alpha = spec.alpha();
  const double a = 0.5 * alpha;
  const double scale = std::pow(horizon, 1.0 / a);
  const double base = policy.relative_tolerance * scale * (1.0 - a) * std::tgamma(1.0 - a) / (a * horizon);
  double eps = std::pow(base, 1.0 / (1.0 - a));
  bool met = true;
  if (horizon * levy_tail_mass(alpha, eps) > policy.max_expected_jumps) {
    eps = eps_for_expected_jumps(alpha, horizon, policy.max_expected_jumps);
    met = false;
  }
  const double dropped = dropped_mass_mean(alpha, eps, horizon);
  return {eps, horizon * levy_tail_mass(alpha, eps), dropped, dropped / scale, met};
}

// ---------------------------------------------------------------------------
// Sampling and path operations

JumpPath sample_jump_path(const BernsteinSpec& spec, double horizon, double eps_cut, RngStream& rng) {
  if (spec.kind() != BernsteinSpec::Kind::kAlphaStable) {
    throw std::invalid_argument("jump paths can only be sampled for alpha-stable specs");
  }
  if (!(eps_cut > 0.0)) throw std::invalid_argument("eps_cut must be positive");
  if (!(horizon >= 0.0)) throw std::invalid_argument("horizon must be nonnegative");
  if (horizon == 0.0) return JumpPath(0.0, {});

  const double alpha = spec.alpha();
  const double inv_index = -2.0 / alpha;
  const double rate = levy_tail_mass(alpha, eps_cut);

  // Arrival times from exponential gaps, already ordered.
  std::vector<Jump> jumps;
  jumps.reserve(static_cast<std::size_t>(horizon * rate + 4.0 * std::sqrt(horizon * rate) + 8.0));
  double time = 0.0;
  for (;;) {
    const double u = rng.uniform_open_left();
    if (u == 1.0) continue;
    time -= std::log(u) / rate;
    if (time > horizon) break;
    // Pareto tail P(size > y) = (y / eps)^{-alpha/2}.
    const double size = eps_cut * std::pow(rng.uniform_open_left(), inv_index);
    if (!jumps.empty() && jumps.back().time == time) {
      jumps.back().size += size;
    } else {
      jumps.push_back({time, size});
    }
  }
  return JumpPath(horizon, std::move(jumps));
}

JumpPath truncate_jumps(const JumpPath& path, double eps) {
  if (path.compensation_drift() != 0.0) {
    throw std::invalid_argument("truncate_jumps requires a pure-jump path");
  }
  std::vector<Jump> kept;
  kept.reserve(path.size());
  for (const Jump& jump : path.jumps()) {
    if (jump.size >= eps) kept.push_back(jump);
  }
  return JumpPath(path.horizon(), std::move(kept));
}

std::optional<Passage> first_passage(const JumpPath& path, double level) {
  if (!(level > 0.0)) throw std::invalid_argument("passage level must be positive");
  const double drift = path.compensation_drift();
  double before_jumps = 0.0;
  double last_time = 0.0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const Jump& jump = path.jumps()[i];
    if (drift > 0.0) {
      const double crossing = (level - before_jumps) / drift;
      if (crossing <= jump.time && crossing >= last_time) {
        return Passage{crossing, level, level};
      }
    }
    const double left = drift * jump.time + before_jumps;
    const double right = drift * jump.time + path.cumulative(i);
    if (right >= level) return Passage{jump.time, left, right};
    before_jumps = path.cumulative(i);
    last_time = jump.time;
  }
  if (drift > 0.0) {
    const double crossing = (level - before_jumps) / drift;
    if (crossing <= path.horizon()) return Passage{crossing, level, level};
  }
  return std::nullopt;
}

JumpPath compensate_small_jumps(const JumpPath& path, const BernsteinSpec& spec, double eps_cut) {
  return path.with_drift(dropped_mass_mean(spec.alpha(), eps_cut, 1.0));
}

// ---------------------------------------------------------------------------
// Inverse moments

double inverse_moment(const BernsteinSpec& spec, double t, double gamma) {
  if (!(t > 0.0) || !(gamma > 0.0)) throw std::invalid_argument("t and gamma must be positive");
  using Quadrature = boost::math::quadrature::gauss_kronrod<double, 31>;
  constexpr double kTol = 1e-13;
  constexpr unsigned kDepth = 15;

  // (0, 1]: u = w^{1/gamma} removes the u^{gamma-1} singularity.
  auto lower = [&](double w) { return std::exp(-t * spec(std::pow(w, 1.0 / gamma))); };
  const double head = Quadrature::integrate(lower, 0.0, 1.0, kDepth, kTol) / gamma;

  // [1, inf): u = e^y, integrand exp(gamma y - t B(e^y)), marched chunk by chunk.
  auto upper = [&](double y) {
    const double value = std::exp(gamma * y - t * spec(std::exp(y)));
    if (!std::isfinite(value)) throw DivergenceError("inverse moment integrand overflowed");
    return value;
  };
  constexpr double kChunk = 1.0;
  constexpr double kMaxY = 700.0;
  double tail = 0.0;
  double previous_chunk = std::numeric_limits<double>::infinity();
  for (double y = 0.0;; y += kChunk) {
    if (y >= kMaxY) throw DivergenceError("inverse moment integral does not converge");
    const double chunk = Quadrature::integrate(upper, y, y + kChunk, kDepth, kTol);
    tail += chunk;
    const double total = head + tail;
    if (chunk < 1e-17 * total && chunk <= previous_chunk) break;
    previous_chunk = chunk;
  }
  const double result = (head + tail) / std::tgamma(gamma);
  if (!std::isfinite(result)) throw DivergenceError("inverse moment is not finite");
  return result;
}

}  // namespace levygrad
