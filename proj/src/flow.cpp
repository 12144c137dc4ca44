#include "levygrad/flow.hpp"

#include <optional>

#include <cmath>
#include <sstream>

namespace levygrad {

FlowState FlowState::directional(const Vec& x0, const Vec& v) {
  if (x0.size() != v.size()) throw std::invalid_argument("x0 and v must have the same dimension");
  FlowState state;
  state.x = x0;
  state.tangent = v;
  return state;
}

FlowState FlowState::full_jacobian(const Vec& x0) {
  FlowState state;
  state.x = x0;
  state.tangent = Mat::Identity(x0.size(), x0.size());
  return state;
}

Vec PathRealization::cumulative_noise(double t, int dimension) const {
  Vec total = Vec::Zero(dimension);
  const std::size_t n = path.count_until(t);
  for (std::size_t i = 0; i < n; ++i) total += increments[i];
  return total;
}

void sample_increments_into(PathRealization& out, const JumpPath& path, int dimension, RngStream& rng,
                            bool with_auxiliary) {
  if (path.compensation_drift() != 0.0) {
    throw std::invalid_argument("Brownian increments require a pure-jump clock");
  }
  out.path = path;
  out.increments.resize(path.size());
  for (std::size_t i = 0; i < path.size(); ++i) {
    const double scale = std::sqrt(path.jumps()[i].size);
    Vec& dw = out.increments[i];
    dw.resize(dimension);
    for (int k = 0; k < dimension; ++k) dw(k) = scale * rng.normal();
  }
  out.auxiliary.clear();
  if (with_auxiliary) {
    out.auxiliary.resize(path.size());
    for (Vec& z : out.auxiliary) {
      z.resize(dimension);
      for (int k = 0; k < dimension; ++k) z(k) = rng.normal();
    }
  }
}

PathRealization sample_increments(const JumpPath& path, int dimension, RngStream& rng, bool with_auxiliary) {
  PathRealization out;
  sample_increments_into(out, path, dimension, rng, with_auxiliary);
  return out;
}

namespace {

bool finite(const FlowState& state) { return state.x.allFinite() && state.tangent.allFinite(); }

[[noreturn]] void blow_up(double s) {
  std::ostringstream msg;
  msg << "flow left the finite range at s = " << s;
  throw FlowBlowUp(s, msg.str());
}

void drift_in_place(FlowState& state, const CoefficientField& field, double s0, double s1, int substeps) {
  if (s1 < s0) throw std::invalid_argument("evolve_drift requires s0 <= s1");
  if (substeps < 1) throw std::invalid_argument("substeps must be positive");
  if (s1 == s0 || field.zero_drift()) {
    state.s = s1;
    return;
  }
  const double h = (s1 - s0) / substeps;
  Vec& x = state.x;
  Mat& j = state.tangent;
  if (const std::optional<Mat> a = field.linear_drift()) {
    // For b = A x one RK4 step is multiplication by sum_{k<=4} (hA)^k / k!.
    const int d = static_cast<int>(x.size());
    const Mat ha = h * *a;
    Mat term = Mat::Identity(d, d);
    Mat step = term;
    for (int k = 1; k <= 4; ++k) {
      term = term.lazyProduct(ha) / static_cast<double>(k);
      step += term;
    }
    for (int n = 0; n < substeps; ++n) {
      const Vec nx = step.lazyProduct(x);
      const Mat nj = step.lazyProduct(j);
      x = nx;
      j = nj;
      if (!finite(state)) blow_up(s0 + (n + 1) * h);
    }
    state.s = s1;
    return;
  }
  for (int n = 0; n < substeps; ++n) {
    const double s = s0 + n * h;
    const Vec k1x = field.drift(s, x);
    const Mat k1j = field.drift_jacobian(s, x).lazyProduct(j);

    const Vec x2 = x + 0.5 * h * k1x;
    const Mat j2 = j + 0.5 * h * k1j;
    const Vec k2x = field.drift(s + 0.5 * h, x2);
    const Mat k2j = field.drift_jacobian(s + 0.5 * h, x2).lazyProduct(j2);

    const Vec x3 = x + 0.5 * h * k2x;
    const Mat j3 = j + 0.5 * h * k2j;
    const Vec k3x = field.drift(s + 0.5 * h, x3);
    const Mat k3j = field.drift_jacobian(s + 0.5 * h, x3).lazyProduct(j3);

    const Vec x4 = x + h * k3x;
    const Mat j4 = j + h * k3j;
    const Vec k4x = field.drift(s + h, x4);
    const Mat k4j = field.drift_jacobian(s + h, x4).lazyProduct(j4);

    x += (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    j += (h / 6.0) * (k1j + 2.0 * k2j + 2.0 * k3j + k4j);
    if (!finite(state)) blow_up(s + h);
  }
  state.s = s1;
}

void jump_in_place(FlowState& state, const CoefficientField& field, double s, const Vec& dw) {
  if (dw.size() != state.x.size()) throw std::invalid_argument("jump increment has the wrong dimension");
  const Vec x_before = state.x;
  state.x = x_before + field.sigma(s, x_before).lazyProduct(dw);
  for (int c = 0; c < state.tangent.cols(); ++c) {
    const Vec column = state.tangent.col(c);
    state.tangent.col(c) = column + field.sigma_directional(s, x_before, column).lazyProduct(dw);
  }
  state.s = s;
  if (!finite(state)) blow_up(s);
}

}  // namespace

FlowState evolve_drift(FlowState state, const CoefficientField& field, double s0, double s1, int substeps) {
  drift_in_place(state, field, s0, s1, substeps);
  return state;
}

FlowState apply_jump(FlowState state, const CoefficientField& field, double s, const Vec& dw) {
  jump_in_place(state, field, s, dw);
  return state;
}

void simulate_flow_into(FlowTrajectory& out, FlowState initial, const CoefficientField& field,
                        const PathRealization& realization, double t, int substeps_per_unit) {
  const JumpPath& path = realization.path;
  if (t > path.horizon()) throw std::invalid_argument("simulation time exceeds the path horizon");
  if (path.compensation_drift() != 0.0) {
    throw std::invalid_argument("flow simulation requires a pure-jump clock");
  }
  if (substeps_per_unit < 1) throw std::invalid_argument("substeps_per_unit must be positive");
  if (realization.increments.size() != path.size()) {
    throw std::invalid_argument("realization has one increment per jump");
  }

  auto substeps_for = [&](double length) {
    return std::max(1, static_cast<int>(std::ceil(length * substeps_per_unit - 1e-9)));
  };

  const std::size_t n = path.count_until(t);
  out.jumps.resize(n);
  FlowState& state = out.final_state;
  state = std::move(initial);
  state.s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = path.jumps()[i].time;
    JumpSnapshot& snap = out.jumps[i];
    drift_in_place(state, field, state.s, s, substeps_for(s - state.s));
    snap.jump_index = i;
    snap.before = state;
    jump_in_place(state, field, s, realization.increments[i]);
    snap.after = state;
  }
  drift_in_place(state, field, state.s, t, substeps_for(t - state.s));
}

FlowTrajectory simulate_flow(const Vec& x0, const Vec& v, const CoefficientField& field,
                             const PathRealization& realization, double t, int substeps_per_unit) {
  FlowTrajectory out;
  simulate_flow_into(out, FlowState::directional(x0, v), field, realization, t, substeps_per_unit);
  return out;
}

}  // namespace levygrad
