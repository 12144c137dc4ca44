#pragma once

#include <stdexcept>
#include <vector>

#include "levygrad/coefficients.hpp"
#include "levygrad/linalg.hpp"
#include "levygrad/rng.hpp"
#include "levygrad/subordinator.hpp"

namespace levygrad {

/// (s, X_s, tangent). The tangent is either the full Jacobian (d x d) or
/// the directional derivative along v (d x 1).
struct FlowState {
  double s = 0.0;
  Vec x;
  Mat tangent;

  static FlowState directional(const Vec& x0, const Vec& v);
  static FlowState full_jacobian(const Vec& x0);

  bool is_directional() const { return tangent.cols() == 1; }
  Vec directional_tangent() const { return tangent.col(0); }
};

/// Jump path plus the Brownian increments over each clock jump:
/// increments[i] ~ N(0, size_i I_d). The auxiliary normals, when present,
/// are independent standard normals used to build a second Gaussian
/// correlated with increments[i] (see ClockIncrements).
struct PathRealization {
  JumpPath path;
  std::vector<Vec> increments;
  std::vector<Vec> auxiliary;

  /// W_{S_t}: cumulative sum of increments over jumps with time <= t.
  Vec cumulative_noise(double t, int dimension) const;
};

class FlowBlowUp : public std::runtime_error {
 public:
  FlowBlowUp(double time, const std::string& what) : std::runtime_error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

/// Increments are drawn first, auxiliary normals after them, so the
/// increments do not depend on whether auxiliaries were requested.
PathRealization sample_increments(const JumpPath& path, int dimension, RngStream& rng,
                                  bool with_auxiliary = false);

/// In-place variant reusing the realization's buffers.
void sample_increments_into(PathRealization& out, const JumpPath& path, int dimension, RngStream& rng,
                            bool with_auxiliary = false);

/// Classical RK4 for dX/ds = b(s, X), dT/ds = grad_b(s, X) T on [s0, s1].
FlowState evolve_drift(FlowState state, const CoefficientField& field, double s0, double s1, int substeps);

/// Jump update at time s, with every coefficient taken at the left limit.
FlowState apply_jump(FlowState state, const CoefficientField& field, double s, const Vec& dw);

struct JumpSnapshot {
  std::size_t jump_index = 0;
  FlowState before;
  FlowState after;
};

struct FlowTrajectory {
  std::vector<JumpSnapshot> jumps;
  FlowState final_state;
};

inline constexpr int kDefaultSubstepsPerUnit = 100;

/// Alternates drift evolution and jump updates over jumps with time <= t
/// (a jump exactly at t is included in X_t).
FlowTrajectory simulate_flow(const Vec& x0, const Vec& v, const CoefficientField& field,
                             const PathRealization& realization, double t,
                             int substeps_per_unit = kDefaultSubstepsPerUnit);

/// Same, starting from an arbitrary initial state (e.g. full Jacobian mode).
void simulate_flow_into(FlowTrajectory& out, FlowState initial, const CoefficientField& field,
                        const PathRealization& realization, double t, int substeps_per_unit);

}  // namespace levygrad
