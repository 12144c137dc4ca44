#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "levygrad/flow.hpp"
#include "levygrad/linalg.hpp"
#include "levygrad/subordinator.hpp"

namespace levygrad {

/// Deterministic time change beta on the clock axis, with beta(0) = 0,
/// W^beta_u = int_0^u beta'(r) dW_r and lambda^beta(u) = int_0^u beta'(r)^2 dr.
class ClockSpec {
 public:
  enum class Kind { kCapAtFirstPassage, kPiecewiseLinear };

  /// beta(u) = min(u, l_tau) with tau the first passage of the path at R.
  static ClockSpec cap_at_first_passage(double level);
  /// Knots (u_k, beta_k) starting at (0, 0), strictly increasing in u and
  /// nondecreasing in beta; beyond the last knot the last slope continues.
  static ClockSpec piecewise_linear(std::vector<std::pair<double, double>> knots);

  Kind kind() const { return kind_; }
  double level() const { return level_; }
  const std::vector<std::pair<double, double>>& knots() const { return knots_; }

 private:
  ClockSpec() = default;
  Kind kind_ = Kind::kCapAtFirstPassage;
  double level_ = 1.0;
  std::vector<std::pair<double, double>> knots_;
};

struct ClockIncrement {
  double dbeta = 0.0;
  double dlambda = 0.0;
  Vec dw_beta;
};

/// A ClockSpec bound to one jump path.
class ResolvedClock {
 public:
  ResolvedClock(const ClockSpec& clock, const JumpPath& path);

  double beta(double u) const;
  double lambda(double u) const;
  /// beta(l_t), the normalizer of the weight.
  double normalizer(double t) const { return beta(path_->value(t)); }

  /// (Delta beta, Delta lambda, Delta W^beta) over the clock interval of jump
  /// i. For the first-passage cap the pair is degenerate: W^beta = W up to
  /// and including the passage jump, and nothing after. For piecewise clocks
  /// (dW, dW^beta) has per-coordinate covariance [[dl, db], [db, dlambda]]
  /// and dW^beta is built from dW and an independent auxiliary normal.
  ClockIncrement increment(std::size_t i, const Vec& dw, const Vec* auxiliary) const;

  bool passage_found() const { return passage_index_ != kNoPassage; }
  double cap() const { return cap_; }

 private:
  static constexpr std::size_t kNoPassage = std::numeric_limits<std::size_t>::max();
  const JumpPath* path_;
  ClockSpec::Kind kind_;
  double cap_ = std::numeric_limits<double>::infinity();
  std::size_t passage_index_ = kNoPassage;
  std::vector<double> knot_u_;
  std::vector<double> knot_beta_;
  std::vector<double> knot_lambda_;
  std::vector<double> slopes_;
};

}  // namespace levygrad
