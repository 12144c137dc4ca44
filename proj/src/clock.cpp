#include "levygrad/clock.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace levygrad {

ClockSpec ClockSpec::cap_at_first_passage(double level) {
  if (!(level > 0.0) || !std::isfinite(level)) {
    throw std::invalid_argument("first-passage level R must be positive and finite");
  }
  ClockSpec clock;
  clock.kind_ = Kind::kCapAtFirstPassage;
  clock.level_ = level;
  return clock;
}

ClockSpec ClockSpec::piecewise_linear(std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 2) throw std::invalid_argument("piecewise clock needs at least two knots");
  if (knots.front().first != 0.0 || knots.front().second != 0.0) {
    throw std::invalid_argument("piecewise clock must start at (0, 0)");
  }
  for (std::size_t k = 1; k < knots.size(); ++k) {
    if (!(knots[k].first > knots[k - 1].first)) {
      throw std::invalid_argument("piecewise clock knots must be strictly increasing in u");
    }
    if (!(knots[k].second >= knots[k - 1].second) || !std::isfinite(knots[k].second)) {
      throw std::invalid_argument("piecewise clock must be nondecreasing and finite");
    }
  }
  ClockSpec clock;
  clock.kind_ = Kind::kPiecewiseLinear;
  clock.knots_ = std::move(knots);
  return clock;
}

ResolvedClock::ResolvedClock(const ClockSpec& clock, const JumpPath& path)
    : path_(&path), kind_(clock.kind()) {
  if (kind_ == ClockSpec::Kind::kCapAtFirstPassage) {
    if (auto passage = first_passage(path, clock.level())) {
      cap_ = passage->value_at;
      passage_index_ = path.count_until(passage->tau) - 1;
    }
    return;
  }
  for (const auto& [u, b] : clock.knots()) {
    knot_u_.push_back(u);
    knot_beta_.push_back(b);
  }
  knot_lambda_.push_back(0.0);
  for (std::size_t k = 1; k < knot_u_.size(); ++k) {
    const double slope = (knot_beta_[k] - knot_beta_[k - 1]) / (knot_u_[k] - knot_u_[k - 1]);
    slopes_.push_back(slope);
    knot_lambda_.push_back(knot_lambda_.back() + slope * slope * (knot_u_[k] - knot_u_[k - 1]));
  }
}

namespace {

// Index of the linear piece containing u (the last piece extends to infinity).
std::size_t piece_of(const std::vector<double>& knot_u, double u) {
  auto it = std::upper_bound(knot_u.begin(), knot_u.end(), u);
  const auto idx = static_cast<std::size_t>(it - knot_u.begin());
  return std::min(idx == 0 ? 0 : idx - 1, knot_u.size() - 2);
}

}  // namespace

double ResolvedClock::beta(double u) const {
  if (kind_ == ClockSpec::Kind::kCapAtFirstPassage) return std::min(u, cap_);
  const std::size_t k = piece_of(knot_u_, u);
  return knot_beta_[k] + slopes_[k] * (u - knot_u_[k]);
}

double ResolvedClock::lambda(double u) const {
  if (kind_ == ClockSpec::Kind::kCapAtFirstPassage) return std::min(u, cap_);
  const std::size_t k = piece_of(knot_u_, u);
  return knot_lambda_[k] + slopes_[k] * slopes_[k] * (u - knot_u_[k]);
}

ClockIncrement ResolvedClock::increment(std::size_t i, const Vec& dw, const Vec* auxiliary) const {
  ClockIncrement out;
  const double size = path_->jumps()[i].size;
  if (kind_ == ClockSpec::Kind::kCapAtFirstPassage) {
    if (passage_index_ == kNoPassage || i <= passage_index_) {
      out.dbeta = size;
      out.dlambda = size;
      out.dw_beta = dw;
    } else {
      out.dw_beta = Vec::Zero(dw.size());
    }
    return out;
  }
  const double left = i == 0 ? 0.0 : path_->cumulative(i - 1);
  const double right = path_->cumulative(i);
  out.dbeta = beta(right) - beta(left);
  out.dlambda = lambda(right) - lambda(left);
  const double coupling = out.dbeta / size;
  double residual = out.dlambda - out.dbeta * coupling;
  if (residual <= 1e-12 * std::max(out.dlambda, 1e-300)) residual = 0.0;
  out.dw_beta = coupling * dw;
  if (residual > 0.0) {
    if (auxiliary == nullptr) {
      throw std::logic_error("clock straddles a jump but the realization has no auxiliary normals");
    }
    out.dw_beta += std::sqrt(residual) * (*auxiliary);
  }
  return out;
}

}  // namespace levygrad
