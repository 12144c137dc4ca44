#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "levygrad/linalg.hpp"

namespace levygrad {

/// Drift b, diffusion sigma, their spatial derivatives and sigma^{-1} for
/// dX = b(t, X) dt + sigma(t, X-) dW_{S_t}. Implementations must be pure and
/// reentrant: one instance is shared read-only across workers.
class CoefficientField {
 public:
  virtual ~CoefficientField() = default;

  virtual std::string name() const = 0;
  virtual int dimension() const = 0;

  virtual Vec drift(double t, const Vec& x) const = 0;
  /// Entry (i, k) = d b_i / d x_k.
  virtual Mat drift_jacobian(double t, const Vec& x) const = 0;
  virtual Mat sigma(double t, const Vec& x) const = 0;
  /// Element k holds the matrix d sigma / d x_k.
  virtual std::vector<Mat> sigma_gradient(double t, const Vec& x) const = 0;
  virtual Mat sigma_inverse(double t, const Vec& x) const = 0;

  /// sum_k u_k d sigma / d x_k. The default contracts sigma_gradient;
  /// fields override it to keep the flow loop allocation-free.
  virtual Mat sigma_directional(double t, const Vec& x, const Vec& u) const;

  /// True when sigma does not depend on x.
  virtual bool additive() const { return false; }
  /// True when b vanishes identically.
  virtual bool zero_drift() const { return false; }
  /// Constant matrix A when b(t, x) = A x.
  virtual std::optional<Mat> linear_drift() const { return std::nullopt; }

  /// m and c_t of the growth bound |sigma_t^{-1}(x)| <= c_t (1 + |x|^m).
  virtual double growth_m() const = 0;
  virtual double growth_c(double t) const = 0;
};

/// Entry (i, j) = sum_k u_k d sigma_ij / d x_k at (t, x).
Mat directional_sigma_derivative(const CoefficientField& field, const Vec& u, double t, const Vec& x);

std::vector<std::string> catalog_names();

/// Built-in analytic fields: additive_identity, ou_additive, pythagoras_1d,
/// bounded_multiplicative. Unknown names throw std::invalid_argument.
std::shared_ptr<const CoefficientField> catalog(const std::string& name, int dimension);

inline constexpr double kBoundedMultiplicativeKappa = 0.25;

// Sampled checks of the field contract. Global suprema are not computable;
// these are maxima over the sample.
struct FieldCheck {
  double max_inverse_residual = 0.0;        // |sigma * sigma_inv - I|
  double max_drift_fd_error = 0.0;          // vs central differences with step h
  double max_drift_fd_error_half = 0.0;     // same with step h/2
  double max_sigma_fd_error = 0.0;
  double max_sigma_fd_error_half = 0.0;
  double max_directional_mismatch = 0.0;    // sigma_directional vs contracted gradient
  double max_growth_ratio = 0.0;            // |sigma_inv| / (c_t (1 + |x|^m))
  double observed_drift_gradient_norm = 0.0;
  double observed_sigma_gradient_norm = 0.0;
};

FieldCheck check_field(const CoefficientField& field, int n_points, double h, std::uint64_t seed,
                       double radius = 3.0, double t_max = 1.0);

}  // namespace levygrad
