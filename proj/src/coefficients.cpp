#include "levygrad/coefficients.hpp"

#include <cmath>
#include <stdexcept>

#include "levygrad/rng.hpp"

namespace levygrad {

Mat CoefficientField::sigma_directional(double t, const Vec& x, const Vec& u) const {
  const int d = dimension();
  Mat out = Mat::Zero(d, d);
  const std::vector<Mat> grad = sigma_gradient(t, x);
  for (int k = 0; k < d; ++k) out += u(k) * grad[static_cast<std::size_t>(k)];
  return out;
}

Mat directional_sigma_derivative(const CoefficientField& field, const Vec& u, double t, const Vec& x) {
  return field.sigma_directional(t, x, u);
}

namespace {

class AdditiveIdentity final : public CoefficientField {
 public:
  explicit AdditiveIdentity(int d) : d_(d) {}
  std::string name() const override { return "additive_identity"; }
  int dimension() const override { return d_; }
  Vec drift(double, const Vec&) const override { return Vec::Zero(d_); }
  Mat drift_jacobian(double, const Vec&) const override { return Mat::Zero(d_, d_); }
  Mat sigma(double, const Vec&) const override { return Mat::Identity(d_, d_); }
  std::vector<Mat> sigma_gradient(double, const Vec&) const override {
    return std::vector<Mat>(static_cast<std::size_t>(d_), Mat::Zero(d_, d_));
  }
  Mat sigma_directional(double, const Vec&, const Vec&) const override { return Mat::Zero(d_, d_); }
  Mat sigma_inverse(double, const Vec&) const override { return Mat::Identity(d_, d_); }
  bool additive() const override { return true; }
  bool zero_drift() const override { return true; }
  double growth_m() const override { return 0.0; }
  double growth_c(double) const override { return 1.0; }

 private:
  int d_;
};

class OuAdditive final : public CoefficientField {
 public:
  explicit OuAdditive(int d) : d_(d) {}
  std::string name() const override { return "ou_additive"; }
  int dimension() const override { return d_; }
  Vec drift(double, const Vec& x) const override { return -x; }
  Mat drift_jacobian(double, const Vec&) const override { return -Mat::Identity(d_, d_); }
  Mat sigma(double, const Vec&) const override { return Mat::Identity(d_, d_); }
  std::vector<Mat> sigma_gradient(double, const Vec&) const override {
    return std::vector<Mat>(static_cast<std::size_t>(d_), Mat::Zero(d_, d_));
  }
  Mat sigma_directional(double, const Vec&, const Vec&) const override { return Mat::Zero(d_, d_); }
  Mat sigma_inverse(double, const Vec&) const override { return Mat::Identity(d_, d_); }
  bool additive() const override { return true; }
  std::optional<Mat> linear_drift() const override { return Mat(-Mat::Identity(d_, d_)); }
  double growth_m() const override { return 0.0; }
  double growth_c(double) const override { return 1.0; }

 private:
  int d_;
};

// sigma(x) = sqrt(1 + x^2), b = 0.
class Pythagoras1d final : public CoefficientField {
 public:
  std::string name() const override { return "pythagoras_1d"; }
  int dimension() const override { return 1; }
  Vec drift(double, const Vec&) const override { return Vec::Zero(1); }
  Mat drift_jacobian(double, const Vec&) const override { return Mat::Zero(1, 1); }
  Mat sigma(double, const Vec& x) const override { return Mat::Constant(1, 1, root(x)); }
  std::vector<Mat> sigma_gradient(double, const Vec& x) const override {
    return {Mat::Constant(1, 1, x(0) / root(x))};
  }
  Mat sigma_directional(double, const Vec& x, const Vec& u) const override {
    return Mat::Constant(1, 1, u(0) * x(0) / root(x));
  }
  Mat sigma_inverse(double, const Vec& x) const override { return Mat::Constant(1, 1, 1.0 / root(x)); }
  bool zero_drift() const override { return true; }
  double growth_m() const override { return 0.0; }
  double growth_c(double) const override { return 1.0; }

 private:
  static double root(const Vec& x) { return std::sqrt(1.0 + x(0) * x(0)); }
};

// sigma(x) = (1 + kappa tanh(x_1)) I, b(x) = -x.
class BoundedMultiplicative final : public CoefficientField {
 public:
  BoundedMultiplicative(int d, double kappa) : d_(d), kappa_(kappa) {}
  std::string name() const override { return "bounded_multiplicative"; }
  int dimension() const override { return d_; }
  Vec drift(double, const Vec& x) const override { return -x; }
  Mat drift_jacobian(double, const Vec&) const override { return -Mat::Identity(d_, d_); }
  Mat sigma(double, const Vec& x) const override { return scale(x) * Mat::Identity(d_, d_); }
  std::vector<Mat> sigma_gradient(double, const Vec& x) const override {
    std::vector<Mat> grad(static_cast<std::size_t>(d_), Mat::Zero(d_, d_));
    grad[0] = slope(x) * Mat::Identity(d_, d_);
    return grad;
  }
  Mat sigma_directional(double, const Vec& x, const Vec& u) const override {
    return (u(0) * slope(x)) * Mat::Identity(d_, d_);
  }
  Mat sigma_inverse(double, const Vec& x) const override { return Mat::Identity(d_, d_) / scale(x); }
  std::optional<Mat> linear_drift() const override { return Mat(-Mat::Identity(d_, d_)); }
  double growth_m() const override { return 0.0; }
  double growth_c(double) const override { return 1.0 / (1.0 - kappa_); }

 private:
  double scale(const Vec& x) const { return 1.0 + kappa_ * std::tanh(x(0)); }
  double slope(const Vec& x) const {
    const double c = std::cosh(x(0));
    return kappa_ / (c * c);
  }
  int d_;
  double kappa_;
};

}  // namespace

std::vector<std::string> catalog_names() {
  return {"additive_identity", "ou_additive", "pythagoras_1d", "bounded_multiplicative"};
}

std::shared_ptr<const CoefficientField> catalog(const std::string& name, int dimension) {
  if (dimension < 1 || dimension > kMaxDim) {
    throw std::invalid_argument("dimension must lie in [1, " + std::to_string(kMaxDim) + "]");
  }
  if (name == "additive_identity") return std::make_shared<AdditiveIdentity>(dimension);
  if (name == "ou_additive") return std::make_shared<OuAdditive>(dimension);
  if (name == "pythagoras_1d") {
    if (dimension != 1) throw std::invalid_argument("pythagoras_1d is one-dimensional");
    return std::make_shared<Pythagoras1d>();
  }
  if (name == "bounded_multiplicative") {
    return std::make_shared<BoundedMultiplicative>(dimension, kBoundedMultiplicativeKappa);
  }
  throw std::invalid_argument("unknown coefficient field '" + name + "'");
}

FieldCheck check_field(const CoefficientField& field, int n_points, double h, std::uint64_t seed,
                       double radius, double t_max) {
  const int d = field.dimension();
  FieldCheck out;
  for (int p = 0; p < n_points; ++p) {
    RngStream rng(seed, static_cast<std::uint64_t>(p), StreamPurpose::kInternal);
    const double t = t_max * rng.uniform();
    Vec x(d);
    for (int i = 0; i < d; ++i) x(i) = radius * (2.0 * rng.uniform() - 1.0);

    const Mat sig = field.sigma(t, x);
    const Mat inv = field.sigma_inverse(t, x);
    out.max_inverse_residual =
        std::max(out.max_inverse_residual, (sig * inv - Mat::Identity(d, d)).cwiseAbs().maxCoeff());

    const Mat jb = field.drift_jacobian(t, x);
    const std::vector<Mat> js = field.sigma_gradient(t, x);
    for (double step : {h, 0.5 * h}) {
      double drift_err = 0.0;
      double sigma_err = 0.0;
      for (int k = 0; k < d; ++k) {
        Vec xp = x, xm = x;
        xp(k) += step;
        xm(k) -= step;
        const Vec db = (field.drift(t, xp) - field.drift(t, xm)) / (2.0 * step);
        drift_err = std::max(drift_err, (db - jb.col(k)).cwiseAbs().maxCoeff());
        const Mat ds = (field.sigma(t, xp) - field.sigma(t, xm)) / (2.0 * step);
        sigma_err = std::max(sigma_err, (ds - js[static_cast<std::size_t>(k)]).cwiseAbs().maxCoeff());
      }
      if (step == h) {
        out.max_drift_fd_error = std::max(out.max_drift_fd_error, drift_err);
        out.max_sigma_fd_error = std::max(out.max_sigma_fd_error, sigma_err);
      } else {
        out.max_drift_fd_error_half = std::max(out.max_drift_fd_error_half, drift_err);
        out.max_sigma_fd_error_half = std::max(out.max_sigma_fd_error_half, sigma_err);
      }
    }

    Vec u(d);
    for (int i = 0; i < d; ++i) u(i) = rng.normal();
    Mat contracted = Mat::Zero(d, d);
    for (int k = 0; k < d; ++k) contracted += u(k) * js[static_cast<std::size_t>(k)];
    out.max_directional_mismatch = std::max(
        out.max_directional_mismatch, (field.sigma_directional(t, x, u) - contracted).cwiseAbs().maxCoeff());

    const double inv_norm = inv.jacobiSvd().singularValues()(0);
    const double bound = field.growth_c(t) * (1.0 + std::pow(x.norm(), field.growth_m()));
    out.max_growth_ratio = std::max(out.max_growth_ratio, inv_norm / bound);

    out.observed_drift_gradient_norm =
        std::max(out.observed_drift_gradient_norm, jb.jacobiSvd().singularValues()(0));
    double sigma_grad_norm = 0.0;
    for (const Mat& g : js) sigma_grad_norm = std::max(sigma_grad_norm, g.jacobiSvd().singularValues()(0));
    out.observed_sigma_gradient_norm = std::max(out.observed_sigma_gradient_norm, sigma_grad_norm);
  }
  return out;
}

}  // namespace levygrad
