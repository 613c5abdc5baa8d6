#pragma once

#include <Eigen/Dense>

namespace lrmipt::fit {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
};

LinearFit linear(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// slope of log|y| against log x
LinearFit loglog(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// y ≈ volume·x + amplitude·x^exponent + constant. The linear column is
// optional; the exponent is scanned over [lo, hi] and refined by golden section.
struct PowerLawFit {
  double volume = 0.0;
  double amplitude = 0.0;
  double exponent = 0.0;
  double constant = 0.0;
  double rms = 0.0;
};

PowerLawFit power_law(const Eigen::VectorXd& x, const Eigen::VectorXd& y, bool with_volume,
                      double lo, double hi);

// y ≈ amplitude·tanh((x − center)/width)
struct TanhFit {
  double amplitude = 0.0;
  double center = 0.0;
  double width = 0.0;
  double rms = 0.0;
};

TanhFit tanh_profile(const Eigen::VectorXd& x, const Eigen::VectorXd& y, TanhFit guess);

}  // namespace lrmipt::fit
