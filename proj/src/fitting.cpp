#include "lrmipt/fitting.hpp"

#include <cmath>

#include "lrmipt/errors.hpp"

namespace lrmipt::fit {

LinearFit linear(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("linear fit: need >= 2 points");
  const double mx = x.mean(), my = y.mean();
  const Eigen::ArrayXd dx = x.array() - mx;
  const double slope = (dx * (y.array() - my)).sum() / dx.square().sum();
  LinearFit f{slope, my - slope * mx, 0.0};
  f.rms = std::sqrt((y.array() - f.intercept - f.slope * x.array()).square().mean());
  return f;
}

LinearFit loglog(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  return linear(x.array().log().matrix(), y.array().abs().log().matrix());
}

namespace {

struct Solve {
  Eigen::Vector3d c;
  double rms;
};

Solve solve_fixed(const Eigen::VectorXd& x, const Eigen::VectorXd& y, bool with_volume,
                  double e) {
  const int cols = with_volume ? 3 : 2;
  Eigen::MatrixXd m(x.size(), cols);
  int j = 0;
  if (with_volume) m.col(j++) = x;
  m.col(j++) = x.array().pow(e).matrix();
  m.col(j) = Eigen::VectorXd::Ones(x.size());
  const Eigen::VectorXd p = m.colPivHouseholderQr().solve(y);
  Solve s;
  s.c = with_volume ? Eigen::Vector3d(p(0), p(1), p(2)) : Eigen::Vector3d(0.0, p(0), p(1));
  s.rms = std::sqrt((m * p - y).squaredNorm() / x.size());
  return s;
}

}  // namespace

PowerLawFit power_law(const Eigen::VectorXd& x, const Eigen::VectorXd& y, bool with_volume,
                      double lo, double hi) {
  const int need = with_volume ? 4 : 3;
  if (x.size() != y.size() || x.size() < need) throw DomainError("power-law fit: too few points");
  const int grid = 400;
  double best_e = lo, best = INFINITY;
  for (int i = 0; i <= grid; ++i) {
    const double e = lo + (hi - lo) * i / grid;
    const double r = solve_fixed(x, y, with_volume, e).rms;
    if (r < best) best = r, best_e = e;
  }
  const double h = (hi - lo) / grid;
  double a = std::max(lo, best_e - h), b = std::min(hi, best_e + h);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = solve_fixed(x, y, with_volume, c).rms, fd = solve_fixed(x, y, with_volume, d).rms;
  for (int it = 0; it < 80; ++it) {
    if (fc < fd) {
      b = d, d = c, fd = fc;
      c = b - g * (b - a);
      fc = solve_fixed(x, y, with_volume, c).rms;
    } else {
      a = c, c = d, fc = fd;
      d = a + g * (b - a);
      fd = solve_fixed(x, y, with_volume, d).rms;
    }
  }
  const double e = 0.5 * (a + b);
  const Solve s = solve_fixed(x, y, with_volume, e);
  return {s.c(0), s.c(1), e, s.c(2), s.rms};
}

TanhFit tanh_profile(const Eigen::VectorXd& x, const Eigen::VectorXd& y, TanhFit guess) {
  if (x.size() != y.size() || x.size() < 4) throw DomainError("tanh fit: too few points");
  Eigen::Vector3d p(guess.amplitude, guess.center, guess.width);
  auto residual = [&](const Eigen::Vector3d& q) {
    return ((q(0) * ((x.array() - q(1)) / q(2)).tanh()) - y.array()).matrix().eval();
  };
  double lambda = 1e-3;
  Eigen::VectorXd r = residual(p);
  for (int it = 0; it < 200; ++it) {
    const Eigen::ArrayXd u = (x.array() - p(1)) / p(2);
    const Eigen::ArrayXd th = u.tanh();
    const Eigen::ArrayXd sech2 = 1.0 - th.square();
    Eigen::MatrixXd jac(x.size(), 3);
    jac.col(0) = th.matrix();
    jac.col(1) = (-p(0) * sech2 / p(2)).matrix();
    jac.col(2) = (-p(0) * sech2 * u / p(2)).matrix();
    const Eigen::Matrix3d jtj = jac.transpose() * jac;
    const Eigen::Vector3d jtr = jac.transpose() * r;
    bool moved = false;
    for (int k = 0; k < 30; ++k) {
      Eigen::Matrix3d a = jtj;
      a.diagonal() *= 1.0 + lambda;
      const Eigen::Vector3d step = a.ldlt().solve(-jtr);
      const Eigen::Vector3d q = p + step;
      const Eigen::VectorXd rq = residual(q);
      if (rq.squaredNorm() < r.squaredNorm()) {
        p = q, r = rq, lambda *= 0.3, moved = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!moved) break;
  }
  return {p(0), p(1), std::abs(p(2)), std::sqrt(r.squaredNorm() / x.size())};
}

}  // namespace lrmipt::fit
