#include "lrmipt/meanfield.hpp"

#include <cmath>

#include "lrmipt/constants.hpp"
#include "lrmipt/errors.hpp"

namespace lrmipt {

const char* to_string(Phase p) {
  switch (p) {
    case Phase::Symmetric: return "symmetric";
    case Phase::Broken: return "broken";
    case Phase::Critical: return "critical";
  }
  return "?";
}

MeanFieldParams MeanFieldParams::make(const CouplingSpec& spec, double gamma) {
  spec.validate();
  MeanFieldParams p;
  p.spec = spec;
  p.gamma = gamma;
  const double j0 = couplings::j_hat_k(spec, 0.0);
  p.Gamma = gamma / j0;
  p.Jcal = 27.0 * spec.J / (16.0 * j0);
  p.validate();
  return p;
}

void MeanFieldParams::validate() const {
  if (!(Gamma >= 0.0) || !std::isfinite(Gamma)) throw DomainError("MeanFieldParams: Gamma < 0");
  if (!(Jcal > 0.0) || !std::isfinite(Jcal)) throw DomainError("MeanFieldParams: Jcal invalid");
}

namespace meanfield {

RbitPropagator rbit_log_propagator(const Eigen::VectorXd& phi, const Eigen::VectorXd& theta,
                                   double T, const RbitBoundary& boundary, double B) {
  const Eigen::Index n = phi.size();
  if (n == 0 || theta.size() != n || !(T > 0.0))
    throw DomainError("rbit_log_propagator: need matching non-empty samples and T > 0");
  const double dt = T / n;
  const double peak = std::max(phi.cwiseAbs().maxCoeff(), theta.cwiseAbs().maxCoeff());
  if (peak > 0.0 && dt > tol::propagator_step_ratio / peak)
    throw DomainError("rbit_log_propagator: time step too coarse for the field amplitude");

  Eigen::Matrix2d P = Eigen::Matrix2d::Identity();
  double log_scale = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    // exp[(dt/2)(φσˣ + Θσᶻ)], exact for a constant step
    const double x = 0.5 * dt * phi(i), z = 0.5 * dt * theta(i);
    const double a = std::hypot(x, z);
    const double c = std::cosh(a), s = a > 0.0 ? std::sinh(a) / a : 1.0;
    Eigen::Matrix2d E;
    E << c + s * z, s * x, s * x, c - s * z;
    P = E * P;
    const double m = P.cwiseAbs().maxCoeff();
    P /= m;
    log_scale += std::log(m);
  }
  double v = boundary.kind == RbitBoundary::Kind::TraceClosure
                 ? P.trace()
                 : boundary.final.dot(P * boundary.initial);
  return {log_scale + std::log(std::abs(v)), 0.5 * B * T};
}

double bulk_action(double phi, double theta, const MeanFieldParams& p) {
  return p.Jcal * (phi * phi - 3.0 * theta * theta) - 9.0 * (p.Gamma + 1.0 / 9.0) * theta -
         0.5 * std::hypot(phi, theta);
}

Eigen::Vector2d bulk_gradient(double phi, double theta, const MeanFieldParams& p) {
  const double R = std::hypot(phi, theta);
  return {2.0 * p.Jcal * phi - phi / (2.0 * R),
          -6.0 * p.Jcal * theta - (9.0 * p.Gamma + 1.0) - theta / (2.0 * R)};
}

Eigen::Matrix2d bulk_hessian(double phi, double theta, const MeanFieldParams& p) {
  const double R = std::hypot(phi, theta), R3 = R * R * R;
  Eigen::Matrix2d h;
  h(0, 0) = 2.0 * p.Jcal - 1.0 / (2.0 * R) + phi * phi / (2.0 * R3);
  h(1, 1) = -6.0 * p.Jcal - 1.0 / (2.0 * R) + theta * theta / (2.0 * R3);
  h(0, 1) = h(1, 0) = phi * theta / (2.0 * R3);
  return h;
}

namespace {

// Θ solving ∂_Θ I = 0 at fixed φ; ∂_Θ I is strictly decreasing in Θ
double theta_given_phi(double phi, const MeanFieldParams& p) {
  double lo = -1.0, hi = 0.0;
  while (bulk_gradient(phi, lo, p)(1) < 0.0) lo *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16 * std::abs(lo); ++it) {
    const double mid = 0.5 * (lo + hi);
    (bulk_gradient(phi, mid, p)(1) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

bool newton(double& phi, double& theta, const MeanFieldParams& p, bool phi_free) {
  for (int it = 0; it < tol::newton_max_iterations; ++it) {
    Eigen::Vector2d g = bulk_gradient(phi, theta, p);
    if (!phi_free) g(0) = 0.0;
    const double norm = g.norm();
    if (norm < 0.1 * tol::saddle_residual) return true;
    Eigen::Vector2d step;
    if (phi_free) {
      step = bulk_hessian(phi, theta, p).partialPivLu().solve(-g);
    } else {
      step = {0.0, -g(1) / bulk_hessian(phi, theta, p)(1, 1)};
    }
    double t = 1.0;
    for (int k = 0; k < 40; ++k, t *= 0.5) {
      Eigen::Vector2d gn = bulk_gradient(phi + t * step(0), theta + t * step(1), p);
      if (!phi_free) gn(0) = 0.0;
      if (gn.allFinite() && gn.norm() < norm) break;
    }
    phi += t * step(0);
    theta += t * step(1);
    if (!std::isfinite(phi) || !std::isfinite(theta)) return false;
  }
  Eigen::Vector2d g = bulk_gradient(phi, theta, p);
  if (!phi_free) g(0) = 0.0;
  return g.norm() < tol::saddle_residual;
}

}  // namespace

MeanFieldPoint symmetric_saddle(const MeanFieldParams& p) {
  p.validate();
  MeanFieldPoint m;
  m.phi = 0.0;
  m.theta = -3.0 * (Gamma_c + 2.0 * p.Gamma) / (4.0 * p.Jcal);
  newton(m.phi, m.theta, p, false);
  m.residual = std::abs(bulk_gradient(0.0, m.theta, p)(1));
  m.phase = std::abs(p.Gamma - Gamma_c) <= tol::critical_band ? Phase::Critical
            : p.Gamma > Gamma_c                                ? Phase::Symmetric
                                                               : Phase::Broken;
  if (m.residual >= tol::saddle_residual)
    throw ConvergenceError("symmetric saddle did not converge", m.residual);
  return m;
}

MeanFieldPoint solve_saddle(const MeanFieldParams& p) {
  p.validate();
  if (p.Gamma >= Gamma_c - tol::critical_band) return symmetric_saddle(p);

  MeanFieldPoint m;
  m.phase = Phase::Broken;
  m.paired = true;
  const double r = 1.0 / (4.0 * p.Jcal);
  m.theta = -9.0 * (Gamma_c + p.Gamma) / (8.0 * p.Jcal);
  m.phi = std::sqrt(std::max(r * r - m.theta * m.theta, 0.0));
  if (!newton(m.phi, m.theta, p, true) || m.phi <= 0.0) {
    // fallback: bisection on the amplitude equation 2𝒥 − 1/(2R) = 0 along Θ(φ)
    double lo = 0.0, hi = r;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double th = theta_given_phi(mid, p);
      (2.0 * p.Jcal - 1.0 / (2.0 * std::hypot(mid, th)) < 0.0 ? lo : hi) = mid;
    }
    m.phi = 0.5 * (lo + hi);
    m.theta = theta_given_phi(m.phi, p);
    newton(m.phi, m.theta, p, true);
  }
  m.phi = std::abs(m.phi);
  m.residual = bulk_gradient(m.phi, m.theta, p).norm();
  if (!(m.residual < tol::saddle_residual))
    throw ConvergenceError("broken saddle did not converge", m.residual);
  return m;
}

double gamma_c(const CouplingSpec& spec) {
  spec.validate();
  return couplings::j_hat_k(spec, 0.0) / 9.0;
}

LgCoefficients lg_coefficients(const MeanFieldParams& p, const KernelFit& kernel) {
  const double a = std::abs(symmetric_saddle(p).theta);
  const double a3 = a * a * a;
  LgCoefficients c;
  const double e = std::exp(-kernel.mu);
  c.beta = 4.0 * a3 * p.Jcal * e * e / ((1.0 + e) * (1.0 + e));
  c.b = 4.0 * a3 * (27.0 / 16.0) * p.spec.J * kernel.tail_amplitude;
  c.delta = 8.0 * a3 * (1.0 / (4.0 * a) - p.Jcal);
  return c;
}

}  // namespace meanfield
}  // namespace lrmipt
