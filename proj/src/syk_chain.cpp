#include "lrmipt/syk_chain.hpp"

#include <cmath>
#include <numbers>

#include "lrmipt/constants.hpp"
#include "lrmipt/couplings.hpp"
#include "lrmipt/errors.hpp"
#include "lrmipt/specfun.hpp"

namespace lrmipt {

SykParams SykParams::make(double J, double U, int q, double gamma, double alpha, double dt) {
  if (q < 2 || q % 2 != 0) throw DomainError("SykParams: q must be an even integer >= 2");
  if (!(alpha > 0.5)) throw DivergenceError("SykParams: zeta(2 alpha) diverges for alpha <= 1/2");
  if (!(J > 0.0) || !(U >= 0.0) || !(gamma >= 0.0) || !(dt > 0.0))
    throw DomainError("SykParams: need J > 0, U >= 0, gamma >= 0, dt > 0");
  SykParams p;
  p.J = J;
  p.U = U;
  p.q = q;
  p.gamma = gamma;
  p.alpha = alpha;
  p.dt = dt;
  p.J_hat = J * specfun::riemann_zeta(2.0 * alpha);
  p.gamma_tilde = gamma / p.J_hat;
  p.U_tilde = U / p.J_hat;
  return p;
}

SykParams SykParams::at(double gamma_tilde, double U_tilde, double alpha, int q) {
  SykParams p = make(1.0, 0.0, q, 0.0, alpha);
  if (!(gamma_tilde >= 0.0) || !(U_tilde >= 0.0)) throw DomainError("SykParams: negative ratios");
  p.gamma_tilde = gamma_tilde;
  p.U_tilde = U_tilde;
  p.gamma = gamma_tilde * p.J_hat;
  p.U = U_tilde * p.J_hat;
  return p;
}

const char* to_string(TransitionOrder o) {
  switch (o) {
    case TransitionOrder::First: return "first";
    case TransitionOrder::Second: return "second";
    case TransitionOrder::Tricritical: return "tricritical";
  }
  return "?";
}

const char* to_string(EntropyForm f) {
  switch (f) {
    case EntropyForm::Log: return "log";
    case EntropyForm::Power: return "power";
    case EntropyForm::Bounded: return "bounded";
  }
  return "?";
}

namespace syk {

double lambda_residual(const SykParams& p, double l) {
  // regrouped so the λ² terms cancel analytically at q = 4, 2Ũ = 1
  const double l2 = l * l;
  const double u = p.U_tilde * std::pow(l, p.q - 2);
  const double lead = p.q == 4 ? l2 * (2.0 * p.U_tilde - 1.0) : 2.0 * u - l2;
  return (1.0 - p.gamma_tilde) * (1.0 + p.gamma_tilde) + lead + u * u - l2 * u * (2.0 + u);
}

namespace {

double lambda_derivative(const SykParams& p, double l) {
  const int m = p.q - 2;
  const double w = 1.0 + p.U_tilde * std::pow(l, m);
  const double dw = m > 0 ? p.U_tilde * m * std::pow(l, m - 1) : 0.0;
  return -2.0 * l * w * w + 2.0 * (1.0 - l * l) * w * dw;
}

double refine(const SykParams& p, double lo, double hi) {
  double flo = lambda_residual(p, lo);
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = lambda_residual(p, mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 5; ++it) {
    const double d = lambda_derivative(p, x);
    if (d == 0.0) break;
    const double xn = x - lambda_residual(p, x) / d;
    if (!(xn > 0.0 && xn <= 1.0) || std::abs(lambda_residual(p, xn)) > std::abs(lambda_residual(p, x))) break;
    x = xn;
  }
  return x;
}

}  // namespace

LambdaSolution solve_lambda(const SykParams& p) {
  LambdaSolution s;
  const int n = tol::lambda_grid_points;
  // uniform grid plus geometric probes below its first cell, where roots
  // born at the tricritical point live
  std::vector<double> grid;
  for (int i = 0; i < tol::lambda_probe_points; ++i)
    grid.push_back(std::pow(10.0, tol::lambda_probe_decades * (i - tol::lambda_probe_points) /
                                      tol::lambda_probe_points) / n);
  for (int i = 1; i <= n; ++i) grid.push_back(static_cast<double>(i) / n);
  double prev_x = 0.0, prev_f = lambda_residual(p, 0.0);
  for (double x : grid) {
    const double f = lambda_residual(p, x);
    if (f == 0.0) {
      s.roots.push_back(x);
    } else if (prev_f != 0.0 && (f > 0.0) != (prev_f > 0.0)) {
      s.roots.push_back(refine(p, prev_x, x));
    }
    prev_x = x;
    prev_f = f;
  }
  for (double r : s.roots) s.residual = std::max(s.residual, std::abs(lambda_residual(p, r)));
  s.multiple = s.roots.size() > 1;
  if (p.gamma_tilde < 1.0 && !s.roots.empty()) s.lambda = s.roots.back();
  if (s.residual >= tol::lambda_residual)
    throw ConvergenceError("solve_lambda: root not polished", s.residual);
  return s;
}

SaddleGreen saddle_green(const SykParams& p, const LambdaSolution& sol, double t12) {
  using C = std::complex<double>;
  Eigen::Matrix2cd sz, isy, ty, id;
  sz << 1, 0, 0, -1;
  isy << 0, 1, -1, 0;
  ty << 0, C(0, -1), C(0, 1), 0;
  id.setIdentity();
  auto kron = [](const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Eigen::Matrix4cd m;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return m;
  };
  const double sgn = t12 > 0.0 ? 1.0 : (t12 < 0.0 ? -1.0 : 0.0);
  SaddleGreen g;
  if (p.gamma_tilde < 1.0) {
    const double l = sol.lambda;
    const double ul = p.q > 2 ? std::pow(l, p.q - 2) : 1.0;
    g.lambda = l;
    g.decay_rate = 0.5 * (p.J_hat + p.U * ul);
    const double c = p.gamma_tilde / (1.0 + p.U_tilde * ul);
    g.matrix = sgn * kron(sz, id) - l * kron(isy, id) + c * kron(id, ty);
  } else {
    g.decay_rate = 0.5 * p.gamma;
    g.matrix = sgn * kron(sz, id) + kron(id, ty);
  }
  g.matrix *= 0.5 * std::exp(-g.decay_rate * std::abs(t12));
  return g;
}

SaddleGreen saddle_green(const SykParams& p, double t12) {
  return saddle_green(p, solve_lambda(p), t12);
}

double stiffness(const SykParams& p) {
  if (p.U != 0.0) throw DomainError("stiffness: defined on the U = 0 branch");
  return std::max(0.0, p.J_hat * (1.0 - p.gamma_tilde * p.gamma_tilde));
}

namespace {

double one_minus_eps(const specfun::UnitCirclePolylog& li, double zeta, double k) {
  if (std::remainder(k, 2.0 * std::numbers::pi) == 0.0) return 0.0;
  return 1.0 - li.real_part(k) / zeta;
}

double action(double rho, double gamma, double Omega, double kin) {
  if (rho == 0.0) return 0.0;
  return 0.5 * rho * (Omega * Omega / (gamma * gamma) + kin);
}

}  // namespace

double goldstone_action_quadratic(const SykParams& p, double k, double Omega) {
  const double rho = stiffness(p);
  if (rho == 0.0) return 0.0;
  if (!(p.gamma > 0.0)) throw DomainError("goldstone_action_quadratic: needs gamma > 0");
  const double kin = std::remainder(k, 2.0 * std::numbers::pi) == 0.0
                         ? 0.0
                         : 1.0 - couplings::epsilon_k(p.alpha, k);
  return action(rho, p.gamma, Omega, kin);
}

Eigen::MatrixXd goldstone_grid(const SykParams& p, const Eigen::VectorXd& ks,
                               const Eigen::VectorXd& Omegas) {
  const double rho = stiffness(p);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(ks.size(), Omegas.size());
  if (rho == 0.0) return out;
  if (!(p.gamma > 0.0)) throw DomainError("goldstone_grid: needs gamma > 0");
  const specfun::UnitCirclePolylog li(2.0 * p.alpha);
  const double zeta = specfun::riemann_zeta(2.0 * p.alpha);
  for (Eigen::Index i = 0; i < ks.size(); ++i) {
    const double kin = one_minus_eps(li, zeta, ks(i));
    for (Eigen::Index j = 0; j < Omegas.size(); ++j) out(i, j) = action(rho, p.gamma, Omegas(j), kin);
  }
  return out;
}

TransitionOrder transition_order(const SykParams& p) {
  const double x = 2.0 * p.U_tilde - 1.0;
  if (std::abs(x) <= tol::tricritical_band) return TransitionOrder::Tricritical;
  return x < 0.0 ? TransitionOrder::Second : TransitionOrder::First;
}

TransitionReport transition_report(const SykParams& p) {
  TransitionReport r;
  r.order = transition_order(p);
  SykParams at = p;
  at.gamma_tilde = 1.0;
  at.gamma = at.J_hat;
  r.nonzero_roots = static_cast<int>(solve_lambda(at).roots.size());
  r.consistent = r.order == TransitionOrder::First ? r.nonzero_roots > 0 : r.nonzero_roots == 0;
  return r;
}

ScalingDescriptor free_fermion_entropy_scaling(double alpha, Phase phase, double A) {
  if (!(alpha > 0.5)) throw DivergenceError("free_fermion_entropy_scaling: alpha must exceed 1/2");
  if (!(A > 0.0)) throw DomainError("free_fermion_entropy_scaling: A must be > 0");
  ScalingDescriptor d;
  if (phase == Phase::Broken) {
    if (alpha >= 1.5) {
      d.form = EntropyForm::Log;
      d.shape = std::log(A);
    } else {
      d.form = EntropyForm::Power;
      d.exponent = 1.5 - alpha;
    }
  } else if (phase == Phase::Symmetric) {
    if (alpha < 1.0) {
      d.form = EntropyForm::Power;
      d.exponent = 2.0 - 2.0 * alpha;
    }
  } else {
    throw DomainError("free_fermion_entropy_scaling: phase must be symmetric or broken");
  }
  if (d.form == EntropyForm::Power) d.shape = std::pow(A, d.exponent);
  return d;
}

}  // namespace syk
}  // namespace lrmipt
