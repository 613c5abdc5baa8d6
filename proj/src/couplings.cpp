#include "lrmipt/couplings.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "lrmipt/errors.hpp"
#include "lrmipt/fitting.hpp"
#include "lrmipt/specfun.hpp"

namespace lrmipt {

using std::numbers::pi;

void CouplingSpec::validate() const {
  if (!(J > 0.0) || !std::isfinite(J)) throw DomainError("CouplingSpec: J must be > 0");
  if (!(g >= 0.0) || !std::isfinite(g)) throw DomainError("CouplingSpec: g must be >= 0");
  if (L < 2) throw DomainError("CouplingSpec: L must be >= 2");
  if (k_grid < L) throw DomainError("CouplingSpec: k_grid must be >= L");
  if (form == CouplingForm::PowerLaw && !(alpha > 0.5))
    throw DivergenceError("CouplingSpec: power law needs alpha > 1/2");
}

namespace couplings {

double j_hat_k(const CouplingSpec& spec, double k) {
  spec.validate();
  if (spec.form == CouplingForm::NearestNeighbor) return spec.J * (1.0 + 2.0 * spec.g * std::cos(k));
  return spec.J * (1.0 + 2.0 * spec.g * specfun::polylog_unit_circle(2.0 * spec.alpha, k).real());
}

Eigen::VectorXd j_hat_grid(const CouplingSpec& spec, int M) {
  spec.validate();
  Eigen::VectorXd out(M);
  const double step = 2.0 * pi / M;
  if (spec.form == CouplingForm::NearestNeighbor) {
    for (int m = 0; m < M; ++m) out(m) = spec.J * (1.0 + 2.0 * spec.g * std::cos(step * m));
  } else {
    const specfun::UnitCirclePolylog li(2.0 * spec.alpha);
    for (int m = 0; m <= M / 2; ++m) {
      out(m) = spec.J * (1.0 + 2.0 * spec.g * li.real_part(step * m));
      if (m > 0) out(M - m) = out(m);
    }
  }
  if (out.minCoeff() <= 0.0)
    throw StabilityError("coupling kernel is not positive on the momentum grid");
  return out;
}

Eigen::VectorXd inverse_dft_even(const Eigen::VectorXd& f, int n_out) {
  const long M = f.size();
  Eigen::VectorXd table(M);
  for (long m = 0; m < M; ++m) table(m) = std::cos(2.0 * pi * m / M);
  Eigen::VectorXd out(n_out);
  for (long q = 0; q < n_out; ++q) {
    double acc = 0.0;
    for (long m = 0; m < M; ++m) acc += f(m) * table((m * q) % M);
    out(q) = acc / M;
  }
  return out;
}

EffectiveInteraction effective_interaction(const CouplingSpec& spec) {
  spec.validate();
  EffectiveInteraction e;
  e.values = inverse_dft_even(j_hat_grid(spec, spec.L).cwiseInverse(), spec.L);

  const int n_fine = std::max(spec.L / 4, tol::mu_fit_max_q) + 1;
  e.fine = inverse_dft_even(j_hat_grid(spec, spec.k_grid).cwiseInverse(), n_fine);

  e.tail_exponent_fit = std::numeric_limits<double>::quiet_NaN();
  double p = 0.0;
  if (spec.form == CouplingForm::PowerLaw && spec.g > 0.0) {
    const int lo = std::max(spec.L / 8, 1), hi = spec.L / 4;
    if (hi - lo + 1 >= 3) {
      Eigen::VectorXd q(hi - lo + 1), v(hi - lo + 1);
      for (int i = 0; i <= hi - lo; ++i) q(i) = lo + i, v(i) = e.fine(lo + i);
      const fit::LinearFit f = fit::loglog(q, v);
      p = -f.slope;
      e.tail_exponent_fit = p;
      e.tail_amplitude = (v.sum() < 0.0 ? 1.0 : -1.0) * std::exp(f.intercept);
    }
  }

  // pole part: what remains after removing the fitted tail at small q
  if (spec.g == 0.0) {
    e.mu_fit = std::numeric_limits<double>::infinity();
  } else {
    Eigen::VectorXd q(tol::mu_fit_max_q), r(tol::mu_fit_max_q);
    for (int i = 0; i < tol::mu_fit_max_q; ++i) {
      q(i) = i + 1;
      r(i) = std::log(std::abs(e.fine(i + 1) + e.tail_amplitude * std::pow(i + 1.0, -p)));
    }
    e.mu_fit = -fit::linear(q, r).slope;
  }
  return e;
}

Eigen::VectorXd real_space_kernel(const CouplingSpec& spec, int M) {
  return inverse_dft_even(j_hat_grid(spec, M), M);
}

double effective_sum(const CouplingSpec& spec) { return 1.0 / j_hat_k(spec, 0.0); }

double epsilon_k(double alpha, double k) {
  if (!(alpha > 0.5)) throw DivergenceError("epsilon_k: alpha must be > 1/2");
  if (std::remainder(k, 2.0 * pi) == 0.0) return 1.0;
  return specfun::polylog_unit_circle(2.0 * alpha, k).real() / specfun::riemann_zeta(2.0 * alpha);
}

double kinetic_smallk(double alpha, double k) {
  if (!(alpha > 0.5)) throw DivergenceError("kinetic_smallk: alpha must be > 1/2");
  if (alpha == 1.5) throw DomainError("kinetic_smallk: marginal alpha = 3/2 is unsupported");
  const double z = specfun::riemann_zeta(2.0 * alpha);
  if (alpha > 1.5) return specfun::riemann_zeta(2.0 * alpha - 2.0) / z * k * k / 2.0;
  // Γ(1−2α) sin(πα) = π / (2 Γ(2α) cos(πα)), finite at α = 1
  const double coeff = pi / (2.0 * specfun::gamma_real(2.0 * alpha) * specfun::cos_pi(alpha));
  return -coeff / z * std::pow(k, 2.0 * alpha - 1.0);
}

}  // namespace couplings
}  // namespace lrmipt
