#include "lrmipt/lattice_lg.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "lrmipt/errors.hpp"

namespace lrmipt {

namespace lattice {

Eigen::VectorXd periodic_kernel_row(int L, double alpha) {
  Eigen::VectorXd k(L);
  k(0) = 0.0;
  for (int q = 1; q < L; ++q) k(q) = std::pow(static_cast<double>(std::min(q, L - q)), -2.0 * alpha);
  return k;
}

}  // namespace lattice

LatticeConfig LatticeConfig::make(int L, int T_steps, double dt, const LgCoefficients& coeffs,
                                  double alpha, const BoundarySpec& boundary) {
  if (L < 2 || T_steps < 3) throw DomainError("LatticeConfig: need L >= 2 and T_steps >= 3");
  if (!(dt > 0.0)) throw DomainError("LatticeConfig: dt must be > 0");
  if (!(alpha > 0.0)) throw DomainError("LatticeConfig: alpha must be > 0");
  if (!(coeffs.beta >= 0.0)) throw DomainError("LatticeConfig: beta must be >= 0");
  LatticeConfig c;
  c.L = L;
  c.T_steps = T_steps;
  c.dt = dt;
  c.coeffs = coeffs;
  c.alpha = alpha;
  c.kernel_row = lattice::periodic_kernel_row(L, alpha);
  c.kernel.resize(L, L);
  for (int r = 0; r < L; ++r)
    for (int s = 0; s < L; ++s) c.kernel(r, s) = c.kernel_row((s - r + L) % L);
  const double de = c.delta_eff();
  c.pin_value = de != 0.0 ? std::sqrt(std::abs(de)) : 1.0;
  return c.with_boundary(boundary);
}

LatticeConfig LatticeConfig::with_boundary(const BoundarySpec& b) const {
  if (b.swap.size() > 0 && (b.swap.begin < 0 || b.swap.end > L))
    throw DomainError("BoundarySpec: swap region outside the chain");
  LatticeConfig c = *this;
  c.boundary = b;
  const double d = std::abs(coeffs.delta);
  c.pin_h = b.pin_strength > 0.0 ? b.pin_strength
                                 : tol::pin_strength_factor * (d > 0.0 ? std::sqrt(d) : pin_value);
  return c;
}

double LatticeConfig::delta_eff() const {
  return coeffs.delta + 2.0 * coeffs.b * kernel_row.sum() * dr;
}

double LatticeConfig::pin_target(int r, int t) const {
  if (t == 0) return -pin_value;
  return boundary.swap.contains(r) ? pin_value : -pin_value;
}

namespace lattice {

double evaluate(const Eigen::MatrixXd& X, const LatticeConfig& c, Eigen::MatrixXd* grad) {
  if (X.rows() != c.L || X.cols() != c.T_steps)
    throw DomainError("lattice: field shape does not match the config");
  const int T = c.T_steps;
  const double dt = c.dt, dr = c.dr;
  const auto& k = c.coeffs;

  const Eigen::MatrixXd Dt = X.rightCols(T - 1) - X.leftCols(T - 1);
  Eigen::MatrixXd Dr(c.L, T);
  Dr.topRows(c.L - 1) = X.bottomRows(c.L - 1) - X.topRows(c.L - 1);
  Dr.row(c.L - 1) = X.row(0) - X.row(c.L - 1);
  const Eigen::ArrayXXd x2 = X.array().square();

  double S = dr * 0.5 / dt * Dt.squaredNorm();
  S += dt * 0.5 * k.beta / dr * Dr.squaredNorm();
  S += dt * dr * (-0.5 * k.delta * x2 + 0.25 * x2.square()).sum();
  Eigen::MatrixXd KX;
  if (k.b != 0.0) {
    KX.noalias() = c.kernel * X;
    S -= k.b * dt * dr * dr * (X.array() * KX.array()).sum();
  }
  const bool pinned = c.boundary.kind == BoundarySpec::Kind::Pinned;
  Eigen::VectorXd top, bottom;
  if (pinned) {
    bottom = X.col(0).array() + c.pin_value;
    top.resize(c.L);
    for (int r = 0; r < c.L; ++r) top(r) = X(r, T - 1) - c.pin_target(r, T - 1);
    S += c.pin_h * dr * (bottom.squaredNorm() + top.squaredNorm());
  }

  if (grad) {
    Eigen::MatrixXd& G = *grad;
    G.resize(c.L, T);
    G.setZero();
    G.leftCols(T - 1) -= dr / dt * Dt;
    G.rightCols(T - 1) += dr / dt * Dt;
    const double cs = dt * k.beta / dr;
    G.topRows(c.L - 1) -= cs * Dr.topRows(c.L - 1);
    G.row(c.L - 1) -= cs * Dr.row(c.L - 1);
    G.bottomRows(c.L - 1) += cs * Dr.topRows(c.L - 1);
    G.row(0) += cs * Dr.row(c.L - 1);
    G.array() += dt * dr * (-k.delta * X.array() + X.array() * x2);
    if (k.b != 0.0) G -= 2.0 * k.b * dt * dr * dr * KX;
    if (pinned) {
      G.col(0) += 2.0 * c.pin_h * dr * bottom;
      G.col(T - 1) += 2.0 * c.pin_h * dr * top;
    }
  }
  return S;
}

Eigen::MatrixXd initial_field(const LatticeConfig& c, const FieldInit& init) {
  const double v = c.pin_value;
  Eigen::MatrixXd X(c.L, c.T_steps);
  switch (init.kind) {
    case FieldInit::Kind::Uniform:
      X.setConstant(init.sign >= 0 ? v : -v);
      break;
    case FieldInit::Kind::Kink: {
      const double de = c.delta_eff();
      const double w = de > 0.0 ? std::sqrt(2.0 / de) : 1.0;
      for (int t = 0; t < c.T_steps; ++t) X.col(t).setConstant(v * std::tanh((t * c.dt - init.t0) / w));
      break;
    }
    case FieldInit::Kind::Swap: {
      X.setConstant(-v);
      const int depth = std::max(2, static_cast<int>(std::lround(2.0 * c.xi_t() / c.dt)));
      for (int r = 0; r < c.L; ++r)
        if (c.boundary.swap.contains(r))
          for (int t = std::max(0, c.T_steps - depth); t < c.T_steps; ++t) X(r, t) = v;
      break;
    }
  }
  return X;
}

namespace {

// one descent stage: Barzilai–Borwein steps with a non-monotone Armijo guard
void descend(const LatticeConfig& c, Eigen::MatrixXd& X, double tol, int max_it, FieldSolution& out) {
  Eigen::MatrixXd G, Gn, Xn;
  double f = evaluate(X, c, &G);
  const double lip = 2.0 * c.dr / c.dt + 4.0 * c.dt * c.coeffs.beta / c.dr +
                     2.0 * c.pin_h * c.dr +
                     c.dt * c.dr * (std::abs(c.coeffs.delta) + 3.0 * X.cwiseAbs2().maxCoeff()) +
                     2.0 * std::abs(c.coeffs.b) * c.dt * c.dr * c.dr * c.kernel_row.sum();
  const double step0 = 1.0 / lip;
  double step = step0;
  std::deque<double> hist{f};
  int it = 0;
  for (; it < max_it; ++it) {
    const double gn = G.norm();
    out.grad_norm = gn;
    if (gn < tol) {
      out.converged = true;
      break;
    }
    const double fref = *std::max_element(hist.begin(), hist.end());
    const double slope = -step * gn * gn;
    double lam = 1.0, fn = 0.0;
    for (;;) {
      Xn = X - lam * step * G;
      fn = evaluate(Xn, c, &Gn);
      if (fn <= fref + 1e-4 * lam * slope || lam < 1e-8) break;
      lam *= 0.5;
    }
    const Eigen::ArrayXXd s = (Xn - X).array(), y = (Gn - G).array();
    const double sy = (s * y).sum();
    if (lam < 1e-8 || !(sy > 0.0)) {
      step = step0;
    } else {
      step = (it % 2 == 0) ? s.square().sum() / sy : sy / y.square().sum();
      step = std::clamp(step, 1e-3 * step0, 1e6 * step0);
    }
    X.swap(Xn);
    G.swap(Gn);
    f = fn;
    hist.push_back(f);
    if (static_cast<int>(hist.size()) > tol::nonmonotone_memory) hist.pop_front();
  }
  out.iterations += it;
  out.action = evaluate(X, c, nullptr);
}

}  // namespace

FieldSolution minimize_field(const LatticeConfig& c, const FieldInit& init,
                             const MinimizerOptions& opt) {
  FieldSolution out;
  Eigen::MatrixXd X = initial_field(c, init);
  const double tol = opt.grad_tol_per_site * c.L * c.T_steps;
  std::vector<double> schedule = opt.pin_schedule;
  if (c.boundary.kind != BoundarySpec::Kind::Pinned || schedule.empty()) schedule = {1.0};
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    LatticeConfig stage = c;
    stage.pin_h = c.pin_h * schedule[i];
    const bool last = i + 1 == schedule.size();
    out.converged = false;
    descend(stage, X, last ? tol : 100.0 * tol, opt.max_iterations, out);
  }
  out.field = std::move(X);
  return out;
}

FieldSolution plain_solution(const LatticeConfig& c, const MinimizerOptions& opt) {
  return minimize_field(c.with_boundary(BoundarySpec::pinned()), FieldInit::uniform(-1), opt);
}

QuasiEntropy quasi_entropy_numeric(const LatticeConfig& c, Interval A, const FieldSolution& plain,
                                   const QuasiEntropyOptions& opt) {
  QuasiEntropy q;
  q.plain_action = plain.action;
  q.converged = plain.converged;
  if (A.size() == 0) {
    q.swap_action = plain.action;
    q.value = 0.0;
    if (opt.keep_field) q.swap = plain;
    return q;
  }
  BoundarySpec b = BoundarySpec::pinned(A);
  b.pin_strength = c.boundary.pin_strength;
  const LatticeConfig sc = c.with_boundary(b);
  const FieldInit init =
      A.size() == c.L ? FieldInit::kink(0.5 * c.extent()) : FieldInit::swap();
  FieldSolution s = minimize_field(sc, init, opt.minimizer);
  q.swap_action = s.action;
  q.converged = q.converged && s.converged;
  if (opt.explore_alternative) {
    const FieldSolution alt = minimize_field(sc, FieldInit::uniform(-1), opt.minimizer);
    q.alternative_swap_action = alt.action;
  }
  q.value = q.swap_action - q.plain_action;
  if (opt.keep_field) q.swap = std::move(s);
  return q;
}

QuasiEntropy quasi_entropy_numeric(const LatticeConfig& c, Interval A,
                                   const QuasiEntropyOptions& opt) {
  if (A.size() == 0) {
    QuasiEntropy q;
    q.value = 0.0;
    return q;
  }
  return quasi_entropy_numeric(c, A, plain_solution(c, opt.minimizer), opt);
}

EntropySweep entropy_sweep(const LatticeConfig& c, const std::vector<int>& sizes,
                           bool with_volume, const QuasiEntropyOptions& opt) {
  EntropySweep out;
  const FieldSolution plain = plain_solution(c, opt.minimizer);
  for (int A : sizes) {
    const QuasiEntropy q = quasi_entropy_numeric(c, Interval::centered(c.L, A), plain, opt);
    out.sizes.push_back(A);
    out.values.push_back(q.value);
    out.converged.push_back(q.converged);
  }
  const int n = static_cast<int>(sizes.size());
  if (n >= (with_volume ? 4 : 3)) {
    Eigen::VectorXd x(n), y(n);
    for (int i = 0; i < n; ++i) x(i) = sizes[i], y(i) = out.values[i];
    out.fit = fit::power_law(x, y, with_volume, 0.02, 0.98);
  }
  return out;
}

double kink_action_analytic(double delta) {
  if (delta < 0.0) throw DomainError("kink_action_analytic: requires delta >= 0");
  if (delta == 0.0) return 0.0;
  // φ = √δ tanh(κt), κ = √(δ/2); integrate ½φ'² + V(φ) − V(√δ) in u = κt
  const double kappa = std::sqrt(delta / 2.0), v = std::sqrt(delta);
  const double vmin = -0.25 * delta * delta;
  auto density = [&](double u) {
    const double th = std::tanh(u), sech2 = 1.0 - th * th;
    const double phi = v * th, dphi = v * kappa * sech2;
    return 0.5 * dphi * dphi + (-0.5 * delta * phi * phi + 0.25 * phi * phi * phi * phi) - vmin;
  };
  const double U = 40.0;
  const int n = 16000;  // Simpson, even
  const double h = 2.0 * U / n;
  double s = density(-U) + density(U);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * density(-U + i * h);
  return s * h / 3.0 / kappa;
}

DomainWallEnergy flat_domain_wall_energy(int A, double w, double J, double K, double alpha, int L,
                                         double eps) {
  if (!(eps > 0.0) || A < eps || 2 * A > L) throw DomainError("flat_domain_wall_energy: need eps <= A <= L/2");
  const Eigen::VectorXd k = periodic_kernel_row(L, alpha);
  auto pair = [&](int r, int s) { return k((s - r + L) % L); };
  const double s_ll = L * k.sum();
  double s_aa = 0.0, s_cc = 0.0, s_ac = 0.0;
  for (int r = 0; r < L; ++r) {
    const bool ra = r < A;
    for (int s = 0; s < L; ++s) {
      const bool sa = s < A;
      const double v = pair(r, s);
      if (ra && sa) s_aa += v;
      else if (!ra && !sa) s_cc += v;
      else if (ra) s_ac += v;
    }
  }
  DomainWallEnergy e;
  e.direct = A * J + w * K * (s_ll - s_aa - s_cc + 2.0 * s_ac);
  const double u = 2.0 - 2.0 * alpha;
  e.asymptotic = A * J + w * K * (std::pow(static_cast<double>(A), u) - std::pow(eps, u));
  return e;
}

}  // namespace lattice
}  // namespace lrmipt
