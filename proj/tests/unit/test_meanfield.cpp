#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <unsupported/Eigen/MatrixFunctions>

#include "lrmipt/errors.hpp"
#include "lrmipt/meanfield.hpp"
#include "lrmipt/specfun.hpp"

using namespace lrmipt;
using namespace lrmipt::meanfield;
using std::numbers::pi;

namespace {

CouplingSpec pl(double g, double alpha, int L = 256) {
  CouplingSpec s;
  s.g = g;
  s.alpha = alpha;
  s.L = L;
  return s;
}

MeanFieldParams at_Gamma(double Gamma, double g = 0.3, double alpha = 1.0) {
  const auto spec = pl(g, alpha);
  return MeanFieldParams::make(spec, Gamma * couplings::j_hat_k(spec, 0.0));
}

}  // namespace

TEST_CASE("gamma_c") {
  CHECK(gamma_c(pl(0.0, 1.0)) == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
  CHECK(gamma_c(pl(1.0, 40.0)) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(gamma_c(pl(1.0, 1.0)) == doctest::Approx((1.0 + pi * pi / 3.0) / 9.0).epsilon(1e-13));
  for (double a : {0.55, 0.75, 1.0, 1.5, 2.0, 3.3}) {
    for (double g : {0.1, 0.5, 1.0}) {
      const double id = gamma_c(pl(g, a)) * 9.0 - 1.0 - 2.0 * g * specfun::riemann_zeta(2.0 * a);
      CHECK(std::abs(id) < 4e-16 * (1.0 + 2.0 * g * specfun::riemann_zeta(2.0 * a)));
    }
  }
  CHECK_THROWS_AS(gamma_c(pl(1.0, 0.4)), DivergenceError);
  CHECK_THROWS_AS(gamma_c(pl(1.0, 0.5)), DivergenceError);
}

TEST_CASE("bulk action basics") {
  const auto p = at_Gamma(0.07);
  CHECK(bulk_action(0.0, 0.0, p) == 0.0);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const double f = u(rng), t = u(rng);
    CHECK(bulk_action(f, t, p) == bulk_action(-f, t, p));
    const double h = 1e-5;
    const Eigen::Vector2d g = bulk_gradient(f, t, p);
    const double gf = (bulk_action(f + h, t, p) - bulk_action(f - h, t, p)) / (2 * h);
    const double gt = (bulk_action(f, t + h, p) - bulk_action(f, t - h, p)) / (2 * h);
    CHECK(std::abs(gf - g(0)) < 1e-6);
    CHECK(std::abs(gt - g(1)) < 1e-6);
    const Eigen::Matrix2d H = bulk_hessian(f, t, p);
    const Eigen::Vector2d gpf = bulk_gradient(f + h, t, p), gmf = bulk_gradient(f - h, t, p);
    CHECK(((gpf - gmf) / (2 * h) - H.col(0)).norm() < 1e-5);
  }
}

TEST_CASE("symmetric saddle values") {
  const auto p = at_Gamma(0.2);
  const auto m = solve_saddle(p);
  CHECK(m.phase == Phase::Symmetric);
  CHECK(m.phi == 0.0);
  CHECK(m.theta == doctest::Approx(-3.0 * (1.0 / 9.0 + 0.4) / (4.0 * p.Jcal)).epsilon(1e-12));
  CHECK(m.residual < 1e-10);
}

TEST_CASE("critical point") {
  const auto p = at_Gamma(1.0 / 9.0);
  const auto m = solve_saddle(p);
  CHECK(m.phase == Phase::Critical);
  CHECK(m.phi == 0.0);
  const double a = -3.0 * (1.0 / 9.0 + 2.0 / 9.0) / (4.0 * p.Jcal);
  const double b = -9.0 * (2.0 / 9.0) / (8.0 * p.Jcal);
  CHECK(a == doctest::Approx(b).epsilon(1e-15));
  CHECK(m.theta == doctest::Approx(a).epsilon(1e-12));
}

TEST_CASE("broken saddle and its partner") {
  for (double G : {0.0, 0.01, 0.05, 0.1, 0.11}) {
    const auto p = at_Gamma(G);
    const auto m = solve_saddle(p);
    CHECK(m.phase == Phase::Broken);
    CHECK(m.paired);
    CHECK(m.phi > 0.0);
    CHECK(m.residual < 1e-10);
    CHECK(bulk_gradient(-m.phi, m.theta, p).norm() < 1e-10);
    CHECK(m.theta == doctest::Approx(-9.0 * (1.0 / 9.0 + G) / (8.0 * p.Jcal)).epsilon(1e-10));
  }
}

TEST_CASE("order parameter exponent") {
  Eigen::VectorXd x(26), y(26);
  for (int i = 0; i <= 25; ++i) {
    const double G = 0.06 + 0.05 * i / 25.0;
    const auto m = solve_saddle(at_Gamma(G));
    x(i) = std::log(1.0 / 9.0 - G);
    y(i) = std::log(m.phi);
  }
  const double slope = ((x.array() - x.mean()) * (y.array() - y.mean())).sum() /
                       (x.array() - x.mean()).square().sum();
  CHECK(std::abs(slope - 0.5) < 0.02);
}

TEST_CASE("broken saddle beats the symmetric one below the transition") {
  for (int i = 0; i < 50; ++i) {
    const double G = (1.0 / 9.0) * i / 50.0;
    const auto p = at_Gamma(G, 0.2, 0.8);
    const auto b = solve_saddle(p);
    const auto s = symmetric_saddle(p);
    CHECK(bulk_action(b.phi, b.theta, p) < bulk_action(s.phi, s.theta, p));
  }
}

TEST_CASE("rbit propagator closed forms") {
  const int n = 4000;
  const double T = 3.0;
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);
  const Eigen::VectorXd th = Eigen::VectorXd::Constant(n, 0.7);
  CHECK(rbit_log_propagator(zero, th, T, RbitBoundary::trace()).log_value ==
        doctest::Approx(std::log(2.0 * std::cosh(0.7 * T / 2.0))).epsilon(1e-12));
  // ground-state dominance
  const double f = 0.8, t = -0.6, R = 1.0;
  const int m = 6000;
  const double TT = 50.0 / R;
  const auto r = rbit_log_propagator(Eigen::VectorXd::Constant(m, f), Eigen::VectorXd::Constant(m, t),
                                     TT, RbitBoundary::trace(), 0.3);
  CHECK(std::abs(r.log_value / (TT * R / 2.0) - 1.0) < 1e-6);
  CHECK(r.identity_term == doctest::Approx(0.3 * TT / 2.0));
  // φ only
  const auto q = rbit_log_propagator(Eigen::VectorXd::Constant(m, 0.5), Eigen::VectorXd::Zero(m),
                                     100.0, RbitBoundary::trace());
  CHECK(q.log_value == doctest::Approx(25.0).epsilon(1e-10));
  // fixed states, diagonal
  const auto s = rbit_log_propagator(zero, th, T, RbitBoundary::fixed({1, 0}, {1, 0}));
  CHECK(s.log_value == doctest::Approx(0.7 * T / 2.0).epsilon(1e-12));
  CHECK_THROWS_AS(rbit_log_propagator(Eigen::VectorXd::Constant(10, 5.0), Eigen::VectorXd::Zero(10),
                                      1.0, RbitBoundary::trace()),
                  DomainError);
}

TEST_CASE("rbit propagator against dense matrix exponentials") {
  const int n = 3000;
  const double T = 6.0;
  Eigen::VectorXd f(n), t(n);
  for (int i = 0; i < n; ++i) {
    const double s = (i + 0.5) * T / n;
    f(i) = 0.9 * std::sin(s);
    t(i) = -0.4 + 0.3 * std::cos(2.0 * s);
  }
  Eigen::Matrix2d P = Eigen::Matrix2d::Identity();
  for (int i = 0; i < n; ++i) {
    Eigen::Matrix2d G;
    G << t(i), f(i), f(i), -t(i);
    P = (0.5 * T / n * G).exp() * P;
  }
  const Eigen::Vector2d a(0.6, 0.8), b(1.0, 0.0);
  CHECK(rbit_log_propagator(f, t, T, RbitBoundary::trace()).log_value ==
        doctest::Approx(std::log(P.trace())).epsilon(1e-12));
  CHECK(rbit_log_propagator(f, t, T, RbitBoundary::fixed(a, b)).log_value ==
        doctest::Approx(std::log(std::abs(b.dot(P * a)))).epsilon(1e-12));
}

TEST_CASE("rbit propagator converges exponentially to the ground-state rate") {
  const double f = 0.6, t = 0.8;
  double prev = INFINITY;
  for (double T : {2.0, 4.0, 6.0, 8.0}) {
    const int n = static_cast<int>(T / 0.005);
    const auto r = rbit_log_propagator(Eigen::VectorXd::Constant(n, f), Eigen::VectorXd::Constant(n, t),
                                       T, RbitBoundary::trace());
    const double err = r.log_value - T / 2.0;  // ln(1 + e^{−T·gap}), gap = R = 1
    CHECK(err == doctest::Approx(std::log1p(std::exp(-T))).epsilon(1e-10));
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("Landau-Ginzburg coefficients") {
  const auto spec = pl(0.3, 0.8, 1024);
  const auto e = couplings::effective_interaction(spec);
  const double gc = gamma_c(spec);
  const auto at = [&](double gamma) {
    return lg_coefficients(MeanFieldParams::make(spec, gamma), e.kernel_fit());
  };
  CHECK(std::abs(at(gc).delta) < 1e-12);
  CHECK(at(1.1 * gc).delta < 0.0);
  CHECK(at(0.9 * gc).delta > 0.0);
  for (double r = 0.05; r < 2.0; r += 0.05) {
    const auto c = at(r * gc);
    if (std::abs(r - 1.0) < 1e-9) continue;
    CHECK((c.delta > 0.0) == (r < 1.0));
    CHECK(c.beta > 0.0);
    CHECK(c.b > 0.0);
    CHECK(c.quartic == 0.25);
  }
  const auto p = MeanFieldParams::make(spec, 0.5 * gc);
  CHECK(lg_coefficients(p, {50.0, 0.1}).beta < 1e-40);
  CHECK(lg_coefficients(p, {INFINITY, 0.1}).beta == 0.0);
  // nearest neighbour: no long-range strength
  CouplingSpec nn = spec;
  nn.form = CouplingForm::NearestNeighbor;
  const auto en = couplings::effective_interaction(nn);
  CHECK(lg_coefficients(MeanFieldParams::make(nn, 0.05), en.kernel_fit()).b == 0.0);
}
