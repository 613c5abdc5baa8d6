#include <doctest.h>

#include <cmath>
#include <random>

#include "lrmipt/errors.hpp"
#include "lrmipt/fitting.hpp"
#include "lrmipt/lattice_lg.hpp"

using namespace lrmipt;
using namespace lrmipt::lattice;

namespace {

LgCoefficients coeffs(double delta, double b = 0.0, double beta = 1.0) {
  LgCoefficients k;
  k.delta = delta;
  k.b = b;
  k.beta = beta;
  return k;
}

Eigen::MatrixXd random_field(int L, int T, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 0.8);
  Eigen::MatrixXd X(L, T);
  for (int i = 0; i < L; ++i)
    for (int t = 0; t < T; ++t) X(i, t) = n(rng);
  return X;
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_THROWS_AS(LatticeConfig::make(1, 10, 0.1, coeffs(1.0), 1.0), DomainError);
  CHECK_THROWS_AS(LatticeConfig::make(8, 2, 0.1, coeffs(1.0), 1.0), DomainError);
  CHECK_THROWS_AS(LatticeConfig::make(8, 10, 0.0, coeffs(1.0), 1.0), DomainError);
  CHECK_THROWS_AS(LatticeConfig::make(8, 10, 0.1, coeffs(1.0, 0.0, -1.0), 1.0), DomainError);
  const auto c = LatticeConfig::make(8, 10, 0.1, coeffs(1.0), 1.0);
  CHECK_THROWS_AS(c.with_boundary(BoundarySpec::pinned({4, 9})), DomainError);
  CHECK_FALSE(c.boundaries_decoupled());
  CHECK(LatticeConfig::make(8, 201, 0.05, coeffs(1.0), 1.0).boundaries_decoupled());
  CHECK(c.pin_value == doctest::Approx(1.0));
}

TEST_CASE("kernel row") {
  const auto k = periodic_kernel_row(10, 0.75);
  CHECK(k(0) == 0.0);
  CHECK(k(1) == doctest::Approx(1.0));
  CHECK(k(3) == doctest::Approx(std::pow(3.0, -1.5)));
  CHECK(k(7) == k(3));
  CHECK(k(5) == doctest::Approx(std::pow(5.0, -1.5)));
}

TEST_CASE("action of simple fields") {
  const auto c = LatticeConfig::make(12, 9, 0.2, coeffs(0.7, 0.03, 1.3), 0.8);
  CHECK(evaluate(Eigen::MatrixXd::Zero(12, 9), c, nullptr) == 0.0);
  for (double v : {0.3, -1.1, 2.0}) {
    const Eigen::MatrixXd X = Eigen::MatrixXd::Constant(12, 9, v);
    const double expect =
        12 * 9 * 0.2 * (-0.35 * v * v + 0.25 * v * v * v * v - 0.03 * c.kernel_row.sum() * v * v);
    CHECK(evaluate(X, c, nullptr) == doctest::Approx(expect).epsilon(1e-13));
  }
  // a constant field is stationary only at ±√δ_eff
  Eigen::MatrixXd g;
  evaluate(Eigen::MatrixXd::Constant(12, 9, std::sqrt(c.delta_eff())), c, &g);
  CHECK(g.cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("gradient matches finite differences") {
  auto c = LatticeConfig::make(7, 6, 0.3, coeffs(0.9, 0.05, 0.8), 0.75);
  for (const auto& b : {BoundarySpec::free(), BoundarySpec::pinned({2, 5})}) {
    const auto cc = c.with_boundary(b);
    const Eigen::MatrixXd X = random_field(7, 6, 3);
    Eigen::MatrixXd g;
    evaluate(X, cc, &g);
    const double h = 1e-6;
    for (int i = 0; i < 7; ++i)
      for (int t = 0; t < 6; ++t) {
        Eigen::MatrixXd p = X, m = X;
        p(i, t) += h;
        m(i, t) -= h;
        const double fd = (evaluate(p, cc, nullptr) - evaluate(m, cc, nullptr)) / (2 * h);
        CHECK(std::abs(fd - g(i, t)) < 1e-6 * (1.0 + std::abs(g(i, t))));
      }
    CHECK((lattice_gradient(X, cc) - g).norm() == 0.0);
  }
}

TEST_CASE("sign flip symmetry with free boundaries") {
  const auto c = LatticeConfig::make(9, 7, 0.25, coeffs(-0.4, 0.1, 2.0), 1.2);
  for (unsigned s = 0; s < 5; ++s) {
    const Eigen::MatrixXd X = random_field(9, 7, s);
    CHECK(evaluate(X, c, nullptr) == doctest::Approx(evaluate(-X, c, nullptr)).epsilon(1e-14));
    const Eigen::MatrixXf Xf = X.cast<float>();
    CHECK(lattice_action(Xf, c) == doctest::Approx(evaluate(Xf.cast<double>(), c, nullptr)));
  }
}

TEST_CASE("free boundary relaxes to the uniform vacuum") {
  const auto c = LatticeConfig::make(16, 21, 0.1, coeffs(1.0, 0.02), 0.75);
  const auto s = minimize_field(c, FieldInit::uniform(1));
  CHECK(s.converged);
  CHECK((s.field.array() - std::sqrt(c.delta_eff())).abs().maxCoeff() < 1e-6);
}

TEST_CASE("kink profile and action") {
  const double delta = 1.0;
  const auto c = LatticeConfig::make(4, 257, 0.0625, coeffs(delta), 1.0);
  QuasiEntropyOptions opt;
  opt.keep_field = true;
  const auto q = quasi_entropy_numeric(c, {0, 4}, opt);
  CHECK(q.converged);
  const double per_site = q.value / 4.0;
  CHECK(per_site == doctest::Approx(kink_action_analytic(delta)).epsilon(1e-3));

  const Eigen::VectorXd col = q.swap.field.row(1).transpose();
  Eigen::VectorXd t(col.size());
  for (int i = 0; i < t.size(); ++i) t(i) = i * c.dt;
  const auto f = fit::tanh_profile(t, col, {1.0, 8.0, 1.0});
  CHECK(std::abs(f.amplitude - std::sqrt(delta)) < 0.01);
  CHECK(std::abs(f.width - std::sqrt(2.0 / delta)) < 0.05 * std::sqrt(2.0 / delta));
  CHECK(std::abs(f.center - 0.5 * c.extent()) < 0.1);
}

TEST_CASE("kink action closed form") {
  const double k = 2.0 * std::sqrt(2.0) / 3.0;
  for (double d : {0.1, 0.5, 1.0, 3.0}) CHECK(kink_action_analytic(d) == doctest::Approx(k * std::pow(d, 1.5)).epsilon(1e-10));
  CHECK(kink_action_analytic(4.0 * 0.3) == doctest::Approx(8.0 * kink_action_analytic(0.3)).epsilon(1e-12));
  CHECK(kink_action_analytic(0.0) == 0.0);
  CHECK_THROWS_AS(kink_action_analytic(-0.1), DomainError);
}

TEST_CASE("refining the time step changes the action little") {
  const auto a = LatticeConfig::make(4, 129, 0.125, coeffs(1.0), 1.0);
  const auto b = LatticeConfig::make(4, 257, 0.0625, coeffs(1.0), 1.0);
  const double qa = quasi_entropy_numeric(a, {0, 4}).value;
  const double qb = quasi_entropy_numeric(b, {0, 4}).value;
  CHECK(std::abs(qa / qb - 1.0) < 1e-3);
}

TEST_CASE("swap pattern in the broken phase") {
  const int L = 32;
  const auto c = LatticeConfig::make(L, 81, 0.1, coeffs(1.0, 0.03), 0.75);
  QuasiEntropyOptions opt;
  opt.keep_field = true;
  opt.explore_alternative = true;
  const Interval A = Interval::centered(L, L / 4);
  const auto q = quasi_entropy_numeric(c, A, opt);
  CHECK(q.converged);
  const auto& X = q.swap.field;
  const int T = c.T_steps;
  for (int r = 0; r < L; ++r) {
    CHECK(X(r, 0) < 0.0);
    CHECK(X(r, T / 2) < 0.0);
    CHECK((X(r, T - 1) > 0.0) == A.contains(r));
  }
  CHECK(q.value > 0.0);
  CHECK(q.swap_action <= q.alternative_swap_action + 1e-8);
}

TEST_CASE("quasi-entropy is non-negative and vanishes for the empty region") {
  const int L = 24;
  const auto c = LatticeConfig::make(L, 61, 0.1, coeffs(1.0, 0.02), 0.75);
  const auto plain = plain_solution(c);
  CHECK(quasi_entropy_numeric(c, {}, plain).value == 0.0);
  CHECK(quasi_entropy_numeric(c, {}).value == 0.0);
  double prev = 0.0;
  for (int A : {1, 2, 4, 6}) {
    const auto q = quasi_entropy_numeric(c, Interval::centered(L, A), plain);
    CHECK(q.value >= 0.0);
    CHECK(q.value > prev);
    prev = q.value;
  }
  // symmetric phase
  const auto s = LatticeConfig::make(L, 61, 0.25, coeffs(-1.0, 0.02), 0.75);
  const auto ps = plain_solution(s);
  for (int A : {2, 6}) CHECK(quasi_entropy_numeric(s, Interval::centered(L, A), ps).value >= 0.0);
}

TEST_CASE("area law for short-range couplings in the symmetric phase") {
  const int L = 64;
  const double dt = 0.25;
  const auto c = LatticeConfig::make(L, static_cast<int>(16.0 / dt) + 1, dt, coeffs(-1.0, 0.05), 2.0);
  const auto sw = entropy_sweep(c, {4, 8, 12, 16}, false);
  for (bool ok : sw.converged) CHECK(ok);
  const double lo = *std::min_element(sw.values.begin(), sw.values.end());
  const double hi = *std::max_element(sw.values.begin(), sw.values.end());
  CHECK(lo > 0.0);
  CHECK((hi - lo) / lo < 0.02);
}

TEST_CASE("flat domain wall energy") {
  SUBCASE("fractal correction at alpha 0.75") {
    const int L = 1024;
    Eigen::VectorXd x(8), y(8);
    for (int i = 0; i < 8; ++i) {
      const int A = 16 * (i + 1);
      x(i) = A;
      y(i) = flat_domain_wall_energy(A, 1.0, 1.0, 1.0, 0.75, L).direct - A;
    }
    const auto f = fit::power_law(x, y, true, 0.05, 0.95);
    CHECK(std::abs(f.exponent - 0.5) < 0.05);
    const auto e = flat_domain_wall_energy(64, 2.0, 1.5, 0.3, 0.75, L, 1.0);
    CHECK(e.asymptotic == doctest::Approx(64 * 1.5 + 0.6 * (8.0 - 1.0)));
  }
  SUBCASE("no width, no correction") {
    for (int A : {3, 17, 40}) CHECK(flat_domain_wall_energy(A, 0.0, 1.7, 1.0, 0.75, 128).direct == A * 1.7);
  }
  SUBCASE("bounded for fast decay") {
    double prev = 0.0, prev_inc = INFINITY;
    for (int A : {8, 16, 32, 64, 128}) {
      const double v = flat_domain_wall_energy(A, 1.0, 0.0, 1.0, 1.5, 512).direct;
      CHECK(v > prev);
      CHECK(v - prev < prev_inc);
      CHECK(v < 8.0 * 1.6449340668482264);  // each distance d appears at most 2d times
      prev_inc = v - prev;
      prev = v;
    }
  }
  CHECK_THROWS_AS(flat_domain_wall_energy(10, 1.0, 1.0, 1.0, 0.75, 16), DomainError);
}
