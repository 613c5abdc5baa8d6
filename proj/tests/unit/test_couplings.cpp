#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lrmipt/couplings.hpp"
#include "lrmipt/errors.hpp"
#include "lrmipt/specfun.hpp"

using namespace lrmipt;
using namespace lrmipt::couplings;
using std::numbers::pi;

namespace {

CouplingSpec nn(double g, int L = 1024) {
  CouplingSpec s;
  s.form = CouplingForm::NearestNeighbor;
  s.g = g;
  s.L = L;
  return s;
}

CouplingSpec pl(double g, double alpha, int L = 1024) {
  CouplingSpec s;
  s.g = g;
  s.alpha = alpha;
  s.L = L;
  return s;
}

// residue of 1/(1 + g(z + 1/z)) at the pole inside the unit circle
double nn_closed_form(double J, double g, int q) {
  const double mu = std::acosh(1.0 / (2.0 * g));
  return (q % 2 ? -1.0 : 1.0) * std::exp(-mu * q) / std::sqrt(1.0 - 4.0 * g * g) / J;
}

}  // namespace

TEST_CASE("j_hat_k values") {
  CHECK(j_hat_k(nn(0.3), pi) == doctest::Approx(1.0 - 0.6).epsilon(1e-15));
  CHECK(j_hat_k(pl(1.0, 1.0), 0.0) == doctest::Approx(1.0 + pi * pi / 3.0).epsilon(1e-13));
  for (double k = 0.0; k < 2.0 * pi; k += 0.1)
    CHECK(std::abs(j_hat_k(pl(0.3, 30.0), k) - j_hat_k(nn(0.3), k)) < 1e-8);
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(j_hat_k(pl(0.2, 0.5), 1.0), DivergenceError);
  CHECK_THROWS_AS(j_hat_k(pl(-0.1, 1.0), 1.0), DomainError);
  CouplingSpec s = pl(0.2, 1.0);
  s.J = 0.0;
  CHECK_THROWS_AS(s.validate(), DomainError);
  s = pl(0.2, 1.0, 1);
  CHECK_THROWS_AS(s.validate(), DomainError);
}

TEST_CASE("unstable kernels are rejected") {
  CHECK_THROWS_AS(effective_interaction(nn(0.6, 64)), StabilityError);
  CHECK_THROWS_AS(effective_interaction(pl(1.0, 1.0, 64)), StabilityError);
}

TEST_CASE("nearest-neighbour inversion matches the closed form") {
  for (double g : {0.1, 0.25, 0.4}) {
    const auto e = effective_interaction(nn(g));
    double err = 0.0;
    for (int q = 0; q < 1024; ++q)
      err = std::max(err, std::abs(e.values(q) - nn_closed_form(1.0, g, std::min(q, 1024 - q))));
    CHECK(err < 1e-8);
    CHECK(e.mu_fit == doctest::Approx(std::acosh(1.0 / (2.0 * g))).epsilon(1e-8));
  }
  const auto e = effective_interaction(nn(0.25));
  CHECK(e.values(0) == doctest::Approx(1.15470053837925).epsilon(1e-10));
  CHECK(e.values(1) == doctest::Approx(-0.309401076758503).epsilon(1e-10));
}

TEST_CASE("power-law tail exponent") {
  for (double g : {0.25, 0.4}) {
    for (double a : {0.75, 1.0, 1.5}) {
      const auto e = effective_interaction(pl(g, a));
      CHECK(std::abs(e.tail_exponent_fit - 2.0 * a) < 0.05);
      CHECK(e.tail_amplitude > 0.0);  // tail is negative
    }
  }
}

TEST_CASE("log-log slope over q in [50, 200] for alpha = 0.75") {
  const auto e = effective_interaction(pl(0.25, 0.75, 1024));
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (int q = 50; q <= 200; ++q, ++n) {
    const double x = std::log(q), y = std::log(std::abs(e.fine(q)));
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(std::abs(slope + 1.5) < 0.05);
}

TEST_CASE("ring symmetry and convolution identity") {
  for (const auto& spec : {nn(0.3, 128), pl(0.3, 0.8, 128), pl(0.4, 2.0, 97)}) {
    const auto e = effective_interaction(spec);
    const Eigen::VectorXd kern = real_space_kernel(spec, spec.L);
    const int L = spec.L;
    for (int q = 1; q < L; ++q) CHECK(std::abs(e.values(q) - e.values(L - q)) < 1e-12);
    for (int q = 0; q < L; ++q) {
      double c = 0.0;
      for (int s = 0; s < L; ++s) c += e.values(s) * kern(((q - s) % L + L) % L);
      CHECK(std::abs(c - (q == 0 ? 1.0 : 0.0)) < 1e-8);
    }
  }
}

TEST_CASE("real-space kernel reproduces the couplings") {
  // ring of M sites: J(1) = J g Σ_n |1 + nM|^{-2α}, dominated by the n = 0 term
  const auto spec = pl(0.3, 2.0, 64);
  const Eigen::VectorXd k = real_space_kernel(spec, 4096);
  CHECK(k(0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(k(1) == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(k(3) == doctest::Approx(0.3 / 81.0).epsilon(1e-8));
}

TEST_CASE("sign alternation at short distance") {
  for (const auto& spec : {nn(0.25, 256), pl(0.4, 3.0, 256)}) {
    const auto e = effective_interaction(spec);
    for (int q = 0; q < 6; ++q) CHECK(e.values(q) * e.values(q + 1) < 0.0);
  }
}

TEST_CASE("effective sum equals the zero mode") {
  const auto spec = pl(0.3, 0.9, 2048);
  const auto e = effective_interaction(spec);
  CHECK(e.values.sum() == doctest::Approx(effective_sum(spec)).epsilon(1e-12));
}

TEST_CASE("epsilon_k properties") {
  for (double a : {0.55, 0.8, 1.0, 1.7, 3.0}) {
    CHECK(epsilon_k(a, 0.0) == 1.0);
    for (double k = 0.01; k < 2.0 * pi; k += 0.05) {
      const double e = epsilon_k(a, k);
      CHECK(e <= 1.0);
      CHECK(std::abs(e - epsilon_k(a, -k)) < 1e-13);
      CHECK(std::abs(e - epsilon_k(a, k + 2.0 * pi)) < 1e-12);
    }
  }
  for (double k = 0.0; k < 2.0 * pi; k += 0.2) CHECK(std::abs(epsilon_k(30.0, k) - std::cos(k)) < 1e-8);
  CHECK_THROWS_AS(epsilon_k(0.5, 0.1), DivergenceError);
}

TEST_CASE("small-k exponent of 1 - epsilon at alpha = 1") {
  Eigen::VectorXd lk(21), le(21);
  for (int i = 0; i <= 20; ++i) {
    const double k = std::pow(10.0, -3.0 + 2.0 * i / 20.0);
    lk(i) = std::log(k);
    le(i) = std::log(1.0 - epsilon_k(1.0, k));
  }
  const double mx = lk.mean();
  const double slope = ((lk.array() - mx) * (le.array() - le.mean())).sum() /
                       (lk.array() - mx).square().sum();
  CHECK(std::abs(slope - 1.0) < 0.05);
}

TEST_CASE("kinetic term asymptotics") {
  const double z2 = specfun::riemann_zeta(2.0), z4 = specfun::riemann_zeta(4.0);
  CHECK(kinetic_smallk(2.0, 0.01) == doctest::Approx(z2 / z4 * 5e-5).epsilon(1e-12));
  // α = 1: 1 − ε_k = (πk/2 − k²/4)/ζ(2) exactly
  CHECK(kinetic_smallk(1.0, 0.01) == doctest::Approx(3.0 * 0.01 / pi).epsilon(1e-12));
  CHECK(std::abs(kinetic_smallk(1.0, 0.01) / (1.0 - epsilon_k(1.0, 0.01)) - 1.0) < 0.02);
  double prev = INFINITY;
  for (double k : {1e-2, 1e-3, 1e-4, 1e-5}) {
    const double d = std::abs(kinetic_smallk(1.2, k) / (1.0 - epsilon_k(1.2, k)) - 1.0);
    CHECK(d < prev);
    prev = d;
  }
  CHECK(prev < 1e-3);
  CHECK_THROWS_AS(kinetic_smallk(1.5, 0.01), DomainError);
}
