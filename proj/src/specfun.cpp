#include "lrmipt/specfun.hpp"

#include <cmath>
#include <numbers>

#include "lrmipt/constants.hpp"
#include "lrmipt/errors.hpp"

namespace lrmipt::specfun {

namespace {

constexpr double pi = std::numbers::pi;

// B_{2j} for j = 1..10
constexpr double bernoulli_even[] = {1.0 / 6.0,        -1.0 / 30.0,   1.0 / 42.0,
                                     -1.0 / 30.0,      5.0 / 66.0,    -691.0 / 2730.0,
                                     7.0 / 6.0,        -3617.0 / 510.0, 43867.0 / 798.0,
                                     -174611.0 / 330.0};

// Σ_{r<N} r^{-s} + Euler–Maclaurin tail at N with p Bernoulli corrections.
double euler_maclaurin(double s, int N, int p) {
  double head = 0.0;
  for (int r = N - 1; r >= 1; --r) head += std::pow(static_cast<double>(r), -s);
  const double n = N;
  double tail = std::pow(n, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(n, -s);
  double rising = s;      // s(s+1)...(s+2j-2)
  double fact = 2.0;      // (2j)!
  double npow = std::pow(n, -s - 1.0);
  for (int j = 1; j <= p; ++j) {
    if (j > 1) {
      rising *= (s + 2 * j - 3) * (s + 2 * j - 2);
      fact *= (2.0 * j - 1.0) * (2.0 * j);
      npow /= n * n;
    }
    tail += bernoulli_even[j - 1] / fact * rising * npow;
  }
  return head + tail;
}

}  // namespace

double sin_pi(double x) {
  double r = std::fmod(x, 2.0);
  if (r < 0) r += 2.0;
  if (r == 0.0 || r == 1.0) return 0.0;
  if (r == 0.5) return 1.0;
  if (r == 1.5) return -1.0;
  if (r < 0.5) return std::sin(pi * r);
  if (r < 1.5) return -std::sin(pi * (r - 1.0));
  return std::sin(pi * (r - 2.0));
}

double cos_pi(double x) { return sin_pi(x + 0.5); }

double riemann_zeta(double s) {
  if (!(s > 1.0)) throw DomainError("riemann_zeta: requires s > 1");
  if (std::isinf(s)) return 1.0;
  // away from the pole a short head with more Bernoulli terms is just as exact
  if (s > 3.0) return euler_maclaurin(s, tol::zeta_small_terms, tol::zeta_small_bernoulli_terms);
  return euler_maclaurin(s, tol::zeta_direct_terms, tol::zeta_bernoulli_terms);
}

double zeta_continued(double s) {
  if (s == 1.0) throw DomainError("zeta_continued: pole at s = 1");
  if (s > 1.0) return riemann_zeta(s);
  if (s >= 0.0)
    return euler_maclaurin(s, tol::zeta_small_terms, tol::zeta_small_bernoulli_terms);
  if (s < -150.0) throw DomainError("zeta_continued: s below -150");
  const double sn = sin_pi(s / 2.0);
  if (sn == 0.0) return 0.0;  // trivial zeros
  return std::pow(2.0 * pi, s) / pi * sn * std::tgamma(1.0 - s) * riemann_zeta(1.0 - s);
}

double gamma_real(double x) {
  if (!std::isfinite(x) || std::abs(x) > tol::gamma_max_abs)
    throw DomainError("gamma_real: |x| > 50");
  if (x <= 0.0 && x == std::floor(x)) throw DomainError("gamma_real: pole");
  return std::tgamma(x);
}

UnitCirclePolylog::UnitCirclePolylog(double s) : s_(s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("polylog: requires finite s > 0");
  if (s >= tol::polylog_direct_order) {
    direct_ = true;
    direct_terms_ = static_cast<int>(
        std::ceil(std::pow(1.0 / (tol::polylog_direct_tail * (s - 1.0)), 1.0 / (s - 1.0))));
    return;
  }
  integer_ = (s == std::floor(s));
  m_ = static_cast<int>(s);
  coeff_.resize(tol::polylog_series_terms);
  double fact = 1.0;
  for (int n = 0; n < tol::polylog_series_terms; ++n) {
    if (n > 0) fact *= n;
    coeff_[n] = (integer_ && n == m_ - 1) ? 0.0 : zeta_continued(s - n) / fact;
  }
  if (integer_) {
    harmonic_ = 0.0;
    inv_fact_ = 1.0;
    for (int j = 1; j < m_; ++j) {
      harmonic_ += 1.0 / j;
      inv_fact_ /= j;
    }
  } else {
    gamma_1ms_ = std::tgamma(1.0 - s);
  }
}

Complex UnitCirclePolylog::direct(double k) const {
  // Kahan-compensated Σ e^{ikr} r^{-s}
  double re = 0.0, im = 0.0, cre = 0.0, cim = 0.0;
  for (int r = direct_terms_; r >= 1; --r) {
    const double w = std::pow(static_cast<double>(r), -s_);
    const double yr = w * std::cos(k * r) - cre;
    const double tr = re + yr;
    cre = (tr - re) - yr;
    re = tr;
    const double yi = w * std::sin(k * r) - cim;
    const double ti = im + yi;
    cim = (ti - im) - yi;
    im = ti;
  }
  return {re, im};
}

Complex UnitCirclePolylog::series(double k) const {
  const Complex mu(0.0, k);
  Complex acc = 0.0;
  for (int n = static_cast<int>(coeff_.size()) - 1; n >= 0; --n) acc = acc * mu + coeff_[n];
  Complex sing;
  if (integer_) {
    // μ^{m-1}/(m-1)! [H_{m-1} - ln(-μ)], ln(-ik) = ln k - iπ/2
    const Complex mu_pow = std::pow(k, m_ - 1) * std::pow(Complex(0.0, 1.0), m_ - 1);
    sing = mu_pow * inv_fact_ * Complex(harmonic_ - std::log(k), pi / 2.0);
  } else {
    // Γ(1-s)(-ik)^{s-1}
    const double a = (s_ - 1.0) / 2.0;
    sing = gamma_1ms_ * std::pow(k, s_ - 1.0) * Complex(cos_pi(a), -sin_pi(a));
  }
  return acc + sing;
}

Complex UnitCirclePolylog::operator()(double k) const {
  if (!std::isfinite(k)) throw DomainError("polylog: non-finite k");
  double kr = std::remainder(k, 2.0 * pi);  // (-π, π]
  if (kr == 0.0) {
    if (s_ <= 1.0) throw DomainError("polylog: k = 0 with s <= 1");
    return riemann_zeta(s_);
  }
  const bool flip = kr < 0.0;
  if (flip) kr = -kr;
  const Complex v = direct_ ? direct(kr) : series(kr);
  return flip ? std::conj(v) : v;
}

Complex polylog_unit_circle(double s, double k) { return UnitCirclePolylog(s)(k); }

}  // namespace lrmipt::specfun
