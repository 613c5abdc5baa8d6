#pragma once

#include <complex>
#include <vector>

namespace lrmipt::specfun {

using Complex = std::complex<double>;

// Σ r^{-s}, s > 1.
double riemann_zeta(double s);

// Analytic continuation of ζ to s ≠ 1 (s ≥ -150). Used by the polylog expansion.
double zeta_continued(double s);

// Γ(x) for |x| ≤ 50 away from the poles.
double gamma_real(double x);

// sin(πx), cos(πx) with exact zeros at integers / half-integers.
double sin_pi(double x);
double cos_pi(double x);

// Li_s(e^{ik}) for fixed order s > 0. Expansion coefficients are cached on
// construction so grids of k are cheap.
class UnitCirclePolylog {
 public:
  explicit UnitCirclePolylog(double s);

  Complex operator()(double k) const;
  double real_part(double k) const { return (*this)(k).real(); }
  double order() const { return s_; }

 private:
  Complex series(double k) const;  // 0 < k ≤ π
  Complex direct(double k) const;

  double s_;
  bool direct_ = false;
  bool integer_ = false;
  int m_ = 0;
  double gamma_1ms_ = 0.0;   // Γ(1-s), non-integer s
  double harmonic_ = 0.0;    // H_{m-1}, integer s
  double inv_fact_ = 0.0;    // 1/(m-1)!
  int direct_terms_ = 0;
  std::vector<double> coeff_;  // ζ(s-n)/n!
};

Complex polylog_unit_circle(double s, double k);

}  // namespace lrmipt::specfun
