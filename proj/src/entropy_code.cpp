#include "lrmipt/entropy_code.hpp"

#include <cmath>

#include "lrmipt/errors.hpp"

namespace lrmipt {

void PhasePoint::validate() const {
  if (!(alpha > 0.5)) throw DivergenceError("PhasePoint: alpha must exceed 1/2");
  if (phase == Phase::Critical) throw DomainError("PhasePoint: phase must be symmetric or broken");
  if (phase == Phase::Broken && !(sigma > 0.0)) throw DomainError("PhasePoint: broken phase needs sigma > 0");
  if (phase == Phase::Symmetric && sigma != 0.0) throw DomainError("PhasePoint: sigma is zero outside the broken phase");
  if (!(xi_t > 0.0)) throw DomainError("PhasePoint: xi_t must be > 0");
  if (!std::isfinite(c_fit) || !(J > 0.0)) throw DomainError("PhasePoint: c and J must be finite, J > 0");
  if (N < 1 || L < 1) throw DomainError("PhasePoint: N and L must be >= 1");
}

namespace entropy {

namespace {

double power(double x, double u) { return x > 0.0 ? std::pow(x, u) : 0.0; }

void require_broken(const PhasePoint& p, const char* who) {
  p.validate();
  if (p.phase != Phase::Broken) throw PhaseError(std::string(who) + ": needs the broken phase");
}

// N·J·(σx + cξ_t x^υ), the direct form used by both branches
double branch(const PhasePoint& p, double x) {
  return p.N * p.J * (p.sigma * x + p.c_fit * p.xi_t * power(x, p.upsilon()));
}

}  // namespace

double entropy_scaling(const PhasePoint& p, double A, const ScalingOptions& opt) {
  p.validate();
  if (!(A >= 0.0) || A > p.L) throw DomainError("entropy_scaling: A outside [0, L]");
  if (A == 0.0) return 0.0;
  double s = branch(p, A);
  if (opt.capillary) s += 1.5 * std::log(A);
  return s;
}

double reference_entropy(const PhasePoint& p) {
  require_broken(p, "reference_entropy");
  return p.N * p.J * p.sigma * p.L;
}

ComplementEntropy complement_entropy(const PhasePoint& p, double A) {
  require_broken(p, "complement_entropy");
  if (!(A >= 0.0) || A > p.L) throw DomainError("complement_entropy: A outside [0, L]");
  const double through = entropy_scaling(p, A) + reference_entropy(p);
  const double direct = branch(p, p.L - A);
  if (through <= direct) return {through, ComplementBranch::ThroughReference};
  return {direct, ComplementBranch::Direct};
}

double mutual_information(const PhasePoint& p, double A) {
  const double sa = entropy_scaling(p, A);
  return sa + reference_entropy(p) - complement_entropy(p, A).value;
}

double a_star(const PhasePoint& p) {
  require_broken(p, "a_star");
  return std::pow(static_cast<double>(p.L), p.upsilon()) / (2.0 * p.sigma);
}

double crossover_size(const PhasePoint& p) {
  require_broken(p, "crossover_size");
  // through − direct rises monotonically from −cξ_t L^υ at A = 0
  auto gap = [&](double A) { return entropy_scaling(p, A) + reference_entropy(p) - branch(p, p.L - A); };
  double lo = 0.0, hi = 0.5 * p.L;
  if (gap(hi) <= 0.0) return hi;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) <= 0.0 ? lo : hi) = mid;
  }
  return lo;
}

CodeDistance code_distance(const PhasePoint& p) {
  require_broken(p, "code_distance");
  if (p.alpha >= 1.0) return {NAN, true};
  return {p.N * a_star(p), false};
}

CriticalExponents critical_exponents(double alpha) {
  if (!(alpha > 0.5)) throw DivergenceError("critical_exponents: alpha must exceed 1/2");
  CriticalExponents e;
  e.z = 2.0 * alpha >= 3.0 ? 1.0 : (2.0 * alpha - 1.0) / 2.0;
  return e;
}

std::vector<CodeRow> code_table(const PhasePoint& p, const std::vector<double>& sizes) {
  std::vector<CodeRow> rows;
  rows.reserve(sizes.size());
  for (double A : sizes) {
    CodeRow r;
    r.A = A;
    r.S_A = entropy_scaling(p, A);
    const auto c = complement_entropy(p, A);
    r.S_complement = c.value;
    r.branch = c.branch;
    r.mutual_information = r.S_A + reference_entropy(p) - c.value;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace entropy
}  // namespace lrmipt
