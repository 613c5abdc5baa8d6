#pragma once

#include <vector>

#include "lrmipt/meanfield.hpp"

namespace lrmipt {

struct PhasePoint {
  double alpha = 1.0;
  double gamma_over_J = 0.0;
  Phase phase = Phase::Broken;
  double sigma = 0.0;  // line tension, zero outside the broken phase
  double xi_t = 1.0;
  double c_fit = 1.0;
  double J = 1.0;
  int N = 1;
  int L = 1;

  double upsilon() const { return 2.0 - 2.0 * alpha; }
  void validate() const;
};

struct ScalingOptions {
  bool capillary = false;  // adds (3/2)·ln A
};

enum class ComplementBranch { ThroughReference, Direct };

struct ComplementEntropy {
  double value = 0.0;
  ComplementBranch branch = ComplementBranch::ThroughReference;
};

struct CodeDistance {
  double value = 0.0;        // NaN on the logarithmic branch
  bool logarithmic = false;  // α ≥ 1: grows like log L, prefactor not modelled
};

struct CriticalExponents {
  double z = 1.0;
  double nu = 1.0;
  const char* nu_model = "free-fermion";
};

struct CodeRow {
  double A = 0.0;
  double S_A = 0.0;
  double S_complement = 0.0;
  double mutual_information = 0.0;
  ComplementBranch branch = ComplementBranch::ThroughReference;
};

namespace entropy {

double entropy_scaling(const PhasePoint& p, double A, const ScalingOptions& opt = {});

// Ŝ_R = N·J·σ·L
double reference_entropy(const PhasePoint& p);

ComplementEntropy complement_entropy(const PhasePoint& p, double A);
double mutual_information(const PhasePoint& p, double A);

// L^υ/(2σ)
double a_star(const PhasePoint& p);
// where the two branches of the complement rule meet, by bisection on [0, L/2]
double crossover_size(const PhasePoint& p);

CodeDistance code_distance(const PhasePoint& p);
CriticalExponents critical_exponents(double alpha);

std::vector<CodeRow> code_table(const PhasePoint& p, const std::vector<double>& sizes);

}  // namespace entropy
}  // namespace lrmipt
