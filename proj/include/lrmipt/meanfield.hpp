#pragma once

#include <Eigen/Dense>

#include "lrmipt/couplings.hpp"

namespace lrmipt {

enum class Phase { Symmetric, Broken, Critical };

const char* to_string(Phase p);

struct MeanFieldParams {
  CouplingSpec spec;
  double gamma = 0.0;
  double Gamma = 0.0;  // γ/Ĵ_0
  double Jcal = 0.0;   // (27/16)·J·Σ_s 𝒥(s) = 27J/(16Ĵ_0)

  static MeanFieldParams make(const CouplingSpec& spec, double gamma);
  void validate() const;
};

struct MeanFieldPoint {
  double phi = 0.0;  // ≥ 0; (−φ, Θ) is the partner saddle when paired
  double theta = 0.0;
  Phase phase = Phase::Symmetric;
  double residual = 0.0;
  bool paired = false;
};

struct LgCoefficients {
  double beta = 0.0;
  double b = 0.0;
  double delta = 0.0;
  double quartic = 0.25;
};

struct RbitBoundary {
  enum class Kind { TraceClosure, FixedStates };
  Kind kind = Kind::TraceClosure;
  Eigen::Vector2d initial = Eigen::Vector2d::Zero();
  Eigen::Vector2d final = Eigen::Vector2d::Zero();

  static RbitBoundary trace() { return {}; }
  static RbitBoundary fixed(const Eigen::Vector2d& in, const Eigen::Vector2d& out) {
    return {Kind::FixedStates, in, out};
  }
};

struct RbitPropagator {
  double log_value = 0.0;      // ln 𝒦 without the identity channel
  double identity_term = 0.0;  // B·T/2, kept apart
};

namespace meanfield {

inline constexpr double Gamma_c = 1.0 / 9.0;

// Samples are midpoint values on a uniform grid of n = phi.size() steps over [0, T].
RbitPropagator rbit_log_propagator(const Eigen::VectorXd& phi, const Eigen::VectorXd& theta,
                                   double T, const RbitBoundary& boundary, double B = 0.0);

double bulk_action(double phi, double theta, const MeanFieldParams& p);
Eigen::Vector2d bulk_gradient(double phi, double theta, const MeanFieldParams& p);
Eigen::Matrix2d bulk_hessian(double phi, double theta, const MeanFieldParams& p);

MeanFieldPoint solve_saddle(const MeanFieldParams& p);
MeanFieldPoint symmetric_saddle(const MeanFieldParams& p);

double gamma_c(const CouplingSpec& spec);

LgCoefficients lg_coefficients(const MeanFieldParams& p, const KernelFit& kernel);

}  // namespace meanfield
}  // namespace lrmipt
