#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "lrmipt/meanfield.hpp"

namespace lrmipt {

struct SykParams {
  double J = 1.0;
  double U = 0.0;
  int q = 4;
  double gamma = 0.0;
  double alpha = 1.0;
  double dt = 1.0;  // bookkeeping step for the measurement strength

  double J_hat = 0.0;  // J·ζ(2α)
  double gamma_tilde = 0.0;
  double U_tilde = 0.0;

  static SykParams make(double J, double U, int q, double gamma, double alpha, double dt = 1.0);
  // same couplings, γ̃ set directly
  static SykParams at(double gamma_tilde, double U_tilde, double alpha = 1.0, int q = 4);
  double s() const { return std::sqrt(gamma * dt); }
};

struct LambdaSolution {
  double lambda = 0.0;         // physical branch
  std::vector<double> roots;   // every root of the λ equation in (0, 1]
  bool multiple = false;       // more than one root coexists
  double residual = 0.0;       // worst residual over roots
};

struct SaddleGreen {
  double lambda = 0.0;
  double decay_rate = 0.0;
  Eigen::Matrix4cd matrix;  // contour ⊗ chain
};

enum class TransitionOrder { First, Second, Tricritical };
const char* to_string(TransitionOrder o);

struct TransitionReport {
  TransitionOrder order = TransitionOrder::Second;
  int nonzero_roots = 0;  // at γ̃ = 1
  bool consistent = true;
};

enum class EntropyForm { Log, Power, Bounded };
const char* to_string(EntropyForm f);

struct ScalingDescriptor {
  EntropyForm form = EntropyForm::Bounded;
  double exponent = 0.0;  // of A for the power form, 0 otherwise
  double shape = 1.0;     // log A, A^exponent or 1 at the requested A
};

namespace syk {

// (1−λ²)(1+Ũλ^{q−2})² − γ̃²
double lambda_residual(const SykParams& p, double lambda);

LambdaSolution solve_lambda(const SykParams& p);

SaddleGreen saddle_green(const SykParams& p, double t12);
SaddleGreen saddle_green(const SykParams& p, const LambdaSolution& sol, double t12);

double stiffness(const SykParams& p);

// (ρ/2)(Ω²/γ² + 1 − ε_k)
double goldstone_action_quadratic(const SykParams& p, double k, double Omega);
// rows follow ks, columns follow Omegas
Eigen::MatrixXd goldstone_grid(const SykParams& p, const Eigen::VectorXd& ks,
                               const Eigen::VectorXd& Omegas);

TransitionOrder transition_order(const SykParams& p);
TransitionReport transition_report(const SykParams& p);

ScalingDescriptor free_fermion_entropy_scaling(double alpha, Phase phase, double A);

}  // namespace syk
}  // namespace lrmipt
