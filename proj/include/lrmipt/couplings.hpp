#pragma once

#include <Eigen/Dense>

#include "lrmipt/constants.hpp"

namespace lrmipt {

enum class CouplingForm { NearestNeighbor, PowerLaw };

struct CouplingSpec {
  double J = 1.0;
  double g = 0.0;
  double alpha = 1.0;
  CouplingForm form = CouplingForm::PowerLaw;
  int L = 64;
  int k_grid = tol::default_k_grid;

  void validate() const;  // throws DomainError / DivergenceError
};

// Pole decay rate and long-range tail strength of the effective interaction,
// 𝒥(q) ≈ a(−1)^q e^{−μ|q|} − tail_amplitude·|q|^{−tail_exponent}.
struct KernelFit {
  double mu = 0.0;
  double tail_amplitude = 0.0;
};

struct EffectiveInteraction {
  Eigen::VectorXd values;  // 𝒥(q), q = 0..L−1, periodic ring of L sites
  double mu_fit = 0.0;
  double tail_exponent_fit = 0.0;  // NaN for NearestNeighbor
  double tail_amplitude = 0.0;     // 0 for NearestNeighbor
  Eigen::VectorXd fine;            // 𝒥(q) from the k_grid inversion, q = 0..L/4

  KernelFit kernel_fit() const { return {mu_fit, tail_amplitude}; }
};

namespace couplings {

double j_hat_k(const CouplingSpec& spec, double k);

// Ĵ at k_m = 2πm/M, m = 0..M−1. Throws StabilityError if any value ≤ 0.
Eigen::VectorXd j_hat_grid(const CouplingSpec& spec, int M);

// (1/M) Σ_m f_m cos(2πmq/M) for q = 0..n_out−1
Eigen::VectorXd inverse_dft_even(const Eigen::VectorXd& f, int n_out);

EffectiveInteraction effective_interaction(const CouplingSpec& spec);

// real-space kernel on the ring of M sites, inverse transform of Ĵ_k
Eigen::VectorXd real_space_kernel(const CouplingSpec& spec, int M);

// Σ_s 𝒥(s) over the infinite chain, = 1/Ĵ_0
double effective_sum(const CouplingSpec& spec);

double epsilon_k(double alpha, double k);
double kinetic_smallk(double alpha, double k);

}  // namespace couplings
}  // namespace lrmipt
