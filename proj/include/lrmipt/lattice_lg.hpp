#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "lrmipt/fitting.hpp"
#include "lrmipt/meanfield.hpp"

namespace lrmipt {

struct Interval {
  int begin = 0;
  int end = 0;  // exclusive
  int size() const { return end > begin ? end - begin : 0; }
  bool contains(int r) const { return r >= begin && r < end; }
  static Interval centered(int L, int A) { return {(L - A) / 2, (L - A) / 2 + A}; }
};

struct BoundarySpec {
  enum class Kind { Free, Pinned };
  Kind kind = Kind::Free;
  Interval swap;              // pinned positive at the final slice
  double pin_strength = 0.0;  // 0 selects 50·√|δ|

  static BoundarySpec free() { return {}; }
  static BoundarySpec pinned(Interval swap = {}) { return {Kind::Pinned, swap, 0.0}; }
  static BoundarySpec full(int L) { return pinned({0, L}); }
};

struct LatticeConfig {
  int L = 0;
  int T_steps = 0;
  double dr = 1.0;
  double dt = 0.1;
  LgCoefficients coeffs;
  double alpha = 1.0;
  Eigen::VectorXd kernel_row;  // K(q) = 1/|q|^{2α}, minimum image, K(0) = 0
  Eigen::MatrixXd kernel;      // circulant L×L built from kernel_row
  BoundarySpec boundary;
  double pin_value = 1.0;  // boundary magnitude
  double pin_h = 0.0;      // effective well strength

  static LatticeConfig make(int L, int T_steps, double dt, const LgCoefficients& coeffs,
                            double alpha, const BoundarySpec& boundary = BoundarySpec::free());
  LatticeConfig with_boundary(const BoundarySpec& b) const;

  // uniform-field mass including the long-range zero mode, δ + 2bΣK
  double delta_eff() const;
  double xi_t() const { return 1.0 / std::sqrt(std::abs(delta_eff())); }
  double extent() const { return (T_steps - 1) * dt; }
  bool boundaries_decoupled() const { return extent() >= 8.0 * xi_t(); }
  double pin_target(int r, int t) const;  // only meaningful on boundary slices
};

struct FieldSolution {
  Eigen::MatrixXd field;  // [L][T_steps]
  double action = 0.0;
  bool converged = false;
  int iterations = 0;
  double grad_norm = 0.0;
};

struct FieldInit {
  enum class Kind { Uniform, Kink, Swap };
  Kind kind = Kind::Uniform;
  int sign = -1;
  double t0 = 0.0;  // physical time of the kink centre

  static FieldInit uniform(int sign) { return {Kind::Uniform, sign, 0.0}; }
  static FieldInit kink(double t0) { return {Kind::Kink, 1, t0}; }
  static FieldInit swap() { return {Kind::Swap, 1, 0.0}; }
};

struct MinimizerOptions {
  int max_iterations = tol::field_max_iterations;
  double grad_tol_per_site = tol::field_grad_per_site;
  std::vector<double> pin_schedule = {0.1, 1.0};
};

namespace lattice {

// action density summed over the lattice; gradient written to grad if non-null
double evaluate(const Eigen::MatrixXd& field, const LatticeConfig& c, Eigen::MatrixXd* grad);

template <typename Derived>
double lattice_action(const Eigen::MatrixBase<Derived>& field, const LatticeConfig& c) {
  return evaluate(field.derived().template cast<double>().eval(), c, nullptr);
}

template <typename Derived>
Eigen::MatrixXd lattice_gradient(const Eigen::MatrixBase<Derived>& field, const LatticeConfig& c) {
  Eigen::MatrixXd g;
  evaluate(field.derived().template cast<double>().eval(), c, &g);
  return g;
}

Eigen::MatrixXd initial_field(const LatticeConfig& c, const FieldInit& init);

FieldSolution minimize_field(const LatticeConfig& c, const FieldInit& init,
                             const MinimizerOptions& opt = {});

struct QuasiEntropy {
  double value = 0.0;  // I_SWAP − I
  double plain_action = 0.0;
  double swap_action = 0.0;
  double alternative_swap_action = NAN;  // from Uniform(−), when explored
  bool converged = true;
  FieldSolution swap;
};

struct QuasiEntropyOptions {
  MinimizerOptions minimizer;
  bool explore_alternative = false;
  bool keep_field = false;
};

// I for the plain pinned boundary, shared by sweeps
FieldSolution plain_solution(const LatticeConfig& c, const MinimizerOptions& opt = {});

QuasiEntropy quasi_entropy_numeric(const LatticeConfig& c, Interval A,
                                   const QuasiEntropyOptions& opt = {});
QuasiEntropy quasi_entropy_numeric(const LatticeConfig& c, Interval A, const FieldSolution& plain,
                                   const QuasiEntropyOptions& opt = {});

struct EntropySweep {
  std::vector<int> sizes;
  std::vector<double> values;
  std::vector<bool> converged;
  fit::PowerLawFit fit;  // volume·A + amplitude·A^υ + constant
};

EntropySweep entropy_sweep(const LatticeConfig& c, const std::vector<int>& sizes,
                           bool with_volume, const QuasiEntropyOptions& opt = {});

double kink_action_analytic(double delta);

struct DomainWallEnergy {
  double direct = 0.0;
  double asymptotic = 0.0;
};

DomainWallEnergy flat_domain_wall_energy(int A, double w, double J, double K, double alpha, int L,
                                         double eps = 1.0);

Eigen::VectorXd periodic_kernel_row(int L, double alpha);

}  // namespace lattice
}  // namespace lrmipt
