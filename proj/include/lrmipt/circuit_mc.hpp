#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <vector>

namespace lrmipt {

struct CircuitParams {
  int N = 1;  // qubits per cluster
  int L = 2;  // clusters
  double J = 1.0;
  double g = 0.0;
  double alpha = 1.0;
  double gamma = 0.0;
  double dt = 0.01;
  double T = 0.0;
  double S = 0.5;  // spin label in the (𝒮+1) factors
  std::uint64_t seed = 0;
  int n_traj = 100;

  int system_qubits() const { return N * L; }
  int total_qubits() const { return 2 * N * L; }
  int steps() const;
  void validate() const;
};

// SplitMix64 over (seed, trajectory, step, draw index); usable as a URBG
class CounterRng {
 public:
  using result_type = std::uint64_t;
  CounterRng(std::uint64_t seed, std::uint64_t trajectory, std::uint64_t step);
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();
  double normal();  // standard Gaussian

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

// Draw order: intra (r, i<j, α, β), cross (r, r'≠r, i, j, α, β), fields (r, i, α).
struct StepCoefficients {
  std::vector<Eigen::Matrix3d> intra;  // J_{ijαβ} per (r, i<j)
  std::vector<Eigen::Matrix3d> cross;  // J̃^{rr'}_{ijαβ} per ordered (r, r'≠r, i, j)
  std::vector<Eigen::Vector3d> n;      // n_i^α per qubit r·N + i
};

// H restricted to one qubit pair: Σ_{αβ} C_{αβ} 𝒮_{pα} 𝒮_{qβ}
struct PairTerm {
  int p = 0;
  int q = 0;
  Eigen::Matrix3d C = Eigen::Matrix3d::Zero();
};

struct TrajectoryState {
  Eigen::VectorXcd amplitudes;  // system qubits are the low bits
  double log_norm = 0.0;        // ln‖ψ‖ of the unnormalized state
  long step = 0;
  bool annihilated = false;

  // maximally entangled pairs between system qubit k and reference qubit k
  static TrajectoryState entangled(const CircuitParams& p);
};

struct Subsystem {
  int begin = 0;  // first cluster
  int end = 0;    // one past the last cluster
  int size() const { return end - begin; }
};

struct TrajectoryRecord {
  double log_norm = 0.0;
  bool annihilated = false;
  std::vector<Eigen::VectorXd> spectra;  // eigenvalues of ρ̃_A, one per subsystem
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  double n_effective = 0.0;  // Kish size of the weights
  int annihilated = 0;
  bool within_tolerance = true;
};

struct ReplicaLimit {
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  double std_error = 0.0;
};

namespace circuit {

inline constexpr double replica_step = 1e-3;

double variance_intra(const CircuitParams& p);
double variance_cross(const CircuitParams& p, int r1, int r2);
double variance_field(const CircuitParams& p);

StepCoefficients sample_step_hamiltonian(const CircuitParams& p, CounterRng& rng);
std::vector<PairTerm> pair_terms(const CircuitParams& p, const StepCoefficients& c);

// exp(−i·h·tau) for one pair term, in the (p, q) two-qubit basis
Eigen::Matrix4cd pair_exponential(const Eigen::Matrix3d& C, double tau);

void apply_two_qubit(Eigen::VectorXcd& psi, int p, int q, const Eigen::Matrix4cd& U);
void apply_unitary_step(TrajectoryState& s, const CircuitParams& p, const std::vector<PairTerm>& terms,
                        double dt);
void apply_measurement_step(TrajectoryState& s, const CircuitParams& p,
                            const std::vector<Eigen::Vector3d>& n, double dt);

// (cos θλ − sin θλ)/√2
double kraus_factor(double lambda, double theta);

std::uint64_t subsystem_mask(const CircuitParams& p, Subsystem A);
std::uint64_t reference_mask(const CircuitParams& p);
Eigen::VectorXd reduced_spectrum(const Eigen::VectorXcd& psi, int n_qubits, std::uint64_t mask);
double purity(const Eigen::VectorXcd& psi, int n_qubits, std::uint64_t mask);

// state and coefficients of trajectory k after `steps` steps
TrajectoryState run_trajectory(const CircuitParams& p, std::uint64_t k, long steps);

std::vector<TrajectoryRecord> simulate(const CircuitParams& p, const std::vector<Subsystem>& subsystems,
                                       int threads = 0);
// same, with arbitrary qubit masks over system and reference
std::vector<TrajectoryRecord> simulate_masks(const CircuitParams& p, const std::vector<std::uint64_t>& masks,
                                             int threads = 0);

Estimate quasi_renyi(const std::vector<TrajectoryRecord>& records, std::size_t which, double n,
                     double tolerance = std::numeric_limits<double>::infinity());
// 1/(m(1−n))·ln[E (tr ρ_A^n)^m / E (tr ρ_A)^{nm}]
double chi(const std::vector<TrajectoryRecord>& records, std::size_t which, double n, double m);
ReplicaLimit replica_limit(const std::vector<TrajectoryRecord>& records, std::size_t which);

Estimate estimate_quasi_renyi(const CircuitParams& p, Subsystem A, double n = 2.0, int threads = 0);
ReplicaLimit replica_limit_identity_check(const CircuitParams& p, Subsystem A, int threads = 0);

}  // namespace circuit
}  // namespace lrmipt
