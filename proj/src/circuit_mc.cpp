#include "lrmipt/circuit_mc.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <thread>

#include "lrmipt/constants.hpp"
#include "lrmipt/errors.hpp"

namespace lrmipt {

using cd = std::complex<double>;

int CircuitParams::steps() const { return static_cast<int>(std::lround(T / dt)); }

void CircuitParams::validate() const {
  if (N < 1 || L < 1) throw DomainError("CircuitParams: N and L must be >= 1");
  if (total_qubits() > tol::max_total_qubits)
    throw ResourceError("CircuitParams: 2·N·L exceeds the qubit budget");
  if (!(dt > 0.0) || !(T >= 0.0)) throw DomainError("CircuitParams: need dt > 0 and T >= 0");
  if (!(J >= 0.0) || !(g >= 0.0) || !(gamma >= 0.0) || !(alpha > 0.0))
    throw DomainError("CircuitParams: need J, g, gamma >= 0 and alpha > 0");
  if (dt * J > tol::max_dt_J * (1.0 + 1e-12)) throw DomainError("CircuitParams: dt·J above 0.01");
  if (gamma * dt > tol::max_gamma_dt * (1.0 + 1e-12))
    throw DomainError("CircuitParams: gamma·dt above 0.1");
  if (S != tol::spin_label) throw DomainError("CircuitParams: only spin-1/2 is simulated");
  if (n_traj < 1) throw DomainError("CircuitParams: n_traj must be >= 1");
}

namespace {

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t golden = 0x9e3779b97f4a7c15ULL;

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t trajectory, std::uint64_t step)
    : base_(mix(mix(mix(seed + golden) ^ (trajectory + 2 * golden)) ^ (step + 3 * golden))) {}

CounterRng::result_type CounterRng::operator()() { return mix(base_ + (++counter_) * golden); }

double CounterRng::normal() {
  // fresh distribution per draw: no cached pair, so a value depends only on its counter
  return std::normal_distribution<double>{}(*this);
}

TrajectoryState TrajectoryState::entangled(const CircuitParams& p) {
  const int nq = p.system_qubits();
  const std::size_t d = std::size_t{1} << nq;
  TrajectoryState s;
  s.amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d * d));
  const double a = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t q = 0; q < d; ++q) s.amplitudes(static_cast<Eigen::Index>(q + d * q)) = a;
  return s;
}

namespace circuit {

namespace {

double sp1_pow(const CircuitParams& p, int k) { return std::pow(p.S + 1.0, k); }

// Pauli/2
std::array<Eigen::Matrix2cd, 3> spin_ops() {
  std::array<Eigen::Matrix2cd, 3> s;
  s[0] << 0, 0.5, 0.5, 0;
  s[1] << 0, cd(0, -0.5), cd(0, 0.5), 0;
  s[2] << 0.5, 0, 0, -0.5;
  return s;
}

Eigen::Matrix4cd kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return m;
}

void apply_one_qubit(Eigen::VectorXcd& psi, int k, const Eigen::Matrix2cd& U) {
  const Eigen::Index bit = Eigen::Index{1} << k;
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    if (i & bit) continue;
    const cd a = psi(i), b = psi(i | bit);
    psi(i) = U(0, 0) * a + U(0, 1) * b;
    psi(i | bit) = U(1, 0) * a + U(1, 1) * b;
  }
}

// columns: eigenvectors of n̂·σ for +1 and −1
Eigen::Matrix2cd field_basis(const Eigen::Vector3d& nhat) {
  const double x = nhat(0), y = nhat(1), z = nhat(2);
  cd a, b;
  if (z >= 0.0) {
    const double s = std::sqrt(2.0 * (1.0 + z));
    a = (1.0 + z) / s;
    b = cd(x, y) / s;
  } else {
    const double s = std::sqrt(2.0 * (1.0 - z));
    a = cd(x, -y) / s;
    b = (1.0 - z) / s;
  }
  Eigen::Matrix2cd V;
  V << a, -std::conj(b), b, std::conj(a);
  return V;
}

double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

double pairwise_sum(const std::vector<double>& x) { return pairwise_sum(x.data(), x.size()); }

// Weighted ratio Σ a_i f_i / Σ a_i with a_i ∝ exp(lw_i), plus leave-one-out ratios.
struct WeightedRatio {
  double value = NAN;
  std::vector<double> loo;
  double kish = 0.0;
};

WeightedRatio weighted_ratio(const std::vector<double>& lw, const std::vector<double>& f,
                             const std::vector<bool>& alive) {
  const std::size_t M = lw.size();
  double shift = -INFINITY;
  for (std::size_t i = 0; i < M; ++i)
    if (alive[i]) shift = std::max(shift, lw[i]);
  std::vector<double> a(M, 0.0), b(M, 0.0), a2(M, 0.0);
  for (std::size_t i = 0; i < M; ++i) {
    if (!alive[i]) continue;
    a[i] = std::exp(lw[i] - shift);
    b[i] = a[i] * f[i];
    a2[i] = a[i] * a[i];
  }
  const double A = pairwise_sum(a), B = pairwise_sum(b);
  WeightedRatio r;
  if (!(A > 0.0)) return r;
  r.value = B / A;
  r.kish = A * A / pairwise_sum(a2);
  r.loo.resize(M);
  for (std::size_t i = 0; i < M; ++i) {
    const double Ai = A - a[i];
    r.loo[i] = Ai > 0.0 ? (B - b[i]) / Ai : NAN;
  }
  return r;
}

double jackknife_error(const std::vector<double>& loo) {
  const std::size_t M = loo.size();
  if (M < 2) return INFINITY;
  double mean = 0.0;
  for (double v : loo) {
    if (!std::isfinite(v)) return INFINITY;
    mean += v;
  }
  mean /= static_cast<double>(M);
  double ss = 0.0;
  for (double v : loo) ss += (v - mean) * (v - mean);
  return std::sqrt(ss * static_cast<double>(M - 1) / static_cast<double>(M));
}

struct Columns {
  std::vector<double> log_norm;
  std::vector<bool> alive;
  int annihilated = 0;
};

Columns columns(const std::vector<TrajectoryRecord>& records) {
  Columns c;
  for (const auto& r : records) {
    c.log_norm.push_back(r.log_norm);
    c.alive.push_back(!r.annihilated);
    c.annihilated += r.annihilated ? 1 : 0;
  }
  return c;
}

double power_sum(const Eigen::VectorXd& lam, double n) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    if (lam(i) > 0.0) s += std::pow(lam(i), n);
  return s;
}

double entropy_of(const Eigen::VectorXd& lam) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    if (lam(i) > 0.0) s -= lam(i) * std::log(lam(i));
  return s;
}

// Ŝ^{(n)} from records, with its leave-one-out values
WeightedRatio renyi_ratio(const std::vector<TrajectoryRecord>& records, const Columns& c,
                          std::size_t which, double n) {
  const std::size_t M = records.size();
  std::vector<double> lw(M), f(M, 0.0);
  for (std::size_t i = 0; i < M; ++i) {
    lw[i] = 2.0 * n * c.log_norm[i];
    if (c.alive[i]) f[i] = power_sum(records[i].spectra.at(which), n);
  }
  return weighted_ratio(lw, f, c.alive);
}

}  // namespace

double variance_intra(const CircuitParams& p) { return p.J / (p.N * sp1_pow(p, 4)) / (0.5 * p.dt); }

double variance_cross(const CircuitParams& p, int r1, int r2) {
  const double d = std::abs(r1 - r2);
  return p.g * p.J * std::pow(d, -2.0 * p.alpha) / (p.N * sp1_pow(p, 4)) / (0.5 * p.dt);
}

double variance_field(const CircuitParams& p) { return p.gamma / sp1_pow(p, 2) / (0.5 * p.dt); }

StepCoefficients sample_step_hamiltonian(const CircuitParams& p, CounterRng& rng) {
  StepCoefficients c;
  const double si = std::sqrt(variance_intra(p));
  for (int r = 0; r < p.L; ++r)
    for (int i = 0; i < p.N; ++i)
      for (int j = i + 1; j < p.N; ++j) {
        Eigen::Matrix3d m;
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) m(a, b) = si * rng.normal();
        c.intra.push_back(m);
      }
  for (int r = 0; r < p.L; ++r)
    for (int r2 = 0; r2 < p.L; ++r2) {
      if (r2 == r) continue;
      const double sc = std::sqrt(variance_cross(p, r, r2));
      for (int i = 0; i < p.N; ++i)
        for (int j = 0; j < p.N; ++j) {
          Eigen::Matrix3d m;
          for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) m(a, b) = sc == 0.0 ? 0.0 : sc * rng.normal();
          c.cross.push_back(m);
        }
    }
  const double sf = std::sqrt(variance_field(p));
  for (int k = 0; k < p.system_qubits(); ++k) {
    Eigen::Vector3d v;
    for (int a = 0; a < 3; ++a) v(a) = sf == 0.0 ? 0.0 : sf * rng.normal();
    c.n.push_back(v);
  }
  return c;
}

std::vector<PairTerm> pair_terms(const CircuitParams& p, const StepCoefficients& c) {
  const int N = p.N, L = p.L;
  auto cross_index = [&](int r, int r2, int i, int j) {
    // position of (r, r2, i, j) in draw order
    const int block = r * (L - 1) + (r2 < r ? r2 : r2 - 1);
    return (block * N + i) * N + j;
  };
  std::vector<PairTerm> t;
  int idx = 0;
  for (int r = 0; r < L; ++r)
    for (int i = 0; i < N; ++i)
      for (int j = i + 1; j < N; ++j) t.push_back({r * N + i, r * N + j, c.intra.at(idx++)});
  if (!c.cross.empty())
    for (int r = 0; r < L; ++r)
      for (int r2 = r + 1; r2 < L; ++r2)
        for (int i = 0; i < N; ++i)
          for (int j = 0; j < N; ++j) {
            const Eigen::Matrix3d C =
                c.cross.at(cross_index(r, r2, i, j)) + c.cross.at(cross_index(r2, r, j, i)).transpose();
            t.push_back({r * N + i, r2 * N + j, C});
          }
  std::sort(t.begin(), t.end(), [](const PairTerm& a, const PairTerm& b) {
    return a.p != b.p ? a.p < b.p : a.q < b.q;
  });
  return t;
}

Eigen::Matrix4cd pair_exponential(const Eigen::Matrix3d& C, double tau) {
  static const auto s = spin_ops();
  Eigen::Matrix4cd h = Eigen::Matrix4cd::Zero();
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      if (C(a, b) != 0.0) h += C(a, b) * kron(s[a], s[b]);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h);
  Eigen::Vector4cd ph;
  for (int k = 0; k < 4; ++k) ph(k) = std::exp(cd(0.0, -es.eigenvalues()(k) * tau));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

void apply_two_qubit(Eigen::VectorXcd& psi, int p, int q, const Eigen::Matrix4cd& U) {
  const Eigen::Index bp = Eigen::Index{1} << p, bq = Eigen::Index{1} << q;
  const int lo = std::min(p, q), hi = std::max(p, q);
  auto insert_zero = [](Eigen::Index x, int k) {
    return ((x >> k) << (k + 1)) | (x & ((Eigen::Index{1} << k) - 1));
  };
  for (Eigen::Index g = 0; g < psi.size() / 4; ++g) {
    const Eigen::Index i = insert_zero(insert_zero(g, lo), hi);
    const Eigen::Index i1 = i | bq, i2 = i | bp, i3 = i | bp | bq;
    const cd a0 = psi(i), a1 = psi(i1), a2 = psi(i2), a3 = psi(i3);
    psi(i) = U(0, 0) * a0 + U(0, 1) * a1 + U(0, 2) * a2 + U(0, 3) * a3;
    psi(i1) = U(1, 0) * a0 + U(1, 1) * a1 + U(1, 2) * a2 + U(1, 3) * a3;
    psi(i2) = U(2, 0) * a0 + U(2, 1) * a1 + U(2, 2) * a2 + U(2, 3) * a3;
    psi(i3) = U(3, 0) * a0 + U(3, 1) * a1 + U(3, 2) * a2 + U(3, 3) * a3;
  }
}

void apply_unitary_step(TrajectoryState& s, const CircuitParams&, const std::vector<PairTerm>& terms,
                        double dt) {
  if (s.annihilated) return;
  // U = exp(−iH·dt/2), symmetric second-order splitting over pair terms
  const double half = 0.25 * dt;
  std::vector<Eigen::Matrix4cd> gates;
  gates.reserve(terms.size());
  for (const auto& t : terms) gates.push_back(pair_exponential(t.C, half));
  for (std::size_t k = 0; k < terms.size(); ++k) apply_two_qubit(s.amplitudes, terms[k].p, terms[k].q, gates[k]);
  for (std::size_t k = terms.size(); k-- > 0;) apply_two_qubit(s.amplitudes, terms[k].p, terms[k].q, gates[k]);
  const double nrm = s.amplitudes.norm();
  if (!(std::abs(nrm - 1.0) <= tol::norm_drift)) throw NormError("apply_unitary_step: norm drift beyond tolerance");
  s.amplitudes /= nrm;
}

double kraus_factor(double lambda, double theta) {
  return (std::cos(theta * lambda) - std::sin(theta * lambda)) / std::numbers::sqrt2;
}

void apply_measurement_step(TrajectoryState& s, const CircuitParams& p,
                            const std::vector<Eigen::Vector3d>& n, double dt) {
  if (s.annihilated) return;
  const int N = p.N, nq = p.system_qubits();
  if (static_cast<int>(n.size()) != nq) throw DomainError("apply_measurement_step: one field per qubit");
  const double theta = 0.5 * dt;
  std::vector<Eigen::Matrix2cd> V(nq);
  std::vector<double> amp(nq);
  for (int k = 0; k < nq; ++k) {
    amp[k] = n[k].norm();
    V[k] = amp[k] > 0.0 ? field_basis(n[k] / amp[k]) : Eigen::Matrix2cd::Identity();
    if (amp[k] > 0.0) apply_one_qubit(s.amplitudes, k, V[k].adjoint());
  }
  // Kraus factor of each cluster as a function of its N eigenbasis bits
  const int cfg = 1 << N;
  std::vector<double> table(static_cast<std::size_t>(p.L) * cfg);
  for (int r = 0; r < p.L; ++r)
    for (int b = 0; b < cfg; ++b) {
      double lam = 0.0;
      for (int i = 0; i < N; ++i) lam += ((b >> i) & 1 ? -0.5 : 0.5) * amp[r * N + i];
      table[static_cast<std::size_t>(r) * cfg + b] = kraus_factor(lam, theta);
    }
  const Eigen::Index sys_mask = (Eigen::Index{1} << nq) - 1;
  for (Eigen::Index i = 0; i < s.amplitudes.size(); ++i) {
    const Eigen::Index q = i & sys_mask;
    double f = 1.0;
    for (int r = 0; r < p.L; ++r) f *= table[static_cast<std::size_t>(r) * cfg + ((q >> (r * N)) & (cfg - 1))];
    s.amplitudes(i) *= f;
  }
  for (int k = 0; k < nq; ++k)
    if (amp[k] > 0.0) apply_one_qubit(s.amplitudes, k, V[k]);
  const double nrm = s.amplitudes.norm();
  if (!(nrm > 0.0) || !std::isfinite(nrm)) {
    s.annihilated = true;
    s.log_norm = -INFINITY;
    s.amplitudes.setZero();
    return;
  }
  s.log_norm += std::log(nrm);
  s.amplitudes /= nrm;
}

std::uint64_t subsystem_mask(const CircuitParams& p, Subsystem A) {
  if (A.begin < 0 || A.end > p.L || A.begin > A.end) throw DomainError("Subsystem: outside the chain");
  std::uint64_t m = 0;
  for (int k = A.begin * p.N; k < A.end * p.N; ++k) m |= std::uint64_t{1} << k;
  return m;
}

std::uint64_t reference_mask(const CircuitParams& p) {
  const int n = p.system_qubits();
  return ((std::uint64_t{1} << n) - 1) << n;
}

Eigen::VectorXd reduced_spectrum(const Eigen::VectorXcd& psi, int n_qubits, std::uint64_t mask) {
  std::vector<int> in, out;
  for (int k = 0; k < n_qubits; ++k) ((mask >> k) & 1 ? in : out).push_back(k);
  const Eigen::Index da = Eigen::Index{1} << in.size(), db = Eigen::Index{1} << out.size();
  if (psi.size() != da * db) throw DomainError("reduced_spectrum: state size does not match qubit count");
  Eigen::MatrixXcd M(da, db);
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    Eigen::Index a = 0, b = 0;
    for (std::size_t t = 0; t < in.size(); ++t) a |= ((i >> in[t]) & 1) << t;
    for (std::size_t t = 0; t < out.size(); ++t) b |= ((i >> out[t]) & 1) << t;
    M(a, b) = psi(i);
  }
  const Eigen::MatrixXcd rho = da <= db ? Eigen::MatrixXcd(M * M.adjoint()) : Eigen::MatrixXcd(M.adjoint() * M);
  Eigen::VectorXd lam = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(rho, Eigen::EigenvaluesOnly).eigenvalues();
  return lam.cwiseMax(0.0);
}

double purity(const Eigen::VectorXcd& psi, int n_qubits, std::uint64_t mask) {
  return reduced_spectrum(psi, n_qubits, mask).squaredNorm();
}

TrajectoryState run_trajectory(const CircuitParams& p, std::uint64_t k, long steps) {
  TrajectoryState s = TrajectoryState::entangled(p);
  for (long t = 0; t < steps && !s.annihilated; ++t) {
    CounterRng rng(p.seed, k, static_cast<std::uint64_t>(t));
    const StepCoefficients c = sample_step_hamiltonian(p, rng);
    apply_unitary_step(s, p, pair_terms(p, c), p.dt);
    apply_measurement_step(s, p, c.n, p.dt);
    ++s.step;
  }
  return s;
}

std::vector<TrajectoryRecord> simulate(const CircuitParams& p, const std::vector<Subsystem>& subsystems,
                                       int threads) {
  std::vector<std::uint64_t> masks;
  for (const auto& A : subsystems) masks.push_back(subsystem_mask(p, A));
  return simulate_masks(p, masks, threads);
}

std::vector<TrajectoryRecord> simulate_masks(const CircuitParams& p, const std::vector<std::uint64_t>& masks,
                                             int threads) {
  p.validate();
  std::vector<TrajectoryRecord> records(static_cast<std::size_t>(p.n_traj));
  std::atomic<int> next{0};
  auto work = [&] {
    for (int k; (k = next.fetch_add(1)) < p.n_traj;) {
      const TrajectoryState s = run_trajectory(p, static_cast<std::uint64_t>(k), p.steps());
      TrajectoryRecord& r = records[static_cast<std::size_t>(k)];
      r.log_norm = s.log_norm;
      r.annihilated = s.annihilated;
      for (auto m : masks)
        r.spectra.push_back(s.annihilated ? Eigen::VectorXd() : reduced_spectrum(s.amplitudes, p.total_qubits(), m));
    }
  };
  int nt = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  nt = std::min(nt, p.n_traj);
  if (nt <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nt; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return records;
}

Estimate quasi_renyi(const std::vector<TrajectoryRecord>& records, std::size_t which, double n,
                     double tolerance) {
  if (!(n > 0.0) || n == 1.0) throw DomainError("quasi_renyi: order must be positive and != 1");
  const Columns c = columns(records);
  const WeightedRatio w = renyi_ratio(records, c, which, n);
  Estimate e;
  e.annihilated = c.annihilated;
  e.n_effective = w.kish;
  e.value = std::log(w.value) / (1.0 - n);
  std::vector<double> loo(w.loo.size());
  for (std::size_t i = 0; i < loo.size(); ++i) loo[i] = std::log(w.loo[i]) / (1.0 - n);
  e.std_error = jackknife_error(loo);
  e.within_tolerance = e.std_error <= tolerance;
  return e;
}

double chi(const std::vector<TrajectoryRecord>& records, std::size_t which, double n, double m) {
  if (!(n > 0.0) || n == 1.0 || !(m > 0.0)) throw DomainError("chi: need n > 0, n != 1, m > 0");
  const Columns c = columns(records);
  const std::size_t M = records.size();
  std::vector<double> lw(M), f(M, 0.0);
  for (std::size_t i = 0; i < M; ++i) {
    lw[i] = 2.0 * n * m * c.log_norm[i];
    if (c.alive[i]) f[i] = std::pow(power_sum(records[i].spectra.at(which), n), m);
  }
  return std::log(weighted_ratio(lw, f, c.alive).value) / (m * (1.0 - n));
}

ReplicaLimit replica_limit(const std::vector<TrajectoryRecord>& records, std::size_t which) {
  const Columns c = columns(records);
  const double h = replica_step;
  const WeightedRatio up = renyi_ratio(records, c, which, 1.0 + h);
  const WeightedRatio dn = renyi_ratio(records, c, which, 1.0 - h);
  const std::size_t M = records.size();
  std::vector<double> lw(M), f(M, 0.0);
  for (std::size_t i = 0; i < M; ++i) {
    lw[i] = 2.0 * c.log_norm[i];
    if (c.alive[i]) f[i] = entropy_of(records[i].spectra.at(which));
  }
  const WeightedRatio vn = weighted_ratio(lw, f, c.alive);
  auto lhs_of = [&](double a, double b) { return 0.5 * (std::log(a) / (-h) + std::log(b) / h); };
  ReplicaLimit r;
  r.lhs = lhs_of(up.value, dn.value);
  r.rhs = vn.value;
  r.gap = r.lhs - r.rhs;
  std::vector<double> loo(M);
  for (std::size_t i = 0; i < M; ++i) loo[i] = lhs_of(up.loo[i], dn.loo[i]) - vn.loo[i];
  r.std_error = jackknife_error(loo);
  return r;
}

Estimate estimate_quasi_renyi(const CircuitParams& p, Subsystem A, double n, int threads) {
  return quasi_renyi(simulate(p, {A}, threads), 0, n);
}

ReplicaLimit replica_limit_identity_check(const CircuitParams& p, Subsystem A, int threads) {
  if (p.total_qubits() > 16) throw ResourceError("replica_limit_identity_check: needs 2·N·L <= 16");
  return replica_limit(simulate(p, {A}, threads), 0);
}

}  // namespace circuit
}  // namespace lrmipt
