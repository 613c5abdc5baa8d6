#pragma once

// Every numerical tolerance and truncation used by the library lives here.

namespace lrmipt::tol {

// specfun
inline constexpr int zeta_direct_terms = 10000;
inline constexpr int zeta_bernoulli_terms = 4;
inline constexpr int zeta_small_terms = 64;          // continuation branch, s < 1
inline constexpr int zeta_small_bernoulli_terms = 10;
inline constexpr int polylog_series_terms = 64;
inline constexpr double polylog_direct_order = 10.0; // direct summation at s >= this
inline constexpr double polylog_direct_tail = 1e-17;
inline constexpr double gamma_max_abs = 50.0;

// couplings
inline constexpr int default_k_grid = 1 << 14;
inline constexpr int mu_fit_max_q = 4;

// meanfield
inline constexpr double saddle_residual = 1e-10;
inline constexpr double critical_band = 1e-12;
inline constexpr int newton_max_iterations = 100;
inline constexpr double propagator_step_ratio = 0.01;

// lattice_lg
inline constexpr double pin_strength_factor = 50.0;
inline constexpr double field_grad_per_site = 1e-8;
inline constexpr int field_max_iterations = 400000;
inline constexpr int nonmonotone_memory = 10;

// syk_chain
inline constexpr int lambda_grid_points = 1000;
inline constexpr int lambda_probe_points = 60;
inline constexpr double lambda_probe_decades = 6.0;
inline constexpr double lambda_residual = 1e-12;
inline constexpr double tricritical_band = 1e-12;

// circuit_mc
inline constexpr double norm_drift = 1e-12;
inline constexpr int max_total_qubits = 24;
inline constexpr double max_dt_J = 0.01;
inline constexpr double max_gamma_dt = 0.1;
inline constexpr double spin_label = 0.5;

}  // namespace lrmipt::tol
