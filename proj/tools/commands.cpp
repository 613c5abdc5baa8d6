#include "commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <ostream>
#include <thread>

#include "lrmipt/circuit_mc.hpp"
#include "lrmipt/couplings.hpp"
#include "lrmipt/entropy_code.hpp"
#include "lrmipt/errors.hpp"
#include "lrmipt/lattice_lg.hpp"
#include "lrmipt/meanfield.hpp"
#include "lrmipt/syk_chain.hpp"

namespace lrmipt::cli {

using io::Cell;
using io::Table;
using nlohmann::json;

namespace {

constexpr const char* exploratory_note =
    "N <= 4 results are exploratory: trends and exact identities only, no quantitative match to "
    "mean-field prefactors or the phase boundary";

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  int nt = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  nt = std::min(nt, n);
  if (nt <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex m;
  std::vector<std::thread> pool;
  for (int t = 0; t < nt; ++t)
    pool.emplace_back([&] {
      for (int i; (i = next.fetch_add(1)) < n;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(m);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

CouplingForm parse_form(const std::string& s) {
  if (s == "power-law") return CouplingForm::PowerLaw;
  if (s == "nearest-neighbor") return CouplingForm::NearestNeighbor;
  throw DomainError("unknown coupling form '" + s + "'");
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

// spin-model entropy branches: volume + A^υ correction when broken, A^υ when symmetric
std::pair<std::string, double> spin_entropy_form(double alpha, Phase phase, bool short_range) {
  if (phase == Phase::Critical) return {"critical", NAN};
  const double ups = short_range ? -INFINITY : 2.0 - 2.0 * alpha;
  if (phase == Phase::Broken) return ups > 0.0 ? std::pair<std::string, double>{"volume+power", ups} : std::pair<std::string, double>{"volume", NAN};
  return ups > 0.0 ? std::pair<std::string, double>{"power", ups} : std::pair<std::string, double>{"area", NAN};
}

}  // namespace

io::RunOutput phase_diagram(const PhaseDiagramArgs& a, io::Format f, int threads) {
  if (a.alphas.empty() || a.gammas.empty()) throw DomainError("phase-diagram: alpha and gamma grids must be non-empty");
  const CouplingForm form = parse_form(a.form);
  const bool nn = form == CouplingForm::NearestNeighbor;
  if (!(a.J > 0.0) || !(a.g >= 0.0)) throw DomainError("phase-diagram: need J > 0 and g >= 0");
  for (double g : a.gammas)
    if (!(g >= 0.0)) throw DomainError("phase-diagram: gamma must be >= 0");

  const int na = static_cast<int>(a.alphas.size()), ng = static_cast<int>(a.gammas.size());
  std::vector<std::vector<Cell>> rows(static_cast<std::size_t>(na * ng));
  parallel_for(na * ng, threads, [&](int idx) {
    const double alpha = a.alphas[idx / ng], gam = a.gammas[idx % ng];
    CouplingSpec spec;
    spec.J = a.J;
    spec.g = a.g;
    spec.alpha = alpha;
    spec.form = form;
    std::vector<Cell> row{alpha, gam};
    try {
      spec.validate();
      const auto p = MeanFieldParams::make(spec, gam * a.J);
      const auto s = meanfield::solve_saddle(p);
      const double delta = meanfield::lg_coefficients(p, KernelFit{}).delta;
      const double z = nn || 2.0 * alpha >= 3.0 ? 1.0 : entropy::critical_exponents(alpha).z;
      const auto [ef, ex] = spin_entropy_form(alpha, s.phase, nn);
      row.insert(row.end(), {std::string(to_string(s.phase)), s.phi, s.theta, delta, z, ef, ex, std::string("ok")});
    } catch (const DivergenceError&) {
      row.insert(row.end(), {std::string("-"), NAN, NAN, NAN, NAN, std::string("-"), NAN, std::string("divergent")});
    }
    rows[static_cast<std::size_t>(idx)] = row;
  });
  Table t{{"alpha", "gamma_over_J", "phase", "phi", "theta", "delta", "z", "entropy_form", "entropy_exponent", "status"}, {}};
  for (auto& r : rows) t.add(std::move(r));

  Table gc{{"alpha", "gamma_c_over_J", "status"}, {}};
  for (double alpha : a.alphas) {
    CouplingSpec spec;
    spec.J = a.J;
    spec.g = a.g;
    spec.alpha = alpha;
    spec.form = form;
    try {
      gc.add({alpha, meanfield::gamma_c(spec) / a.J, std::string("ok")});
    } catch (const DivergenceError&) {
      gc.add({alpha, INFINITY, std::string("divergent")});
    }
  }
  io::RunOutput out;
  out.command = "phase-diagram";
  out.parameters = {{"alpha", a.alphas}, {"gamma_over_J", a.gammas}, {"J", a.J}, {"g", a.g}, {"form", a.form}};
  out.summary = {{"rows", t.rows.size()}};
  out.add_table("phase_diagram", t, f);
  out.add_table("gamma_c", gc, f);
  return out;
}

io::RunOutput couplings_table(const CouplingsArgs& a, io::Format f) {
  CouplingSpec spec;
  spec.J = a.J;
  spec.g = a.g;
  spec.alpha = a.alpha;
  spec.form = parse_form(a.form);
  spec.L = a.L;
  spec.k_grid = a.k_grid;
  spec.validate();
  const auto e = couplings::effective_interaction(spec);
  Table t{{"q", "J_eff"}, {}};
  for (Eigen::Index q = 0; q < e.values.size(); ++q) t.add({static_cast<long long>(q), e.values(q)});
  io::RunOutput out;
  out.command = "couplings";
  out.parameters = {{"J", a.J}, {"g", a.g}, {"alpha", a.alpha}, {"form", a.form}, {"L", a.L}, {"k_grid", a.k_grid}};
  out.summary = {{"mu_fit", finite_or_null(e.mu_fit)},
                 {"tail_exponent_fit", finite_or_null(e.tail_exponent_fit)},
                 {"tail_amplitude", e.tail_amplitude},
                 {"effective_sum", couplings::effective_sum(spec)}};
  out.add_table("couplings", t, f);
  return out;
}

io::RunOutput entropy_fit(const EntropyFitArgs& a, io::Format f) {
  if (a.sizes.empty()) throw DomainError("entropy-fit: --sizes is empty");
  for (int A : a.sizes)
    if (A < 2 || A > a.L / 4) throw DomainError("entropy-fit: sizes must lie in [2, L/4]");
  LgCoefficients k;
  k.delta = a.delta;
  k.beta = a.beta;
  k.b = a.b;
  auto c = LatticeConfig::make(a.L, 3, a.dt, k, a.alpha);
  const double T = std::max(8.0 * c.xi_t(), 8.0);
  c = LatticeConfig::make(a.L, static_cast<int>(std::ceil(T / a.dt)) + 1, a.dt, k, a.alpha);
  const bool broken = c.delta_eff() > 0.0;

  const auto sw = lattice::entropy_sweep(c, a.sizes, true);
  Table t{{"A", "S", "converged"}, {}};
  int unconverged = 0;
  for (std::size_t i = 0; i < sw.sizes.size(); ++i) {
    t.add({static_cast<long long>(sw.sizes[i]), sw.values[i], static_cast<long long>(sw.converged[i])});
    unconverged += sw.converged[i] ? 0 : 1;
  }
  const auto [lo, hi] = std::minmax_element(sw.values.begin(), sw.values.end());
  double mean = 0.0;
  for (double v : sw.values) mean += v / static_cast<double>(sw.values.size());

  io::RunOutput out;
  out.command = "entropy-fit";
  out.parameters = {{"delta", a.delta}, {"beta", a.beta}, {"b", a.b},   {"alpha", a.alpha},
                    {"L", a.L},         {"dt", a.dt},     {"T", c.extent()}, {"sizes", a.sizes}};
  out.summary = {{"phase", broken ? "broken" : "symmetric"},
                 {"delta_eff", c.delta_eff()},
                 {"xi_t", c.xi_t()},
                 {"fit",
                  {{"volume", sw.fit.volume},
                   {"amplitude", sw.fit.amplitude},
                   {"exponent", sw.fit.exponent},
                   {"constant", sw.fit.constant},
                   {"rms", sw.fit.rms}}},
                 {"closed_form",
                  {{"upsilon", 2.0 - 2.0 * a.alpha},
                   {"sigma", broken ? json(lattice::kink_action_analytic(c.delta_eff())) : json(nullptr)}}},
                 {"relative_spread", (*hi - *lo) / std::abs(mean)},
                 {"unconverged", unconverged}};
  out.add_table("entropy", t, f);
  if (a.snapshot > 0) {
    lattice::QuasiEntropyOptions opt;
    opt.keep_field = true;
    const auto q = lattice::quasi_entropy_numeric(c, Interval::centered(a.L, a.snapshot), opt);
    Table s;
    for (int j = 0; j < q.swap.field.cols(); ++j) s.columns.push_back("t" + std::to_string(j));
    for (Eigen::Index r = 0; r < q.swap.field.rows(); ++r) {
      std::vector<Cell> row;
      for (Eigen::Index j = 0; j < q.swap.field.cols(); ++j) row.emplace_back(q.swap.field(r, j));
      s.add(std::move(row));
    }
    out.parameters["snapshot"] = a.snapshot;
    out.add_table("field_A" + std::to_string(a.snapshot), s, f);
  }
  return out;
}

io::RunOutput syk_report(const SykArgs& a, io::Format f) {
  const auto p = SykParams::make(a.J, a.U, a.q, a.gamma, a.alpha, a.dt);
  if (a.curve_points < 2 || !(a.curve_max > 0.0)) throw DomainError("syk: need curve_points >= 2 and curve_max > 0");
  const auto s = syk::solve_lambda(p);
  const auto report = syk::transition_report(p);
  const Phase phase = s.lambda > 0.0 ? Phase::Broken : Phase::Symmetric;
  const auto form = syk::free_fermion_entropy_scaling(a.alpha, phase, 1.0);

  Table t{{"gamma_tilde", "lambda", "roots"}, {}};
  for (int i = 0; i < a.curve_points; ++i) {
    SykParams q = p;
    q.gamma_tilde = a.curve_max * i / (a.curve_points - 1);
    q.gamma = q.gamma_tilde * q.J_hat;
    const auto r = syk::solve_lambda(q);
    t.add({q.gamma_tilde, r.lambda, static_cast<long long>(r.roots.size())});
  }
  io::RunOutput out;
  out.command = "syk";
  out.parameters = {{"J", a.J},     {"U", a.U},   {"q", a.q},
                    {"gamma", a.gamma}, {"alpha", a.alpha}, {"dt", a.dt},
                    {"curve_points", a.curve_points}, {"curve_max", a.curve_max}};
  out.summary = {{"alpha", a.alpha},
                 {"gamma_tilde", p.gamma_tilde},
                 {"U_tilde", p.U_tilde},
                 {"lambda", s.lambda},
                 {"roots", s.roots},
                 {"rho", a.U == 0.0 ? json(syk::stiffness(p)) : json(nullptr)},
                 {"order", to_string(report.order)},
                 {"order_consistent", report.consistent},
                 {"entropy_form", to_string(form.form)},
                 {"entropy_exponent", form.exponent}};
  out.files.push_back({"report.json", out.summary.dump(2) + "\n"});
  out.add_table("lambda_curve", t, f);
  return out;
}

io::RunOutput mc(const McArgs& a, io::Format f, int threads) {
  if (a.gammas.empty() || a.sizes.empty()) throw DomainError("mc: --gamma and --sizes must be non-empty");
  std::vector<double> gammas = a.gammas;
  std::sort(gammas.begin(), gammas.end());
  std::vector<int> sizes = a.sizes;
  std::sort(sizes.begin(), sizes.end());
  std::vector<CircuitParams> ps;
  for (double g : gammas) {
    CircuitParams p;
    p.N = a.N;
    p.L = a.L;
    p.J = a.J;
    p.g = a.g;
    p.alpha = a.alpha;
    p.gamma = g;
    p.dt = a.dt;
    p.T = a.T;
    p.seed = a.seed;
    p.n_traj = a.trajectories;
    p.validate();
    ps.push_back(p);
  }
  for (int A : sizes)
    if (A < 1 || A > a.L) throw DomainError("mc: sizes must lie in [1, L]");
  const bool whole = sizes.back() == a.L;
  const bool replica = 2 * a.N * a.L <= 16;

  Table ent{{"gamma", "A", "S", "stderr", "n_effective", "annihilated"}, {}};
  Table rep{{"gamma", "A", "lhs", "rhs", "gap", "stderr"}, {}};
  Table cons{{"gamma", "S_Q", "S_R", "difference"}, {}};
  Table weights{{"gamma", "trajectory", "log_norm", "annihilated"}, {}};
  json warnings = json::array();
  std::vector<std::vector<Estimate>> est(sizes.size());
  for (const auto& p : ps) {
    std::vector<std::uint64_t> masks;
    for (int A : sizes) masks.push_back(circuit::subsystem_mask(p, {0, A}));
    if (whole) masks.push_back(circuit::reference_mask(p));
    const auto rec = circuit::simulate_masks(p, masks, threads);
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      const auto e = circuit::quasi_renyi(rec, i, a.renyi);
      est[i].push_back(e);
      ent.add({p.gamma, static_cast<long long>(sizes[i]), e.value, e.std_error, e.n_effective,
               static_cast<long long>(e.annihilated)});
      if (e.n_effective < 0.1 * p.n_traj)
        warnings.push_back("gamma=" + io::format_double(p.gamma) + " A=" + std::to_string(sizes[i]) +
                           ": effective sample size below 10% of the trajectory budget");
    }
    if (replica) {
      const auto r = circuit::replica_limit(rec, 0);
      rep.add({p.gamma, static_cast<long long>(sizes[0]), r.lhs, r.rhs, r.gap, r.std_error});
    }
    if (whole) {
      const double sq = est.back().back().value;
      const double sr = circuit::quasi_renyi(rec, sizes.size(), a.renyi).value;
      cons.add({p.gamma, sq, sr, sq - sr});
    }
    if (a.dump_weights)
      for (std::size_t k = 0; k < rec.size(); ++k)
        weights.add({p.gamma, static_cast<long long>(k), rec[k].log_norm, static_cast<long long>(rec[k].annihilated)});
  }
  json monotone = json::object();
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    bool ok = true;
    for (std::size_t k = 0; k + 1 < est[i].size(); ++k)
      ok = ok && est[i][k + 1].value <=
                     est[i][k].value + 3.0 * std::hypot(est[i][k].std_error, est[i][k + 1].std_error);
    monotone[std::to_string(sizes[i])] = ok;
  }
  io::RunOutput out;
  out.command = "mc";
  out.parameters = {{"N", a.N},         {"L", a.L},       {"J", a.J},   {"g", a.g},
                    {"alpha", a.alpha}, {"gamma", gammas}, {"dt", a.dt}, {"T", a.T},
                    {"seed", a.seed},   {"trajectories", a.trajectories}, {"sizes", sizes},
                    {"renyi", a.renyi}, {"dump_weights", a.dump_weights}};
  out.summary = {{"monotone_trend", monotone}, {"warnings", warnings}, {"exploratory", a.N <= 4},
                 {"note", exploratory_note}, {"replica_check", replica}};
  out.add_table("entropy", ent, f);
  if (replica) out.add_table("replica_gap", rep, f);
  if (whole) out.add_table("reference_consistency", cons, f);
  if (a.dump_weights) out.add_table("weights", weights, f);
  return out;
}

io::RunOutput code(const CodeArgs& a, io::Format f) {
  PhasePoint p;
  p.alpha = a.alpha;
  p.gamma_over_J = a.gamma;
  p.sigma = a.sigma;
  p.phase = a.sigma > 0.0 ? Phase::Broken : Phase::Symmetric;
  p.xi_t = a.xi_t;
  p.c_fit = a.c;
  p.J = a.J;
  p.N = a.N;
  p.L = a.L;
  p.validate();
  std::vector<double> sizes = a.sizes;
  if (sizes.empty())
    for (int i = 0; i <= 64; ++i) sizes.push_back(a.L * i / 64.0);
  Table t{{"A", "S_A", "S_complement", "mutual_information", "branch"}, {}};
  for (const auto& r : entropy::code_table(p, sizes))
    t.add({r.A, r.S_A, r.S_complement, r.mutual_information,
           std::string(r.branch == ComplementBranch::Direct ? "direct" : "through-reference")});
  const bool broken = p.phase == Phase::Broken;
  json dist = nullptr, astar = nullptr, cross = nullptr;
  bool logarithmic = false;
  if (broken) {
    const auto d = entropy::code_distance(p);
    dist = finite_or_null(d.value);
    logarithmic = d.logarithmic;
    astar = entropy::a_star(p);
    cross = entropy::crossover_size(p);
  }
  io::RunOutput out;
  out.command = "code";
  out.parameters = {{"alpha", a.alpha}, {"gamma", a.gamma}, {"sigma", a.sigma}, {"xi_t", a.xi_t},
                    {"c", a.c},         {"J", a.J},         {"N", a.N},         {"L", a.L},
                    {"sizes", sizes}};
  out.summary = {{"alpha", a.alpha},
                 {"gamma", a.gamma},
                 {"phase", to_string(p.phase)},
                 {"z", entropy::critical_exponents(a.alpha).z},
                 {"A_star", astar},
                 {"crossover", cross},
                 {"code_distance", dist},
                 {"code_distance_logarithmic", logarithmic}};
  out.files.push_back({"summary.json", out.summary.dump(2) + "\n"});
  out.add_table("code_table", t, f);
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Long-range measurement-induced transitions: mean-field, lattice and circuit tools"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(io::version()));

  std::string output_dir = "runs", format = "csv";
  int threads = 0;
  auto common = [&](CLI::App* s) {
    s->add_option("--output-dir", output_dir, "root of the content-addressed output tree");
    s->add_option("--format", format, "table format")->check(CLI::IsMember({"csv", "json"}));
    s->add_option("--threads", threads, "worker threads, 0 for all cores")->check(CLI::NonNegativeNumber);
  };

  PhaseDiagramArgs pd;
  auto* c_pd = app.add_subcommand("phase-diagram", "mean-field phase over an (alpha, gamma) grid");
  c_pd->add_option("--alpha", pd.alphas, "alpha grid")->required()->delimiter(',');
  c_pd->add_option("--gamma", pd.gammas, "gamma/J grid")->required()->delimiter(',');
  c_pd->add_option("--J", pd.J);
  c_pd->add_option("--g", pd.g);
  c_pd->add_option("--form", pd.form)->check(CLI::IsMember({"power-law", "nearest-neighbor"}));
  common(c_pd);

  CouplingsArgs cp;
  auto* c_cp = app.add_subcommand("couplings", "effective interaction table");
  c_cp->add_option("--J", cp.J);
  c_cp->add_option("--g", cp.g);
  c_cp->add_option("--alpha", cp.alpha);
  c_cp->add_option("--form", cp.form)->check(CLI::IsMember({"power-law", "nearest-neighbor"}));
  c_cp->add_option("--L", cp.L);
  c_cp->add_option("--k-grid", cp.k_grid);
  common(c_cp);

  EntropyFitArgs ef;
  auto* c_ef = app.add_subcommand("entropy-fit", "lattice quasi-entropy sweep and scaling fit");
  c_ef->add_option("--delta", ef.delta);
  c_ef->add_option("--beta", ef.beta);
  c_ef->add_option("--b", ef.b);
  c_ef->add_option("--alpha", ef.alpha);
  c_ef->add_option("--L", ef.L);
  c_ef->add_option("--dt", ef.dt);
  c_ef->add_option("--sizes", ef.sizes, "region sizes in [2, L/4]")->required()->delimiter(',');
  c_ef->add_option("--snapshot", ef.snapshot, "export the swap field for this region size");
  common(c_ef);

  SykArgs sy;
  auto* c_sy = app.add_subcommand("syk", "SYK chain saddle report");
  c_sy->add_option("--J", sy.J);
  c_sy->add_option("--U", sy.U);
  c_sy->add_option("--q", sy.q);
  c_sy->add_option("--gamma", sy.gamma);
  c_sy->add_option("--alpha", sy.alpha);
  c_sy->add_option("--dt", sy.dt);
  c_sy->add_option("--curve-points", sy.curve_points);
  c_sy->add_option("--curve-max", sy.curve_max);
  common(c_sy);

  McArgs mp;
  auto* c_mc = app.add_subcommand("mc", "Brownian circuit quasi-entropy Monte Carlo");
  c_mc->add_option("--N", mp.N);
  c_mc->add_option("--L", mp.L);
  c_mc->add_option("--J", mp.J);
  c_mc->add_option("--g", mp.g);
  c_mc->add_option("--alpha", mp.alpha);
  c_mc->add_option("--gamma", mp.gammas, "measurement rates")->required()->delimiter(',');
  c_mc->add_option("--dt", mp.dt);
  c_mc->add_option("--T", mp.T);
  c_mc->add_option("--seed", mp.seed);
  c_mc->add_option("--trajectories", mp.trajectories);
  c_mc->add_option("--sizes", mp.sizes, "subsystem sizes in clusters")->required()->delimiter(',');
  c_mc->add_option("--renyi", mp.renyi);
  c_mc->add_flag("--dump-weights", mp.dump_weights);
  common(c_mc);

  CodeArgs cd;
  auto* c_cd = app.add_subcommand("code", "closed-form entropies, mutual information and code distance");
  c_cd->add_option("--alpha", cd.alpha);
  c_cd->add_option("--gamma", cd.gamma);
  c_cd->add_option("--sigma", cd.sigma);
  c_cd->add_option("--xi-t", cd.xi_t);
  c_cd->add_option("--c", cd.c);
  c_cd->add_option("--J", cd.J);
  c_cd->add_option("--N", cd.N);
  c_cd->add_option("--L", cd.L);
  c_cd->add_option("--sizes", cd.sizes)->delimiter(',');
  common(c_cd);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  const io::Format fmt = format == "json" ? io::Format::Json : io::Format::Csv;
  try {
    io::RunOutput r;
    if (c_pd->parsed()) r = phase_diagram(pd, fmt, threads);
    if (c_cp->parsed()) r = couplings_table(cp, fmt);
    if (c_ef->parsed()) r = entropy_fit(ef, fmt);
    if (c_sy->parsed()) r = syk_report(sy, fmt);
    if (c_mc->parsed()) r = mc(mp, fmt, threads);
    if (c_cd->parsed()) r = code(cd, fmt);
    for (const auto& w : r.summary.value("warnings", json::array())) err << "warning: " << w.get<std::string>() << "\n";
    const auto w = io::write_run(output_dir, r);
    out << w.directory.string() << " " << w.content_hash << (w.reused ? " (existing)" : "") << "\n";
    return 0;
  } catch (const ResourceError& e) {
    err << "resource limit: " << e.what() << "\n";
    return 4;
  } catch (const ConvergenceError& e) {
    err << "no convergence: " << e.what() << " (residual " << e.residual << ")\n";
    return 3;
  } catch (const NormError& e) {
    err << "no convergence: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    err << "invalid input: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace lrmipt::cli
