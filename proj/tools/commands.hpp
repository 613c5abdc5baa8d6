#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lrmipt/io.hpp"

namespace lrmipt::cli {

struct PhaseDiagramArgs {
  std::vector<double> alphas;
  std::vector<double> gammas;  // in units of J
  double J = 1.0;
  double g = 0.5;
  std::string form = "power-law";
};

struct CouplingsArgs {
  double J = 1.0;
  double g = 0.25;
  double alpha = 1.0;
  std::string form = "power-law";
  int L = 64;
  int k_grid = 1 << 14;
};

struct EntropyFitArgs {
  double delta = 1.0;
  double beta = 1.0;
  double b = 0.02;
  double alpha = 0.75;
  int L = 128;
  double dt = 0.125;
  std::vector<int> sizes;
  int snapshot = 0;  // region size whose swap field is exported, 0 for none
};

struct SykArgs {
  double J = 1.0;
  double U = 0.0;
  int q = 4;
  double gamma = 0.5;
  double alpha = 1.0;
  double dt = 1.0;
  int curve_points = 301;
  double curve_max = 1.5;  // upper end of the γ̃ curve
};

struct McArgs {
  int N = 2;
  int L = 3;
  double J = 1.0;
  double g = 1.0;
  double alpha = 1.0;
  std::vector<double> gammas;
  double dt = 0.01;
  double T = 0.5;
  unsigned long long seed = 1;
  int trajectories = 200;
  std::vector<int> sizes;  // clusters in A = [0, size)
  double renyi = 2.0;
  bool dump_weights = false;
};

struct CodeArgs {
  double alpha = 0.75;
  double gamma = 0.0;  // reported only
  double sigma = 0.1;
  double xi_t = 1.0;
  double c = 1.0;
  double J = 1.0;
  int N = 1;
  int L = 256;
  std::vector<double> sizes;  // default: 65 points over [0, L]
};

io::RunOutput phase_diagram(const PhaseDiagramArgs& a, io::Format f, int threads);
io::RunOutput couplings_table(const CouplingsArgs& a, io::Format f);
io::RunOutput entropy_fit(const EntropyFitArgs& a, io::Format f);
io::RunOutput syk_report(const SykArgs& a, io::Format f);
io::RunOutput mc(const McArgs& a, io::Format f, int threads);
io::RunOutput code(const CodeArgs& a, io::Format f);

// full command line without the program name; returns the process exit code
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lrmipt::cli
