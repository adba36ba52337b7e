// Copyright 2026 The winlayer Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite.  Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.  With arguments, runs only the listed
// criterion numbers (ctest registers one entry per criterion).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "winlayer/bracketing.hpp"
#include "winlayer/error.hpp"
#include "winlayer/geometry.hpp"
#include "winlayer/layer_solver.hpp"
#include "winlayer/special_functions.hpp"
#include "winlayer/spectral_analysis.hpp"
#include "winlayer/window_eigs.hpp"

using namespace winlayer;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v, int digits = 6) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// ------------------------------------------------------------------ 1

Outcome bessel_oracle() {
  Stopwatch sw;
  const double j01 = oracle::bessel_zero_in(0, false, 2.0, 3.0);
  const double j11 = oracle::bessel_zero_in(1, false, 3.0, 4.5);
  const double jp11 = oracle::bessel_zero_in(1, true, 1.5, 2.5);
  const double e1 = std::abs(special::bessel_j_zero(0, 1) - j01);
  const double e2 = std::abs(special::bessel_j_zero(1, 1) - j11);
  const double e3 = std::abs(special::bessel_j_prime_zero(1, 1) - jp11);
  const double err = std::max({e1, e2, e3});
  int interlace_bad = 0;
  for (int m = 0; m <= 10; ++m) {
    for (int k = 1; k <= 10; ++k) {
      const double a = special::bessel_j_zero(m, k);
      const double b = special::bessel_j_zero(m + 1, k);
      const double c = special::bessel_j_zero(m, k + 1);
      if (!(a < b && b < c)) ++interlace_bad;
    }
  }
  // Timing covers the library calls only; the 100-digit oracle is excluded.
  Stopwatch lib;
  for (int m = 0; m <= 10; ++m) {
    (void)special::bessel_zero_table(m, special::ZeroKind::kJ, 11);
    (void)special::bessel_zero_table(m, special::ZeroKind::kJPrime, 11);
  }
  const double t = lib.seconds();
  const bool pass = err <= 1e-12 && interlace_bad == 0 && t < 1.0;
  return {pass, "max zero error " + num(err, 3) + " (tol 1e-12), interlacing failures " +
                    std::to_string(interlace_bad) + ", zero tables " + num(t, 3) + " s (limit 1 s), total " +
                    num(sw.seconds(), 3) + " s"};
}

// ------------------------------------------------------------------ 2

Outcome window_spectra() {
  Stopwatch sw;
  const std::vector<double> hs{0.1, 0.05, 0.025};
  const int count = 6;
  double worst = 0.0;
  std::string orders;
  double neumann_zero = 0.0;
  for (bool neumann : {false, true}) {
    const auto bc = neumann ? BoundaryCondition::kNeumann : BoundaryCondition::kDirichlet;
    const WindowSpectrum exact = disk_window_spectrum(1.0, bc, count);
    std::vector<std::vector<double>> err(count);
    for (double h : hs) {
      const FemEigenpairs fe = fem_eigenpairs(mesh_window(WindowShape::disk(1.0), h), bc, count);
      for (int i = 0; i < count; ++i) err[i].push_back(std::abs(fe.values[i] - exact.values[i]));
      if (neumann && h == hs.back()) neumann_zero = std::abs(fe.values[0]);
    }
    for (int i = neumann ? 1 : 0; i < count; ++i) {
      const double p = oracle::observed_order(hs, err[i]);
      worst = std::max(worst, std::abs(p - 2.0));
      orders += (orders.empty() ? "" : " ") + num(p, 3);
    }
  }
  const double t = sw.seconds();
  const bool pass = worst <= 0.3 && neumann_zero <= 1e-10 && t < 60.0;
  return {pass, "observed orders [" + orders + "], max |p-2| " + num(worst, 3) + " (tol 0.3), Neumann mu_1 " +
                    num(neumann_zero, 3) + " (tol 1e-10), " + num(t, 3) + " s (limit 60 s)"};
}

// -------------------------------------------------------------- 3 and 4

struct ConfigCheck {
  double d = 0.0;
  double R = 0.0;
  int states = 0;
  int bracket_violations = 0;
  int min_count = 0;
  int max_count = 0;
  CountBounds bounds;
  bool count_violation = false;
  bool count_undecided = false;
};

int base_rings(const GridSpec& g, const std::vector<double>& ladder, double h_ref) {
  return std::max(0, g.grading_rings - static_cast<int>(std::lround(std::log(h_ref / ladder.front()) /
                                                                    std::log(g.grading_ratio))));
}

ConfigCheck check_config(double d, double R) {
  const LayerPair lp(d);
  const Numerics nu;
  ConfigCheck out;
  out.d = d;
  out.R = R;
  const Spectrum sp = solve_all(lp, R, nu);
  int n_window = 40;
  WindowSpectrum wn = disk_window_spectrum(R, BoundaryCondition::kNeumann, n_window);
  WindowSpectrum wd = disk_window_spectrum(R, BoundaryCondition::kDirichlet, n_window);
  while (wd.values.back() < 1.0 || wn.values.back() < 1.0) {
    n_window *= 2;
    wn = disk_window_spectrum(R, BoundaryCondition::kNeumann, n_window);
    wd = disk_window_spectrum(R, BoundaryCondition::kDirichlet, n_window);
  }
  const auto br = brackets(lp, wn, wd, n_window);
  out.bounds = count_bounds(lp, wn, wd);

  // Discretization error per sector from a three-level study whose middle
  // level is the solve grid.
  const std::vector<double> ladder{2.0 * nu.grid.h_rho, nu.grid.h_rho, 0.5 * nu.grid.h_rho};
  Numerics rn = nu;
  rn.grid.grading_rings = base_rings(nu.grid, ladder, nu.grid.h_rho);
  std::map<int, RefineStudy> studies;
  for (const auto& s : sp.sectors) {
    if (s.states.empty()) continue;
    try {
      studies.emplace(s.m, refine_study(lp, R, s.m, ladder, rn));
    } catch (const Error&) {
      // No estimate: the state must then sit inside the unwidened bracket.
    }
  }

  std::map<int, int> kth;
  int global = 1;
  for (const BoundState& st : sp.states) {
    const int k = kth[st.m]++;
    double err = 0.0;
    if (auto it = studies.find(st.m); it != studies.end() && k < static_cast<int>(it->second.error_estimate.size())) {
      err = it->second.error_estimate[k] + std::abs(st.lambda - it->second.levels.back().lambdas[k]);
    }
    for (int i = 0; i < st.multiplicity; ++i) {
      const int idx = global + i;
      const bool ok = idx <= static_cast<int>(br.size()) && st.lambda >= br[idx - 1].lower - err &&
                      st.lambda <= br[idx - 1].upper + err;
      if (!ok) ++out.bracket_violations;
    }
    out.states += st.multiplicity;
    global += st.multiplicity;
  }
  out.min_count = sp.min_count();
  out.max_count = sp.max_count();
  out.count_violation = out.min_count > out.bounds.max_count || out.max_count < out.bounds.min_count;
  out.count_undecided = out.min_count < out.bounds.min_count || out.max_count > out.bounds.max_count;
  return out;
}

const std::vector<ConfigCheck>& twelve_configs(double& seconds) {
  static std::vector<ConfigCheck> all;
  static double elapsed = 0.0;
  if (all.empty()) {
    Stopwatch sw;
    for (double d : {kPi, kPi / 2, kPi / 4})
      for (double R : {1.0, 2.0, 3.0, 5.0}) all.push_back(check_config(d, R));
    elapsed = sw.seconds();
  }
  seconds = elapsed;
  return all;
}

Outcome bracket_containment() {
  double t = 0.0;
  const auto& all = twelve_configs(t);
  int violations = 0;
  int states = 0;
  std::string where;
  for (const auto& c : all) {
    violations += c.bracket_violations;
    states += c.states;
    if (c.bracket_violations > 0) where += " (d=" + num(c.d, 4) + ",R=" + num(c.R) + ")";
  }
  const bool pass = violations == 0 && t < 600.0;
  return {pass, std::to_string(all.size()) + " configurations, " + std::to_string(states) + " states, " +
                    std::to_string(violations) + " violations" + where + ", " + num(t, 4) + " s (limit 600 s)"};
}

Outcome count_bounds_check() {
  double t = 0.0;
  const auto& all = twelve_configs(t);
  int hard = 0;
  int consistent = 0;
  std::string where;
  for (const auto& c : all) {
    if (c.count_violation) {
      ++hard;
      where += " (d=" + num(c.d, 4) + ",R=" + num(c.R) + ")";
    } else if (c.count_undecided || c.bounds.undecided > 0) {
      ++consistent;
    }
  }
  return {hard == 0, std::to_string(all.size()) + " configurations, " + std::to_string(hard) + " hard violations" +
                         where + ", " + std::to_string(consistent) + " consistent (undecided near threshold)"};
}

// ------------------------------------------------------------------ 5

Outcome parity_reduction() {
  Stopwatch sw;
  double worst = 0.0;
  bool sizes = true;
  std::string counts;
  for (double R : {2.0, 5.0}) {
    const auto full = solve_all(LayerPair(kPi), R, Numerics{}).values_with_multiplicity();
    const auto half = half_domain_solve(R, Numerics{}).values_with_multiplicity();
    if (full.size() != half.size() || full.empty()) sizes = false;
    for (std::size_t i = 0; i < std::min(full.size(), half.size()); ++i)
      worst = std::max(worst, std::abs(full[i] - half[i]) / std::abs(full[i]));
    counts += " R=" + num(R) + ":" + std::to_string(full.size()) + "/" + std::to_string(half.size());
  }
  const double t = sw.seconds();
  const bool pass = sizes && worst <= 1e-8 && t < 120.0;
  return {pass, "state counts full/half" + counts + ", max relative difference " + num(worst, 3) +
                    " (tol 1e-8), " + num(t, 4) + " s (limit 120 s)"};
}

// ------------------------------------------------------------------ 6 and 7

const EmergenceReport& emergence_pi() {
  static const EmergenceReport rep = critical_scale(LayerPair(kPi), 2, 1.0, 6.0, Numerics{}, std::nullopt, 1e-4);
  return rep;
}

bool nondecreasing(const std::vector<EigenCount>& trace) {
  for (std::size_t k = 1; k < trace.size(); ++k)
    if (trace[k].count < trace[k - 1].count || trace[k].max_count < trace[k - 1].max_count) return false;
  return true;
}

Outcome monotonicity() {
  const MonotonicityReport rep = monotonicity_check(LayerPair(kPi), {3.0, 4.0, 5.0, 6.0}, Numerics{}, 1e-8);
  std::string l1;
  for (const auto& p : rep.points) l1 += (l1.empty() ? "" : " ") + (p.lambdas.empty() ? "-" : num(p.lambdas[0], 9));
  // Bisection trace of the d = pi emergence search.
  const auto& trace = emergence_pi().trace;
  const bool traces = nondecreasing(trace);
  const std::string trace_info = std::to_string(trace.size()) + " evaluations";
  const bool pass = rep.passed() && rep.lambda1_strictly_decreasing && traces;
  return {pass, "lambda_1 at R=3,4,5,6: " + l1 + "; strictly decreasing " +
                    (rep.lambda1_strictly_decreasing ? "yes" : "no") + ", violations " +
                    std::to_string(rep.violations.size()) + ", eigencount trace (" + trace_info + ") " +
                    (traces ? "nondecreasing" : "DECREASES")};
}

Outcome emergence() {
  const EmergenceReport& rep = emergence_pi();
  const bool located = rep.converged && rep.final_interval_width <= 1e-4 * (1.0 + 1e-9);
  std::vector<double> gaps;
  std::string info;
  bool all_present = true;
  for (double f : {1.02, 1.01, 1.005}) {
    const auto v = solve_all(LayerPair(kPi), rep.t_n * f, Numerics{}).values_with_multiplicity();
    if (v.size() < 2) {
      all_present = false;
      info += " f=" + num(f) + ":absent";
      continue;
    }
    gaps.push_back(1.0 - v[1]);
    info += " f=" + num(f) + ":" + num(1.0 - v[1], 4);
  }
  bool decreasing = all_present;
  for (std::size_t k = 1; k < gaps.size(); ++k) decreasing = decreasing && gaps[k] < gaps[k - 1];
  const bool small = !gaps.empty() && gaps.front() < 0.05;
  const bool pass = located && small && decreasing;
  return {pass, "t_2 = " + num(rep.t_n, 9) + " (interval width " + num(rep.final_interval_width, 3) +
                    ", tol 1e-4), 1-lambda_2 at t_2*f:" + info + (decreasing ? " decreasing" : " NOT decreasing")};
}

// ------------------------------------------------------------ 8, 9, 10

// The second m = 0 state for d = pi/2.
struct AsymmetricExperiment {
  EmergenceReport critical;
  GapCurve curve;
  AsymptoticFit fit;
  EdgeProfile edge;
  std::string edge_error;
};

const AsymmetricExperiment& asymmetric() {
  static const AsymmetricExperiment e = [] {
    AsymmetricExperiment x;
    const LayerPair lp(kPi / 2);
    x.critical = critical_scale(lp, 2, 1.0, 6.0, Numerics{}, 0, 1e-4);
    Numerics gap_nu;
    gap_nu.max_pad = 20000.0;
    x.curve = gap_curve(lp, x.critical.t_n, 2, DilationProfile::constant(1.0), {0.10, 0.08, 0.06, 0.05}, gap_nu, 0);
    if (x.curve.samples.size() >= 4) x.fit = fit_exponential_law(x.curve);
    try {
      Numerics edge_nu;
      edge_nu.grid.grading_rings = 18;
      const BoundState psi = threshold_resonance(lp, x.critical.t_n, edge_nu, 2000.0);
      x.edge = edge_amplitude(psi, WindowShape::disk(x.critical.t_n), DilationProfile::constant(1.0));
    } catch (const Error& err) {
      x.edge_error = err.what();
    }
    return x;
  }();
  return e;
}

Outcome gap_law() {
  // Fit machinery on exact synthetic curves gap = A exp(-2 / (i1 eps)).
  double synth = 0.0;
  for (double i1 : {0.3, 1.0, 2.84}) {
    std::vector<double> eps{0.10, 0.08, 0.06, 0.05};
    std::vector<double> gap;
    for (double e : eps) gap.push_back(0.9 * std::exp(-2.0 / (i1 * e)));
    synth = std::max(synth, std::abs(fit_exponential_law(eps, gap).i1_from_slope - i1) / i1);
  }
  const AsymmetricExperiment& x = asymmetric();
  const AsymptoticFit& f = x.fit;
  const bool four = x.curve.samples.size() == 4;
  const bool pass = four && f.slope < 0.0 && f.linearity_r2 >= 0.98 && synth <= 1e-10;
  return {pass, "t_2(m=0) = " + num(x.critical.t_n, 9) + ", " + std::to_string(x.curve.samples.size()) +
                    " resolved points, slope " + num(f.slope) + ", r^2 " + num(f.linearity_r2, 8) +
                    " (tol 0.98), i1_from_slope " + num(f.i1_from_slope) + "; synthetic inversion error " +
                    num(synth, 3) + " (tol 1e-10)"};
}

Outcome edge_singularity() {
  // Injected field on a graded grid.
  AxisymConfig c;
  c.R = 2.0;
  c.L = 10.0;
  c.grid.grading_rings = 18;
  const SparseSymOp op = assemble(c);
  const AxisymGrid& g = *op.grid;
  const EdgeProfile injected = edge_profile_from_field(g, c.R, [&](int i, int j) {
    const double x = g.rho[i] - c.R;
    const double z = g.z[j];
    double theta = std::atan2(z, x);
    if (theta < 0.0) theta += 2.0 * kPi;
    return std::sqrt(std::hypot(x, z)) * std::sin(theta / 2.0);
  });
  const bool inj_ok = std::abs(injected.exponent - 0.5) <= 0.003;
  const AsymmetricExperiment& x = asymmetric();
  if (!x.edge_error.empty()) {
    return {false, "injected exponent " + num(injected.exponent, 6) + "; solver field failed: " + x.edge_error};
  }
  const bool sol_ok = std::abs(x.edge.exponent - 0.5) <= 0.05 && x.edge.l_variation <= 0.02;
  return {inj_ok && sol_ok, "injected exponent " + num(injected.exponent, 6) + " (0.5 +- 0.003); resonance at t=" +
                                num(x.critical.t_n, 9) + ": exponent " + num(x.edge.exponent, 4) +
                                " (0.5 +- 0.05), l = " + num(x.edge.l) + ", l(s) variation " +
                                num(x.edge.l_variation, 3) + " (tol 0.02)"};
}

Outcome cross_method() {
  const AsymmetricExperiment& x = asymmetric();
  if (!x.edge_error.empty()) return {false, "edge amplitude failed: " + x.edge_error};
  const double slope = x.fit.i1_from_slope;
  const double rel = std::abs(x.edge.i1_direct - slope) / slope;
  const double rel_flux = std::abs(x.edge.i1_flux - slope) / slope;
  return {rel <= 0.35, "i1_direct " + num(x.edge.i1_direct) + " vs i1_from_slope " + num(slope) +
                           ": relative difference " + num(rel, 3) + " (tol 0.35); info: i1_flux = i1_direct/pi = " +
                           num(x.edge.i1_flux) + ", relative difference " + num(rel_flux, 3)};
}

// ------------------------------------------------------------------ 11

Outcome decay() {
  const Spectrum sp = solve_all(LayerPair(kPi), 5.0, Numerics{});
  if (sp.states.empty()) return {false, "no state at R=5"};
  const DecayFit f = decay_rate(sp.states[0]);
  return {f.relative_error <= 0.05, "lambda_1 = " + num(sp.states[0].lambda, 10) + ", fitted rate " + num(f.rate) +
                                        " vs sqrt(1-lambda) " + num(f.predicted_rate) + ", relative error " +
                                        num(f.relative_error, 3) + " (tol 0.05) over " +
                                        std::to_string(f.rho.size()) + " radii"};
}

// ------------------------------------------------------------------ 12

#ifdef WINLAYER_CLI_PATH
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  struct Run {
    std::string command;
    std::string args;
  };
  const std::vector<Run> runs{
      {"bounds", "-s window.radius=5"},
      {"window-eigs", "-s window.shape=superellipse -s window_spectrum.fem_h=0.08 -s window_spectrum.count=6"},
      {"solve", "-s window.radius=2"},
      {"critical", "-s critical.t_lo=3 -s critical.t_hi=3.5 -s critical.rel_tol=1e-2"},
      {"gap-law", "-s layers.d=pi/2 -s gap_law.t_n=5.7512207"},
      {"edge", "-s layers.d=pi/2 -s edge.t=5.7512207"},
      {"convergence", "-s convergence.mode=rectangle"},
      {"sweep", "-s sweep.t_values=2,2.5"},
  };
  const fs::path root = fs::temp_directory_path() / "winlayer_acceptance_determinism";
  fs::remove_all(root);
  int identical = 0;
  std::string bad;
  for (const Run& r : runs) {
    std::string text[2];
    bool ok = true;
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path dir = root / (r.command + std::to_string(rep));
      const std::string cmd = std::string(WINLAYER_CLI_PATH) + " " + r.command + " " + r.args + " -j 1 -q -o " +
                              dir.string() + " > /dev/null 2>&1";
      if (std::system(cmd.c_str()) != 0) ok = false;
      text[rep] = slurp(dir / (r.command + ".json"));
    }
    if (ok && !text[0].empty() && text[0] == text[1]) {
      ++identical;
    } else {
      bad += " " + r.command + (ok ? "(differs)" : "(failed)");
    }
  }
  fs::remove_all(root);
  return {identical == static_cast<int>(runs.size()),
          std::to_string(identical) + "/" + std::to_string(runs.size()) + " commands byte-identical" + bad};
}
#else
Outcome determinism() { return {false, "command-line tool not built"}; }
#endif

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "Bessel zeros and interlacing", bessel_oracle},
      {2, "window spectra FEM convergence", window_spectra},
      {3, "bracket containment", bracket_containment},
      {4, "count bounds", count_bounds_check},
      {5, "parity reduction", parity_reduction},
      {6, "monotonicity", monotonicity},
      {7, "emergence", emergence},
      {8, "gap law", gap_law},
      {9, "edge singularity", edge_singularity},
      {10, "cross-method i1", cross_method},
      {11, "decay rate", decay},
      {12, "determinism", determinism},
  };
  std::set<int> selected;
  for (int k = 1; k < argc; ++k) selected.insert(std::atoi(argv[k]));
  int failed = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
