// Copyright 2026 The winlayer Authors
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include "winlayer/bracketing.hpp"
#include "winlayer/error.hpp"
#include "winlayer/layer_solver.hpp"
#include "winlayer/spectral_analysis.hpp"
#include "winlayer/window_eigs.hpp"

namespace winlayer::cli {
namespace {

using nlohmann::json;

std::optional<int> sector_of(int s) { return s < 0 ? std::nullopt : std::optional<int>(s); }

json optional_json(std::optional<int> v) { return v ? json(*v) : json(nullptr); }

json spectrum_json(const WindowSpectrum& s) {
  return {{"bc", to_string(s.bc)},
          {"backend", to_string(s.backend)},
          {"values", s.values},
          {"estimated_error", s.estimated_error},
          {"order", s.order}};
}

json bracket_json(const SpectralBracket& b) {
  return {{"index", b.index},
          {"lower", b.lower},
          {"upper", b.upper},
          {"mu_neumann", b.mu_neumann},
          {"mu_dirichlet", b.mu_dirichlet}};
}

json layers_json(const LayerPair& layers) {
  return {{"d", layers.d()},
          {"gamma", layers.gamma()},
          {"threshold_shift", threshold_shift(layers)},
          {"count_threshold", count_threshold(layers)}};
}

struct WindowPair {
  WindowSpectrum neumann;
  WindowSpectrum dirichlet;
  CountBounds counts;
};

// Both lists must reach past the count threshold, so the requested length
// doubles until count_bounds accepts them.
WindowPair window_pair(const RunConfig& c, const WindowShape& shape) {
  const LayerPair layers = c.layers();
  int count = c.window_spectrum.count;
  for (;;) {
    WindowPair p;
    p.neumann = window_spectrum(shape, BoundaryCondition::kNeumann, count, c.window_spectrum.fem_h);
    p.dirichlet = window_spectrum(shape, BoundaryCondition::kDirichlet, count, c.window_spectrum.fem_h);
    try {
      p.counts = count_bounds(layers, p.neumann, p.dirichlet);
      return p;
    } catch (const InsufficientData&) {
      if (count >= 4096) throw;
      count = std::min(4096, 2 * count);
    }
  }
}

std::vector<SpectralBracket> all_brackets(const LayerPair& layers, const WindowPair& p) {
  const int n = static_cast<int>(std::min(p.neumann.values.size(), p.dirichlet.values.size()));
  return brackets(layers, p.neumann, p.dirichlet, n);
}

json counts_json(const CountBounds& cb) {
  return {{"min_count", cb.min_count},
          {"max_count", cb.max_count},
          {"undecided", cb.undecided},
          {"threshold_used", cb.threshold_used}};
}

Table bracket_table(const std::vector<SpectralBracket>& bl) {
  Table t({"index", "lower", "upper", "mu_neumann", "mu_dirichlet"});
  for (const auto& b : bl) t.add({std::to_string(b.index), fmt(b.lower), fmt(b.upper), fmt(b.mu_neumann), fmt(b.mu_dirichlet)});
  return t;
}

// ---------------------------------------------------------------- bounds

void cmd_bounds(const RunConfig& c, Artifacts& out) {
  const LayerPair layers = c.layers();
  const WindowShape shape = c.shape();
  const WindowPair p = window_pair(c, shape);
  const auto bl = all_brackets(layers, p);
  json& r = out.result();
  r["layers"] = layers_json(layers);
  r["window"] = {{"circular", shape.is_circle()}, {"area", area(shape)}, {"perimeter", perimeter(shape)}};
  r["neumann"] = spectrum_json(p.neumann);
  r["dirichlet"] = spectrum_json(p.dirichlet);
  r["brackets"] = json::array();
  for (const auto& b : bl) r["brackets"].push_back(bracket_json(b));
  r["count_bounds"] = counts_json(p.counts);

  out.line("layers: d=" + fmt(layers.d()) + " gamma=" + std::to_string(layers.gamma()) +
           " shift=" + fmt(threshold_shift(layers)) + " count_threshold=" + fmt(count_threshold(layers)));
  out.line("window backend: " + to_string(p.dirichlet.backend));
  const Table t = bracket_table(bl);
  out.table("brackets (lambda_i inside [lower, upper])", t);
  out.csv("brackets.csv", t);
  out.line("");
  out.line("count bounds: " + std::to_string(p.counts.min_count) + " <= #bound states <= " +
           std::to_string(p.counts.max_count) + "  (undecided window eigenvalues: " +
           std::to_string(p.counts.undecided) + ")");
}

// ----------------------------------------------------------- window-eigs

void cmd_window_eigs(const RunConfig& c, Artifacts& out) {
  const WindowShape shape = c.shape();
  std::vector<BoundaryCondition> bcs;
  if (c.window_spectrum.bc != "neumann") bcs.push_back(BoundaryCondition::kDirichlet);
  if (c.window_spectrum.bc != "dirichlet") bcs.push_back(BoundaryCondition::kNeumann);
  Table t({"bc", "index", "mu", "estimated_error", "order"});
  json& r = out.result();
  r["spectra"] = json::array();
  for (const auto bc : bcs) {
    const WindowSpectrum s = window_spectrum(shape, bc, c.window_spectrum.count, c.window_spectrum.fem_h);
    r["spectra"].push_back(spectrum_json(s));
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      t.add({to_string(bc), std::to_string(i + 1), fmt(s.values[i]),
             fmt(i < s.estimated_error.size() ? s.estimated_error[i] : 0.0),
             std::to_string(i < s.order.size() ? s.order[i] : -1)});
    }
  }
  out.line("window: " + std::string(shape.is_circle() ? "disk" : "non-circular") + " area=" + fmt(area(shape)) +
           " perimeter=" + fmt(perimeter(shape)));
  out.table("window eigenvalues", t);
  out.csv("window_spectrum.csv", t);
  if (c.window_spectrum.dump_mesh) {
    const Mesh2D mesh = mesh_window(shape, c.window_spectrum.fem_h);
    std::ostringstream ss;
    write_mesh_csv(mesh, ss);
    out.file("mesh.csv", ss.str());
    r["mesh"] = {{"vertices", mesh.vertices.size()},
                 {"triangles", mesh.triangles.size()},
                 {"target_h", mesh.target_h},
                 {"max_edge", max_edge_length(mesh)}};
    out.line("");
    out.line("mesh: " + std::to_string(mesh.vertices.size()) + " vertices, " + std::to_string(mesh.triangles.size()) +
             " triangles, max edge " + fmt(max_edge_length(mesh)));
  }
}

// ----------------------------------------------------------------- solve

void cmd_solve(const RunConfig& c, Artifacts& out) {
  const LayerPair layers = c.layers();
  const double R = c.disk_radius("solve");
  const Numerics& nu = c.numerics;
  const Spectrum sp = c.solve.half_domain ? half_domain_solve(R, nu) : solve_all(layers, R, nu);
  const WindowPair wp = window_pair(c, WindowShape::disk(R));
  const auto bl = all_brackets(layers, wp);

  // Convergence summary per sector.  The ring count is anchored so that the
  // ladder level at the solve step is the solve grid; the finest level's
  // error estimate is then widened by its distance to the solve value.
  std::map<int, RefineStudy> studies;
  std::map<int, std::string> study_errors;
  json convergence = json::array();
  if (c.solve.refine && !c.solve.half_domain) {
    const std::vector<double> ladder = solve_ladder(c);
    Numerics rn = nu;
    rn.grid.grading_rings = ladder_base_rings(nu.grid, ladder, nu.grid.h_rho);
    for (const auto& s : sp.sectors) {
      if (s.states.empty()) continue;
      try {
        studies.emplace(s.m, refine_study(layers, R, s.m, ladder, rn));
      } catch (const Error& e) {
        study_errors.emplace(s.m, e.what());
      }
    }
  }

  auto bracket_at = [&](int index) -> const SpectralBracket* {
    return index >= 1 && index <= static_cast<int>(bl.size()) ? &bl[index - 1] : nullptr;
  };

  Table t({"m", "k", "multiplicity", "lambda", "gap", "residual", "bracket_lower", "bracket_upper", "inside_bracket",
           "error_estimate", "inside_widened"});
  json states = json::array();
  std::map<int, int> kth;
  int global = 1;
  int outside = 0;
  for (const BoundState& st : sp.states) {
    const int k = kth[st.m]++;
    double lo = 0.0;
    double hi = 0.0;
    bool inside = true;
    for (int i = 0; i < st.multiplicity; ++i) {
      const SpectralBracket* b = bracket_at(global + i);
      if (!b) {
        inside = false;
        continue;
      }
      if (i == 0) lo = b->lower;
      hi = b->upper;
      inside = inside && st.lambda >= b->lower && st.lambda <= b->upper;
    }
    std::optional<double> err;
    if (auto it = studies.find(st.m); it != studies.end() && k < static_cast<int>(it->second.error_estimate.size())) {
      const RefineStudy& rs = it->second;
      err = rs.error_estimate[k] + std::abs(st.lambda - rs.levels.back().lambdas[k]);
    }
    bool widened = inside;
    if (!inside && err) {
      widened = true;
      for (int i = 0; i < st.multiplicity; ++i) {
        const SpectralBracket* b = bracket_at(global + i);
        widened = widened && b && st.lambda >= b->lower - *err && st.lambda <= b->upper + *err;
      }
    }
    if (!widened) ++outside;
    json js = {{"m", st.m},
               {"k", k + 1},
               {"multiplicity", st.multiplicity},
               {"lambda", st.lambda},
               {"gap", st.gap()},
               {"threshold", st.threshold},
               {"residual", st.residual},
               {"L", st.config.L},
               {"bracket_indices", json::array()},
               {"inside_bracket", inside},
               {"verdict", inside ? "inside bracket" : (widened ? "inside widened bracket" : "outside bracket")},
               {"error_estimate", err ? json(*err) : json(nullptr)},
               {"inside_widened", widened}};
    for (int i = 0; i < st.multiplicity; ++i) js["bracket_indices"].push_back(global + i);
    states.push_back(js);
    t.add({std::to_string(st.m), std::to_string(k + 1), std::to_string(st.multiplicity), fmt(st.lambda),
           fmt(st.gap()), fmt(st.residual), fmt(lo), fmt(hi), inside ? "true" : "false", err ? fmt(*err) : "",
           widened ? "true" : "false"});
    if (c.solve.export_eigenfunctions) {
      std::ostringstream ss;
      write_eigenfunction_csv(st, ss);
      out.file("eigenfunction_m" + std::to_string(st.m) + "_k" + std::to_string(k + 1) + ".csv", ss.str());
    }
    global += st.multiplicity;
  }

  Table ut({"m", "neumann_value", "gap_bound"});
  json unresolved = json::array();
  json sectors = json::array();
  for (const auto& s : sp.sectors) {
    for (double v : s.unresolved) {
      ut.add({std::to_string(s.m), fmt(v), fmt(s.threshold - v)});
      unresolved.push_back({{"m", s.m}, {"neumann_value", v}, {"gap_bound", s.threshold - v},
                            {"status", "unresolved near-threshold"}});
    }
    // States known to exist (the m = 0 ground state) whose gap is too small
    // even for the Neumann truncation to show.
    const int shown = static_cast<int>(s.states.size() + s.unresolved.size());
    for (int k = shown; k < s.guaranteed; ++k) {
      ut.add({std::to_string(s.m), "", ""});
      unresolved.push_back({{"m", s.m}, {"neumann_value", nullptr}, {"gap_bound", nullptr},
                            {"status", "unresolved near-threshold"}});
    }
    sectors.push_back({{"m", s.m},
                       {"resolved", s.states.size()},
                       {"guaranteed", s.guaranteed},
                       {"possible", s.possible},
                       {"L", s.L},
                       {"threshold", s.threshold},
                       {"neumann_values", s.neumann_values},
                       {"truncation_verified", s.truncation_verified},
                       {"truncation_shift", s.truncation_shift}});
  }
  for (const auto& [m, st] : studies) {
    json levels = json::array();
    for (const auto& lv : st.levels) {
      levels.push_back({{"h", lv.h}, {"grading_rings", lv.grading_rings}, {"lambdas", lv.lambdas}});
    }
    convergence.push_back({{"m", m},
                           {"levels", levels},
                           {"observed_order", st.observed_order},
                           {"extrapolated", st.extrapolated},
                           {"error_estimate", st.error_estimate},
                           {"settling", st.settling},
                           {"L", st.L}});
  }
  for (const auto& [m, msg] : study_errors) convergence.push_back({{"m", m}, {"error", msg}});

  const CountBounds& cb = wp.counts;
  std::string count_verdict = "inside";
  if (sp.min_count() > cb.max_count || sp.max_count() < cb.min_count) {
    count_verdict = "violation";
  } else if (sp.min_count() < cb.min_count || sp.max_count() > cb.max_count || cb.undecided > 0) {
    count_verdict = "consistent";
  }

  json& r = out.result();
  r["layers"] = layers_json(layers);
  r["radius"] = R;
  r["parity"] = c.solve.half_domain ? "even_half_domain" : "full_two_layer";
  r["states"] = states;
  r["unresolved"] = unresolved;
  r["sectors"] = sectors;
  r["brackets"] = json::array();
  for (const auto& b : bl) r["brackets"].push_back(bracket_json(b));
  r["count_bounds"] = counts_json(cb);
  r["resolved_count"] = sp.resolved_count();
  r["min_count"] = sp.min_count();
  r["max_count"] = sp.max_count();
  r["count_verdict"] = count_verdict;
  r["bracket_violations"] = outside;
  r["convergence"] = convergence;

  out.line("layers: d=" + fmt(layers.d()) + "  window radius R=" + fmt(R) + "  parity=" +
           (c.solve.half_domain ? "even half-domain" : "full two-layer"));
  out.table("bound states", t);
  out.csv("states.csv", t);
  if (!ut.empty()) {
    out.table("unresolved near-threshold (Neumann truncation values)", ut);
    out.csv("unresolved.csv", ut);
  }
  out.line("");
  out.line("count: resolved " + std::to_string(sp.resolved_count()) + ", bounds from truncation pair [" +
           std::to_string(sp.min_count()) + ", " + std::to_string(sp.max_count()) + "], window bounds [" +
           std::to_string(cb.min_count) + ", " + std::to_string(cb.max_count) + "]: " + count_verdict);
  for (const auto& [m, st] : studies) {
    std::string line = "convergence m=" + std::to_string(m) + ":";
    for (std::size_t k = 0; k < st.observed_order.size(); ++k) {
      line += " k=" + std::to_string(k + 1) + " order " + fmt(st.observed_order[k]) + " err " +
              fmt(st.error_estimate[k]);
    }
    out.line(line);
  }
  for (const auto& [m, msg] : study_errors) out.line("convergence m=" + std::to_string(m) + " unavailable: " + msg);
}

// -------------------------------------------------------------- critical

EmergenceReport locate(const RunConfig& c, int n, std::optional<int> sector) {
  return critical_scale(c.layers(), n, c.critical.t_lo, c.critical.t_hi, c.numerics, sector, c.critical.rel_tol);
}

json emergence_json(const EmergenceReport& rep) {
  json trace = json::array();
  for (const auto& e : rep.trace) {
    trace.push_back({{"t", e.t}, {"count", e.count}, {"max_count", e.max_count}, {"ambiguous", e.ambiguous}});
  }
  return {{"n", rep.n},
          {"sector", optional_json(rep.sector)},
          {"t_n", rep.t_n},
          {"lower", rep.lower},
          {"upper", rep.upper},
          {"final_interval_width", rep.final_interval_width},
          {"converged", rep.converged},
          {"undecided_band", rep.undecided_band},
          {"certified_upper", rep.certified_upper},
          {"trace", trace}};
}

void cmd_critical(const RunConfig& c, Artifacts& out) {
  const EmergenceReport rep = locate(c, c.critical.n, sector_of(c.critical.sector));
  out.result() = emergence_json(rep);
  Table t({"t", "count", "max_count", "ambiguous"});
  for (const auto& e : rep.trace) {
    t.add({fmt(e.t), std::to_string(e.count), std::to_string(e.max_count), e.ambiguous ? "true" : "false"});
  }
  out.line("critical scale of state n=" + std::to_string(rep.n) + " (sector " +
           (rep.sector ? std::to_string(*rep.sector) : std::string("all")) + ", d=" + fmt(c.d) + ")");
  out.line("t_n = " + fmt(rep.t_n) + " in [" + fmt(rep.lower) + ", " + fmt(rep.upper) + "], relative width " +
           fmt(rep.final_interval_width) + (rep.converged ? "" : " (not converged)"));
  if (rep.undecided_band) out.line("undecided band: decided count reaches n at " + fmt(rep.certified_upper));
  out.table("bisection trace", t);
  out.csv("critical_trace.csv", t);
}

// --------------------------------------------------------------- gap-law

void cmd_gap_law(const RunConfig& c, Artifacts& out) {
  const std::optional<int> sector = sector_of(c.gap_law.sector);
  json& r = out.result();
  double t_n = c.gap_law.t_n;
  if (t_n <= 0.0) {
    const EmergenceReport rep = locate(c, c.gap_law.n, sector);
    t_n = rep.t_n;
    r["critical"] = emergence_json(rep);
  }
  Numerics nu = c.numerics;
  nu.max_pad = c.gap_law.max_pad;
  const GapCurve curve =
      gap_curve(c.layers(), t_n, c.gap_law.n, DilationProfile::constant(c.gap_law.beta), c.gap_law.eps, nu, sector);
  Table t({"eps", "radius", "lambda", "gap", "truncation_spread", "resolved"});
  json samples = json::array();
  std::vector<GapSample> rows = curve.samples;
  rows.insert(rows.end(), curve.dropped.begin(), curve.dropped.end());
  std::sort(rows.begin(), rows.end(), [](const GapSample& a, const GapSample& b) { return a.eps > b.eps; });
  for (const auto& g : rows) {
    t.add({fmt(g.eps), fmt(g.radius), fmt(g.lambda), fmt(g.gap), fmt(g.truncation_spread),
           g.resolved ? "true" : "false"});
    samples.push_back({{"eps", g.eps},
                       {"radius", g.radius},
                       {"lambda", g.lambda},
                       {"gap", g.gap},
                       {"truncation_spread", g.truncation_spread},
                       {"resolved", g.resolved}});
  }
  r["t_n"] = t_n;
  r["n"] = c.gap_law.n;
  r["sector"] = optional_json(sector);
  r["beta"] = c.gap_law.beta;
  r["samples"] = samples;
  out.line("gap curve at t_n=" + fmt(t_n) + ", n=" + std::to_string(c.gap_law.n) + ", beta=" + fmt(c.gap_law.beta) +
           " (radius t_n + eps*beta)");
  out.table("samples", t);
  out.csv("gap_curve.csv", t);
  if (curve.samples.size() < 4) {
    throw InsufficientData("gap-law: only " + std::to_string(curve.samples.size()) +
                           " resolved samples, the fit needs four");
  }
  const AsymptoticFit fit = fit_exponential_law(curve);
  r["fit"] = {{"slope", fit.slope},
              {"intercept", fit.intercept},
              {"i1_from_slope", fit.i1_from_slope},
              {"linearity_r2", fit.linearity_r2},
              {"euler_constant", fit.euler_constant},
              {"accepted", fit.accepted},
              {"rejection", fit.rejection}};
  out.line("");
  out.line("fit ln(gap) = intercept + slope/eps: slope=" + fmt(fit.slope) + " intercept=" + fmt(fit.intercept) +
           " r2=" + fmt(fit.linearity_r2) + " i1_from_slope=" + fmt(fit.i1_from_slope) +
           (fit.accepted ? " (accepted)" : " (rejected: " + fit.rejection + ")"));
}

// ------------------------------------------------------------------ edge

void cmd_edge(const RunConfig& c, Artifacts& out) {
  json& r = out.result();
  double t = c.edge.t;
  if (t <= 0.0) {
    // The threshold solution is computed in the m = 0 sector.
    const EmergenceReport rep = locate(c, c.critical.n, 0);
    t = rep.t_n;
    r["critical"] = emergence_json(rep);
  }
  Numerics nu = c.numerics;
  nu.grid.grading_rings = c.edge.grading_rings;
  const BoundState st = threshold_resonance(c.layers(), t, nu, c.edge.pad);
  EdgeOptions eo;
  eo.first_node = c.edge.first_node;
  eo.node_count = c.edge.node_count;
  eo.rho_star = c.edge.rho_star;
  const EdgeProfile p = edge_amplitude(st, WindowShape::disk(t), DilationProfile::constant(c.edge.beta), eo);

  r["t"] = t;
  r["resonance"] = {{"lambda", st.lambda}, {"threshold", st.threshold}, {"residual", st.residual},
                    {"L", st.config.L}, {"grading_rings", c.edge.grading_rings}};
  r["profile"] = {{"r", p.r}, {"amplitude", p.amplitude}};
  r["exponent"] = p.exponent;
  r["l"] = p.l;
  r["l_table"] = {{"s", p.s}, {"l", p.l_of_s}};
  r["l_variation"] = p.l_variation;
  r["i1_direct"] = p.i1_direct;
  r["i1_flux"] = p.i1_flux;
  r["normalization"] = p.normalization;
  r["far_amplitude"] = p.far_amplitude;
  r["rho_star"] = p.rho_star;

  Table pt({"r", "amplitude"});
  for (std::size_t i = 0; i < p.r.size(); ++i) pt.add({fmt(p.r[i]), fmt(p.amplitude[i])});
  Table lt({"s", "l"});
  for (std::size_t i = 0; i < p.s.size(); ++i) lt.add({fmt(p.s[i]), fmt(p.l_of_s[i])});
  out.line("threshold solution at t=" + fmt(t) + ": lambda=" + fmt(st.lambda) + " (threshold " +
           fmt(st.threshold) + "), L=" + fmt(st.config.L));
  out.line("edge exponent " + fmt(p.exponent) + ", l=" + fmt(p.l) + ", l(s) variation " + fmt(p.l_variation));
  out.line("i1_direct=" + fmt(p.i1_direct) + "  i1_flux=" + fmt(p.i1_flux) + "  (far amplitude " +
           fmt(p.far_amplitude) + " at rho*=" + fmt(p.rho_star) + ")");
  out.table("edge profile on the ray above the rim", pt);
  out.table("l(s)", lt);
  out.csv("edge_profile.csv", pt);
  out.csv("l_of_s.csv", lt);
}

// ----------------------------------------------------------- convergence

void cmd_convergence(const RunConfig& c, Artifacts& out) {
  const auto& cv = c.convergence;
  RefineStudy st;
  json& r = out.result();
  r["mode"] = cv.mode;
  if (cv.mode == "rectangle") {
    st = rectangle_refine_study(cv.rect_a, cv.rect_b, cv.ladder);
    const double exact = std::numbers::pi * std::numbers::pi * (1.0 / (cv.rect_a * cv.rect_a) + 1.0 / (cv.rect_b * cv.rect_b));
    r["rectangle"] = {{"a", cv.rect_a}, {"b", cv.rect_b}, {"exact", exact}};
    out.line("rectangle [0," + fmt(cv.rect_a) + "]x[0," + fmt(cv.rect_b) + "], exact lambda_1 = " + fmt(exact));
  } else {
    const double R = c.disk_radius("convergence");
    st = refine_study(c.layers(), R, cv.m, cv.ladder, c.numerics);
    r["radius"] = R;
    r["m"] = cv.m;
    r["L"] = st.L;
    out.line("window R=" + fmt(R) + ", d=" + fmt(c.d) + ", sector m=" + std::to_string(cv.m) + ", L=" + fmt(st.L));
  }
  Table lt({"level", "h", "grading_rings", "index", "lambda"});
  json levels = json::array();
  for (std::size_t i = 0; i < st.levels.size(); ++i) {
    const auto& lv = st.levels[i];
    for (std::size_t k = 0; k < lv.lambdas.size(); ++k) {
      lt.add({std::to_string(i), fmt(lv.h), std::to_string(lv.grading_rings), std::to_string(k + 1),
              fmt(lv.lambdas[k])});
    }
    levels.push_back({{"h", lv.h}, {"grading_rings", lv.grading_rings}, {"lambdas", lv.lambdas},
                      {"threshold", lv.threshold}});
  }
  Table ot({"index", "observed_order", "extrapolated", "error_estimate", "settling"});
  for (std::size_t k = 0; k < st.observed_order.size(); ++k) {
    ot.add({std::to_string(k + 1), fmt(st.observed_order[k]), fmt(st.extrapolated[k]), fmt(st.error_estimate[k]),
            st.settling[k] ? "true" : "false"});
  }
  r["levels"] = levels;
  r["observed_order"] = st.observed_order;
  r["extrapolated"] = st.extrapolated;
  r["error_estimate"] = st.error_estimate;
  r["settling"] = st.settling;
  out.table("levels", lt);
  out.table("observed order", ot);
  out.csv("convergence_levels.csv", lt);
  out.csv("convergence_order.csv", ot);
}

// ----------------------------------------------------------------- sweep

void cmd_sweep(const RunConfig& c, Artifacts& out) {
  const MonotonicityReport rep = monotonicity_check(c.layers(), c.sweep.t_values, c.numerics, c.sweep.tolerance);
  Table t({"t", "index", "lambda", "count", "max_count"});
  json points = json::array();
  for (const auto& p : rep.points) {
    for (std::size_t k = 0; k < p.lambdas.size(); ++k) {
      t.add({fmt(p.t), std::to_string(k + 1), fmt(p.lambdas[k]), std::to_string(p.count), std::to_string(p.max_count)});
    }
    points.push_back({{"t", p.t}, {"lambdas", p.lambdas}, {"count", p.count}, {"max_count", p.max_count}});
  }
  json& r = out.result();
  r["points"] = points;
  r["violations"] = rep.violations;
  r["emergences"] = rep.emergences;
  r["lambda1_strictly_decreasing"] = rep.lambda1_strictly_decreasing;
  r["tolerance"] = rep.tolerance;
  r["passed"] = rep.passed();
  out.line("sweep over " + std::to_string(rep.points.size()) + " window radii, d=" + fmt(c.d));
  out.table("eigenvalues", t);
  out.csv("sweep.csv", t);
  out.line("");
  out.line(std::string("lambda_1 strictly decreasing: ") + (rep.lambda1_strictly_decreasing ? "yes" : "no"));
  for (const auto& e : rep.emergences) out.line("emergence: " + e);
  for (const auto& v : rep.violations) out.line("violation: " + v);
  out.line(rep.passed() ? "monotonicity: passed" : "monotonicity: FAILED");
}

using Command = std::function<void(const RunConfig&, Artifacts&)>;

const std::vector<std::pair<std::string, Command>>& table() {
  static const std::vector<std::pair<std::string, Command>> t = {
      {"bounds", cmd_bounds},   {"window-eigs", cmd_window_eigs}, {"solve", cmd_solve},
      {"critical", cmd_critical}, {"gap-law", cmd_gap_law},       {"edge", cmd_edge},
      {"convergence", cmd_convergence}, {"sweep", cmd_sweep}};
  return t;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : table()) n.push_back(name);
    return n;
  }();
  return names;
}

void run_command(const std::string& name, const RunConfig& config, Artifacts& out) {
  for (const auto& [n, fn] : table()) {
    if (n == name) return fn(config, out);
  }
  throw ConfigError("unknown command '" + name + "'");
}

std::vector<double> solve_ladder(const RunConfig& config) {
  if (!config.solve.refine_ladder.empty()) return config.solve.refine_ladder;
  const double h = config.numerics.grid.h_rho;
  return {2.0 * h, h, 0.5 * h};
}

int ladder_base_rings(const GridSpec& grid, const std::vector<double>& ladder, double h_ref) {
  const int extra =
      static_cast<int>(std::lround(std::log(h_ref / ladder.front()) / std::log(grid.grading_ratio)));
  return std::max(0, grid.grading_rings - extra);
}

}  // namespace winlayer::cli
