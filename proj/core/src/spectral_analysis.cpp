// Copyright 2026 The winlayer Authors
// SPDX-License-Identifier: Apache-2.0

#include "winlayer/spectral_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "parallel.hpp"
#include "winlayer/error.hpp"

namespace winlayer {
namespace {

constexpr double kPi = std::numbers::pi;

struct Line {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
    syy += (y[k] - my) * (y[k] - my);
  }
  Line l;
  l.slope = sxy / sxx;
  l.intercept = my - l.slope * mx;
  double ss_res = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double r = y[k] - (l.intercept + l.slope * x[k]);
    ss_res += r * r;
  }
  l.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return l;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

// n-th (1-based, multiplicity counted) Neumann-truncation value of a spectrum.
std::optional<double> neumann_nth(const Spectrum& sp, int n) {
  std::vector<double> v;
  for (const auto& s : sp.sectors)
    for (double x : s.neumann_values)
      for (int k = 0; k < s.multiplicity(); ++k) v.push_back(x);
  std::sort(v.begin(), v.end());
  if (n > static_cast<int>(v.size())) return std::nullopt;
  return v[n - 1];
}

}  // namespace

EigenCount eigencount(const LayerPair& layers, double t, const Numerics& numerics, std::optional<int> sector,
                      int escalations) {
  if (!(t > 0.0)) throw InvalidInput("eigencount: scale must be positive");
  Numerics nu = numerics;
  EigenCount out;
  out.t = t;
  for (int e = 0;; ++e) {
    if (sector) {
      const SectorResult s = solve_sector(layers, t, *sector, nu);
      out.count = s.guaranteed * s.multiplicity();
      out.max_count = s.possible * s.multiplicity();
    } else {
      const Spectrum sp = solve_all(layers, t, nu);
      out.count = sp.min_count();
      out.max_count = sp.max_count();
    }
    out.ambiguous = out.count != out.max_count;
    if (!out.ambiguous || e >= escalations) return out;
    nu.max_pad *= 4.0;
  }
}

EmergenceReport critical_scale(const LayerPair& layers, int n, double t_lo, double t_hi, const Numerics& numerics,
                               std::optional<int> sector, double rel_tol) {
  if (n == 1) {
    throw InvalidInput("critical_scale: t_1 = 0 by convention, the ground state exists for every window");
  }
  if (n < 1) throw InvalidInput("critical_scale: n must be >= 2");
  if (!(t_lo > 0.0 && t_lo < t_hi)) throw InvalidInput("critical_scale: need 0 < t_lo < t_hi");
  if (!(rel_tol > 0.0)) throw InvalidInput("critical_scale: tolerance must be positive");

  EmergenceReport rep;
  rep.n = n;
  rep.sector = sector;
  auto eval = [&](double t) {
    EigenCount c = eigencount(layers, t, numerics, sector);
    rep.trace.push_back(c);
    return c;
  };
  const EigenCount c_lo = eval(t_lo);
  const EigenCount c_hi = eval(t_hi);
  if (!(c_lo.max_count < n) || !(c_hi.count >= n)) {
    throw InvalidInput("critical_scale: endpoint counts do not straddle n=" + std::to_string(n) + " (count at " +
                       fmt(t_lo) + " is " + std::to_string(c_lo.count) + ".." + std::to_string(c_lo.max_count) +
                       ", at " + fmt(t_hi) + " is " + std::to_string(c_hi.count) + ".." +
                       std::to_string(c_hi.max_count) + ")");
  }
  // lower: largest t known to have fewer than n states; upper: smallest t
  // known to have at least n.  Ambiguous counts split the search into the
  // two one-sided problems.
  double lower = t_lo;
  double upper = t_hi;
  double amb_lo = 0.0;
  double amb_hi = 0.0;
  double neumann_upper = 0.0;
  bool split = false;
  while (upper - lower > rel_tol * upper) {
    const double mid = 0.5 * (lower + upper);
    const EigenCount c = eval(mid);
    if (c.count >= n) {
      upper = mid;
    } else if (c.max_count < n) {
      lower = mid;
    } else {
      split = true;
      amb_lo = amb_hi = mid;
      break;
    }
  }
  if (split) {
    double hi_side = amb_lo;  // count may reach n here: search for lower's edge
    while (hi_side - lower > rel_tol * upper) {
      const double mid = 0.5 * (lower + hi_side);
      const EigenCount c = eval(mid);
      if (c.max_count < n) {
        lower = mid;
      } else {
        hi_side = mid;
        if (c.count >= n) upper = std::min(upper, mid);
      }
    }
    neumann_upper = hi_side;
    double lo_side = amb_hi;
    while (upper - lo_side > rel_tol * upper) {
      const double mid = 0.5 * (lo_side + upper);
      const EigenCount c = eval(mid);
      if (c.count >= n) {
        upper = mid;
      } else {
        lo_side = mid;
      }
    }
  }

  std::stable_sort(rep.trace.begin(), rep.trace.end(),
                   [](const EigenCount& a, const EigenCount& b) { return a.t < b.t; });
  for (std::size_t k = 1; k < rep.trace.size(); ++k) {
    const EigenCount& a = rep.trace[k - 1];
    const EigenCount& b = rep.trace[k];
    if (b.count < a.count || b.max_count < a.max_count) {
      throw NumericalFailure("critical_scale: eigencount decreases between t=" + fmt(a.t) + " and t=" + fmt(b.t));
    }
  }
  rep.undecided_band = split;
  rep.certified_upper = upper;
  rep.lower = lower;
  rep.upper = split ? neumann_upper : upper;
  rep.t_n = 0.5 * (rep.lower + rep.upper);
  rep.final_interval_width = (rep.upper - rep.lower) / rep.t_n;
  rep.converged = rep.upper - rep.lower <= rel_tol * rep.upper * (1.0 + 1e-12);
  return rep;
}

GapCurve gap_curve(const LayerPair& layers, double t_n, int n, const DilationProfile& beta,
                   const std::vector<double>& eps_list, const Numerics& numerics, std::optional<int> sector) {
  if (!(t_n > 0.0)) throw InvalidInput("gap_curve: t_n must be positive");
  if (n < 1) throw InvalidInput("gap_curve: n must be >= 1");
  if (eps_list.empty()) throw InvalidInput("gap_curve: empty eps list");
  for (std::size_t k = 0; k < eps_list.size(); ++k) {
    if (!(eps_list[k] > 0.0)) throw InvalidInput("gap_curve: eps values must be positive");
    if (k > 0 && !(eps_list[k] < eps_list[k - 1])) throw InvalidInput("gap_curve: eps list must decrease");
  }
  if (!beta.is_constant()) {
    throw InvalidInput("gap_curve: the layer solver needs a circular window, so beta must be constant");
  }
  const WindowShape base = WindowShape::disk(t_n);
  std::vector<GapSample> all(eps_list.size());
  detail::parallel_for(static_cast<int>(eps_list.size()), numerics.threads, [&](int k) {
    GapSample g;
    g.eps = eps_list[k];
    g.radius = dilate(base, g.eps, beta).shape.radius(0.0);
    std::optional<double> lam;
    std::optional<double> lam_n;
    double thr = 1.0;
    if (sector) {
      const SectorResult s = solve_sector(layers, g.radius, *sector, numerics);
      thr = s.threshold;
      if (n <= static_cast<int>(s.states.size())) lam = s.states[n - 1].lambda;
      if (n <= static_cast<int>(s.neumann_values.size())) lam_n = s.neumann_values[n - 1];
    } else {
      const Spectrum sp = solve_all(layers, g.radius, numerics);
      thr = sp.sectors.front().threshold;
      const std::vector<double> v = sp.values_with_multiplicity();
      if (n <= static_cast<int>(v.size())) lam = v[n - 1];
      lam_n = neumann_nth(sp, n);
    }
    if (lam) {
      g.lambda = *lam;
      g.gap = thr - *lam;
      g.truncation_spread = lam_n ? *lam - *lam_n : g.gap;
      const double tol = std::max(g.truncation_spread, 1e-10);
      g.resolved = g.gap > 10.0 * tol;
    } else if (lam_n) {
      g.lambda = *lam_n;
      g.gap = thr - *lam_n;
      g.truncation_spread = g.gap;
    }
    all[k] = g;
  });
  GapCurve curve;
  curve.t_n = t_n;
  curve.n = n;
  curve.sector = sector;
  for (const auto& g : all) (g.resolved ? curve.samples : curve.dropped).push_back(g);
  if (curve.samples.empty()) throw InsufficientData("gap_curve: no eps value gives a resolvable gap");
  return curve;
}

AsymptoticFit fit_exponential_law(const std::vector<double>& eps, const std::vector<double>& gap) {
  if (eps.size() != gap.size()) throw InvalidInput("fit_exponential_law: size mismatch");
  if (eps.size() < 4) throw InvalidInput("fit_exponential_law: needs at least four points");
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t k = 0; k < eps.size(); ++k) {
    if (!(eps[k] > 0.0) || !(gap[k] > 0.0)) throw InvalidInput("fit_exponential_law: eps and gaps must be positive");
    if (k > 0 && !(eps[k] < eps[k - 1])) throw InvalidInput("fit_exponential_law: eps must decrease");
    x.push_back(1.0 / eps[k]);
    y.push_back(std::log(gap[k]));
  }
  const Line line = least_squares(x, y);
  AsymptoticFit fit;
  fit.eps = eps;
  fit.gap = gap;
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  fit.linearity_r2 = line.r2;
  fit.i1_from_slope = -2.0 / line.slope;
  if (!(line.slope < 0.0)) {
    fit.rejection = "nonnegative slope";
  } else if (!(line.r2 >= 0.98)) {
    fit.rejection = "r^2 below 0.98";
  } else {
    fit.accepted = true;
  }
  if (fit.accepted && !(fit.i1_from_slope > 0.0)) {
    throw NumericalFailure("fit_exponential_law: accepted fit with nonpositive i1");
  }
  return fit;
}

AsymptoticFit fit_exponential_law(const GapCurve& curve) {
  std::vector<double> eps;
  std::vector<double> gap;
  for (const auto& g : curve.samples) {
    eps.push_back(g.eps);
    gap.push_back(g.gap);
  }
  return fit_exponential_law(eps, gap);
}

EdgeProfile edge_profile_from_field(const AxisymGrid& grid, double R, const std::function<double(int, int)>& u,
                                    const EdgeOptions& options) {
  if (options.first_node < 1 || options.node_count < 5) {
    throw InvalidInput("edge fit needs first_node >= 1 and at least five radii");
  }
  if (options.first_node + options.node_count - 1 > grid.grading_rings) {
    throw InvalidInput("edge fit radii must stay inside the graded region (" + std::to_string(grid.grading_rings) +
                       " rings)");
  }
  const int i = grid.window_index;
  const double sin_half = std::sin(kPi / 4.0);  // theta = pi/2
  EdgeProfile p;
  std::vector<double> log_r;
  std::vector<double> log_u;
  std::vector<double> sqrt_r;
  for (int k = 0; k < options.node_count; ++k) {
    const int j = grid.plane_index + options.first_node + k;
    const double r = grid.z[j];
    const double val = u(i, j);
    p.r.push_back(r);
    p.amplitude.push_back(val / (std::sqrt(r) * sin_half));
    log_r.push_back(std::log(r));
    log_u.push_back(std::log(std::abs(val)));
    sqrt_r.push_back(std::sqrt(r));
  }
  p.exponent = least_squares(log_r, log_u).slope;
  p.l = least_squares(sqrt_r, p.amplitude).intercept;
  // Axisymmetric field: the amplitude is the same at every boundary point.
  const int ns = 16;
  for (int k = 0; k < ns; ++k) {
    p.s.push_back(2.0 * kPi * R * k / ns);
    p.l_of_s.push_back(p.l);
  }
  p.l_variation = 0.0;
  return p;
}

EdgeProfile edge_amplitude(const BoundState& state, const WindowShape& shape, const DilationProfile& beta,
                           const EdgeOptions& options) {
  if (!state.grid) throw InvalidInput("edge_amplitude: state carries no grid");
  if (state.m != 0) throw InvalidInput("edge_amplitude: only m = 0 states have a constant edge amplitude");
  if (!shape.is_circle() || std::abs(shape.radius(0.0) - state.config.R) > 1e-12 * state.config.R) {
    throw InvalidInput("edge_amplitude: shape must be the circular window the state was solved on");
  }
  const AxisymGrid& g = *state.grid;
  const double R = state.config.R;
  const double rho_star = options.rho_star > 0.0 ? options.rho_star : std::max(3.0 * R, 5.0);
  if (rho_star >= g.rho.back()) throw InvalidInput("edge_amplitude: matching radius beyond truncation");
  const auto it = std::lower_bound(g.rho.begin(), g.rho.end(), rho_star);
  int is = static_cast<int>(it - g.rho.begin());
  if (is > 0 && std::abs(g.rho[is - 1] - rho_star) < std::abs(g.rho[is] - rho_star)) --is;

  // Mid-layer sin z amplitude at rho*, projected with the cell widths.
  double num = 0.0;
  double den = 0.0;
  for (int j = g.plane_index + 1; j + 1 < static_cast<int>(g.z.size()); ++j) {
    const double w = 0.5 * (g.z[j + 1] - g.z[j - 1]);
    const double s = std::sin(g.z[j]);
    num += g.u_at(state.eigenfunction, is, j) * s * w;
    den += s * s * w;
  }
  const double measured = num / den;
  if (!(std::abs(measured) > 0.0)) throw NumericalFailure("edge_amplitude: zero far-field amplitude");
  double amp = measured;
  if (state.config.far == FarBoundary::kDirichlet) {
    if (!(state.gap() > 0.0)) throw InvalidInput("edge_amplitude: bound state must lie below the threshold");
    const double k = std::sqrt(state.gap());
    amp = measured * (std::log(2.0 / k) - kEulerGamma) / std::cyl_bessel_k(0.0, k * g.rho[is]);
  }

  EdgeProfile p = edge_profile_from_field(
      g, R, [&](int i, int j) { return g.u_at(state.eigenfunction, i, j) / amp; }, options);
  p.normalization = amp;
  p.far_amplitude = measured;
  p.rho_star = g.rho[is];
  if (!(p.exponent >= 0.4 && p.exponent <= 0.6)) {
    throw NumericalFailure("edge_amplitude: fitted exponent " + fmt(p.exponent) +
                           " outside [0.4, 0.6]; the grid is too coarse near the edge");
  }
  const int nb = 256;
  const double s0 = perimeter(shape);
  double beta_int = 0.0;
  for (int k = 0; k < nb; ++k) beta_int += beta(s0 * k / nb, s0) * s0 / nb;
  p.i1_direct = beta_int * p.l * p.l / (2.0 * state.config.layers.gamma());
  p.i1_flux = p.i1_direct / kPi;
  return p;
}

BoundState threshold_resonance(const LayerPair& layers, double t, const Numerics& numerics, double pad) {
  AxisymConfig c;
  c.layers = layers;
  c.R = t;
  c.m = 0;
  c.L = numerics.L > 0.0 ? numerics.L : t + pad;
  c.grid = numerics.grid;
  c.far = FarBoundary::kNeumann;
  const SparseSymOp op = assemble(c, numerics.memory_cap_mb);
  const double thr = discrete_threshold(*op.grid);
  // The first Neumann radial mode above the resonance sits near
  // thr + (j_{1,1} / L)^2; stay well below it.
  const double step = std::pow(3.8317059702075125 / c.L, 2);
  const auto pairs = lowest_eigs(op, thr + 0.25 * step, numerics.max_states_per_sector, numerics.eigs);
  const EigenPair* best = nullptr;
  for (const auto& p : pairs) {
    if (std::abs(p.value - thr) < 0.25 * step && (!best || std::abs(p.value - thr) < std::abs(best->value - thr))) {
      best = &p;
    }
  }
  if (!best) {
    throw InsufficientData("threshold_resonance: no Neumann eigenvalue within " + fmt(0.25 * step) +
                           " of the threshold at t=" + fmt(t) + "; t is not a critical scale");
  }
  BoundState s;
  s.lambda = best->value;
  s.m = 0;
  s.multiplicity = 1;
  s.eigenfunction = best->vector;
  s.residual = best->residual;
  s.threshold = thr;
  s.config = c;
  s.grid = op.grid;
  return s;
}

DecayFit decay_fit(const std::vector<double>& rho, const std::vector<double>& u, double lambda) {
  if (rho.size() != u.size()) throw InvalidInput("decay_fit: size mismatch");
  if (rho.size() < 8) throw InsufficientData("decay_fit: needs at least eight radii");
  if (!(lambda < 1.0)) throw InvalidInput("decay_fit: lambda must lie below 1");
  DecayFit f;
  f.rho = rho;
  f.predicted_rate = std::sqrt(1.0 - lambda);
  if ((rho.back() - rho.front()) * f.predicted_rate < 3.0) {
    throw InsufficientData("decay_fit: fit window shorter than three decay lengths");
  }
  for (std::size_t k = 0; k < rho.size(); ++k) f.log_amplitude.push_back(std::log(std::abs(u[k]) * std::sqrt(rho[k])));
  f.rate = -least_squares(rho, f.log_amplitude).slope;
  f.relative_error = std::abs(f.rate - f.predicted_rate) / f.predicted_rate;
  return f;
}

DecayFit decay_rate(const BoundState& state) {
  if (!state.grid) throw InvalidInput("decay_rate: state carries no grid");
  if (!(1.0 - state.lambda > 1e-6)) throw InvalidInput("decay_rate: gap must exceed 1e-6");
  const AxisymGrid& g = *state.grid;
  const double R = state.config.R;
  const double L = g.rho.back();
  // z = pi/2 by linear interpolation between the neighbouring nodes.
  const auto zt = std::lower_bound(g.z.begin(), g.z.end(), kPi / 2.0);
  const int jb = static_cast<int>(zt - g.z.begin());
  const int ja = jb - 1;
  const double wb = (kPi / 2.0 - g.z[ja]) / (g.z[jb] - g.z[ja]);
  std::vector<double> rho;
  std::vector<double> u;
  double first = 0.0;
  for (int i = 0; i < static_cast<int>(g.rho.size()); ++i) {
    if (g.rho[i] < 2.0 * R || g.rho[i] > 0.8 * L) continue;
    const double v = (1.0 - wb) * g.u_at(state.eigenfunction, i, ja) + wb * g.u_at(state.eigenfunction, i, jb);
    if (rho.empty()) first = std::abs(v);
    // Stop before the trace reaches the eigenvector's roundoff floor.
    if (std::abs(v) < 1e-7 * first) break;
    rho.push_back(g.rho[i]);
    u.push_back(v);
  }
  return decay_fit(rho, u, state.lambda);
}

MonotonicityReport monotonicity_check(const LayerPair& layers, const std::vector<double>& t_grid,
                                      const Numerics& numerics, double tolerance) {
  if (t_grid.size() < 2) throw InvalidInput("monotonicity_check: needs two or more scales");
  for (std::size_t k = 1; k < t_grid.size(); ++k)
    if (t_grid[k] < t_grid[k - 1]) throw InvalidInput("monotonicity_check: scales must be nondecreasing");
  std::vector<Spectrum> spectra(t_grid.size());
  detail::parallel_for(static_cast<int>(t_grid.size()), numerics.threads,
                       [&](int k) { spectra[k] = solve_all(layers, t_grid[k], numerics); });
  MonotonicityReport rep;
  rep.tolerance = tolerance;
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    MonotonicityPoint p;
    p.t = t_grid[k];
    p.lambdas = spectra[k].values_with_multiplicity();
    p.count = spectra[k].min_count();
    p.max_count = spectra[k].max_count();
    rep.points.push_back(std::move(p));
  }
  rep.lambda1_strictly_decreasing = true;
  for (std::size_t k = 1; k < rep.points.size(); ++k) {
    const auto& a = rep.points[k - 1];
    const auto& b = rep.points[k];
    const std::size_t common = std::min(a.lambdas.size(), b.lambdas.size());
    for (std::size_t i = 0; i < common; ++i) {
      if (b.lambdas[i] > a.lambdas[i] + tolerance) {
        rep.violations.push_back("lambda_" + std::to_string(i + 1) + " increases from " + fmt(a.lambdas[i]) +
                                 " at t=" + fmt(a.t) + " to " + fmt(b.lambdas[i]) + " at t=" + fmt(b.t));
      }
    }
    if (a.lambdas.empty() || b.lambdas.empty() || !(b.lambdas[0] < a.lambdas[0] - tolerance) || !(b.t > a.t)) {
      rep.lambda1_strictly_decreasing = false;
    }
    if (b.count < a.count) {
      rep.violations.push_back("count decreases from " + std::to_string(a.count) + " at t=" + fmt(a.t) + " to " +
                               std::to_string(b.count) + " at t=" + fmt(b.t));
    } else if (b.count > a.count) {
      std::string who;
      for (const auto& sb : spectra[k].sectors) {
        int before = 0;
        for (const auto& sa : spectra[k - 1].sectors)
          if (sa.m == sb.m) before = sa.guaranteed;
        if (sb.guaranteed > before) {
          who += " m=" + std::to_string(sb.m) + " (+" + std::to_string((sb.guaranteed - before) * sb.multiplicity()) +
                 ")";
        }
      }
      rep.emergences.push_back("t=" + fmt(a.t) + " -> " + fmt(b.t) + ": count " + std::to_string(a.count) + " -> " +
                               std::to_string(b.count) + " from" + who);
    }
  }
  return rep;
}

}  // namespace winlayer
