// Copyright 2026 The winlayer Authors
// SPDX-License-Identifier: Apache-2.0

#include "winlayer/layer_solver.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "winlayer/error.hpp"

namespace winlayer {
namespace {

constexpr double kPi = std::numbers::pi;

// Appends nodes from `start` (exclusive) to `end` (inclusive) with steps
// growing by `growth` from `step` up to `cap`.  The final step is stretched
// or shrunk by at most a third so that `end` is hit exactly.
void march(std::vector<double>& nodes, double start, double end, double step, double growth, double cap) {
  double pos = start;
  while (true) {
    const double next = pos + step;
    if (next >= end - step / 3.0) {
      nodes.push_back(end);
      return;
    }
    nodes.push_back(next);
    pos = next;
    step = std::min(cap, step * growth);
  }
}

// Steps leaving the window edge, smallest first.  The first step is
// h q^rings; each later one grows by at most 1/q and tracks the envelope
// h (r / extent)^power, r being the distance already covered, until it
// reaches h.  A power above 1/2 keeps the eigenvalue error of the
// sqrt(r) edge field at O(h^2); a purely geometric grading of fixed ring
// count leaves an O(h) term from the rings at distance ~h.
std::vector<double> edge_steps(double h, double extent, const GridSpec& g) {
  std::vector<double> steps;
  double step = h * std::pow(g.grading_ratio, g.grading_rings);
  double pos = 0.0;
  while (step < h) {
    steps.push_back(step);
    pos += step;
    const double target = h * std::pow(std::min(1.0, pos / extent), g.grading_power);
    step = std::min({h, step / g.grading_ratio, std::max(step, target)});
  }
  return steps;
}

// Nodes of [0, span] graded toward 0 and uniform (step <= h) beyond.
std::vector<double> graded_interval(double span, double h, const GridSpec& g, double extent) {
  std::vector<double> nodes{0.0};
  double pos = 0.0;
  for (double s : edge_steps(h, extent, g)) {
    pos += s;
    nodes.push_back(pos);
  }
  const double rest = span - pos;
  const int n = std::max(1, static_cast<int>(std::ceil(rest / h - 1e-9)));
  for (int k = 1; k < n; ++k) nodes.push_back(pos + rest * k / n);
  nodes.push_back(span);
  return nodes;
}

std::vector<double> build_rho_grid(double R, double L, const GridSpec& g, int& window_index) {
  const double hn = std::min(g.h_rho, R / 4.0);
  const std::vector<double> steps = edge_steps(hn, std::min(g.grading_extent, R / 2.0), g);
  double graded = 0.0;
  for (double s : steps) graded += s;

  std::vector<double> left;  // descending from R
  double pos = R;
  for (double s : steps) {
    pos -= s;
    left.push_back(pos);
  }
  const int n = std::max(1, static_cast<int>(std::ceil(pos / hn - 1e-9)));
  const double uniform = pos / n;
  std::vector<double> rho{0.0};
  for (int k = 1; k < n; ++k) rho.push_back(uniform * k);
  for (auto it = left.rbegin(); it != left.rend(); ++it) rho.push_back(*it);
  window_index = static_cast<int>(rho.size());
  rho.push_back(R);

  pos = R;
  for (double s : steps) {
    pos += s;
    rho.push_back(pos);
  }
  double step = hn;
  while (step < g.h_rho) {
    pos += step;
    rho.push_back(pos);
    step *= g.growth;
  }
  step = g.h_rho;
  const double uniform_end = std::min(L, R + std::max(g.far_pad, graded + step));
  if (uniform_end - pos > step) {
    const int nu = static_cast<int>(std::ceil((uniform_end - pos) / step - 1e-9));
    const double su = (uniform_end - pos) / nu;
    for (int k = 1; k <= nu; ++k) rho.push_back(pos + su * k);
    pos = uniform_end;
    step = su;
  }
  if (L - pos < step / 2.0) {
    rho.back() = L;
  } else {
    march(rho, pos, L, step * g.growth, g.growth, std::max(g.max_step, g.h_rho));
  }
  return rho;
}

std::vector<double> build_z_grid(const AxisymConfig& c, int& plane_index, int& graded) {
  const GridSpec& g = c.grid;
  const double h_edge = std::min(g.h_z, c.R / 4.0);
  // The upper layer is graded as the lower one when d = pi, so the
  // symmetric grid mirrors exactly.
  const double extent = std::min({g.grading_extent, c.R / 2.0, c.layers.d() / 2.0});
  const std::vector<double> upper = graded_interval(kPi, h_edge, g, extent);
  graded = static_cast<int>(edge_steps(h_edge, extent, g).size());
  std::vector<double> z;
  if (c.parity == ParityMode::kEvenHalfDomain) {
    plane_index = 0;
    return upper;
  }
  const std::vector<double> lower =
      c.layers.symmetric() ? upper : graded_interval(c.layers.d(), std::min(h_edge, c.layers.d() / 8.0), g, extent);
  for (auto it = lower.rbegin(); it != lower.rend(); ++it) z.push_back(-*it);
  plane_index = static_cast<int>(z.size()) - 1;
  for (std::size_t k = 1; k < upper.size(); ++k) z.push_back(upper[k]);
  return z;
}

struct Edge {
  int p;
  int q;
  double c;
};

}  // namespace

std::string to_string(ParityMode mode) {
  return mode == ParityMode::kFullTwoLayer ? "full-two-layer" : "even-half-domain";
}

std::string to_string(FarBoundary bc) { return bc == FarBoundary::kDirichlet ? "dirichlet" : "neumann"; }

void validate(const AxisymConfig& c) {
  const GridSpec& g = c.grid;
  if (!(c.R > 0.0)) throw InvalidInput("window radius R must be positive");
  if (c.m < 0) throw InvalidInput("angular sector m must be nonnegative");
  if (!(c.L > 3.0 * c.R)) throw InvalidInput("truncation L must exceed 3R");
  if (!(g.h_rho > 0.0) || !(g.h_z > 0.0)) throw InvalidInput("grid steps must be positive");
  if (!(g.grading_ratio > 0.0 && g.grading_ratio < 1.0)) throw InvalidInput("grading ratio must lie in (0,1)");
  if (g.grading_rings < 0) throw InvalidInput("grading ring count must be nonnegative");
  if (!(g.grading_power > 0.5 && g.grading_power <= 1.0)) throw InvalidInput("grading power must lie in (1/2, 1]");
  if (!(g.grading_extent > 0.0)) throw InvalidInput("grading extent must be positive");
  if (!(g.growth >= 1.0 && g.growth <= 1.5)) throw InvalidInput("far-grid growth must lie in [1, 1.5]");
  if (!(g.max_step > 0.0) || !(g.far_pad >= 0.0)) throw InvalidInput("far-grid parameters must be positive");
  if (g.h_z > 0.5) throw InvalidInput("h_z must not exceed 0.5");
  if (c.parity == ParityMode::kEvenHalfDomain && !c.layers.symmetric()) {
    throw InvalidInput("even half-domain reduction requires d = pi");
  }
}

double AxisymGrid::u_at(const Eigen::VectorXd& w, int i, int j) const {
  const int k = unknown(i, j);
  return k < 0 ? 0.0 : w[k] / std::sqrt(mass[k]);
}

double memory_estimate_mb(const AxisymConfig& config) {
  validate(config);
  int wi = 0;
  int pi = 0;
  const std::size_t nr = build_rho_grid(config.R, config.L, config.grid, wi).size();
  int graded = 0;
  const std::size_t nz = build_z_grid(config, pi, graded).size();
  const double n = static_cast<double>(nr * nz);
  // Nested-dissection-like fill of a 2D five-point operator plus a Lanczos
  // basis of 100 vectors.
  const double fill = 10.0 * n * std::max(1.0, std::log2(n));
  return (12.0 * fill + 8.0 * 110.0 * n + 120.0 * n) / (1024.0 * 1024.0);
}

SparseSymOp assemble(const AxisymConfig& config, double memory_cap_mb) {
  validate(config);
  const double estimate = memory_estimate_mb(config);
  if (estimate > memory_cap_mb) {
    throw InvalidInput("discretization needs about " + std::to_string(estimate) + " MiB, cap is " +
                       std::to_string(memory_cap_mb) + " MiB");
  }
  auto grid = std::make_shared<AxisymGrid>();
  grid->rho = build_rho_grid(config.R, config.L, config.grid, grid->window_index);
  grid->z = build_z_grid(config, grid->plane_index, grid->grading_rings);
  const auto& rho = grid->rho;
  const auto& z = grid->z;
  const int nr = static_cast<int>(rho.size());
  const int nz = static_cast<int>(z.size());
  const bool half = config.parity == ParityMode::kEvenHalfDomain;
  const bool neumann_far = config.far == FarBoundary::kNeumann;
  const double m2 = static_cast<double>(config.m) * config.m;

  // Dual cells: rho-weighted cross-section area and z half-widths.
  std::vector<double> face(nr + 1, 0.0);  // face[i] = rho_{i-1/2}
  for (int i = 1; i < nr; ++i) face[i] = 0.5 * (rho[i - 1] + rho[i]);
  face[nr] = rho[nr - 1];
  std::vector<double> area(nr), width(nr);
  for (int i = 0; i < nr; ++i) {
    area[i] = 0.5 * (face[i + 1] * face[i + 1] - face[i] * face[i]);
    width[i] = face[i + 1] - face[i];
  }
  std::vector<double> dz(nz, 0.0);
  for (int j = 0; j < nz; ++j) {
    const double lo = j > 0 ? z[j - 1] : z[j];
    const double hi = j + 1 < nz ? z[j + 1] : z[j];
    dz[j] = 0.5 * (hi - lo);
  }

  grid->index.assign(static_cast<std::size_t>(nr) * nz, -1);
  int n = 0;
  for (int i = 0; i < nr; ++i) {
    if (i == 0 && config.m > 0) continue;
    if (i == nr - 1 && !neumann_far) continue;
    for (int j = 0; j < nz; ++j) {
      if (j == nz - 1) continue;                 // z = pi
      if (!half && j == 0) continue;             // z = -d
      if (j == grid->plane_index && i >= grid->window_index) continue;  // screen
      grid->index[static_cast<std::size_t>(i) * nz + j] = n++;
      grid->node_i.push_back(i);
      grid->node_j.push_back(j);
      grid->mass.push_back(area[i] * dz[j]);
    }
  }

  std::vector<double> diag(n, 0.0);
  std::vector<Edge> edges;
  edges.reserve(2 * static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const int i = grid->node_i[k];
    if (i > 0) diag[k] += m2 * width[i] / rho[i] * dz[grid->node_j[k]];
  }
  auto link = [&](int p, int q, double c) {
    if (p >= 0) diag[p] += c;
    if (q >= 0) diag[q] += c;
    if (p >= 0 && q >= 0) edges.push_back({p, q, c});
  };
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < nz; ++j) {
      const int p = grid->unknown(i, j);
      if (i + 1 < nr) {
        const int q = grid->unknown(i + 1, j);
        if (p >= 0 || q >= 0) link(p, q, face[i + 1] / (rho[i + 1] - rho[i]) * dz[j]);
      }
      if (j + 1 < nz) {
        const int q = grid->unknown(i, j + 1);
        if (p >= 0 || q >= 0) link(p, q, area[i] / (z[j + 1] - z[j]));
      }
    }
  }

  std::vector<double> scale(n);
  for (int k = 0; k < n; ++k) scale[k] = 1.0 / std::sqrt(grid->mass[k]);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(n + 2 * edges.size());
  for (int k = 0; k < n; ++k) trip.emplace_back(k, k, diag[k] * (scale[k] * scale[k]));
  for (const Edge& e : edges) {
    const double v = -e.c * (scale[e.p] * scale[e.q]);
    trip.emplace_back(e.p, e.q, v);
    trip.emplace_back(e.q, e.p, v);
  }
  SparseSymOp op;
  op.a.resize(n, n);
  op.a.setFromTriplets(trip.begin(), trip.end());
  op.a.makeCompressed();
  op.grid = std::move(grid);
  op.config = config;
  return op;
}

double discrete_threshold(const AxisymGrid& grid) {
  // Transverse operator of either layer on its interior z-nodes; the
  // continuum starts at the lower of the two.
  auto lowest = [&](int first, int last) {
    const int n = last - first + 1;
    if (n < 1) return 1e300;
    Eigen::VectorXd d(n);
    Eigen::VectorXd e(std::max(0, n - 1));
    for (int k = 0; k < n; ++k) {
      const int j = first + k;
      const double hl = grid.z[j] - grid.z[j - 1];
      const double hr = grid.z[j + 1] - grid.z[j];
      const double w = 0.5 * (hl + hr);
      d[k] = (1.0 / hl + 1.0 / hr) / w;
      if (k + 1 < n) {
        const double w2 = 0.5 * (grid.z[j + 2] - grid.z[j]);
        e[k] = -1.0 / hr / std::sqrt(w * w2);
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
    return es.eigenvalues()[0];
  };
  const int nz = static_cast<int>(grid.z.size());
  const double upper = lowest(grid.plane_index + 1, nz - 2);
  const double lower = grid.plane_index > 0 ? lowest(1, grid.plane_index - 1) : 1e300;
  return std::min(upper, lower);
}

std::vector<EigenPair> lowest_eigs(const SparseSymOp& op, double below, int k_max, const EigsOptions& options) {
  return lowest_eigs(op.a, below, k_max, options, nullptr);
}

namespace {

AxisymConfig sector_config(const LayerPair& layers, double R, int m, double L, const Numerics& nu, ParityMode parity,
                           FarBoundary far) {
  AxisymConfig c;
  c.layers = layers;
  c.R = R;
  c.m = m;
  c.L = L;
  c.grid = nu.grid;
  // Far steps scale with the truncation so the point count stays bounded
  // while every decay length keeps several nodes.
  c.grid.max_step = std::max(nu.grid.max_step, 0.4 * (L - R) / nu.decay_lengths);
  c.parity = parity;
  c.far = far;
  return c;
}

struct SolvedOp {
  std::vector<EigenPair> pairs;
  double threshold = 1.0;
  std::shared_ptr<const AxisymGrid> grid;
  AxisymConfig config;
};

SolvedOp solve_op(const AxisymConfig& c, const Numerics& nu) {
  const SparseSymOp op = assemble(c, nu.memory_cap_mb);
  SolvedOp out;
  out.threshold = discrete_threshold(*op.grid);
  out.pairs = lowest_eigs(op, out.threshold - nu.near_threshold_margin, nu.max_states_per_sector, nu.eigs);
  out.grid = op.grid;
  out.config = c;
  return out;
}

}  // namespace

SectorResult solve_sector(const LayerPair& layers, double R, int m, const Numerics& nu, ParityMode parity) {
  if (!(R > 0.0)) throw InvalidInput("solve_sector: R must be positive");
  if (m < 0) throw InvalidInput("solve_sector: m must be nonnegative");
  const bool fixed = nu.L > 0.0;
  double pad = fixed ? nu.L - R : nu.initial_pad;
  SolvedOp dir;
  SolvedOp neu;
  for (int iter = 0;; ++iter) {
    dir = solve_op(sector_config(layers, R, m, R + pad, nu, parity, FarBoundary::kDirichlet), nu);
    if (nu.neumann_companion) {
      neu = solve_op(sector_config(layers, R, m, R + pad, nu, parity, FarBoundary::kNeumann), nu);
    }
    if (fixed || pad >= nu.max_pad || iter >= 8) break;
    // Shallowest state that must be resolved: the last Dirichlet one, or a
    // Neumann-only state (whose gap bounds the true gap from above).
    double gap = 0.0;
    if (nu.neumann_companion && neu.pairs.size() > dir.pairs.size()) {
      gap = neu.threshold - neu.pairs.back().value;
    } else if (!dir.pairs.empty()) {
      gap = dir.threshold - dir.pairs.back().value;
    } else if (m == 0) {
      gap = 0.0;  // the ground state exists; look further out
    } else {
      break;
    }
    const double needed = gap > 0.0 ? nu.decay_lengths / std::sqrt(gap) : 4.0 * pad;
    if (needed <= pad * (1.0 + 1e-9)) break;
    pad = std::min(nu.max_pad, std::max(needed, 1.5 * pad));
  }

  SectorResult out;
  out.m = m;
  out.L = R + pad;
  out.threshold = dir.threshold;
  for (const EigenPair& p : dir.pairs) {
    BoundState s;
    s.lambda = p.value;
    s.m = m;
    s.multiplicity = m == 0 ? 1 : 2;
    s.eigenfunction = p.vector;
    s.residual = p.residual;
    s.threshold = dir.threshold;
    s.config = dir.config;
    s.grid = dir.grid;
    if (s.residual > 1e-9 * std::max(1.0, std::abs(s.lambda))) {
      throw NumericalFailure("solve_sector: residual " + std::to_string(s.residual) + " above 1e-9");
    }
    out.states.push_back(std::move(s));
  }
  if (nu.neumann_companion) {
    for (const EigenPair& p : neu.pairs) out.neumann_values.push_back(p.value);
    if (out.neumann_values.size() < out.states.size()) {
      throw NumericalFailure("solve_sector: Neumann truncation found fewer states than Dirichlet truncation");
    }
    for (std::size_t k = out.states.size(); k < out.neumann_values.size(); ++k)
      out.unresolved.push_back(out.neumann_values[k]);
  }
  out.guaranteed = static_cast<int>(out.states.size());
  if (m == 0) out.guaranteed = std::max(out.guaranteed, 1);
  out.possible = nu.neumann_companion ? static_cast<int>(out.neumann_values.size()) : out.guaranteed;
  out.possible = std::max(out.possible, out.guaranteed);

  if (nu.verify_truncation && !out.states.empty()) {
    const double L2 = R + 1.5 * pad;
    SolvedOp check = solve_op(sector_config(layers, R, m, L2, nu, parity, FarBoundary::kDirichlet), nu);
    double shift = 0.0;
    bool same = check.pairs.size() >= out.states.size();
    for (std::size_t k = 0; k < out.states.size() && same; ++k)
      shift = std::max(shift, std::abs(check.pairs[k].value - out.states[k].lambda));
    out.truncation_shift = same ? shift : 1.0;
    out.truncation_verified = same && shift < nu.truncation_tol;
  }
  return out;
}

int Spectrum::resolved_count() const {
  int n = 0;
  for (const auto& s : states) n += s.multiplicity;
  return n;
}

int Spectrum::min_count() const {
  int n = 0;
  for (const auto& s : sectors) n += s.guaranteed * s.multiplicity();
  return n;
}

int Spectrum::max_count() const {
  int n = 0;
  for (const auto& s : sectors) n += s.possible * s.multiplicity();
  return n;
}

std::vector<double> Spectrum::values_with_multiplicity() const {
  std::vector<double> v;
  for (const auto& s : states)
    for (int k = 0; k < s.multiplicity; ++k) v.push_back(s.lambda);
  return v;
}

Spectrum solve_all(const LayerPair& layers, double R, const Numerics& nu, ParityMode parity) {
  Spectrum out;
  double previous_min = -1.0;
  for (int m = 0; m < nu.max_sectors; ++m) {
    SectorResult sector = solve_sector(layers, R, m, nu, parity);
    const bool empty = sector.possible == 0;
    if (!sector.states.empty()) {
      const double lowest = sector.states.front().lambda;
      if (m >= 2 && lowest < previous_min - 1e-10) {
        throw NumericalFailure("sector monotonicity violated: m=" + std::to_string(m) + " minimum " +
                               std::to_string(lowest) + " below m=" + std::to_string(m - 1) + " minimum " +
                               std::to_string(previous_min));
      }
      previous_min = lowest;
    } else if (m >= 1) {
      previous_min = 2.0;  // every later sector must be empty too
    }
    for (const auto& s : sector.states) out.states.push_back(s);
    out.sectors.push_back(std::move(sector));
    if (empty) break;
    if (m + 1 == nu.max_sectors) throw NumericalFailure("solve_all: sector limit reached before an empty sector");
  }
  std::stable_sort(out.states.begin(), out.states.end(),
                   [](const BoundState& a, const BoundState& b) { return a.lambda < b.lambda; });
  return out;
}

Spectrum half_domain_solve(double R, const Numerics& nu) {
  return solve_all(LayerPair(kPi), R, nu, ParityMode::kEvenHalfDomain);
}

namespace {

void fit_levels(RefineStudy& study) {
  std::size_t count = study.levels.front().lambdas.size();
  for (const auto& lv : study.levels) count = std::min(count, lv.lambdas.size());
  const std::size_t n = study.levels.size();
  const RefineLevel& a = study.levels[n - 3];
  const RefineLevel& b = study.levels[n - 2];
  const RefineLevel& c = study.levels[n - 1];
  for (std::size_t k = 0; k < count; ++k) {
    const double d1 = a.lambdas[k] - b.lambdas[k];
    const double d2 = b.lambdas[k] - c.lambdas[k];
    const bool settling = d1 * d2 > 0.0 && std::abs(d2) < std::abs(d1);
    double order = std::nan("");
    double extrap = c.lambdas[k];
    double err = std::abs(d2);
    if (settling) {
      order = std::log(std::abs(d1 / d2)) / std::log(b.h / c.h);
      const double r = std::pow(b.h / c.h, order);
      extrap = c.lambdas[k] - d2 / (r - 1.0);
      err = std::abs(c.lambdas[k] - extrap);
    }
    study.observed_order.push_back(order);
    study.extrapolated.push_back(extrap);
    study.error_estimate.push_back(err);
    study.settling.push_back(settling);
  }
}

void check_ladder(const std::vector<double>& ladder) {
  if (ladder.size() < 3) throw InvalidInput("refine_study needs at least three grid levels");
  for (std::size_t k = 1; k < ladder.size(); ++k)
    if (!(ladder[k] < ladder[k - 1])) throw InvalidInput("refine_study ladder must be strictly decreasing");
}

}  // namespace

RefineStudy refine_study(const LayerPair& layers, double R, int m, const std::vector<double>& ladder,
                         const Numerics& numerics) {
  check_ladder(ladder);
  Numerics nu = numerics;
  nu.neumann_companion = false;
  RefineStudy study;
  if (nu.L <= 0.0) {
    Numerics coarse = nu;
    coarse.grid.h_rho = coarse.grid.h_z = ladder.front();
    nu.L = solve_sector(layers, R, m, coarse, ParityMode::kFullTwoLayer).L;
  }
  study.L = nu.L;
  const int base_rings = nu.grid.grading_rings;
  for (double h : ladder) {
    Numerics level = nu;
    level.grid.h_rho = level.grid.h_z = h;
    // The edge step h q^rings shrinks like h^2 along the ladder, so the
    // unresolved part of the sqrt(r) field does not leave an O(h) term.
    level.grid.grading_rings =
        base_rings + static_cast<int>(std::lround(std::log(h / ladder.front()) / std::log(nu.grid.grading_ratio)));
    const SectorResult s = solve_sector(layers, R, m, level, ParityMode::kFullTwoLayer);
    RefineLevel lv;
    lv.h = h;
    lv.grading_rings = level.grid.grading_rings;
    lv.threshold = s.threshold;
    for (const auto& st : s.states) lv.lambdas.push_back(st.lambda);
    study.levels.push_back(std::move(lv));
  }
  fit_levels(study);
  return study;
}

RefineStudy rectangle_refine_study(double a, double b, const std::vector<double>& ladder) {
  check_ladder(ladder);
  if (!(a > 0.0 && b > 0.0)) throw InvalidInput("rectangle sides must be positive");
  RefineStudy study;
  for (double h : ladder) {
    const int nx = std::max(2, static_cast<int>(std::lround(a / h)));
    const int ny = std::max(2, static_cast<int>(std::lround(b / h)));
    const double hx = a / nx;
    const double hy = b / ny;
    const int n = (nx - 1) * (ny - 1);
    auto id = [&](int i, int j) { return (i - 1) * (ny - 1) + (j - 1); };
    std::vector<Eigen::Triplet<double>> t;
    for (int i = 1; i < nx; ++i) {
      for (int j = 1; j < ny; ++j) {
        const int p = id(i, j);
        t.emplace_back(p, p, 2.0 / (hx * hx) + 2.0 / (hy * hy));
        if (i + 1 < nx) {
          t.emplace_back(p, id(i + 1, j), -1.0 / (hx * hx));
          t.emplace_back(id(i + 1, j), p, -1.0 / (hx * hx));
        }
        if (j + 1 < ny) {
          t.emplace_back(p, id(i, j + 1), -1.0 / (hy * hy));
          t.emplace_back(id(i, j + 1), p, -1.0 / (hy * hy));
        }
      }
    }
    SparseMatrix op(n, n);
    op.setFromTriplets(t.begin(), t.end());
    RefineLevel lv;
    lv.h = h;
    lv.threshold = 0.0;
    lv.lambdas.push_back(smallest_eigs(op, 1).front().value);
    study.levels.push_back(std::move(lv));
  }
  fit_levels(study);
  return study;
}

void write_eigenfunction_csv(const BoundState& state, std::ostream& out) {
  if (!state.grid) throw InvalidInput("eigenfunction export: state carries no grid");
  const AxisymGrid& g = *state.grid;
  out << std::setprecision(17) << "# lambda=" << state.lambda << ",m=" << state.m << ",R=" << state.config.R
      << ",d=" << state.config.layers.d() << '\n';
  out << "rho,z,u\n";
  for (std::size_t i = 0; i < g.rho.size(); ++i) {
    for (std::size_t j = 0; j < g.z.size(); ++j) {
      out << g.rho[i] << ',' << g.z[j] << ',' << g.u_at(state.eigenfunction, static_cast<int>(i), static_cast<int>(j))
          << '\n';
    }
  }
}

}  // namespace winlayer
