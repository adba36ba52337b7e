// Copyright 2026 The winlayer Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "winlayer/geometry.hpp"
#include "winlayer/layer_solver.hpp"

namespace winlayer {

inline constexpr double kEulerGamma = 0.5772156649015329;

struct EigenCount {
  double t = 0.0;
  /// Multiplicity-counted bounds; equal unless some state is too shallow
  /// to be decided by the truncation pair.
  int count = 0;
  int max_count = 0;
  bool ambiguous = false;
};

/// Number of bound states of the disk window of radius t, optionally
/// restricted to one angular sector.  Ambiguous counts are retried with a
/// larger truncation cap (`escalations` times, factor 4 each).
EigenCount eigencount(const LayerPair& layers, double t, const Numerics& numerics,
                      std::optional<int> sector = std::nullopt, int escalations = 2);

struct EmergenceReport {
  int n = 0;
  std::optional<int> sector;
  double t_n = 0.0;
  /// Final bisection bracket around t_n.
  double lower = 0.0;
  double upper = 0.0;
  double final_interval_width = 0.0;  ///< (upper - lower) / t_n
  bool converged = false;
  /// Set when some scales had undecided counts (the new state was too
  /// shallow for Dirichlet truncation).  t_n then brackets the change of
  /// the Neumann-truncation count, which is a lower bound for the count and
  /// converges quickly in L; the decided count reaches n only at
  /// `certified_upper`.
  bool undecided_band = false;
  double certified_upper = 0.0;
  std::vector<EigenCount> trace;  ///< sorted by t
};

/// Bisection on eigencount for the scale where the n-th state appears.
/// Rejects n = 1 (the ground state exists for every window) and intervals
/// whose endpoint counts do not straddle n.  A count that decreases along
/// the trace raises NumericalFailure.
EmergenceReport critical_scale(const LayerPair& layers, int n, double t_lo, double t_hi, const Numerics& numerics,
                               std::optional<int> sector = std::nullopt, double rel_tol = 1e-4);

struct GapSample {
  double eps = 0.0;
  double radius = 0.0;
  double lambda = 0.0;
  double gap = 0.0;              ///< discrete threshold minus lambda
  double truncation_spread = 0.0;  ///< Dirichlet minus Neumann truncation value
  bool resolved = false;
};

struct GapCurve {
  std::vector<GapSample> samples;  ///< resolved points, eps decreasing
  std::vector<GapSample> dropped;  ///< unresolvable points
  double t_n = 0.0;
  int n = 0;
  std::optional<int> sector;
};

/// n-th eigenvalue (within `sector` if given) of the dilated disk
/// t_n + eps * beta for each eps.  Only constant beta keeps the window
/// circular; anything else is rejected.  Points whose gap is not ten times
/// the solver tolerance are dropped; none left raises InsufficientData.
GapCurve gap_curve(const LayerPair& layers, double t_n, int n, const DilationProfile& beta,
                   const std::vector<double>& eps_list, const Numerics& numerics,
                   std::optional<int> sector = std::nullopt);

struct AsymptoticFit {
  std::vector<double> eps;
  std::vector<double> gap;
  double slope = 0.0;
  double intercept = 0.0;
  double i1_from_slope = 0.0;
  double linearity_r2 = 0.0;
  double euler_constant = kEulerGamma;
  bool accepted = false;
  std::string rejection;
};

/// Least-squares line through (1/eps, ln gap).  Needs four points or more.
/// Accepted only with negative slope and r^2 >= 0.98.
AsymptoticFit fit_exponential_law(const std::vector<double>& eps, const std::vector<double>& gap);
AsymptoticFit fit_exponential_law(const GapCurve& curve);

struct EdgeOptions {
  /// Graded z-nodes above the edge used for the fit, counted from the edge.
  int first_node = 3;
  int node_count = 7;
  /// Matching radius for the unit sin z normalization; 0 means max(3R, 5).
  double rho_star = 0.0;
};

struct EdgeProfile {
  std::vector<double> r;
  std::vector<double> amplitude;  ///< u / (sqrt(r) sin(theta/2)) on theta = pi/2
  double exponent = 0.0;
  double l = 0.0;
  std::vector<double> s;          ///< arc-length positions of the l(s) table
  std::vector<double> l_of_s;
  double l_variation = 0.0;       ///< (max - min) / mean of l(s)
  /// (1/2 gamma) * integral beta l^2 ds.
  double i1_direct = 0.0;
  /// (1/2 pi gamma) * integral beta l^2 ds: the coefficient that the flux
  /// balance between the edge and the far-field logarithm actually produces
  /// in ln(2/k) - C = 1/(eps i1).  Equals i1_direct / pi.
  double i1_flux = 0.0;
  /// Unit far-field amplitude: the removed factor, and the sin z amplitude
  /// measured at rho_star before the logarithmic correction.
  double normalization = 1.0;
  double far_amplitude = 0.0;
  double rho_star = 0.0;
};

/// Edge fit on an arbitrary nodal field u(i, j) of `grid` (window radius R,
/// no normalization).  Used directly by tests with injected fields.
EdgeProfile edge_profile_from_field(const AxisymGrid& grid, double R, const std::function<double(int, int)>& u,
                                    const EdgeOptions& options = {});

/// Edge amplitude of an m = 0 state, normalized to unit far-field sin z
/// amplitude.  A Dirichlet-truncated bound state with k = sqrt(gap) carries
/// the far profile K0(k rho) sin z, whose inner limit is ln(2/k) - C; the
/// amplitude measured at rho_star is rescaled by (ln(2/k) - C) / K0(k rho*)
/// so the result does not depend on rho_star.  A Neumann-truncated state
/// (see threshold_resonance) is flat and used as measured.
/// Rejects exponents outside [0.4, 0.6].
EdgeProfile edge_amplitude(const BoundState& state, const WindowShape& shape, const DilationProfile& beta,
                           const EdgeOptions& options = {});

/// The bounded threshold solution of the m = 0 sector at scale t (near a
/// critical scale): the eigenvector of the Neumann-truncated problem whose
/// eigenvalue lies within a quarter of the first radial continuum step of
/// the discrete threshold.  Its far field is flat, sin z + O(rho^-2), so
/// the edge amplitude needs no logarithmic correction.  Throws
/// InsufficientData when no such eigenvalue exists (t is not critical).
BoundState threshold_resonance(const LayerPair& layers, double t, const Numerics& numerics, double pad = 2000.0);

struct DecayFit {
  std::vector<double> rho;
  std::vector<double> log_amplitude;  ///< ln(|u| sqrt(rho)) at z = pi/2
  double rate = 0.0;
  double predicted_rate = 0.0;  ///< sqrt(1 - lambda)
  double relative_error = 0.0;
};

/// Far-field fit on samples (rho, u) of the mid-layer trace.  Needs at
/// least eight radii spanning three decay lengths.
DecayFit decay_fit(const std::vector<double>& rho, const std::vector<double>& u, double lambda);

/// Mid-layer trace of a state over rho in [2R, 0.8L], cut where the
/// amplitude falls below roundoff-safe levels.
DecayFit decay_rate(const BoundState& state);

struct MonotonicityPoint {
  double t = 0.0;
  std::vector<double> lambdas;  ///< with multiplicity, ascending
  int count = 0;
  int max_count = 0;
};

struct MonotonicityReport {
  std::vector<MonotonicityPoint> points;
  /// (index, t_k, t_k+1) of every increase beyond tolerance.
  std::vector<std::string> violations;
  /// Count increments between consecutive t and the multiplicities that explain them.
  std::vector<std::string> emergences;
  bool lambda1_strictly_decreasing = false;
  double tolerance = 0.0;
  bool passed() const { return violations.empty(); }
};

/// Solves every t of an increasing grid and checks lambda_i(t) is
/// nonincreasing within `tolerance`.
MonotonicityReport monotonicity_check(const LayerPair& layers, const std::vector<double>& t_grid,
                                      const Numerics& numerics, double tolerance = 1e-8);

}  // namespace winlayer
