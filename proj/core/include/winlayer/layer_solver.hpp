// Copyright 2026 The winlayer Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "winlayer/bracketing.hpp"
#include "winlayer/sparse_eigs.hpp"

namespace winlayer {

enum class ParityMode { kFullTwoLayer, kEvenHalfDomain };
/// Condition on the artificial cylinder rho = L.  Dirichlet truncation
/// raises every eigenvalue, Neumann truncation lowers it, so the pair
/// brackets the untruncated discrete problem.
enum class FarBoundary { kDirichlet, kNeumann };

std::string to_string(ParityMode mode);
std::string to_string(FarBoundary bc);

/// Step targets and grading of the (rho, z) tensor grid.
struct GridSpec {
  double h_rho = 0.1;
  double h_z = 0.1;
  /// Grading toward the window edge (rho = R, z = 0).  The step next to
  /// the edge is h * ratio^rings; each following step grows by at most
  /// 1/ratio along the envelope h * (r / extent)^power until it reaches h.
  double grading_ratio = 0.7;
  int grading_rings = 12;
  double grading_extent = 1.0;
  double grading_power = 2.0 / 3.0;
  /// Uniform steps are kept up to R + far_pad, then grow geometrically.
  double far_pad = 10.0;
  double growth = 1.08;
  /// Largest step of the geometric far grid.
  double max_step = 1.0;
};

struct AxisymConfig {
  LayerPair layers{3.141592653589793};
  double R = 1.0;
  int m = 0;
  double L = 40.0;
  GridSpec grid;
  ParityMode parity = ParityMode::kFullTwoLayer;
  FarBoundary far = FarBoundary::kDirichlet;
};

/// Throws InvalidInput unless L > 3R, steps are positive, the grading ratio
/// lies in (0,1) and the even half-domain is only used for d = pi.
void validate(const AxisymConfig& config);

/// Tensor grid and unknown numbering of one discretization.
struct AxisymGrid {
  std::vector<double> rho;  ///< nodes 0 = rho_0 < ... < rho_last = L
  std::vector<double> z;    ///< nodes bottom wall ... top wall (pi)
  /// Unknown index of node (i, j) at index[i * z.size() + j], -1 if fixed.
  std::vector<int> index;
  /// Per unknown: rho/z node indices and the cell measure (rho-weighted).
  std::vector<int> node_i;
  std::vector<int> node_j;
  std::vector<double> mass;
  int window_index = 0;  ///< rho[window_index] == R
  int plane_index = 0;   ///< z[plane_index] == 0
  int grading_rings = 0;  ///< graded z-steps above the edge, before the uniform spacing

  int unknown(int i, int j) const { return index[static_cast<std::size_t>(i) * z.size() + j]; }
  /// Nodal value u from the symmetrized unknown w (w = sqrt(mass) u).
  double u_at(const Eigen::VectorXd& w, int i, int j) const;
};

/// Discrete operator A = M^{-1/2} K M^{-1/2}, where K is the flux-form
/// stiffness of -div(grad) + m^2/rho^2 in cylindrical cells and M the
/// diagonal cell measure.  On uniform interior cells this is the
/// sqrt(rho)-transformed five-point stencil up to O(h^2/rho^2).
struct SparseSymOp {
  SparseMatrix a;
  std::shared_ptr<const AxisymGrid> grid;
  AxisymConfig config;
  int dimension() const { return static_cast<int>(a.rows()); }
};

/// Rejects configs whose factorization would exceed `memory_cap_mb`.
SparseSymOp assemble(const AxisymConfig& config, double memory_cap_mb = 4096.0);

/// Rough factorization footprint of a config, in MiB.
double memory_estimate_mb(const AxisymConfig& config);

/// Lowest eigenvalue of the discrete wide-layer transverse operator on the
/// grid's z-nodes in (0, pi): the discrete continuum threshold, 1 - O(h^2).
double discrete_threshold(const AxisymGrid& grid);

/// All eigenpairs of op below `below` (at most k_max), residual <= 1e-9,
/// completeness certified by inertia.
std::vector<EigenPair> lowest_eigs(const SparseSymOp& op, double below, int k_max, const EigsOptions& options = {});

struct Numerics {
  GridSpec grid;
  /// Fixed truncation radius; 0 selects the adaptive policy below.
  double L = 0.0;
  /// First truncation is R + initial_pad.
  double initial_pad = 40.0;
  /// Required truncation R + decay_lengths / sqrt(gap) for the shallowest state.
  double decay_lengths = 14.0;
  /// Hard cap of the truncation radius beyond R.
  double max_pad = 4000.0;
  /// Re-solve at 1.5 L and require the eigenvalues to move by less than this.
  bool verify_truncation = false;
  double truncation_tol = 1e-9;
  /// Eigenvalues must lie this far below the discrete threshold to count.
  double near_threshold_margin = 1e-12;
  /// Solve the Neumann-truncated companion (count bounds, unresolved states).
  bool neumann_companion = true;
  double memory_cap_mb = 4096.0;
  int threads = 1;
  int max_states_per_sector = 64;
  int max_sectors = 64;
  EigsOptions eigs;
};

struct BoundState {
  double lambda = 0.0;
  int m = 0;
  int multiplicity = 1;
  /// Symmetrized unknown w = sqrt(mass) * u, unit Euclidean norm.
  Eigen::VectorXd eigenfunction;
  double residual = 0.0;
  /// Discrete continuum threshold of the grid the state was computed on.
  double threshold = 1.0;
  AxisymConfig config;
  std::shared_ptr<const AxisymGrid> grid;

  double gap() const { return threshold - lambda; }
};

struct SectorResult {
  int m = 0;
  /// States resolved under Dirichlet truncation (genuine, eigenvectors kept).
  std::vector<BoundState> states;
  /// Neumann-truncation eigenvalues below the threshold, ascending.  They
  /// are lower bounds for the untruncated eigenvalues, and their number is
  /// an upper bound for the sector count.
  std::vector<double> neumann_values;
  /// Entries of neumann_values beyond the resolved states: too shallow to
  /// resolve at the final L, or absent.  Reported as unresolved near-threshold.
  std::vector<double> unresolved;
  /// Number of states known to exist.  For m = 0 at least one, since the
  /// ground state exists for every window.
  int guaranteed = 0;
  /// Upper bound on the number of states in the sector.
  int possible = 0;
  double L = 0.0;
  double threshold = 1.0;
  /// True when the verification solve at 1.5 L agreed (or was not asked for).
  bool truncation_verified = true;
  double truncation_shift = 0.0;
  int multiplicity() const { return m == 0 ? 1 : 2; }
};

/// Bound states of one angular sector, ascending.
SectorResult solve_sector(const LayerPair& layers, double R, int m, const Numerics& numerics,
                          ParityMode parity = ParityMode::kFullTwoLayer);

struct Spectrum {
  std::vector<BoundState> states;  ///< ascending, one entry per (m, k); multiplicity recorded
  std::vector<SectorResult> sectors;
  /// Resolved states counted with multiplicity.
  int resolved_count() const;
  /// Multiplicity-counted lower and upper bounds on the number of states.
  int min_count() const;
  int max_count() const;
  std::vector<double> values_with_multiplicity() const;
  bool has_unresolved() const { return min_count() != resolved_count() || max_count() != resolved_count(); }
};

/// Merges sectors m = 0, 1, ... up to the first one whose Neumann
/// companion has no eigenvalue below threshold (then no higher sector has).  The lowest
/// eigenvalue of consecutive sectors m >= 1 must be nondecreasing; a
/// violation raises NumericalFailure.
Spectrum solve_all(const LayerPair& layers, double R, const Numerics& numerics,
                   ParityMode parity = ParityMode::kFullTwoLayer);

/// Even-parity reduction for d = pi: one layer with Neumann conditions on
/// the window and Dirichlet conditions on the rest of z = 0.
Spectrum half_domain_solve(double R, const Numerics& numerics);

struct RefineLevel {
  double h = 0.0;
  int grading_rings = 0;
  std::vector<double> lambdas;  ///< sector eigenvalues below threshold, ascending
  double threshold = 1.0;
};

struct RefineStudy {
  std::vector<RefineLevel> levels;
  /// Per eigenvalue index (present on every level).
  std::vector<double> observed_order;
  std::vector<double> extrapolated;
  /// |finest - extrapolated|, or the last difference when not settling.
  std::vector<double> error_estimate;
  std::vector<bool> settling;
  double L = 0.0;
};

/// Solves sector m on each step of `ladder` (h_rho = h_z = h, same L) and
/// fits successive differences.  The grading ring count grows along the
/// ladder so that the edge step scales like h^2.  Needs at least three
/// levels.
RefineStudy refine_study(const LayerPair& layers, double R, int m, const std::vector<double>& ladder,
                         const Numerics& numerics);

/// Five-point Dirichlet Laplacian on [0,a] x [0,b], lowest eigenvalue per
/// ladder level, against the closed form pi^2 (1/a^2 + 1/b^2).
RefineStudy rectangle_refine_study(double a, double b, const std::vector<double>& ladder);

/// "# lambda=...,m=...,R=...,d=..." then "rho,z,u" rows over all grid nodes.
void write_eigenfunction_csv(const BoundState& state, std::ostream& out);

}  // namespace winlayer
