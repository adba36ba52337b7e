// Copyright 2026 The winlayer Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace winlayer {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

/// Signature of A - shift * M from an LDL^T factorization (Sylvester's law).
struct Inertia {
  int negative = 0;
  int zero = 0;
  int positive = 0;
};

/// Factorizes A - sigma * M for a sequence of shifts, reusing the symbolic
/// analysis.  M may be null (identity).  A and M must be symmetric.
class ShiftedSolver {
 public:
  ShiftedSolver(const SparseMatrix& a, const SparseMatrix* m);
  ~ShiftedSolver();
  ShiftedSolver(const ShiftedSolver&) = delete;
  ShiftedSolver& operator=(const ShiftedSolver&) = delete;

  /// Factorizes at `sigma`.  Throws NumericalFailure if the factorization
  /// breaks down (zero or numerically negligible pivot).
  void factorize(double sigma);
  double shift() const { return sigma_; }
  /// Negative/zero/positive pivot counts of the current factorization.
  Inertia inertia() const;
  /// x = (A - sigma M)^{-1} b.
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

  Eigen::VectorXd apply_a(const Eigen::VectorXd& x) const;
  Eigen::VectorXd apply_m(const Eigen::VectorXd& x) const;
  int dimension() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  double sigma_ = 0.0;
};

/// Inertia of A - shift * M; retries with a perturbed shift on breakdown.
Inertia inertia(const SparseMatrix& a, double shift, const SparseMatrix* m = nullptr);

struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;  ///< normalized, ||v|| = 1 (M-norm when M given)
  /// ||A v - value M v|| / ||M v||.
  double residual = 0.0;
};

struct EigsOptions {
  int max_basis = 80;
  int max_restarts = 12;
  double residual_tol = 1e-9;
  std::uint64_t seed = 0;
  /// Guaranteed lower bound of the spectrum (verified by inertia).
  double lower_bound = -1e-3;
  /// Widths below this (relative) are treated as one degenerate cluster.
  double cluster_tol = 1e-11;
};

/// All eigenpairs of A v = lambda M v with lambda < `below`, at most `k_max`
/// of them, in ascending order.  Spectrum slicing by inertia bisection
/// isolates each eigenvalue (or degenerate cluster), shift-invert Lanczos
/// with locking computes it, and the final count is checked against the
/// inertia at `below`.
std::vector<EigenPair> lowest_eigs(const SparseMatrix& a, double below, int k_max, const EigsOptions& options = {},
                                   const SparseMatrix* m = nullptr);

/// The `count` smallest eigenpairs of A v = lambda M v.
std::vector<EigenPair> smallest_eigs(const SparseMatrix& a, int count, const EigsOptions& options = {},
                                     const SparseMatrix* m = nullptr);

}  // namespace winlayer
