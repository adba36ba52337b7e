// Copyright 2026 The winlayer Authors
// SPDX-License-Identifier: Apache-2.0

#include "winlayer/sparse_eigs.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include "winlayer/error.hpp"

namespace winlayer {

struct ShiftedSolver::Impl {
  SparseMatrix a;        // A on the union pattern of A and M
  SparseMatrix m;        // M on the same pattern (identity if none)
  SparseMatrix shifted;  // A - sigma M, same pattern
  bool has_m = false;
  double scale = 1.0;
  Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower> ldlt;
  bool analyzed = false;
};

namespace {

SparseMatrix identity(int n) {
  SparseMatrix id(n, n);
  id.setIdentity();
  return id;
}

double max_abs_diag(const SparseMatrix& a) {
  double v = 0.0;
  for (int k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it)
      if (it.row() == it.col()) v = std::max(v, std::abs(it.value()));
  return v;
}

}  // namespace

ShiftedSolver::ShiftedSolver(const SparseMatrix& a, const SparseMatrix* m) : impl_(std::make_unique<Impl>()) {
  if (a.rows() != a.cols()) throw InvalidInput("shifted solver: matrix must be square");
  const int n = static_cast<int>(a.rows());
  impl_->has_m = m != nullptr;
  const SparseMatrix mm = m ? *m : identity(n);
  if (mm.rows() != n || mm.cols() != n) throw InvalidInput("shifted solver: mass matrix size mismatch");
  // Same sparsity pattern for A, M and every shifted matrix, so the symbolic
  // analysis is done once and value arrays line up entry by entry.
  SparseMatrix pattern = (a.cwiseAbs() + mm.cwiseAbs()).pruned(0.0);
  pattern.makeCompressed();
  impl_->a = pattern;
  impl_->m = pattern;
  impl_->a.coeffs().setZero();
  impl_->m.coeffs().setZero();
  for (int k = 0; k < pattern.outerSize(); ++k) {
    SparseMatrix::InnerIterator ia(impl_->a, k);
    SparseMatrix::InnerIterator im(impl_->m, k);
    for (; ia; ++ia, ++im) {
      ia.valueRef() = a.coeff(ia.row(), ia.col());
      im.valueRef() = mm.coeff(im.row(), im.col());
    }
  }
  impl_->shifted = impl_->a;
  impl_->scale = std::max(1.0, max_abs_diag(impl_->a));
}

ShiftedSolver::~ShiftedSolver() = default;

int ShiftedSolver::dimension() const { return static_cast<int>(impl_->a.rows()); }

void ShiftedSolver::factorize(double sigma) {
  sigma_ = sigma;
  impl_->shifted.coeffs() = impl_->a.coeffs() - sigma * impl_->m.coeffs();
  if (!impl_->analyzed) {
    impl_->ldlt.analyzePattern(impl_->shifted);
    impl_->analyzed = true;
  }
  impl_->ldlt.factorize(impl_->shifted);
  if (impl_->ldlt.info() != Eigen::Success) {
    throw NumericalFailure("LDL^T factorization failed at shift " + std::to_string(sigma));
  }
  // A pivot is negligible when it sits at rounding level of its own row,
  // so the test is relative to |a_ii| + |sigma m_ii| in elimination order.
  const auto& d = impl_->ldlt.vectorD();
  const Eigen::VectorXd mags =
      impl_->ldlt.permutationP() *
      (impl_->a.diagonal().cwiseAbs() + std::abs(sigma) * impl_->m.diagonal().cwiseAbs()).eval();
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (!std::isfinite(d[i]) || std::abs(d[i]) < 1e-14 * mags[i]) {
      throw NumericalFailure("LDL^T factorization has a negligible pivot at shift " + std::to_string(sigma));
    }
  }
}

Inertia ShiftedSolver::inertia() const {
  Inertia out;
  const auto& d = impl_->ldlt.vectorD();
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (d[i] < 0.0) {
      ++out.negative;
    } else if (d[i] > 0.0) {
      ++out.positive;
    } else {
      ++out.zero;
    }
  }
  return out;
}

Eigen::VectorXd ShiftedSolver::solve(const Eigen::VectorXd& b) const { return impl_->ldlt.solve(b); }

Eigen::VectorXd ShiftedSolver::apply_a(const Eigen::VectorXd& x) const { return impl_->a * x; }

Eigen::VectorXd ShiftedSolver::apply_m(const Eigen::VectorXd& x) const {
  if (!impl_->has_m) return x;
  return impl_->m * x;
}

namespace {

// Factorize at sigma, nudging the shift on breakdown.  Returns the shift used.
double factorize_near(ShiftedSolver& solver, double sigma, double nudge) {
  double s = sigma;
  for (int attempt = 0; attempt < 6; ++attempt) {
    try {
      solver.factorize(s);
      return s;
    } catch (const NumericalFailure&) {
      s = sigma + nudge * (attempt + 1) * ((attempt % 2 == 0) ? 1.0 : -1.0);
    }
  }
  throw NumericalFailure("LDL^T factorization failed persistently near shift " + std::to_string(sigma));
}

// Negative-pivot count of A - x M.
int count_below(ShiftedSolver& solver, double x) {
  const double nudge = 1e-13 * std::max(1.0, std::abs(x));
  factorize_near(solver, x, nudge);
  return solver.inertia().negative;
}

struct Interval {
  double lo;
  double hi;
  int nlo;
  int nhi;
  int depth;
};

class SliceSolver {
 public:
  SliceSolver(const SparseMatrix& a, const SparseMatrix* m, const EigsOptions& opt)
      : solver_(a, m), opt_(opt), rng_(opt.seed) {}

  int count(double x) { return count_below(solver_, x); }

  std::vector<EigenPair> solve(double lo, double hi, int k_max) {
    upper_ = hi;
    const int nlo = count(lo);
    if (nlo != 0) throw NumericalFailure("spectrum slicing: lower bound is not below the spectrum");
    const int nhi = count(hi);
    expected_ = std::min(nhi, k_max);
    k_max_ = k_max;
    if (expected_ > 0) process({lo, hi, 0, nhi, 0});
    std::sort(found_.begin(), found_.end(), [](const EigenPair& x, const EigenPair& y) { return x.value < y.value; });
    if (static_cast<int>(found_.size()) > k_max) found_.resize(k_max);
    if (static_cast<int>(found_.size()) != expected_) {
      throw NumericalFailure("eigensolver incomplete: inertia reports " + std::to_string(expected_) +
                             " eigenvalues below " + std::to_string(hi) + ", found " +
                             std::to_string(found_.size()));
    }
    return std::move(found_);
  }

 private:
  void process(const Interval& iv) {
    const int c = iv.nhi - iv.nlo;
    if (c <= 0 || static_cast<int>(found_.size()) >= k_max_) return;
    const double width = iv.hi - iv.lo;
    const double mid = 0.5 * (iv.lo + iv.hi);
    const bool degenerate = width <= opt_.cluster_tol * std::max(1.0, std::abs(mid)) || iv.depth > 60;
    // The spectrum continues above the search limit; keep the shift well
    // away from it relative to the interval width.
    const bool clear_of_upper = (upper_ - iv.hi) >= 2.0 * width;
    if ((c == 1 && clear_of_upper) || degenerate) {
      extract(iv, c);
      return;
    }
    const int nmid = count(mid);
    process({iv.lo, mid, iv.nlo, nmid, iv.depth + 1});
    process({mid, iv.hi, nmid, iv.nhi, iv.depth + 1});
  }

  double m_dot(const Eigen::VectorXd& x, const Eigen::VectorXd& mx) const { return x.dot(mx); }

  void orthogonalize(Eigen::VectorXd& w, const std::vector<Eigen::VectorXd>& basis,
                     const std::vector<Eigen::VectorXd>& mbasis) const {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < basis.size(); ++i) w -= mbasis[i].dot(w) * basis[i];
    }
  }

  void extract(const Interval& iv, int c) {
    const double width = iv.hi - iv.lo;
    const double sigma = factorize_near(solver_, 0.5 * (iv.lo + iv.hi), 0.05 * std::max(width, 1e-14));
    const double slack = 1e-12 * std::max(1.0, std::abs(iv.hi));
    const int n = solver_.dimension();
    int got = 0;
    for (int restart = 0; restart <= opt_.max_restarts && got < c; ++restart) {
      got += lanczos_run(iv.lo - slack, iv.hi + slack, sigma, c - got, n);
    }
    if (got < c) {
      throw NumericalFailure("eigensolver: only " + std::to_string(got) + " of " + std::to_string(c) +
                             " eigenvalues converged in [" + std::to_string(iv.lo) + ", " +
                             std::to_string(iv.hi) + "]");
    }
  }

  // One Lanczos sweep on (A - sigma M)^{-1} M in the M-inner product,
  // orthogonal to all locked vectors.  Locks and returns the number of new
  // converged pairs inside (lo, hi].
  int lanczos_run(double lo, double hi, double sigma, int wanted, int n) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd q(n);
    for (int i = 0; i < n; ++i) q[i] = normal(rng_);
    orthogonalize(q, locked_, mlocked_);
    Eigen::VectorXd mq = solver_.apply_m(q);
    double nrm = std::sqrt(std::max(m_dot(q, mq), 0.0));
    if (!(nrm > 0.0)) return 0;
    q /= nrm;
    mq /= nrm;

    const int max_basis = std::min(opt_.max_basis, n - static_cast<int>(locked_.size()));
    std::vector<Eigen::VectorXd> basis;
    std::vector<Eigen::VectorXd> mbasis;
    std::vector<double> alpha;
    std::vector<double> beta;
    basis.push_back(q);
    mbasis.push_back(mq);

    for (int j = 0; j < max_basis; ++j) {
      Eigen::VectorXd w = solver_.solve(mbasis[j]);
      alpha.push_back(mbasis[j].dot(w));
      orthogonalize(w, basis, mbasis);
      orthogonalize(w, locked_, mlocked_);
      Eigen::VectorXd mw = solver_.apply_m(w);
      const double b = std::sqrt(std::max(m_dot(w, mw), 0.0));
      const bool last = (j + 1 == max_basis) || !(b > 1e-13 * std::abs(alpha.back()));
      const int steps = j + 1;
      if (last || (steps >= wanted + 2 && steps % 5 == 0)) {
        const int accepted = try_accept(basis, alpha, beta, lo, hi, sigma, wanted);
        if (accepted > 0 || last) return accepted;
      }
      beta.push_back(b);
      basis.push_back(w / b);
      mbasis.push_back(mw / b);
    }
    return 0;
  }

  int try_accept(const std::vector<Eigen::VectorXd>& basis, const std::vector<double>& alpha,
                 const std::vector<double>& beta, double lo, double hi, double sigma, int wanted) {
    const int k = static_cast<int>(alpha.size());
    Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), k);
    Eigen::VectorXd sub(std::max(k - 1, 0));
    for (int i = 0; i + 1 < k; ++i) sub[i] = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (tri.info() != Eigen::Success) return 0;

    struct Candidate {
      double lambda;
      int index;
    };
    std::vector<Candidate> cands;
    for (int i = 0; i < k; ++i) {
      const double theta = tri.eigenvalues()[i];
      if (theta == 0.0) continue;
      const double lambda = sigma + 1.0 / theta;
      if (lambda > lo && lambda <= hi) cands.push_back({lambda, i});
    }
    // Closest to the shift first: those converge first.
    std::sort(cands.begin(), cands.end(),
              [&](const Candidate& x, const Candidate& y) { return std::abs(x.lambda - sigma) < std::abs(y.lambda - sigma); });
    int accepted = 0;
    for (const Candidate& cand : cands) {
      if (accepted >= wanted) break;
      Eigen::VectorXd y = Eigen::VectorXd::Zero(basis.front().size());
      for (int j = 0; j < k; ++j) y += tri.eigenvectors()(j, cand.index) * basis[j];
      Eigen::VectorXd my = solver_.apply_m(y);
      const double ynorm = std::sqrt(std::max(y.dot(my), 0.0));
      if (!(ynorm > 0.0)) continue;
      y /= ynorm;
      my /= ynorm;
      double lambda = y.dot(solver_.apply_a(y));  // Rayleigh quotient
      if (!(lambda > lo && lambda <= hi)) continue;
      double res = (solver_.apply_a(y) - lambda * my).norm() / my.norm();
      if (res > opt_.residual_tol) {
        // Strongly graded grids put a rounding floor under the Ritz
        // residual; one or two Rayleigh quotient steps remove it.
        if (res > kPolishLimit || !polish(y, my, lambda, res, sigma) || !(lambda > lo && lambda <= hi)) continue;
      }
      EigenPair pair;
      pair.value = lambda;
      pair.residual = res;
      pair.vector = y;
      locked_.push_back(y);
      mlocked_.push_back(my);
      found_.push_back(std::move(pair));
      ++accepted;
    }
    return accepted;
  }

  static constexpr double kPolishLimit = 1e-5;

  // Inverse iteration at the Rayleigh quotient, orthogonal to the locked
  // vectors.  Restores the factorization at `sigma` before returning.
  bool polish(Eigen::VectorXd& y, Eigen::VectorXd& my, double& lambda, double& res, double sigma) {
    bool ok = false;
    for (int step = 0; step < 2 && !ok; ++step) {
      try {
        factorize_near(solver_, lambda, 1e-10 * std::max(1.0, std::abs(lambda)));
      } catch (const NumericalFailure&) {
        break;
      }
      Eigen::VectorXd x = solver_.solve(my);
      for (int k = 0; k < 2; ++k) {
        const Eigen::VectorXd r = my - (solver_.apply_a(x) - solver_.shift() * solver_.apply_m(x));
        x += solver_.solve(r);
      }
      orthogonalize(x, locked_, mlocked_);
      Eigen::VectorXd mx = solver_.apply_m(x);
      const double nx = std::sqrt(std::max(x.dot(mx), 0.0));
      if (!(nx > 0.0) || !std::isfinite(nx)) break;
      y = x / nx;
      my = mx / nx;
      const Eigen::VectorXd ay = solver_.apply_a(y);
      lambda = y.dot(ay);
      res = (ay - lambda * my).norm() / my.norm();
      ok = res <= opt_.residual_tol;
    }
    factorize_near(solver_, sigma, 1e-13 * std::max(1.0, std::abs(sigma)));
    return ok;
  }

  ShiftedSolver solver_;
  EigsOptions opt_;
  std::mt19937_64 rng_;
  double upper_ = 0.0;
  int expected_ = 0;
  int k_max_ = 0;
  std::vector<Eigen::VectorXd> locked_;
  std::vector<Eigen::VectorXd> mlocked_;
  std::vector<EigenPair> found_;
};

double checked_lower_bound(SliceSolver& s, double lower) {
  double lo = lower;
  for (int i = 0; i < 40 && s.count(lo) > 0; ++i) lo = lo - 2.0 * std::abs(lo) - 1.0;
  return lo;
}

}  // namespace

Inertia inertia(const SparseMatrix& a, double shift, const SparseMatrix* m) {
  ShiftedSolver solver(a, m);
  factorize_near(solver, shift, 1e-13 * std::max(1.0, std::abs(shift)));
  return solver.inertia();
}

std::vector<EigenPair> lowest_eigs(const SparseMatrix& a, double below, int k_max, const EigsOptions& options,
                                   const SparseMatrix* m) {
  if (k_max <= 0) return {};
  SliceSolver slicer(a, m, options);
  const double lo = checked_lower_bound(slicer, std::min(options.lower_bound, below - 1e-6));
  return slicer.solve(lo, below, k_max);
}

std::vector<EigenPair> smallest_eigs(const SparseMatrix& a, int count, const EigsOptions& options,
                                     const SparseMatrix* m) {
  if (count <= 0) return {};
  if (count >= a.rows()) throw InvalidInput("smallest_eigs: count must be below the matrix dimension");
  SliceSolver probe(a, m, options);
  const double lo = checked_lower_bound(probe, options.lower_bound);
  // Grow the slice until it holds at least `count` eigenvalues.
  double hi = std::max(1.0, std::abs(lo));
  for (int i = 0; i < 200 && probe.count(hi) < count; ++i) hi = lo + 2.0 * (hi - lo);
  // Tighten the upper limit so the slice does not carry far more than needed.
  double left = lo;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (left + hi);
    const int c = probe.count(mid);
    if (c >= count) {
      hi = mid;
    } else {
      left = mid;
    }
    if (c >= count && c <= count + 4) break;
    if (hi - left <= 1e-9 * std::max(1.0, std::abs(hi))) break;
  }
  // Put the upper limit clearly above the count-th eigenvalue cluster.
  hi += std::max(0.5 * (hi - left), 1e-8 * std::max(1.0, std::abs(hi)));
  SliceSolver slicer(a, m, options);
  return slicer.solve(lo, hi, count);
}

}  // namespace winlayer
