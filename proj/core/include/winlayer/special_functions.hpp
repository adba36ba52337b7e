// Copyright 2026 The winlayer Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

namespace winlayer::special {

/// Bessel function of the first kind J_m(x) for integer m >= 0, x >= 0.
///
/// Power series for small arguments, Miller's backward recurrence with the
/// Neumann-sum normalization in the intermediate range and the Hankel
/// asymptotic expansion plus forward recurrence for large x.  Absolute error
/// stays below a few ulp of max(|J_m|) on [0, 200].
double bessel_j(int m, double x);

/// dJ_m/dx via J_m' = (J_{m-1} - J_{m+1}) / 2.
double bessel_j_prime(int m, double x);

enum class ZeroKind { kJ, kJPrime };

/// Positive zeros of J_m or J_m' in increasing order.  For J_0' the trivial
/// zero at x = 0 is excluded, so its k-th zero is j_{1,k}.
struct BesselZeroTable {
  int order = 0;
  ZeroKind kind = ZeroKind::kJ;
  std::vector<double> zeros;
  /// Largest |J_m(z)| (or |J_m'(z)|) seen over the table.
  double certified_tolerance = 0.0;
};

/// k-th positive zero (k >= 1) of J_m.
double bessel_j_zero(int m, int k);

/// k-th positive zero (k >= 1) of J_m', the zero at the origin excluded.
double bessel_j_prime_zero(int m, int k);

/// The first `count` zeros of J_m or J_m'.
BesselZeroTable bessel_zero_table(int m, ZeroKind kind, int count);

}  // namespace winlayer::special
