// Copyright 2026 The winlayer Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>

namespace winlayer::detail {

template <class F>
double simpson_step(const F& f, double a, double b, double fa, double fm, double fb, double whole, double tol,
                    int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

/// Adaptive Simpson quadrature to a relative tolerance.  The interval is
/// pre-split into `pieces` panels so periodic integrands cannot fool the
/// first error estimate.
template <class F>
double adaptive_simpson(const F& f, double a, double b, double rel_tol = 1e-12, int pieces = 16) {
  if (a == b) return 0.0;
  double coarse = 0.0;
  const double h = (b - a) / pieces;
  for (int i = 0; i < pieces; ++i) {
    const double x0 = a + i * h;
    coarse += std::abs(h / 6.0 * (f(x0) + 4.0 * f(x0 + 0.5 * h) + f(x0 + h)));
  }
  const double tol = rel_tol * std::max(coarse, 1e-300);
  double total = 0.0;
  for (int i = 0; i < pieces; ++i) {
    const double x0 = a + i * h;
    const double x1 = (i + 1 == pieces) ? b : x0 + h;
    const double f0 = f(x0);
    const double fm = f(0.5 * (x0 + x1));
    const double f1 = f(x1);
    const double whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
    total += simpson_step(f, x0, x1, f0, fm, f1, whole, tol / pieces, 40);
  }
  return total;
}

}  // namespace winlayer::detail
