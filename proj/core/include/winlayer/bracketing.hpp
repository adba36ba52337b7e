// Copyright 2026 The winlayer Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "winlayer/window_eigs.hpp"

namespace winlayer {

/// Two layers {-d < z < 0} and {0 < z < pi} sharing the plane z = 0, which
/// is open only over the window.  The wide layer has width pi.
class LayerPair {
 public:
  /// Requires 0 < d <= pi.
  explicit LayerPair(double d);

  double d() const { return d_; }
  /// 2 for symmetric layers (d == pi), 1 otherwise.
  int gamma() const { return symmetric() ? 2 : 1; }
  bool symmetric() const;

 private:
  double d_;
};

/// pi^2 / (pi + d)^2: lowest transverse mode of the full-height cylinder
/// over the window.
double threshold_shift(const LayerPair& layers);

/// (2 pi d + d^2) / (pi + d)^2: window eigenvalues below this value are the
/// ones whose bracket sits below the continuum edge 1.
double count_threshold(const LayerPair& layers);

struct SpectralBracket {
  int index = 0;  ///< 1-based
  double lower = 0.0;
  double upper = 0.0;
  double mu_neumann = 0.0;
  double mu_dirichlet = 0.0;
};

/// Brackets shift + mu_i^N - err_i^N <= lambda_i <= shift + mu_i^D + err_i^D
/// for i = 1..count, reported only while the lower end stays below 1.
/// Throws InvalidInput when mu_i^N > mu_i^D beyond the error bars, and
/// InsufficientData when `count` exceeds either list.
std::vector<SpectralBracket> brackets(const LayerPair& layers, const WindowSpectrum& neumann,
                                      const WindowSpectrum& dirichlet, int count);

struct CountBounds {
  int min_count = 0;
  int max_count = 0;
  double threshold_used = 0.0;
  /// Window eigenvalues within their error bar of the threshold; they are
  /// excluded from both counts and make the verdict "undecided" for them.
  int undecided = 0;
};

/// #{mu^D < T} <= #discrete spectrum <= #{mu^N < T}, multiplicities
/// counted.  Throws InsufficientData unless both lists extend past T.
CountBounds count_bounds(const LayerPair& layers, const WindowSpectrum& neumann, const WindowSpectrum& dirichlet);

}  // namespace winlayer
