// Copyright 2026 The winlayer Authors
// SPDX-License-Identifier: Apache-2.0

#include "winlayer/bracketing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "winlayer/error.hpp"

namespace winlayer {
namespace {

constexpr double kPi = std::numbers::pi;

double error_at(const WindowSpectrum& s, std::size_t i) {
  return i < s.estimated_error.size() ? s.estimated_error[i] : 0.0;
}

}  // namespace

LayerPair::LayerPair(double d) : d_(d) {
  if (!(d > 0.0) || d > kPi) throw InvalidInput("layer width d must satisfy 0 < d <= pi, got " + std::to_string(d));
}

// d = pi is entered through std::numbers::pi everywhere, so the comparison
// only needs to absorb parsing round-off.
bool LayerPair::symmetric() const { return std::abs(d_ - kPi) <= 1e-12; }

double threshold_shift(const LayerPair& layers) {
  const double s = kPi + layers.d();
  return kPi * kPi / (s * s);
}

double count_threshold(const LayerPair& layers) {
  const double d = layers.d();
  const double s = kPi + d;
  return (2.0 * kPi * d + d * d) / (s * s);
}

std::vector<SpectralBracket> brackets(const LayerPair& layers, const WindowSpectrum& neumann,
                                      const WindowSpectrum& dirichlet, int count) {
  if (neumann.bc != BoundaryCondition::kNeumann || dirichlet.bc != BoundaryCondition::kDirichlet) {
    throw InvalidInput("brackets: spectra passed with the wrong boundary conditions");
  }
  if (count < 0 || count > static_cast<int>(neumann.values.size()) ||
      count > static_cast<int>(dirichlet.values.size())) {
    throw InsufficientData("brackets: requested " + std::to_string(count) + " brackets but only " +
                           std::to_string(std::min(neumann.values.size(), dirichlet.values.size())) +
                           " window eigenvalues are tabulated");
  }
  const double shift = threshold_shift(layers);
  std::vector<SpectralBracket> out;
  for (int i = 0; i < count; ++i) {
    const double mn = neumann.values[i];
    const double md = dirichlet.values[i];
    const double en = error_at(neumann, i);
    const double ed = error_at(dirichlet, i);
    if (mn > md + en + ed + 1e-12 * md) {
      throw InvalidInput("inconsistent window spectra at index " + std::to_string(i + 1) + ": Neumann " +
                         std::to_string(mn) + " exceeds Dirichlet " + std::to_string(md));
    }
    SpectralBracket b;
    b.index = i + 1;
    b.mu_neumann = mn;
    b.mu_dirichlet = md;
    b.lower = std::max(shift, shift + mn - en);
    b.upper = shift + md + ed;
    if (b.lower >= 1.0) break;
    out.push_back(b);
  }
  return out;
}

CountBounds count_bounds(const LayerPair& layers, const WindowSpectrum& neumann, const WindowSpectrum& dirichlet) {
  const double t = count_threshold(layers);
  auto covers = [t](const WindowSpectrum& s) {
    if (s.values.empty()) return false;
    const std::size_t last = s.values.size() - 1;
    return s.values[last] - error_at(s, last) > t;
  };
  if (!covers(neumann) || !covers(dirichlet)) {
    throw InsufficientData("count_bounds: window spectra do not extend past the threshold " + std::to_string(t));
  }
  CountBounds cb;
  cb.threshold_used = t;
  // Values within their error bar of T are undecided: they are left out of
  // the guaranteed minimum and kept in the maximum so both stay valid.
  for (std::size_t i = 0; i < dirichlet.values.size(); ++i) {
    const double e = error_at(dirichlet, i);
    if (dirichlet.values[i] + e < t) {
      ++cb.min_count;
    } else if (dirichlet.values[i] - e < t) {
      ++cb.undecided;
    }
  }
  for (std::size_t i = 0; i < neumann.values.size(); ++i) {
    const double e = error_at(neumann, i);
    if (neumann.values[i] - e < t) {
      ++cb.max_count;
      if (neumann.values[i] + e >= t) ++cb.undecided;
    }
  }
  return cb;
}

}  // namespace winlayer
