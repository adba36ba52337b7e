// Copyright 2026 The winlayer Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

namespace winlayer {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// A sample of the window boundary at arc length `s` (counter-clockwise from
/// the point at polar angle zero).
struct BoundaryPoint {
  double s = 0.0;
  double angle = 0.0;
  Point2 position;
  Point2 outward_normal;
  double curvature = 0.0;
};

/// Star-shaped planar window {(r, phi) : r < t * rho(phi)} centered at the
/// origin.  The profile is a finite trigonometric sum
///
///   rho(phi) = a_0 + sum_k a_k cos(k phi) + b_k sin(k phi),
///
/// so the boundary is C-infinity.  Immutable once constructed; the
/// constructor rejects profiles that are not strictly positive.
class WindowShape {
 public:
  /// `cos_coeffs[0]` is the constant term; `sin_coeffs[0]` is ignored.
  WindowShape(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs, double scale = 1.0);

  static WindowShape disk(double radius);

  /// Least-squares trigonometric fit with `harmonics` modes to radii sampled
  /// at the uniform angles 2*pi*j/n.  Requires n > 2 * harmonics.
  static WindowShape fit_polar(std::span<const double> radii, int harmonics, double scale = 1.0);

  /// Unscaled profile rho(phi) and its first two derivatives.
  double profile(double phi) const;
  double profile_d1(double phi) const;
  double profile_d2(double phi) const;

  /// Boundary radius t * rho(phi).
  double radius(double phi) const { return scale_ * profile(phi); }
  /// |dX/dphi| of the scaled boundary curve.
  double speed(double phi) const;
  Point2 position(double phi) const;
  Point2 outward_normal(double phi) const;
  double curvature(double phi) const;

  /// True when the profile has no non-constant harmonic.
  bool is_circle() const;
  double scale() const { return scale_; }
  WindowShape scaled(double t) const;

  const std::vector<double>& cos_coeffs() const { return cos_; }
  const std::vector<double>& sin_coeffs() const { return sin_; }
  int harmonics() const { return static_cast<int>(cos_.size()) - 1; }

 private:
  std::vector<double> cos_;
  std::vector<double> sin_;
  double scale_ = 1.0;
};

/// Normal displacement beta(s) along the boundary, periodic with the
/// perimeter: beta(s) = c_0 + sum_k c_k cos(2 pi k s / s0) + d_k sin(...).
class DilationProfile {
 public:
  DilationProfile(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs);
  static DilationProfile constant(double value);

  double operator()(double s, double perimeter) const;
  bool is_constant() const;
  /// Constant term c_0.
  double mean() const { return cos_.empty() ? 0.0 : cos_[0]; }

 private:
  std::vector<double> cos_;
  std::vector<double> sin_;
};

/// Equal arc-length sampling of the boundary.  Requires n >= 3.
std::vector<BoundaryPoint> boundary_sample(const WindowShape& shape, int n);

double area(const WindowShape& shape);
double perimeter(const WindowShape& shape);

/// Arc length from polar angle 0 to `phi` (counter-clockwise), phi in [0, 2pi].
double arc_length(const WindowShape& shape, double phi);

struct EnclosingRadii {
  double inner = 0.0;  ///< t * min rho
  double outer = 0.0;  ///< t * max rho
};
EnclosingRadii enclosing_radii(const WindowShape& shape);

struct Dilation {
  WindowShape shape;
  /// max |refit radius - displaced radius| / circumradius on check angles.
  double fit_residual = 0.0;
};

/// Moves every boundary point by eps * beta(s) along the outward normal and
/// refits the displaced curve to a radial profile.  Throws InvalidInput when
/// the displaced curve is not star-shaped about the origin and
/// NumericalFailure when no refit reaches a residual of 1e-8.
Dilation dilate(const WindowShape& shape, double eps, const DilationProfile& beta);

/// The displaced boundary point for the curve parameter `phi` (no refit).
Point2 displaced_point(const WindowShape& shape, double phi, double eps, const DilationProfile& beta,
                       double perimeter_value);

}  // namespace winlayer
