// Copyright 2026 The winlayer Authors
// SPDX-License-Identifier: Apache-2.0

#include "winlayer/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "quadrature.hpp"
#include "winlayer/error.hpp"

namespace winlayer {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kQuadTol = 1e-12;

double trig_sum(const std::vector<double>& c, const std::vector<double>& s, double x, int deriv) {
  double v = (deriv == 0 && !c.empty()) ? c[0] : 0.0;
  for (std::size_t k = 1; k < c.size(); ++k) {
    const double kk = static_cast<double>(k);
    const double ck = c[k];
    const double sk = k < s.size() ? s[k] : 0.0;
    const double cs = std::cos(kk * x);
    const double sn = std::sin(kk * x);
    switch (deriv) {
      case 0: v += ck * cs + sk * sn; break;
      case 1: v += kk * (-ck * sn + sk * cs); break;
      default: v += -kk * kk * (ck * cs + sk * sn); break;
    }
  }
  return v;
}

double golden_min(const WindowShape& w, double a, double b, double sign) {
  const double g = 0.5 * (3.0 - std::sqrt(5.0));
  double x1 = a + g * (b - a);
  double x2 = b - g * (b - a);
  double f1 = sign * w.profile(x1);
  double f2 = sign * w.profile(x2);
  for (int it = 0; it < 100 && b - a > 1e-13; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = a + g * (b - a);
      f1 = sign * w.profile(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = b - g * (b - a);
      f2 = sign * w.profile(x2);
    }
  }
  return sign * std::min(f1, f2);
}

struct ProfileExtrema {
  double min;
  double max;
};

ProfileExtrema profile_extrema(const WindowShape& w) {
  const int n = std::max(2048, 64 * (w.harmonics() + 1));
  const double h = kTwoPi / n;
  int imin = 0;
  int imax = 0;
  double vmin = w.profile(0.0);
  double vmax = vmin;
  for (int i = 1; i < n; ++i) {
    const double v = w.profile(i * h);
    if (v < vmin) {
      vmin = v;
      imin = i;
    }
    if (v > vmax) {
      vmax = v;
      imax = i;
    }
  }
  if (w.is_circle()) return {vmin, vmax};
  return {std::min(vmin, golden_min(w, (imin - 1) * h, (imin + 1) * h, 1.0)),
          std::max(vmax, golden_min(w, (imax - 1) * h, (imax + 1) * h, -1.0))};
}

}  // namespace

WindowShape::WindowShape(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs, double scale)
    : cos_(std::move(cos_coeffs)), sin_(std::move(sin_coeffs)), scale_(scale) {
  if (cos_.empty()) cos_.push_back(0.0);
  if (sin_.size() > cos_.size()) cos_.resize(sin_.size(), 0.0);
  sin_.resize(cos_.size(), 0.0);
  sin_[0] = 0.0;
  if (!(scale_ > 0.0) || !std::isfinite(scale_)) {
    throw InvalidInput("window shape: scale must be a positive finite number");
  }
  for (double c : cos_)
    if (!std::isfinite(c)) throw InvalidInput("window shape: non-finite profile coefficient");
  for (double c : sin_)
    if (!std::isfinite(c)) throw InvalidInput("window shape: non-finite profile coefficient");
  const ProfileExtrema ext = profile_extrema(*this);
  if (!(ext.min > 0.0)) {
    throw InvalidInput("window shape: profile is not positive (min rho = " + std::to_string(ext.min) +
                       "); only star-shaped windows about the origin are supported");
  }
}

WindowShape WindowShape::disk(double radius) {
  if (!(radius > 0.0)) throw InvalidInput("disk window: radius must be positive");
  return WindowShape({1.0}, {}, radius);
}

WindowShape WindowShape::fit_polar(std::span<const double> radii, int harmonics, double scale) {
  const int n = static_cast<int>(radii.size());
  if (harmonics < 0 || n <= 2 * harmonics) {
    throw InvalidInput("fit_polar: need more than 2*harmonics samples");
  }
  std::vector<double> c(harmonics + 1, 0.0);
  std::vector<double> s(harmonics + 1, 0.0);
  for (int j = 0; j < n; ++j) {
    const double phi = kTwoPi * j / n;
    const double r = radii[j] / scale;
    c[0] += r;
    for (int k = 1; k <= harmonics; ++k) {
      c[k] += r * std::cos(k * phi);
      s[k] += r * std::sin(k * phi);
    }
  }
  c[0] /= n;
  for (int k = 1; k <= harmonics; ++k) {
    // The Nyquist mode of an even sample count has norm n, not n/2.
    const double w = (2 * k == n) ? 1.0 / n : 2.0 / n;
    c[k] *= w;
    s[k] *= w;
  }
  return WindowShape(std::move(c), std::move(s), scale);
}

double WindowShape::profile(double phi) const { return trig_sum(cos_, sin_, phi, 0); }
double WindowShape::profile_d1(double phi) const { return trig_sum(cos_, sin_, phi, 1); }
double WindowShape::profile_d2(double phi) const { return trig_sum(cos_, sin_, phi, 2); }

double WindowShape::speed(double phi) const {
  const double r = profile(phi);
  const double dr = profile_d1(phi);
  return scale_ * std::hypot(r, dr);
}

Point2 WindowShape::position(double phi) const {
  const double r = radius(phi);
  return {r * std::cos(phi), r * std::sin(phi)};
}

Point2 WindowShape::outward_normal(double phi) const {
  const double r = profile(phi);
  const double dr = profile_d1(phi);
  const double tx = dr * std::cos(phi) - r * std::sin(phi);
  const double ty = dr * std::sin(phi) + r * std::cos(phi);
  const double n = std::hypot(tx, ty);
  return {ty / n, -tx / n};
}

double WindowShape::curvature(double phi) const {
  const double r = profile(phi);
  const double dr = profile_d1(phi);
  const double ddr = profile_d2(phi);
  const double q = r * r + dr * dr;
  return (r * r + 2.0 * dr * dr - r * ddr) / (q * std::sqrt(q)) / scale_;
}

bool WindowShape::is_circle() const {
  for (std::size_t k = 1; k < cos_.size(); ++k)
    if (cos_[k] != 0.0 || sin_[k] != 0.0) return false;
  return true;
}

WindowShape WindowShape::scaled(double t) const { return WindowShape(cos_, sin_, scale_ * t); }

DilationProfile::DilationProfile(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs)
    : cos_(std::move(cos_coeffs)), sin_(std::move(sin_coeffs)) {
  if (cos_.empty()) cos_.push_back(0.0);
  if (sin_.size() > cos_.size()) cos_.resize(sin_.size(), 0.0);
  sin_.resize(cos_.size(), 0.0);
}

DilationProfile DilationProfile::constant(double value) { return DilationProfile({value}, {}); }

double DilationProfile::operator()(double s, double perimeter_value) const {
  return trig_sum(cos_, sin_, kTwoPi * s / perimeter_value, 0);
}

bool DilationProfile::is_constant() const {
  for (std::size_t k = 1; k < cos_.size(); ++k)
    if (cos_[k] != 0.0 || sin_[k] != 0.0) return false;
  return true;
}

double arc_length(const WindowShape& shape, double phi) {
  if (shape.is_circle()) return shape.radius(0.0) * phi;
  const int pieces = std::max(4, static_cast<int>(std::ceil(16.0 * phi / kTwoPi)));
  return detail::adaptive_simpson([&](double p) { return shape.speed(p); }, 0.0, phi, kQuadTol, pieces);
}

double perimeter(const WindowShape& shape) { return arc_length(shape, kTwoPi); }

double area(const WindowShape& shape) {
  if (shape.is_circle()) {
    const double r = shape.radius(0.0);
    return 0.5 * kTwoPi * r * r;
  }
  return detail::adaptive_simpson(
      [&](double p) {
        const double r = shape.radius(p);
        return 0.5 * r * r;
      },
      0.0, kTwoPi, kQuadTol, 16);
}

EnclosingRadii enclosing_radii(const WindowShape& shape) {
  const ProfileExtrema ext = profile_extrema(shape);
  return {shape.scale() * ext.min, shape.scale() * ext.max};
}

std::vector<BoundaryPoint> boundary_sample(const WindowShape& shape, int n) {
  if (n < 3) throw InvalidInput("boundary_sample: need at least 3 points");
  const double s0 = perimeter(shape);
  const double ds = s0 / n;
  std::vector<BoundaryPoint> out;
  out.reserve(n);
  double phi = 0.0;
  for (int j = 0; j < n; ++j) {
    if (j > 0) {
      // Newton on the arc length accumulated from the previous sample.
      const double start = phi;
      double x = start + ds / shape.speed(start);
      for (int it = 0; it < 50; ++it) {
        const double g =
            detail::adaptive_simpson([&](double p) { return shape.speed(p); }, start, x, kQuadTol, 2) - ds;
        const double step = g / shape.speed(x);
        x -= step;
        if (std::abs(step) < 1e-15 * kTwoPi) break;
      }
      phi = x;
    }
    BoundaryPoint bp;
    bp.s = j * ds;
    bp.angle = phi;
    bp.position = shape.position(phi);
    bp.outward_normal = shape.outward_normal(phi);
    bp.curvature = shape.curvature(phi);
    out.push_back(bp);
  }
  return out;
}

Point2 displaced_point(const WindowShape& shape, double phi, double eps, const DilationProfile& beta,
                       double perimeter_value) {
  const Point2 p = shape.position(phi);
  const Point2 n = shape.outward_normal(phi);
  const double shift = eps * beta(arc_length(shape, phi), perimeter_value);
  return {p.x + shift * n.x, p.y + shift * n.y};
}

Dilation dilate(const WindowShape& shape, double eps, const DilationProfile& beta) {
  if (!(eps >= 0.0)) throw InvalidInput("dilate: eps must be >= 0");
  if (eps == 0.0 || (beta.is_constant() && beta.mean() == 0.0)) return {shape, 0.0};
  const double s0 = perimeter(shape);

  if (shape.is_circle() && beta.is_constant()) {
    const double r = shape.radius(0.0) + eps * beta.mean();
    if (!(r > 0.0)) throw InvalidInput("dilate: displaced disk has non-positive radius");
    return {WindowShape::disk(r), 0.0};
  }

  // Cumulative arc length on a fine parameter grid; queries integrate only
  // the last partial panel.
  const int arc_n = 1024;
  std::vector<double> arc_cum(arc_n + 1, 0.0);
  for (int i = 0; i < arc_n; ++i) {
    arc_cum[i + 1] = arc_cum[i] + detail::adaptive_simpson([&](double p) { return shape.speed(p); },
                                                           kTwoPi * i / arc_n, kTwoPi * (i + 1) / arc_n,
                                                           kQuadTol, 1);
  }
  auto fast_arc = [&](double phi) {
    if (shape.is_circle()) return shape.radius(0.0) * phi;
    const int i = std::clamp(static_cast<int>(phi / kTwoPi * arc_n), 0, arc_n - 1);
    const double a = kTwoPi * i / arc_n;
    return arc_cum[i] + detail::adaptive_simpson([&](double p) { return shape.speed(p); }, a, phi, kQuadTol, 1);
  };
  auto displaced = [&](double phi) {
    const Point2 p = shape.position(phi);
    const Point2 n = shape.outward_normal(phi);
    const double shift = eps * beta(fast_arc(phi), s0);
    return Point2{p.x + shift * n.x, p.y + shift * n.y};
  };

  // Tabulate the displaced curve and verify it winds once, monotonically,
  // around the origin.
  const int table_n = 4096;
  std::vector<double> tab_phi(table_n + 1);
  std::vector<double> tab_ang(table_n + 1);
  double prev = 0.0;
  for (int i = 0; i <= table_n; ++i) {
    const double phi = kTwoPi * i / table_n;
    const Point2 q = displaced(phi);
    if (std::hypot(q.x, q.y) <= 0.0) throw InvalidInput("dilate: displaced curve passes through the origin");
    double a = std::atan2(q.y, q.x);
    if (i > 0) {
      while (a - prev > std::numbers::pi) a -= kTwoPi;
      while (a - prev < -std::numbers::pi) a += kTwoPi;
      if (!(a > prev)) {
        throw InvalidInput("dilate: displaced curve is not star-shaped about the origin (eps = " +
                           std::to_string(eps) + ")");
      }
    }
    tab_phi[i] = phi;
    tab_ang[i] = a;
    prev = a;
  }
  if (std::abs(tab_ang[table_n] - tab_ang[0] - kTwoPi) > 1e-9) {
    throw InvalidInput("dilate: displaced curve does not wind once around the origin");
  }

  auto unwrapped_angle = [&](double phi, double ref) {
    const Point2 q = displaced(phi);
    double a = std::atan2(q.y, q.x);
    while (a - ref > std::numbers::pi) a -= kTwoPi;
    while (a - ref < -std::numbers::pi) a += kTwoPi;
    return a;
  };

  auto radius_at = [&](double psi) {
    // Bring psi into [ang_0, ang_0 + 2pi) and bracket it in the table.
    double target = psi;
    while (target < tab_ang[0]) target += kTwoPi;
    while (target >= tab_ang[0] + kTwoPi) target -= kTwoPi;
    const auto it = std::upper_bound(tab_ang.begin(), tab_ang.end(), target);
    const std::size_t i = std::clamp<std::size_t>(it - tab_ang.begin(), 1, table_n) - 1;
    double lo = tab_phi[i];
    double hi = tab_phi[i + 1];
    for (int k = 0; k < 60 && hi - lo > 1e-15; ++k) {
      const double mid = 0.5 * (lo + hi);
      if (unwrapped_angle(mid, target) < target) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const Point2 q = displaced(0.5 * (lo + hi));
    return std::hypot(q.x, q.y);
  };

  const double outer = enclosing_radii(shape).outer + eps * std::abs(beta.mean());
  double residual = 1e300;
  for (int k = 8; k <= 256; k *= 2) {
    const int n = 4 * k;
    std::vector<double> radii(n);
    for (int j = 0; j < n; ++j) radii[j] = radius_at(kTwoPi * j / n);
    WindowShape fit = WindowShape::fit_polar(radii, k, shape.scale());
    residual = 0.0;
    for (int j = 0; j < n; ++j) {
      const double psi = kTwoPi * (j + 0.5) / n;
      residual = std::max(residual, std::abs(fit.radius(psi) - radius_at(psi)) / outer);
    }
    if (residual < 1e-8) return {std::move(fit), residual};
  }
  throw NumericalFailure("dilate: radial refit residual " + std::to_string(residual) + " exceeds 1e-8");
}

}  // namespace winlayer
