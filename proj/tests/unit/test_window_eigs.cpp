// Copyright 2026 The winlayer Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <utility>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "winlayer/error.hpp"
#include "winlayer/window_eigs.hpp"

using namespace winlayer;

namespace {

constexpr double kPi = std::numbers::pi;

WindowShape trefoil() { return WindowShape({1.0, 0.0, 0.0, 0.2}, {0.0, 0.0, 0.0, 0.0}); }

// Side-2 square rounded to |x|^24 + |y|^24 = 1, as a 32-harmonic profile.
WindowShape superellipse() {
  std::vector<double> r(512);
  for (int j = 0; j < 512; ++j) {
    const double phi = 2 * kPi * j / 512;
    r[j] = std::pow(std::pow(std::abs(std::cos(phi)), 24.0) + std::pow(std::abs(std::sin(phi)), 24.0), -1.0 / 24.0);
  }
  return WindowShape::fit_polar(r, 32);
}

double triangle_area(const Mesh2D& m, const std::array<int, 3>& t) {
  const Point2& a = m.vertices[t[0]];
  const Point2& b = m.vertices[t[1]];
  const Point2& c = m.vertices[t[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

// Disk eigenvalues from the independent zero oracle, multiplicities expanded.
std::vector<double> disk_oracle(bool neumann, int count) {
  std::vector<double> v;
  if (neumann) v.push_back(0.0);
  for (int m = 0; m <= 6; ++m) {
    double prev = (neumann && m == 0) ? 0.5 : 0.3 + m;  // skip the zero at the origin
    for (int k = 0; k < 4; ++k) {
      // Scan for the next sign change, then bisect with the series.
      double a = prev;
      auto f = [&](double x) { return neumann ? oracle::bessel_j_prime(m, x) : oracle::bessel_j(m, x); };
      while (f(a) * f(a + 0.05) > 0) a += 0.05;
      const double z = oracle::bisect(f, a, a + 0.05);
      prev = z + 0.05;
      for (int rep = 0; rep < (m == 0 ? 1 : 2); ++rep) v.push_back(z * z);
    }
  }
  std::sort(v.begin(), v.end());
  v.resize(count);
  return v;
}

}  // namespace

TEST_CASE("analytic disk spectrum") {
  const WindowSpectrum d = disk_window_spectrum(1.0, BoundaryCondition::kDirichlet, 6);
  CHECK(d.values[0] == doctest::Approx(5.783185962946785).epsilon(1e-13));
  CHECK(d.values[1] == d.values[2]);
  CHECK(d.values[1] == doctest::Approx(std::pow(oracle::bessel_zero_in(1, false, 3.0, 4.5), 2)).epsilon(1e-12));
  CHECK(d.values[0] < d.values[1]);
  CHECK(d.order[0] == 0);
  CHECK(d.order[1] == 1);
  CHECK(d.backend == WindowBackend::kAnalyticDisk);
  for (double R : {0.5, 3.0}) {
    const WindowSpectrum n = disk_window_spectrum(R, BoundaryCondition::kNeumann, 5);
    CHECK(n.values[0] == 0.0);
    CHECK(n.values[1] > 0.0);
  }
}

TEST_CASE("analytic spectrum matches the zero oracle and the scaling law") {
  for (bool neumann : {false, true}) {
    const auto bc = neumann ? BoundaryCondition::kNeumann : BoundaryCondition::kDirichlet;
    const auto ref = disk_oracle(neumann, 12);
    const WindowSpectrum s = disk_window_spectrum(1.0, bc, 12);
    const WindowSpectrum s2 = disk_window_spectrum(2.5, bc, 12);
    for (int i = 0; i < 12; ++i) {
      CHECK(std::abs(s.values[i] - ref[i]) < 1e-10 * std::max(1.0, ref[i]));
      CHECK(std::abs(s2.values[i] - s.values[i] / 6.25) < 1e-12 * std::max(1.0, s.values[i]));
      if (i > 0) CHECK(s.values[i] >= s.values[i - 1]);
    }
  }
}

TEST_CASE("mesh of the unit disk") {
  const Mesh2D m = mesh_window(WindowShape::disk(1.0), 0.1);
  double total = 0.0;
  for (const auto& t : m.triangles) {
    const double a = triangle_area(m, t);
    CHECK(a > 1e-14 * 0.01);
    total += a;
  }
  CHECK(std::abs(total - kPi) < 0.02 * kPi);
  CHECK(mesh_area(m) == doctest::Approx(total));
  CHECK(max_edge_length(m) <= 1.5 * 0.1);
  for (std::size_t i = 0; i < m.vertices.size(); ++i) {
    const double r = std::hypot(m.vertices[i].x, m.vertices[i].y);
    CHECK(m.boundary[i] == (std::abs(r - 1.0) < 1e-12));
  }
}

TEST_CASE("mesh is conforming: every interior edge is shared by two triangles") {
  const Mesh2D m = mesh_window(trefoil(), 0.08);
  std::map<std::pair<int, int>, int> edges;
  for (const auto& t : m.triangles) {
    for (int k = 0; k < 3; ++k) {
      const int a = t[k];
      const int b = t[(k + 1) % 3];
      edges[{std::min(a, b), std::max(a, b)}]++;
    }
  }
  for (const auto& [e, n] : edges) {
    const bool on_boundary = m.boundary[e.first] && m.boundary[e.second];
    CHECK(n == (on_boundary ? 1 : 2));
  }
}

TEST_CASE("boundary polygon perimeter converges at second order") {
  const double e1 = std::abs(boundary_polygon_perimeter(mesh_window(WindowShape::disk(1.0), 0.1)) - 2 * kPi);
  const double e2 = std::abs(boundary_polygon_perimeter(mesh_window(WindowShape::disk(1.0), 0.05)) - 2 * kPi);
  CHECK(e1 / e2 >= 4.0 * 0.95);
}

TEST_CASE("trefoil mesh stays inside the window") {
  const WindowShape s = trefoil();
  const Mesh2D m = mesh_window(s, 0.05);
  for (const auto& v : m.vertices) {
    const double r = std::hypot(v.x, v.y);
    if (r == 0.0) continue;
    CHECK(r <= s.radius(std::atan2(v.y, v.x)) + 1e-12);
  }
  CHECK(max_edge_length(m) <= 1.5 * 0.05);
}

TEST_CASE("mesh rejects steps too large for the window") {
  CHECK_THROWS_AS(mesh_window(WindowShape::disk(1.0), 0.5), InvalidInput);
}

TEST_CASE("FEM on the unit disk converges from above at second order") {
  const std::vector<double> hs{0.1, 0.05, 0.025};
  for (bool neumann : {false, true}) {
    const auto bc = neumann ? BoundaryCondition::kNeumann : BoundaryCondition::kDirichlet;
    const auto ref = disk_oracle(neumann, 6);
    std::vector<std::vector<double>> err(6);
    for (double h : hs) {
      const FemEigenpairs fe = fem_eigenpairs(mesh_window(WindowShape::disk(1.0), h), bc, 6);
      for (int i = 0; i < 6; ++i) {
        CHECK(fe.values[i] >= ref[i] - 1e-10);  // conforming Galerkin upper bound
        err[i].push_back(fe.values[i] - ref[i]);
      }
    }
    for (int i = (neumann ? 1 : 0); i < 6; ++i) {
      const double p = oracle::observed_order(hs, err[i]);
      CHECK(p == doctest::Approx(2.0).epsilon(0.15));
    }
  }
}

TEST_CASE("FEM Neumann ground mode is the constant") {
  const FemEigenpairs fe = fem_eigenpairs(mesh_window(WindowShape::disk(1.0), 0.05), BoundaryCondition::kNeumann, 2);
  CHECK(std::abs(fe.values[0]) < 1e-10);
  const auto& v = fe.vectors[0];
  const double mean = v.mean();
  CHECK((v.array() - mean).abs().maxCoeff() < 1e-6 * std::abs(mean));
}

TEST_CASE("Richardson error bars cover the analytic value") {
  const WindowSpectrum s = fem_window_spectrum(WindowShape::disk(1.0), 0.05, BoundaryCondition::kDirichlet, 6);
  const auto ref = disk_oracle(false, 6);
  CHECK(s.backend == WindowBackend::kFem);
  for (int i = 0; i < 6; ++i) {
    CHECK(s.estimated_error[i] > 0.0);
    CHECK(std::abs(s.values[i] - ref[i]) <= 1.5 * s.estimated_error[i]);
  }
}

TEST_CASE("rounded square sits just above the square's eigenvalue") {
  const WindowSpectrum s = fem_window_spectrum(superellipse(), 0.04, BoundaryCondition::kDirichlet, 1);
  const double square = kPi * kPi / 2.0;
  // The superellipse lies inside the square, so its eigenvalue is larger.
  CHECK(s.values[0] >= square - s.estimated_error[0]);
  CHECK(s.values[0] <= 1.03 * square);
}

TEST_CASE("Dirichlet monotonicity under inclusion and the D/N ordering") {
  // disk(0.8) is inside the trefoil, which is inside disk(1.2).
  const double h = 0.04;
  const auto inner = fem_window_spectrum(WindowShape::disk(0.8), h, BoundaryCondition::kDirichlet, 4);
  const auto mid = fem_window_spectrum(trefoil(), h, BoundaryCondition::kDirichlet, 4);
  const auto outer = fem_window_spectrum(WindowShape::disk(1.2), h, BoundaryCondition::kDirichlet, 4);
  const auto midn = fem_window_spectrum(trefoil(), h, BoundaryCondition::kNeumann, 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(inner.values[i] >= mid.values[i]);
    CHECK(mid.values[i] >= outer.values[i]);
    CHECK(midn.values[i] <= mid.values[i]);
  }
}

TEST_CASE("FEM scaling law") {
  const double h = 0.05;
  const auto a = fem_eigenpairs(mesh_window(trefoil(), h), BoundaryCondition::kDirichlet, 4);
  const auto b = fem_eigenpairs(mesh_window(trefoil().scaled(2.0), 2 * h), BoundaryCondition::kDirichlet, 4);
  for (int i = 0; i < 4; ++i) CHECK(b.values[i] == doctest::Approx(a.values[i] / 4.0).epsilon(1e-9));
}

TEST_CASE("window_spectrum picks the backend from the shape") {
  CHECK(window_spectrum(WindowShape::disk(2.0), BoundaryCondition::kDirichlet, 3, 0.1).backend ==
        WindowBackend::kAnalyticDisk);
  CHECK(window_spectrum(trefoil(), BoundaryCondition::kDirichlet, 3, 0.05).backend == WindowBackend::kFem);
}
