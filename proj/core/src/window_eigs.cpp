// Copyright 2026 The winlayer Authors
// SPDX-License-Identifier: Apache-2.0

#include "winlayer/window_eigs.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <string>

#include "winlayer/error.hpp"
#include "winlayer/special_functions.hpp"

namespace winlayer {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Mode {
  double value;
  int order;
};

double tri_area(const Point2& a, const Point2& b, const Point2& c) {
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

double dist(const Point2& a, const Point2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace

std::string to_string(BoundaryCondition bc) { return bc == BoundaryCondition::kDirichlet ? "dirichlet" : "neumann"; }

std::string to_string(WindowBackend backend) {
  return backend == WindowBackend::kAnalyticDisk ? "analytic-disk" : "fem";
}

WindowSpectrum disk_window_spectrum(double radius, BoundaryCondition bc, int count) {
  if (!(radius > 0.0)) throw InvalidInput("disk spectrum: radius must be positive");
  if (count < 1) throw InvalidInput("disk spectrum: count must be >= 1");
  // Zeros grow in both m and k, so orders m <= count/2 and indices k <= count
  // already contain the `count` smallest values.
  const int max_m = count / 2 + 1;
  const int max_k = count;
  std::vector<Mode> modes;
  if (bc == BoundaryCondition::kNeumann) modes.push_back({0.0, 0});
  for (int m = 0; m <= max_m; ++m) {
    const special::BesselZeroTable table = special::bessel_zero_table(
        m, bc == BoundaryCondition::kDirichlet ? special::ZeroKind::kJ : special::ZeroKind::kJPrime, max_k);
    for (double z : table.zeros) {
      const double mu = (z / radius) * (z / radius);
      modes.push_back({mu, m});
      if (m > 0) modes.push_back({mu, m});
    }
  }
  std::stable_sort(modes.begin(), modes.end(), [](const Mode& a, const Mode& b) { return a.value < b.value; });
  WindowSpectrum out;
  out.bc = bc;
  out.backend = WindowBackend::kAnalyticDisk;
  for (int i = 0; i < count; ++i) {
    out.values.push_back(modes[i].value);
    out.order.push_back(modes[i].order);
  }
  out.estimated_error.assign(count, 0.0);
  return out;
}

Mesh2D mesh_window(const WindowShape& shape, double h) {
  const EnclosingRadii radii = enclosing_radii(shape);
  if (!(h > 0.0) || !(h < radii.inner / 4.0)) {
    throw InvalidInput("mesh_window: need 0 < h < inradius/4 (h = " + std::to_string(h) +
                       ", inradius = " + std::to_string(radii.inner) + ")");
  }
  double max_speed = 0.0;
  for (int i = 0; i < 4096; ++i) max_speed = std::max(max_speed, shape.speed(kTwoPi * i / 4096));
  const double speed_factor = max_speed / radii.outer;
  const int rings = static_cast<int>(std::ceil(radii.outer / h - 1e-9));

  Mesh2D mesh;
  mesh.target_h = h;
  mesh.vertices.push_back({0.0, 0.0});
  mesh.boundary.push_back(false);
  mesh.ring_sizes.push_back(1);
  std::vector<int> prev_ring{0};
  for (int i = 1; i <= rings; ++i) {
    const int n = std::max(6, static_cast<int>(std::ceil(6.0 * i * speed_factor - 1e-9)));
    const double frac = static_cast<double>(i) / rings;
    std::vector<int> ring(n);
    for (int j = 0; j < n; ++j) {
      const double phi = kTwoPi * j / n;
      const double r = frac * shape.radius(phi);
      ring[j] = static_cast<int>(mesh.vertices.size());
      mesh.vertices.push_back({r * std::cos(phi), r * std::sin(phi)});
      mesh.boundary.push_back(i == rings);
    }
    mesh.ring_sizes.push_back(n);
    // Strip between the rings: each step adds the shorter of the two
    // possible diagonals, which keeps the triangles close to equilateral.
    const int ni = static_cast<int>(prev_ring.size());
    const auto& vx = mesh.vertices;
    int a = 0;
    int b = 0;
    while (a < ni || b < n) {
      if (ni == 1) {
        if (b >= n) break;
        mesh.triangles.push_back({prev_ring[0], ring[b], ring[(b + 1) % n]});
        ++b;
        continue;
      }
      bool outer = a >= ni;
      if (a < ni && b < n) {
        const double d_outer = dist(vx[prev_ring[a % ni]], vx[ring[(b + 1) % n]]);
        const double d_inner = dist(vx[prev_ring[(a + 1) % ni]], vx[ring[b % n]]);
        outer = d_outer <= d_inner;
      }
      if (outer) {
        mesh.triangles.push_back({prev_ring[a % ni], ring[b], ring[(b + 1) % n]});
        ++b;
      } else {
        mesh.triangles.push_back({prev_ring[a % ni], ring[b % n], prev_ring[(a + 1) % ni]});
        ++a;
      }
    }
    prev_ring = std::move(ring);
  }

  const double min_area = 1e-14 * h * h;
  for (auto& t : mesh.triangles) {
    double ar = tri_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
    if (ar < 0.0) {
      std::swap(t[1], t[2]);
      ar = -ar;
    }
    if (ar < min_area) throw InvalidInput("mesh_window: degenerate triangle (area " + std::to_string(ar) + ")");
  }
  return mesh;
}

double mesh_area(const Mesh2D& mesh) {
  double total = 0.0;
  for (const auto& t : mesh.triangles) total += tri_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
  return total;
}

double boundary_polygon_perimeter(const Mesh2D& mesh) {
  const int n = mesh.ring_sizes.back();
  const int first = static_cast<int>(mesh.vertices.size()) - n;
  double p = 0.0;
  for (int j = 0; j < n; ++j) p += dist(mesh.vertices[first + j], mesh.vertices[first + (j + 1) % n]);
  return p;
}

double max_edge_length(const Mesh2D& mesh) {
  double e = 0.0;
  for (const auto& t : mesh.triangles) {
    for (int k = 0; k < 3; ++k) e = std::max(e, dist(mesh.vertices[t[k]], mesh.vertices[t[(k + 1) % 3]]));
  }
  return e;
}

void write_mesh_csv(const Mesh2D& mesh, std::ostream& out) {
  out << "kind,index,a,b,c\n" << std::setprecision(17);
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    out << "vertex," << i << ',' << mesh.vertices[i].x << ',' << mesh.vertices[i].y << ','
        << (mesh.boundary[i] ? 1 : 0) << '\n';
  }
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    const auto& t = mesh.triangles[i];
    out << "triangle," << i << ',' << t[0] << ',' << t[1] << ',' << t[2] << '\n';
  }
}

FemEigenpairs fem_eigenpairs(const Mesh2D& mesh, BoundaryCondition bc, int count, const EigsOptions& options) {
  const int nv = static_cast<int>(mesh.vertices.size());
  std::vector<int> dof(nv, -1);
  int ndof = 0;
  for (int v = 0; v < nv; ++v) {
    if (bc == BoundaryCondition::kDirichlet && mesh.boundary[v]) continue;
    dof[v] = ndof++;
  }
  if (!(count < ndof / 4)) throw InvalidInput("fem: count must be well below the number of unknowns");

  // Fixed triangle order makes the assembly bitwise reproducible.
  std::vector<Eigen::Triplet<double>> kt;
  std::vector<Eigen::Triplet<double>> mt;
  kt.reserve(mesh.triangles.size() * 9);
  mt.reserve(mesh.triangles.size() * 9);
  for (const auto& t : mesh.triangles) {
    const Point2& p0 = mesh.vertices[t[0]];
    const Point2& p1 = mesh.vertices[t[1]];
    const Point2& p2 = mesh.vertices[t[2]];
    const double ar = tri_area(p0, p1, p2);
    // Gradients of the barycentric basis functions times 2*area.
    const double gx[3] = {p1.y - p2.y, p2.y - p0.y, p0.y - p1.y};
    const double gy[3] = {p2.x - p1.x, p0.x - p2.x, p1.x - p0.x};
    for (int i = 0; i < 3; ++i) {
      const int di = dof[t[i]];
      if (di < 0) continue;
      for (int j = 0; j < 3; ++j) {
        const int dj = dof[t[j]];
        if (dj < 0) continue;
        kt.emplace_back(di, dj, (gx[i] * gx[j] + gy[i] * gy[j]) / (4.0 * ar));
        mt.emplace_back(di, dj, ar / 12.0 * (i == j ? 2.0 : 1.0));
      }
    }
  }
  SparseMatrix k(ndof, ndof);
  SparseMatrix m(ndof, ndof);
  k.setFromTriplets(kt.begin(), kt.end());
  m.setFromTriplets(mt.begin(), mt.end());

  EigsOptions opt = options;
  opt.lower_bound = -1e-3;
  std::vector<EigenPair> pairs = smallest_eigs(k, count, opt, &m);

  FemEigenpairs out;
  for (auto& p : pairs) {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(nv);
    for (int v = 0; v < nv; ++v)
      if (dof[v] >= 0) full[v] = p.vector[dof[v]];
    out.values.push_back(p.value);
    out.vectors.push_back(std::move(full));
    out.residuals.push_back(p.residual);
  }
  if (bc == BoundaryCondition::kNeumann && !out.values.empty() && std::abs(out.values[0]) < 1e-10) {
    out.values[0] = std::abs(out.values[0]);
  }
  return out;
}

WindowSpectrum fem_window_spectrum(const WindowShape& shape, const Mesh2D& mesh, BoundaryCondition bc, int count,
                                   const EigsOptions& options) {
  FemEigenpairs fine = fem_eigenpairs(mesh, bc, count, options);
  WindowSpectrum out;
  out.bc = bc;
  out.backend = WindowBackend::kFem;
  out.values = fine.values;
  out.order.assign(count, -1);
  out.estimated_error.assign(count, 0.0);
  const Mesh2D coarse = mesh_window(shape, 2.0 * mesh.target_h);
  FemEigenpairs c = fem_eigenpairs(coarse, bc, count, options);
  for (int i = 0; i < count; ++i) out.estimated_error[i] = std::abs(c.values[i] - fine.values[i]) / 3.0;
  return out;
}

WindowSpectrum fem_window_spectrum(const WindowShape& shape, double h, BoundaryCondition bc, int count,
                                   const EigsOptions& options) {
  return fem_window_spectrum(shape, mesh_window(shape, h), bc, count, options);
}

WindowSpectrum window_spectrum(const WindowShape& shape, BoundaryCondition bc, int count, double fem_h) {
  if (shape.is_circle()) return disk_window_spectrum(shape.radius(0.0), bc, count);
  return fem_window_spectrum(shape, fem_h, bc, count);
}

}  // namespace winlayer
