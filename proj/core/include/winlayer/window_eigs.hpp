// Copyright 2026 The winlayer Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <ostream>
#include <string>
#include <vector>

#include "winlayer/geometry.hpp"
#include "winlayer/sparse_eigs.hpp"

namespace winlayer {

enum class BoundaryCondition { kDirichlet, kNeumann };
enum class WindowBackend { kAnalyticDisk, kFem };

std::string to_string(BoundaryCondition bc);
std::string to_string(WindowBackend backend);

/// Eigenvalues of the Dirichlet or Neumann Laplacian on the window, sorted,
/// multiplicities expanded.
struct WindowSpectrum {
  BoundaryCondition bc = BoundaryCondition::kDirichlet;
  WindowBackend backend = WindowBackend::kAnalyticDisk;
  std::vector<double> values;
  /// Per-value error estimate (zero for the analytic backend).
  std::vector<double> estimated_error;
  /// Angular order m of each value (analytic backend only, else -1).
  std::vector<int> order;
};

WindowSpectrum disk_window_spectrum(double radius, BoundaryCondition bc, int count);

struct Mesh2D {
  std::vector<Point2> vertices;
  std::vector<std::array<int, 3>> triangles;  // counter-clockwise
  std::vector<bool> boundary;
  double target_h = 0.0;
  /// Number of vertices on each ring, center first (polar structure).
  std::vector<int> ring_sizes;
};

/// Polar-structured triangulation of a star-shaped window: concentric
/// scaled copies of the boundary, ring i carrying ceil(6 i s_max / rho_max)
/// vertices, neighbouring rings joined along the shorter diagonal of each
/// strip quad.  Requires h < inradius / 4; rejects meshes with degenerate
/// triangles.
Mesh2D mesh_window(const WindowShape& shape, double h);

double mesh_area(const Mesh2D& mesh);
/// Perimeter of the boundary polygon (outer ring).
double boundary_polygon_perimeter(const Mesh2D& mesh);
double max_edge_length(const Mesh2D& mesh);

/// Header "kind,index,a,b,c"; vertex rows carry x, y, boundary flag and
/// triangle rows the three vertex indices.
void write_mesh_csv(const Mesh2D& mesh, std::ostream& out);

struct FemEigenpairs {
  std::vector<double> values;
  std::vector<Eigen::VectorXd> vectors;  ///< nodal values on all vertices
  std::vector<double> residuals;         ///< ||K v - mu M v|| / ||M v||
};

/// P1 stiffness/consistent-mass eigenpairs on a mesh (no error estimate).
FemEigenpairs fem_eigenpairs(const Mesh2D& mesh, BoundaryCondition bc, int count, const EigsOptions& options = {});

/// Smallest `count` P1 eigenvalues on `mesh`, with two-grid Richardson
/// error estimates from a companion mesh of twice the size built from
/// `shape` (the shape the mesh was generated from).
WindowSpectrum fem_window_spectrum(const WindowShape& shape, const Mesh2D& mesh, BoundaryCondition bc, int count,
                                   const EigsOptions& options = {});

/// Convenience: mesh at `h` and solve.
WindowSpectrum fem_window_spectrum(const WindowShape& shape, double h, BoundaryCondition bc, int count,
                                   const EigsOptions& options = {});

/// Analytic for circular windows, FEM otherwise.
WindowSpectrum window_spectrum(const WindowShape& shape, BoundaryCondition bc, int count, double fem_h);

}  // namespace winlayer
