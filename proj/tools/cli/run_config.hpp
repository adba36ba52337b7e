// Copyright 2026 The winlayer Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "winlayer/geometry.hpp"
#include "winlayer/spectral_analysis.hpp"
#include "winlayer/window_eigs.hpp"

namespace winlayer::cli {

/// The config file (or --set overrides) is malformed or out of range.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ShapeKind { kDisk, kProfile, kSuperellipse };

struct WindowBlock {
  ShapeKind kind = ShapeKind::kDisk;
  double radius = 1.0;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;
  double scale = 1.0;
  double power = 24.0;  // superellipse |x|^p + |y|^p = scale^p
};

struct WindowSpectrumBlock {
  double fem_h = 0.05;
  int count = 12;
  std::string bc = "both";  // dirichlet | neumann | both
  bool dump_mesh = false;
};

struct SolveBlock {
  bool half_domain = false;
  bool export_eigenfunctions = true;
  bool refine = true;
  std::vector<double> refine_ladder;  // empty: {2h, h, h/2}
};

struct CriticalBlock {
  int n = 2;
  double t_lo = 1.0;
  double t_hi = 6.0;
  int sector = -1;  // -1: all sectors
  double rel_tol = 1e-4;
};

struct GapLawBlock {
  double t_n = 0.0;  // 0: locate it with the [critical] block
  int n = 2;
  int sector = 0;
  std::vector<double> eps{0.10, 0.08, 0.06, 0.05};
  double beta = 1.0;
  double max_pad = 20000.0;
};

struct EdgeBlock {
  double t = 0.0;  // 0: locate it with the [critical] block
  int grading_rings = 18;
  int first_node = 3;
  int node_count = 7;
  double rho_star = 0.0;
  double pad = 2000.0;
  double beta = 1.0;
};

struct ConvergenceBlock {
  std::string mode = "window";  // window | rectangle
  std::vector<double> ladder{0.1, 0.05, 0.025};
  int m = 0;
  double rect_a = 1.0;
  double rect_b = 2.0;
};

struct SweepBlock {
  std::vector<double> t_values{3.0, 4.0, 5.0, 6.0};
  double tolerance = 1e-8;
};

struct RunConfig {
  double d = 3.141592653589793;
  WindowBlock window;
  Numerics numerics;
  WindowSpectrumBlock window_spectrum;
  SolveBlock solve;
  CriticalBlock critical;
  GapLawBlock gap_law;
  EdgeBlock edge;
  ConvergenceBlock convergence;
  SweepBlock sweep;

  /// Effective value of every key, section -> key -> canonical text.
  std::map<std::string, std::map<std::string, std::string>> echo() const;
  /// FNV-1a 64 of the sorted "section.key=value" lines of echo(), in hex.
  std::string hash() const;

  LayerPair layers() const { return LayerPair(d); }
  WindowShape shape() const;
  /// Radius of a circular window; ConfigError otherwise.
  double disk_radius(const char* command) const;
};

/// Parses INI text (sections and key = value lines) on top of the defaults,
/// then applies "section.key=value" overrides.  Every value is range-checked
/// here, before any computation; unknown sections and keys are errors.
RunConfig parse_config(const std::string& ini_text, const std::vector<std::string>& overrides = {});
RunConfig load_config(const std::optional<std::string>& path, const std::vector<std::string>& overrides = {});

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& bytes);

}  // namespace winlayer::cli
