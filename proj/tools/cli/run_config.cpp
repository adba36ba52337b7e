// Copyright 2026 The winlayer Authors
// SPDX-License-Identifier: Apache-2.0

#include "run_config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "winlayer/error.hpp"

namespace winlayer::cli {
namespace {

using Setter = std::function<void(RunConfig&, const std::string&)>;
using Getter = std::function<std::string(const RunConfig&)>;

struct Field {
  std::string section;
  std::string key;
  Setter set;
  Getter get;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string format_real(double v) {
  std::array<char, 64> buf{};
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), r.ptr);
}

double strict_number(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto r = std::from_chars(first, last, v);
  if (r.ec != std::errc() || r.ptr != last) throw ConfigError(what + ": not a number: '" + text + "'");
  return v;
}

// Plain decimals plus the forms "pi", "pi/k" and "k*pi", which is how
// layer widths are usually written.
double parse_real(const std::string& raw, const std::string& what) {
  const std::string text = trim(raw);
  if (text.empty()) throw ConfigError(what + ": empty value");
  double v = 0.0;
  if (text == "pi") {
    v = std::numbers::pi;
  } else if (text.rfind("pi/", 0) == 0) {
    v = std::numbers::pi / strict_number(text.substr(3), what);
  } else if (text.size() > 3 && text.compare(text.size() - 3, 3, "*pi") == 0) {
    v = strict_number(text.substr(0, text.size() - 3), what) * std::numbers::pi;
  } else {
    v = strict_number(text, what);
  }
  if (!std::isfinite(v)) throw ConfigError(what + ": value is not finite");
  return v;
}

int parse_int(const std::string& raw, const std::string& what) {
  const std::string text = trim(raw);
  int v = 0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || r.ec != std::errc() || r.ptr != text.data() + text.size()) {
    throw ConfigError(what + ": not an integer: '" + text + "'");
  }
  return v;
}

bool parse_bool(const std::string& raw, const std::string& what) {
  const std::string t = trim(raw);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError(what + ": expected true or false, got '" + t + "'");
}

std::vector<double> parse_list(const std::string& raw, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(parse_real(item, what));
  }
  return out;
}

std::string format_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += format_real(v[i]);
  }
  return s;
}

std::string format_bool(bool b) { return b ? "true" : "false"; }

void require(bool ok, const std::string& what, const std::string& rule) {
  if (!ok) throw ConfigError(what + " must " + rule);
}

// Field builders.  Each binds a member through an accessor lambda and
// applies its range check on assignment.
template <class Access>
Field real(std::string section, std::string key, Access access, std::function<bool(double)> ok, std::string rule) {
  const std::string what = section + "." + key;
  return {section, key,
          [=](RunConfig& c, const std::string& v) {
            const double x = parse_real(v, what);
            require(ok(x), what, rule);
            access(c) = x;
          },
          [=](const RunConfig& c) { return format_real(access(c)); }};
}

template <class Access>
Field integer(std::string section, std::string key, Access access, std::function<bool(int)> ok, std::string rule) {
  const std::string what = section + "." + key;
  return {section, key,
          [=](RunConfig& c, const std::string& v) {
            const int x = parse_int(v, what);
            require(ok(x), what, rule);
            access(c) = x;
          },
          [=](const RunConfig& c) { return std::to_string(access(c)); }};
}

template <class Access>
Field boolean(std::string section, std::string key, Access access) {
  const std::string what = section + "." + key;
  return {section, key, [=](RunConfig& c, const std::string& v) { access(c) = parse_bool(v, what); },
          [=](const RunConfig& c) { return format_bool(access(c)); }};
}

template <class Access>
Field list(std::string section, std::string key, Access access) {
  const std::string what = section + "." + key;
  return {section, key, [=](RunConfig& c, const std::string& v) { access(c) = parse_list(v, what); },
          [=](const RunConfig& c) { return format_list(access(c)); }};
}

template <class Access>
Field choice(std::string section, std::string key, Access access, std::vector<std::string> allowed) {
  const std::string what = section + "." + key;
  return {section, key,
          [=](RunConfig& c, const std::string& v) {
            const std::string t = trim(v);
            if (std::find(allowed.begin(), allowed.end(), t) == allowed.end()) {
              std::string opts;
              for (const auto& a : allowed) opts += (opts.empty() ? "" : ", ") + a;
              throw ConfigError(what + ": expected one of " + opts + ", got '" + t + "'");
            }
            access(c) = t;
          },
          [=](const RunConfig& c) { return access(c); }};
}

bool positive(double x) { return x > 0.0; }
bool nonneg(double x) { return x >= 0.0; }

const char* to_text(ShapeKind k) {
  switch (k) {
    case ShapeKind::kDisk: return "disk";
    case ShapeKind::kProfile: return "profile";
    case ShapeKind::kSuperellipse: return "superellipse";
  }
  return "disk";
}

const std::vector<Field>& schema() {
  static const std::vector<Field> fields = [] {
    std::vector<Field> f;
    f.push_back(real("layers", "d", [](auto& c) -> auto& { return c.d; },
                     [](double x) { return x > 0.0 && x <= std::numbers::pi; }, "lie in (0, pi]"));

    f.push_back({"window", "shape",
                 [](RunConfig& c, const std::string& v) {
                   const std::string t = trim(v);
                   if (t == "disk") c.window.kind = ShapeKind::kDisk;
                   else if (t == "profile") c.window.kind = ShapeKind::kProfile;
                   else if (t == "superellipse") c.window.kind = ShapeKind::kSuperellipse;
                   else throw ConfigError("window.shape: expected disk, profile or superellipse, got '" + t + "'");
                 },
                 [](const RunConfig& c) { return std::string(to_text(c.window.kind)); }});
    f.push_back(real("window", "radius", [](auto& c) -> auto& { return c.window.radius; }, positive,
                     "be positive"));
    f.push_back(list("window", "cos", [](auto& c) -> auto& { return c.window.cos_coeffs; }));
    f.push_back(list("window", "sin", [](auto& c) -> auto& { return c.window.sin_coeffs; }));
    f.push_back(real("window", "scale", [](auto& c) -> auto& { return c.window.scale; }, positive,
                     "be positive"));
    f.push_back(real("window", "power", [](auto& c) -> auto& { return c.window.power; },
                     [](double x) { return x >= 2.0 && x <= 64.0; }, "lie in [2, 64]"));

    auto grid = [](auto& c) -> auto& { return c.numerics.grid; };
    f.push_back({"grid", "h",
                 [grid](RunConfig& c, const std::string& v) {
                   const double x = parse_real(v, "grid.h");
                   require(x > 0.0 && x <= 0.5, "grid.h", "lie in (0, 0.5]");
                   grid(c).h_rho = grid(c).h_z = x;
                 },
                 [grid](const RunConfig& c) {
                   const auto& g = grid(c);
                   return g.h_rho == g.h_z ? format_real(g.h_rho) : std::string("mixed");
                 }});
    f.push_back(real("grid", "h_rho", [grid](auto& c) -> auto& { return grid(c).h_rho; },
                     [](double x) { return x > 0.0 && x <= 1.0; }, "lie in (0, 1]"));
    f.push_back(real("grid", "h_z", [grid](auto& c) -> auto& { return grid(c).h_z; },
                     [](double x) { return x > 0.0 && x <= 0.5; }, "lie in (0, 0.5]"));
    f.push_back(real("grid", "grading_ratio", [grid](auto& c) -> auto& { return grid(c).grading_ratio; },
                     [](double x) { return x > 0.0 && x < 1.0; }, "lie in (0, 1)"));
    f.push_back(integer("grid", "grading_rings", [grid](auto& c) -> auto& { return grid(c).grading_rings; },
                        [](int x) { return x >= 0 && x <= 40; }, "lie in [0, 40]"));
    f.push_back(real("grid", "grading_extent", [grid](auto& c) -> auto& { return grid(c).grading_extent; },
                     positive, "be positive"));
    f.push_back(real("grid", "grading_power", [grid](auto& c) -> auto& { return grid(c).grading_power; },
                     [](double x) { return x > 0.5 && x <= 1.0; }, "lie in (1/2, 1]"));
    f.push_back(real("grid", "far_pad", [grid](auto& c) -> auto& { return grid(c).far_pad; }, nonneg,
                     "be nonnegative"));
    f.push_back(real("grid", "growth", [grid](auto& c) -> auto& { return grid(c).growth; },
                     [](double x) { return x >= 1.0 && x <= 1.5; }, "lie in [1, 1.5]"));
    f.push_back(real("grid", "max_step", [grid](auto& c) -> auto& { return grid(c).max_step; }, positive,
                     "be positive"));

    f.push_back(real("truncation", "L", [](auto& c) -> auto& { return c.numerics.L; }, nonneg,
                     "be nonnegative (0 selects the adaptive policy)"));
    f.push_back(real("truncation", "initial_pad", [](auto& c) -> auto& { return c.numerics.initial_pad; },
                     positive, "be positive"));
    f.push_back(real("truncation", "decay_lengths",
                     [](auto& c) -> auto& { return c.numerics.decay_lengths; }, positive, "be positive"));
    f.push_back(real("truncation", "max_pad", [](auto& c) -> auto& { return c.numerics.max_pad; }, positive,
                     "be positive"));
    f.push_back(boolean("truncation", "verify", [](auto& c) -> auto& { return c.numerics.verify_truncation; }));
    f.push_back(real("truncation", "tol", [](auto& c) -> auto& { return c.numerics.truncation_tol; },
                     positive, "be positive"));
    f.push_back(real("truncation", "near_threshold_margin",
                     [](auto& c) -> auto& { return c.numerics.near_threshold_margin; }, nonneg,
                     "be nonnegative"));
    f.push_back(boolean("truncation", "neumann_companion",
                        [](auto& c) -> auto& { return c.numerics.neumann_companion; }));

    f.push_back(real("solver", "residual_tol", [](auto& c) -> auto& { return c.numerics.eigs.residual_tol; },
                     [](double x) { return x > 0.0 && x < 1e-3; }, "lie in (0, 1e-3)"));
    f.push_back({"solver", "seed",
                 [](RunConfig& c, const std::string& v) {
                   const std::string t = trim(v);
                   std::uint64_t s = 0;
                   const auto r = std::from_chars(t.data(), t.data() + t.size(), s);
                   if (t.empty() || r.ec != std::errc() || r.ptr != t.data() + t.size()) {
                     throw ConfigError("solver.seed: not an unsigned integer: '" + t + "'");
                   }
                   c.numerics.eigs.seed = s;
                 },
                 [](const RunConfig& c) { return std::to_string(c.numerics.eigs.seed); }});
    f.push_back(integer("solver", "max_basis", [](auto& c) -> auto& { return c.numerics.eigs.max_basis; },
                        [](int x) { return x >= 8 && x <= 1000; }, "lie in [8, 1000]"));
    f.push_back(integer("solver", "max_restarts", [](auto& c) -> auto& { return c.numerics.eigs.max_restarts; },
                        [](int x) { return x >= 1 && x <= 1000; }, "lie in [1, 1000]"));
    f.push_back(real("solver", "memory_cap_mb", [](auto& c) -> auto& { return c.numerics.memory_cap_mb; },
                     positive, "be positive"));
    f.push_back(integer("solver", "threads", [](auto& c) -> auto& { return c.numerics.threads; },
                        [](int x) { return x >= 1 && x <= 256; }, "lie in [1, 256]"));
    f.push_back(integer("solver", "max_states_per_sector",
                        [](auto& c) -> auto& { return c.numerics.max_states_per_sector; },
                        [](int x) { return x >= 1; }, "be positive"));
    f.push_back(integer("solver", "max_sectors", [](auto& c) -> auto& { return c.numerics.max_sectors; },
                        [](int x) { return x >= 1; }, "be positive"));

    f.push_back(real("window_spectrum", "fem_h", [](auto& c) -> auto& { return c.window_spectrum.fem_h; },
                     positive, "be positive"));
    f.push_back(integer("window_spectrum", "count", [](auto& c) -> auto& { return c.window_spectrum.count; },
                        [](int x) { return x >= 1 && x <= 4096; }, "lie in [1, 4096]"));
    f.push_back(choice("window_spectrum", "bc", [](auto& c) -> auto& { return c.window_spectrum.bc; },
                       {"both", "dirichlet", "neumann"}));
    f.push_back(boolean("window_spectrum", "dump_mesh",
                        [](auto& c) -> auto& { return c.window_spectrum.dump_mesh; }));

    f.push_back(boolean("solve", "half_domain", [](auto& c) -> auto& { return c.solve.half_domain; }));
    f.push_back(boolean("solve", "export_eigenfunctions",
                        [](auto& c) -> auto& { return c.solve.export_eigenfunctions; }));
    f.push_back(boolean("solve", "refine", [](auto& c) -> auto& { return c.solve.refine; }));
    f.push_back(list("solve", "refine_ladder",
                     [](auto& c) -> auto& { return c.solve.refine_ladder; }));

    f.push_back(integer("critical", "n", [](auto& c) -> auto& { return c.critical.n; },
                        [](int x) { return x >= 2; }, "be at least 2 (the ground state always exists)"));
    f.push_back(real("critical", "t_lo", [](auto& c) -> auto& { return c.critical.t_lo; }, positive,
                     "be positive"));
    f.push_back(real("critical", "t_hi", [](auto& c) -> auto& { return c.critical.t_hi; }, positive,
                     "be positive"));
    f.push_back(integer("critical", "sector", [](auto& c) -> auto& { return c.critical.sector; },
                        [](int x) { return x >= -1; }, "be -1 (all sectors) or a sector index"));
    f.push_back(real("critical", "rel_tol", [](auto& c) -> auto& { return c.critical.rel_tol; },
                     [](double x) { return x > 0.0 && x < 0.1; }, "lie in (0, 0.1)"));

    f.push_back(real("gap_law", "t_n", [](auto& c) -> auto& { return c.gap_law.t_n; }, nonneg,
                     "be nonnegative (0 locates it first)"));
    f.push_back(integer("gap_law", "n", [](auto& c) -> auto& { return c.gap_law.n; },
                        [](int x) { return x >= 1; }, "be positive"));
    f.push_back(integer("gap_law", "sector", [](auto& c) -> auto& { return c.gap_law.sector; },
                        [](int x) { return x >= -1; }, "be -1 (all sectors) or a sector index"));
    f.push_back(list("gap_law", "eps", [](auto& c) -> auto& { return c.gap_law.eps; }));
    f.push_back(real("gap_law", "beta", [](auto& c) -> auto& { return c.gap_law.beta; }, positive,
                     "be positive"));
    f.push_back(real("gap_law", "max_pad", [](auto& c) -> auto& { return c.gap_law.max_pad; }, positive,
                     "be positive"));

    f.push_back(real("edge", "t", [](auto& c) -> auto& { return c.edge.t; }, nonneg,
                     "be nonnegative (0 locates it first)"));
    f.push_back(integer("edge", "grading_rings", [](auto& c) -> auto& { return c.edge.grading_rings; },
                        [](int x) { return x >= 4 && x <= 40; }, "lie in [4, 40]"));
    f.push_back(integer("edge", "first_node", [](auto& c) -> auto& { return c.edge.first_node; },
                        [](int x) { return x >= 1; }, "be positive"));
    f.push_back(integer("edge", "node_count", [](auto& c) -> auto& { return c.edge.node_count; },
                        [](int x) { return x >= 3; }, "be at least 3"));
    f.push_back(real("edge", "rho_star", [](auto& c) -> auto& { return c.edge.rho_star; }, nonneg,
                     "be nonnegative"));
    f.push_back(real("edge", "pad", [](auto& c) -> auto& { return c.edge.pad; }, positive, "be positive"));
    f.push_back(real("edge", "beta", [](auto& c) -> auto& { return c.edge.beta; }, positive,
                     "be positive"));

    f.push_back(choice("convergence", "mode", [](auto& c) -> auto& { return c.convergence.mode; },
                       {"window", "rectangle"}));
    f.push_back(list("convergence", "ladder",
                     [](auto& c) -> auto& { return c.convergence.ladder; }));
    f.push_back(integer("convergence", "m", [](auto& c) -> auto& { return c.convergence.m; },
                        [](int x) { return x >= 0; }, "be nonnegative"));
    f.push_back(real("convergence", "rect_a", [](auto& c) -> auto& { return c.convergence.rect_a; },
                     positive, "be positive"));
    f.push_back(real("convergence", "rect_b", [](auto& c) -> auto& { return c.convergence.rect_b; },
                     positive, "be positive"));

    f.push_back(list("sweep", "t_values", [](auto& c) -> auto& { return c.sweep.t_values; }));
    f.push_back(real("sweep", "tolerance", [](auto& c) -> auto& { return c.sweep.tolerance; }, positive,
                     "be positive"));
    return f;
  }();
  return fields;
}

const Field* lookup(const std::string& section, const std::string& key) {
  for (const auto& f : schema()) {
    if (f.section == section && f.key == key) return &f;
  }
  return nullptr;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

void cross_check(const RunConfig& c) {
  if (c.window.kind == ShapeKind::kProfile && c.window.cos_coeffs.empty()) {
    throw ConfigError("window.cos: a profile window needs at least the constant coefficient");
  }
  try {
    (void)c.shape();
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("window: ") + e.what());
  }
  require(c.critical.t_lo < c.critical.t_hi, "critical.t_lo", "be below critical.t_hi");
  require(!c.gap_law.eps.empty() && strictly_decreasing(c.gap_law.eps), "gap_law.eps",
          "be a nonempty strictly decreasing list");
  for (double e : c.gap_law.eps) require(e > 0.0, "gap_law.eps", "hold positive values");
  require(c.convergence.ladder.size() >= 3 && strictly_decreasing(c.convergence.ladder), "convergence.ladder",
          "list at least three strictly decreasing steps");
  for (double h : c.convergence.ladder) require(h > 0.0 && h <= 0.5, "convergence.ladder", "hold steps in (0, 0.5]");
  if (!c.solve.refine_ladder.empty()) {
    require(c.solve.refine_ladder.size() >= 3 && strictly_decreasing(c.solve.refine_ladder), "solve.refine_ladder",
            "list at least three strictly decreasing steps");
  }
  require(!c.sweep.t_values.empty(), "sweep.t_values", "not be empty");
  for (std::size_t i = 0; i < c.sweep.t_values.size(); ++i) {
    require(c.sweep.t_values[i] > 0.0, "sweep.t_values", "hold positive scales");
    if (i > 0) require(c.sweep.t_values[i] > c.sweep.t_values[i - 1], "sweep.t_values", "increase");
  }
  if (c.solve.half_domain) {
    require(std::abs(c.d - std::numbers::pi) <= 1e-12, "solve.half_domain", "only be used with layers.d = pi");
  }
}

}  // namespace

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::map<std::string, std::map<std::string, std::string>> RunConfig::echo() const {
  std::map<std::string, std::map<std::string, std::string>> out;
  for (const auto& f : schema()) out[f.section][f.key] = f.get(*this);
  return out;
}

std::string RunConfig::hash() const {
  std::string canon;
  for (const auto& [section, keys] : echo()) {
    for (const auto& [key, value] : keys) canon += section + "." + key + "=" + value + "\n";
  }
  std::array<char, 17> buf{};
  std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(fnv1a(canon)));
  return std::string(buf.data(), 16);
}

WindowShape RunConfig::shape() const {
  switch (window.kind) {
    case ShapeKind::kDisk:
      return WindowShape::disk(window.radius);
    case ShapeKind::kProfile:
      return WindowShape(window.cos_coeffs, window.sin_coeffs, window.scale);
    case ShapeKind::kSuperellipse: {
      constexpr int kSamples = 512;
      std::vector<double> r(kSamples);
      for (int j = 0; j < kSamples; ++j) {
        const double phi = 2.0 * std::numbers::pi * j / kSamples;
        const double p = window.power;
        r[j] = std::pow(std::pow(std::abs(std::cos(phi)), p) + std::pow(std::abs(std::sin(phi)), p), -1.0 / p);
      }
      return WindowShape::fit_polar(r, 32, window.scale);
    }
  }
  return WindowShape::disk(window.radius);
}

double RunConfig::disk_radius(const char* command) const {
  const WindowShape s = shape();
  if (!s.is_circle()) throw ConfigError(std::string(command) + " needs a circular window (window.shape = disk)");
  return s.radius(0.0);
}

RunConfig parse_config(const std::string& ini_text, const std::vector<std::string>& overrides) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    std::istringstream in(ini_text);
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  RunConfig c;
  std::set<std::string> seen;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("config: key '" + section + "' outside of any section");
    for (const auto& [key, value] : body) {
      const Field* f = lookup(section, key);
      if (!f) throw ConfigError("config: unknown key '" + section + "." + key + "'");
      f->set(c, value.data());
      seen.insert(section + "." + key);
    }
  }
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    const auto dot = o.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
      throw ConfigError("override '" + o + "' is not of the form section.key=value");
    }
    const std::string section = trim(o.substr(0, dot));
    const std::string key = trim(o.substr(dot + 1, eq - dot - 1));
    const Field* f = lookup(section, key);
    if (!f) throw ConfigError("override: unknown key '" + section + "." + key + "'");
    f->set(c, o.substr(eq + 1));
  }
  cross_check(c);
  return c;
}

RunConfig load_config(const std::optional<std::string>& path, const std::vector<std::string>& overrides) {
  std::string text;
  if (path) {
    std::ifstream in(*path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + *path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  return parse_config(text, overrides);
}

}  // namespace winlayer::cli
