// Copyright 2026 The winlayer Authors
// SPDX-License-Identifier: Apache-2.0

#include <chrono>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "report.hpp"
#include "run_config.hpp"
#include "winlayer/error.hpp"

namespace {

constexpr int kExitNumerical = 1;
constexpr int kExitConfig = 2;

}  // namespace

int main(int argc, char** argv) {
  using namespace winlayer;
  CLI::App app{"Bound states of two Dirichlet layers coupled through a window"};
  app.set_version_flag("--version", std::string(cli::kToolVersion));
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand

  std::optional<std::string> config_path;
  std::vector<std::string> overrides;
  std::string out_dir = "winlayer_out";
  std::optional<int> threads;
  bool half_domain = false;
  bool dump_mesh = false;
  bool quiet = false;

  app.add_option("-c,--config", config_path, "INI config file ([section] key = value)");
  app.add_option("-s,--set", overrides, "override one key: section.key=value (repeatable)");
  app.add_option("-o,--out", out_dir, "directory for the JSON, text and CSV artifacts");
  app.add_option("-j,--threads", threads, "worker threads (overrides solver.threads)")->check(CLI::Range(1, 256));
  app.add_flag("-q,--quiet", quiet, "do not print the text report");

  const std::map<std::string, std::string> about{
      {"bounds", "Dirichlet/Neumann brackets and count bounds from the window spectra"},
      {"window-eigs", "eigenvalues of the window (analytic for disks, P1 FEM otherwise)"},
      {"solve", "bound states of a circular window, checked against the brackets"},
      {"critical", "bisection for the scale where the n-th state appears"},
      {"gap-law", "ln(gap) against 1/eps for dilations of a critical window"},
      {"edge", "edge amplitude of the threshold resonance at a critical scale"},
      {"convergence", "grid refinement study of the window problem or a rectangle"},
      {"sweep", "monotonicity of the eigenvalues over a list of window scales"}};
  for (const auto& name : cli::command_names()) {
    CLI::App* sub = app.add_subcommand(name, about.at(name));
    if (name == "solve") sub->add_flag("--half-domain", half_domain, "even-parity reduction (d = pi only)");
    if (name == "window-eigs") sub->add_flag("--dump-mesh", dump_mesh, "write the FEM mesh to mesh.csv");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  if (threads) overrides.push_back("solver.threads=" + std::to_string(*threads));
  if (half_domain) overrides.push_back("solve.half_domain=true");
  if (dump_mesh) overrides.push_back("window_spectrum.dump_mesh=true");

  cli::RunConfig config;
  try {
    config = cli::load_config(config_path, overrides);
  } catch (const cli::ConfigError& e) {
    std::cerr << "winlayer: configuration error: " << e.what() << "\n";
    return kExitConfig;
  }

  const auto start = std::chrono::steady_clock::now();
  cli::Artifacts artifacts(command);
  try {
    cli::run_command(command, config, artifacts);
  } catch (const cli::ConfigError& e) {
    std::cerr << "winlayer: configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InvalidInput& e) {
    std::cerr << "winlayer: invalid input: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "winlayer: " << command << " failed: " << e.what() << "\n";
    return kExitNumerical;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  try {
    artifacts.write(config, out_dir, wall);
  } catch (const std::exception& e) {
    std::cerr << "winlayer: " << e.what() << "\n";
    return kExitNumerical;
  }
  if (!quiet) std::cout << artifacts.text_report(config, wall);
  return 0;
}
