// Copyright 2026 The winlayer Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "report.hpp"
#include "run_config.hpp"

namespace winlayer::cli {

/// The subcommand names, in help order.
const std::vector<std::string>& command_names();

/// Runs one subcommand and fills `out`.  Library errors propagate:
/// InvalidInput and ConfigError are configuration problems, the other
/// winlayer errors numerical ones.
void run_command(const std::string& name, const RunConfig& config, Artifacts& out);

/// Ladder for the convergence summary of `solve`: the configured one, or
/// {2h, h, h/2} around the solve step h.
std::vector<double> solve_ladder(const RunConfig& config);

/// Base ring count for refine_study that gives the ladder level at step
/// `h_ref` the ring count configured in `grid`.
int ladder_base_rings(const GridSpec& grid, const std::vector<double>& ladder, double h_ref);

}  // namespace winlayer::cli
