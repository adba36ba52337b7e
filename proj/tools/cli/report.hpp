// Copyright 2026 The winlayer Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "run_config.hpp"

namespace winlayer::cli {

/// Shortest text that reads back to the same double.
std::string fmt(double v);

class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}
  void add(std::vector<std::string> row);
  /// Left-aligned text columns separated by two spaces.
  std::string render() const;
  std::string csv() const;
  bool empty() const { return rows_.empty(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Everything a command produces.  Nothing touches the disk until write(),
/// so a failing command leaves no partial artifacts behind.
class Artifacts {
 public:
  explicit Artifacts(std::string command) : command_(std::move(command)) {}

  nlohmann::json& result() { return result_; }
  void line(const std::string& text);
  void table(const std::string& title, const Table& t);
  /// CSV file in the output directory, preceded by a provenance comment.
  void csv(const std::string& file, const Table& t);
  /// Raw file (already carrying its own header).
  void file(const std::string& name, std::string content);

  /// Serialized JSON document (deterministic: sorted keys, no timings).
  std::string json_text(const RunConfig& config) const;
  std::string text_report(const RunConfig& config, double wall_seconds) const;
  /// Writes <command>.json, <command>.txt and the extra files into `dir`
  /// (created when missing).
  void write(const RunConfig& config, const std::string& dir, double wall_seconds) const;

 private:
  std::string command_;
  nlohmann::json result_ = nlohmann::json::object();
  std::string text_;
  std::vector<std::pair<std::string, std::string>> files_;
  std::vector<std::pair<std::string, Table>> csv_;
};

inline constexpr const char* kToolVersion = WINLAYER_VERSION;

}  // namespace winlayer::cli
