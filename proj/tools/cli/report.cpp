// Copyright 2026 The winlayer Authors
// SPDX-License-Identifier: Apache-2.0

#include "report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace winlayer::cli {

std::string fmt(double v) {
  std::array<char, 64> buf{};
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), r.ptr);
}

void Table::add(std::vector<std::string> row) {
  row.resize(header_.size());
  rows_.push_back(std::move(row));
}

std::string Table::render() const {
  std::vector<std::size_t> width(header_.size());
  for (std::size_t c = 0; c < header_.size(); ++c) {
    width[c] = header_[c].size();
    for (const auto& r : rows_) width[c] = std::max(width[c], r[c].size());
  }
  auto emit = [&](const std::vector<std::string>& r) {
    std::string s;
    for (std::size_t c = 0; c < r.size(); ++c) {
      s += r[c];
      if (c + 1 < r.size()) s += std::string(width[c] - r[c].size() + 2, ' ');
    }
    return s + "\n";
  };
  std::string out = emit(header_);
  for (const auto& r : rows_) out += emit(r);
  return out;
}

std::string Table::csv() const {
  auto emit = [](const std::vector<std::string>& r) {
    std::string s;
    for (std::size_t c = 0; c < r.size(); ++c) s += (c ? "," : "") + r[c];
    return s + "\n";
  };
  std::string out = emit(header_);
  for (const auto& r : rows_) out += emit(r);
  return out;
}

void Artifacts::line(const std::string& text) { text_ += text + "\n"; }

void Artifacts::table(const std::string& title, const Table& t) {
  text_ += "\n" + title + "\n" + t.render();
}

void Artifacts::csv(const std::string& file, const Table& t) { csv_.emplace_back(file, t); }

void Artifacts::file(const std::string& name, std::string content) { files_.emplace_back(name, std::move(content)); }

std::string Artifacts::json_text(const RunConfig& config) const {
  nlohmann::json doc;
  doc["tool"] = "winlayer";
  doc["version"] = kToolVersion;
  doc["command"] = command_;
  doc["config_hash"] = config.hash();
  doc["config"] = config.echo();
  doc["result"] = result_;
  return doc.dump(2) + "\n";
}

std::string Artifacts::text_report(const RunConfig& config, double wall_seconds) const {
  std::array<char, 64> wall{};
  std::snprintf(wall.data(), wall.size(), "%.3f", wall_seconds);
  std::string out = "winlayer " + std::string(kToolVersion) + "  command=" + command_ +
                    "  config_hash=" + config.hash() + "\n";
  out += text_;
  out += "\nwall_clock_seconds: " + std::string(wall.data()) + "\n";
  return out;
}

void Artifacts::write(const RunConfig& config, const std::string& dir, double wall_seconds) const {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const std::string provenance =
      "# winlayer " + std::string(kToolVersion) + " command=" + command_ + " config_hash=" + config.hash() + "\n";
  auto put = [&](const std::string& name, const std::string& content) {
    const fs::path path = fs::path(dir) / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) throw std::runtime_error("cannot write " + path.string());
  };
  put(command_ + ".json", json_text(config));
  put(command_ + ".txt", text_report(config, wall_seconds));
  for (const auto& [name, t] : csv_) put(name, provenance + t.csv());
  for (const auto& [name, content] : files_) put(name, content);
}

}  // namespace winlayer::cli
