#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "driftfuse/evaluation.hpp"
#include "driftfuse/pipeline.hpp"
#include "driftfuse/simulator.hpp"

namespace driftfuse {

/// Plain-text `key = value` configuration: one pair per line, '#' starts a
/// comment. Every lookup marks its key as consumed; finish() rejects
/// leftovers so misspelled keys are reported by name.
class KeyValueFile {
 public:
  static KeyValueFile load(const std::string& path);
  static KeyValueFile from_string(const std::string& text,
                                  const std::string& name = "<memory>");

  bool has(const std::string& key) const;
  double number(const std::string& key, double fallback);
  double required_number(const std::string& key);
  std::int64_t integer(const std::string& key, std::int64_t fallback);
  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback);
  bool flag(const std::string& key, bool fallback);
  std::string text(const std::string& key, const std::string& fallback);
  std::string required_text(const std::string& key);
  std::vector<double> number_list(const std::string& key,
                                  const std::vector<double>& fallback);

  /// Throws ConfigError naming the first unconsumed key.
  void finish() const;

  /// Directory of the source file; relative paths resolve against it.
  const std::string& directory() const { return directory_; }
  std::string resolve_path(const std::string& relative) const;

 private:
  std::string name_;
  std::string directory_;
  struct Entry {
    std::string value;
    mutable bool consumed = false;
  };
  std::map<std::string, Entry> entries_;

  const std::string* fetch(const std::string& key) const;
  double parse_number(const std::string& key, const std::string& raw) const;
};

ScenarioConfig load_scenario_config(const std::string& path);
SweepGrid load_sweep_grid(const std::string& path);

/// Estimator-only configuration, as consumed by log replay.
PipelineParams load_pipeline_params(const std::string& path);

/// Writes the estimator keys of a scenario so a later replay runs the
/// identical pipeline over the logged world-frame streams.
void write_replay_config(const std::string& path, const ScenarioConfig& config);

}  // namespace driftfuse
