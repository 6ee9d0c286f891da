#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "maintseg/core.hpp"

namespace maintseg {

enum class Severity { Ok, Warning, Error };

std::string_view to_string(Severity severity);
Severity parse_severity(std::string_view text);

/// Thrown for invalid grouping configurations and column mappings.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Thrown when more than 10% of the data rows of an event log are malformed.
class ParseQualityError : public std::runtime_error {
public:
  ParseQualityError(std::size_t malformed, std::size_t rows);
  std::size_t malformed() const noexcept { return malformed_; }
  std::size_t rows() const noexcept { return rows_; }

private:
  std::size_t malformed_;
  std::size_t rows_;
};

struct CodeSlot {
  std::string group;
  Severity severity = Severity::Ok;
};

/// value = sum(numerator severities over groups) / max(sum(denominator), 1)
struct FeatureRecipe {
  std::string name;
  std::vector<Severity> numerator;
  Severity denominator = Severity::Ok;
  std::vector<std::string> groups;
};

/// Maps module-relevant event codes to (group, severity) and lists the ratio
/// features built from the grouped counts. Codes absent from `codes` are
/// discarded during feature construction.
struct CodeGroupingConfig {
  std::map<std::string, CodeSlot> codes;
  std::vector<FeatureRecipe> features;
  /// Groups whose events (any severity) count as machine activity.
  std::vector<std::string> activity_groups;

  void validate() const;
  std::vector<std::string> feature_names() const;
  std::vector<std::string> module_codes() const;

  static CodeGroupingConfig from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;

  /// Distribution-module layout with four features: distribution Error/OK,
  /// distribution Warning/OK, storage boxes (K7, five boxes pooled) Error/OK
  /// and withdrawal Error/OK. Only 6000/6001/6002 are real dataset codes; the
  /// storage-box and withdrawal codes are named placeholders.
  static CodeGroupingConfig atm_default();
};

struct FailureMark {
  std::string atm_id;
  Timestamp failure_time{};
  std::string module;
};

/// Column names of a delimited event log. An empty lifecycle_id means the
/// column is absent and cycles must be split on failure marks.
struct ColumnMapping {
  char delimiter = ',';
  std::string timestamp = "timestamp";
  std::string atm_id = "atm_id";
  std::string lifecycle_id = "lifecycle_id";
  std::string event_code = "event_code";

  static ColumnMapping from_json(const nlohmann::json& doc);
};

struct ParseResult {
  std::vector<EventRecord> records;
  std::size_t rows = 0;
  std::size_t malformed_count = 0;
  /// 1-based line numbers of the first malformed rows (at most 20).
  std::vector<std::size_t> malformed_lines;
};

/// Reads a header-first delimited table. Records come back sorted by
/// (atm_id, lifecycle_id, timestamp).
ParseResult parse_event_log(std::istream& source, const ColumnMapping& mapping);
ParseResult parse_event_log(const std::filesystem::path& path, const ColumnMapping& mapping);

/// Columns atm_id, failure_time, module (header required).
std::vector<FailureMark> parse_failures(std::istream& source, char delimiter = ',');

/// Drops every record of machine m lying in [f, f + ii_days] for a failure f
/// of m. ii_days == 0 removes nothing.
std::vector<EventRecord> remove_infected(std::span<const EventRecord> records,
                                         std::span<const FailureMark> failures, double ii_days);

/// Splits sorted records into life cycles by lifecycle_id, per machine.
std::vector<std::vector<EventRecord>> group_by_cycle(std::span<const EventRecord> records);

/// Re-labels lifecycle_id from failure marks: a new cycle starts after each
/// failure of the machine. Input must be sorted by machine then time.
std::vector<EventRecord> split_on_failures(std::span<const EventRecord> records,
                                           std::span<const FailureMark> failures);

/// Occurrence counts, buckets x codes, row-major.
struct CountMatrix {
  std::vector<std::string> codes;
  std::size_t buckets = 0;
  std::vector<double> counts;
  Timestamp start{};
  double period_hours = 24.0;

  double at(std::size_t bucket, std::size_t code) const { return counts[bucket * codes.size() + code]; }
  double total() const;
};

/// Counts events per (bucket, code). Bucket k covers [start + kF, start + (k+1)F);
/// there are ceil((end - start) / F) buckets, at least one, and events at the
/// very end fall in the last one. start/end default to the first/last record.
CountMatrix resample(std::span<const EventRecord> cycle_records, double period_hours,
                     const std::vector<std::string>& code_universe,
                     std::optional<Timestamp> start = std::nullopt,
                     std::optional<Timestamp> end = std::nullopt);

struct CycleMeta {
  std::string atm_id;
  int cycle_index = 0;
  Timestamp end_time{};
  bool ended_in_failure = true;
};

LifeCycle build_features(const CountMatrix& counts, const CodeGroupingConfig& config,
                         const CycleMeta& meta);

struct DurationGroup {
  std::size_t cycles_per_atm = 0;
  std::size_t atm_count = 0;
  std::size_t cycle_count = 0;
  double min_days = 0.0;
  double median_days = 0.0;
  double max_days = 0.0;
  /// Mean activity events per day; NaN when no cycle carries activity counts.
  double mean_daily_activity = 0.0;
};

struct DatasetStats {
  std::size_t total_cycles = 0;
  std::size_t total_atms = 0;
  std::vector<DurationGroup> groups;  // ascending cycles_per_atm
};

DatasetStats dataset_stats(std::span<const LifeCycle> cycles);
nlohmann::json to_json(const DatasetStats& stats);

// Canonical cycle files: <dir>/<atm>__<cycle>.csv with the feature names as
// header and one row per bucket, plus a <atm>__<cycle>.json sidecar.
std::filesystem::path write_cycle(const LifeCycle& cycle, const std::filesystem::path& dir);
LifeCycle read_cycle(const std::filesystem::path& csv_path);
/// All cycles of a directory, sorted by (atm_id, cycle_index).
std::vector<LifeCycle> read_cycle_dir(const std::filesystem::path& dir);
/// FNV-1a 64 over the names and bytes of the canonical files, hex encoded.
std::string corpus_fingerprint(const std::filesystem::path& dir);

}  // namespace maintseg
