#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "maintseg/core.hpp"
#include "maintseg/detectors.hpp"
#include "maintseg/metrics.hpp"
#include "maintseg/protocol.hpp"

namespace maintseg {

/// Parameter lists for one method; the grid is their cartesian product.
/// Lists that do not apply to the method are ignored.
struct MethodGrid {
  std::vector<SegmentCost> costs;
  std::vector<double> penalties;
  std::vector<std::size_t> min_sizes{2};
  std::vector<double> thresholds;
  std::vector<std::size_t> subsequences{7};
  std::vector<bool> znorm{false};
  std::vector<ChannelRule> channel_rules{ChannelRule::Any};
};

/// Grid file layout, one object per method:
///   {"PELT": {"costs": ["L2", "RBF:median"], "penalties": {"logspace": [0.01, 1000, 12]},
///             "min_sizes": [2, 3, 7], "znorm": [false, true]},
///    "FLUSS": {"thresholds": {"linspace": [0.3, 0.6, 25]}, "subsequences": [5, 7, 14],
///              "znorm": [false, true], "channel_rules": ["ANY", "SUM"]}}
/// Numeric lists may be plain arrays or {"logspace"|"linspace": [lo, hi, count]};
/// generated values are rounded to 6 significant digits.
struct GridSpec {
  std::map<Method, MethodGrid> methods;

  static GridSpec from_json(const nlohmann::json& doc);
  /// Shipped default: 288-300 configs per method.
  static nlohmann::json default_json();
};

class GridSpecError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Cartesian expansion in canonical order. Duplicate ids throw GridSpecError.
std::vector<DetectorConfig> build_grid(const GridSpec& spec);

struct FailedPair {
  std::string atm_id;
  int cycle_index = 0;
  std::string config_id;
  std::string reason;
};

struct ResultsTable {
  std::vector<EvaluationRecord> records;  // canonical order
  std::vector<FailedPair> failures;
  nlohmann::json grid;
  std::string fingerprint;
  std::string version = MAINTSEG_VERSION;
  bool partial = false;
};

struct SweepOptions {
  BusinessParams params;
  std::size_t step = 7;
  AlertTiming timing = AlertTiming::WindowEnd;
  std::size_t workers = 1;
  /// When set, records are appended here as they complete, and pairs already
  /// present in the file are skipped (resume).
  std::optional<std::filesystem::path> results_path;
  std::function<void(std::size_t done, std::size_t total)> progress;
};

/// Evaluates every (cycle, config) pair through the streaming protocol and
/// scores it. Output is identical for any worker count. Failing pairs are
/// recorded in `failures` and mark the table partial.
ResultsTable run_sweep(std::span<const LifeCycle> cycles, std::span<const DetectorConfig> configs,
                       const SweepOptions& options);

/// Canonical order: (atm_id, cycle_index, config_id).
void sort_records(std::vector<EvaluationRecord>& records);

/// Results file: header then one record per line with columns
/// atm_id,cycle_index,config_id,verdict,step_end_index,change_point_index,a,n,e_score
/// (alert fields empty when there is no alert).
void write_results_header(std::ostream& out);
void write_result_row(std::ostream& out, const EvaluationRecord& record);
void write_results(std::ostream& out, std::span<const EvaluationRecord> records);
void write_results(const std::filesystem::path& path, std::span<const EvaluationRecord> records);

/// Reads a results file. Verdicts and scores are taken as written; period and
/// params must be re-applied by the caller (see rescore) when needed.
std::vector<EvaluationRecord> read_results(std::istream& in, double period_hours = 24.0);
std::vector<EvaluationRecord> read_results(const std::filesystem::path& path, double period_hours = 24.0);

}  // namespace maintseg
