#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "maintseg/core.hpp"
#include "maintseg/protocol.hpp"

namespace maintseg {

/// Business score of a first alert at sample a in a cycle of n samples:
///   no alert or a >= n - rd         -> 0
///   n - (rd + pp) <= a < n - rd     -> 1
///   otherwise                       -> (e^{s a} - 1) / (e^{s (n - rd - pp)} - 1)
/// The early-alert branch is continuous at the padding boundary and tends to
/// a / (n - rd - pp) as s -> 0.
double e_score(std::optional<double> a, double n, double pp, double rd, double s);

struct EvaluationRecord {
  std::string atm_id;
  int cycle_index = 0;
  std::string config_id;
  Verdict verdict = Verdict::FN;
  std::optional<Alert> alert;
  double e_score = 0.0;
  std::size_t n = 0;
  double period_hours = 24.0;
  BusinessParams params;  // days

  friend bool operator==(const EvaluationRecord&, const EvaluationRecord&) = default;
};

/// Classifies and scores one streaming outcome. pp and rd are converted from
/// days to samples with the cycle period.
EvaluationRecord score_alert(const LifeCycle& cycle, const std::string& config_id,
                             const std::optional<Alert>& alert, const BusinessParams& params);

/// Re-derives verdict and score of each record under other business params.
std::vector<EvaluationRecord> rescore(std::span<const EvaluationRecord> records, const BusinessParams& params);

struct Aggregate {
  std::size_t count = 0;
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  double mean_e = 0.0;
  double precision = 0.0;  // 0 and precision_defined == false when TP + FP == 0
  double recall = 0.0;     // 0 and recall_defined == false when TP + FN == 0
  bool precision_defined = true;
  bool recall_defined = true;
};

Aggregate aggregate(std::span<const EvaluationRecord> records);

struct ConfigScore {
  std::string config_id;
  Aggregate aggregate;
};

/// One aggregate per config id, in id order.
std::vector<ConfigScore> aggregate_by_config(std::span<const EvaluationRecord> records);

/// Highest mean score; ties go to higher precision, then the smaller id.
ConfigScore best_average_config(std::span<const EvaluationRecord> records);

class IncompleteGridError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct CycleBest {
  std::string atm_id;
  int cycle_index = 0;
  std::string config_id;
  double e_score = 0.0;
};

struct BestPerSample {
  std::vector<CycleBest> per_cycle;  // sorted by (atm_id, cycle_index)
  double mean_e = 0.0;
};

/// Per cycle, the best score over all configs (ties to the smaller id).
/// Throws IncompleteGridError unless every cycle has every config.
BestPerSample best_per_sample(std::span<const EvaluationRecord> records);

/// Method part of a config id ("PELT/L2/..." -> "PELT").
std::string method_of(const std::string& config_id);

enum class StabilityLevel { Method, Config };

struct StabilityStats {
  std::size_t atms_with_multiple_cycles = 0;  // > 1 cycle
  std::size_t atms_same_model = 0;
  std::size_t atms_with_over_two_cycles = 0;  // > 2 cycles
  std::size_t atms_at_most_one_change = 0;
  double same_model_fraction = 0.0;
  double one_change_fraction = 0.0;
};

/// Whether each machine keeps the same best model across its cycles (in
/// cycle order), and whether the sequence changes at most once.
StabilityStats model_stability(std::span<const CycleBest> per_cycle, StabilityLevel level = StabilityLevel::Method);

}  // namespace maintseg
