#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "maintseg/core.hpp"
#include "maintseg/detectors.hpp"

namespace maintseg {

/// Which quantity of an alert is compared against the business intervals.
enum class AlertTiming {
  WindowEnd,    // end of the window that fired: when the system could act
  ChangePoint,  // the detector's reported change-point position
};

std::string_view to_string(AlertTiming timing);
AlertTiming parse_alert_timing(std::string_view text);

struct Alert {
  std::size_t window_number = 0;   // 0-based position among the prefix windows
  std::size_t step_end_index = 0;  // end of the window that fired
  std::size_t change_point_index = 0;
  double a = 0.0;                  // alert time in samples from cycle start

  friend bool operator==(const Alert&, const Alert&) = default;
};

enum class Verdict { TP, FP, FN, TN };

std::string_view to_string(Verdict verdict);
Verdict parse_verdict(std::string_view text);

struct WindowTrace {
  std::size_t window_number = 0;
  std::size_t end_index = 0;
  std::optional<std::size_t> change_point;
  double score = 0.0;
};

struct StreamingResult {
  std::optional<Alert> alert;
  std::vector<WindowTrace> trace;  // one row per evaluated window
};

using WindowDetector = std::function<Detection(const Signal& window)>;

/// Grows the cycle by `step` samples at a time and stops at the first window
/// in which the detector fires; no later window is evaluated.
StreamingResult run_streaming(const LifeCycle& cycle, const WindowDetector& detector,
                              std::size_t step = 7, AlertTiming timing = AlertTiming::WindowEnd);

StreamingResult run_streaming(const LifeCycle& cycle, const DetectorConfig& config,
                              std::size_t step = 7, AlertTiming timing = AlertTiming::WindowEnd);

/// Verdict of a first alert at time a for a cycle of n samples, with pp and
/// rd expressed in samples:
///   no alert                 -> FN
///   n-(pp+rd) <= a < n-rd    -> TP
///   otherwise                -> FP
/// The inequalities are applied literally, also when n <= pp + rd.
Verdict classify(std::optional<double> a, double n, double pp, double rd);

}  // namespace maintseg
