#include "maintseg/protocol.hpp"

#include <fmt/format.h>
#include <stdexcept>

namespace maintseg {

std::string_view to_string(AlertTiming timing) {
  return timing == AlertTiming::WindowEnd ? "window-end" : "changepoint";
}

AlertTiming parse_alert_timing(std::string_view text) {
  if (text == "window-end") return AlertTiming::WindowEnd;
  if (text == "changepoint") return AlertTiming::ChangePoint;
  throw std::invalid_argument(fmt::format("unknown alert timing '{}'", text));
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::TP: return "TP";
    case Verdict::FP: return "FP";
    case Verdict::FN: return "FN";
    case Verdict::TN: return "TN";
  }
  return "?";
}

Verdict parse_verdict(std::string_view text) {
  for (Verdict v : {Verdict::TP, Verdict::FP, Verdict::FN, Verdict::TN}) {
    if (to_string(v) == text) return v;
  }
  throw std::invalid_argument(fmt::format("unknown verdict '{}'", text));
}

StreamingResult run_streaming(const LifeCycle& cycle, const WindowDetector& detector, std::size_t step,
                              AlertTiming timing) {
  if (cycle.length() == 0) throw std::invalid_argument("run_streaming: empty cycle");
  StreamingResult result;
  const auto ends = prefix_window_ends(cycle.length(), step);
  for (std::size_t w = 0; w < ends.size(); ++w) {
    const Detection det = detector(cycle.samples.prefix(ends[w]));
    result.trace.push_back({w, ends[w], det.change_point, det.score});
    if (det.change_point) {
      Alert alert{w, ends[w], *det.change_point, 0.0};
      alert.a = static_cast<double>(timing == AlertTiming::WindowEnd ? alert.step_end_index
                                                                      : alert.change_point_index);
      result.alert = alert;
      break;
    }
  }
  return result;
}

StreamingResult run_streaming(const LifeCycle& cycle, const DetectorConfig& config, std::size_t step,
                              AlertTiming timing) {
  config.validate();
  return run_streaming(
      cycle, [&config](const Signal& window) { return detect_scored(window, config); }, step, timing);
}

Verdict classify(std::optional<double> a, double n, double pp, double rd) {
  if (!a) return Verdict::FN;
  if (*a >= n - (pp + rd) && *a < n - rd) return Verdict::TP;
  return Verdict::FP;
}

}  // namespace maintseg
