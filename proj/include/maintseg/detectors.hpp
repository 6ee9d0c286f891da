#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "maintseg/core.hpp"
#include "maintseg/costs.hpp"
#include "maintseg/matrix_profile.hpp"

namespace maintseg {

enum class Method { Pelt, Binseg, BottomUp, Kcpd, Fluss };

std::string_view to_string(Method method);
Method parse_method(std::string_view text);

/// A fully specified detector. Fields that do not apply to `method` are
/// ignored and rendered as "-" in the identifier.
struct DetectorConfig {
  Method method = Method::Pelt;
  SegmentCost cost;                 // PELT, BINSEG, BOTTOMUP; KCPD requires RBF
  double penalty = 1.0;             // beta, segmentation methods
  double threshold = 0.45;          // tau, FLUSS
  std::size_t subsequence = 7;      // m, FLUSS
  std::size_t min_size = 2;         // segmentation methods
  bool znorm = false;
  ChannelRule channel_rule = ChannelRule::Any;  // FLUSS

  bool is_segmentation() const noexcept { return method != Method::Fluss; }
  void validate() const;

  /// "method/cost/param/min_size/m/znorm|raw/channel_rule", e.g.
  /// "PELT/L2/1/2/-/raw/-" or "FLUSS/-/0.45/-/7/znorm/ANY".
  std::string id() const;
  static DetectorConfig parse(std::string_view id);

  friend bool operator==(const DetectorConfig&, const DetectorConfig&) = default;
};

/// Canonical ordering: method, then parameters in lexicographic order.
bool config_less(const DetectorConfig& a, const DetectorConfig& b);

struct Detection {
  std::optional<std::size_t> change_point;
  /// FLUSS: combined CAC minimum. Segmentation methods: number of breakpoints.
  double score = 0.0;
};

/// Runs one detector on one window. Channels are z-normalized first when
/// config.znorm is set. Segmentation methods report their last breakpoint.
Detection detect_scored(const Signal& window, const DetectorConfig& config);

std::optional<std::size_t> detect(const Signal& window, const DetectorConfig& config);

}  // namespace maintseg
