#include "maintseg/detectors.hpp"

#include <charconv>
#include <fmt/format.h>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "maintseg/segmentation.hpp"

namespace maintseg {
namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string_view::npos ? text.npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument(fmt::format("config id: bad {} '{}'", what, text));
  }
  return value;
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::Pelt: return "PELT";
    case Method::Binseg: return "BINSEG";
    case Method::BottomUp: return "BOTTOMUP";
    case Method::Kcpd: return "KCPD";
    case Method::Fluss: return "FLUSS";
  }
  return "?";
}

Method parse_method(std::string_view text) {
  for (Method m : {Method::Pelt, Method::Binseg, Method::BottomUp, Method::Kcpd, Method::Fluss}) {
    if (to_string(m) == text) return m;
  }
  throw std::invalid_argument(fmt::format("unknown method '{}'", text));
}

void DetectorConfig::validate() const {
  if (is_segmentation()) {
    if (!(penalty >= 0.0)) throw std::invalid_argument("config: penalty must be >= 0");
    if (min_size < 1) throw std::invalid_argument("config: min_size must be >= 1");
    if (method == Method::Kcpd && cost.kind != CostKind::Rbf) {
      throw std::invalid_argument("config: KCPD requires the RBF kernel cost");
    }
    cost.validate();
  } else {
    if (!(threshold > 0.0 && threshold < 1.0)) {
      throw std::invalid_argument("config: FLUSS threshold must be in (0, 1)");
    }
    if (subsequence < 3) throw std::invalid_argument("config: FLUSS subsequence length must be >= 3");
  }
}

std::string DetectorConfig::id() const {
  const std::string_view norm = znorm ? "znorm" : "raw";
  if (is_segmentation()) {
    return fmt::format("{}/{}/{}/{}/-/{}/-", to_string(method), cost.to_string(), penalty, min_size, norm);
  }
  return fmt::format("{}/-/{}/-/{}/{}/{}", to_string(method), threshold, subsequence, norm,
                     to_string(channel_rule));
}

DetectorConfig DetectorConfig::parse(std::string_view id) {
  const auto parts = split(id, '/');
  if (parts.size() != 7) {
    throw std::invalid_argument(fmt::format("config id '{}' must have 7 '/'-separated fields", id));
  }
  DetectorConfig c;
  c.method = parse_method(parts[0]);
  if (parts[5] == "znorm") {
    c.znorm = true;
  } else if (parts[5] != "raw") {
    throw std::invalid_argument(fmt::format("config id: bad normalization '{}'", parts[5]));
  }
  if (c.is_segmentation()) {
    c.cost = SegmentCost::parse(parts[1]);
    c.penalty = parse_number<double>(parts[2], "penalty");
    c.min_size = parse_number<std::size_t>(parts[3], "min_size");
  } else {
    c.threshold = parse_number<double>(parts[2], "threshold");
    c.subsequence = parse_number<std::size_t>(parts[4], "subsequence length");
    c.channel_rule = parse_channel_rule(parts[6]);
  }
  c.validate();
  return c;
}

bool config_less(const DetectorConfig& a, const DetectorConfig& b) {
  auto key = [](const DetectorConfig& c) {
    const bool seg = c.is_segmentation();
    return std::make_tuple(static_cast<int>(c.method), seg ? static_cast<int>(c.cost.kind) : -1,
                           seg && c.cost.kind == CostKind::Rbf && c.cost.gamma ? *c.cost.gamma : 0.0,
                           seg ? c.penalty : c.threshold, seg ? c.min_size : 0,
                           seg ? 0 : c.subsequence, c.znorm,
                           seg ? 0 : static_cast<int>(c.channel_rule));
  };
  return key(a) < key(b);
}

Detection detect_scored(const Signal& window, const DetectorConfig& config) {
  if (window.empty()) return {};
  const Signal input = config.znorm ? znormalize_columns(window) : window;

  if (config.method == Method::Fluss) {
    const auto scan = fluss_scan(input, config.subsequence, config.channel_rule);
    Detection out{std::nullopt, scan.min_cac};
    if (scan.computed && scan.min_cac < config.threshold) out.change_point = scan.argmin;
    return out;
  }

  Segmentation seg;
  switch (config.method) {
    case Method::Pelt: seg = pelt(input, config.cost, config.penalty, config.min_size); break;
    case Method::Binseg: seg = binseg(input, config.cost, config.penalty, config.min_size); break;
    case Method::BottomUp: seg = bottomup(input, config.cost, config.penalty, config.min_size); break;
    case Method::Kcpd: seg = kcpd(input, config.cost.gamma, config.penalty, config.min_size); break;
    case Method::Fluss: break;
  }
  Detection out;
  out.score = static_cast<double>(seg.breakpoints.size());
  if (!seg.breakpoints.empty()) out.change_point = seg.breakpoints.back();
  return out;
}

std::optional<std::size_t> detect(const Signal& window, const DetectorConfig& config) {
  return detect_scored(window, config).change_point;
}

}  // namespace maintseg
