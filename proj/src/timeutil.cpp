#include "maintseg/timeutil.hpp"

#include <charconv>
#include <fmt/format.h>

namespace maintseg {
namespace {

bool read_int(std::string_view& s, std::size_t width, int& out) {
  if (s.size() < width) return false;
  for (std::size_t i = 0; i < width; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  std::from_chars(s.data(), s.data() + width, out);
  s.remove_prefix(width);
  return true;
}

bool expect(std::string_view& s, char c) {
  if (s.empty() || s.front() != c) return false;
  s.remove_prefix(1);
  return true;
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view s) {
  using namespace std::chrono;
  while (!s.empty() && (s.front() == ' ' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '"' || s.back() == '\r')) s.remove_suffix(1);

  int y = 0, mo = 0, d = 0, hh = 0, mm = 0, ss = 0;
  if (!read_int(s, 4, y) || !expect(s, '-') || !read_int(s, 2, mo) || !expect(s, '-') ||
      !read_int(s, 2, d)) {
    return std::nullopt;
  }
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;

  if (!s.empty()) {
    if (s.front() != 'T' && s.front() != ' ') return std::nullopt;
    s.remove_prefix(1);
    if (!read_int(s, 2, hh) || !expect(s, ':') || !read_int(s, 2, mm)) return std::nullopt;
    if (!s.empty() && s.front() == ':') {
      s.remove_prefix(1);
      if (!read_int(s, 2, ss)) return std::nullopt;
      if (!s.empty() && s.front() == '.') {
        s.remove_prefix(1);
        while (!s.empty() && s.front() >= '0' && s.front() <= '9') s.remove_prefix(1);
      }
    }
    if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;
  }

  int offset_seconds = 0;
  if (!s.empty()) {
    if (s == "Z") {
      s.remove_prefix(1);
    } else if (s.front() == '+' || s.front() == '-') {
      const int sign = s.front() == '+' ? 1 : -1;
      s.remove_prefix(1);
      int oh = 0, om = 0;
      if (!read_int(s, 2, oh)) return std::nullopt;
      if (!s.empty() && s.front() == ':') s.remove_prefix(1);
      if (!s.empty() && !read_int(s, 2, om)) return std::nullopt;
      offset_seconds = sign * (oh * 3600 + om * 60);
    }
  }
  if (!s.empty()) return std::nullopt;

  const sys_days days{ymd};
  return Timestamp{days} + hours{hh} + minutes{mm} + seconds{ss} - seconds{offset_seconds};
}

std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  const auto days = floor<std::chrono::days>(t);
  const year_month_day ymd{days};
  const hh_mm_ss tod{t - days};
  return fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:{:02d}:{:02d}Z", static_cast<int>(ymd.year()),
                     static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                     tod.hours().count(), tod.minutes().count(), tod.seconds().count());
}

}  // namespace maintseg
