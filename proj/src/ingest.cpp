#include "maintseg/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fmt/ranges.h>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_map>

#include "maintseg/timeutil.hpp"

namespace maintseg {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<std::string> split_row(const std::string& line, char delimiter) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
    } else if (ch == delimiter && !quoted) {
      out.push_back(std::move(field));
      field.clear();
    } else if (ch != '\r') {
      field.push_back(ch);
    }
  }
  out.push_back(std::move(field));
  for (auto& f : out) {
    const auto b = f.find_first_not_of(' ');
    const auto e = f.find_last_not_of(' ');
    f = b == std::string::npos ? std::string{} : f.substr(b, e - b + 1);
  }
  return out;
}

std::size_t column_of(const std::vector<std::string>& header, const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw ConfigError(fmt::format("event log: missing column '{}'", name));
  return static_cast<std::size_t>(it - header.begin());
}

bool sort_key_less(const EventRecord& a, const EventRecord& b) {
  return std::tie(a.atm_id, a.lifecycle_id, a.timestamp) < std::tie(b.atm_id, b.lifecycle_id, b.timestamp);
}

std::string safe_name(std::string_view text) {
  std::string out;
  for (char ch : text) {
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') ||
                    ch == '-' || ch == '_' || ch == '.';
    out.push_back(ok ? ch : '_');
  }
  return out;
}

}  // namespace

std::string_view to_string(Severity severity) {
  switch (severity) {
    case Severity::Ok: return "OK";
    case Severity::Warning: return "Warning";
    case Severity::Error: return "Error";
  }
  return "?";
}

Severity parse_severity(std::string_view text) {
  if (text == "OK") return Severity::Ok;
  if (text == "Warning") return Severity::Warning;
  if (text == "Error") return Severity::Error;
  throw ConfigError(fmt::format("unknown severity '{}'", text));
}

ParseQualityError::ParseQualityError(std::size_t malformed, std::size_t rows)
    : std::runtime_error(fmt::format("event log: {} of {} rows malformed (more than 10%)", malformed, rows)),
      malformed_(malformed),
      rows_(rows) {}

// ---------------------------------------------------------------------------
// Grouping configuration

void CodeGroupingConfig::validate() const {
  if (features.empty()) throw ConfigError("grouping: no feature recipes");
  std::set<std::string> groups;
  for (const auto& [code, slot] : codes) {
    if (slot.group.empty()) throw ConfigError(fmt::format("grouping: code '{}' has no group", code));
    groups.insert(slot.group);
  }
  std::set<std::string> names;
  for (const auto& f : features) {
    if (f.name.empty() || !names.insert(f.name).second) {
      throw ConfigError(fmt::format("grouping: empty or duplicate feature name '{}'", f.name));
    }
    if (f.numerator.empty() || f.groups.empty()) {
      throw ConfigError(fmt::format("grouping: feature '{}' needs numerator severities and groups", f.name));
    }
    for (const auto& g : f.groups) {
      if (!groups.contains(g)) {
        throw ConfigError(fmt::format("grouping: feature '{}' references unknown group '{}'", f.name, g));
      }
    }
  }
  for (const auto& g : activity_groups) {
    if (!groups.contains(g)) throw ConfigError(fmt::format("grouping: unknown activity group '{}'", g));
  }
}

std::vector<std::string> CodeGroupingConfig::feature_names() const {
  std::vector<std::string> out;
  for (const auto& f : features) out.push_back(f.name);
  return out;
}

std::vector<std::string> CodeGroupingConfig::module_codes() const {
  std::vector<std::string> out;
  for (const auto& [code, slot] : codes) out.push_back(code);
  return out;
}

CodeGroupingConfig CodeGroupingConfig::from_json(const json& doc) {
  CodeGroupingConfig cfg;
  try {
    for (const auto& [code, slot] : doc.at("codes").items()) {
      cfg.codes[code] = {slot.at("group").get<std::string>(), parse_severity(slot.at("severity").get<std::string>())};
    }
    for (const auto& f : doc.at("features")) {
      FeatureRecipe r;
      r.name = f.at("name").get<std::string>();
      for (const auto& s : f.at("numerator")) r.numerator.push_back(parse_severity(s.get<std::string>()));
      r.denominator = parse_severity(f.value("denominator", std::string("OK")));
      r.groups = f.at("groups").get<std::vector<std::string>>();
      cfg.features.push_back(std::move(r));
    }
    if (doc.contains("activity_groups")) cfg.activity_groups = doc.at("activity_groups").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("grouping: {}", e.what()));
  }
  cfg.validate();
  return cfg;
}

json CodeGroupingConfig::to_json() const {
  json doc;
  doc["codes"] = json::object();
  for (const auto& [code, slot] : codes) {
    doc["codes"][code] = {{"group", slot.group}, {"severity", std::string(maintseg::to_string(slot.severity))}};
  }
  doc["features"] = json::array();
  for (const auto& f : features) {
    json num = json::array();
    for (auto s : f.numerator) num.push_back(std::string(maintseg::to_string(s)));
    doc["features"].push_back({{"name", f.name},
                               {"numerator", num},
                               {"denominator", std::string(maintseg::to_string(f.denominator))},
                               {"groups", f.groups}});
  }
  doc["activity_groups"] = activity_groups;
  return doc;
}

CodeGroupingConfig CodeGroupingConfig::atm_default() {
  CodeGroupingConfig cfg;
  cfg.codes["6000"] = {"distribution", Severity::Ok};
  cfg.codes["6001"] = {"distribution", Severity::Error};
  cfg.codes["6002"] = {"distribution", Severity::Warning};
  std::vector<std::string> boxes;
  for (int box = 1; box <= 5; ++box) {
    const auto group = fmt::format("k7_{}", box);
    boxes.push_back(group);
    cfg.codes[fmt::format("K7_{}_OK", box)] = {group, Severity::Ok};
    cfg.codes[fmt::format("K7_{}_ERROR", box)] = {group, Severity::Error};
  }
  cfg.codes["WITHDRAWAL_OK"] = {"withdrawal", Severity::Ok};
  cfg.codes["WITHDRAWAL_ERROR"] = {"withdrawal", Severity::Error};
  cfg.features = {
      {"distribution_error_ratio", {Severity::Error}, Severity::Ok, {"distribution"}},
      {"distribution_warning_ratio", {Severity::Warning}, Severity::Ok, {"distribution"}},
      {"k7_error_ratio", {Severity::Error}, Severity::Ok, boxes},
      {"withdrawal_error_ratio", {Severity::Error}, Severity::Ok, {"withdrawal"}},
  };
  cfg.activity_groups = {"withdrawal"};
  return cfg;
}

ColumnMapping ColumnMapping::from_json(const json& doc) {
  ColumnMapping m;
  auto delim = doc.value("delimiter", std::string(","));
  if (delim == "\\t") delim = "\t";
  if (delim.size() != 1) throw ConfigError("column mapping: delimiter must be one character");
  m.delimiter = delim[0];
  m.timestamp = doc.value("timestamp", m.timestamp);
  m.atm_id = doc.value("atm_id", m.atm_id);
  m.lifecycle_id = doc.value("lifecycle_id", m.lifecycle_id);
  m.event_code = doc.value("event_code", m.event_code);
  return m;
}

// ---------------------------------------------------------------------------
// Event logs

ParseResult parse_event_log(std::istream& source, const ColumnMapping& mapping) {
  ParseResult out;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(source, line)) return out;
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_row(line, mapping.delimiter);
  const std::size_t ts_col = column_of(header, mapping.timestamp);
  const std::size_t atm_col = column_of(header, mapping.atm_id);
  const std::size_t code_col = column_of(header, mapping.event_code);
  const std::optional<std::size_t> cycle_col =
      mapping.lifecycle_id.empty() ? std::nullopt : std::optional(column_of(header, mapping.lifecycle_id));

  auto reject = [&out](std::size_t at) {
    ++out.malformed_count;
    if (out.malformed_lines.size() < 20) out.malformed_lines.push_back(at);
  };

  while (std::getline(source, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    ++out.rows;
    const auto fields = split_row(line, mapping.delimiter);
    if (fields.size() != header.size()) {
      reject(line_no);
      continue;
    }
    const auto ts = parse_timestamp(fields[ts_col]);
    if (!ts || fields[atm_col].empty() || fields[code_col].empty()) {
      reject(line_no);
      continue;
    }
    EventRecord rec{*ts, fields[atm_col], 0, fields[code_col]};
    if (cycle_col) {
      const auto& f = fields[*cycle_col];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), rec.lifecycle_id);
      if (ec != std::errc{} || ptr != f.data() + f.size()) {
        reject(line_no);
        continue;
      }
    }
    out.records.push_back(std::move(rec));
  }
  if (out.malformed_count * 10 > out.rows) throw ParseQualityError(out.malformed_count, out.rows);
  std::stable_sort(out.records.begin(), out.records.end(), sort_key_less);
  return out;
}

ParseResult parse_event_log(const fs::path& path, const ColumnMapping& mapping) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open event log '{}'", path.string()));
  return parse_event_log(in, mapping);
}

std::vector<FailureMark> parse_failures(std::istream& source, char delimiter) {
  std::vector<FailureMark> out;
  std::string line;
  if (!std::getline(source, line)) return out;
  const auto header = split_row(line, delimiter);
  const std::size_t atm_col = column_of(header, "atm_id");
  const std::size_t time_col = column_of(header, "failure_time");
  const auto mod_it = std::find(header.begin(), header.end(), "module");
  std::size_t line_no = 1;
  while (std::getline(source, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_row(line, delimiter);
    if (fields.size() != header.size()) throw ConfigError(fmt::format("failures: bad row at line {}", line_no));
    const auto ts = parse_timestamp(fields[time_col]);
    if (!ts) throw ConfigError(fmt::format("failures: bad timestamp at line {}", line_no));
    FailureMark mark{fields[atm_col], *ts, {}};
    if (mod_it != header.end()) mark.module = fields[static_cast<std::size_t>(mod_it - header.begin())];
    out.push_back(std::move(mark));
  }
  return out;
}

std::vector<EventRecord> remove_infected(std::span<const EventRecord> records,
                                         std::span<const FailureMark> failures, double ii_days) {
  std::vector<EventRecord> out;
  out.reserve(records.size());
  if (!(ii_days > 0.0)) {
    out.assign(records.begin(), records.end());
    return out;
  }
  std::unordered_map<std::string, std::vector<Timestamp>> by_atm;
  for (const auto& f : failures) by_atm[f.atm_id].push_back(f.failure_time);
  for (auto& [atm, times] : by_atm) std::sort(times.begin(), times.end());
  const auto width = std::chrono::seconds(static_cast<std::int64_t>(std::llround(ii_days * kSecondsPerDay)));

  for (const auto& rec : records) {
    const auto it = by_atm.find(rec.atm_id);
    bool infected = false;
    if (it != by_atm.end()) {
      const auto& times = it->second;
      // Latest failure at or before the record.
      auto ub = std::upper_bound(times.begin(), times.end(), rec.timestamp);
      if (ub != times.begin()) infected = rec.timestamp <= *std::prev(ub) + width;
    }
    if (!infected) out.push_back(rec);
  }
  return out;
}

std::vector<std::vector<EventRecord>> group_by_cycle(std::span<const EventRecord> records) {
  std::vector<EventRecord> sorted(records.begin(), records.end());
  std::stable_sort(sorted.begin(), sorted.end(), sort_key_less);
  std::vector<std::vector<EventRecord>> out;
  for (auto& rec : sorted) {
    if (out.empty() || out.back().front().atm_id != rec.atm_id ||
        out.back().front().lifecycle_id != rec.lifecycle_id) {
      out.emplace_back();
    }
    out.back().push_back(std::move(rec));
  }
  return out;
}

std::vector<EventRecord> split_on_failures(std::span<const EventRecord> records,
                                           std::span<const FailureMark> failures) {
  std::unordered_map<std::string, std::vector<Timestamp>> by_atm;
  for (const auto& f : failures) by_atm[f.atm_id].push_back(f.failure_time);
  for (auto& [atm, times] : by_atm) std::sort(times.begin(), times.end());
  std::vector<EventRecord> out(records.begin(), records.end());
  for (auto& rec : out) {
    const auto it = by_atm.find(rec.atm_id);
    if (it == by_atm.end()) {
      rec.lifecycle_id = 0;
      continue;
    }
    // Events strictly before the first failure form cycle 0; an event at a
    // failure instant belongs to the cycle that failure ends.
    const auto& times = it->second;
    rec.lifecycle_id = static_cast<int>(std::lower_bound(times.begin(), times.end(), rec.timestamp) - times.begin());
  }
  std::stable_sort(out.begin(), out.end(), sort_key_less);
  return out;
}

// ---------------------------------------------------------------------------
// Resampling and features

double CountMatrix::total() const {
  double acc = 0.0;
  for (double c : counts) acc += c;
  return acc;
}

CountMatrix resample(std::span<const EventRecord> cycle_records, double period_hours,
                     const std::vector<std::string>& code_universe, std::optional<Timestamp> start,
                     std::optional<Timestamp> end) {
  if (!(period_hours > 0.0)) throw std::invalid_argument("resample: period must be > 0");
  CountMatrix out;
  out.codes = code_universe;
  out.period_hours = period_hours;
  std::unordered_map<std::string, std::size_t> col;
  for (std::size_t c = 0; c < code_universe.size(); ++c) col.emplace(code_universe[c], c);

  Timestamp lo = start.value_or(Timestamp{});
  Timestamp hi = end.value_or(Timestamp{});
  if (!cycle_records.empty()) {
    const auto [mn, mx] = std::minmax_element(cycle_records.begin(), cycle_records.end(),
                                              [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
    if (!start) lo = mn->timestamp;
    if (!end) hi = mx->timestamp;
  }
  if (hi < lo) throw std::invalid_argument("resample: end before start");
  out.start = lo;
  const double period_s = period_hours * 3600.0;
  const double duration_s = static_cast<double>((hi - lo).count());
  out.buckets = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(duration_s / period_s)));
  out.counts.assign(out.buckets * code_universe.size(), 0.0);

  for (const auto& rec : cycle_records) {
    const auto it = col.find(rec.event_code);
    if (it == col.end()) {
      throw std::invalid_argument(fmt::format("resample: code '{}' not in the code universe", rec.event_code));
    }
    const double offset = static_cast<double>((rec.timestamp - lo).count());
    if (offset < 0.0) throw std::invalid_argument("resample: record before cycle start");
    const auto k = std::min(out.buckets - 1, static_cast<std::size_t>(std::floor(offset / period_s)));
    out.counts[k * code_universe.size() + it->second] += 1.0;
  }
  return out;
}

LifeCycle build_features(const CountMatrix& counts, const CodeGroupingConfig& config, const CycleMeta& meta) {
  config.validate();
  std::unordered_map<std::string, std::size_t> col;
  for (std::size_t c = 0; c < counts.codes.size(); ++c) col.emplace(counts.codes[c], c);

  struct Term {
    std::size_t column;
    bool numerator;
    bool denominator;
  };
  std::vector<std::vector<Term>> terms(config.features.size());
  std::vector<std::size_t> activity_cols;
  for (const auto& [code, slot] : config.codes) {
    const auto it = col.find(code);
    if (it == col.end()) throw ConfigError(fmt::format("build_features: code '{}' missing from counts", code));
    for (std::size_t f = 0; f < config.features.size(); ++f) {
      const auto& r = config.features[f];
      if (std::find(r.groups.begin(), r.groups.end(), slot.group) == r.groups.end()) continue;
      const bool num = std::find(r.numerator.begin(), r.numerator.end(), slot.severity) != r.numerator.end();
      const bool den = r.denominator == slot.severity;
      if (num || den) terms[f].push_back({it->second, num, den});
    }
    if (std::find(config.activity_groups.begin(), config.activity_groups.end(), slot.group) !=
        config.activity_groups.end()) {
      activity_cols.push_back(it->second);
    }
  }

  LifeCycle cycle;
  cycle.atm_id = meta.atm_id;
  cycle.cycle_index = meta.cycle_index;
  cycle.start_time = counts.start;
  cycle.end_time = meta.end_time;
  cycle.period_hours = counts.period_hours;
  cycle.ended_in_failure = meta.ended_in_failure;
  cycle.feature_names = config.feature_names();
  cycle.samples = Signal(counts.buckets, config.features.size());
  for (std::size_t k = 0; k < counts.buckets; ++k) {
    for (std::size_t f = 0; f < terms.size(); ++f) {
      double num = 0.0, den = 0.0;
      for (const auto& t : terms[f]) {
        if (t.numerator) num += counts.at(k, t.column);
        if (t.denominator) den += counts.at(k, t.column);
      }
      cycle.samples(k, f) = num / std::max(den, 1.0);
    }
  }
  if (!activity_cols.empty()) {
    cycle.activity.assign(counts.buckets, 0.0);
    for (std::size_t k = 0; k < counts.buckets; ++k) {
      for (auto c : activity_cols) cycle.activity[k] += counts.at(k, c);
    }
  }
  return cycle;
}

// ---------------------------------------------------------------------------
// Statistics

DatasetStats dataset_stats(std::span<const LifeCycle> cycles) {
  if (cycles.empty()) throw std::invalid_argument("dataset_stats: no cycles");
  std::map<std::string, std::vector<const LifeCycle*>> by_atm;
  for (const auto& c : cycles) by_atm[c.atm_id].push_back(&c);

  std::map<std::size_t, std::vector<const LifeCycle*>> by_group;
  std::map<std::size_t, std::size_t> atm_counts;
  for (const auto& [atm, list] : by_atm) {
    auto& g = by_group[list.size()];
    g.insert(g.end(), list.begin(), list.end());
    ++atm_counts[list.size()];
  }

  DatasetStats stats;
  stats.total_cycles = cycles.size();
  stats.total_atms = by_atm.size();
  for (const auto& [k, list] : by_group) {
    DurationGroup g;
    g.cycles_per_atm = k;
    g.atm_count = atm_counts[k];
    g.cycle_count = list.size();
    std::vector<double> days;
    double activity = 0.0, activity_days = 0.0;
    for (const auto* c : list) {
      days.push_back(c->duration_days());
      if (!c->activity.empty()) {
        for (double v : c->activity) activity += v;
        activity_days += c->duration_days();
      }
    }
    std::sort(days.begin(), days.end());
    g.min_days = days.front();
    g.max_days = days.back();
    const std::size_t mid = days.size() / 2;
    g.median_days = days.size() % 2 == 1 ? days[mid] : 0.5 * (days[mid - 1] + days[mid]);
    g.mean_daily_activity =
        activity_days > 0.0 ? activity / activity_days : std::numeric_limits<double>::quiet_NaN();
    stats.groups.push_back(g);
  }
  return stats;
}

json to_json(const DatasetStats& stats) {
  json doc{{"total_cycles", stats.total_cycles}, {"total_atms", stats.total_atms}, {"groups", json::array()}};
  for (const auto& g : stats.groups) {
    json row{{"cycles_per_atm", g.cycles_per_atm}, {"atm_count", g.atm_count},  {"cycle_count", g.cycle_count},
             {"min_days", g.min_days},             {"median_days", g.median_days}, {"max_days", g.max_days}};
    row["mean_daily_activity"] = std::isnan(g.mean_daily_activity) ? json(nullptr) : json(g.mean_daily_activity);
    doc["groups"].push_back(row);
  }
  return doc;
}

// ---------------------------------------------------------------------------
// Canonical cycle files

fs::path write_cycle(const LifeCycle& cycle, const fs::path& dir) {
  cycle.validate();
  fs::create_directories(dir);
  const auto stem = fmt::format("{}__{:04d}", safe_name(cycle.atm_id), cycle.cycle_index);
  const auto csv_path = dir / (stem + ".csv");
  {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", csv_path.string()));
    out << fmt::format("{}\n", fmt::join(cycle.feature_names, ","));
    for (std::size_t i = 0; i < cycle.length(); ++i) {
      const auto row = cycle.samples.row(i);
      out << fmt::format("{}\n", fmt::join(row.begin(), row.end(), ","));
    }
  }
  json side{{"atm_id", cycle.atm_id},
            {"cycle_index", cycle.cycle_index},
            {"start_time", format_timestamp(cycle.start_time)},
            {"end_time", format_timestamp(cycle.end_time)},
            {"period_hours", cycle.period_hours},
            {"ended_in_failure", cycle.ended_in_failure}};
  if (!cycle.activity.empty()) side["activity"] = cycle.activity;
  std::ofstream js(dir / (stem + ".json"), std::ios::binary);
  js << side.dump(2) << "\n";
  return csv_path;
}

LifeCycle read_cycle(const fs::path& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw std::runtime_error(fmt::format("cannot open cycle file '{}'", csv_path.string()));
  auto side_path = csv_path;
  side_path.replace_extension(".json");
  std::ifstream js(side_path);
  if (!js) throw std::runtime_error(fmt::format("missing sidecar '{}'", side_path.string()));

  LifeCycle cycle;
  try {
    const json side = json::parse(js);
    cycle.atm_id = side.at("atm_id").get<std::string>();
    cycle.cycle_index = side.at("cycle_index").get<int>();
    const auto start = parse_timestamp(side.at("start_time").get<std::string>());
    if (!start) throw std::runtime_error("bad start_time");
    cycle.start_time = *start;
    cycle.period_hours = side.at("period_hours").get<double>();
    cycle.ended_in_failure = side.value("ended_in_failure", true);
    if (side.contains("end_time")) {
      const auto end = parse_timestamp(side.at("end_time").get<std::string>());
      if (!end) throw std::runtime_error("bad end_time");
      cycle.end_time = *end;
    }
    if (side.contains("activity")) cycle.activity = side.at("activity").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw std::runtime_error(fmt::format("sidecar '{}': {}", side_path.string(), e.what()));
  }

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(fmt::format("empty cycle file '{}'", csv_path.string()));
  cycle.feature_names = split_row(line, ',');
  std::vector<double> data;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto fields = split_row(line, ',');
    if (fields.size() != cycle.feature_names.size()) {
      throw std::runtime_error(fmt::format("cycle file '{}': ragged row {}", csv_path.string(), rows + 2));
    }
    for (const auto& f : fields) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc{} || ptr != f.data() + f.size()) {
        throw std::runtime_error(fmt::format("cycle file '{}': bad number '{}'", csv_path.string(), f));
      }
      data.push_back(v);
    }
    ++rows;
  }
  cycle.samples = Signal(rows, cycle.feature_names.size(), std::move(data));
  if (cycle.end_time == Timestamp{}) {
    cycle.end_time = cycle.start_time + std::chrono::seconds(static_cast<std::int64_t>(
                                            std::llround(static_cast<double>(rows) * cycle.period_hours * 3600.0)));
  }
  cycle.validate();
  return cycle;
}

namespace {

std::vector<fs::path> cycle_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw std::runtime_error(fmt::format("'{}' is not a directory", dir.string()));
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") {
      auto side = entry.path();
      side.replace_extension(".json");
      if (fs::exists(side)) files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

std::vector<LifeCycle> read_cycle_dir(const fs::path& dir) {
  std::vector<LifeCycle> out;
  for (const auto& f : cycle_files(dir)) out.push_back(read_cycle(f));
  std::sort(out.begin(), out.end(), [](const LifeCycle& a, const LifeCycle& b) {
    return std::tie(a.atm_id, a.cycle_index) < std::tie(b.atm_id, b.cycle_index);
  });
  return out;
}

std::string corpus_fingerprint(const fs::path& dir) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](std::string_view bytes) {
    for (unsigned char ch : bytes) {
      h ^= ch;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& csv : cycle_files(dir)) {
    auto side = csv;
    side.replace_extension(".json");
    for (const auto& p : {csv, side}) {
      feed(p.filename().string());
      std::ifstream in(p, std::ios::binary);
      std::ostringstream buf;
      buf << in.rdbuf();
      feed(buf.str());
    }
  }
  return fmt::format("{:016x}", h);
}

}  // namespace maintseg
