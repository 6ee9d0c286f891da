#include "maintseg/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

namespace maintseg {
using nlohmann::json;

namespace {

double round_sig(double v) {
  const auto text = fmt::format("{:.6g}", v);
  double out = 0.0;
  std::from_chars(text.data(), text.data() + text.size(), out);
  return out;
}

std::vector<double> numeric_list(const json& node, const char* what) {
  if (node.is_array()) return node.get<std::vector<double>>();
  if (node.is_object() && node.size() == 1) {
    const auto& [kind, args] = *node.items().begin();
    const auto v = args.get<std::vector<double>>();
    if (v.size() != 3 || v[2] < 1 || std::floor(v[2]) != v[2]) {
      throw GridSpecError(fmt::format("grid: '{}' range needs [lo, hi, count]", what));
    }
    const auto count = static_cast<std::size_t>(v[2]);
    std::vector<double> out;
    for (std::size_t k = 0; k < count; ++k) {
      const double t = count == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(count - 1);
      if (kind == "linspace") {
        out.push_back(round_sig(v[0] + t * (v[1] - v[0])));
      } else if (kind == "logspace") {
        if (!(v[0] > 0.0 && v[1] > 0.0)) throw GridSpecError("grid: logspace bounds must be > 0");
        out.push_back(round_sig(std::pow(10.0, std::log10(v[0]) + t * (std::log10(v[1]) - std::log10(v[0])))));
      } else {
        throw GridSpecError(fmt::format("grid: unknown range kind '{}'", kind));
      }
    }
    return out;
  }
  throw GridSpecError(fmt::format("grid: '{}' must be a list or a range object", what));
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  return out + "\"";
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (ch == '"') {
      if (quoted && i + 1 < line.size() && line[i + 1] == '"') {
        out.back().push_back('"');
        ++i;
      } else {
        quoted = !quoted;
      }
    } else if (ch == ',' && !quoted) {
      out.emplace_back();
    } else if (ch != '\r') {
      out.back().push_back(ch);
    }
  }
  return out;
}

template <typename T>
T field_number(const std::string& text, std::size_t line) {
  T v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::runtime_error(fmt::format("results: bad number '{}' on line {}", text, line));
  }
  return v;
}

}  // namespace

GridSpec GridSpec::from_json(const json& doc) {
  GridSpec spec;
  if (!doc.is_object()) throw GridSpecError("grid: top level must be an object");
  try {
    for (const auto& [name, node] : doc.items()) {
      const Method method = parse_method(name);
      if (!node.is_object()) throw GridSpecError(fmt::format("grid: '{}' must be an object", name));
      for (const auto& [key, value] : node.items()) {
        static const std::set<std::string> known{"costs",        "penalties", "min_sizes",    "thresholds",
                                                 "subsequences", "znorm",     "channel_rules"};
        if (!known.contains(key)) throw GridSpecError(fmt::format("grid: unknown key '{}' for {}", key, name));
        if (key != "penalties" && key != "thresholds" && !value.is_array()) {
          throw GridSpecError(fmt::format("grid: '{}' for {} must be a list", key, name));
        }
      }
      MethodGrid g;
      if (node.contains("costs")) {
        for (const auto& c : node.at("costs")) g.costs.push_back(SegmentCost::parse(c.get<std::string>()));
      }
      if (node.contains("penalties")) g.penalties = numeric_list(node.at("penalties"), "penalties");
      if (node.contains("min_sizes")) g.min_sizes = node.at("min_sizes").get<std::vector<std::size_t>>();
      if (node.contains("thresholds")) g.thresholds = numeric_list(node.at("thresholds"), "thresholds");
      if (node.contains("subsequences")) g.subsequences = node.at("subsequences").get<std::vector<std::size_t>>();
      if (node.contains("znorm")) g.znorm = node.at("znorm").get<std::vector<bool>>();
      if (node.contains("channel_rules")) {
        g.channel_rules.clear();
        for (const auto& r : node.at("channel_rules")) g.channel_rules.push_back(parse_channel_rule(r.get<std::string>()));
      }
      if (method == Method::Kcpd && g.costs.empty()) g.costs.push_back(SegmentCost{CostKind::Rbf, std::nullopt});
      spec.methods[method] = std::move(g);
    }
  } catch (const json::exception& e) {
    throw GridSpecError(fmt::format("grid: {}", e.what()));
  } catch (const std::invalid_argument& e) {
    throw GridSpecError(fmt::format("grid: {}", e.what()));
  }
  return spec;
}

json GridSpec::default_json() {
  const json penalties = {{"logspace", {0.01, 1000.0, 12}}};
  const json segmentation = {{"costs", {"L1", "L2", "NORMAL", "RBF:median"}},
                             {"penalties", penalties},
                             {"min_sizes", {2, 3, 7}},
                             {"znorm", {false, true}}};
  json doc;
  doc["PELT"] = segmentation;
  doc["BINSEG"] = segmentation;
  doc["BOTTOMUP"] = segmentation;
  doc["KCPD"] = {{"costs", {"RBF:median", "RBF:0.1", "RBF:1", "RBF:10"}},
                 {"penalties", penalties},
                 {"min_sizes", {2, 3, 7}},
                 {"znorm", {false, true}}};
  doc["FLUSS"] = {{"thresholds", {{"linspace", {0.3, 0.6, 25}}}},
                  {"subsequences", {5, 7, 14}},
                  {"znorm", {false, true}},
                  {"channel_rules", {"ANY", "SUM"}}};
  return doc;
}

std::vector<DetectorConfig> build_grid(const GridSpec& spec) {
  std::vector<DetectorConfig> out;
  for (const auto& [method, g] : spec.methods) {
    DetectorConfig c;
    c.method = method;
    for (bool z : g.znorm) {
      c.znorm = z;
      if (method == Method::Fluss) {
        for (double tau : g.thresholds) {
          for (std::size_t m : g.subsequences) {
            for (ChannelRule rule : g.channel_rules) {
              c.threshold = tau;
              c.subsequence = m;
              c.channel_rule = rule;
              out.push_back(c);
            }
          }
        }
      } else {
        for (const auto& cost : g.costs) {
          for (double beta : g.penalties) {
            for (std::size_t ms : g.min_sizes) {
              c.cost = cost;
              c.penalty = beta;
              c.min_size = ms;
              out.push_back(c);
            }
          }
        }
      }
    }
  }
  std::set<std::string> ids;
  for (const auto& c : out) {
    try {
      c.validate();
    } catch (const std::invalid_argument& e) {
      throw GridSpecError(fmt::format("grid: {}", e.what()));
    }
    if (!ids.insert(c.id()).second) throw GridSpecError(fmt::format("grid: duplicate config '{}'", c.id()));
  }
  std::stable_sort(out.begin(), out.end(), config_less);
  return out;
}

void sort_records(std::vector<EvaluationRecord>& records) {
  std::sort(records.begin(), records.end(), [](const EvaluationRecord& a, const EvaluationRecord& b) {
    return std::tie(a.atm_id, a.cycle_index, a.config_id) < std::tie(b.atm_id, b.cycle_index, b.config_id);
  });
}

void write_results_header(std::ostream& out) {
  out << "atm_id,cycle_index,config_id,verdict,step_end_index,change_point_index,a,n,e_score\n";
}

void write_result_row(std::ostream& out, const EvaluationRecord& r) {
  if (r.alert) {
    out << fmt::format("{},{},{},{},{},{},{},{},{}\n", csv_field(r.atm_id), r.cycle_index, csv_field(r.config_id),
                       to_string(r.verdict), r.alert->step_end_index, r.alert->change_point_index, r.alert->a, r.n,
                       r.e_score);
  } else {
    out << fmt::format("{},{},{},{},,,,{},{}\n", csv_field(r.atm_id), r.cycle_index, csv_field(r.config_id),
                       to_string(r.verdict), r.n, r.e_score);
  }
}

void write_results(std::ostream& out, std::span<const EvaluationRecord> records) {
  write_results_header(out);
  for (const auto& r : records) write_result_row(out, r);
}

void write_results(const std::filesystem::path& path, std::span<const EvaluationRecord> records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot write results '{}'", path.string()));
  write_results(out, records);
}

std::vector<EvaluationRecord> read_results(std::istream& in, double period_hours) {
  std::vector<EvaluationRecord> out;
  std::string line;
  if (!std::getline(in, line)) return out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv(line);
    if (f.size() != 9) {
      // A torn final line from an interrupted run is dropped.
      if (in.peek() == EOF) break;
      throw std::runtime_error(fmt::format("results: expected 9 fields on line {}", line_no));
    }
    EvaluationRecord r;
    r.atm_id = f[0];
    r.cycle_index = field_number<int>(f[1], line_no);
    r.config_id = f[2];
    r.verdict = parse_verdict(f[3]);
    if (!f[4].empty()) {
      Alert a;
      a.step_end_index = field_number<std::size_t>(f[4], line_no);
      a.change_point_index = field_number<std::size_t>(f[5], line_no);
      a.a = field_number<double>(f[6], line_no);
      r.alert = a;
    }
    r.n = field_number<std::size_t>(f[7], line_no);
    r.e_score = field_number<double>(f[8], line_no);
    r.period_hours = period_hours;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<EvaluationRecord> read_results(const std::filesystem::path& path, double period_hours) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open results '{}'", path.string()));
  return read_results(in, period_hours);
}

ResultsTable run_sweep(std::span<const LifeCycle> cycles, std::span<const DetectorConfig> configs,
                       const SweepOptions& options) {
  if (cycles.empty()) throw std::invalid_argument("run_sweep: no cycles");
  options.params.validate();
  for (const auto& c : configs) c.validate();

  ResultsTable table;
  std::vector<std::string> ids;
  for (const auto& c : configs) ids.push_back(c.id());

  using Key = std::tuple<std::string, int, std::string>;
  std::set<Key> done;
  if (options.results_path && std::filesystem::exists(*options.results_path)) {
    std::map<std::pair<std::string, int>, double> periods;
    for (const auto& c : cycles) periods[{c.atm_id, c.cycle_index}] = c.period_hours;
    std::set<std::string> wanted(ids.begin(), ids.end());
    auto previous = read_results(*options.results_path);
    for (auto& r : previous) {
      const auto p = periods.find({r.atm_id, r.cycle_index});
      if (p == periods.end() || !wanted.contains(r.config_id)) continue;
      if (!done.insert({r.atm_id, r.cycle_index, r.config_id}).second) continue;
      r.period_hours = p->second;
      table.records.push_back(std::move(r));
    }
    table.records = rescore(table.records, options.params);
  }

  std::vector<std::pair<std::size_t, std::size_t>> pending;
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    for (std::size_t j = 0; j < configs.size(); ++j) {
      if (!done.contains({cycles[i].atm_id, cycles[i].cycle_index, ids[j]})) pending.emplace_back(i, j);
    }
  }

  std::ofstream sink;
  if (options.results_path) {
    const bool fresh = table.records.empty();
    sink.open(*options.results_path, std::ios::binary | (fresh ? std::ios::trunc : std::ios::app));
    if (!sink) throw std::runtime_error(fmt::format("cannot write results '{}'", options.results_path->string()));
    if (fresh) write_results_header(sink);
    sink.flush();
  }

  std::mutex mutex;
  std::atomic<std::size_t> next{0};
  std::size_t completed = 0;
  const std::size_t total = pending.size();

  auto work = [&]() {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= total) return;
      const auto [i, j] = pending[k];
      const LifeCycle& cycle = cycles[i];
      std::optional<EvaluationRecord> rec;
      std::string error;
      try {
        const auto streamed = run_streaming(cycle, configs[j], options.step, options.timing);
        rec = score_alert(cycle, ids[j], streamed.alert, options.params);
      } catch (const std::exception& e) {
        error = e.what();
      }
      std::lock_guard lock(mutex);
      if (rec) {
        if (sink.is_open()) {
          write_result_row(sink, *rec);
          sink.flush();
        }
        table.records.push_back(std::move(*rec));
      } else {
        table.failures.push_back({cycle.atm_id, cycle.cycle_index, ids[j], error});
      }
      ++completed;
      if (options.progress) options.progress(completed, total);
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(options.workers, std::max<std::size_t>(total, 1)));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  sort_records(table.records);
  std::sort(table.failures.begin(), table.failures.end(), [](const FailedPair& a, const FailedPair& b) {
    return std::tie(a.atm_id, a.cycle_index, a.config_id) < std::tie(b.atm_id, b.cycle_index, b.config_id);
  });
  table.partial = !table.failures.empty();
  if (sink.is_open()) {
    sink.close();
    write_results(*options.results_path, table.records);
  }
  return table;
}

}  // namespace maintseg
