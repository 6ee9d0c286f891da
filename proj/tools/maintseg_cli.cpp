// maintseg command-line driver: ingest, evaluate, sweep, report, stats, synth.

#include <CLI11.hpp>
#include <json.hpp>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "maintseg/ingest.hpp"
#include "maintseg/metrics.hpp"
#include "maintseg/protocol.hpp"
#include "maintseg/sweep.hpp"
#include "maintseg/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace maintseg;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitPartial = 2;

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Globals {
  BusinessParams params;
  std::size_t step = 7;
  std::string alert_at = "window-end";
  std::size_t workers = 1;
  std::string out = "out";
};

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("maintseg");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("MAINTSEG_LOG")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to "off"
    if (level != spdlog::level::off || std::string_view(env) == "off") spdlog::set_level(level);
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  out << text;
}

void write_json(const fs::path& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError(fmt::format("cannot open '{}'", path.string()));
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError(fmt::format("'{}' is not valid JSON: {}", path.string(), e.what()));
  }
}

json params_json(const BusinessParams& p) { return {{"rd", p.rd}, {"pp", p.pp}, {"ii", p.ii}, {"s", p.s}}; }

fs::path prepare_out(const Globals& g) {
  const fs::path out(g.out);
  fs::create_directories(out);
  return out;
}

void write_manifest(const fs::path& out, const std::string& subcommand, const Globals& g, json inputs, json configs,
                    json extra = json::object()) {
  json m;
  m["subcommand"] = subcommand;
  m["version"] = MAINTSEG_VERSION;
  m["inputs"] = std::move(inputs);
  m["configs"] = std::move(configs);
  m["params"] = params_json(g.params);
  m["step"] = g.step;
  m["alert_at"] = g.alert_at;
  m["workers"] = g.workers;
  m["out"] = g.out;
  for (auto& [k, v] : extra.items()) m[k] = v;
  write_json(out / "manifest.json", m);
}

json aggregate_json(const Aggregate& a) {
  json j{{"count", a.count}, {"tp", a.tp}, {"fp", a.fp}, {"fn", a.fn}, {"mean_e", a.mean_e}};
  j["precision"] = a.precision_defined ? json(a.precision) : json(nullptr);
  j["recall"] = a.recall_defined ? json(a.recall) : json(nullptr);
  return j;
}

std::vector<double> parse_pp_list(const std::string& text, double fallback) {
  if (text.empty()) return {fallback};
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(fmt::format("--pp-list: bad value '{}'", item));
    }
  }
  if (out.empty()) throw UsageError("--pp-list is empty");
  return out;
}

std::vector<LifeCycle> load_cycles(const std::string& dir) {
  if (dir.empty()) throw UsageError("--cycles is required");
  if (!fs::is_directory(dir)) throw UsageError(fmt::format("cycle directory '{}' not found", dir));
  auto cycles = read_cycle_dir(dir);
  if (cycles.empty()) throw UsageError(fmt::format("no cycle files in '{}'", dir));
  spdlog::info("loaded {} cycles from {}", cycles.size(), dir);
  return cycles;
}

std::vector<EvaluationRecord> of_method(const std::vector<EvaluationRecord>& records, const std::string& method) {
  std::vector<EvaluationRecord> out;
  for (const auto& r : records) {
    if (method_of(r.config_id) == method) out.push_back(r);
  }
  return out;
}

std::set<std::string> methods_in(const std::vector<EvaluationRecord>& records) {
  std::set<std::string> out;
  for (const auto& r : records) out.insert(method_of(r.config_id));
  return out;
}

json best_json(const std::vector<EvaluationRecord>& records) {
  json j;
  const auto avg = best_average_config(records);
  j["best_average"] = aggregate_json(avg.aggregate);
  j["best_average"]["config_id"] = avg.config_id;
  try {
    const auto bps = best_per_sample(records);
    j["best_per_sample"] = {{"mean_e", bps.mean_e}, {"cycles", bps.per_cycle.size()}};
  } catch (const IncompleteGridError& e) {
    j["best_per_sample"] = nullptr;
    spdlog::warn("{}", e.what());
  }
  return j;
}

/// One summary entry per pp value: overall and per-method bests.
json pp_summary(const std::vector<EvaluationRecord>& records, const BusinessParams& base, double pp) {
  BusinessParams p = base;
  p.pp = pp;
  const auto scored = rescore(records, p);
  json entry;
  entry["pp"] = pp;
  entry["rd"] = p.rd;
  entry["s"] = p.s;
  entry["overall"] = best_json(scored);
  entry["methods"] = json::object();
  for (const auto& m : methods_in(scored)) entry["methods"][m] = best_json(of_method(scored, m));
  return entry;
}

std::string failures_csv(const std::vector<FailedPair>& failures) {
  std::string text = "atm_id,cycle_index,config_id,reason\n";
  for (const auto& f : failures) {
    std::string reason = f.reason;
    std::replace(reason.begin(), reason.end(), ',', ';');
    std::replace(reason.begin(), reason.end(), '\n', ' ');
    text += fmt::format("{},{},{},{}\n", f.atm_id, f.cycle_index, f.config_id, reason);
  }
  return text;
}

json periods_json(const std::vector<LifeCycle>& cycles) {
  json periods = json::array();
  for (const auto& c : cycles) {
    periods.push_back({{"atm_id", c.atm_id}, {"cycle_index", c.cycle_index}, {"period_hours", c.period_hours}});
  }
  return periods;
}

// ---------------------------------------------------------------------------

struct IngestArgs {
  std::string events, failures, grouping, columns, module;
  double period_hours = 24.0;
};

int cmd_ingest(const IngestArgs& a, const Globals& g) {
  if (a.events.empty()) throw UsageError("--events is required");
  if (!(a.period_hours > 0.0)) throw UsageError("--period-hours must be > 0");
  const auto grouping =
      a.grouping.empty() ? CodeGroupingConfig::atm_default() : CodeGroupingConfig::from_json(read_json(a.grouping));
  const auto mapping = a.columns.empty() ? ColumnMapping{} : ColumnMapping::from_json(read_json(a.columns));
  if (!fs::exists(a.events)) throw UsageError(fmt::format("event log '{}' not found", a.events));

  const auto parsed = parse_event_log(fs::path(a.events), mapping);
  if (parsed.records.empty()) throw UsageError(fmt::format("event log '{}' contains no events", a.events));
  if (parsed.malformed_count > 0) {
    spdlog::warn("{} malformed rows skipped (first at line {})", parsed.malformed_count, parsed.malformed_lines.front());
  }
  std::set<std::string> all_codes;
  for (const auto& r : parsed.records) all_codes.insert(r.event_code);

  std::vector<FailureMark> failures;
  if (!a.failures.empty()) {
    std::ifstream in(a.failures);
    if (!in) throw UsageError(fmt::format("failure file '{}' not found", a.failures));
    for (auto& f : parse_failures(in, mapping.delimiter)) {
      if (a.module.empty() || f.module.empty() || f.module == a.module) failures.push_back(std::move(f));
    }
  } else if (mapping.lifecycle_id.empty()) {
    throw UsageError("--failures is required when the log has no lifecycle column");
  }

  auto records = remove_infected(parsed.records, failures, g.params.ii);
  if (mapping.lifecycle_id.empty()) records = split_on_failures(records, failures);

  std::map<std::string, std::vector<Timestamp>> failure_times;
  for (const auto& f : failures) failure_times[f.atm_id].push_back(f.failure_time);
  for (auto& [atm, times] : failure_times) std::sort(times.begin(), times.end());

  const auto universe = grouping.module_codes();
  const std::set<std::string> relevant(universe.begin(), universe.end());
  const fs::path out = prepare_out(g);
  const fs::path cycle_dir = out / "cycles";
  fs::remove_all(cycle_dir);
  fs::create_directories(cycle_dir);

  std::vector<LifeCycle> cycles;
  for (const auto& group : group_by_cycle(records)) {
    if (group.empty()) continue;
    const auto& first = group.front();
    Timestamp start = first.timestamp, end = group.back().timestamp;
    bool failed = failure_times.empty();
    if (const auto it = failure_times.find(first.atm_id); it != failure_times.end()) {
      const auto next = std::lower_bound(it->second.begin(), it->second.end(), end);
      if (next != it->second.end()) {
        end = *next;
        failed = true;
      }
    }
    std::vector<EventRecord> kept;
    for (const auto& r : group) {
      if (relevant.contains(r.event_code)) kept.push_back(r);
    }
    const auto counts = resample(kept, a.period_hours, universe, start, end);
    auto cycle = build_features(counts, grouping, {first.atm_id, first.lifecycle_id, end, failed});
    write_cycle(cycle, cycle_dir);
    cycles.push_back(std::move(cycle));
  }

  const auto stats = dataset_stats(cycles);
  write_json(out / "stats.json", to_json(stats));
  write_manifest(out, "ingest", g, {{"events", a.events}, {"failures", a.failures}},
                 {{"grouping", a.grouping.empty() ? json("builtin:atm_default") : json(a.grouping)},
                  {"columns", a.columns.empty() ? json("builtin:default") : json(a.columns)}},
                 {{"period_hours", a.period_hours},
                  {"module", a.module},
                  {"fingerprint", corpus_fingerprint(cycle_dir)},
                  {"malformed_rows", parsed.malformed_count}});
  fmt::print("{} cycles, {} ATMs, {} unique event codes ({} events, {} malformed rows)\n", stats.total_cycles,
             stats.total_atms, all_codes.size(), parsed.records.size(), parsed.malformed_count);
  return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_evaluate(const std::string& cycles_dir, const std::string& config_id, const Globals& g) {
  if (config_id.empty()) throw UsageError("--config is required");
  DetectorConfig config;
  try {
    config = DetectorConfig::parse(config_id);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto cycles = load_cycles(cycles_dir);
  const auto timing = parse_alert_timing(g.alert_at);
  const fs::path out = prepare_out(g);

  std::vector<EvaluationRecord> records;
  std::string trace = "atm_id,cycle_index,window_number,end_index,change_point,score\n";
  for (const auto& c : cycles) {
    const auto result = run_streaming(c, config, g.step, timing);
    for (const auto& w : result.trace) {
      trace += fmt::format("{},{},{},{},{},{}\n", c.atm_id, c.cycle_index, w.window_number, w.end_index,
                           w.change_point ? fmt::format("{}", *w.change_point) : std::string(), w.score);
    }
    records.push_back(score_alert(c, config.id(), result.alert, g.params));
  }
  sort_records(records);
  write_text(out / "trace.csv", trace);
  write_results(out / "evaluation.csv", records);
  const auto agg = aggregate(records);
  write_json(out / "summary.json", {{"config_id", config.id()}, {"params", params_json(g.params)},
                                    {"aggregate", aggregate_json(agg)}});
  write_manifest(out, "evaluate", g, {{"cycles", cycles_dir}}, {{"config_id", config.id()}});
  fmt::print("{}: {} cycles, mean_e {:.6f}, precision {}, recall {} (TP {}, FP {}, FN {})\n", config.id(), agg.count,
             agg.mean_e, agg.precision_defined ? fmt::format("{:.4f}", agg.precision) : "n/a",
             agg.recall_defined ? fmt::format("{:.4f}", agg.recall) : "n/a", agg.tp, agg.fp, agg.fn);
  return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_sweep(const std::string& cycles_dir, const std::string& grid_path, const std::string& pp_list, bool fresh,
              const Globals& g) {
  const json grid_doc = grid_path.empty() ? GridSpec::default_json() : read_json(grid_path);
  std::vector<DetectorConfig> configs;
  try {
    configs = build_grid(GridSpec::from_json(grid_doc));
  } catch (const GridSpecError& e) {
    throw UsageError(e.what());
  }
  if (configs.empty()) throw UsageError("the grid is empty");
  const auto pps = parse_pp_list(pp_list, g.params.pp);
  const auto cycles = load_cycles(cycles_dir);
  const fs::path out = prepare_out(g);
  const fs::path results = out / "results.csv";
  if (fresh) fs::remove(results);

  SweepOptions opts;
  opts.params = g.params;
  opts.step = g.step;
  opts.timing = parse_alert_timing(g.alert_at);
  opts.workers = g.workers;
  opts.results_path = results;
  std::size_t last_pct = 0;
  opts.progress = [&last_pct](std::size_t done, std::size_t total) {
    const std::size_t pct = total ? done * 100 / total : 100;
    if (pct >= last_pct + 5 || done == total) {
      last_pct = pct;
      spdlog::info("sweep {}/{} ({}%)", done, total, pct);
    }
  };
  spdlog::info("sweeping {} cycles x {} configs", cycles.size(), configs.size());
  const auto table = run_sweep(cycles, configs, opts);

  json summary;
  summary["grid_size"] = configs.size();
  summary["cycles"] = cycles.size();
  summary["partial"] = table.partial;
  summary["failures"] = table.failures.size();
  summary["entries"] = json::array();
  for (double pp : pps) summary["entries"].push_back(pp_summary(table.records, g.params, pp));
  write_json(out / "summary.json", summary);
  write_text(out / "failures.csv", failures_csv(table.failures));
  write_json(out / "results.meta.json", {{"params", params_json(g.params)},
                                         {"step", g.step},
                                         {"alert_at", g.alert_at},
                                         {"grid", grid_doc},
                                         {"fingerprint", corpus_fingerprint(cycles_dir)},
                                         {"version", MAINTSEG_VERSION},
                                         {"periods", periods_json(cycles)}});
  write_manifest(out, "sweep", g, {{"cycles", cycles_dir}},
                 {{"grid", grid_path.empty() ? json("builtin:default") : json(grid_path)}},
                 {{"pp_list", pps}});

  for (const auto& e : summary["entries"]) {
    fmt::print("pp={}: overall best average {} (mean_e {:.4f}), best per sample mean_e {}\n", e["pp"].get<double>(),
               e["overall"]["best_average"]["config_id"].get<std::string>(),
               e["overall"]["best_average"]["mean_e"].get<double>(),
               e["overall"]["best_per_sample"].is_null()
                   ? std::string("n/a")
                   : fmt::format("{:.4f}", e["overall"]["best_per_sample"]["mean_e"].get<double>()));
  }
  if (table.partial) {
    spdlog::error("{} (cycle, config) pairs failed; see failures.csv", table.failures.size());
    return kExitPartial;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_report(const std::string& results_path, const std::string& pp_list, const Globals& g) {
  if (results_path.empty()) throw UsageError("--results is required");
  if (!fs::exists(results_path)) throw UsageError(fmt::format("results file '{}' not found", results_path));
  auto records = read_results(fs::path(results_path));
  if (records.empty()) throw UsageError(fmt::format("results file '{}' has no records", results_path));

  // Periods come from the sweep's sidecar; without it daily buckets are assumed.
  const fs::path meta_path = fs::path(results_path).replace_extension(".meta.json");
  if (fs::exists(meta_path)) {
    const auto meta = read_json(meta_path);
    std::map<std::pair<std::string, int>, double> periods;
    for (const auto& p : meta.value("periods", json::array())) {
      periods[{p.at("atm_id").get<std::string>(), p.at("cycle_index").get<int>()}] = p.at("period_hours").get<double>();
    }
    for (auto& r : records) {
      if (const auto it = periods.find({r.atm_id, r.cycle_index}); it != periods.end()) r.period_hours = it->second;
    }
  } else {
    spdlog::warn("no {} next to the results; assuming 24 h buckets", meta_path.filename().string());
  }

  const auto pps = parse_pp_list(pp_list, g.params.pp);
  const fs::path out = prepare_out(g);
  const auto methods = methods_in(records);

  std::map<std::string, std::string> curves;
  for (const auto& m : methods) {
    curves[m] = "pp,best_average_config,best_average_mean_e,precision,recall,best_per_sample_mean_e\n";
  }
  for (double pp : pps) {
    BusinessParams p = g.params;
    p.pp = pp;
    const auto scored = rescore(records, p);
    for (const auto& m : methods) {
      const auto subset = of_method(scored, m);
      const auto avg = best_average_config(subset);
      std::string bps = "";
      try {
        bps = fmt::format("{}", best_per_sample(subset).mean_e);
      } catch (const IncompleteGridError& e) {
        spdlog::warn("{}: {}", m, e.what());
      }
      curves[m] += fmt::format("{},{},{},{},{},{}\n", pp, avg.config_id, avg.aggregate.mean_e,
                               avg.aggregate.precision_defined ? fmt::format("{}", avg.aggregate.precision) : "",
                               avg.aggregate.recall_defined ? fmt::format("{}", avg.aggregate.recall) : "", bps);
    }
  }
  for (const auto& [m, text] : curves) write_text(out / fmt::format("curve_{}.csv", m), text);

  // Per-cycle winners and stability at the first pp.
  const auto scored = rescore(records, g.params);
  BestPerSample best;
  try {
    best = best_per_sample(scored);
  } catch (const IncompleteGridError& e) {
    throw UsageError(e.what());
  }
  std::string table = "atm_id,cycle_index,config_id,method,e_score\n";
  for (const auto& c : best.per_cycle) {
    table += fmt::format("{},{},{},{},{}\n", c.atm_id, c.cycle_index, c.config_id, method_of(c.config_id), c.e_score);
  }
  write_text(out / "best_per_cycle.csv", table);

  auto stability_json = [](const StabilityStats& s) {
    return json{{"atms_with_multiple_cycles", s.atms_with_multiple_cycles},
                {"atms_same_model", s.atms_same_model},
                {"same_model_fraction", s.same_model_fraction},
                {"atms_with_over_two_cycles", s.atms_with_over_two_cycles},
                {"atms_at_most_one_change", s.atms_at_most_one_change},
                {"one_change_fraction", s.one_change_fraction}};
  };
  const auto by_method = model_stability(best.per_cycle, StabilityLevel::Method);
  const auto by_config = model_stability(best.per_cycle, StabilityLevel::Config);
  write_json(out / "stability.json", {{"pp", g.params.pp},
                                      {"method", stability_json(by_method)},
                                      {"config", stability_json(by_config)}});
  write_manifest(out, "report", g, {{"results", results_path}}, json::object(), {{"pp_list", pps}});

  fmt::print("{} curve file(s) for {} pp value(s)\n", curves.size(), pps.size());
  fmt::print("same best method on all cycles: {} ({} of {} ATMs with more than one cycle)\n",
             by_method.same_model_fraction, by_method.atms_same_model, by_method.atms_with_multiple_cycles);
  fmt::print("at most one change of best method: {} ({} of {} ATMs with more than two cycles)\n",
             by_method.one_change_fraction, by_method.atms_at_most_one_change, by_method.atms_with_over_two_cycles);
  return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_stats(const std::string& cycles_dir, const Globals& g) {
  const auto cycles = load_cycles(cycles_dir);
  const auto stats = dataset_stats(cycles);
  const fs::path out = prepare_out(g);
  write_json(out / "stats.json", to_json(stats));
  write_manifest(out, "stats", g, {{"cycles", cycles_dir}}, json::object(),
                 {{"fingerprint", corpus_fingerprint(cycles_dir)}});
  fmt::print("{} cycles, {} ATMs\n", stats.total_cycles, stats.total_atms);
  fmt::print("{:>14} {:>6} {:>7} {:>9} {:>9} {:>9} {:>14}\n", "cycles_per_atm", "atms", "cycles", "min_days",
             "med_days", "max_days", "activity/day");
  for (const auto& gr : stats.groups) {
    fmt::print("{:>14} {:>6} {:>7} {:>9.1f} {:>9.1f} {:>9.1f} {:>14.1f}\n", gr.cycles_per_atm, gr.atm_count,
               gr.cycle_count, gr.min_days, gr.median_days, gr.max_days, gr.mean_daily_activity);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_synth(const std::string& spec_path, std::optional<std::uint64_t> seed, std::optional<std::size_t> n_cycles,
              const Globals& g) {
  SynthSpec spec = spec_path.empty() ? SynthSpec{} : SynthSpec::from_json(read_json(spec_path));
  if (seed) spec.seed = *seed;
  if (n_cycles) spec.n_cycles = *n_cycles;
  const auto cycles = synthesize(spec);
  const fs::path out = prepare_out(g);
  const fs::path cycle_dir = out / "cycles";
  fs::remove_all(cycle_dir);
  fs::create_directories(cycle_dir);
  for (const auto& c : cycles) write_cycle(c, cycle_dir);
  if (cycles.empty()) spdlog::warn("n_cycles is 0: the corpus is empty");
  write_manifest(out, "synth", g, json::object(), {{"spec", spec.to_json()}},
                 {{"seed", spec.seed}, {"fingerprint", corpus_fingerprint(cycle_dir)}});
  std::set<std::string> atms;
  for (const auto& c : cycles) atms.insert(c.atm_id);
  fmt::print("{} cycles, {} ATMs written to {}\n", cycles.size(), atms.size(), cycle_dir.string());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Change-point detection benchmark for predictive maintenance event logs", "maintseg"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", MAINTSEG_VERSION);

  Globals g;
  app.add_option("--rd", g.params.rd, "Responsive duration in days")->capture_default_str();
  app.add_option("--pp", g.params.pp, "Predictive padding in days")->capture_default_str();
  app.add_option("--ii", g.params.ii, "Infected interval in days (ingest)")->capture_default_str();
  app.add_option("--s", g.params.s, "Sensibility of the score to early alerts")->capture_default_str();
  app.add_option("--step", g.step, "Window growth step T in samples")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--alert-at", g.alert_at, "Alert time used for scoring")
      ->capture_default_str()
      ->check(CLI::IsMember({"window-end", "changepoint"}));
  app.add_option("--workers", g.workers, "Parallel workers (sweep)")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Output directory")->capture_default_str();

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Raw event log to canonical cycle files");
  ingest_cmd->add_option("--events", ingest.events, "Delimited event log")->required();
  ingest_cmd->add_option("--failures", ingest.failures, "Failure marks (atm_id,failure_time[,module])");
  ingest_cmd->add_option("--grouping", ingest.grouping, "Code grouping config (JSON)");
  ingest_cmd->add_option("--columns", ingest.columns, "Column mapping (JSON)");
  ingest_cmd->add_option("--module", ingest.module, "Only use failures of this module");
  ingest_cmd->add_option("--period-hours", ingest.period_hours, "Resampling period F in hours")->capture_default_str();

  std::string cycles_dir, config_id, grid_path, pp_list, results_path, spec_path;
  bool fresh = false;
  auto* eval_cmd = app.add_subcommand("evaluate", "Run one detector config over a cycle corpus");
  eval_cmd->add_option("--cycles", cycles_dir, "Directory of cycle files")->required();
  eval_cmd->add_option("--config", config_id, "Config id, e.g. PELT/L2/1/2/-/raw/-")->required();

  auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate every config of a grid");
  sweep_cmd->add_option("--cycles", cycles_dir, "Directory of cycle files")->required();
  sweep_cmd->add_option("--grid", grid_path, "Grid file (JSON); built-in default otherwise");
  sweep_cmd->add_option("--pp-list", pp_list, "Comma-separated pp values for the summary");
  sweep_cmd->add_flag("--fresh", fresh, "Ignore an existing results file instead of resuming");

  auto* report_cmd = app.add_subcommand("report", "Plot-ready curves and stability from a results file");
  report_cmd->add_option("--results", results_path, "Results file from sweep")->required();
  report_cmd->add_option("--pp-list", pp_list, "Comma-separated pp values for the curves");

  auto* stats_cmd = app.add_subcommand("stats", "Dataset statistics of a cycle corpus");
  stats_cmd->add_option("--cycles", cycles_dir, "Directory of cycle files")->required();

  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n_cycles;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic cycle corpus");
  synth_cmd->add_option("--spec", spec_path, "Generator spec (JSON)");
  synth_cmd->add_option("--seed", seed, "Random seed");
  synth_cmd->add_option("--n-cycles", n_cycles, "Number of cycles");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    app.exit(e);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    g.params.validate();
    if (ingest_cmd->parsed()) return cmd_ingest(ingest, g);
    if (eval_cmd->parsed()) return cmd_evaluate(cycles_dir, config_id, g);
    if (sweep_cmd->parsed()) return cmd_sweep(cycles_dir, grid_path, pp_list, fresh, g);
    if (report_cmd->parsed()) return cmd_report(results_path, pp_list, g);
    if (stats_cmd->parsed()) return cmd_stats(cycles_dir, g);
    if (synth_cmd->parsed()) return cmd_synth(spec_path, seed, n_cycles, g);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitError;
  }
  return kExitError;
}
