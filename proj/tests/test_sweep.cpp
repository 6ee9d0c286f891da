#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <limits>
#include <fstream>
#include <map>
#include <sstream>

#include "maintseg/sweep.hpp"
#include "maintseg/synth.hpp"

using namespace maintseg;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "maintseg_test_sweep";
  fs::create_directories(dir);
  auto p = dir / name;
  fs::remove(p);
  return p;
}

std::vector<LifeCycle> small_corpus(std::size_t n) {
  SynthSpec spec;
  spec.n_cycles = n;
  spec.min_days = 40;
  spec.max_days = 70;
  return synthesize(spec);
}

std::vector<DetectorConfig> small_grid() {
  return build_grid(GridSpec::from_json(json::parse(R"({
    "PELT": {"costs": ["L2", "L1"], "penalties": [0.01, 0.1, 10], "znorm": [false, true]},
    "BINSEG": {"costs": ["NORMAL"], "penalties": [1, 100]},
    "BOTTOMUP": {"costs": ["L2"], "penalties": [0.1], "min_sizes": [2, 3]},
    "KCPD": {"penalties": [0.5, 5]},
    "FLUSS": {"thresholds": [0.3, 0.45], "subsequences": [5, 7], "znorm": [true]}
  })")));
}

std::string table_text(const ResultsTable& t) {
  std::ostringstream out;
  write_results(out, t.records);
  return out.str();
}

}  // namespace

TEST_CASE("grid expansion counts") {
  auto g = build_grid(GridSpec::from_json(json::parse(
      R"({"PELT": {"costs": ["L2", "RBF:median"], "penalties": [0.1, 1, 10]}})")));
  CHECK(g.size() == 6);
  for (const auto& c : g) CHECK(c.method == Method::Pelt);
  CHECK(build_grid(GridSpec::from_json(json::object())).empty());
  CHECK(small_grid().size() == 12 + 2 + 2 + 2 + 4);
}

TEST_CASE("the shipped grid file matches the built-in default") {
  std::ifstream in(fs::path(MAINTSEG_SOURCE_DIR) / "config" / "grid.default.json");
  REQUIRE(in);
  const json doc = json::parse(in);
  CHECK(doc == GridSpec::default_json());
  const auto grid = build_grid(GridSpec::from_json(doc));
  std::map<Method, std::size_t> per_method;
  for (const auto& c : grid) ++per_method[c.method];
  CHECK(per_method.size() == 5);
  for (const auto& [m, count] : per_method) {
    CAPTURE(to_string(m));
    CHECK(count >= 250);
    CHECK(count <= 350);
  }
  CHECK(std::is_sorted(grid.begin(), grid.end(), config_less));
}

TEST_CASE("generated ranges") {
  const auto spec = GridSpec::from_json(json::parse(
      R"({"PELT": {"costs": ["L2"], "penalties": {"logspace": [0.01, 1000, 6]}},
          "FLUSS": {"thresholds": {"linspace": [0.3, 0.6, 4]}}})"));
  CHECK(spec.methods.at(Method::Pelt).penalties == std::vector<double>{0.01, 0.1, 1, 10, 100, 1000});
  CHECK(spec.methods.at(Method::Fluss).thresholds == std::vector<double>{0.3, 0.4, 0.5, 0.6});
  const auto grid = build_grid(spec);
  CHECK(grid.size() == 10);
  CHECK(grid.front().id() == "PELT/L2/0.01/2/-/raw/-");
}

TEST_CASE("malformed grids are rejected") {
  for (const char* text : {R"([])", R"({"HMM": {}})", R"({"PELT": {"costs": ["L9"], "penalties": [1]}})",
                           R"({"PELT": {"costs": ["L2"], "penalties": [1, 1]}})",
                           R"({"PELT": {"costs": ["L2"], "penalties": {"logspace": [0, 1, 3]}}})",
                           R"({"PELT": {"costs": ["L2"], "penalties": {"geomspace": [1, 2, 3]}}})",
                           R"({"PELT": {"costs": ["L2"], "penalties": {"linspace": [1, 2]}}})",
                           R"({"PELT": {"costs": ["L2"], "penalties": [-1]}})",
                           R"({"KCPD": {"costs": ["L2"], "penalties": [1]}})",
                           R"({"FLUSS": {"thresholds": [1.2]}})",
                           R"({"FLUSS": {"thresholds": [0.4], "channel_rules": ["BOTH"]}})",
                           R"({"PELT": {"costs": "L2"}})",
                           R"({"PELT": {"costs": ["L2"], "penalty": [1]}})"}) {
    const std::string shown = text;
    CAPTURE(shown);
    CHECK_THROWS_AS(build_grid(GridSpec::from_json(json::parse(text))), GridSpecError);
  }
}

TEST_CASE("one cycle with a silent detector gives one false negative") {
  const auto cycles = small_corpus(1);
  const std::vector<DetectorConfig> configs{DetectorConfig::parse("PELT/L2/1e+12/2/-/raw/-")};
  const auto t = run_sweep(cycles, configs, SweepOptions{});
  REQUIRE(t.records.size() == 1);
  CHECK(t.records[0].verdict == Verdict::FN);
  CHECK_FALSE(t.records[0].alert.has_value());
  CHECK_FALSE(t.partial);
  CHECK(t.failures.empty());
}

TEST_CASE("sweep output does not depend on the worker count") {
  const auto cycles = small_corpus(8);
  const auto configs = small_grid();
  SweepOptions one;
  SweepOptions eight;
  eight.workers = 8;
  std::size_t progress_calls = 0;
  eight.progress = [&](std::size_t, std::size_t) { ++progress_calls; };
  const auto a = run_sweep(cycles, configs, one);
  const auto b = run_sweep(cycles, configs, eight);
  CHECK(a.records.size() == cycles.size() * configs.size());
  CHECK(a.records == b.records);
  CHECK(table_text(a) == table_text(b));
  CHECK(progress_calls == a.records.size());

  const auto pa = scratch("w1.csv"), pb = scratch("w8.csv");
  one.results_path = pa;
  eight.results_path = pb;
  run_sweep(cycles, configs, one);
  run_sweep(cycles, configs, eight);
  CHECK(slurp(pa) == slurp(pb));
  CHECK(slurp(pa) == table_text(a));
}

TEST_CASE("an interrupted sweep resumes to the same table") {
  const auto cycles = small_corpus(5);
  const auto configs = small_grid();
  SweepOptions opts;
  const auto full = scratch("full.csv");
  opts.results_path = full;
  run_sweep(cycles, configs, opts);

  // Simulate an interruption: keep the header, some rows and a torn line.
  const auto partial = scratch("partial.csv");
  {
    std::istringstream in(slurp(full));
    std::ofstream out(partial, std::ios::binary);
    std::string line;
    for (int k = 0; k < 40 && std::getline(in, line); ++k) out << line << '\n';
    std::getline(in, line);
    out << line.substr(0, line.size() / 2);
  }
  std::size_t evaluated = 0;
  opts.results_path = partial;
  opts.progress = [&](std::size_t, std::size_t) { ++evaluated; };
  const auto resumed = run_sweep(cycles, configs, opts);
  CHECK(evaluated == cycles.size() * configs.size() - 39);
  CHECK(slurp(partial) == slurp(full));
  CHECK(resumed.records.size() == cycles.size() * configs.size());

  // A finished file needs no work at all.
  evaluated = 0;
  run_sweep(cycles, configs, opts);
  CHECK(evaluated == 0);
  CHECK(slurp(partial) == slurp(full));
}

TEST_CASE("resumed rows are rescored under new business parameters") {
  const auto cycles = small_corpus(4);
  const auto configs = small_grid();
  SweepOptions opts;
  const auto path = scratch("rescore.csv");
  opts.results_path = path;
  run_sweep(cycles, configs, opts);
  opts.params.pp = 21;
  const auto resumed = run_sweep(cycles, configs, opts);
  opts.results_path.reset();
  const auto fresh = run_sweep(cycles, configs, opts);
  CHECK(table_text(resumed) == table_text(fresh));
}

TEST_CASE("failing pairs are reported and mark the table partial") {
  auto cycles = small_corpus(2);
  auto bad = cycles[0];
  bad.atm_id = "broken";
  bad.samples(3, 0) = std::numeric_limits<double>::quiet_NaN();
  cycles.push_back(bad);
  const std::vector<DetectorConfig> configs{DetectorConfig::parse("PELT/L2/0.1/2/-/znorm/-"),
                                            DetectorConfig::parse("PELT/L2/0.1/2/-/raw/-")};
  const auto t = run_sweep(cycles, configs, SweepOptions{});
  CHECK(t.partial);
  REQUIRE(t.failures.size() >= 1);
  CHECK(t.failures[0].atm_id == "broken");
  CHECK(t.records.size() + t.failures.size() == 6);
}

TEST_CASE("results file round-trip") {
  std::vector<EvaluationRecord> records(3);
  records[0].atm_id = "a,b";
  records[0].config_id = "PELT/L2/0.1/2/-/raw/-";
  records[0].verdict = Verdict::TP;
  records[0].alert = Alert{0, 98, 92, 98.0};
  records[0].n = 105;
  records[0].e_score = 1.0;
  records[1].atm_id = "b\"q";
  records[1].cycle_index = 3;
  records[1].config_id = "FLUSS/-/0.45/-/7/znorm/ANY";
  records[1].n = 60;
  records[2].atm_id = "c";
  records[2].config_id = "KCPD/RBF:median/1/2/-/raw/-";
  records[2].verdict = Verdict::FP;
  records[2].alert = Alert{0, 14, 3, 3.0};
  records[2].n = 100;
  records[2].e_score = 0.0009118406039269615;
  std::ostringstream out;
  write_results(out, records);
  CHECK(out.str().substr(0, out.str().find('\n')) ==
        "atm_id,cycle_index,config_id,verdict,step_end_index,change_point_index,a,n,e_score");
  std::istringstream in(out.str());
  const auto back = read_results(in);
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back[i].atm_id == records[i].atm_id);
    CHECK(back[i].cycle_index == records[i].cycle_index);
    CHECK(back[i].config_id == records[i].config_id);
    CHECK(back[i].verdict == records[i].verdict);
    CHECK(back[i].alert.has_value() == records[i].alert.has_value());
    CHECK(back[i].e_score == records[i].e_score);
    CHECK(back[i].n == records[i].n);
  }
  CHECK(back[0].alert->step_end_index == 98);
  CHECK(back[0].alert->change_point_index == 92);
  CHECK(back[0].alert->a == 98.0);

  std::istringstream broken("atm_id,cycle_index,config_id,verdict,step_end_index,change_point_index,a,n,e_score\n"
                            "a,0,X,TP\nb,0,X,FN,,,,10,0\n");
  CHECK_THROWS(read_results(broken));
  std::istringstream bad_number("h\na,zero,X,FN,,,,10,0\n");
  CHECK_THROWS(read_results(bad_number));
  CHECK_THROWS(read_results(fs::path("/nonexistent/results.csv")));
}

TEST_CASE("a synthetic corpus against the default grid yields a complete table") {
  SynthSpec spec;
  spec.n_cycles = 10;
  spec.min_days = 30;
  spec.max_days = 50;
  const auto cycles = synthesize(spec);
  const auto configs = build_grid(GridSpec::from_json(GridSpec::default_json()));
  SweepOptions opts;
  opts.workers = 4;
  const auto t = run_sweep(cycles, configs, opts);
  CHECK_FALSE(t.partial);
  CHECK(t.records.size() == cycles.size() * configs.size());
  const auto best = best_per_sample(t.records);
  CHECK(best.mean_e >= best_average_config(t.records).aggregate.mean_e);
}
