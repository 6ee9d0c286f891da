#include <doctest.h>

#include <map>

#include "maintseg/metrics.hpp"
#include "maintseg/protocol.hpp"
#include "maintseg/synth.hpp"

using namespace maintseg;

namespace {

Aggregate evaluate(const std::vector<LifeCycle>& cycles, const std::string& id) {
  const auto config = DetectorConfig::parse(id);
  std::vector<EvaluationRecord> records;
  for (const auto& c : cycles) records.push_back(score_alert(c, id, run_streaming(c, config).alert, BusinessParams{}));
  return aggregate(records);
}

}  // namespace

TEST_CASE("same seed gives the same corpus") {
  SynthSpec spec;
  spec.n_cycles = 12;
  const auto a = synthesize(spec), b = synthesize(spec);
  REQUIRE(a.size() == 12);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].atm_id == b[i].atm_id);
    CHECK(a[i].start_time == b[i].start_time);
    CHECK(a[i].samples == b[i].samples);
    CHECK(a[i].activity == b[i].activity);
  }
  spec.seed = 2;
  const auto c = synthesize(spec);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) differs = differs || !(a[i].samples == c[i].samples);
  CHECK(differs);
}

TEST_CASE("corpus shape follows the generator settings") {
  SynthSpec spec;
  spec.n_cycles = 40;
  spec.min_days = 30;
  spec.max_days = 45;
  const auto cycles = synthesize(spec);
  REQUIRE(cycles.size() == 40);
  std::map<std::string, int> per_atm;
  for (const auto& c : cycles) {
    CHECK_NOTHROW(c.validate());
    CHECK(c.length() >= 30);
    CHECK(c.length() <= 45);
    CHECK(c.samples.cols() == 4);
    CHECK(c.cycle_index == per_atm[c.atm_id]++);
    CHECK(c.ended_in_failure);
    CHECK(c.activity.size() == c.length());
  }
  for (const auto& [atm, count] : per_atm) CHECK(count <= 3);

  spec.period_hours = 12;
  const auto half_days = synthesize(spec);
  for (const auto& c : half_days) CHECK(c.duration_days() <= 45.0);

  spec.n_cycles = 0;
  CHECK(synthesize(spec).empty());
  spec.max_days = 10;
  CHECK_THROWS_AS(synthesize(spec), std::invalid_argument);
}

TEST_CASE("spec json round-trip") {
  SynthSpec spec;
  spec.seed = 99;
  spec.precursor_factor = 7.5;
  const auto back = SynthSpec::from_json(spec.to_json());
  CHECK(back.to_json() == spec.to_json());
  CHECK(SynthSpec::from_json(nlohmann::json::object()).n_cycles == 50);
  CHECK_THROWS_AS(SynthSpec::from_json({{"min_days", 10}, {"max_days", 5}}), std::invalid_argument);
}

TEST_CASE("the planted precursor is found by a tuned detector") {
  const auto cycles = synthesize(SynthSpec{});
  const auto tuned = evaluate(cycles, "PELT/L2/0.1/2/-/raw/-");
  CHECK(tuned.recall >= 0.9);
  CHECK(tuned.precision >= 0.9);
  const auto silent = evaluate(cycles, "PELT/L2/1e+12/2/-/raw/-");
  CHECK(silent.recall == 0.0);
  CHECK(silent.mean_e == 0.0);
  CHECK(silent.fn == cycles.size());
}
