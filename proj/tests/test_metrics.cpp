#include <doctest.h>

#include <cmath>
#include <random>

#include "maintseg/metrics.hpp"

using namespace maintseg;

namespace {

EvaluationRecord rec(std::string atm, int cycle, std::string config, Verdict v, double e) {
  EvaluationRecord r;
  r.atm_id = std::move(atm);
  r.cycle_index = cycle;
  r.config_id = std::move(config);
  r.verdict = v;
  r.e_score = e;
  return r;
}

/// Third case evaluated in extended precision straight from its definition.
long double early_oracle(long double a, long double n, long double pp, long double rd, long double s) {
  return (std::exp(s * a) - 1.0L) / (std::exp(s * (n - rd - pp)) - 1.0L);
}

}  // namespace

TEST_CASE("score boundary values") {
  CHECK(e_score(99, 100, 14, 1, 0.2) == 0.0);
  CHECK(e_score(100, 100, 14, 1, 0.2) == 0.0);
  CHECK(e_score(90, 100, 14, 1, 0.2) == 1.0);
  CHECK(e_score(85, 100, 14, 1, 0.2) == 1.0);
  CHECK(e_score(98.999, 100, 14, 1, 0.2) == 1.0);
  CHECK(e_score(std::nullopt, 100, 14, 1, 0.2) == 0.0);
  CHECK(e_score(0, 100, 14, 1, 0.2) == 0.0);
}

TEST_CASE("early alerts are discounted exponentially") {
  CHECK(e_score(50, 100, 14, 1, 0.2) == doctest::Approx(0.0009118406039269615).epsilon(1e-12));
  CHECK(e_score(50, 100, 14, 1, 1e-8) == doctest::Approx(50.0 / 85.0).epsilon(1e-6));
  // Continuity at the padding boundary.
  CHECK(std::abs(e_score(85 - 1e-9, 100, 14, 1, 0.2) - 1.0) < 1e-9);
  CHECK(std::abs(e_score(std::nextafter(85.0, 0.0), 100, 14, 1, 0.2) - 1.0) < 1e-9);
}

TEST_CASE("score matches the definition on a grid and is monotone in a") {
  for (double n : {20.0, 100.0, 365.0, 2000.0}) {
    for (double pp : {1.0, 7.0, 14.0}) {
      for (double rd : {0.0, 1.0, 3.0}) {
        for (double s : {0.001, 0.05, 0.2, 1.0}) {
          double prev = 0.0;
          const double start = n - rd - pp;
          for (double a = 0.0; a < n - rd; a += 0.25) {
            const double v = e_score(a, n, pp, rd, s);
            CHECK(v >= prev);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            if (a < start) {
              const long double ref = early_oracle(a, n, pp, rd, s);
              if (std::isfinite(static_cast<double>(ref))) CHECK(std::abs(v - static_cast<double>(ref)) < 1e-12);
            }
            prev = v;
          }
          if (start > 0) CHECK(std::abs(e_score(start - 1e-10, n, pp, rd, s) - 1.0) < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("score does not overflow on long cycles") {
  const double v = e_score(9000, 10000, 14, 1, 0.2);
  CHECK(std::isfinite(v));
  CHECK(v > 0.0);
  CHECK(v < 1e-80);
  const double near = e_score(9980, 10000, 14, 1, 0.2);
  CHECK(near == doctest::Approx(std::exp(-0.2 * 5)).epsilon(1e-9));
}

TEST_CASE("score argument checks") {
  CHECK_THROWS_AS(e_score(1, 0, 14, 1, 0.2), std::invalid_argument);
  CHECK_THROWS_AS(e_score(1, 100, 0, 1, 0.2), std::invalid_argument);
  CHECK_THROWS_AS(e_score(1, 100, 14, -1, 0.2), std::invalid_argument);
  CHECK_THROWS_AS(e_score(1, 100, 14, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(e_score(NAN, 100, 14, 1, 0.2), std::invalid_argument);
}

TEST_CASE("score_alert converts days to samples") {
  LifeCycle c;
  c.atm_id = "A";
  c.cycle_index = 2;
  c.samples = Signal(100, 1, 0.0);
  c.period_hours = 12.0;  // pp = 14 days = 28 samples, rd = 2 samples
  Alert al{0, 80, 80, 80.0};
  const auto r = score_alert(c, "X", al, BusinessParams{});
  CHECK(r.verdict == Verdict::TP);
  CHECK(r.e_score == 1.0);
  CHECK(r.n == 100);
  al.a = 98.0;
  CHECK(score_alert(c, "X", al, BusinessParams{}).verdict == Verdict::FP);
  CHECK(score_alert(c, "X", std::nullopt, BusinessParams{}).verdict == Verdict::FN);

  c.period_hours = 24.0;
  al.a = 80.0;
  const auto daily = score_alert(c, "X", al, BusinessParams{});
  CHECK(daily.verdict == Verdict::FP);
  const auto wide = rescore(std::vector<EvaluationRecord>{daily}, BusinessParams{1, 21, 1, 0.2});
  CHECK(wide[0].verdict == Verdict::TP);
  CHECK(wide[0].params.pp == 21);
}

TEST_CASE("aggregate counts") {
  std::vector<EvaluationRecord> all_tp{rec("a", 0, "X", Verdict::TP, 1), rec("b", 0, "X", Verdict::TP, 1)};
  auto agg = aggregate(all_tp);
  CHECK(agg.precision == 1.0);
  CHECK(agg.recall == 1.0);
  CHECK(agg.mean_e == 1.0);

  std::vector<EvaluationRecord> mixed{rec("a", 0, "X", Verdict::TP, 1), rec("b", 0, "X", Verdict::FP, 0),
                                      rec("c", 0, "X", Verdict::FN, 0), rec("d", 0, "X", Verdict::FN, 0)};
  agg = aggregate(mixed);
  CHECK(agg.precision == 0.5);
  CHECK(agg.recall == doctest::Approx(1.0 / 3.0));
  CHECK(agg.count == 4);

  std::vector<EvaluationRecord> scores{rec("a", 0, "X", Verdict::TP, 1), rec("b", 0, "X", Verdict::FN, 0),
                                       rec("c", 0, "X", Verdict::FP, 0.5)};
  CHECK(aggregate(scores).mean_e == 0.5);

  std::vector<EvaluationRecord> silent{rec("a", 0, "X", Verdict::FN, 0)};
  agg = aggregate(silent);
  CHECK_FALSE(agg.precision_defined);
  CHECK(agg.precision == 0.0);
  CHECK(agg.recall == 0.0);
  CHECK(agg.recall_defined);
  CHECK(aggregate(std::vector<EvaluationRecord>{}).mean_e == 0.0);
}

TEST_CASE("best average configuration") {
  std::vector<EvaluationRecord> r{rec("a", 0, "X", Verdict::FP, 0.3), rec("a", 0, "Y", Verdict::TP, 0.4)};
  CHECK(best_average_config(r).config_id == "Y");

  // Equal means: higher precision wins.
  std::vector<EvaluationRecord> tie{
      rec("a", 0, "P", Verdict::TP, 0.5), rec("b", 0, "P", Verdict::FP, 0.5),  // precision 0.5
      rec("c", 0, "P", Verdict::FN, 0.0),
      rec("a", 0, "Q", Verdict::TP, 1.0), rec("b", 0, "Q", Verdict::FP, 0.0),  // precision 0.2
      rec("c", 0, "Q", Verdict::FP, 0.0)};
  tie[4].e_score = 0.0;
  tie[3].e_score = 1.0;
  const auto p = aggregate_by_config(tie);
  REQUIRE(p.size() == 2);
  CHECK(p[0].aggregate.mean_e == doctest::Approx(p[1].aggregate.mean_e));
  CHECK(best_average_config(tie).config_id == "P");

  std::vector<EvaluationRecord> same{rec("a", 0, "B", Verdict::TP, 1), rec("a", 0, "A", Verdict::TP, 1)};
  CHECK(best_average_config(same).config_id == "A");
  std::vector<EvaluationRecord> single{rec("a", 0, "Z", Verdict::FN, 0)};
  CHECK(best_average_config(single).config_id == "Z");
  CHECK_THROWS(best_average_config(std::vector<EvaluationRecord>{}));
}

TEST_CASE("best per sample") {
  std::vector<EvaluationRecord> r{rec("a", 0, "X", Verdict::FP, 0), rec("a", 0, "Y", Verdict::FP, 0.4),
                                  rec("a", 0, "Z", Verdict::TP, 1)};
  auto best = best_per_sample(r);
  REQUIRE(best.per_cycle.size() == 1);
  CHECK(best.per_cycle[0].e_score == 1.0);
  CHECK(best.per_cycle[0].config_id == "Z");

  std::vector<EvaluationRecord> single{rec("a", 0, "X", Verdict::TP, 1), rec("b", 0, "X", Verdict::FP, 0.2)};
  CHECK(best_per_sample(single).mean_e == aggregate(single).mean_e);

  std::vector<EvaluationRecord> ties{rec("a", 0, "Y", Verdict::FN, 0), rec("a", 0, "X", Verdict::FN, 0)};
  CHECK(best_per_sample(ties).per_cycle[0].config_id == "X");

  std::vector<EvaluationRecord> holes{rec("a", 0, "X", Verdict::TP, 1), rec("b", 0, "Y", Verdict::TP, 1)};
  CHECK_THROWS_AS(best_per_sample(holes), IncompleteGridError);
}

TEST_CASE("best per sample dominates the best average") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<EvaluationRecord> r;
    const int cycles = 1 + trial % 9, configs = 1 + trial % 5;
    for (int c = 0; c < cycles; ++c) {
      for (int k = 0; k < configs; ++k) {
        const double u = unit(rng);
        const double e = u < 0.3 ? 0.0 : (u < 0.5 ? 1.0 : unit(rng));
        r.push_back(rec("atm" + std::to_string(c % 3), c, "C" + std::to_string(k), Verdict::FP, e));
      }
    }
    CHECK(best_per_sample(r).mean_e >= best_average_config(r).aggregate.mean_e);
  }
}

TEST_CASE("model stability") {
  auto cb = [](std::string atm, int cycle, std::string config) {
    return CycleBest{std::move(atm), cycle, std::move(config), 1.0};
  };
  std::vector<CycleBest> stable{cb("a", 0, "PELT/L2/1/2/-/raw/-"), cb("a", 1, "PELT/L1/1/2/-/raw/-"),
                                cb("a", 2, "PELT/L2/1/2/-/raw/-")};
  auto st = model_stability(stable);
  CHECK(st.atms_same_model == 1);
  CHECK(st.atms_at_most_one_change == 1);
  CHECK(st.same_model_fraction == 1.0);
  CHECK(st.one_change_fraction == 1.0);
  st = model_stability(stable, StabilityLevel::Config);
  CHECK(st.atms_same_model == 0);
  CHECK(st.atms_at_most_one_change == 0);

  std::vector<CycleBest> switched{cb("b", 2, "FLUSS/-/0.45/-/7/znorm/ANY"), cb("b", 0, "PELT/L2/1/2/-/raw/-"),
                                  cb("b", 1, "FLUSS/-/0.4/-/7/znorm/ANY")};
  st = model_stability(switched);
  CHECK(st.atms_same_model == 0);
  CHECK(st.atms_at_most_one_change == 1);

  // Two machines with two cycles each, one stable: 50%.
  std::vector<CycleBest> half{cb("x", 0, "KCPD/RBF:median/1/2/-/raw/-"), cb("x", 1, "KCPD/RBF:median/1/2/-/raw/-"),
                              cb("y", 0, "KCPD/RBF:median/1/2/-/raw/-"), cb("y", 1, "BINSEG/L2/1/2/-/raw/-"),
                              cb("z", 0, "PELT/L2/1/2/-/raw/-")};
  st = model_stability(half);
  CHECK(st.atms_with_multiple_cycles == 2);
  CHECK(st.same_model_fraction == 0.5);
  CHECK(st.atms_with_over_two_cycles == 0);
  CHECK(st.one_change_fraction == 0.0);
  CHECK(method_of("KCPD/RBF:median/1/2/-/raw/-") == "KCPD");
}
