#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "maintseg/detectors.hpp"

using namespace maintseg;

namespace {

Signal single_change() {
  std::vector<double> x(10, 0.0);
  for (std::size_t i = 5; i < 10; ++i) x[i] = 10.0;
  return Signal::from_column(x);
}

DetectorConfig pelt_l2(double beta) {
  DetectorConfig c;
  c.method = Method::Pelt;
  c.cost = SegmentCost{CostKind::L2};
  c.penalty = beta;
  c.min_size = 1;
  return c;
}

}  // namespace

TEST_CASE("config identifiers") {
  DetectorConfig pelt;
  pelt.cost = SegmentCost{CostKind::L2};
  CHECK(pelt.id() == "PELT/L2/1/2/-/raw/-");

  DetectorConfig fluss;
  fluss.method = Method::Fluss;
  fluss.znorm = true;
  CHECK(fluss.id() == "FLUSS/-/0.45/-/7/znorm/ANY");

  DetectorConfig kcpd;
  kcpd.method = Method::Kcpd;
  kcpd.cost = SegmentCost{CostKind::Rbf, 0.1};
  kcpd.penalty = 0.01;
  kcpd.min_size = 3;
  CHECK(kcpd.id() == "KCPD/RBF:0.1/0.01/3/-/raw/-");

  DetectorConfig bu;
  bu.method = Method::BottomUp;
  bu.cost = SegmentCost{CostKind::Rbf};
  bu.penalty = 1000;
  CHECK(bu.id() == "BOTTOMUP/RBF:median/1000/2/-/raw/-");
}

TEST_CASE("config identifiers round-trip") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    DetectorConfig c;
    c.method = static_cast<Method>(trial % 5);
    c.znorm = trial % 2 == 0;
    if (c.is_segmentation()) {
      const CostKind kind = c.method == Method::Kcpd ? CostKind::Rbf : static_cast<CostKind>((trial / 5) % 4);
      std::optional<double> gamma;
      if (kind == CostKind::Rbf && trial % 3 == 0) gamma = std::pow(10.0, 4.0 * unit(rng) - 2.0);
      c.cost = SegmentCost{kind, gamma};
      c.penalty = std::pow(10.0, 5.0 * unit(rng) - 2.0);
      c.min_size = 1 + static_cast<std::size_t>(trial % 7);
    } else {
      c.threshold = 0.01 + 0.98 * unit(rng);
      c.subsequence = 3 + static_cast<std::size_t>(trial % 20);
      c.channel_rule = trial % 3 == 0 ? ChannelRule::Sum : ChannelRule::Any;
    }
    const auto back = DetectorConfig::parse(c.id());
    CHECK(back == c);
    CHECK(back.id() == c.id());
  }
}

TEST_CASE("config validation and parse errors") {
  DetectorConfig c;
  c.method = Method::Kcpd;
  c.cost = SegmentCost{CostKind::L2};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.cost = SegmentCost{CostKind::Rbf};
  CHECK_NOTHROW(c.validate());
  c.penalty = -1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);

  DetectorConfig f;
  f.method = Method::Fluss;
  f.threshold = 1.0;
  CHECK_THROWS_AS(f.validate(), std::invalid_argument);
  f.threshold = 0.0;
  CHECK_THROWS_AS(f.validate(), std::invalid_argument);
  f.threshold = 0.5;
  f.subsequence = 2;
  CHECK_THROWS_AS(f.validate(), std::invalid_argument);

  for (const char* bad : {"", "PELT", "PELT/L2/1/2/-/raw", "PELT/L3/1/2/-/raw/-", "PELT/L2/x/2/-/raw/-",
                          "PELT/L2/1/0/-/raw/-", "PELT/L2/1/2/-/norm/-", "FLUSS/-/0.45/-/7/raw/ALL",
                          "FLUSS/-/1.5/-/7/raw/ANY", "HMM/L2/1/2/-/raw/-", "KCPD/L2/1/2/-/raw/-"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(DetectorConfig::parse(bad), std::invalid_argument);
  }
}

TEST_CASE("canonical ordering is a strict weak order on distinct ids") {
  std::vector<DetectorConfig> configs;
  for (double beta : {10.0, 0.1, 1.0}) configs.push_back(pelt_l2(beta));
  DetectorConfig f;
  f.method = Method::Fluss;
  configs.push_back(f);
  DetectorConfig b;
  b.method = Method::Binseg;
  configs.push_back(b);
  std::sort(configs.begin(), configs.end(), config_less);
  CHECK(configs[0].penalty == 0.1);
  CHECK(configs[2].penalty == 10.0);
  CHECK(configs[3].method == Method::Binseg);
  CHECK(configs[4].method == Method::Fluss);
  for (std::size_t i = 0; i < configs.size(); ++i) CHECK_FALSE(config_less(configs[i], configs[i]));
}

TEST_CASE("segmentation detectors report their last breakpoint") {
  CHECK_FALSE(detect(Signal(20, 2, 3.0), pelt_l2(1.0)).has_value());
  CHECK(detect(single_change(), pelt_l2(1.0)) == std::optional<std::size_t>{5});
  auto z = pelt_l2(1.0);
  z.znorm = true;
  CHECK(detect(single_change(), z) == std::optional<std::size_t>{5});

  std::vector<double> x(15, 0.0);
  for (std::size_t i = 5; i < 10; ++i) x[i] = 10.0;
  const auto d = detect_scored(Signal::from_column(x), pelt_l2(1.0));
  CHECK(d.change_point == std::optional<std::size_t>{10});
  CHECK(d.score == 2.0);
  CHECK_FALSE(detect(Signal{}, pelt_l2(1.0)).has_value());

  for (Method m : {Method::Binseg, Method::BottomUp}) {
    auto c = pelt_l2(1.0);
    c.method = m;
    CHECK(detect(single_change(), c) == std::optional<std::size_t>{5});
  }
  DetectorConfig k;
  k.method = Method::Kcpd;
  k.cost = SegmentCost{CostKind::Rbf};
  k.penalty = 0.5;
  k.min_size = 1;
  CHECK(detect(single_change(), k) == std::optional<std::size_t>{5});
}

TEST_CASE("z-normalization leaves L2 breakpoints unchanged on affine copies") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x(60);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = noise(rng) + (i >= 25 ? 4.0 : 0.0);
    std::vector<double> y(x.size());
    const double a = 0.5 + trial, b = 100.0 - 13.0 * trial;
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = a * x[i] + b;
    auto c = pelt_l2(5.0);
    c.znorm = true;
    c.min_size = 2;
    CHECK(detect(Signal::from_column(x), c) == detect(Signal::from_column(y), c));
  }
}

TEST_CASE("FLUSS detector fires on a regime change and scores every window") {
  std::vector<double> x(400);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = static_cast<double>(i);
    x[i] = i < 200 ? std::sin(2.0 * std::numbers::pi * t / 20.0) : 3.0 + std::sin(2.0 * std::numbers::pi * t / 7.0);
  }
  DetectorConfig f;
  f.method = Method::Fluss;
  f.subsequence = 20;
  const auto d = detect_scored(Signal::from_column(x), f);
  REQUIRE(d.change_point.has_value());
  CHECK(std::abs(static_cast<long>(*d.change_point) - 200) <= 20);
  CHECK(d.score < 0.45);

  const auto quiet = detect_scored(Signal(300, 1, 1.0), f);
  CHECK_FALSE(quiet.change_point.has_value());
  CHECK(quiet.score == 1.0);
}
