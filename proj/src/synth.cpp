#include "maintseg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <random>
#include <stdexcept>

namespace maintseg {
using nlohmann::json;

SynthSpec SynthSpec::from_json(const json& doc) {
  SynthSpec s;
  s.seed = doc.value("seed", s.seed);
  s.n_cycles = doc.value("n_cycles", s.n_cycles);
  s.max_cycles_per_atm = doc.value("max_cycles_per_atm", s.max_cycles_per_atm);
  s.min_days = doc.value("min_days", s.min_days);
  s.max_days = doc.value("max_days", s.max_days);
  s.change_offset_days = doc.value("change_offset_days", s.change_offset_days);
  s.period_hours = doc.value("period_hours", s.period_hours);
  s.background_regimes = doc.value("background_regimes", s.background_regimes);
  s.ok_rate = doc.value("ok_rate", s.ok_rate);
  s.error_rate = doc.value("error_rate", s.error_rate);
  s.warning_rate = doc.value("warning_rate", s.warning_rate);
  s.precursor_factor = doc.value("precursor_factor", s.precursor_factor);
  s.withdrawal_rate = doc.value("withdrawal_rate", s.withdrawal_rate);
  if (s.max_cycles_per_atm == 0 || s.min_days == 0 || s.max_days < s.min_days || !(s.period_hours > 0.0)) {
    throw std::invalid_argument("synth: inconsistent spec");
  }
  return s;
}

json SynthSpec::to_json() const {
  return {{"seed", seed},
          {"n_cycles", n_cycles},
          {"max_cycles_per_atm", max_cycles_per_atm},
          {"min_days", min_days},
          {"max_days", max_days},
          {"change_offset_days", change_offset_days},
          {"period_hours", period_hours},
          {"background_regimes", background_regimes},
          {"ok_rate", ok_rate},
          {"error_rate", error_rate},
          {"warning_rate", warning_rate},
          {"precursor_factor", precursor_factor},
          {"withdrawal_rate", withdrawal_rate}};
}

std::vector<LifeCycle> synthesize(const SynthSpec& spec) {
  if (spec.max_cycles_per_atm == 0 || spec.min_days == 0 || spec.max_days < spec.min_days ||
      !(spec.period_hours > 0.0) || spec.change_offset_days < 0.0) {
    throw std::invalid_argument("synth: inconsistent spec");
  }
  std::mt19937_64 rng(spec.seed);
  const auto config = CodeGroupingConfig::atm_default();
  const auto codes = config.module_codes();
  auto col = [&codes](std::string_view code) {
    return static_cast<std::size_t>(std::find(codes.begin(), codes.end(), code) - codes.begin());
  };
  auto poisson = [&rng](double rate) {
    return rate > 0.0 ? static_cast<double>(std::poisson_distribution<long>(rate)(rng)) : 0.0;
  };

  const double per_bucket = spec.period_hours / 24.0;
  const Timestamp epoch{std::chrono::sys_days{std::chrono::year{2019} / 1 / 1}};

  std::vector<LifeCycle> out;
  std::size_t atm = 0;
  while (out.size() < spec.n_cycles) {
    const std::size_t remaining = spec.n_cycles - out.size();
    const std::size_t n_cycles = std::min<std::size_t>(
        remaining, std::uniform_int_distribution<std::size_t>(1, spec.max_cycles_per_atm)(rng));
    const std::string atm_id = fmt::format("synth{:04d}", atm++);
    Timestamp start = epoch + std::chrono::days(std::uniform_int_distribution<int>(0, 60)(rng));

    for (std::size_t ci = 0; ci < n_cycles; ++ci) {
      const std::size_t days = std::uniform_int_distribution<std::size_t>(spec.min_days, spec.max_days)(rng);
      const auto buckets = static_cast<std::size_t>(std::ceil(static_cast<double>(days) / per_bucket));
      const auto offset = static_cast<std::size_t>(std::llround(days_to_samples(spec.change_offset_days, spec.period_hours)));
      const std::size_t change = buckets > offset ? buckets - offset : 0;

      // Background regimes: piecewise-constant activity level before the change.
      std::vector<std::size_t> cuts{0};
      for (std::size_t r = 0; r < spec.background_regimes && change > 2; ++r) {
        cuts.push_back(std::uniform_int_distribution<std::size_t>(1, change - 1)(rng));
      }
      std::sort(cuts.begin(), cuts.end());
      std::vector<double> level(cuts.size());
      for (auto& l : level) l = std::uniform_real_distribution<double>(0.6, 1.4)(rng);

      CountMatrix counts;
      counts.codes = codes;
      counts.buckets = buckets;
      counts.counts.assign(buckets * codes.size(), 0.0);
      counts.start = start;
      counts.period_hours = spec.period_hours;
      for (std::size_t k = 0; k < buckets; ++k) {
        const auto regime = static_cast<std::size_t>(std::upper_bound(cuts.begin(), cuts.end(), k) - cuts.begin()) - 1;
        const double activity = level[regime] * per_bucket;
        const double precursor = k >= change ? spec.precursor_factor : 1.0;
        auto put = [&](std::string_view code, double rate) { counts.counts[k * codes.size() + col(code)] = poisson(rate); };
        put("6000", spec.ok_rate * activity);
        put("6001", spec.error_rate * activity * precursor);
        put("6002", spec.warning_rate * activity * precursor);
        for (int box = 1; box <= 5; ++box) {
          put(fmt::format("K7_{}_OK", box), spec.ok_rate * activity / 5.0);
          put(fmt::format("K7_{}_ERROR", box), spec.error_rate * activity / 5.0);
        }
        put("WITHDRAWAL_OK", spec.withdrawal_rate * activity);
        put("WITHDRAWAL_ERROR", spec.error_rate * activity);
      }

      const Timestamp end =
          start + std::chrono::seconds(static_cast<std::int64_t>(std::llround(static_cast<double>(buckets) * spec.period_hours * 3600.0)));
      out.push_back(build_features(counts, config, {atm_id, static_cast<int>(ci), end, true}));
      start = end + std::chrono::days(1);
    }
  }
  return out;
}

}  // namespace maintseg
