#include "maintseg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <map>
#include <set>
#include <tuple>

namespace maintseg {

double e_score(std::optional<double> a, double n, double pp, double rd, double s) {
  if (!(n >= 1.0) || !(pp > 0.0) || !(rd >= 0.0) || !(s > 0.0) || (a && !std::isfinite(*a))) {
    throw std::invalid_argument("e_score: require n >= 1, pp > 0, rd >= 0, s > 0 and a finite a");
  }
  if (!a) return 0.0;
  const double x = *a;
  const double padding_start = n - (rd + pp);
  if (x >= n - rd) return 0.0;
  if (x >= padding_start) return 1.0;
  if (x <= 0.0) return 0.0;
  // Here 0 < x < padding_start.
  const double num = s * x;
  const double den = s * padding_start;
  if (den > 700.0) {
    // e^{num - den} * (1 - e^{-num}) / (1 - e^{-den}), free of overflow.
    return std::exp(num - den) * (-std::expm1(-num)) / (-std::expm1(-den));
  }
  return std::expm1(num) / std::expm1(den);
}

EvaluationRecord score_alert(const LifeCycle& cycle, const std::string& config_id, const std::optional<Alert>& alert,
                             const BusinessParams& params) {
  EvaluationRecord rec;
  rec.atm_id = cycle.atm_id;
  rec.cycle_index = cycle.cycle_index;
  rec.config_id = config_id;
  rec.alert = alert;
  rec.n = cycle.length();
  rec.period_hours = cycle.period_hours;
  rec.params = params;
  const std::vector<EvaluationRecord> one{rec};
  return rescore(one, params).front();
}

std::vector<EvaluationRecord> rescore(std::span<const EvaluationRecord> records, const BusinessParams& params) {
  params.validate();
  std::vector<EvaluationRecord> out(records.begin(), records.end());
  for (auto& rec : out) {
    rec.params = params;
    const double pp = days_to_samples(params.pp, rec.period_hours);
    const double rd = days_to_samples(params.rd, rec.period_hours);
    const double n = static_cast<double>(rec.n);
    const std::optional<double> a = rec.alert ? std::optional(rec.alert->a) : std::nullopt;
    rec.verdict = classify(a, n, pp, rd);
    rec.e_score = e_score(a, n, pp, rd, params.s);
  }
  return out;
}

Aggregate aggregate(std::span<const EvaluationRecord> records) {
  Aggregate agg;
  agg.count = records.size();
  // summed in (atm_id, cycle_index) order, like best_per_sample
  std::vector<const EvaluationRecord*> ordered;
  for (const auto& r : records) ordered.push_back(&r);
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto* a, const auto* b) {
    return std::tie(a->atm_id, a->cycle_index) < std::tie(b->atm_id, b->cycle_index);
  });
  double sum = 0.0;
  for (const auto* r : ordered) sum += r->e_score;
  for (const auto& r : records) {
    switch (r.verdict) {
      case Verdict::TP: ++agg.tp; break;
      case Verdict::FP: ++agg.fp; break;
      case Verdict::FN: ++agg.fn; break;
      case Verdict::TN: ++agg.tn; break;
    }
  }
  agg.mean_e = records.empty() ? 0.0 : sum / static_cast<double>(records.size());
  agg.precision_defined = agg.tp + agg.fp > 0;
  agg.recall_defined = agg.tp + agg.fn > 0;
  agg.precision = agg.precision_defined ? static_cast<double>(agg.tp) / static_cast<double>(agg.tp + agg.fp) : 0.0;
  agg.recall = agg.recall_defined ? static_cast<double>(agg.tp) / static_cast<double>(agg.tp + agg.fn) : 0.0;
  return agg;
}

std::vector<ConfigScore> aggregate_by_config(std::span<const EvaluationRecord> records) {
  std::map<std::string, std::vector<EvaluationRecord>> groups;
  for (const auto& r : records) groups[r.config_id].push_back(r);
  std::vector<ConfigScore> out;
  for (const auto& [id, list] : groups) out.push_back({id, aggregate(list)});
  return out;
}

ConfigScore best_average_config(std::span<const EvaluationRecord> records) {
  const auto scores = aggregate_by_config(records);
  if (scores.empty()) throw std::invalid_argument("best_average_config: no records");
  const ConfigScore* best = &scores.front();
  for (const auto& s : scores) {
    // Candidates come in id order, so keeping the incumbent on exact ties
    // selects the smaller id.
    if (s.aggregate.mean_e > best->aggregate.mean_e ||
        (s.aggregate.mean_e == best->aggregate.mean_e && s.aggregate.precision > best->aggregate.precision)) {
      best = &s;
    }
  }
  return *best;
}

BestPerSample best_per_sample(std::span<const EvaluationRecord> records) {
  if (records.empty()) throw std::invalid_argument("best_per_sample: no records");
  std::set<std::string> configs;
  std::map<std::pair<std::string, int>, std::vector<const EvaluationRecord*>> by_cycle;
  for (const auto& r : records) {
    configs.insert(r.config_id);
    by_cycle[{r.atm_id, r.cycle_index}].push_back(&r);
  }
  BestPerSample out;
  double sum = 0.0;
  for (const auto& [key, list] : by_cycle) {
    std::set<std::string> seen;
    for (const auto* r : list) seen.insert(r->config_id);
    if (seen.size() != configs.size() || list.size() != configs.size()) {
      throw IncompleteGridError(fmt::format("best_per_sample: cycle {}#{} has {} of {} configs", key.first,
                                            key.second, seen.size(), configs.size()));
    }
    const EvaluationRecord* best = nullptr;
    for (const auto* r : list) {
      if (!best || r->e_score > best->e_score || (r->e_score == best->e_score && r->config_id < best->config_id)) {
        best = r;
      }
    }
    out.per_cycle.push_back({key.first, key.second, best->config_id, best->e_score});
    sum += best->e_score;
  }
  out.mean_e = sum / static_cast<double>(out.per_cycle.size());
  return out;
}

std::string method_of(const std::string& config_id) { return config_id.substr(0, config_id.find('/')); }

StabilityStats model_stability(std::span<const CycleBest> per_cycle, StabilityLevel level) {
  std::map<std::string, std::vector<const CycleBest*>> by_atm;
  for (const auto& c : per_cycle) by_atm[c.atm_id].push_back(&c);
  StabilityStats st;
  for (auto& [atm, list] : by_atm) {
    std::sort(list.begin(), list.end(), [](const auto* a, const auto* b) { return a->cycle_index < b->cycle_index; });
    std::vector<std::string> models;
    for (const auto* c : list) models.push_back(level == StabilityLevel::Method ? method_of(c->config_id) : c->config_id);
    std::size_t changes = 0;
    for (std::size_t i = 1; i < models.size(); ++i) changes += models[i] != models[i - 1];
    if (models.size() > 1) {
      ++st.atms_with_multiple_cycles;
      st.atms_same_model += changes == 0;
    }
    if (models.size() > 2) {
      ++st.atms_with_over_two_cycles;
      st.atms_at_most_one_change += changes <= 1;
    }
  }
  if (st.atms_with_multiple_cycles > 0) {
    st.same_model_fraction =
        static_cast<double>(st.atms_same_model) / static_cast<double>(st.atms_with_multiple_cycles);
  }
  if (st.atms_with_over_two_cycles > 0) {
    st.one_change_fraction =
        static_cast<double>(st.atms_at_most_one_change) / static_cast<double>(st.atms_with_over_two_cycles);
  }
  return st;
}

}  // namespace maintseg
