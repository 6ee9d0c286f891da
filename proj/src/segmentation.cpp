#include "maintseg/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace maintseg {
namespace {

void check_args(double penalty, std::size_t min_size) {
  if (!(penalty >= 0.0) || std::isnan(penalty)) {
    throw std::invalid_argument("segmentation: penalty must be >= 0");
  }
  if (min_size == 0) throw std::invalid_argument("segmentation: min_size must be >= 1");
}

}  // namespace

double penalized_cost(const CostModel& cost, const std::vector<std::size_t>& breakpoints,
                      double penalty) {
  double total = 0.0;
  std::size_t start = 0;
  for (std::size_t b : breakpoints) {
    total += cost(start, b);
    start = b;
  }
  total += cost(start, cost.size());
  return total + penalty * static_cast<double>(breakpoints.size());
}

Segmentation pelt(const CostModel& cost, double penalty, std::size_t min_size) {
  check_args(penalty, min_size);
  const std::size_t n = cost.size();
  if (n < 2 * min_size) return {{}, penalized_cost(cost, {}, penalty)};

  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr std::size_t kNever = std::numeric_limits<std::size_t>::max();
  std::vector<double> best(n + 1, kInf);
  std::vector<std::size_t> last(n + 1, 0);
  best[0] = -penalty;

  struct Candidate {
    std::size_t index;
    std::size_t drop_at;
  };
  std::vector<Candidate> candidates{{0, kNever}};
  std::vector<double> partial;

  for (std::size_t t = min_size; t <= n; ++t) {
    std::erase_if(candidates, [t](const Candidate& c) { return c.drop_at <= t; });

    partial.assign(candidates.size(), kInf);
    double incumbent = kInf;
    std::size_t arg = 0;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      const std::size_t s = candidates[k].index;
      if (t - s < min_size) continue;
      partial[k] = best[s] + cost(s, t);
      const double value = partial[k] + penalty;
      if (value < incumbent) {
        incumbent = value;
        arg = s;
      }
    }
    best[t] = incumbent;
    last[t] = arg;

    for (std::size_t k = 0; k < candidates.size(); ++k) {
      if (std::isfinite(partial[k]) && partial[k] > incumbent && candidates[k].drop_at == kNever) {
        candidates[k].drop_at = t + min_size;
      }
    }
    if (std::isfinite(incumbent) && t + min_size <= n) candidates.push_back({t, kNever});
  }

  std::vector<std::size_t> bps;
  for (std::size_t t = n; last[t] > 0; t = last[t]) bps.push_back(last[t]);
  std::reverse(bps.begin(), bps.end());
  const double total = penalized_cost(cost, bps, penalty);
  return {std::move(bps), total};
}

Segmentation pelt(const Signal& signal, const SegmentCost& cost, double penalty,
                  std::size_t min_size) {
  return pelt(CostModel(signal, cost), penalty, min_size);
}

Segmentation binseg(const CostModel& cost, double penalty, std::size_t min_size) {
  check_args(penalty, min_size);
  const std::size_t n = cost.size();
  std::vector<std::size_t> bps;
  std::vector<std::pair<std::size_t, std::size_t>> pending{{0, n}};
  while (!pending.empty()) {
    const auto [a, b] = pending.back();
    pending.pop_back();
    if (b - a < 2 * min_size) continue;
    const double whole = cost(a, b);
    double best_gain = -std::numeric_limits<double>::infinity();
    std::size_t best_split = 0;
    for (std::size_t m = a + min_size; m + min_size <= b; ++m) {
      const double gain = whole - cost(a, m) - cost(m, b);
      if (gain > best_gain) {
        best_gain = gain;
        best_split = m;
      }
    }
    if (best_gain > penalty) {
      bps.push_back(best_split);
      pending.emplace_back(best_split, b);
      pending.emplace_back(a, best_split);
    }
  }
  std::sort(bps.begin(), bps.end());
  const double total = penalized_cost(cost, bps, penalty);
  return {std::move(bps), total};
}

Segmentation binseg(const Signal& signal, const SegmentCost& cost, double penalty,
                    std::size_t min_size) {
  return binseg(CostModel(signal, cost), penalty, min_size);
}

Segmentation bottomup(const CostModel& cost, double penalty, std::size_t min_size) {
  check_args(penalty, min_size);
  const std::size_t n = cost.size();
  std::vector<std::size_t> bps;
  for (std::size_t b = min_size; b + min_size <= n; b += min_size) bps.push_back(b);

  // increase[k]: cost added by deleting bps[k], i.e. merging its two segments.
  auto merge_increase = [&](std::size_t k) {
    const std::size_t left = k == 0 ? 0 : bps[k - 1];
    const std::size_t right = k + 1 == bps.size() ? n : bps[k + 1];
    return cost(left, right) - cost(left, bps[k]) - cost(bps[k], right);
  };
  std::vector<double> increase(bps.size());
  for (std::size_t k = 0; k < bps.size(); ++k) increase[k] = merge_increase(k);

  while (!bps.empty()) {
    const auto it = std::min_element(increase.begin(), increase.end());
    if (!(*it < penalty)) break;
    const auto k = static_cast<std::size_t>(it - increase.begin());
    bps.erase(bps.begin() + static_cast<std::ptrdiff_t>(k));
    increase.erase(increase.begin() + static_cast<std::ptrdiff_t>(k));
    if (k > 0) increase[k - 1] = merge_increase(k - 1);
    if (k < bps.size()) increase[k] = merge_increase(k);
  }
  const double total = penalized_cost(cost, bps, penalty);
  return {std::move(bps), total};
}

Segmentation bottomup(const Signal& signal, const SegmentCost& cost, double penalty,
                      std::size_t min_size) {
  return bottomup(CostModel(signal, cost), penalty, min_size);
}

Segmentation kcpd(const Signal& signal, std::optional<double> gamma, double penalty,
                  std::size_t min_size) {
  SegmentCost rbf{CostKind::Rbf, gamma};
  return pelt(CostModel(signal, rbf), penalty, min_size);
}

}  // namespace maintseg
