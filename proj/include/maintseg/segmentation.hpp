#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "maintseg/core.hpp"
#include "maintseg/costs.hpp"

namespace maintseg {

/// Interior breakpoints (strictly increasing, excluding 0 and n) and the
/// penalized objective: sum of segment costs + penalty * breakpoints.size().
struct Segmentation {
  std::vector<std::size_t> breakpoints;
  double total_cost = 0.0;

  friend bool operator==(const Segmentation&, const Segmentation&) = default;
};

/// Sum of segment costs delimited by `breakpoints` plus the penalty term.
double penalized_cost(const CostModel& cost, const std::vector<std::size_t>& breakpoints,
                      double penalty);

/// Exact minimizer of the penalized objective with candidate pruning.
/// A candidate s is discarded at time t when F(s) + C(s, t) > F(t); the
/// removal takes effect min_size steps later.
Segmentation pelt(const CostModel& cost, double penalty, std::size_t min_size);
Segmentation pelt(const Signal& signal, const SegmentCost& cost, double penalty,
                  std::size_t min_size);

/// Greedy recursive splitting; a split is kept when its cost gain is strictly
/// greater than the penalty.
Segmentation binseg(const CostModel& cost, double penalty, std::size_t min_size);
Segmentation binseg(const Signal& signal, const SegmentCost& cost, double penalty,
                    std::size_t min_size);

/// Starts from a breakpoint every min_size samples and merges the cheapest
/// adjacent pair while its cost increase is strictly below the penalty.
Segmentation bottomup(const CostModel& cost, double penalty, std::size_t min_size);
Segmentation bottomup(const Signal& signal, const SegmentCost& cost, double penalty,
                      std::size_t min_size);

/// Kernel change-point detection: pelt over the RBF kernel cost.
Segmentation kcpd(const Signal& signal, std::optional<double> gamma, double penalty,
                  std::size_t min_size);

}  // namespace maintseg
