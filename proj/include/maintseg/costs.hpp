#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "maintseg/core.hpp"

namespace maintseg {

enum class CostKind { L1, L2, Normal, Rbf };

std::string_view to_string(CostKind kind);

/// Segment cost specification.
///
/// - L1:     sum_i |x_i - median|_1 with the coordinate-wise (lower) median.
/// - L2:     sum_i |x_i - mean|^2.
/// - NORMAL: len * log det(cov / eps + I), i.e. len * log det(cov + eps I)
///           minus len * d * log(eps).
/// - RBF:    len - (1/len) sum_{i,j} exp(-gamma |x_i - x_j|^2).
struct SegmentCost {
  CostKind kind = CostKind::L2;
  /// RBF bandwidth; nullopt selects the median heuristic on the whole signal.
  std::optional<double> gamma;
  double epsilon = 1e-6;

  void validate() const;

  /// "L1", "L2", "NORMAL", "RBF:median" or "RBF:<gamma>".
  std::string to_string() const;
  static SegmentCost parse(std::string_view text);

  friend bool operator==(const SegmentCost&, const SegmentCost&) = default;
};

/// gamma = 1 / median pairwise squared distance over at most 1000 evenly
/// spaced points; 1 when that median is 0. Requires at least two rows.
double rbf_bandwidth_median(const Signal& signal);

/// Direct evaluation of the cost of rows [a, b). Slow; used for one-off
/// queries and as a reference for CostModel.
double segment_cost(const Signal& signal, const SegmentCost& cost, std::size_t a, std::size_t b);

/// Cost evaluator bound to one signal, with the precomputation that makes
/// repeated interval queries cheap: prefix sums for L2 and NORMAL, a
/// cumulative Gram table for RBF, an interval table for L1 (direct evaluation
/// above kL1TableMaxRows rows).
inline constexpr std::size_t kL1TableMaxRows = 2048;

class CostModel {
public:
  CostModel(const Signal& signal, const SegmentCost& cost);

  double operator()(std::size_t a, std::size_t b) const;

  std::size_t size() const noexcept { return n_; }
  /// The RBF bandwidth actually in use (0 for other kinds).
  double gamma() const noexcept { return gamma_; }

private:
  double l1(std::size_t a, std::size_t b) const;
  double l2(std::size_t a, std::size_t b) const;
  double normal(std::size_t a, std::size_t b) const;
  double rbf(std::size_t a, std::size_t b) const;

  Signal signal_;
  SegmentCost spec_;
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  double gamma_ = 0.0;
  std::vector<double> centered_;    // rows minus global mean
  std::vector<double> sum_;         // (n+1) x d
  std::vector<double> sum_sq_;      // (n+1) for L2, (n+1) x d x d for NORMAL
  std::vector<double> gram_cumsum_; // (n+1) x (n+1)
  std::vector<double> l1_table_;    // (n+1) x (n+1), entry a * (n+1) + b
};

}  // namespace maintseg
