#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "maintseg/core.hpp"

namespace maintseg {

/// Nearest-neighbour distances of every length-m subsequence to the other
/// subsequences of the same series, outside the trivial-match zone.
struct MatrixProfile {
  std::size_t m = 0;
  std::vector<double> profile;
  /// -1 when no subsequence lies outside the exclusion zone.
  std::vector<std::ptrdiff_t> index;
};

/// ceil(m / 2): subsequences i, j are trivial matches when |i - j| <= this.
constexpr std::size_t exclusion_zone(std::size_t m) { return (m + 1) / 2; }

/// Smallest series length accepted by matrix_profile for subsequence length m.
constexpr std::size_t min_profile_length(std::size_t m) { return m + exclusion_zone(m) + 1; }

/// Self-join matrix profile under z-normalized Euclidean distance, computed
/// by sliding dot products along each diagonal (O(n^2) time, O(n) memory).
/// Subsequences with std < 1e-8 normalize to the zero vector. Ties on the
/// distance resolve to the smallest neighbour index.
MatrixProfile matrix_profile(std::span<const double> series, std::size_t m);

/// Corrected arc curve: arcs i -> index[i] crossing each position, divided by
/// the idealized 2x(n-x)/n, clamped to [0, 1], with 5*m positions at both
/// edges forced to 1.
std::vector<double> fluss_cac(std::span<const std::ptrdiff_t> index, std::size_t m);

enum class ChannelRule { Any, Sum };

std::string_view to_string(ChannelRule rule);
ChannelRule parse_channel_rule(std::string_view text);

struct FlussScan {
  /// Lowest CAC value of the combined curve (1 when nothing was computed).
  double min_cac = 1.0;
  std::size_t argmin = 0;
  bool computed = false;
};

/// Runs FLUSS on each channel of the window and combines the curves: ANY
/// keeps the channel with the lowest minimum, SUM averages the curves first.
/// Channels that are constant over the whole window carry no arcs and
/// contribute a flat CAC of 1. Windows too short for a matrix profile give
/// an uncomputed scan.
FlussScan fluss_scan(const Signal& window, std::size_t m, ChannelRule rule);

/// Position of the regime change when the combined CAC minimum is below tau.
std::optional<std::size_t> fluss_alert(const Signal& window, std::size_t m, double tau,
                                       ChannelRule rule);

}  // namespace maintseg
