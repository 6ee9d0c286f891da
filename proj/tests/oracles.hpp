#pragma once

// Reference implementations used only by the tests. They are written from the
// definitions and share no code path with the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

using Rows = std::vector<std::vector<double>>;

inline double l2_cost(const Rows& x, std::size_t a, std::size_t b) {
  double total = 0.0;
  for (std::size_t k = 0; k < x[0].size(); ++k) {
    double mean = 0.0;
    for (std::size_t i = a; i < b; ++i) mean += x[i][k];
    mean /= static_cast<double>(b - a);
    for (std::size_t i = a; i < b; ++i) total += (x[i][k] - mean) * (x[i][k] - mean);
  }
  return total;
}

inline double rbf_cost(const Rows& x, std::size_t a, std::size_t b, double gamma) {
  double gram = 0.0;
  for (std::size_t i = a; i < b; ++i) {
    for (std::size_t j = a; j < b; ++j) {
      double d2 = 0.0;
      for (std::size_t k = 0; k < x[i].size(); ++k) d2 += (x[i][k] - x[j][k]) * (x[i][k] - x[j][k]);
      gram += std::exp(-gamma * d2);
    }
  }
  const double len = static_cast<double>(b - a);
  return len - gram / len;
}

using IntervalCost = std::function<double(std::size_t, std::size_t)>;

struct Exhaustive {
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> argbest;

  /// Penalized cost of an arbitrary breakpoint set.
  static double evaluate(const IntervalCost& cost, std::size_t n, const std::vector<std::size_t>& bps, double beta) {
    double total = 0.0;
    std::size_t start = 0;
    for (auto b : bps) {
      total += cost(start, b);
      start = b;
    }
    return total + cost(start, n) + beta * static_cast<double>(bps.size());
  }
};

/// Enumerates every admissible breakpoint subset of {1..n-1}.
inline Exhaustive exhaustive_segmentation(const IntervalCost& cost, std::size_t n, double beta, std::size_t min_size) {
  Exhaustive out;
  const std::size_t slots = n - 1;
  for (std::size_t mask = 0; mask < (std::size_t{1} << slots); ++mask) {
    std::vector<std::size_t> bps;
    for (std::size_t s = 0; s < slots; ++s) {
      if (mask & (std::size_t{1} << s)) bps.push_back(s + 1);
    }
    bool ok = true;
    std::size_t prev = 0;
    for (auto b : bps) {
      if (b - prev < min_size) ok = false;
      prev = b;
    }
    if (!bps.empty() && n - prev < min_size) ok = false;
    if (!ok) continue;
    const double v = Exhaustive::evaluate(cost, n, bps, beta);
    if (v < out.best) {
      out.best = v;
      out.argbest = bps;
    }
  }
  return out;
}

struct Profile {
  std::vector<double> profile;
  std::vector<long> index;
};

/// All-pairs z-normalized distances with explicit normalization of every
/// subsequence; O(n^2 m).
inline Profile brute_force_profile(const std::vector<double>& x, std::size_t m) {
  const std::size_t n_sub = x.size() - m + 1;
  const std::size_t zone = (m + 1) / 2;
  std::vector<std::vector<double>> z(n_sub, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < n_sub; ++i) {
    double mu = 0.0;
    for (std::size_t k = 0; k < m; ++k) mu += x[i + k];
    mu /= static_cast<double>(m);
    double var = 0.0;
    for (std::size_t k = 0; k < m; ++k) var += (x[i + k] - mu) * (x[i + k] - mu);
    const double sd = std::sqrt(var / static_cast<double>(m));
    if (sd < 1e-8) continue;
    for (std::size_t k = 0; k < m; ++k) z[i][k] = (x[i + k] - mu) / sd;
  }
  Profile p;
  p.profile.assign(n_sub, std::numeric_limits<double>::infinity());
  p.index.assign(n_sub, -1);
  for (std::size_t i = 0; i < n_sub; ++i) {
    for (std::size_t j = 0; j < n_sub; ++j) {
      const std::size_t gap = i > j ? i - j : j - i;
      if (gap <= zone) continue;
      double d2 = 0.0;
      for (std::size_t k = 0; k < m; ++k) d2 += (z[i][k] - z[j][k]) * (z[i][k] - z[j][k]);
      const double d = std::sqrt(d2);
      if (d < p.profile[i]) {
        p.profile[i] = d;
        p.index[i] = static_cast<long>(j);
      }
    }
  }
  return p;
}

/// Distances from subsequence i to every subsequence j (infinity inside the
/// exclusion zone), with explicit normalization; O(n m).
inline std::vector<double> brute_force_distances(const std::vector<double>& x, std::size_t m, std::size_t i) {
  const std::size_t n_sub = x.size() - m + 1;
  const std::size_t zone = (m + 1) / 2;
  auto normalized = [&](std::size_t start) {
    double mu = 0.0;
    for (std::size_t k = 0; k < m; ++k) mu += x[start + k];
    mu /= static_cast<double>(m);
    double var = 0.0;
    for (std::size_t k = 0; k < m; ++k) var += (x[start + k] - mu) * (x[start + k] - mu);
    const double sd = std::sqrt(var / static_cast<double>(m));
    std::vector<double> z(m, 0.0);
    if (sd >= 1e-8) {
      for (std::size_t k = 0; k < m; ++k) z[k] = (x[start + k] - mu) / sd;
    }
    return z;
  };
  const auto zi = normalized(i);
  std::vector<double> out(n_sub, std::numeric_limits<double>::infinity());
  for (std::size_t j = 0; j < n_sub; ++j) {
    const std::size_t gap = i > j ? i - j : j - i;
    if (gap <= zone) continue;
    const auto zj = normalized(j);
    double d2 = 0.0;
    for (std::size_t k = 0; k < m; ++k) d2 += (zi[k] - zj[k]) * (zi[k] - zj[k]);
    out[j] = std::sqrt(d2);
  }
  return out;
}

inline Rows random_rows(std::mt19937_64& rng, std::size_t n, std::size_t d) {
  std::normal_distribution<double> noise(0.0, 1.0);
  Rows rows(n, std::vector<double>(d));
  for (auto& r : rows) {
    for (auto& v : r) v = noise(rng);
  }
  return rows;
}

}  // namespace oracle
