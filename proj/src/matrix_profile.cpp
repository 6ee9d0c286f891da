#include "maintseg/matrix_profile.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace maintseg {

MatrixProfile matrix_profile(std::span<const double> series, std::size_t m) {
  const std::size_t n = series.size();
  if (m < 2) throw std::invalid_argument("matrix_profile: m must be >= 2");
  if (n < min_profile_length(m)) {
    throw std::invalid_argument(
        fmt::format("matrix_profile: series of length {} too short for m={}", n, m));
  }
  const std::size_t n_sub = n - m + 1;
  const std::size_t zone = exclusion_zone(m);
  const double md = static_cast<double>(m);

  // z-normalized distances are shift invariant; centering keeps the dot
  // products small and the update recurrence accurate.
  const double shift = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = series[i] - shift;

  std::vector<double> mu(n_sub), sd(n_sub);
  std::vector<char> flat(n_sub);
  for (std::size_t i = 0; i < n_sub; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < m; ++k) s += x[i + k];
    mu[i] = s / md;
    double ss = 0.0;
    for (std::size_t k = 0; k < m; ++k) ss += (x[i + k] - mu[i]) * (x[i + k] - mu[i]);
    sd[i] = std::sqrt(ss / md);
    flat[i] = sd[i] < kFlatStdThreshold;
  }

  MatrixProfile mp;
  mp.m = m;
  mp.profile.assign(n_sub, std::numeric_limits<double>::infinity());
  mp.index.assign(n_sub, -1);

  auto direct = [&](std::size_t i, std::size_t j) {
    double d2 = 0.0;
    for (std::size_t t = 0; t < m; ++t) {
      const double diff = (x[i + t] - mu[i]) / sd[i] - (x[j + t] - mu[j]) / sd[j];
      d2 += diff * diff;
    }
    return std::sqrt(d2);
  };

  auto update = [&mp](std::size_t i, std::size_t j, double d) {
    const auto jj = static_cast<std::ptrdiff_t>(j);
    if (d < mp.profile[i] || (d == mp.profile[i] && jj < mp.index[i])) {
      mp.profile[i] = d;
      mp.index[i] = jj;
    }
  };

  for (std::size_t k = zone + 1; k < n_sub; ++k) {
    double qt = 0.0;
    for (std::size_t t = 0; t < m; ++t) qt += x[t] * x[k + t];
    for (std::size_t i = 0; i + k < n_sub; ++i) {
      const std::size_t j = i + k;
      if (i > 0) qt += x[i + m - 1] * x[j + m - 1] - x[i - 1] * x[j - 1];
      double d = 0.0;
      if (flat[i] && flat[j]) {
        d = 0.0;
      } else if (flat[i] || flat[j]) {
        d = std::sqrt(md);
      } else {
        double rho = (qt - md * mu[i] * mu[j]) / (md * sd[i] * sd[j]);
        rho = std::clamp(rho, -1.0, 1.0);
        d = std::sqrt(std::max(2.0 * md * (1.0 - rho), 0.0));
        // near-exact repeat: explicit distance
        if (1.0 - rho < 1e-7) d = direct(i, j);
      }
      update(i, j, d);
      update(j, i, d);
    }
  }
  return mp;
}

std::vector<double> fluss_cac(std::span<const std::ptrdiff_t> index, std::size_t m) {
  const std::size_t n_sub = index.size();
  std::vector<double> cac(n_sub, 1.0);
  if (n_sub == 0) return cac;
  std::vector<double> mark(n_sub + 1, 0.0);
  for (std::size_t i = 0; i < n_sub; ++i) {
    if (index[i] < 0) continue;
    const auto j = static_cast<std::size_t>(index[i]);
    mark[std::min(i, j)] += 1.0;
    mark[std::max(i, j)] -= 1.0;
  }
  const double n = static_cast<double>(n_sub);
  const std::size_t edge = 5 * m;
  double crossings = 0.0;
  for (std::size_t x = 0; x < n_sub; ++x) {
    crossings += mark[x];
    if (x < edge || x + edge >= n_sub) continue;
    const double xd = static_cast<double>(x);
    const double ideal = 2.0 * xd * (n - xd) / n;
    if (ideal > 0.0) cac[x] = std::clamp(crossings / ideal, 0.0, 1.0);
  }
  return cac;
}

std::string_view to_string(ChannelRule rule) { return rule == ChannelRule::Any ? "ANY" : "SUM"; }

ChannelRule parse_channel_rule(std::string_view text) {
  if (text == "ANY") return ChannelRule::Any;
  if (text == "SUM") return ChannelRule::Sum;
  throw std::invalid_argument(fmt::format("unknown channel rule '{}'", text));
}

namespace {

std::vector<double> channel_cac(const std::vector<double>& series, std::size_t m) {
  const std::size_t n_sub = series.size() - m + 1;
  const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(series.size());
  double ss = 0.0;
  for (double v : series) ss += (v - mean) * (v - mean);
  if (std::sqrt(ss / static_cast<double>(series.size())) < kFlatStdThreshold) {
    return std::vector<double>(n_sub, 1.0);
  }
  const auto mp = matrix_profile(series, m);
  return fluss_cac(mp.index, m);
}

}  // namespace

FlussScan fluss_scan(const Signal& window, std::size_t m, ChannelRule rule) {
  FlussScan scan;
  if (m < 2 || window.rows() < min_profile_length(m) || window.cols() == 0) return scan;
  const std::size_t n_sub = window.rows() - m + 1;
  scan.computed = true;

  if (rule == ChannelRule::Sum) {
    std::vector<double> combined(n_sub, 0.0);
    for (std::size_t c = 0; c < window.cols(); ++c) {
      const auto cac = channel_cac(window.column(c), m);
      for (std::size_t x = 0; x < n_sub; ++x) combined[x] += cac[x];
    }
    for (double& v : combined) v /= static_cast<double>(window.cols());
    const auto it = std::min_element(combined.begin(), combined.end());
    scan.min_cac = *it;
    scan.argmin = static_cast<std::size_t>(it - combined.begin());
    return scan;
  }

  for (std::size_t c = 0; c < window.cols(); ++c) {
    const auto cac = channel_cac(window.column(c), m);
    const auto it = std::min_element(cac.begin(), cac.end());
    if (*it < scan.min_cac) {
      scan.min_cac = *it;
      scan.argmin = static_cast<std::size_t>(it - cac.begin());
    }
  }
  return scan;
}

std::optional<std::size_t> fluss_alert(const Signal& window, std::size_t m, double tau,
                                       ChannelRule rule) {
  const auto scan = fluss_scan(window, m, rule);
  if (scan.computed && scan.min_cac < tau) return scan.argmin;
  return std::nullopt;
}

}  // namespace maintseg
