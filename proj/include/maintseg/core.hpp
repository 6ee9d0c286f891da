#pragma once

#include <chrono>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace maintseg {

/// Absolute UTC time at second resolution.
using Timestamp = std::chrono::sys_seconds;

/// Flat standard-deviation floor used by every z-normalization
/// in the library (whole series, subsequences and matrix-profile windows).
inline constexpr double kFlatStdThreshold = 1e-8;

struct EventRecord {
  Timestamp timestamp{};
  std::string atm_id;
  int lifecycle_id = 0;
  std::string event_code;

  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

/// Dense row-major n x d matrix of real samples. Row i is the feature vector
/// of time step i.
class Signal {
public:
  Signal() = default;
  Signal(std::size_t rows, std::size_t cols, double fill = 0.0);
  Signal(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Signal from_rows(const std::vector<std::vector<double>>& rows);
  static Signal from_column(std::span<const double> column);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0; }

  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::vector<double> column(std::size_t j) const;

  /// Copy of rows [0, end).
  Signal prefix(std::size_t end) const;
  /// Copy of rows [begin, end).
  Signal slice(std::size_t begin, std::size_t end) const;

  const std::vector<double>& data() const noexcept { return data_; }

  friend bool operator==(const Signal&, const Signal&) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// One maintenance-to-failure interval, resampled into equal buckets.
/// Bucket k covers [start_time + k*period, start_time + (k+1)*period).
struct LifeCycle {
  std::string atm_id;
  int cycle_index = 0;
  Timestamp start_time{};
  Timestamp end_time{};
  std::vector<std::string> feature_names;
  Signal samples;
  double period_hours = 24.0;
  bool ended_in_failure = true;
  /// Optional per-bucket activity counts (withdrawal events) used only for
  /// dataset statistics. Empty when unknown.
  std::vector<double> activity;

  std::size_t length() const noexcept { return samples.rows(); }
  double duration_days() const noexcept {
    return static_cast<double>(length()) * period_hours / 24.0;
  }
  /// Throws std::invalid_argument when the sample invariants are broken.
  void validate() const;
};

/// Business intervals, all expressed in days, and the metric sensibility.
struct BusinessParams {
  double rd = 1.0;   // responsive duration
  double pp = 14.0;  // predictive padding
  double ii = 1.0;   // infected interval
  double s = 0.2;    // sensibility to early alerts

  void validate() const;

  friend bool operator==(const BusinessParams&, const BusinessParams&) = default;
};

/// Days to samples for a resampling period in hours.
constexpr double days_to_samples(double days, double period_hours) { return days * 24.0 / period_hours; }

/// A growing prefix of a life cycle: samples[0, end_index).
struct Window {
  const LifeCycle* cycle = nullptr;
  std::size_t end_index = 0;

  Signal samples() const { return cycle->samples.prefix(end_index); }
};

/// (x - mean) / population std. Returns all zeros when std < 1e-8.
std::vector<double> znormalize(std::span<const double> values);

/// Column-wise znormalize of every channel of a signal.
Signal znormalize_columns(const Signal& signal);

/// End indices T, 2T, ... plus n when n is not a multiple of T.
std::vector<std::size_t> prefix_window_ends(std::size_t n, std::size_t step);

std::vector<Window> prefix_windows(const LifeCycle& cycle, std::size_t step);

}  // namespace maintseg
