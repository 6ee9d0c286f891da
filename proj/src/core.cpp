#include "maintseg/core.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace maintseg {

Signal::Signal(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Signal::Signal(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw std::invalid_argument("Signal: data size does not match shape");
  }
}

Signal Signal::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  const std::size_t cols = rows.front().size();
  std::vector<double> data;
  data.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw std::invalid_argument("Signal: ragged rows");
    data.insert(data.end(), r.begin(), r.end());
  }
  return {rows.size(), cols, std::move(data)};
}

Signal Signal::from_column(std::span<const double> column) {
  return {column.size(), 1, std::vector<double>(column.begin(), column.end())};
}

std::vector<double> Signal::column(std::size_t j) const {
  std::vector<double> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

Signal Signal::prefix(std::size_t end) const { return slice(0, end); }

Signal Signal::slice(std::size_t begin, std::size_t end) const {
  if (begin > end || end > rows_) throw std::out_of_range("Signal::slice: bad range");
  return {end - begin, cols_,
          std::vector<double>(data_.begin() + static_cast<std::ptrdiff_t>(begin * cols_),
                              data_.begin() + static_cast<std::ptrdiff_t>(end * cols_))};
}

void LifeCycle::validate() const {
  if (samples.rows() == 0) throw std::invalid_argument("LifeCycle: no samples");
  if (samples.cols() != feature_names.size()) {
    throw std::invalid_argument("LifeCycle: sample width " + std::to_string(samples.cols()) +
                                " != " + std::to_string(feature_names.size()) + " features");
  }
  if (!(period_hours > 0.0)) throw std::invalid_argument("LifeCycle: period must be > 0");
  for (double v : samples.data()) {
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument("LifeCycle: samples must be finite and non-negative");
    }
  }
  if (!activity.empty() && activity.size() != samples.rows()) {
    throw std::invalid_argument("LifeCycle: activity length mismatch");
  }
}

void BusinessParams::validate() const {
  if (!(rd >= 0.0)) throw std::invalid_argument("rd must be >= 0");
  if (!(pp > 0.0)) throw std::invalid_argument("pp must be > 0");
  if (!(ii >= 0.0)) throw std::invalid_argument("ii must be >= 0");
  if (!(s > 0.0)) throw std::invalid_argument("s must be > 0");
}

std::vector<double> znormalize(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("znormalize: empty input");
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("znormalize: non-finite input");
    ss += (v - mean) * (v - mean);
  }
  const double sd = std::sqrt(ss / n);
  std::vector<double> out(values.size(), 0.0);
  if (sd < kFlatStdThreshold) return out;
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - mean) / sd;
  return out;
}

Signal znormalize_columns(const Signal& signal) {
  Signal out(signal.rows(), signal.cols());
  for (std::size_t j = 0; j < signal.cols(); ++j) {
    const auto z = znormalize(signal.column(j));
    for (std::size_t i = 0; i < signal.rows(); ++i) out(i, j) = z[i];
  }
  return out;
}

std::vector<std::size_t> prefix_window_ends(std::size_t n, std::size_t step) {
  if (step == 0) throw std::invalid_argument("prefix_windows: step must be >= 1");
  std::vector<std::size_t> ends;
  for (std::size_t e = step; e <= n; e += step) ends.push_back(e);
  if (n > 0 && (ends.empty() || ends.back() != n)) ends.push_back(n);
  return ends;
}

std::vector<Window> prefix_windows(const LifeCycle& cycle, std::size_t step) {
  std::vector<Window> out;
  for (std::size_t e : prefix_window_ends(cycle.length(), step)) out.push_back({&cycle, e});
  return out;
}

}  // namespace maintseg
