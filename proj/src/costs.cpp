#include "maintseg/costs.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <queue>
#include <stdexcept>

namespace maintseg {
namespace {

void check_range(std::size_t n, std::size_t a, std::size_t b) {
  if (!(a < b) || b > n) {
    throw std::invalid_argument(fmt::format("cost: invalid segment [{}, {}) for n={}", a, b, n));
  }
}

double squared_distance(std::span<const double> x, std::span<const double> y) {
  double acc = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) acc += (x[k] - y[k]) * (x[k] - y[k]);
  return acc;
}

double log_det_regularized(const Eigen::MatrixXd& cov, double epsilon) {
  const Eigen::Index d = cov.rows();
  Eigen::MatrixXd m = cov / epsilon + Eigen::MatrixXd::Identity(d, d);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
  const auto diag = ldlt.vectorD();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) acc += std::log(std::max(diag(i), 1.0e-300));
  return std::max(acc, 0.0);
}

}  // namespace

std::string_view to_string(CostKind kind) {
  switch (kind) {
    case CostKind::L1: return "L1";
    case CostKind::L2: return "L2";
    case CostKind::Normal: return "NORMAL";
    case CostKind::Rbf: return "RBF";
  }
  return "?";
}

void SegmentCost::validate() const {
  if (gamma && !(*gamma > 0.0)) throw std::invalid_argument("RBF gamma must be > 0");
  if (!(epsilon > 0.0)) throw std::invalid_argument("NORMAL epsilon must be > 0");
}

std::string SegmentCost::to_string() const {
  if (kind != CostKind::Rbf) return std::string(maintseg::to_string(kind));
  return gamma ? fmt::format("RBF:{}", *gamma) : std::string("RBF:median");
}

SegmentCost SegmentCost::parse(std::string_view text) {
  SegmentCost out;
  if (text == "L1") {
    out.kind = CostKind::L1;
  } else if (text == "L2") {
    out.kind = CostKind::L2;
  } else if (text == "NORMAL") {
    out.kind = CostKind::Normal;
  } else if (text == "RBF" || text == "RBF:median") {
    out.kind = CostKind::Rbf;
  } else if (text.starts_with("RBF:")) {
    out.kind = CostKind::Rbf;
    const auto num = text.substr(4);
    double g = 0.0;
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), g);
    if (ec != std::errc{} || ptr != num.data() + num.size()) {
      throw std::invalid_argument(fmt::format("bad RBF bandwidth '{}'", num));
    }
    out.gamma = g;
  } else {
    throw std::invalid_argument(fmt::format("unknown cost '{}'", text));
  }
  out.validate();
  return out;
}

double rbf_bandwidth_median(const Signal& signal) {
  const std::size_t n = signal.rows();
  if (n < 2) throw std::invalid_argument("rbf_bandwidth_median: need at least two samples");
  constexpr std::size_t kCap = 1000;
  std::vector<std::size_t> idx;
  if (n <= kCap) {
    idx.resize(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  } else {
    for (std::size_t k = 0; k < kCap; ++k) idx.push_back(k * (n - 1) / (kCap - 1));
  }
  std::vector<double> d2;
  d2.reserve(idx.size() * (idx.size() - 1) / 2);
  for (std::size_t p = 0; p < idx.size(); ++p) {
    for (std::size_t q = p + 1; q < idx.size(); ++q) {
      d2.push_back(squared_distance(signal.row(idx[p]), signal.row(idx[q])));
    }
  }
  const std::size_t mid = d2.size() / 2;
  std::nth_element(d2.begin(), d2.begin() + static_cast<std::ptrdiff_t>(mid), d2.end());
  double median = d2[mid];
  if (d2.size() % 2 == 0) {
    const double lower = *std::max_element(d2.begin(), d2.begin() + static_cast<std::ptrdiff_t>(mid));
    median = 0.5 * (median + lower);
  }
  return median > 0.0 ? 1.0 / median : 1.0;
}

double segment_cost(const Signal& signal, const SegmentCost& cost, std::size_t a, std::size_t b) {
  check_range(signal.rows(), a, b);
  cost.validate();
  const std::size_t d = signal.cols();
  const double len = static_cast<double>(b - a);

  switch (cost.kind) {
    case CostKind::L2: {
      double total = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        double mean = 0.0;
        for (std::size_t i = a; i < b; ++i) mean += signal(i, k);
        mean /= len;
        for (std::size_t i = a; i < b; ++i) total += (signal(i, k) - mean) * (signal(i, k) - mean);
      }
      return total;
    }
    case CostKind::L1: {
      double total = 0.0;
      std::vector<double> col;
      for (std::size_t k = 0; k < d; ++k) {
        col.clear();
        for (std::size_t i = a; i < b; ++i) col.push_back(signal(i, k));
        std::sort(col.begin(), col.end());
        const double med = col[(col.size() - 1) / 2];
        for (double v : col) total += std::abs(v - med);
      }
      return total;
    }
    case CostKind::Normal: {
      Eigen::VectorXd mean = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
      for (std::size_t i = a; i < b; ++i) {
        for (std::size_t k = 0; k < d; ++k) mean(static_cast<Eigen::Index>(k)) += signal(i, k);
      }
      mean /= len;
      Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
      for (std::size_t i = a; i < b; ++i) {
        Eigen::VectorXd x(static_cast<Eigen::Index>(d));
        for (std::size_t k = 0; k < d; ++k) x(static_cast<Eigen::Index>(k)) = signal(i, k) - mean(static_cast<Eigen::Index>(k));
        cov += x * x.transpose();
      }
      cov /= len;
      return len * log_det_regularized(cov, cost.epsilon);
    }
    case CostKind::Rbf: {
      const double gamma =
          cost.gamma ? *cost.gamma : (signal.rows() >= 2 ? rbf_bandwidth_median(signal) : 1.0);
      double gram = 0.0;
      for (std::size_t i = a; i < b; ++i) {
        for (std::size_t j = a; j < b; ++j) {
          gram += std::exp(-gamma * squared_distance(signal.row(i), signal.row(j)));
        }
      }
      return std::max(len - gram / len, 0.0);
    }
  }
  return 0.0;
}

CostModel::CostModel(const Signal& signal, const SegmentCost& cost)
    : signal_(signal), spec_(cost), n_(signal.rows()), d_(signal.cols()) {
  spec_.validate();
  if (n_ == 0) throw std::invalid_argument("CostModel: empty signal");

  std::vector<double> mean(d_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = 0; k < d_; ++k) mean[k] += signal(i, k);
  }
  for (double& m : mean) m /= static_cast<double>(n_);
  centered_.resize(n_ * d_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = 0; k < d_; ++k) centered_[i * d_ + k] = signal(i, k) - mean[k];
  }

  switch (spec_.kind) {
    case CostKind::L1: {
      if (n_ > kL1TableMaxRows) break;
      // Running lower/upper halves give the absolute deviation about the
      // median of [a, b) for every b in one pass per start a.
      const std::size_t w = n_ + 1;
      l1_table_.assign(w * w, 0.0);
      for (std::size_t k = 0; k < d_; ++k) {
        for (std::size_t a = 0; a < n_; ++a) {
          std::priority_queue<double> lower;
          std::priority_queue<double, std::vector<double>, std::greater<>> upper;
          double sum_lower = 0.0, sum_upper = 0.0;
          for (std::size_t b = a; b < n_; ++b) {
            const double v = centered_[b * d_ + k];
            if (lower.empty() || v <= lower.top()) {
              lower.push(v);
              sum_lower += v;
            } else {
              upper.push(v);
              sum_upper += v;
            }
            if (lower.size() > upper.size() + 1) {
              sum_lower -= lower.top();
              sum_upper += lower.top();
              upper.push(lower.top());
              lower.pop();
            } else if (upper.size() > lower.size()) {
              sum_upper -= upper.top();
              sum_lower += upper.top();
              lower.push(upper.top());
              upper.pop();
            }
            const double med = lower.top();
            const double sad = med * static_cast<double>(lower.size()) - sum_lower + sum_upper -
                               med * static_cast<double>(upper.size());
            l1_table_[a * w + b + 1] += std::max(sad, 0.0);
          }
        }
      }
      break;
    }
    case CostKind::L2: {
      sum_.assign((n_ + 1) * d_, 0.0);
      sum_sq_.assign(n_ + 1, 0.0);
      for (std::size_t i = 0; i < n_; ++i) {
        double sq = 0.0;
        for (std::size_t k = 0; k < d_; ++k) {
          const double x = centered_[i * d_ + k];
          sum_[(i + 1) * d_ + k] = sum_[i * d_ + k] + x;
          sq += x * x;
        }
        sum_sq_[i + 1] = sum_sq_[i] + sq;
      }
      break;
    }
    case CostKind::Normal: {
      sum_.assign((n_ + 1) * d_, 0.0);
      sum_sq_.assign((n_ + 1) * d_ * d_, 0.0);
      for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t k = 0; k < d_; ++k) {
          sum_[(i + 1) * d_ + k] = sum_[i * d_ + k] + centered_[i * d_ + k];
          for (std::size_t l = 0; l < d_; ++l) {
            const std::size_t at = k * d_ + l;
            sum_sq_[(i + 1) * d_ * d_ + at] =
                sum_sq_[i * d_ * d_ + at] + centered_[i * d_ + k] * centered_[i * d_ + l];
          }
        }
      }
      break;
    }
    case CostKind::Rbf: {
      gamma_ = spec_.gamma ? *spec_.gamma : (n_ >= 2 ? rbf_bandwidth_median(signal) : 1.0);
      const std::size_t w = n_ + 1;
      gram_cumsum_.assign(w * w, 0.0);
      for (std::size_t i = 0; i < n_; ++i) {
        double row_acc = 0.0;
        for (std::size_t j = 0; j < n_; ++j) {
          row_acc += std::exp(-gamma_ * squared_distance(signal.row(i), signal.row(j)));
          gram_cumsum_[(i + 1) * w + (j + 1)] = gram_cumsum_[i * w + (j + 1)] + row_acc;
        }
      }
      break;
    }
  }
}

double CostModel::operator()(std::size_t a, std::size_t b) const {
  check_range(n_, a, b);
  switch (spec_.kind) {
    case CostKind::L1: return l1(a, b);
    case CostKind::L2: return l2(a, b);
    case CostKind::Normal: return normal(a, b);
    case CostKind::Rbf: return rbf(a, b);
  }
  return 0.0;
}

double CostModel::l1(std::size_t a, std::size_t b) const {
  if (l1_table_.empty()) return segment_cost(signal_, spec_, a, b);
  return l1_table_[a * (n_ + 1) + b];
}

double CostModel::l2(std::size_t a, std::size_t b) const {
  const double len = static_cast<double>(b - a);
  double norm_sum = 0.0;
  for (std::size_t k = 0; k < d_; ++k) {
    const double s = sum_[b * d_ + k] - sum_[a * d_ + k];
    norm_sum += s * s;
  }
  return std::max(sum_sq_[b] - sum_sq_[a] - norm_sum / len, 0.0);
}

double CostModel::normal(std::size_t a, std::size_t b) const {
  const double len = static_cast<double>(b - a);
  const auto d = static_cast<Eigen::Index>(d_);
  Eigen::VectorXd mean(d);
  for (std::size_t k = 0; k < d_; ++k) mean(static_cast<Eigen::Index>(k)) = (sum_[b * d_ + k] - sum_[a * d_ + k]) / len;
  Eigen::MatrixXd cov(d, d);
  for (std::size_t k = 0; k < d_; ++k) {
    for (std::size_t l = 0; l < d_; ++l) {
      const std::size_t at = k * d_ + l;
      cov(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) =
          (sum_sq_[b * d_ * d_ + at] - sum_sq_[a * d_ * d_ + at]) / len;
    }
  }
  cov -= mean * mean.transpose();
  return len * log_det_regularized(cov, spec_.epsilon);
}

double CostModel::rbf(std::size_t a, std::size_t b) const {
  const std::size_t w = n_ + 1;
  const double block = gram_cumsum_[b * w + b] - gram_cumsum_[a * w + b] -
                       gram_cumsum_[b * w + a] + gram_cumsum_[a * w + a];
  const double len = static_cast<double>(b - a);
  return std::max(len - block / len, 0.0);
}

}  // namespace maintseg
