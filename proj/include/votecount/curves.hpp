#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "votecount/exact_math.hpp"

namespace votecount {

/// Distribution (w_0..w_m) over the number of ensemble classifiers in error.
/// Normalized on construction; rejected if the input sum strays from 1 by
/// more than 1e-9.
struct ErrorCountDistribution {
  std::vector<double> w;

  ErrorCountDistribution() = default;

  explicit ErrorCountDistribution(std::vector<double> weights)
      : w(std::move(weights)) {
    if (w.empty())
      throw std::invalid_argument("error-count distribution is empty");
    double sum = 0.0;
    for (double x : w) {
      if (!(x >= 0.0) || x > 1.0 + 1e-12)
        throw std::invalid_argument("error-count weight outside [0,1]");
      sum += x;
    }
    if (std::fabs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("error-count weights sum to " +
                                  std::to_string(sum) + ", not 1");
    for (double& x : w) x /= sum;
  }

  static ErrorCountDistribution point_mass(long m, long i) {
    std::vector<double> w(static_cast<std::size_t>(m) + 1, 0.0);
    w.at(static_cast<std::size_t>(i)) = 1.0;
    return ErrorCountDistribution(std::move(w));
  }

  long m() const { return static_cast<long>(w.size()) - 1; }

  /// Average classifier error rate sum_i w_i * i/m.
  double mean_classifier_error() const {
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
      s += w[i] * static_cast<double>(i);
    return s / static_cast<double>(m());
  }
};

/// Table of r(m,i,v) for i in 0..m and odd v in 1..m.
class BasisMatrix {
 public:
  explicit BasisMatrix(long m) : m_(m) {
    if (m < 1) throw std::invalid_argument("ensemble size m must be >= 1");
    for (long v = 1; v <= m; v += 2) voters_.push_back(v);
    rates_.resize(static_cast<std::size_t>(m + 1) * voters_.size());
    for (long i = 0; i <= m; ++i)
      for (std::size_t c = 0; c < voters_.size(); ++c)
        rates_[index(i, c)] = basis_error_rate(m, i, voters_[c]);
  }

  long m() const { return m_; }
  const std::vector<long>& voter_counts() const { return voters_; }

  double at(long i, long v) const { return rates_[index(i, column(v))]; }

  /// Row r(m,i,.) over odd v, in voter_counts() order.
  std::vector<double> row(long i) const {
    std::vector<double> out(voters_.size());
    for (std::size_t c = 0; c < voters_.size(); ++c) out[c] = rates_[index(i, c)];
    return out;
  }

  std::size_t column(long v) const {
    if (v < 1 || v > m_ || v % 2 == 0)
      throw std::invalid_argument("voter count v outside the odd range [1,m]");
    return static_cast<std::size_t>((v - 1) / 2);
  }

 private:
  std::size_t index(long i, std::size_t c) const {
    if (i < 0 || i > m_) throw std::invalid_argument("row index outside [0,m]");
    return static_cast<std::size_t>(i) * voters_.size() + c;
  }

  long m_;
  std::vector<long> voters_;
  std::vector<double> rates_;
};

inline BasisMatrix build_basis(long m) { return BasisMatrix(m); }

enum class CurveSource { Distribution, ValidationDirect, ValidationInference };

inline const char* to_string(CurveSource s) {
  switch (s) {
    case CurveSource::Distribution: return "distribution";
    case CurveSource::ValidationDirect: return "validation-direct";
    case CurveSource::ValidationInference: return "validation-inference";
  }
  return "?";
}

/// Average voting error rate per odd voter count, with the error-minimizing
/// voter count attached. Ties within 1e-12 break toward the smallest v.
struct ErrorCurve {
  std::vector<long> voters;
  std::vector<double> rates;
  long argmin_v = 1;
  CurveSource source = CurveSource::Distribution;

  static constexpr double kTieTolerance = 1e-12;

  double at(long v) const {
    for (std::size_t c = 0; c < voters.size(); ++c)
      if (voters[c] == v) return rates[c];
    throw std::invalid_argument("voter count not on curve");
  }

  double min_rate() const {
    return *std::min_element(rates.begin(), rates.end());
  }

  void refresh_argmin() {
    double best = min_rate();
    for (std::size_t c = 0; c < voters.size(); ++c) {
      if (rates[c] <= best + kTieTolerance) {
        argmin_v = voters[c];
        return;
      }
    }
  }
};

inline ErrorCurve make_curve(std::vector<long> voters, std::vector<double> rates,
                             CurveSource source) {
  ErrorCurve curve;
  curve.voters = std::move(voters);
  curve.rates = std::move(rates);
  curve.source = source;
  if (curve.voters.empty() || curve.voters.size() != curve.rates.size())
    throw std::invalid_argument("curve points malformed");
  curve.refresh_argmin();
  return curve;
}

/// Mixture curve sum_i w_i r(m,i,v) for each odd v.
inline ErrorCurve error_curve(const ErrorCountDistribution& w,
                              const BasisMatrix& basis,
                              CurveSource source = CurveSource::Distribution) {
  if (w.m() != basis.m())
    throw std::invalid_argument("distribution length does not match basis");
  const auto& voters = basis.voter_counts();
  std::vector<double> rates(voters.size(), 0.0);
  for (long i = 0; i <= basis.m(); ++i) {
    if (w.w[static_cast<std::size_t>(i)] == 0.0) continue;
    for (std::size_t c = 0; c < voters.size(); ++c)
      rates[c] += w.w[static_cast<std::size_t>(i)] * basis.at(i, voters[c]);
  }
  return make_curve(voters, std::move(rates), source);
}

struct WorstCaseAllVoting {
  double rate;                      // 2p(1 - 1/(m+1))
  ErrorCountDistribution witness;   // mass on i=(m+1)/2 and i=0
};

/// Maximum possible all-voting error rate for odd m and average classifier
/// error rate p < 1/2, with the two-point distribution attaining it.
inline WorstCaseAllVoting worst_case_all_voting(long m, double p) {
  if (m < 1 || m % 2 == 0)
    throw std::invalid_argument("worst_case_all_voting requires odd m >= 1");
  if (!(p >= 0.0 && p < 0.5))
    throw std::invalid_argument("worst_case_all_voting requires 0 <= p < 1/2");
  double rate = 2.0 * p * (1.0 - 1.0 / static_cast<double>(m + 1));
  std::vector<double> w(static_cast<std::size_t>(m) + 1, 0.0);
  w[static_cast<std::size_t>((m + 1) / 2)] = rate;
  w[0] = 1.0 - rate;
  return {rate, ErrorCountDistribution(std::move(w))};
}

/// Sign regime of delta_v(m,i,v) as the voter count grows by two.
enum class TrendLabel {
  ZeroFloor,    // i < (v+1)/2: rate pinned at 0
  Decreasing,   // i < m/2 with enough errors to matter
  Increasing,   // i > m/2 with enough correct classifiers to matter
  OneCeiling,   // m - i < (v+1)/2: rate pinned at 1
  Balanced      // 2i = m (even m only): delta is identically zero
};

inline const char* to_string(TrendLabel t) {
  switch (t) {
    case TrendLabel::ZeroFloor: return "zero-floor";
    case TrendLabel::Decreasing: return "decreasing";
    case TrendLabel::Increasing: return "increasing";
    case TrendLabel::OneCeiling: return "one-ceiling";
    case TrendLabel::Balanced: return "balanced";
  }
  return "?";
}

struct TrendPoint {
  long v;
  TrendLabel label;
};

/// Classifies delta_v(m,i,v) for every odd v with v + 2 <= m.
inline std::vector<TrendPoint> classify_monotonicity(long m, long i) {
  if (m < 1) throw std::invalid_argument("ensemble size m must be >= 1");
  if (i < 0 || i > m) throw std::invalid_argument("error count i outside [0,m]");
  std::vector<TrendPoint> out;
  for (long v = 1; v + 2 <= m; v += 2) {
    TrendLabel label;
    if (2 * i < v + 1)
      label = TrendLabel::ZeroFloor;
    else if (2 * (m - i) < v + 1)
      label = TrendLabel::OneCeiling;
    else if (2 * i < m)
      label = TrendLabel::Decreasing;
    else if (2 * i > m)
      label = TrendLabel::Increasing;
    else
      label = TrendLabel::Balanced;
    out.push_back({v, label});
  }
  return out;
}

}  // namespace votecount
