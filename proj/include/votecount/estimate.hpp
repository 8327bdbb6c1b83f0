#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "votecount/curves.hpp"
#include "votecount/rng.hpp"

namespace votecount {

/// Per-example error counts over n validation examples, optionally with the
/// full n x m error matrix they came from (required by the direct estimator).
struct ValidationSample {
  long m = 0;
  std::vector<long> counts;                        // i_j per example
  std::optional<std::vector<std::vector<std::uint8_t>>> matrix;

  long n() const { return static_cast<long>(counts.size()); }
  bool has_matrix() const { return matrix.has_value(); }
};

inline ValidationSample make_counts_sample(long m, std::vector<long> counts) {
  if (m < 1) throw std::invalid_argument("ensemble size m must be >= 1");
  if (counts.empty()) throw std::invalid_argument("validation sample is empty");
  for (long i : counts)
    if (i < 0 || i > m)
      throw std::invalid_argument("error count outside [0,m]");
  return ValidationSample{m, std::move(counts), std::nullopt};
}

/// Rows are examples, columns classifiers; entry 1 means the classifier errs
/// on that example.
inline ValidationSample ingest_error_matrix(
    std::vector<std::vector<std::uint8_t>> rows) {
  if (rows.empty()) throw std::invalid_argument("error matrix has no rows");
  const std::size_t m = rows[0].size();
  if (m == 0) throw std::invalid_argument("error matrix has no columns");
  std::vector<long> counts;
  counts.reserve(rows.size());
  for (const auto& row : rows) {
    if (row.size() != m)
      throw std::invalid_argument("error matrix rows have unequal lengths");
    long c = 0;
    for (std::uint8_t x : row) {
      if (x > 1) throw std::invalid_argument("error matrix entries must be 0/1");
      c += x;
    }
    counts.push_back(c);
  }
  ValidationSample sample;
  sample.m = static_cast<long>(m);
  sample.counts = std::move(counts);
  sample.matrix = std::move(rows);
  return sample;
}

/// Empirical distribution of error counts, kept as exact integer counts.
struct EmpiricalErrorCounts {
  long n = 0;
  std::vector<long> k;  // k_i examples with exactly i classifiers in error

  long m() const { return static_cast<long>(k.size()) - 1; }

  double w_hat(long i) const {
    return static_cast<double>(k.at(static_cast<std::size_t>(i))) /
           static_cast<double>(n);
  }

  ErrorCountDistribution distribution() const {
    std::vector<double> w(k.size());
    for (std::size_t i = 0; i < k.size(); ++i)
      w[i] = static_cast<double>(k[i]) / static_cast<double>(n);
    return ErrorCountDistribution(std::move(w));
  }
};

inline EmpiricalErrorCounts tally_counts(const ValidationSample& sample) {
  EmpiricalErrorCounts out;
  out.n = sample.n();
  out.k.assign(static_cast<std::size_t>(sample.m) + 1, 0);
  for (long i : sample.counts) ++out.k[static_cast<std::size_t>(i)];
  return out;
}

namespace detail {

// stream purposes for derived RNG keys
inline constexpr std::uint64_t kPurposeDirectVote = 1;

}  // namespace detail

struct DirectEstimate {
  double error_rate = 0.0;               // k_v / n
  long errors = 0;                       // k_v
  std::vector<std::uint8_t> outcomes;    // per-example 0/1
};

/// Directly simulates subset voting on the validation matrix: v distinct
/// classifiers per example, drawn from the stream keyed (seed, example, v).
inline DirectEstimate direct_estimate(const ValidationSample& sample, long v,
                                      std::uint64_t seed) {
  if (!sample.has_matrix())
    throw std::invalid_argument(
        "direct_estimate needs the full error matrix, not just counts");
  if (v < 1 || v > sample.m || v % 2 == 0)
    throw std::invalid_argument("voter count v must be odd in [1,m]");
  const auto& rows = *sample.matrix;
  const long m = sample.m;
  DirectEstimate out;
  out.outcomes.resize(rows.size());
  std::vector<long> idx(static_cast<std::size_t>(m));
  for (std::size_t j = 0; j < rows.size(); ++j) {
    CounterRng rng(seed, static_cast<std::uint64_t>(j),
                   static_cast<std::uint64_t>(v), detail::kPurposeDirectVote);
    std::iota(idx.begin(), idx.end(), 0);
    long wrong = 0;
    // partial Fisher-Yates: first v slots are the voters
    for (long t = 0; t < v; ++t) {
      std::size_t pick =
          static_cast<std::size_t>(t) +
          static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(m - t)));
      std::swap(idx[static_cast<std::size_t>(t)], idx[pick]);
      wrong += rows[j][static_cast<std::size_t>(idx[static_cast<std::size_t>(t)])];
    }
    std::uint8_t err = (2 * wrong > v) ? 1 : 0;
    out.outcomes[j] = err;
    out.errors += err;
  }
  out.error_rate = static_cast<double>(out.errors) /
                   static_cast<double>(rows.size());
  return out;
}

/// Curve of direct estimates over all odd v.
inline ErrorCurve direct_estimate_curve(const ValidationSample& sample,
                                        std::uint64_t seed) {
  std::vector<long> voters;
  std::vector<double> rates;
  for (long v = 1; v <= sample.m; v += 2) {
    voters.push_back(v);
    rates.push_back(direct_estimate(sample, v, seed).error_rate);
  }
  return make_curve(std::move(voters), std::move(rates),
                    CurveSource::ValidationDirect);
}

/// Inference estimate sum_i w_hat_i r(m,i,v) per odd v; equal to the
/// per-example average of r(m,i_j,v).
inline ErrorCurve inference_estimate(const ValidationSample& sample,
                                     const BasisMatrix& basis) {
  if (basis.m() != sample.m)
    throw std::invalid_argument("inference_estimate: basis size mismatch");
  EmpiricalErrorCounts tally = tally_counts(sample);
  return error_curve(tally.distribution(), basis,
                     CurveSource::ValidationInference);
}

enum class EstimatorMethod { Direct, Inference };

struct VoterSelection {
  long v = 1;
  ErrorCurve curve;
};

/// Picks the odd v with the lowest validation error, smallest v on ties.
inline VoterSelection select_voters(const ValidationSample& sample,
                                    const BasisMatrix& basis,
                                    EstimatorMethod method,
                                    std::uint64_t seed = 0) {
  ErrorCurve curve = method == EstimatorMethod::Direct
                         ? direct_estimate_curve(sample, seed)
                         : inference_estimate(sample, basis);
  return {curve.argmin_v, std::move(curve)};
}

struct VarianceComparison {
  double direct = 0.0;     // p - p^2
  double inference = 0.0;  // sum w_i r_i^2 - p^2
  double mean = 0.0;       // p = sum w_i r_i
};

/// Per-example estimator variances at voter count v. The direct estimator is
/// Bernoulli(p); the inference estimator takes value r(m,i,v) with
/// probability w_i. Always direct >= inference.
inline VarianceComparison variance_comparison(const ErrorCountDistribution& w,
                                              const BasisMatrix& basis,
                                              long v) {
  if (w.m() != basis.m())
    throw std::invalid_argument("variance_comparison: basis size mismatch");
  double p = 0.0, second = 0.0;
  for (long i = 0; i <= basis.m(); ++i) {
    double r = basis.at(i, v);
    double wi = w.w[static_cast<std::size_t>(i)];
    p += wi * r;
    second += wi * r * r;
  }
  return {p - p * p, second - p * p, p};
}

}  // namespace votecount
