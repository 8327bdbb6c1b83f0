// Test-only oracles, kept independent of the library's computation paths.
#pragma once

#include <cstdint>
#include <vector>

#include "votecount/exact_math.hpp"

namespace oracles {

// Exhaustive enumeration of all C(m,v) voter subsets: counts those whose
// majority is in error when classifiers 0..i-1 are the incorrect ones.
inline votecount::Rational enumerate_vote_error(long m, long i, long v) {
  std::vector<long> subset(static_cast<std::size_t>(v));
  for (long t = 0; t < v; ++t) subset[static_cast<std::size_t>(t)] = t;
  votecount::uint128 total = 0, bad_majority = 0;
  for (;;) {
    ++total;
    long wrong = 0;
    for (long t = 0; t < v; ++t)
      if (subset[static_cast<std::size_t>(t)] < i) ++wrong;
    if (2 * wrong > v) ++bad_majority;
    // next combination in lexicographic order
    long t = v - 1;
    while (t >= 0 && subset[static_cast<std::size_t>(t)] == m - v + t) --t;
    if (t < 0) break;
    ++subset[static_cast<std::size_t>(t)];
    for (long s = t + 1; s < v; ++s)
      subset[static_cast<std::size_t>(s)] = subset[static_cast<std::size_t>(s - 1)] + 1;
  }
  votecount::Rational r{bad_majority, total};
  r.reduce();
  return r;
}

// C(n,k) by the multiplicative product form, in long double.
inline long double binom_product_form(long n, long k) {
  if (k < 0 || k > n) return 0.0L;
  long double c = 1.0L;
  for (long j = 1; j <= k; ++j)
    c = c * static_cast<long double>(n - k + j) / static_cast<long double>(j);
  return c;
}

// P(Bin(n,q) <= k) with q rational a/b, summed term by term in long double
// from exact integer binomials.
inline long double binomial_cdf_rational(long n, long k, long a, long b) {
  long double q = static_cast<long double>(a) / static_cast<long double>(b);
  long double sum = 0.0L;
  for (long j = 0; j <= k; ++j) {
    long double term = binom_product_form(n, j);
    for (long t = 0; t < j; ++t) term *= q;
    for (long t = 0; t < n - j; ++t) term *= (1.0L - q);
    sum += term;
  }
  return sum;
}

}  // namespace oracles
