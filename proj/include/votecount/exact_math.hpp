#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <vector>

namespace votecount {

using uint128 = unsigned __int128;

/// Exact C(n,k), or nullopt if the value overflows 128 bits.
/// C(n,k) = 0 for k < 0 or k > n.
inline std::optional<uint128> binom_exact(long n, long k) {
  if (n < 0) throw std::invalid_argument("binom_exact: n < 0");
  if (k < 0 || k > n) return uint128{0};
  if (k > n - k) k = n - k;
  uint128 c = 1;
  const uint128 cap = ~uint128{0};
  for (long j = 1; j <= k; ++j) {
    // c * (n - k + j) stays an integer after dividing by j
    uint128 f = static_cast<uint128>(n - k + j);
    if (c > cap / f) return std::nullopt;
    c = c * f / static_cast<uint128>(j);
  }
  return c;
}

namespace detail {

// log(n!) cache, grown on demand; guarded so concurrent first use is safe
inline double log_factorial(long n) {
  static std::vector<double> table{0.0, 0.0};
  static std::mutex mu;
  static std::atomic<std::size_t> ready{2};
  std::size_t idx = static_cast<std::size_t>(n);
  if (idx >= ready.load(std::memory_order_acquire)) {
    std::lock_guard<std::mutex> lock(mu);
    while (table.size() <= idx)
      table.push_back(std::lgamma(static_cast<double>(table.size()) + 1.0));
    ready.store(table.size(), std::memory_order_release);
  }
  return table[idx];
}

inline double u128_to_double(uint128 x) {
  return static_cast<double>(static_cast<unsigned long long>(x >> 64)) *
             0x1.0p64 +
         static_cast<double>(static_cast<unsigned long long>(x));
}

inline uint128 gcd_u128(uint128 a, uint128 b) {
  while (b != 0) {
    uint128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace detail

/// log C(n,k); -inf when C(n,k) = 0.
inline double log_binom(long n, long k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return detail::log_factorial(n) - detail::log_factorial(k) -
         detail::log_factorial(n - k);
}

/// Exact nonnegative rational, kept in lowest terms.
struct Rational {
  uint128 num = 0;
  uint128 den = 1;

  void reduce() {
    if (num == 0) {
      den = 1;
      return;
    }
    uint128 g = detail::gcd_u128(num, den);
    num /= g;
    den /= g;
  }
  double to_double() const {
    return detail::u128_to_double(num) / detail::u128_to_double(den);
  }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
};

inline void check_basis_args(long m, long i, long v) {
  if (m < 1) throw std::invalid_argument("ensemble size m must be >= 1");
  if (i < 0 || i > m) throw std::invalid_argument("error count i outside [0,m]");
  if (v < 1 || v > m) throw std::invalid_argument("voter count v outside [1,m]");
  if (v % 2 == 0) throw std::invalid_argument("voter count v must be odd");
}

/// Voting error rate given i of m classifiers in error and v voters drawn
/// without replacement, as an exact fraction (count of majority-error voter
/// subsets over C(m,v)). nullopt when 128-bit arithmetic would overflow.
inline std::optional<Rational> basis_error_rate_exact(long m, long i, long v) {
  check_basis_args(m, i, v);
  auto den = binom_exact(m, v);
  if (!den) return std::nullopt;
  uint128 num = 0;
  for (long j = (v + 1) / 2; j <= v; ++j) {
    auto a = binom_exact(i, j);
    auto b = binom_exact(m - i, v - j);
    if (!a || !b) return std::nullopt;
    if (*a != 0 && *b > ~uint128{0} / *a) return std::nullopt;
    uint128 term = *a * *b;
    if (num > ~uint128{0} - term) return std::nullopt;
    num += term;
  }
  Rational r{num, *den};
  r.reduce();
  return r;
}

/// Same quantity via log-space terms; works for any m.
inline double basis_error_rate_log(long m, long i, long v) {
  check_basis_args(m, i, v);
  const long majority = (v + 1) / 2;
  if (i < majority) return 0.0;
  if (m - i < majority) return 1.0;
  const double lden = log_binom(m, v);
  double sum = 0.0, comp = 0.0;  // Kahan
  for (long j = majority; j <= v; ++j) {
    if (j > i || v - j > m - i) continue;
    double t = std::exp(log_binom(i, j) + log_binom(m - i, v - j) - lden);
    double y = t - comp;
    double s = sum + y;
    comp = (s - sum) - y;
    sum = s;
  }
  return std::min(sum, 1.0);
}

/// r(m,i,v): exact 128-bit path when it fits, log-space otherwise.
inline double basis_error_rate(long m, long i, long v) {
  check_basis_args(m, i, v);
  const long majority = (v + 1) / 2;
  if (i < majority) return 0.0;
  if (m - i < majority) return 1.0;
  if (auto exact = basis_error_rate_exact(m, i, v)) return exact->to_double();
  return basis_error_rate_log(m, i, v);
}

/// Error-rate change from raising the voter count by two:
/// delta_v(m,i,v) = r(m,i,v+2) - r(m,i,v), by the closed form whose sign is
/// carried entirely by the factor (2i - m).
inline double delta_v(long m, long i, long v) {
  check_basis_args(m, i, v);
  if (v + 2 > m) throw std::invalid_argument("delta_v requires v + 2 <= m");
  const long h = (v - 1) / 2;
  if (i == 0 || i == m || i - 1 < h || m - i - 1 < h || 2 * i == m) return 0.0;
  double logmag = -log_binom(m, v) + std::log(static_cast<double>(i)) +
                  log_binom(i - 1, h) + std::log(static_cast<double>(m - i)) +
                  log_binom(m - i - 1, h) +
                  std::log(std::fabs(static_cast<double>(2 * i - m))) -
                  std::log(static_cast<double>((v + 1) / 2)) -
                  std::log(static_cast<double>(m - v)) -
                  std::log(static_cast<double>(m - v - 1));
  double mag = std::exp(logmag);
  return (2 * i > m) ? mag : -mag;
}

/// P(Bin(n,q) <= k) by compensated summation of log-space terms.
inline double binomial_cdf(long n, long k, double q) {
  if (n < 0 || k < 0 || k > n)
    throw std::invalid_argument("binomial_cdf: need 0 <= k <= n");
  if (!(q >= 0.0 && q <= 1.0))
    throw std::invalid_argument("binomial_cdf: q outside [0,1]");
  if (k == n) return 1.0;
  if (q == 0.0) return 1.0;
  if (q == 1.0) return 0.0;
  const double lq = std::log(q), l1q = std::log1p(-q);
  double sum = 0.0, comp = 0.0;
  for (long j = 0; j <= k; ++j) {
    double t = std::exp(log_binom(n, j) + j * lq + (n - j) * l1q);
    double y = t - comp;
    double s = sum + y;
    comp = (s - sum) - y;
    sum = s;
  }
  return std::min(sum, 1.0);
}

inline void check_delta_arg(double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("failure probability delta must be in (0,1)");
}

/// PAC upper bound u(n,k,delta): smallest q with P(Bin(n,q) <= k) <= delta.
/// u(n,n,delta) = 1.
inline double binomial_upper(long n, long k, double delta, double tol = 1e-10) {
  check_delta_arg(delta);
  if (n < 1 || k < 0 || k > n)
    throw std::invalid_argument("binomial_upper: need 0 <= k <= n, n >= 1");
  if (k == n) return 1.0;
  double lo = static_cast<double>(k) / n, hi = 1.0;
  // cdf is decreasing in q on [k/n, 1]
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (binomial_cdf(n, k, mid) <= delta)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

/// PAC lower bound t(n,k,delta): largest q with P(Bin(n,q) >= k) <= delta.
/// t(n,0,delta) = 0.
inline double binomial_lower(long n, long k, double delta, double tol = 1e-10) {
  check_delta_arg(delta);
  if (n < 1 || k < 0 || k > n)
    throw std::invalid_argument("binomial_lower: need 0 <= k <= n, n >= 1");
  if (k == 0) return 0.0;
  double lo = 0.0, hi = static_cast<double>(k) / n;
  // P(Bin >= k) = 1 - cdf(k-1, q) is increasing in q
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (1.0 - binomial_cdf(n, k - 1, mid) <= delta)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

/// Simultaneous Hoeffding half-width sqrt((ln(m+1) - ln delta) / (2n)).
inline double hoeffding_margin(long n, long m, double delta) {
  check_delta_arg(delta);
  if (n < 1) throw std::invalid_argument("hoeffding_margin: n must be >= 1");
  if (m < 1) throw std::invalid_argument("hoeffding_margin: m must be >= 1");
  return std::sqrt((std::log(static_cast<double>(m + 1)) - std::log(delta)) /
                   (2.0 * static_cast<double>(n)));
}

/// Pearson X^2(w, w_hat) = (m+1) sum (w_hat_i - w_i)^2 / w_i, term i zero
/// when w_i = w_hat_i = 0. Returns +inf when some w_i = 0 < w_hat_i.
inline double pearson_x2(const std::vector<double>& w,
                         const std::vector<double>& w_hat) {
  if (w.size() != w_hat.size() || w.empty())
    throw std::invalid_argument("pearson_x2: length mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0) {
      if (w_hat[i] != 0.0) return std::numeric_limits<double>::infinity();
      continue;
    }
    double d = w_hat[i] - w[i];
    sum += d * d / w[i];
  }
  return static_cast<double>(w.size()) * sum;
}

namespace detail {

// regularized lower incomplete gamma P(a,x), series / continued fraction
inline double regularized_gamma_p(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_p: bad args");
  if (x == 0.0) return 0.0;
  const double lg = std::lgamma(a);
  if (x < a + 1.0) {
    double ap = a, term = 1.0 / a, sum = term;
    for (int it = 0; it < 500; ++it) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - lg);
  }
  // Lentz continued fraction for Q(a,x)
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int it = 1; it <= 500; ++it) {
    double an = -it * (it - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  double q = std::exp(-x + a * std::log(x) - lg) * h;
  return 1.0 - q;
}

}  // namespace detail

/// CDF of chi-squared with dof degrees of freedom.
inline double chi_squared_cdf(double x, long dof) {
  if (dof < 1) throw std::invalid_argument("chi_squared_cdf: dof < 1");
  if (x <= 0.0) return 0.0;
  return detail::regularized_gamma_p(0.5 * dof, 0.5 * x);
}

/// x with chi_squared_cdf(x, dof) = p, by bisection.
inline double chi_squared_quantile(double p, long dof, double tol = 1e-10) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("chi_squared_quantile: p outside (0,1)");
  double lo = 0.0, hi = 1.0;
  while (chi_squared_cdf(hi, dof) < p) hi *= 2.0;
  while (hi - lo > tol * std::max(1.0, hi)) {
    double mid = 0.5 * (lo + hi);
    if (chi_squared_cdf(mid, dof) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace votecount
