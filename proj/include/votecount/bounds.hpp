#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "votecount/construct.hpp"
#include "votecount/curves.hpp"
#include "votecount/estimate.hpp"
#include "votecount/exact_math.hpp"

namespace votecount {

enum class BandMethod { DirectHoeffding, InferenceHoeffding, InferenceBoxLp };

inline const char* to_string(BandMethod m) {
  switch (m) {
    case BandMethod::DirectHoeffding: return "direct-hoeffding";
    case BandMethod::InferenceHoeffding: return "inference-hoeffding";
    case BandMethod::InferenceBoxLp: return "inference-box-lp";
  }
  return "?";
}

/// Simultaneous lower/upper error-rate bounds per odd voter count, holding
/// jointly with probability at least 1 - delta.
struct ConfidenceBand {
  std::vector<long> voters;
  std::vector<double> lower;
  std::vector<double> estimate;
  std::vector<double> upper;
  double delta = 0.0;
  long n = 0;
  BandMethod method = BandMethod::DirectHoeffding;

  bool contains_curve(const ErrorCurve& truth, double slack = 0.0) const {
    for (std::size_t c = 0; c < voters.size(); ++c) {
      double t = truth.at(voters[c]);
      if (t < lower[c] - slack || t > upper[c] + slack) return false;
    }
    return true;
  }
};

namespace detail {

inline ConfidenceBand band_around(const std::vector<long>& voters,
                                  const std::vector<double>& centers,
                                  double halfwidth, double delta, long n,
                                  BandMethod method) {
  ConfidenceBand band;
  band.voters = voters;
  band.estimate = centers;
  band.delta = delta;
  band.n = n;
  band.method = method;
  band.lower.resize(centers.size());
  band.upper.resize(centers.size());
  for (std::size_t c = 0; c < centers.size(); ++c) {
    band.lower[c] = std::max(0.0, centers[c] - halfwidth);
    band.upper[c] = std::min(1.0, centers[c] + halfwidth);
  }
  return band;
}

}  // namespace detail

/// Band k_v/n +- sqrt((ln(m+1) - ln delta)/(2n)) around direct estimates.
inline ConfidenceBand direct_hoeffding_band(const std::vector<long>& voters,
                                            const std::vector<long>& k_v,
                                            long n, long m, double delta) {
  if (voters.size() != k_v.size() || voters.empty())
    throw std::invalid_argument("direct_hoeffding_band: length mismatch");
  if (static_cast<long>(voters.size()) != (m + 1) / 2)
    throw std::invalid_argument(
        "direct_hoeffding_band: need k_v for every odd v in [1,m]");
  std::vector<double> centers(k_v.size());
  for (std::size_t c = 0; c < k_v.size(); ++c)
    centers[c] = static_cast<double>(k_v[c]) / static_cast<double>(n);
  return detail::band_around(voters, centers, hoeffding_margin(n, m, delta),
                             delta, n, BandMethod::DirectHoeffding);
}

inline ConfidenceBand direct_hoeffding_band(const ErrorCurve& direct_curve,
                                            long n, long m, double delta) {
  std::vector<long> k(direct_curve.rates.size());
  for (std::size_t c = 0; c < k.size(); ++c)
    k[c] = std::lround(direct_curve.rates[c] * static_cast<double>(n));
  return direct_hoeffding_band(direct_curve.voters, k, n, m, delta);
}

/// Same half-width, centered on the inference estimates.
inline ConfidenceBand inference_hoeffding_band(const ErrorCurve& curve, long n,
                                               long m, double delta) {
  if (static_cast<long>(curve.voters.size()) != (m + 1) / 2)
    throw std::invalid_argument(
        "inference_hoeffding_band: curve does not cover all odd v");
  return detail::band_around(curve.voters, curve.rates,
                             hoeffding_margin(n, m, delta), delta, n,
                             BandMethod::InferenceHoeffding);
}

/// Per-count binomial inversion bounds t_i <= w_i <= u_i, each at failure
/// probability delta/(2(m+1)) so all 2(m+1) hold jointly at 1 - delta.
struct BoxConstraints {
  std::vector<double> t;
  std::vector<double> u;
  double delta = 0.0;
  double delta_per_bound = 0.0;
  long n = 0;

  long m() const { return static_cast<long>(t.size()) - 1; }
};

inline BoxConstraints binomial_box_constraints(const EmpiricalErrorCounts& counts,
                                               double delta,
                                               double bisection_tol = 1e-10) {
  check_delta_arg(delta);
  const long m = counts.m();
  BoxConstraints box;
  box.delta = delta;
  box.delta_per_bound = delta / (2.0 * static_cast<double>(m + 1));
  box.n = counts.n;
  box.t.resize(static_cast<std::size_t>(m) + 1);
  box.u.resize(static_cast<std::size_t>(m) + 1);
  for (long i = 0; i <= m; ++i) {
    long k = counts.k[static_cast<std::size_t>(i)];
    box.t[static_cast<std::size_t>(i)] =
        binomial_lower(counts.n, k, box.delta_per_bound, bisection_tol);
    box.u[static_cast<std::size_t>(i)] =
        binomial_upper(counts.n, k, box.delta_per_bound, bisection_tol);
  }
  return box;
}

enum class BoxLpBackend { Greedy, Simplex };

namespace detail {

// Exact optimum of sum w_i r_i over {t <= w <= u, sum w = 1}: start at the
// lower box corner and pour the remaining mass into coordinates in r order.
inline double water_fill(const std::vector<double>& t,
                         const std::vector<double>& u,
                         const std::vector<double>& r, bool maximize) {
  const std::size_t n = r.size();
  double mass = 1.0;
  double value = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mass -= t[i];
    value += t[i] * r[i];
  }
  if (mass < -1e-12)
    throw std::runtime_error("box constraints infeasible: sum(t) > 1");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return maximize ? r[a] > r[b] : r[a] < r[b];
  });
  for (std::size_t i : order) {
    if (mass <= 0.0) break;
    double add = std::min(mass, u[i] - t[i]);
    value += add * r[i];
    mass -= add;
  }
  if (mass > 1e-9)
    throw std::runtime_error("box constraints infeasible: sum(u) < 1");
  return value;
}

inline double box_lp_simplex(const std::vector<double>& t,
                             const std::vector<double>& u,
                             const std::vector<double>& r, bool maximize) {
  const std::size_t n = r.size();
  LpProblem lp;
  lp.num_vars = n;
  lp.objective.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    lp.objective[i] = maximize ? r[i] : -r[i];
  LpProblem::Row sum_one;
  sum_one.a.assign(n, 1.0);
  sum_one.b = 1.0;
  sum_one.name = "sum(w) = 1";
  lp.equalities.push_back(std::move(sum_one));
  for (std::size_t i = 0; i < n; ++i) {
    LpProblem::Row ub;
    ub.a.assign(n, 0.0);
    ub.a[i] = 1.0;
    ub.b = u[i];
    ub.name = "w_" + std::to_string(i) + " <= u";
    lp.inequalities.push_back(std::move(ub));
    if (t[i] > 0.0) {
      LpProblem::Row lb;
      lb.a.assign(n, 0.0);
      lb.a[i] = -1.0;
      lb.b = -t[i];
      lb.name = "w_" + std::to_string(i) + " >= t";
      lp.inequalities.push_back(std::move(lb));
    }
  }
  LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::Optimal)
    throw std::runtime_error(std::string("box LP ") + to_string(sol.status));
  return maximize ? sol.objective : -sol.objective;
}

}  // namespace detail

/// Per-v bounds min/max of sum w_i r(m,i,v) over the box-constrained simplex.
inline ConfidenceBand inference_lp_bounds(const BoxConstraints& box,
                                          const BasisMatrix& basis,
                                          BoxLpBackend backend = BoxLpBackend::Greedy) {
  if (box.m() != basis.m())
    throw std::invalid_argument("inference_lp_bounds: basis size mismatch");
  ConfidenceBand band;
  band.voters = basis.voter_counts();
  band.delta = box.delta;
  band.n = box.n;
  band.method = BandMethod::InferenceBoxLp;
  band.lower.resize(band.voters.size());
  band.upper.resize(band.voters.size());
  band.estimate.resize(band.voters.size());
  for (std::size_t c = 0; c < band.voters.size(); ++c) {
    std::vector<double> r(static_cast<std::size_t>(basis.m()) + 1);
    for (long i = 0; i <= basis.m(); ++i)
      r[static_cast<std::size_t>(i)] = basis.at(i, band.voters[c]);
    if (backend == BoxLpBackend::Greedy) {
      band.lower[c] = detail::water_fill(box.t, box.u, r, false);
      band.upper[c] = detail::water_fill(box.t, box.u, r, true);
    } else {
      band.lower[c] = detail::box_lp_simplex(box.t, box.u, r, false);
      band.upper[c] = detail::box_lp_simplex(box.t, box.u, r, true);
    }
    band.lower[c] = std::max(0.0, band.lower[c]);
    band.upper[c] = std::min(1.0, band.upper[c]);
  }
  return band;
}

inline ConfidenceBand inference_box_lp_band(const EmpiricalErrorCounts& counts,
                                            const BasisMatrix& basis,
                                            double delta,
                                            BoxLpBackend backend = BoxLpBackend::Greedy) {
  ConfidenceBand band =
      inference_lp_bounds(binomial_box_constraints(counts, delta), basis, backend);
  ErrorCurve est = error_curve(counts.distribution(), basis,
                               CurveSource::ValidationInference);
  band.estimate = est.rates;
  return band;
}

enum class LikelySetMembership { Inside, Outside };

struct X2MembershipResult {
  double statistic = 0.0;
  double threshold = 0.0;
  LikelySetMembership membership = LikelySetMembership::Outside;
};

/// Pearson X^2 test of w against the observed w_hat, compared to the
/// chi-squared(m) quantile at delta. Diagnostic only: the approximate likely
/// set it describes is not a superset of the exact likely set, so no
/// coverage guarantee attaches to this check.
inline X2MembershipResult x2_membership(const ErrorCountDistribution& w,
                                        const ErrorCountDistribution& w_hat,
                                        double delta) {
  check_delta_arg(delta);
  if (w.m() != w_hat.m())
    throw std::invalid_argument("x2_membership: length mismatch");
  X2MembershipResult out;
  out.statistic = pearson_x2(w.w, w_hat.w);
  out.threshold = chi_squared_quantile(delta, w.m());
  out.membership = (out.statistic <= out.threshold)
                       ? LikelySetMembership::Inside
                       : LikelySetMembership::Outside;
  return out;
}

}  // namespace votecount
