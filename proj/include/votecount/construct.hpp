#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "votecount/curves.hpp"

namespace votecount {

/// maximize objective . x  subject to  eq rows (a.x = b), le rows (a.x <= b),
/// x >= 0.
struct LpProblem {
  struct Row {
    std::vector<double> a;
    double b = 0.0;
    std::string name;
  };

  std::size_t num_vars = 0;
  std::vector<double> objective;
  std::vector<Row> equalities;
  std::vector<Row> inequalities;

  void check() const {
    if (num_vars == 0 || objective.size() != num_vars)
      throw std::invalid_argument("lp: objective length mismatch");
    for (const auto& r : equalities)
      if (r.a.size() != num_vars)
        throw std::invalid_argument("lp: equality row length mismatch");
    for (const auto& r : inequalities)
      if (r.a.size() != num_vars)
        throw std::invalid_argument("lp: inequality row length mismatch");
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "?";
}

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;
  double objective = 0.0;
  std::vector<std::string> violated;  // populated when infeasible
};

namespace detail {

// Dense two-phase simplex on the full tableau. Bland's rule on both the
// entering and leaving choice, so cycling cannot occur.
class SimplexTableau {
 public:
  SimplexTableau(const LpProblem& p) : p_(p) {
    p.check();
    n_struct_ = p.num_vars;
    n_slack_ = p.inequalities.size();
    rows_ = p.equalities.size() + p.inequalities.size();
    n_art_ = rows_;
    cols_ = n_struct_ + n_slack_ + n_art_ + 1;  // + rhs
    tab_.assign(rows_ * cols_, 0.0);
    basis_.assign(rows_, 0);

    std::size_t r = 0;
    for (const auto& row : p.inequalities) {
      for (std::size_t j = 0; j < n_struct_; ++j) at(r, j) = row.a[j];
      at(r, n_struct_ + r) = 1.0;
      rhs(r) = row.b;
      ++r;
    }
    for (const auto& row : p.equalities) {
      for (std::size_t j = 0; j < n_struct_; ++j) at(r, j) = row.a[j];
      rhs(r) = row.b;
      ++r;
    }
    for (std::size_t i = 0; i < rows_; ++i) {
      if (rhs(i) < 0.0)
        for (std::size_t j = 0; j < cols_; ++j) tab_[i * cols_ + j] = -tab_[i * cols_ + j];
      at(i, n_struct_ + n_slack_ + i) = 1.0;
      basis_[i] = n_struct_ + n_slack_ + i;
    }
  }

  LpSolution solve() {
    // phase 1: minimize the artificial sum
    std::vector<double> phase1(cols_ - 1, 0.0);
    for (std::size_t j = n_struct_ + n_slack_; j < cols_ - 1; ++j) phase1[j] = -1.0;
    run(phase1, n_struct_ + n_slack_ + n_art_);
    double art_sum = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
      if (basis_[i] >= n_struct_ + n_slack_) art_sum += rhs(i);
    LpSolution sol;
    if (art_sum > 1e-8) {
      sol.status = LpStatus::Infeasible;
      return sol;
    }
    drop_artificials();

    // phase 2: original objective over structural + slack columns only
    std::vector<double> phase2(cols_ - 1, 0.0);
    for (std::size_t j = 0; j < n_struct_; ++j) phase2[j] = p_.objective[j];
    bool bounded = run(phase2, n_struct_ + n_slack_);
    if (!bounded) {
      sol.status = LpStatus::Unbounded;
      return sol;
    }
    sol.status = LpStatus::Optimal;
    sol.x.assign(n_struct_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i)
      if (basis_[i] < n_struct_) sol.x[basis_[i]] = rhs(i);
    sol.objective = 0.0;
    for (std::size_t j = 0; j < n_struct_; ++j)
      sol.objective += p_.objective[j] * sol.x[j];
    return sol;
  }

 private:
  double& at(std::size_t i, std::size_t j) { return tab_[i * cols_ + j]; }
  double& rhs(std::size_t i) { return tab_[i * cols_ + cols_ - 1]; }

  // Maximizes cost over columns [0, active_cols). Returns false if unbounded.
  bool run(const std::vector<double>& cost, std::size_t active_cols) {
    constexpr double kEps = 1e-10;
    for (;;) {
      // reduced costs from scratch: z_j = cost_j - cost_B . column_j
      std::size_t enter = active_cols;
      for (std::size_t j = 0; j < active_cols; ++j) {
        double z = cost[j];
        for (std::size_t i = 0; i < rows_; ++i)
          if (basis_[i] < cost.size()) z -= cost[basis_[i]] * at(i, j);
        if (z > kEps) {
          enter = j;
          break;  // Bland: smallest improving index
        }
      }
      if (enter == active_cols) return true;

      std::size_t leave = rows_;
      double best_ratio = 0.0;
      for (std::size_t i = 0; i < rows_; ++i) {
        if (at(i, enter) <= kEps) continue;
        double ratio = rhs(i) / at(i, enter);
        if (leave == rows_ || ratio < best_ratio - kEps ||
            (ratio < best_ratio + kEps && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave == rows_) return false;
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t row, std::size_t col) {
    double piv = at(row, col);
    for (std::size_t j = 0; j < cols_; ++j) tab_[row * cols_ + j] /= piv;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == row) continue;
      double f = at(i, col);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < cols_; ++j)
        tab_[i * cols_ + j] -= f * tab_[row * cols_ + j];
    }
    basis_[row] = col;
  }

  // After phase 1, pivot remaining basic artificials onto real columns.
  void drop_artificials() {
    for (std::size_t i = 0; i < rows_; ++i) {
      if (basis_[i] < n_struct_ + n_slack_) continue;
      std::size_t col = n_struct_ + n_slack_;
      for (std::size_t j = 0; j < n_struct_ + n_slack_; ++j)
        if (std::fabs(at(i, j)) > 1e-9) {
          col = j;
          break;
        }
      if (col < n_struct_ + n_slack_) pivot(i, col);
      // otherwise the row is redundant; its artificial stays basic at zero
    }
  }

  const LpProblem& p_;
  std::size_t n_struct_, n_slack_, n_art_, rows_, cols_;
  std::vector<double> tab_;
  std::vector<std::size_t> basis_;
};

}  // namespace detail

inline LpSolution solve_lp(const LpProblem& problem) {
  detail::SimplexTableau tableau(problem);
  LpSolution sol = tableau.solve();
  if (sol.status == LpStatus::Infeasible) {
    for (const auto& r : problem.equalities)
      if (!r.name.empty()) sol.violated.push_back(r.name);
    for (const auto& r : problem.inequalities)
      if (!r.name.empty()) sol.violated.push_back(r.name);
  }
  return sol;
}

/// Distribution over error counts whose voting error curve has its strict
/// minimum at vmin. Two-point cases at the boundaries, a mixture w_a = theta,
/// w_b = 1 - theta with theta -> 1 in between.
inline ErrorCountDistribution theorem4_distribution(long m, long vmin,
                                                    const BasisMatrix& basis) {
  if (vmin < 1 || vmin > m || vmin % 2 == 0)
    throw std::invalid_argument("theorem4_distribution: vmin must be odd in [1,m]");
  if (basis.m() != m)
    throw std::invalid_argument("theorem4_distribution: basis size mismatch");

  auto strict_argmin = [&](const ErrorCountDistribution& w) {
    ErrorCurve curve = error_curve(w, basis);
    if (curve.argmin_v != vmin) return false;
    for (std::size_t c = 0; c < curve.voters.size(); ++c)
      if (curve.voters[c] != vmin &&
          curve.rates[c] <= curve.at(vmin) + ErrorCurve::kTieTolerance)
        return false;
    return true;
  };

  ErrorCountDistribution w;
  if (vmin == 1) {
    w = ErrorCountDistribution::point_mass(m, m - 1);
  } else if (vmin == m || vmin == m - 1) {
    w = ErrorCountDistribution::point_mass(m, (vmin - 1) / 2);
  } else {
    const long a = (vmin - 1) / 2;
    const long b = m - (vmin + 1) / 2;
    bool found = false;
    for (int k = 1; k <= 60 && !found; ++k) {
      double theta = 1.0 - std::ldexp(1.0, -k);
      std::vector<double> mix(static_cast<std::size_t>(m) + 1, 0.0);
      mix[static_cast<std::size_t>(a)] = theta;
      mix[static_cast<std::size_t>(b)] = 1.0 - theta;
      ErrorCountDistribution cand(std::move(mix));
      if (strict_argmin(cand)) {
        w = std::move(cand);
        found = true;
      }
    }
    if (!found)
      throw std::runtime_error(
          "theorem4_distribution: no theta in the geometric schedule produced "
          "a strict minimum at vmin=" + std::to_string(vmin));
    return w;
  }
  if (!strict_argmin(w))
    throw std::runtime_error(
        "theorem4_distribution: boundary construction failed verification at "
        "vmin=" + std::to_string(vmin));
  return w;
}

inline ErrorCountDistribution theorem4_distribution(long m, long vmin) {
  return theorem4_distribution(m, vmin, build_basis(m));
}

/// Result of the max-gap construction: a distribution for which vmin voters
/// beats all-voting by `gap`, with post-hoc checks of local and global
/// optimality through an independent curve re-evaluation.
struct GapCertificate {
  long vmin = 1;
  ErrorCountDistribution w;
  double gap = 0.0;
  bool locally_optimal = false;
  bool globally_optimal = false;
  double max_constraint_residual = 0.0;
  ErrorCurve curve;
};

struct MaxGapInfeasible : std::runtime_error {
  std::vector<std::string> violated;
  explicit MaxGapInfeasible(const std::string& msg,
                            std::vector<std::string> constraints)
      : std::runtime_error(msg), violated(std::move(constraints)) {}
};

/// Maximizes curve(m) - curve(vmin) over distributions constrained so that
/// vmin beats its odd neighbors and a single voter, all-voting error stays
/// under all_vote_cap, and the average classifier error rate equals p.
inline GapCertificate max_gap_lp(const BasisMatrix& basis, long vmin,
                                 double p = 0.3, double all_vote_cap = 0.5) {
  const long m = basis.m();
  if (vmin < 1 || vmin >= m || vmin % 2 == 0)
    throw std::invalid_argument("max_gap_lp: vmin must be odd and < m");
  const std::size_t n = static_cast<std::size_t>(m) + 1;

  LpProblem lp;
  lp.num_vars = n;
  lp.objective.resize(n);
  for (long i = 0; i <= m; ++i)
    lp.objective[static_cast<std::size_t>(i)] = basis.at(i, m) - basis.at(i, vmin);

  auto coeff_diff = [&](long v_hi, long v_lo) {
    LpProblem::Row row;
    row.a.resize(n);
    for (long i = 0; i <= m; ++i)
      row.a[static_cast<std::size_t>(i)] = basis.at(i, v_hi) - basis.at(i, v_lo);
    row.b = 0.0;
    return row;
  };

  {
    LpProblem::Row sum_one;
    sum_one.a.assign(n, 1.0);
    sum_one.b = 1.0;
    sum_one.name = "sum(w) = 1";
    lp.equalities.push_back(std::move(sum_one));

    LpProblem::Row mean_err;
    mean_err.a.resize(n);
    for (long i = 0; i <= m; ++i)
      mean_err.a[static_cast<std::size_t>(i)] =
          static_cast<double>(i) / static_cast<double>(m);
    mean_err.b = p;
    mean_err.name = "mean classifier error = p";
    lp.equalities.push_back(std::move(mean_err));
  }

  if (vmin > 1) {
    auto row = coeff_diff(vmin, 1);
    row.name = "curve(vmin) <= curve(1)";
    lp.inequalities.push_back(std::move(row));
    auto prev = coeff_diff(vmin, vmin - 2);
    prev.name = "curve(vmin) <= curve(vmin-2)";
    lp.inequalities.push_back(std::move(prev));
  }
  if (vmin + 2 <= m) {
    auto next = coeff_diff(vmin, vmin + 2);
    next.name = "curve(vmin) <= curve(vmin+2)";
    lp.inequalities.push_back(std::move(next));
  }
  {
    LpProblem::Row cap;
    cap.a.resize(n);
    for (long i = 0; i <= m; ++i)
      cap.a[static_cast<std::size_t>(i)] = basis.at(i, m);
    cap.b = all_vote_cap;
    cap.name = "curve(m) <= all_vote_cap";
    lp.inequalities.push_back(std::move(cap));
  }

  LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::Optimal)
    throw MaxGapInfeasible("max_gap_lp: " + std::string(to_string(sol.status)) +
                               " at vmin=" + std::to_string(vmin),
                           sol.violated);

  // clean tiny simplex residue before normalizing
  for (double& x : sol.x)
    if (x < 1e-12) x = 0.0;

  GapCertificate cert;
  cert.vmin = vmin;
  cert.w = ErrorCountDistribution(sol.x);
  cert.curve = error_curve(cert.w, basis);
  cert.gap = cert.curve.at(m) - cert.curve.at(vmin);

  double residual = 0.0;
  const double at_min = cert.curve.at(vmin);
  if (vmin > 1) {
    residual = std::max(residual, at_min - cert.curve.at(1));
    residual = std::max(residual, at_min - cert.curve.at(vmin - 2));
  }
  if (vmin + 2 <= m) residual = std::max(residual, at_min - cert.curve.at(vmin + 2));
  residual = std::max(residual, cert.curve.at(m) - all_vote_cap);
  residual = std::max(residual,
                      std::fabs(cert.w.mean_classifier_error() - p));
  cert.max_constraint_residual = std::max(residual, 0.0);
  cert.locally_optimal = residual <= 1e-8;
  cert.globally_optimal = cert.curve.argmin_v == vmin;
  return cert;
}

}  // namespace votecount
