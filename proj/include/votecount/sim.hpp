#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "votecount/bounds.hpp"
#include "votecount/curves.hpp"
#include "votecount/estimate.hpp"
#include "votecount/parallel.hpp"
#include "votecount/rng.hpp"

namespace votecount {

/// Ground-truth out-of-sample world: how many of the m classifiers err on a
/// random example is distributed as w.
struct World {
  long m = 0;
  ErrorCountDistribution w;
  std::uint64_t seed = 0;
};

inline World make_world(long m, ErrorCountDistribution w, std::uint64_t seed) {
  if (w.m() != m) throw std::invalid_argument("world: distribution length != m+1");
  return World{m, std::move(w), seed};
}

/// Draws an error count i with probability w_i (inverse CDF).
inline long sample_example(const World& world, CounterRng& rng) {
  double u = rng.uniform();
  double acc = 0.0;
  for (long i = 0; i <= world.m; ++i) {
    acc += world.w.w[static_cast<std::size_t>(i)];
    if (u < acc) return i;
  }
  return world.m;
}

/// One subset vote: draws v of m classifiers without replacement from a pool
/// with i marked incorrect; returns true iff the incorrect ones form a
/// majority. Mean over draws converges to r(m,i,v).
inline bool simulate_vote(long m, long i, long v, CounterRng& rng) {
  check_basis_args(m, i, v);
  long bad = i, total = m, picked_bad = 0;
  for (long t = 0; t < v; ++t) {
    if (rng.uniform() * static_cast<double>(total) < static_cast<double>(bad)) {
      ++picked_bad;
      --bad;
    }
    --total;
  }
  return 2 * picked_bad > v;
}

namespace detail {

inline constexpr std::uint64_t kPurposeExample = 11;
inline constexpr std::uint64_t kPurposeVote = 12;

inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace detail

/// Outcome of one seeded verification run; serializes deterministically.
struct SimulationReport {
  std::string name;
  std::uint64_t seed = 0;
  long replications = 0;
  std::vector<long> voters;
  std::vector<double> empirical;
  std::vector<double> predicted;
  double max_abs_deviation = 0.0;
  double coverage = -1.0;       // < 0 when not a coverage experiment
  double pass_threshold = 0.0;  // meaning depends on the experiment
  bool passed = false;

  std::string summary() const {
    std::ostringstream os;
    os << (passed ? "[PASS] " : "[FAIL] ") << name << " seed=" << seed
       << " replications=" << replications;
    if (coverage >= 0.0)
      os << " coverage=" << detail::fmt17(coverage)
         << " required=" << detail::fmt17(pass_threshold);
    else
      os << " max_abs_deviation=" << detail::fmt17(max_abs_deviation)
         << " allowed=" << detail::fmt17(pass_threshold);
    return os.str();
  }

  std::string to_csv() const {
    std::ostringstream os;
    os << "name,seed,replications,v,empirical,predicted\n";
    for (std::size_t c = 0; c < voters.size(); ++c)
      os << name << ',' << seed << ',' << replications << ',' << voters[c]
         << ',' << detail::fmt17(empirical[c]) << ','
         << detail::fmt17(predicted[c]) << '\n';
    return os.str();
  }
};

/// Empirical vote error rate for (m,i,v) over `replications` seeded draws.
inline double monte_carlo_vote_rate(long m, long i, long v, long replications,
                                    std::uint64_t seed) {
  // chunked so parallel and serial runs accumulate identically
  const long chunk = 4096;
  const long nchunks = (replications + chunk - 1) / chunk;
  std::vector<long> per_chunk(static_cast<std::size_t>(nchunks), 0);
  parallel_for(static_cast<std::size_t>(nchunks), [&](std::size_t c) {
    long lo = static_cast<long>(c) * chunk;
    long hi = std::min(replications, lo + chunk);
    long e = 0;
    for (long rep = lo; rep < hi; ++rep) {
      CounterRng rng(seed, static_cast<std::uint64_t>(rep),
                     (static_cast<std::uint64_t>(i) << 32) |
                         static_cast<std::uint64_t>(v),
                     detail::kPurposeVote);
      e += simulate_vote(m, i, v, rng) ? 1 : 0;
    }
    per_chunk[c] = e;
  });
  long total = 0;
  for (long e : per_chunk) total += e;
  return static_cast<double>(total) / static_cast<double>(replications);
}

/// Simulates the worst-case two-point world at v = m and compares the
/// empirical all-voting error rate to 2p(1 - 1/(m+1)).
inline SimulationReport verify_theorem1(long m, double p, long replications,
                                        std::uint64_t seed,
                                        double sigma_multiplier = 3.0) {
  WorstCaseAllVoting wc = worst_case_all_voting(m, p);
  World world = make_world(m, wc.witness, seed);

  const long chunk = 4096;
  const long nchunks = (replications + chunk - 1) / chunk;
  std::vector<long> per_chunk(static_cast<std::size_t>(nchunks), 0);
  parallel_for(static_cast<std::size_t>(nchunks), [&](std::size_t c) {
    long lo = static_cast<long>(c) * chunk;
    long hi = std::min(replications, lo + chunk);
    long e = 0;
    for (long rep = lo; rep < hi; ++rep) {
      CounterRng ex_rng(seed, static_cast<std::uint64_t>(rep), 0,
                        detail::kPurposeExample);
      long i = sample_example(world, ex_rng);
      // all-voting is deterministic given i
      e += (2 * i > m) ? 1 : 0;
    }
    per_chunk[c] = e;
  });
  long errors = 0;
  for (long e : per_chunk) errors += e;

  SimulationReport report;
  report.name = "theorem1 m=" + std::to_string(m) + " p=" + detail::fmt17(p);
  report.seed = seed;
  report.replications = replications;
  report.voters = {m};
  report.empirical = {static_cast<double>(errors) /
                      static_cast<double>(replications)};
  report.predicted = {wc.rate};
  report.max_abs_deviation = std::fabs(report.empirical[0] - report.predicted[0]);
  double sigma = std::sqrt(std::max(wc.rate * (1.0 - wc.rate), 1e-12) /
                           static_cast<double>(replications));
  report.pass_threshold = sigma_multiplier * sigma;
  report.passed = p == 0.0 ? errors == 0
                           : report.max_abs_deviation <= report.pass_threshold;
  return report;
}

/// Repeatedly draws validation sets from the world, builds bands by the
/// given method, and records how often the true curve is inside the band at
/// every v simultaneously.
inline SimulationReport coverage_experiment(const World& world, long n,
                                            double delta, BandMethod method,
                                            long replications,
                                            std::uint64_t seed,
                                            double sigma_multiplier = 3.0) {
  BasisMatrix basis = build_basis(world.m);
  ErrorCurve truth = error_curve(world.w, basis);
  std::vector<std::uint8_t> covered(static_cast<std::size_t>(replications), 0);

  parallel_for(static_cast<std::size_t>(replications), [&](std::size_t rep) {
    std::vector<long> counts(static_cast<std::size_t>(n));
    for (long j = 0; j < n; ++j) {
      CounterRng rng(seed, static_cast<std::uint64_t>(rep),
                     static_cast<std::uint64_t>(j), detail::kPurposeExample);
      counts[static_cast<std::size_t>(j)] = sample_example(world, rng);
    }
    ValidationSample sample = make_counts_sample(world.m, std::move(counts));
    ConfidenceBand band;
    if (method == BandMethod::DirectHoeffding) {
      std::vector<long> voters, k_v;
      for (long v = 1; v <= world.m; v += 2) {
        long errs = 0;
        for (long j = 0; j < n; ++j) {
          CounterRng rng(seed ^ 0x5b1dULL, static_cast<std::uint64_t>(rep),
                         (static_cast<std::uint64_t>(j) << 16) |
                             static_cast<std::uint64_t>(v),
                         detail::kPurposeVote);
          errs += simulate_vote(world.m, sample.counts[static_cast<std::size_t>(j)],
                                v, rng)
                      ? 1
                      : 0;
        }
        voters.push_back(v);
        k_v.push_back(errs);
      }
      band = direct_hoeffding_band(voters, k_v, n, world.m, delta);
    } else if (method == BandMethod::InferenceHoeffding) {
      band = inference_hoeffding_band(inference_estimate(sample, basis), n,
                                      world.m, delta);
    } else {
      band = inference_box_lp_band(tally_counts(sample), basis, delta);
    }
    covered[rep] = band.contains_curve(truth) ? 1 : 0;
  });

  long hits = 0;
  for (std::uint8_t c : covered) hits += c;

  SimulationReport report;
  report.name = std::string("coverage ") + to_string(method) +
                " m=" + std::to_string(world.m) + " n=" + std::to_string(n) +
                " delta=" + detail::fmt17(delta);
  report.seed = seed;
  report.replications = replications;
  report.voters = basis.voter_counts();
  report.empirical = truth.rates;  // echoed for context
  report.predicted = truth.rates;
  report.coverage = static_cast<double>(hits) / static_cast<double>(replications);
  double target = 1.0 - delta;
  double sigma = std::sqrt(target * (1.0 - target) /
                           static_cast<double>(replications));
  report.pass_threshold = target - sigma_multiplier * sigma;
  report.passed = report.coverage >= report.pass_threshold;
  return report;
}

/// Grid agreement between simulate_vote and r(m,i,v) at 3 sigma.
inline SimulationReport verify_vote_oracle(
    const std::vector<std::array<long, 3>>& cells, long replications,
    std::uint64_t seed, double sigma_multiplier = 3.0) {
  std::vector<double> emp(cells.size()), pred(cells.size());
  std::vector<std::uint8_t> ok(cells.size(), 0);
  parallel_for(cells.size(), [&](std::size_t c) {
    auto [m, i, v] = cells[c];
    double r = basis_error_rate(m, i, v);
    double e = monte_carlo_vote_rate(m, i, v, replications,
                                     seed + static_cast<std::uint64_t>(c));
    emp[c] = e;
    pred[c] = r;
    double sigma = std::sqrt(std::max(r * (1.0 - r), 1e-12) /
                             static_cast<double>(replications));
    ok[c] = std::fabs(e - r) <= sigma_multiplier * sigma ? 1 : 0;
  });
  SimulationReport report;
  report.name = "vote-oracle grid cells=" + std::to_string(cells.size());
  report.seed = seed;
  report.replications = replications;
  report.passed = true;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    report.voters.push_back(cells[c][2]);
    report.empirical.push_back(emp[c]);
    report.predicted.push_back(pred[c]);
    report.max_abs_deviation =
        std::max(report.max_abs_deviation, std::fabs(emp[c] - pred[c]));
    if (!ok[c]) report.passed = false;
  }
  report.pass_threshold = sigma_multiplier;
  return report;
}

/// Empirical check of the estimator-variance ordering: across replications
/// of n-example validation sets, the inference estimate varies no more than
/// the direct estimate (per v, with 3 sigma slack on the variance estimates).
inline SimulationReport verify_variance_ordering(const World& world, long n,
                                                 long replications,
                                                 std::uint64_t seed,
                                                 double sigma_multiplier = 3.0) {
  BasisMatrix basis = build_basis(world.m);
  const auto& voters = basis.voter_counts();
  const std::size_t nv = voters.size();
  // per replication, per v: direct and inference estimates
  std::vector<double> direct(static_cast<std::size_t>(replications) * nv);
  std::vector<double> infer(static_cast<std::size_t>(replications) * nv);

  parallel_for(static_cast<std::size_t>(replications), [&](std::size_t rep) {
    std::vector<long> counts(static_cast<std::size_t>(n));
    for (long j = 0; j < n; ++j) {
      CounterRng rng(seed, static_cast<std::uint64_t>(rep),
                     static_cast<std::uint64_t>(j), detail::kPurposeExample);
      counts[static_cast<std::size_t>(j)] = sample_example(world, rng);
    }
    for (std::size_t c = 0; c < nv; ++c) {
      long v = voters[c];
      long errs = 0;
      double rsum = 0.0;
      for (long j = 0; j < n; ++j) {
        CounterRng rng(seed ^ 0xd1ecULL, static_cast<std::uint64_t>(rep),
                       (static_cast<std::uint64_t>(j) << 16) |
                           static_cast<std::uint64_t>(v),
                       detail::kPurposeVote);
        long i = counts[static_cast<std::size_t>(j)];
        errs += simulate_vote(world.m, i, v, rng) ? 1 : 0;
        rsum += basis.at(i, v);
      }
      direct[rep * nv + c] = static_cast<double>(errs) / static_cast<double>(n);
      infer[rep * nv + c] = rsum / static_cast<double>(n);
    }
  });

  auto sample_variance = [&](const std::vector<double>& x, std::size_t c) {
    double mean = 0.0;
    for (long rep = 0; rep < replications; ++rep)
      mean += x[static_cast<std::size_t>(rep) * nv + c];
    mean /= static_cast<double>(replications);
    double var = 0.0;
    for (long rep = 0; rep < replications; ++rep) {
      double d = x[static_cast<std::size_t>(rep) * nv + c] - mean;
      var += d * d;
    }
    return var / static_cast<double>(replications - 1);
  };

  SimulationReport report;
  report.name = "variance-ordering m=" + std::to_string(world.m) +
                " n=" + std::to_string(n);
  report.seed = seed;
  report.replications = replications;
  report.passed = true;
  double rel_sigma = std::sqrt(2.0 / static_cast<double>(replications));
  for (std::size_t c = 0; c < nv; ++c) {
    double vd = sample_variance(direct, c);
    double vi = sample_variance(infer, c);
    report.voters.push_back(voters[c]);
    report.empirical.push_back(vi);
    report.predicted.push_back(vd);
    // variance estimates have sd ~ var * sqrt(2/R); allow slack on both
    double slack = sigma_multiplier * rel_sigma * (vd + vi);
    if (vi > vd + slack) report.passed = false;
    report.max_abs_deviation = std::max(report.max_abs_deviation, vi - vd);
  }
  report.pass_threshold = sigma_multiplier;
  return report;
}

}  // namespace votecount
