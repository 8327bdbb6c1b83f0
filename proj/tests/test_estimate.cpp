#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "votecount/estimate.hpp"
#include "votecount/rng.hpp"
#include "votecount/sim.hpp"

using namespace votecount;

namespace {

std::vector<std::vector<std::uint8_t>> random_matrix(long n, long m,
                                                     std::uint64_t seed,
                                                     double density) {
  std::vector<std::vector<std::uint8_t>> rows(static_cast<std::size_t>(n));
  CounterRng rng(seed, 0, 0, 42);
  for (auto& row : rows) {
    row.resize(static_cast<std::size_t>(m));
    for (auto& x : row) x = rng.uniform() < density ? 1 : 0;
  }
  return rows;
}

}  // namespace

TEST_CASE("error matrix ingestion") {
  auto zeros = std::vector<std::vector<std::uint8_t>>(3,
      std::vector<std::uint8_t>(4, 0));
  ValidationSample s0 = ingest_error_matrix(zeros);
  for (long c : s0.counts) CHECK(c == 0);

  auto ones = std::vector<std::vector<std::uint8_t>>(4,
      std::vector<std::uint8_t>(3, 1));
  ValidationSample s1 = ingest_error_matrix(ones);
  CHECK(s1.counts == std::vector<long>{3, 3, 3, 3});

  auto rows = random_matrix(100, 7, 5, 0.4);
  ValidationSample sr = ingest_error_matrix(rows);
  for (std::size_t j = 0; j < rows.size(); ++j) {
    long c = 0;
    for (auto x : rows[j]) c += x;
    CHECK(sr.counts[j] == c);
  }

  auto ragged = zeros;
  ragged[1].pop_back();
  CHECK_THROWS_AS(ingest_error_matrix(ragged), std::invalid_argument);
  auto nonbinary = zeros;
  nonbinary[0][0] = 2;
  CHECK_THROWS_AS(ingest_error_matrix(nonbinary), std::invalid_argument);
}

TEST_CASE("direct estimator") {
  SECTION("full vote is deterministic") {
    auto rows = random_matrix(200, 7, 11, 0.5);
    ValidationSample sample = ingest_error_matrix(rows);
    DirectEstimate est = direct_estimate(sample, 7, 123);
    long majority_rows = 0;
    for (long c : sample.counts)
      if (2 * c > 7) ++majority_rows;
    CHECK(est.errors == majority_rows);
    // independent of the seed
    CHECK(direct_estimate(sample, 7, 999).errors == majority_rows);
  }
  SECTION("single voter matches expectation within 3 sigma") {
    auto rows = random_matrix(4000, 9, 17, 0.3);
    ValidationSample sample = ingest_error_matrix(rows);
    double expect = 0.0;
    for (long c : sample.counts) expect += static_cast<double>(c) / 9.0;
    expect /= static_cast<double>(sample.n());
    DirectEstimate est = direct_estimate(sample, 1, 7);
    double sigma = std::sqrt(expect * (1.0 - expect) / sample.n());
    CHECK(std::fabs(est.error_rate - expect) <= 3.0 * sigma);
  }
  SECTION("unanimous rows give the same estimate for every v") {
    std::vector<std::vector<std::uint8_t>> rows;
    for (int j = 0; j < 30; ++j)
      rows.push_back(std::vector<std::uint8_t>(5, j % 3 == 0 ? 1 : 0));
    ValidationSample sample = ingest_error_matrix(rows);
    for (long v = 1; v <= 5; v += 2)
      CHECK(direct_estimate(sample, v, 3).error_rate ==
            Catch::Approx(10.0 / 30.0).margin(1e-15));
  }
  SECTION("counts-only sample rejected") {
    ValidationSample sample = make_counts_sample(5, {1, 2, 3});
    CHECK_THROWS_AS(direct_estimate(sample, 3, 0), std::invalid_argument);
  }
  SECTION("deterministic given seed") {
    auto rows = random_matrix(50, 9, 77, 0.4);
    ValidationSample sample = ingest_error_matrix(rows);
    CHECK(direct_estimate(sample, 5, 42).outcomes ==
          direct_estimate(sample, 5, 42).outcomes);
  }
}

TEST_CASE("inference estimator") {
  BasisMatrix basis = build_basis(5);
  SECTION("all-zero counts give the zero curve") {
    ValidationSample sample = make_counts_sample(5, {0, 0, 0, 0});
    ErrorCurve curve = inference_estimate(sample, basis);
    for (double r : curve.rates) CHECK(r == 0.0);
  }
  SECTION("single example with i=m gives the one curve") {
    ValidationSample sample = make_counts_sample(5, {5});
    ErrorCurve curve = inference_estimate(sample, basis);
    for (double r : curve.rates) CHECK(r == 1.0);
  }
  SECTION("counts (1,1,3,3) mix rows 1 and 3 equally") {
    ValidationSample sample = make_counts_sample(5, {1, 1, 3, 3});
    ErrorCurve curve = inference_estimate(sample, basis);
    for (long v = 1; v <= 5; v += 2)
      CHECK(curve.at(v) ==
            Catch::Approx(0.5 * basis.at(1, v) + 0.5 * basis.at(3, v))
                .margin(1e-14));
  }
  SECTION("per-example and histogram forms agree exactly") {
    BasisMatrix b9 = build_basis(9);
    CounterRng rng(31, 0, 0, 0);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<long> counts;
      for (int j = 0; j < 57; ++j)
        counts.push_back(static_cast<long>(rng.below(10)));
      ValidationSample sample = make_counts_sample(9, counts);
      ErrorCurve curve = inference_estimate(sample, b9);
      for (std::size_t c = 0; c < curve.voters.size(); ++c) {
        double per_example = 0.0;
        for (long i : counts) per_example += b9.at(i, curve.voters[c]);
        per_example /= static_cast<double>(counts.size());
        CHECK(curve.rates[c] == Catch::Approx(per_example).margin(1e-12));
      }
    }
  }
}

TEST_CASE("voter selection") {
  SECTION("all-zero counts select v=1 by tie-break") {
    BasisMatrix basis = build_basis(7);
    ValidationSample sample = make_counts_sample(7, {0, 0, 0});
    CHECK(select_voters(sample, basis, EstimatorMethod::Inference).v == 1);
  }
  SECTION("a single (m+1)/2 example selects v=1") {
    BasisMatrix basis = build_basis(11);
    ValidationSample sample = make_counts_sample(11, {6});
    // the basis row for i=(m+1)/2 is increasing in v, so fewest voters win
    CHECK(select_voters(sample, basis, EstimatorMethod::Inference).v == 1);
  }
  SECTION("inference recovers vmin of a generating world at large n") {
    const long m = 101, vmin = 7;
    BasisMatrix basis = build_basis(m);
    ErrorCountDistribution truth = theorem4_distribution(m, vmin, basis);
    World world = make_world(m, truth, 515);
    std::vector<long> counts(100000);
    for (std::size_t j = 0; j < counts.size(); ++j) {
      CounterRng rng(world.seed, 0, j, 1);
      counts[j] = sample_example(world, rng);
    }
    ValidationSample sample = make_counts_sample(m, std::move(counts));
    CHECK(select_voters(sample, basis, EstimatorMethod::Inference).v == vmin);
  }
}

TEST_CASE("analytic variance comparison") {
  BasisMatrix b5 = build_basis(5);
  SECTION("point mass at zero errors: both zero") {
    auto vc = variance_comparison(ErrorCountDistribution::point_mass(5, 0), b5, 3);
    CHECK(vc.direct == 0.0);
    CHECK(vc.inference == 0.0);
  }
  SECTION("all r in {0,1}: variances equal") {
    // at v=5, rows 0..2 give r=0 and rows 3..5 give r=1
    std::vector<double> w{0.25, 0.0, 0.25, 0.0, 0.5, 0.0};
    auto vc = variance_comparison(ErrorCountDistribution(w), b5, 5);
    CHECK(vc.direct == Catch::Approx(vc.inference).margin(1e-14));
  }
  SECTION("hand-computed example") {
    std::vector<double> w{0.5, 0.0, 0.5, 0.0, 0.0, 0.0};
    auto vc = variance_comparison(ErrorCountDistribution(w), b5, 3);
    CHECK(vc.mean == Catch::Approx(0.15).margin(1e-14));
    CHECK(vc.direct == Catch::Approx(0.15 * 0.85).margin(1e-14));
    CHECK(vc.inference == Catch::Approx(0.5 * 0.09 - 0.0225).margin(1e-14));
  }
  SECTION("ordering holds for 1000 random (w, v) pairs at m <= 25") {
    CounterRng rng(2717, 0, 0, 0);
    for (int trial = 0; trial < 1000; ++trial) {
      long m = 2 + static_cast<long>(rng.below(24));
      BasisMatrix basis = build_basis(m);
      std::vector<double> w(static_cast<std::size_t>(m) + 1);
      double s = 0.0;
      for (auto& x : w) s += (x = rng.uniform());
      for (auto& x : w) x /= s;
      long v = 1 + 2 * static_cast<long>(rng.below(
                      static_cast<std::uint64_t>((m + 1) / 2)));
      auto vc = variance_comparison(ErrorCountDistribution(w), basis, v);
      CHECK(vc.inference <= vc.direct + 1e-12);
      // strict when some r_i is interior with positive weight
      bool interior = false;
      for (long i = 0; i <= m; ++i) {
        double r = basis.at(i, v);
        if (w[static_cast<std::size_t>(i)] > 0.0 && r > 0.0 && r < 1.0)
          interior = true;
      }
      if (interior) CHECK(vc.inference < vc.direct);
    }
  }
}
