#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "votecount/csv.hpp"

using namespace votecount;

TEST_CASE("basis csv shape") {
  std::string out = csv::basis_csv(build_basis(1));
  CHECK(out == "i,v,r\n0,1,0\n1,1,1\n");

  std::string big = csv::basis_csv(build_basis(101));
  long lines = std::count(big.begin(), big.end(), '\n');
  CHECK(lines == 1 + 102 * 51);
}

TEST_CASE("matrix csv round-trips bit-exactly") {
  std::vector<std::vector<std::uint8_t>> rows{
      {1, 0, 1, 0, 0}, {0, 0, 0, 0, 0}, {1, 1, 1, 1, 1}, {0, 1, 0, 1, 0}};
  ValidationSample sample = ingest_error_matrix(rows);
  std::string text = csv::matrix_csv(sample);
  std::istringstream in(text);
  ValidationSample back = csv::read_sample_csv(in);
  REQUIRE(back.has_matrix());
  CHECK(*back.matrix == rows);
  CHECK(back.counts == sample.counts);
  CHECK(csv::matrix_csv(back) == text);
}

TEST_CASE("histogram csv round-trips") {
  EmpiricalErrorCounts counts;
  counts.n = 12;
  counts.k = {3, 0, 4, 5};
  std::string text = csv::histogram_csv(counts);
  std::istringstream in(text);
  ValidationSample back = csv::read_sample_csv(in);
  CHECK_FALSE(back.has_matrix());
  CHECK(back.m == 3);
  EmpiricalErrorCounts again = tally_counts(back);
  CHECK(again.k == counts.k);
  CHECK(csv::histogram_csv(again) == text);
}

TEST_CASE("parse errors carry line numbers") {
  {
    std::istringstream in("example_id,c0,c1\n0,1,2\n");
    CHECK_THROWS_WITH(csv::read_sample_csv(in),
                      Catch::Matchers::ContainsSubstring("line 2"));
  }
  {
    std::istringstream in("example_id,c0,c1\n0,1\n");
    CHECK_THROWS_WITH(csv::read_sample_csv(in),
                      Catch::Matchers::ContainsSubstring("line 2"));
  }
  {
    std::istringstream in("bogus,header\n");
    CHECK_THROWS_AS(csv::read_sample_csv(in), csv::ParseError);
  }
  {
    std::istringstream in("error_count,frequency\n2,x\n");
    CHECK_THROWS_WITH(csv::read_sample_csv(in),
                      Catch::Matchers::ContainsSubstring("integer"));
  }
}

TEST_CASE("curve and band csv emit 17-significant-digit values") {
  BasisMatrix basis = build_basis(5);
  ErrorCurve curve = error_curve(
      ErrorCountDistribution({0.15, 0.25, 0.2, 0.2, 0.1, 0.1}), basis);
  std::string text = csv::curve_csv(curve);
  CHECK(text.rfind("v,error_rate\n", 0) == 0);

  // values parse back to identical doubles
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  std::size_t c = 0;
  while (std::getline(in, line)) {
    auto fields = csv::split_line(line);
    REQUIRE(fields.size() == 2);
    CHECK(std::stod(fields[1]) == curve.rates[c]);
    ++c;
  }
  CHECK(c == curve.rates.size());
}
