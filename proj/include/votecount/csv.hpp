#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "votecount/bounds.hpp"
#include "votecount/construct.hpp"
#include "votecount/curves.hpp"
#include "votecount/estimate.hpp"

namespace votecount {
namespace csv {

/// 17 significant digits, enough for bit-exact double round-trips.
inline std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

struct ParseError : std::runtime_error {
  long line;
  ParseError(const std::string& msg, long line_number)
      : std::runtime_error("line " + std::to_string(line_number) + ": " + msg),
        line(line_number) {}
};

inline std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

// -- writers ---------------------------------------------------------------

/// Schema: i,v,r
inline std::string basis_csv(const BasisMatrix& basis) {
  std::ostringstream os;
  os << "i,v,r\n";
  for (long i = 0; i <= basis.m(); ++i)
    for (long v : basis.voter_counts())
      os << i << ',' << v << ',' << fmt(basis.at(i, v)) << '\n';
  return os.str();
}

/// Schema: v,error_rate
inline std::string curve_csv(const ErrorCurve& curve) {
  std::ostringstream os;
  os << "v,error_rate\n";
  for (std::size_t c = 0; c < curve.voters.size(); ++c)
    os << curve.voters[c] << ',' << fmt(curve.rates[c]) << '\n';
  return os.str();
}

/// Schema: v,lower,estimate,upper,method,delta,n
inline std::string band_csv(const ConfidenceBand& band) {
  std::ostringstream os;
  os << "v,lower,estimate,upper,method,delta,n\n";
  for (std::size_t c = 0; c < band.voters.size(); ++c)
    os << band.voters[c] << ',' << fmt(band.lower[c]) << ','
       << fmt(band.estimate[c]) << ',' << fmt(band.upper[c]) << ','
       << to_string(band.method) << ',' << fmt(band.delta) << ',' << band.n
       << '\n';
  return os.str();
}

/// One row per vmin. Support indices and weights are ';'-separated within
/// their fields.
/// Schema: vmin,gap,locally_optimal,globally_optimal,max_residual,support,weights
inline std::string certificates_csv(const std::vector<GapCertificate>& certs) {
  std::ostringstream os;
  os << "vmin,gap,locally_optimal,globally_optimal,max_residual,support,weights\n";
  for (const auto& cert : certs) {
    std::string support, weights;
    for (long i = 0; i <= cert.w.m(); ++i) {
      double wi = cert.w.w[static_cast<std::size_t>(i)];
      if (wi <= 1e-9) continue;
      if (!support.empty()) {
        support += ';';
        weights += ';';
      }
      support += std::to_string(i);
      weights += fmt(wi);
    }
    os << cert.vmin << ',' << fmt(cert.gap) << ','
       << (cert.locally_optimal ? 1 : 0) << ',' << (cert.globally_optimal ? 1 : 0)
       << ',' << fmt(cert.max_constraint_residual) << ',' << support << ','
       << weights << '\n';
  }
  return os.str();
}

/// Schema: vmin,v,error_rate — per-certificate curves (figure-2 style data).
inline std::string certificate_curves_csv(const std::vector<GapCertificate>& certs) {
  std::ostringstream os;
  os << "vmin,v,error_rate\n";
  for (const auto& cert : certs)
    for (std::size_t c = 0; c < cert.curve.voters.size(); ++c)
      os << cert.vmin << ',' << cert.curve.voters[c] << ','
         << fmt(cert.curve.rates[c]) << '\n';
  return os.str();
}

/// Histogram schema: error_count,frequency (integer counts).
inline std::string histogram_csv(const EmpiricalErrorCounts& counts) {
  std::ostringstream os;
  os << "error_count,frequency\n";
  for (long i = 0; i <= counts.m(); ++i)
    os << i << ',' << counts.k[static_cast<std::size_t>(i)] << '\n';
  return os.str();
}

/// Matrix schema: example_id,c0,...,c{m-1} with 0/1 entries.
inline std::string matrix_csv(const ValidationSample& sample) {
  if (!sample.has_matrix())
    throw std::invalid_argument("matrix_csv: sample has no matrix");
  std::ostringstream os;
  os << "example_id";
  for (long c = 0; c < sample.m; ++c) os << ",c" << c;
  os << '\n';
  const auto& rows = *sample.matrix;
  for (std::size_t j = 0; j < rows.size(); ++j) {
    os << j;
    for (std::uint8_t x : rows[j]) os << ',' << static_cast<int>(x);
    os << '\n';
  }
  return os.str();
}

// -- readers ---------------------------------------------------------------

inline long parse_long(const std::string& s, long line) {
  try {
    std::size_t pos = 0;
    long x = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return x;
  } catch (const std::exception&) {
    throw ParseError("expected an integer, got '" + s + "'", line);
  }
}

enum class SampleFormat { Matrix, Histogram };

/// Accepts either input schema; histogram input yields a counts-only sample
/// (m inferred from the largest error_count row).
inline ValidationSample read_sample_csv(std::istream& in) {
  std::string line;
  long lineno = 1;
  if (!std::getline(in, line)) throw ParseError("empty input", lineno);
  auto header = split_line(line);
  if (header.size() == 2 && header[0] == "error_count" &&
      header[1] == "frequency") {
    std::vector<long> k;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      auto f = split_line(line);
      if (f.size() != 2) throw ParseError("expected 2 fields", lineno);
      long i = parse_long(f[0], lineno);
      long freq = parse_long(f[1], lineno);
      if (i < 0 || freq < 0) throw ParseError("negative value", lineno);
      if (static_cast<std::size_t>(i) >= k.size())
        k.resize(static_cast<std::size_t>(i) + 1, 0);
      k[static_cast<std::size_t>(i)] += freq;
    }
    if (k.empty()) throw ParseError("histogram has no rows", lineno);
    long m = static_cast<long>(k.size()) - 1;
    if (m < 1) throw ParseError("histogram implies m < 1", lineno);
    std::vector<long> counts;
    for (std::size_t i = 0; i < k.size(); ++i)
      counts.insert(counts.end(), static_cast<std::size_t>(k[i]),
                    static_cast<long>(i));
    if (counts.empty()) throw ParseError("histogram has zero examples", lineno);
    return make_counts_sample(m, std::move(counts));
  }
  if (header.size() >= 2 && header[0] == "example_id") {
    const std::size_t m = header.size() - 1;
    std::vector<std::vector<std::uint8_t>> rows;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      auto f = split_line(line);
      if (f.size() != m + 1)
        throw ParseError("expected " + std::to_string(m + 1) + " fields, got " +
                             std::to_string(f.size()),
                         lineno);
      std::vector<std::uint8_t> row(m);
      for (std::size_t c = 0; c < m; ++c) {
        long x = parse_long(f[c + 1], lineno);
        if (x != 0 && x != 1)
          throw ParseError("error indicator must be 0 or 1", lineno);
        row[c] = static_cast<std::uint8_t>(x);
      }
      rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("matrix has no data rows", lineno);
    return ingest_error_matrix(std::move(rows));
  }
  throw ParseError(
      "unrecognized header; expected 'example_id,c0,...' or "
      "'error_count,frequency'",
      1);
}

inline ValidationSample read_sample_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  try {
    return read_sample_csv(in);
  } catch (const ParseError& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace csv
}  // namespace votecount
