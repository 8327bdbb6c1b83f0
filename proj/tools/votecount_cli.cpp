// Command-line front end: basis tables, max-gap constructions, voter-count
// selection on validation data, and seeded simulation verification.

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "votecount/votecount.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInputError = 2;

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-")
    std::cout << content;
  else
    votecount::csv::write_file(path, content);
}

int run_basis(long m, const std::string& out) {
  votecount::BasisMatrix basis = votecount::build_basis(m);
  emit(out, votecount::csv::basis_csv(basis));
  return kExitOk;
}

int run_construct(long m, double p, double cap, const std::string& method,
                  std::vector<long> vmins, const std::string& out,
                  const std::string& curves_out) {
  votecount::BasisMatrix basis = votecount::build_basis(m);
  if (vmins.empty()) {
    long top = method == "theorem4" ? m : m - 2;
    for (long v = 1; v <= top; v += 2) vmins.push_back(v);
  }
  std::vector<votecount::GapCertificate> certs;
  for (long vmin : vmins) {
    try {
      if (method == "theorem4") {
        votecount::GapCertificate cert;
        cert.vmin = vmin;
        cert.w = votecount::theorem4_distribution(m, vmin, basis);
        cert.curve = votecount::error_curve(cert.w, basis);
        cert.gap = cert.curve.at(m) - cert.curve.at(vmin);
        cert.locally_optimal = true;
        cert.globally_optimal = cert.curve.argmin_v == vmin;
        certs.push_back(std::move(cert));
      } else {
        certs.push_back(votecount::max_gap_lp(basis, vmin, p, cap));
      }
    } catch (const votecount::MaxGapInfeasible& e) {
      std::cerr << "vmin=" << vmin << ": " << e.what() << "\n";
      for (const auto& c : e.violated) std::cerr << "  constraint: " << c << "\n";
    }
  }
  emit(out, votecount::csv::certificates_csv(certs));
  if (!curves_out.empty())
    votecount::csv::write_file(curves_out,
                               votecount::csv::certificate_curves_csv(certs));
  return kExitOk;
}

int run_select(const std::string& input, const std::string& method,
               const std::string& band_method, double delta,
               std::uint64_t seed, const std::string& out) {
  votecount::ValidationSample sample = votecount::csv::read_sample_file(input);
  votecount::BasisMatrix basis = votecount::build_basis(sample.m);
  auto est_method = method == "direct" ? votecount::EstimatorMethod::Direct
                                       : votecount::EstimatorMethod::Inference;
  votecount::VoterSelection sel =
      votecount::select_voters(sample, basis, est_method, seed);

  votecount::ConfidenceBand band;
  if (band_method == "direct-hoeffding") {
    auto curve = est_method == votecount::EstimatorMethod::Direct
                     ? sel.curve
                     : votecount::direct_estimate_curve(sample, seed);
    band = votecount::direct_hoeffding_band(curve, sample.n(), sample.m, delta);
  } else if (band_method == "box-lp") {
    band = votecount::inference_box_lp_band(votecount::tally_counts(sample),
                                            basis, delta);
  } else {
    band = votecount::inference_hoeffding_band(
        votecount::inference_estimate(sample, basis), sample.n(), sample.m,
        delta);
  }

  // side-by-side width comparison: binomial-inversion box-LP pays a 2(m+1)
  // delta split where the Hoeffding band pays (m+1); neither dominates
  double hoeff_width =
      2.0 * votecount::hoeffding_margin(sample.n(), sample.m, delta);
  double box_width = 0.0;
  {
    votecount::ConfidenceBand box_band = votecount::inference_box_lp_band(
        votecount::tally_counts(sample), basis, delta);
    for (std::size_t c = 0; c < box_band.voters.size(); ++c)
      box_width =
          std::max(box_width, box_band.upper[c] - box_band.lower[c]);
  }

  std::ostringstream os;
  os << "# selected_v=" << sel.v << " method=" << method
     << " band=" << band_method << " delta=" << votecount::csv::fmt(delta)
     << " n=" << sample.n() << " m=" << sample.m << " seed=" << seed << "\n";
  os << "# band_widths hoeffding=" << votecount::csv::fmt(hoeff_width)
     << " box_lp_max=" << votecount::csv::fmt(box_width) << "\n";
  os << votecount::csv::band_csv(band);
  emit(out, os.str());
  return kExitOk;
}

int run_verify(const std::string& suite, long m, double delta,
               std::uint64_t seed, long replications, double sigma,
               const std::string& out) {
  std::vector<votecount::SimulationReport> reports;

  if (suite == "theorem1" || suite == "all") {
    long reps = replications > 0 ? replications : 200000;
    reports.push_back(votecount::verify_theorem1(3, 0.1, reps, seed, sigma));
    reports.push_back(votecount::verify_theorem1(101, 0.3, reps, seed, sigma));
  }
  if (suite == "coverage" || suite == "all") {
    long mm = m > 0 ? m : 11;
    long reps = replications > 0 ? replications : 2000;
    votecount::CounterRng wrng(seed, 0, 0, 99);
    std::vector<double> w(static_cast<std::size_t>(mm) + 1);
    double s = 0.0;
    for (auto& x : w) s += (x = wrng.uniform());
    for (auto& x : w) x /= s;
    votecount::World world =
        votecount::make_world(mm, votecount::ErrorCountDistribution(w), seed);
    for (auto method : {votecount::BandMethod::DirectHoeffding,
                        votecount::BandMethod::InferenceHoeffding,
                        votecount::BandMethod::InferenceBoxLp})
      reports.push_back(votecount::coverage_experiment(world, 500, delta, method,
                                                       reps, seed, sigma));
  }
  if (suite == "variance" || suite == "all") {
    long mm = m > 0 ? m : 11;
    long reps = replications > 0 ? replications : 10000;
    votecount::CounterRng wrng(seed, 0, 0, 98);
    std::vector<double> w(static_cast<std::size_t>(mm) + 1);
    double s = 0.0;
    for (auto& x : w) s += (x = wrng.uniform());
    for (auto& x : w) x /= s;
    votecount::World world =
        votecount::make_world(mm, votecount::ErrorCountDistribution(w), seed);
    reports.push_back(
        votecount::verify_variance_ordering(world, 100, reps, seed, sigma));
  }
  if (suite == "oracle" || suite == "all") {
    long reps = replications > 0 ? replications : 100000;
    votecount::CounterRng grng(seed, 0, 0, 97);
    std::vector<std::array<long, 3>> cells;
    for (int c = 0; c < 50; ++c) {
      long mm = 3 + 2 * static_cast<long>(grng.below(15));  // odd in [3,31]
      long i = static_cast<long>(grng.below(static_cast<std::uint64_t>(mm + 1)));
      long v = 1 + 2 * static_cast<long>(grng.below(
                       static_cast<std::uint64_t>((mm + 1) / 2)));
      cells.push_back({mm, i, v});
    }
    reports.push_back(votecount::verify_vote_oracle(cells, reps, seed, sigma));
  }
  if (reports.empty()) {
    std::cerr << "unknown suite '" << suite
              << "' (expected theorem1|coverage|variance|oracle|all)\n";
    return kExitInputError;
  }

  std::ostringstream os;
  bool all_passed = true;
  for (const auto& r : reports) {
    std::cout << r.summary() << "\n";
    os << r.to_csv();
    if (!r.passed) all_passed = false;
  }
  if (!out.empty()) votecount::csv::write_file(out, os.str());
  return all_passed ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Voter-count analysis for subset-voting ensembles"};
  app.require_subcommand(1);

  long m = 101;
  double delta = 0.05;
  double p = 0.3;
  double all_vote_cap = 0.5;
  std::uint64_t seed = 0;
  long replications = 0;
  double tolerance = 3.0;
  std::string input, output, curves_output;
  std::string method, band_method = "inference-hoeffding", suite = "all";
  std::vector<long> vmins;

  auto* basis_cmd = app.add_subcommand("basis", "Emit the r(m,i,v) table as CSV");
  basis_cmd->add_option("--m", m, "ensemble size");
  basis_cmd->add_option("--output,-o", output, "output path ('-' for stdout)");

  auto* construct_cmd = app.add_subcommand(
      "construct", "Distributions making each vmin optimal (LP or explicit)");
  construct_cmd->add_option("--m", m, "ensemble size");
  construct_cmd->add_option("--p", p, "average classifier error rate");
  construct_cmd->add_option("--all-vote-cap", all_vote_cap,
                            "cap on the all-voting error rate");
  construct_cmd->add_option("--vmin", vmins, "specific vmin values (default: all)");
  construct_cmd->add_option("--method", method, "lp (default) or theorem4");
  construct_cmd->add_option("--output,-o", output, "certificate CSV path");
  construct_cmd->add_option("--curves-output", curves_output,
                            "per-vmin curve CSV path");

  auto* select_cmd = app.add_subcommand(
      "select", "Select a voter count from validation data");
  select_cmd->add_option("--input,-i", input, "matrix or histogram CSV")
      ->required();
  select_cmd->add_option("--method", method, "direct or inference (default)");
  select_cmd->add_option("--band", band_method,
                         "direct-hoeffding, inference-hoeffding, box-lp");
  select_cmd->add_option("--delta", delta, "band failure probability");
  select_cmd->add_option("--seed", seed, "rng seed (direct estimator)");
  select_cmd->add_option("--output,-o", output, "output path ('-' for stdout)");

  auto* verify_cmd =
      app.add_subcommand("verify", "Run seeded simulation verification suites");
  verify_cmd->add_option("--suite", suite,
                         "theorem1, coverage, variance, oracle, or all");
  verify_cmd->add_option("--m", m, "ensemble size (coverage/variance suites)");
  verify_cmd->add_option("--delta", delta, "band failure probability");
  verify_cmd->add_option("--seed", seed, "rng seed");
  verify_cmd->add_option("--replications", replications,
                         "replication count (0 = suite default)");
  verify_cmd->add_option("--tolerance", tolerance,
                         "statistical envelope in sigmas");
  verify_cmd->add_option("--output,-o", output, "report CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (basis_cmd->parsed()) return run_basis(m, output);
    if (construct_cmd->parsed())
      return run_construct(m, p, all_vote_cap, method, vmins, output,
                           curves_output);
    if (select_cmd->parsed())
      return run_select(input, method.empty() ? "inference" : method,
                        band_method, delta, seed, output);
    if (verify_cmd->parsed()) {
      long cov_m = verify_cmd->count("--m") ? m : 0;
      return run_verify(suite, cov_m, delta, seed, replications, tolerance,
                        output);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitOk;
}
