#pragma once

#include "sdsi/baseline.hpp"
#include "sdsi/oracle.hpp"
#include "sdsi/rational.hpp"
#include "sdsi/solver.hpp"
#include "sdsi/system.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sdsi {

enum class RunMode { stable_elide, delay_elide, no_elide, lsd };

const char* to_string(RunMode m);
RunMode parse_run_mode(const std::string& s);

struct ExperimentConfig {
  std::string m = "1";  // non-negative real, as given (kept verbatim for the CSV)
  Rational eta = Rational(1, 64);
  int radix = 2;
  RunMode mode = RunMode::stable_elide;
  int precision = 32;  // lsd total bits
  std::uint64_t seed = 1;
  bool strict_single_trigger = false;
  std::size_t max_iterations = 1'000'000;
  std::uint64_t max_digits = 1ULL << 32;
  bool verify = false;

  void validate() const;
};

// 1 - 2^-m, exact for integer m, otherwise rounded to a multiple of 2^-64.
Rational off_diagonal(const std::string& m);

// A_m = [[1, c], [c, 1]]; b uniform in [0, 1) as 64-bit dyadics from
// std::mt19937_64 seeded with `seed`.
std::pair<RationalMatrix, RationalVector> gen_system(const std::string& m, std::uint64_t seed);

struct CsvRow {
  std::string mode, m, eta, seed, k, D, k_hat, psi, digits_computed, digits_elided,
      residual_2norm, converged;
};

struct ExperimentSummary {
  std::size_t iterations = 0;
  std::uint64_t digits_computed = 0;
  std::uint64_t digits_elided = 0;
  std::uint64_t comparisons = 0;
  bool converged = false;
  std::string stop;
  // Comparator formulas accumulated over the run's trigger history.
  std::uint64_t prev_work_identical_total = 0;
  std::uint64_t emethod_stable_total = 0;
  bool emethod_applicable = false;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<CsvRow> rows;  // per iteration, then summary rows
  ExperimentSummary summary;
  std::optional<VerificationReport> report;
  std::optional<SolverTrace> trace;  // kept for elision modes
  std::string error;                 // non-empty when the run itself failed

  bool invariant_violation() const { return (report && !report->ok()) || !error.empty(); }
};

ExperimentResult run_experiment(const ExperimentConfig& config);

enum class SweepAxis { eta, m };

struct SweepPoint {
  std::string value;
  RunMode mode;
  ExperimentResult result;
};

// One run per (value, mode); runs execute concurrently, results are ordered by
// value then mode.
std::vector<SweepPoint> sweep(const ExperimentConfig& config_template, SweepAxis axis,
                              const std::vector<std::string>& values,
                              const std::vector<RunMode>& modes, unsigned threads = 0);

void write_csv_header(std::ostream& os);
void write_csv(std::ostream& os, const std::vector<CsvRow>& rows);

// Per-value ratio of stable- to delay-elided digits (where both are nonzero),
// their mean, and the ratio of totals.
struct ElisionRatios {
  std::vector<std::pair<std::string, double>> per_value;
  double mean_ratio = 0;
  double ratio_of_totals = 0;
  long long total_gap = 0;  // stable total - delay total
};
ElisionRatios elision_ratios(const std::vector<SweepPoint>& points);

}  // namespace sdsi
