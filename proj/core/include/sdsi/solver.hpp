#pragma once

#include "sdsi/linear_online.hpp"
#include "sdsi/rational.hpp"
#include "sdsi/sd_number.hpp"
#include "sdsi/stability.hpp"
#include "sdsi/system.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sdsi {

enum class ElisionMode {
  stable,  // skip digits proven stable by the growth model
  delay,   // skip digits the online delay guarantees identical to the previous approximant
  none,    // compute everything (inference still runs and is recorded)
};

const char* to_string(ElisionMode m);
ElisionMode parse_elision_mode(const std::string& s);

struct SolverConfig {
  ElisionMode mode = ElisionMode::stable;
  bool strict_single_trigger = false;
  int guard_digits = 8;
  std::optional<int> int_len;   // default: smallest w with r^(w-1) >= iterate bound
  std::optional<int> frac_len;  // default: ceil(-log_r eta) + guard_digits
  std::size_t max_iterations = 1'000'000;
  std::uint64_t max_digits = 1ULL << 32;  // stored-digit cap across the history
  std::optional<RationalVector> x0;       // default 0
  int delta_mul = 3;
  int delta_add = 2;
};

struct WorkMetrics {
  std::uint64_t digits_computed = 0;
  std::uint64_t digits_elided = 0;
  std::uint64_t comparisons = 0;
  std::uint64_t iterations = 0;
};

// One generated approximant x^(k), k >= 1.
struct IterationRecord {
  std::size_t k = 0;
  std::size_t D = 0;                  // common MSDs of x^(k-1), x^(k)
  std::optional<std::size_t> k_hat;   // current trigger
  std::size_t D_trigger = 0;          // D at the trigger
  long psi = 0;                       // digits of x^(k) declared stable
  std::uint64_t digits_computed = 0;
  std::uint64_t digits_elided = 0;
  std::uint64_t comparisons = 0;
  Rational residual_sq;               // ||A x^(k) - b||_2^2
};

enum class StopReason { converged, iteration_cap, memory_cap, precision_floor };
const char* to_string(StopReason s);

struct SolverTrace {
  ElisionMode mode = ElisionMode::stable;
  bool strict_single_trigger = false;
  int radix = 2;
  int int_len = 1;
  int frac_len = 0;
  int delay = 0;  // datapath delay of a row
  Rational eta;
  std::vector<std::vector<SDNumber>> approximants;  // x^(0) .. x^(K)
  std::vector<IterationRecord> records;              // records[k-1] describes x^(k)
  WorkMetrics work;
  StopReason stop = StopReason::iteration_cap;

  bool converged() const { return stop == StopReason::converged; }
  std::size_t iterations() const { return records.size(); }
  std::size_t total_digits() const { return static_cast<std::size_t>(int_len + frac_len); }
  // Digits declared stable in x^(k).
  long psi_of(std::size_t k) const { return k == 0 ? 0 : records[k - 1].psi; }
};

struct SolveResult {
  std::vector<SDNumber> solution;
  SolverTrace trace;
  bool converged() const { return trace.converged(); }
};

// Jacobi-style stationary iteration over online digit streams.
class Solver {
 public:
  Solver(const SystemSpec& spec, Rational eta, SolverConfig config = {});

  const SolverTrace& trace() const { return trace_; }
  const std::vector<SDNumber>& current() const { return trace_.approximants.back(); }
  std::size_t k() const { return trace_.records.size(); }

  // Produces the next approximant; returns false once a stop condition holds.
  bool iterate();
  bool terminated() const { return done_; }

  SolveResult finish() &&;

 private:
  std::size_t elision_count() const;
  void update_trigger(IterationRecord& rec);

  SystemSpec spec_;
  SolverConfig cfg_;
  DigitSet ds_;
  std::optional<GrowthModel> growth_;
  std::vector<LinearOnlineOperator> rows_;
  std::vector<std::vector<std::size_t>> row_inputs_;
  SolverTrace trace_;
  Rational eta_sq_;
  std::optional<std::size_t> k_hat_;
  std::size_t D_hat_ = 0;
  bool done_ = false;
};

// Row datapath delay: const_mul per off-diagonal term, adder tree, const_add.
int row_datapath_delay(std::size_t terms, int delta_mul, int delta_add);

// Default working lengths.
int default_int_len(const SystemSpec& spec, const RationalVector& x0);
int default_frac_len(const Rational& eta, int radix, int guard_digits);

Rational residual_sq(const SystemSpec& spec, const RationalVector& x);
bool terminate(const std::vector<SDNumber>& x, const SystemSpec& spec, const Rational& eta);
RationalVector values(const std::vector<SDNumber>& x);

SolveResult solve(const SystemSpec& spec, const Rational& eta, const SolverConfig& config = {});

}  // namespace sdsi
