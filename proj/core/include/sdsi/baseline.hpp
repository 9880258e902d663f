#pragma once

#include "sdsi/rational.hpp"
#include "sdsi/system.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace sdsi {

// Two's-complement fixed point with truncating (floor) arithmetic.
struct FixedPointSpec {
  int total_bits = 32;
  int frac_bits = 24;

  // Integer bits = ceil(log2(1 + ||M^-1 b|| / (1 - g))) + 1, the rest fractional.
  static FixedPointSpec allocate(const SystemSpec& spec, int total_bits);
};

enum class LsdStop { converged, stalled, iteration_cap, overflow };
const char* to_string(LsdStop s);

struct LsdResult {
  LsdStop stop = LsdStop::iteration_cap;
  FixedPointSpec fp;
  RationalVector x;                   // final iterate
  std::vector<Rational> residual_sq;  // per iteration
  std::size_t iterations = 0;
  std::uint64_t digit_ops = 0;        // p per element per iteration
  bool converged() const { return stop == LsdStop::converged; }
};

struct LsdOptions {
  std::size_t max_iterations = 100000;
  std::size_t stall_window = 16;
};

LsdResult lsd_solve(const RationalMatrix& A, const RationalVector& b, const Rational& eta,
                    const FixedPointSpec& fp, const LsdOptions& opt = {});
// Allocates the fixed-point split from total_bits.
LsdResult lsd_solve(const RationalMatrix& A, const RationalVector& b, const Rational& eta,
                    int total_bits, const LsdOptions& opt = {});

// Digits guaranteed identical (not stable) under online-delay reasoning.
long prev_work_identical(long D, long delta, long k, long k_hat);
// Stable digits of the E-method: one per iteration.
long emethod_stable(long D, long k, long k_hat);
bool emethod_applicable(const SystemSpec& spec, const RationalVector& b);

}  // namespace sdsi
