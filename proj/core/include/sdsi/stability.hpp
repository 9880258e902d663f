#pragma once

#include "sdsi/rational.hpp"
#include "sdsi/sd_number.hpp"
#include "sdsi/system.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace sdsi {

// 2 g / (1 - g) * r^-D: bound on ||x^(k+1) - x*|| once x^(k), x^(k+1) share D MSDs.
Rational residue_bound(long D, const Rational& g_norm, int r);

// Constants behind the stable-digit count.
struct GrowthModel {
  int radix = 2;
  Rational g_norm;
  Enclosure alpha;  // log_r((1 - g)/2)
  Enclosure beta;   // log_r(g)

  static GrowthModel from(const SystemSpec& spec);
  static GrowthModel from(const Rational& g_norm, int radix);
};

// floor(alpha - n * beta), exact: decided on the enclosures when they agree,
// otherwise by comparing r^t with (1 - g) / (2 g^n) in integers.
long growth_floor(const GrowthModel& gm, long n);

// D + floor(alpha - (k - k_hat + 1) beta) - 1, clamped to [0, cap] when a cap is given.
long psi(long D, long k, long k_hat, const GrowthModel& gm, std::optional<long> cap = {});

// min over elements of the common MSD count; `comparisons` accumulates digit comparisons.
std::size_t detect(const std::vector<SDNumber>& prev, const std::vector<SDNumber>& curr,
                   std::size_t* comparisons = nullptr);

}  // namespace sdsi
