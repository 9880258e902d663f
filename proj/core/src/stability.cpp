#include "sdsi/stability.hpp"

#include <algorithm>
#include <stdexcept>

namespace sdsi {

Rational residue_bound(long D, const Rational& g_norm, int r) {
  if (g_norm >= 1 || g_norm < 0) throw std::domain_error("residue_bound requires 0 <= g < 1");
  if (D < 0) throw std::domain_error("residue_bound requires D >= 0");
  Rational q = 2 * g_norm / (1 - g_norm) * pow_r(r, -D);
  q.canonicalize();
  return q;
}

GrowthModel GrowthModel::from(const SystemSpec& spec) {
  if (!spec.beta) throw std::domain_error("growth model undefined for ||G|| = 0");
  return GrowthModel{spec.radix, spec.g_norm, spec.alpha, *spec.beta};
}

GrowthModel GrowthModel::from(const Rational& g_norm, int radix) {
  if (g_norm <= 0 || g_norm >= 1) throw std::domain_error("growth model requires 0 < g < 1");
  return GrowthModel{radix, g_norm, log_enclosure((1 - g_norm) / 2, radix),
                     log_enclosure(g_norm, radix)};
}

namespace {

long floor_long(const Rational& q) { return floor_rational(q).get_si(); }

// r^t <= (1 - g) / (2 g^n)  <=>  r^t * 2 * p^n <= (q - p) * q^(n-1)  for g = p/q.
bool power_below(int r, long t, const Rational& g, long n) {
  const Integer& p = g.get_num();
  const Integer& q = g.get_den();
  Integer pn, qn;
  mpz_pow_ui(pn.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(n));
  mpz_pow_ui(qn.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(n));
  // Multiply both sides by q to keep integers: r^t * 2 p^n * q <= (q - p) q^n.
  Integer lhs = 2 * pn * q;
  Integer rhs = (q - p) * qn;
  if (t >= 0) lhs *= ipow(r, static_cast<unsigned long>(t));
  else rhs *= ipow(r, static_cast<unsigned long>(-t));
  return lhs <= rhs;
}

}  // namespace

long growth_floor(const GrowthModel& gm, long n) {
  if (n < 0) throw std::domain_error("growth_floor requires n >= 0");
  Rational lo = gm.alpha.lo - n * gm.beta.hi;
  Rational hi = gm.alpha.hi - n * gm.beta.lo;
  long flo = floor_long(lo), fhi = floor_long(hi);
  if (flo == fhi) return flo;
  for (long t = fhi; t > flo; --t)
    if (power_below(gm.radix, t, gm.g_norm, n)) return t;
  return flo;
}

long psi(long D, long k, long k_hat, const GrowthModel& gm, std::optional<long> cap) {
  if (k < k_hat) throw std::domain_error("psi requires k >= k_hat");
  long v = D + growth_floor(gm, k - k_hat + 1) - 1;
  if (cap) v = std::clamp(v, 0L, *cap);
  return v;
}

std::size_t detect(const std::vector<SDNumber>& prev, const std::vector<SDNumber>& curr,
                   std::size_t* comparisons) {
  if (prev.size() != curr.size() || prev.empty()) throw std::invalid_argument("detect: shape mismatch");
  std::size_t D = SIZE_MAX;
  for (std::size_t j = 0; j < prev.size(); ++j) {
    std::size_t c = common_msd_count(prev[j], curr[j]);
    if (comparisons) *comparisons += std::min(c + 1, prev[j].size());
    D = std::min(D, c);
  }
  return D;
}

}  // namespace sdsi
