#include "sdsi/baseline.hpp"

#include "sdsi/solver.hpp"

#include <algorithm>
#include <stdexcept>

namespace sdsi {

const char* to_string(LsdStop s) {
  switch (s) {
    case LsdStop::converged: return "converged";
    case LsdStop::stalled: return "non_convergence";
    case LsdStop::iteration_cap: return "iteration_cap";
    case LsdStop::overflow: return "overflow";
  }
  return "?";
}

FixedPointSpec FixedPointSpec::allocate(const SystemSpec& spec, int total_bits) {
  Rational bound = 1 + inf_norm(spec.c) / (1 - spec.g_norm);
  // ceil(log2(bound))
  long t = floor_log(bound, 2);
  if (pow_r(2, t) < bound) ++t;
  int int_bits = static_cast<int>(t) + 1;
  FixedPointSpec fp;
  fp.total_bits = total_bits;
  fp.frac_bits = total_bits - int_bits;
  return fp;
}

namespace {

using i128 = __int128;

i128 quantize(const Rational& v, int frac_bits) {
  Rational s = v * pow_r(2, frac_bits);
  Integer f = floor_rational(s);
  if (mpz_sizeinbase(f.get_mpz_t(), 2) > 120) throw std::overflow_error("constant too large");
  Integer hi = ::abs(f) >> 64;
  Integer lo = ::abs(f) - (hi << 64);
  unsigned __int128 u = (static_cast<unsigned __int128>(mpz_get_ui(hi.get_mpz_t())) << 64) |
                        mpz_get_ui(lo.get_mpz_t());
  i128 out = static_cast<i128>(u);
  return f < 0 ? -out : out;
}

i128 floor_shift(i128 v, int bits) {
  // Arithmetic shift floors in two's complement.
  return v >> bits;
}

Rational to_rational(i128 v, int frac_bits) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
  Integer hi(static_cast<unsigned long>(u >> 64));
  Integer lo(static_cast<unsigned long>(u & ~0ULL));
  Integer z = (hi << 64) + lo;
  if (neg) z = -z;
  Rational q(z);
  q *= pow_r(2, -frac_bits);
  q.canonicalize();
  return q;
}

}  // namespace

LsdResult lsd_solve(const RationalMatrix& A, const RationalVector& b, const Rational& eta,
                    const FixedPointSpec& fp, const LsdOptions& opt) {
  if (fp.total_bits < 2 || fp.total_bits > 62) throw std::invalid_argument("fixed point width out of range");
  if (fp.frac_bits < 0 || fp.frac_bits >= fp.total_bits) throw std::invalid_argument("bad frac_bits");
  SystemSpec spec = build_jacobi(A, b);
  const std::size_t n = spec.n;
  const int f = fp.frac_bits;
  const i128 lo = -(static_cast<i128>(1) << (fp.total_bits - 1));
  const i128 hi = (static_cast<i128>(1) << (fp.total_bits - 1)) - 1;

  LsdResult res;
  res.fp = fp;
  auto in_range = [&](i128 v) { return v >= lo && v <= hi; };

  std::vector<i128> G(n * n), c(n), x(n, 0), nx(n);
  for (std::size_t i = 0; i < n; ++i) {
    c[i] = quantize(spec.c[i], f);
    for (std::size_t j = 0; j < n; ++j) G[i * n + j] = quantize(spec.G(i, j), f);
  }
  for (std::size_t i = 0; i < n; ++i) {
    bool fits = in_range(c[i]);
    for (std::size_t j = 0; j < n; ++j) fits = fits && in_range(G[i * n + j]);
    if (!fits) {
      res.stop = LsdStop::overflow;
      return res;
    }
  }

  const Rational eta_sq = eta * eta;
  Rational best;
  std::size_t since_best = 0;
  auto current = [&] {
    RationalVector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = to_rational(x[i], f);
    return v;
  };

  for (std::size_t it = 0; it < opt.max_iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      i128 acc = c[i];
      for (std::size_t j = 0; j < n; ++j)
        if (G[i * n + j] != 0) acc += floor_shift(G[i * n + j] * x[j], f);
      if (!in_range(acc)) {
        res.stop = LsdStop::overflow;
        res.x = current();
        return res;
      }
      nx[i] = acc;
    }
    std::swap(x, nx);
    ++res.iterations;
    res.digit_ops += static_cast<std::uint64_t>(fp.total_bits) * n;
    RationalVector v = current();
    Rational rs = residual_sq(spec, v);
    res.residual_sq.push_back(rs);
    if (rs < eta_sq) {
      res.stop = LsdStop::converged;
      res.x = std::move(v);
      return res;
    }
    if (it == 0 || rs < best) {
      best = rs;
      since_best = 0;
    } else if (++since_best >= opt.stall_window) {
      res.stop = LsdStop::stalled;
      res.x = std::move(v);
      return res;
    }
  }
  res.stop = LsdStop::iteration_cap;
  res.x = current();
  return res;
}

LsdResult lsd_solve(const RationalMatrix& A, const RationalVector& b, const Rational& eta,
                    int total_bits, const LsdOptions& opt) {
  return lsd_solve(A, b, eta, FixedPointSpec::allocate(build_jacobi(A, b), total_bits), opt);
}

long prev_work_identical(long D, long delta, long k, long k_hat) {
  if (k < k_hat) throw std::domain_error("prev_work_identical requires k >= k_hat");
  return std::max(0L, D - delta * (k - k_hat + 1));
}

long emethod_stable(long D, long k, long k_hat) {
  if (k < k_hat) throw std::domain_error("emethod_stable requires k >= k_hat");
  return D + k - k_hat + 1;
}

bool emethod_applicable(const SystemSpec& spec, const RationalVector& b) {
  return spec.g_norm <= Rational(1, 2 * spec.radix) && inf_norm(b) < 1;
}

}  // namespace sdsi
