#include "sdsi/rational.hpp"

#include <mpfr.h>

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace sdsi {

Integer ipow(int r, unsigned long e) {
  Integer out;
  mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(r), e);
  return out;
}

Rational pow_r(int r, long e) {
  if (e >= 0) return Rational(ipow(r, static_cast<unsigned long>(e)));
  Rational q(Integer(1), ipow(r, static_cast<unsigned long>(-e)));
  return q;
}

Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

Integer floor_rational(const Rational& q) {
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

long floor_log(const Rational& q, int r) {
  if (q <= 0) throw std::domain_error("floor_log of non-positive value");
  // Bit-length estimate, then correct by exact comparison.
  long nb = static_cast<long>(mpz_sizeinbase(q.get_num_mpz_t(), 2)) -
            static_cast<long>(mpz_sizeinbase(q.get_den_mpz_t(), 2));
  long t = static_cast<long>(std::floor(static_cast<double>(nb) / std::log2(r)));
  while (pow_r(r, t) > q) --t;
  while (pow_r(r, t + 1) <= q) ++t;
  return t;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

Rational parse_decimal(const std::string& s) {
  std::size_t epos = s.find_first_of("eE");
  std::string mant = s.substr(0, epos);
  long exp10 = 0;
  if (epos != std::string::npos) exp10 = std::stol(s.substr(epos + 1));
  bool neg = false;
  std::size_t i = 0;
  if (i < mant.size() && (mant[i] == '-' || mant[i] == '+')) {
    neg = mant[i] == '-';
    ++i;
  }
  std::string digits;
  long frac = 0;
  bool seen_point = false, any = false;
  for (; i < mant.size(); ++i) {
    char c = mant[i];
    if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      any = true;
      if (seen_point) ++frac;
    } else {
      throw std::invalid_argument("malformed number: " + s);
    }
  }
  if (!any) throw std::invalid_argument("malformed number: " + s);
  Rational q(Integer(digits, 10));
  q *= pow_r(10, exp10 - frac);
  q.canonicalize();
  return neg ? Rational(-q) : q;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty number");
  if (auto caret = s.find('^'); caret != std::string::npos) {
    long base = std::stol(s.substr(0, caret));
    long e = std::stol(s.substr(caret + 1));
    if (base < 2) throw std::invalid_argument("bad power base: " + s);
    return pow_r(static_cast<int>(base), e);
  }
  if (auto slash = s.find('/'); slash != std::string::npos) {
    Rational num = parse_decimal(trim(s.substr(0, slash)));
    Rational den = parse_decimal(trim(s.substr(slash + 1)));
    if (den == 0) throw std::invalid_argument("zero denominator: " + s);
    Rational q = num / den;
    q.canonicalize();
    return q;
  }
  return parse_decimal(s);
}

namespace {

std::string format_mpfr(mpfr_t v, int digits) {
  if (mpfr_zero_p(v)) return "0";
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Re", digits - 1, v);
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

mpfr_prec_t working_prec(int digits) {
  return static_cast<mpfr_prec_t>(std::ceil(digits * 3.33)) + 64;
}

}  // namespace

std::string to_decimal(const Rational& q, int digits) {
  mpfr_t v;
  mpfr_init2(v, working_prec(digits));
  mpfr_set_q(v, q.get_mpq_t(), MPFR_RNDN);
  std::string out = format_mpfr(v, digits);
  mpfr_clear(v);
  return out;
}

std::string sqrt_decimal(const Rational& q, int digits) {
  if (q < 0) throw std::domain_error("sqrt of negative value");
  mpfr_t v;
  mpfr_init2(v, working_prec(digits));
  mpfr_set_q(v, q.get_mpq_t(), MPFR_RNDN);
  mpfr_sqrt(v, v, MPFR_RNDN);
  std::string out = format_mpfr(v, digits);
  mpfr_clear(v);
  return out;
}

std::string to_compact(const Rational& q) {
  if (q > 0 && q.get_num() == 1) {
    const mpz_class& d = q.get_den();
    if (mpz_popcount(d.get_mpz_t()) == 1) {
      return "2^-" + std::to_string(mpz_scan1(d.get_mpz_t(), 0));
    }
  }
  return q.get_str();
}

Rational inf_norm(const RationalVector& v) {
  Rational m = 0;
  for (const auto& x : v) {
    Rational a = abs(x);
    if (a > m) m = a;
  }
  return m;
}

}  // namespace sdsi
