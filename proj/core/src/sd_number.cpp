#include "sdsi/sd_number.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace sdsi {

DigitSet::DigitSet(int radix) : DigitSet(radix, radix - 1) {}

DigitSet::DigitSet(int radix, int gamma) : radix_(radix), gamma_(gamma) {
  if (radix < 2 || radix > (1 << 15)) throw std::invalid_argument("radix out of range");
  if (2 * gamma < radix || gamma > radix - 1)
    throw std::invalid_argument("digit set requires r/2 <= gamma <= r-1");
}

SDNumber::SDNumber(DigitSet ds, int int_len, std::vector<Digit> digits)
    : ds_(ds), int_len_(int_len), digits_(std::move(digits)) {
  if (int_len < 0) throw std::invalid_argument("negative integer length");
  if (static_cast<int>(digits_.size()) < int_len)
    throw std::invalid_argument("fewer digits than integer length");
  for (Digit d : digits_)
    if (!ds_.contains(d)) throw std::invalid_argument("digit outside digit set");
}

SDNumber SDNumber::prefix(std::size_t n) const {
  n = std::min(n, digits_.size());
  std::vector<Digit> d(digits_.begin(), digits_.begin() + static_cast<std::ptrdiff_t>(n));
  // A prefix may be shorter than the integer part; keep the anchor by padding.
  while (static_cast<int>(d.size()) < int_len_) d.push_back(0);
  return SDNumber(ds_, int_len_, std::move(d));
}

SDNumber SDNumber::extended(std::span<const Digit> tail) const {
  std::vector<Digit> d = digits_;
  d.insert(d.end(), tail.begin(), tail.end());
  return SDNumber(ds_, int_len_, std::move(d));
}

std::string SDNumber::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < digits_.size(); ++i) {
    if (i) os << ',';
    os << digits_[i];
  }
  os << "]@w=" << int_len_ << ",r=" << ds_.radix();
  if (!ds_.maximal()) os << ",g=" << ds_.gamma();
  return os.str();
}

SDNumber SDNumber::parse(std::string_view text) {
  std::string s(text);
  auto open = s.find('['), close = s.find(']');
  if (open != 0 || close == std::string::npos) throw std::invalid_argument("bad SDNumber: " + s);
  std::vector<Digit> digits;
  std::string body = s.substr(1, close - 1);
  std::stringstream ss(body);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    digits.push_back(static_cast<Digit>(std::stoi(tok)));
  }
  int w = -1, r = -1, g = -1;
  std::stringstream tail(s.substr(close + 1));
  if (tail.get() != '@') throw std::invalid_argument("bad SDNumber: " + s);
  while (std::getline(tail, tok, ',')) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("bad SDNumber: " + s);
    std::string key = tok.substr(0, eq);
    int val = std::stoi(tok.substr(eq + 1));
    if (key == "w") w = val;
    else if (key == "r") r = val;
    else if (key == "g") g = val;
    else throw std::invalid_argument("bad SDNumber key: " + key);
  }
  if (w < 0 || r < 0) throw std::invalid_argument("bad SDNumber: " + s);
  return SDNumber(g < 0 ? DigitSet(r) : DigitSet(r, g), w, std::move(digits));
}

Integer eval_prefix_scaled(const SDNumber& x, std::size_t n) {
  n = std::min(n, x.size());
  Integer acc = 0;
  const unsigned long r = static_cast<unsigned long>(x.radix());
  if (r == 2) {
    // Separate positive and negative digit masks; avoids a Horner pass.
    Integer pos = 0, neg = 0;
    for (std::size_t i = 0; i < n; ++i) {
      Digit d = x[i];
      if (d > 0) mpz_setbit(pos.get_mpz_t(), n - 1 - i);
      else if (d < 0) mpz_setbit(neg.get_mpz_t(), n - 1 - i);
    }
    return pos - neg;
  }
  for (std::size_t i = 0; i < n; ++i) {
    acc *= r;
    Digit d = x[i];
    if (d >= 0) acc += static_cast<unsigned long>(d);
    else acc -= static_cast<unsigned long>(-d);
  }
  return acc;
}

Integer eval_scaled(const SDNumber& x) { return eval_prefix_scaled(x, x.size()); }

Rational eval(const SDNumber& x) {
  Rational q(eval_scaled(x), Integer(1));
  q *= pow_r(x.radix(), -static_cast<long>(x.frac_len()));
  q.canonicalize();
  return q;
}

Rational unit_in_last_place(const SDNumber& x) {
  return pow_r(x.radix(), static_cast<long>(x.int_len()) - static_cast<long>(x.size()));
}

OpenInterval representation_interval(const SDNumber& x) {
  Rational v = eval(x), u = unit_in_last_place(x);
  return {v - u, v + u};
}

bool consistent(const SDNumber& x, const Rational& y) {
  return representation_interval(x).contains(y);
}

std::size_t common_msd_count(const SDNumber& a, const SDNumber& b) {
  if (a.digit_set() != b.digit_set() || a.int_len() != b.int_len())
    throw std::invalid_argument("common_msd_count: mismatched radix or anchor");
  auto [ia, ib] = std::mismatch(a.digits().begin(), a.digits().end(), b.digits().begin(),
                                b.digits().end());
  return static_cast<std::size_t>(ia - a.digits().begin());
}

SDNumber recode(const Rational& v, const DigitSet& ds, int w, int f) {
  if (w < 0 || f < 0) throw std::invalid_argument("recode: negative length");
  const int r = ds.radix();
  if (abs(v) >= pow_r(r, w)) throw std::overflow_error("recode: integer part overflows w digits");
  Rational scaled = abs(v) * pow_r(r, f);
  Integer mag;
  mpz_tdiv_q(mag.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  const bool neg = v < 0;
  std::vector<Digit> digits(static_cast<std::size_t>(w + f), 0);
  for (std::size_t i = digits.size(); i-- > 0;) {
    unsigned long rem = mpz_fdiv_q_ui(mag.get_mpz_t(), mag.get_mpz_t(), static_cast<unsigned long>(r));
    // Canonical digit is in [0, r-1]; that exceeds gamma only for non-maximal sets.
    long d = static_cast<long>(rem);
    if (d > ds.gamma()) {
      d -= r;
      mag += 1;
    }
    digits[i] = static_cast<Digit>(neg ? -d : d);
  }
  if (mag != 0) throw std::overflow_error("recode: integer part overflows w digits");
  return SDNumber(ds, w, std::move(digits));
}

}  // namespace sdsi
