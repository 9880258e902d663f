#include "sdsi/linear_online.hpp"

#include <algorithm>
#include <string>

namespace sdsi {

namespace {

using i128 = __int128;

i128 to_i128(const Integer& v) {
  Integer a = v < 0 ? Integer(-v) : v;
  Integer hi = a >> 64;
  Integer lo = a - (hi << 64);
  unsigned __int128 u = (static_cast<unsigned __int128>(mpz_get_ui(hi.get_mpz_t())) << 64) |
                        static_cast<unsigned __int128>(mpz_get_ui(lo.get_mpz_t()));
  i128 s = static_cast<i128>(u);
  return v < 0 ? -s : s;
}

Integer to_integer(i128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
  Integer hi(static_cast<unsigned long>(u >> 64));
  Integer lo(static_cast<unsigned long>(u & ~0ULL));
  Integer out = (hi << 64) + lo;
  return neg ? Integer(-out) : out;
}

template <class Int>
Int convert(const Integer& v) {
  if constexpr (std::is_same_v<Int, Integer>) return v;
  else return to_i128(v);
}

template <class Int>
Integer back(const Int& v) {
  if constexpr (std::is_same_v<Int, Integer>) return v;
  else return to_integer(v);
}

template <class Int>
Int abs_int(const Int& v) {
  return v < 0 ? Int(-v) : v;
}

Integer lcm(const Integer& a, const Integer& b) {
  Integer out;
  mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

}  // namespace

struct LinearOnlineOperator::Core {
  std::size_t n = 0;  // consumed
  std::size_t m = 0;  // emitted
  virtual ~Core() = default;
  virtual std::unique_ptr<Core> clone() const = 0;
  virtual std::optional<Digit> step(std::span<const Digit> digits) = 0;
  virtual void generate(std::span<const Digit* const> inputs, std::size_t input_len,
                        std::size_t count, std::vector<Digit>& out) = 0;
  virtual void set(const Integer& num, std::size_t consumed, std::size_t emitted) = 0;
  virtual Integer numerator() const = 0;
  virtual bool native() const = 0;
};

template <class Int>
struct LinearOnlineOperator::CoreImpl final : LinearOnlineOperator::Core {
  int r, gamma, delta;
  Int S, rS, init;
  Int num;
  std::vector<Int> inc;     // per-input weight once emission has started
  std::vector<Int> rpow;    // r^j for j in [0, delta]
  std::vector<Int> odd;     // (2d+1) S, selection thresholds

  CoreImpl(int radix, int gam, int del, const Integer& scale, const Integer& init_num,
           const std::vector<Integer>& increments)
      : r(radix), gamma(gam), delta(del) {
    S = convert<Int>(scale);
    rS = S * r;
    init = convert<Int>(init_num);
    num = init;
    for (const auto& v : increments) inc.push_back(convert<Int>(v));
    Int p = 1;
    for (int j = 0; j <= delta; ++j) {
      rpow.push_back(p);
      p *= r;
    }
    for (int d = 0; d < gamma; ++d) odd.push_back(S * (2 * d + 1));
  }

  std::unique_ptr<Core> clone() const override { return std::make_unique<CoreImpl>(*this); }
  bool native() const override { return !std::is_same_v<Int, Integer>; }

  void consume(std::size_t i, Digit a) {
    if (a == 0) return;
    if (n < static_cast<std::size_t>(delta)) num += inc[i] * rpow[delta - n] * static_cast<long>(a);
    else num += inc[i] * static_cast<long>(a);
  }

  Digit select() {
    Int t = num * 2;
    int d = 0;
    if (t > S) {
      while (d < gamma && t > odd[d]) ++d;
    } else if (t < -S) {
      while (d > -gamma && t < -odd[-d]) --d;
    }
    num -= S * static_cast<long>(d);
    if (abs_int(num) >= S) {
      throw SelectionOverflow("online operator residual left the selection region at output digit " +
                              std::to_string(m));
    }
    num *= r;
    ++m;
    return static_cast<Digit>(d);
  }

  std::optional<Digit> step(std::span<const Digit> digits) override {
    for (std::size_t i = 0; i < digits.size(); ++i) consume(i, digits[i]);
    ++n;
    if (n > static_cast<std::size_t>(delta)) return select();
    return std::nullopt;
  }

  void generate(std::span<const Digit* const> inputs, std::size_t input_len, std::size_t count,
                std::vector<Digit>& out) override {
    const std::size_t k = inputs.size();
    while (m < count) {
      if (n < input_len) {
        for (std::size_t i = 0; i < k; ++i) consume(i, inputs[i][n]);
      }
      ++n;
      if (n > static_cast<std::size_t>(delta)) out.push_back(select());
    }
  }

  void set(const Integer& v, std::size_t consumed, std::size_t emitted) override {
    num = convert<Int>(v);
    n = consumed;
    m = emitted;
  }

  Integer numerator() const override { return back<Int>(num); }
};

LinearOnlineOperator::LinearOnlineOperator(DigitSet ds, int delta, std::vector<Input> inputs,
                                           Rational constant, int out_anchor)
    : ds_(ds), delta_(delta), inputs_(std::move(inputs)), constant_(std::move(constant)),
      out_anchor_(out_anchor) {
  if (!ds_.maximal()) throw std::invalid_argument("online operators require gamma = r - 1");
  if (delta_ < 0) throw std::invalid_argument("negative online delay");
  const int r = ds_.radix();
  constant_.canonicalize();
  Rational c0 = constant_ * pow_r(r, -out_anchor_);
  c0.canonicalize();
  Integer S = c0.get_den();
  std::vector<Rational> w;
  for (auto& in : inputs_) {
    in.coeff.canonicalize();
    Rational q = in.coeff * pow_r(r, static_cast<long>(in.anchor) - out_anchor_ - delta_);
    q.canonicalize();
    S = lcm(S, q.get_den());
    w.push_back(q);
  }
  scale_ = S;
  Rational init_q = c0 * S;
  Integer init = init_q.get_num();
  std::vector<Integer> incs;
  Integer biggest = abs(init_q).get_num();
  Integer rd = ipow(r, static_cast<unsigned long>(delta_));
  for (const auto& q : w) {
    Rational v = q * S;
    incs.push_back(v.get_num());
    Integer t = abs(v).get_num() * rd * ds_.gamma();
    if (t > biggest) biggest = t;
  }
  // Largest magnitudes: 2 * (r + 1) * S during selection, warm-up terms.
  Integer bound = S * (2 * (r + 1)) * r;
  if (biggest > bound) bound = biggest;
  const bool fits = mpz_sizeinbase(bound.get_mpz_t(), 2) + 8 * inputs_.size() + 8 < 124;
  if (fits) core_ = std::make_unique<CoreImpl<i128>>(r, ds_.gamma(), delta_, S, init, incs);
  else core_ = std::make_unique<CoreImpl<Integer>>(r, ds_.gamma(), delta_, S, init, incs);
}

LinearOnlineOperator::~LinearOnlineOperator() = default;
LinearOnlineOperator::LinearOnlineOperator(const LinearOnlineOperator& o)
    : ds_(o.ds_), delta_(o.delta_), inputs_(o.inputs_), constant_(o.constant_),
      out_anchor_(o.out_anchor_), scale_(o.scale_), core_(o.core_->clone()) {}
LinearOnlineOperator& LinearOnlineOperator::operator=(const LinearOnlineOperator& o) {
  if (this != &o) *this = LinearOnlineOperator(o);
  return *this;
}
LinearOnlineOperator::LinearOnlineOperator(LinearOnlineOperator&&) noexcept = default;
LinearOnlineOperator& LinearOnlineOperator::operator=(LinearOnlineOperator&&) noexcept = default;

std::size_t LinearOnlineOperator::consumed() const { return core_->n; }
std::size_t LinearOnlineOperator::emitted() const { return core_->m; }
bool LinearOnlineOperator::uses_native_residual() const { return core_->native(); }

std::optional<Digit> LinearOnlineOperator::step(std::span<const Digit> digits) {
  if (digits.size() != inputs_.size()) throw std::invalid_argument("step: wrong number of input digits");
  for (Digit d : digits)
    if (!ds_.contains(d)) throw std::invalid_argument("step: input digit outside digit set");
  return core_->step(digits);
}

void LinearOnlineOperator::generate(std::span<const Digit* const> inputs, std::size_t input_len,
                                    std::size_t count, std::vector<Digit>& out) {
  if (inputs.size() != inputs_.size()) throw std::invalid_argument("generate: wrong input count");
  core_->generate(inputs, input_len, count, out);
}

void LinearOnlineOperator::restore(std::span<const Rational> input_prefix_values,
                                   std::size_t consumed, std::span<const Digit> prefix) {
  if (input_prefix_values.size() != inputs_.size())
    throw std::invalid_argument("restore: wrong input count");
  const std::size_t m = prefix.size();
  if ((m > 0 && consumed != m + static_cast<std::size_t>(delta_)) ||
      (m == 0 && consumed > static_cast<std::size_t>(delta_)))
    throw std::invalid_argument("restore: consumed/emitted counts violate the online delay");
  const int r = ds_.radix();
  Rational t = constant_;
  for (std::size_t i = 0; i < inputs_.size(); ++i) t += inputs_[i].coeff * input_prefix_values[i];
  Integer z = 0;
  for (Digit d : prefix) {
    z *= r;
    z += d;
  }
  // Z_m = z * r^(e_z - m + 1); W = (T - Z_m) / r^(e_z - m).
  Rational zq = Rational(z) * pow_r(r, static_cast<long>(out_anchor_) - static_cast<long>(m) + 1);
  Rational W = (t - zq) * pow_r(r, static_cast<long>(m) - out_anchor_);
  Rational numq = W * scale_;
  numq.canonicalize();
  if (numq.get_den() != 1) throw std::invalid_argument("restore: inputs not on the operator's grid");
  if (abs(W) >= r) throw SelectionOverflow("restore: residual outside the selection region");
  core_->set(numq.get_num(), consumed, m);
}

void LinearOnlineOperator::reset() {
  Rational c0 = constant_ * pow_r(ds_.radix(), -out_anchor_) * scale_;
  c0.canonicalize();
  core_->set(c0.get_num(), 0, 0);
}

Rational LinearOnlineOperator::residual() const {
  Rational q(core_->numerator(), scale_);
  q.canonicalize();
  return q;
}

}  // namespace sdsi
