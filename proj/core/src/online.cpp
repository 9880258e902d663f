#include "sdsi/online.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace sdsi {

DigitStream::DigitStream(DigitSet ds, int anchor, Source source)
    : state_(std::make_shared<State>(State{ds, anchor, std::move(source)})) {}

DigitStream DigitStream::from_number(const SDNumber& x, bool zero_extend) {
  auto digits = std::make_shared<std::vector<Digit>>(x.digits());
  auto pos = std::make_shared<std::size_t>(0);
  return DigitStream(x.digit_set(), x.anchor(), [digits, pos, zero_extend]() -> Digit {
    std::size_t i = (*pos)++;
    if (i < digits->size()) return (*digits)[i];
    if (!zero_extend) throw std::out_of_range("digit stream exhausted (no zero extension)");
    return 0;
  });
}

DigitStream DigitStream::zeros(DigitSet ds, int anchor) {
  return DigitStream(ds, anchor, [] { return Digit{0}; });
}

Digit DigitStream::pull() {
  Digit d = state_->source();
  if (!state_->ds.contains(d)) throw std::logic_error("stream produced a digit outside its digit set");
  ++state_->produced;
  return d;
}

std::vector<Digit> DigitStream::take(std::size_t n) {
  std::vector<Digit> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(pull());
  return out;
}

SDNumber DigitStream::take_number(std::size_t n) {
  // Anchors below zero are expressed by leading zero digits of a w = 0 number.
  const int a = anchor();
  std::vector<Digit> digits;
  int w = a + 1;
  if (w < 0) {
    digits.assign(static_cast<std::size_t>(-w), 0);
    w = 0;
  }
  auto body = take(n);
  digits.insert(digits.end(), body.begin(), body.end());
  while (static_cast<int>(digits.size()) < w) digits.push_back(0);
  return SDNumber(digit_set(), w, std::move(digits));
}

const char* to_string(OpKind k) {
  switch (k) {
    case OpKind::add: return "add";
    case OpKind::mul: return "mul";
    case OpKind::const_mul: return "const_mul";
    case OpKind::const_add: return "const_add";
  }
  return "?";
}

OnlineOperator::OnlineOperator(OpKind kind, DigitSet ds, int delta, int out_anchor,
                               std::size_t arity)
    : kind_(kind), ds_(ds), delta_(delta), out_anchor_(out_anchor), arity_(arity) {
  if (!ds.maximal()) throw std::invalid_argument("online operators require gamma = r - 1");
  if (delta < 0) throw std::invalid_argument("negative online delay");
}

OnlineOperator OnlineOperator::add(DigitSet ds, int anchor, std::optional<int> out_anchor,
                                   int delta) {
  int ez = out_anchor.value_or(anchor + 1);
  OnlineOperator op(OpKind::add, ds, delta, ez, 2);
  op.linear_.emplace(ds, delta,
                     std::vector<LinearOnlineOperator::Input>{{Rational(1), anchor},
                                                              {Rational(1), anchor}},
                     Rational(0), ez);
  return op;
}

OnlineOperator OnlineOperator::mul(DigitSet ds, int anchor_a, int anchor_b,
                                   std::optional<int> out_anchor, int delta) {
  int ez = out_anchor.value_or(anchor_a + anchor_b + 1);
  OnlineOperator op(OpKind::mul, ds, delta, ez, 2);
  op.product_.emplace(Product{anchor_a, anchor_b});
  return op;
}

OnlineOperator OnlineOperator::const_mul(DigitSet ds, Rational c, int anchor,
                                         std::optional<int> out_anchor, int delta) {
  int k = 0;
  if (c != 0) {
    while (pow_r(ds.radix(), k) < abs(c)) ++k;
  }
  int ez = out_anchor.value_or(anchor + k);
  OnlineOperator op(OpKind::const_mul, ds, delta, ez, 1);
  op.linear_.emplace(ds, delta, std::vector<LinearOnlineOperator::Input>{{std::move(c), anchor}},
                     Rational(0), ez);
  return op;
}

OnlineOperator OnlineOperator::const_add(DigitSet ds, Rational c, int anchor,
                                         std::optional<int> out_anchor, int delta) {
  int top = anchor;
  if (c != 0) top = std::max<long>(anchor, floor_log(abs(c), ds.radix()));
  int ez = out_anchor.value_or(top + 1);
  OnlineOperator op(OpKind::const_add, ds, delta, ez, 1);
  op.linear_.emplace(ds, delta, std::vector<LinearOnlineOperator::Input>{{Rational(1), anchor}},
                     std::move(c), ez);
  return op;
}

OnlineOperator OnlineOperator::linear(DigitSet ds, std::vector<LinearOnlineOperator::Input> inputs,
                                      Rational constant, int out_anchor, int delta) {
  OnlineOperator op(OpKind::add, ds, delta, out_anchor, inputs.size());
  op.linear_.emplace(ds, delta, std::move(inputs), std::move(constant), out_anchor);
  return op;
}

std::size_t OnlineOperator::consumed_count() const {
  return linear_ ? linear_->consumed() : product_->n;
}

std::size_t OnlineOperator::produced_count() const {
  return linear_ ? linear_->emitted() : product_->m;
}

Rational OnlineOperator::residual() const { return linear_ ? linear_->residual() : product_->w; }

std::optional<Digit> OnlineOperator::pull_digit(std::span<const Digit> next_inputs) {
  if (next_inputs.size() != arity_) throw std::invalid_argument("pull_digit: wrong number of inputs");
  if (linear_) return linear_->step(next_inputs);

  Product& p = *product_;
  for (Digit d : next_inputs)
    if (!ds_.contains(d)) throw std::invalid_argument("pull_digit: input digit outside digit set");
  const int r = ds_.radix();
  const long n = static_cast<long>(p.n);
  Rational a2 = p.a + Rational(next_inputs[0]) * pow_r(r, p.anchor_a - n);
  Rational b2 = p.b + Rational(next_inputs[1]) * pow_r(r, p.anchor_b - n);
  p.w += (a2 * b2 - p.a * p.b) * pow_r(r, static_cast<long>(p.m) - out_anchor_);
  p.a = a2;
  p.b = b2;
  ++p.n;
  if (p.n <= static_cast<std::size_t>(delta_)) return std::nullopt;

  // Nearest integer, ties toward zero, clamped to the digit set.
  Integer fl = floor_rational(p.w);
  Rational frac = p.w - fl;
  long d = fl.get_si();
  if (frac > Rational(1, 2) || (frac == Rational(1, 2) && p.w < 0)) ++d;
  d = std::clamp<long>(d, -ds_.gamma(), ds_.gamma());
  p.w -= d;
  if (abs(p.w) >= 1)
    throw SelectionOverflow("online multiplier residual left the selection region at output digit " +
                            std::to_string(p.m));
  p.w *= r;
  ++p.m;
  return static_cast<Digit>(d);
}

DigitStream drive(OnlineOperator op, std::vector<DigitStream> inputs) {
  if (inputs.size() != op.arity()) throw std::invalid_argument("drive: wrong number of input streams");
  for (auto& s : inputs)
    if (s.digit_set() != op.digit_set()) throw std::invalid_argument("drive: radix mismatch");
  auto shared_op = std::make_shared<OnlineOperator>(std::move(op));
  auto ins = std::make_shared<std::vector<DigitStream>>(std::move(inputs));
  DigitSet ds = shared_op->digit_set();
  int ez = shared_op->out_anchor();
  return DigitStream(ds, ez, [shared_op, ins]() -> Digit {
    std::vector<Digit> buf(ins->size());
    for (;;) {
      for (std::size_t i = 0; i < ins->size(); ++i) buf[i] = (*ins)[i].pull();
      if (auto d = shared_op->pull_digit(buf)) return *d;
    }
  });
}

namespace {
void require_same(const DigitStream& a, const DigitStream& b, bool anchors) {
  if (a.digit_set() != b.digit_set()) throw std::invalid_argument("online operator: radix mismatch");
  if (anchors && a.anchor() != b.anchor())
    throw std::invalid_argument("online operator: anchor mismatch");
}
}  // namespace

DigitStream online_add(DigitStream a, DigitStream b, int delta) {
  require_same(a, b, true);
  auto op = OnlineOperator::add(a.digit_set(), a.anchor(), {}, delta);
  return drive(std::move(op), {std::move(a), std::move(b)});
}

DigitStream online_mul(DigitStream a, DigitStream b, int delta) {
  require_same(a, b, false);
  auto op = OnlineOperator::mul(a.digit_set(), a.anchor(), b.anchor(), {}, delta);
  return drive(std::move(op), {std::move(a), std::move(b)});
}

DigitStream online_const_mul(const Rational& c, DigitStream a, int delta) {
  auto op = OnlineOperator::const_mul(a.digit_set(), c, a.anchor(), {}, delta);
  return drive(std::move(op), {std::move(a)});
}

DigitStream online_const_add(const Rational& c, DigitStream a, int delta) {
  auto op = OnlineOperator::const_add(a.digit_set(), c, a.anchor(), {}, delta);
  return drive(std::move(op), {std::move(a)});
}

}  // namespace sdsi
