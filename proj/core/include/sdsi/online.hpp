#pragma once

#include "sdsi/linear_online.hpp"
#include "sdsi/rational.hpp"
#include "sdsi/sd_number.hpp"

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace sdsi {

inline constexpr int kDeltaAdd = 2;
inline constexpr int kDeltaMul = 3;

// Lazy MSD-first digit sequence. Copies share the underlying source.
class DigitStream {
 public:
  using Source = std::function<Digit()>;

  DigitStream(DigitSet ds, int anchor, Source source);

  // Digits of x, then zeros if zero_extend; otherwise pulling past the end throws.
  static DigitStream from_number(const SDNumber& x, bool zero_extend = true);
  static DigitStream zeros(DigitSet ds, int anchor);

  const DigitSet& digit_set() const { return state_->ds; }
  int anchor() const { return state_->anchor; }
  std::size_t produced_count() const { return state_->produced; }

  Digit pull();
  std::vector<Digit> take(std::size_t n);
  // Pulls n digits and packages them as a number anchored at this stream's anchor.
  SDNumber take_number(std::size_t n);

 private:
  struct State {
    DigitSet ds;
    int anchor;
    Source source;
    std::size_t produced = 0;
  };
  std::shared_ptr<State> state_;
};

enum class OpKind { add, mul, const_mul, const_add };

const char* to_string(OpKind k);

// Stateful digit-serial operator. add/const_mul/const_add run on the linear
// residual engine; mul keeps an exact rational residual.
class OnlineOperator {
 public:
  static OnlineOperator add(DigitSet ds, int anchor, std::optional<int> out_anchor = {},
                            int delta = kDeltaAdd);
  static OnlineOperator mul(DigitSet ds, int anchor_a, int anchor_b,
                            std::optional<int> out_anchor = {}, int delta = kDeltaMul);
  static OnlineOperator const_mul(DigitSet ds, Rational c, int anchor,
                                  std::optional<int> out_anchor = {}, int delta = kDeltaMul);
  static OnlineOperator const_add(DigitSet ds, Rational c, int anchor,
                                  std::optional<int> out_anchor = {}, int delta = kDeltaAdd);
  static OnlineOperator linear(DigitSet ds, std::vector<LinearOnlineOperator::Input> inputs,
                               Rational constant, int out_anchor, int delta);

  OpKind kind() const { return kind_; }
  int delta() const { return delta_; }
  int out_anchor() const { return out_anchor_; }
  std::size_t arity() const { return arity_; }
  const DigitSet& digit_set() const { return ds_; }
  std::size_t consumed_count() const;
  std::size_t produced_count() const;
  Rational residual() const;

  // Consumes one digit per input; returns an output digit once past the delay.
  std::optional<Digit> pull_digit(std::span<const Digit> next_inputs);

 private:
  struct Product {
    int anchor_a, anchor_b;
    Rational a = 0, b = 0, w = 0;
    std::size_t n = 0, m = 0;
  };

  OnlineOperator(OpKind kind, DigitSet ds, int delta, int out_anchor, std::size_t arity);

  OpKind kind_;
  DigitSet ds_;
  int delta_;
  int out_anchor_;
  std::size_t arity_;
  std::optional<LinearOnlineOperator> linear_;
  std::optional<Product> product_;
};

// Stream combinators. Inputs must share radix and anchor (mul only radix).
DigitStream online_add(DigitStream a, DigitStream b, int delta = kDeltaAdd);
DigitStream online_mul(DigitStream a, DigitStream b, int delta = kDeltaMul);
DigitStream online_const_mul(const Rational& c, DigitStream a, int delta = kDeltaMul);
DigitStream online_const_add(const Rational& c, DigitStream a, int delta = kDeltaAdd);
// Drives an operator over input streams (zero-extension is up to the inputs).
DigitStream drive(OnlineOperator op, std::vector<DigitStream> inputs);

}  // namespace sdsi
