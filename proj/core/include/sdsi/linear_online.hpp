#pragma once

#include "sdsi/rational.hpp"
#include "sdsi/sd_number.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace sdsi {

// The residual left the region from which the remaining digits can still
// represent the result. Indicates an anchor or datapath bug.
class SelectionOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Online evaluation of  sum_i coeff_i * X_i + constant  with online delay delta.
//
// Residual recurrence: W = (T_n - Z_m) / r^(e_z - m) where T_n is the exact
// result over the consumed input prefixes and Z_m the emitted output prefix.
// Each output digit is the integer nearest W (ties toward zero), clamped to
// +-gamma. The residual is an integer numerator over a fixed scale S, held in
// __int128 when it provably fits and in a GMP integer otherwise.
class LinearOnlineOperator {
 public:
  struct Input {
    Rational coeff;
    int anchor;  // exponent of the input's first digit
  };

  LinearOnlineOperator(DigitSet ds, int delta, std::vector<Input> inputs, Rational constant,
                       int out_anchor);
  ~LinearOnlineOperator();
  LinearOnlineOperator(const LinearOnlineOperator&);
  LinearOnlineOperator& operator=(const LinearOnlineOperator&);
  LinearOnlineOperator(LinearOnlineOperator&&) noexcept;
  LinearOnlineOperator& operator=(LinearOnlineOperator&&) noexcept;

  const DigitSet& digit_set() const { return ds_; }
  int delta() const { return delta_; }
  int out_anchor() const { return out_anchor_; }
  std::size_t arity() const { return inputs_.size(); }
  std::size_t consumed() const;
  std::size_t emitted() const;
  bool uses_native_residual() const;

  // Consumes one digit from every input; emits once more than delta digits are in.
  std::optional<Digit> step(std::span<const Digit> digits);

  // Feeds inputs (zero-extended past their length) until `count` digits have been emitted.
  void generate(std::span<const Digit* const> inputs, std::size_t input_len, std::size_t count,
                std::vector<Digit>& out);

  // Puts the operator in the state it would have after consuming `consumed`
  // digits of each input (given as the exact values of those prefixes) and
  // emitting `prefix`. Throws SelectionOverflow if that state is outside the
  // selection region.
  void restore(std::span<const Rational> input_prefix_values, std::size_t consumed,
               std::span<const Digit> prefix);

  void reset();
  // Current residual W (in units of the next output digit).
  Rational residual() const;

 private:
  struct Core;
  template <class Int>
  struct CoreImpl;

  DigitSet ds_;
  int delta_;
  std::vector<Input> inputs_;
  Rational constant_;
  int out_anchor_;
  Integer scale_;
  std::unique_ptr<Core> core_;
};

}  // namespace sdsi
