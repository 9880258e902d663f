#pragma once

#include "sdsi/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sdsi {

using Digit = std::int16_t;

// Symmetric digit set {-gamma, ..., gamma} in radix r, with r/2 <= gamma <= r-1.
class DigitSet {
 public:
  explicit DigitSet(int radix = 2);
  DigitSet(int radix, int gamma);

  int radix() const { return radix_; }
  int gamma() const { return gamma_; }
  bool maximal() const { return gamma_ == radix_ - 1; }
  bool contains(int d) const { return d >= -gamma_ && d <= gamma_; }

  friend bool operator==(const DigitSet&, const DigitSet&) = default;

 private:
  int radix_;
  int gamma_;
};

struct OpenInterval {
  Rational lo;
  Rational hi;
  bool contains(const Rational& y) const { return lo < y && y < hi; }
  Rational width() const { return hi - lo; }
};

// Fixed-point signed-digit number: value = sum digits[i] * r^(w-1-i).
class SDNumber {
 public:
  SDNumber() : SDNumber(DigitSet(2), 0, {}) {}
  SDNumber(DigitSet ds, int int_len, std::vector<Digit> digits);

  const DigitSet& digit_set() const { return ds_; }
  int radix() const { return ds_.radix(); }
  int int_len() const { return int_len_; }
  int frac_len() const { return static_cast<int>(digits_.size()) - int_len_; }
  std::size_t size() const { return digits_.size(); }
  // Exponent of the most significant position.
  int anchor() const { return int_len_ - 1; }

  Digit operator[](std::size_t i) const { return digits_[i]; }
  const std::vector<Digit>& digits() const { return digits_; }
  std::span<const Digit> span() const { return digits_; }

  // First n digits, keeping the anchor.
  SDNumber prefix(std::size_t n) const;
  SDNumber extended(std::span<const Digit> tail) const;

  std::string to_string() const;
  static SDNumber parse(std::string_view text);

  friend bool operator==(const SDNumber&, const SDNumber&) = default;

 private:
  DigitSet ds_;
  int int_len_;
  std::vector<Digit> digits_;
};

Rational eval(const SDNumber& x);
// Integer value scaled by r^frac_len (exact; no rational normalisation).
Integer eval_scaled(const SDNumber& x);
// Same, but only the first n digits, scaled by r^(n - int_len).
Integer eval_prefix_scaled(const SDNumber& x, std::size_t n);

// Radius of the representation interval: r^(w - D), D = digit count.
Rational unit_in_last_place(const SDNumber& x);
OpenInterval representation_interval(const SDNumber& x);
bool consistent(const SDNumber& x, const Rational& y);

std::size_t common_msd_count(const SDNumber& a, const SDNumber& b);

// Truncates v toward zero at r^-f and writes it with w integer digits.
SDNumber recode(const Rational& v, const DigitSet& ds, int w, int f);

}  // namespace sdsi
