#pragma once

#include "sdsi/rational.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sdsi {

class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
  RationalMatrix(std::initializer_list<std::initializer_list<Rational>> rows);

  static RationalMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  RationalVector operator*(const RationalVector& x) const;
  RationalMatrix operator*(const RationalMatrix& o) const;
  RationalMatrix operator-(const RationalMatrix& o) const;
  friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

  bool is_diagonal() const;
  // max_i sum_j |a_ij|, with the row attaining it.
  Rational inf_norm(std::size_t* argmax = nullptr) const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> a_;
};

class SingularMatrix : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rational Gaussian elimination with partial pivoting (largest magnitude).
RationalVector gauss_solve(RationalMatrix A, RationalVector b);
RationalMatrix inverse(const RationalMatrix& M);

class AdmissionError : public std::runtime_error {
 public:
  AdmissionError(const std::string& what, std::optional<std::size_t> row = {})
      : std::runtime_error(what), row_(row) {}
  std::optional<std::size_t> row() const { return row_; }

 private:
  std::optional<std::size_t> row_;
};

// Closed rational enclosure [lo, hi] of a real constant.
struct Enclosure {
  Rational lo, hi;
  bool exact() const { return lo == hi; }
};

// log_r(q) for q > 0.
Enclosure log_enclosure(const Rational& q, int r);

struct SystemSpec {
  std::size_t n = 0;
  int radix = 2;
  RationalMatrix A, M, N;  // A = M - N
  RationalVector b;
  RationalMatrix G;        // M^-1 N
  RationalVector c;        // M^-1 b
  Rational g_norm;
  std::size_t g_norm_row = 0;
  // log_r((1 - g)/2) and log_r(g); beta is unset when g = 0.
  Enclosure alpha;
  std::optional<Enclosure> beta;

  bool degenerate() const { return g_norm == 0; }
};

// Jacobi splitting M = diag(A).
SystemSpec build_jacobi(const RationalMatrix& A, const RationalVector& b, int radix = 2);
// Any splitting A = M - N with M nonsingular.
SystemSpec build_splitting(const RationalMatrix& A, const RationalVector& b,
                           const RationalMatrix& M, int radix = 2);

}  // namespace sdsi
