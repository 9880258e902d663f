#include "sdsi/system.hpp"

#include <mpfr.h>

#include <utility>

namespace sdsi {

RationalMatrix::RationalMatrix(std::initializer_list<std::initializer_list<Rational>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  for (const auto& row : rows) {
    if (row.size() != cols_) throw std::invalid_argument("ragged matrix literal");
    a_.insert(a_.end(), row.begin(), row.end());
  }
}

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix I(n, n);
  for (std::size_t i = 0; i < n; ++i) I(i, i) = 1;
  return I;
}

RationalVector RationalMatrix::operator*(const RationalVector& x) const {
  if (x.size() != cols_) throw std::invalid_argument("matrix-vector shape mismatch");
  RationalVector y(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    Rational s = 0;
    for (std::size_t j = 0; j < cols_; ++j)
      if ((*this)(i, j) != 0) s += (*this)(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("matrix-matrix shape mismatch");
  RationalMatrix out(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      if ((*this)(i, k) == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) out(i, j) += (*this)(i, k) * o(k, j);
    }
  return out;
}

RationalMatrix RationalMatrix::operator-(const RationalMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch");
  RationalMatrix out(rows_, cols_);
  for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i] - o.a_[i];
  return out;
}

bool RationalMatrix::is_diagonal() const {
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (i != j && (*this)(i, j) != 0) return false;
  return true;
}

Rational RationalMatrix::inf_norm(std::size_t* argmax) const {
  Rational best = 0;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < rows_; ++i) {
    Rational s = 0;
    for (std::size_t j = 0; j < cols_; ++j) s += abs((*this)(i, j));
    if (s > best) {
      best = s;
      arg = i;
    }
  }
  if (argmax) *argmax = arg;
  return best;
}

RationalVector gauss_solve(RationalMatrix A, RationalVector b) {
  const std::size_t n = A.rows();
  if (A.cols() != n || b.size() != n) throw std::invalid_argument("gauss_solve: shape mismatch");
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (abs(A(i, k)) > abs(A(piv, k))) piv = i;
    if (A(piv, k) == 0) throw SingularMatrix("matrix is singular");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(A(k, j), A(piv, j));
      std::swap(b[k], b[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      if (A(i, k) == 0) continue;
      Rational f = A(i, k) / A(k, k);
      for (std::size_t j = k; j < n; ++j) A(i, j) -= f * A(k, j);
      b[i] -= f * b[k];
    }
  }
  RationalVector x(n);
  for (std::size_t i = n; i-- > 0;) {
    Rational s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= A(i, j) * x[j];
    x[i] = s / A(i, i);
  }
  return x;
}

RationalMatrix inverse(const RationalMatrix& M) {
  const std::size_t n = M.rows();
  RationalMatrix inv(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    RationalVector e(n, Rational(0));
    e[j] = 1;
    auto col = gauss_solve(M, e);
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return inv;
}

namespace {

// Exact value when q is an integral power of r.
std::optional<long> exact_log(const Rational& q, int r) {
  long t = floor_log(q, r);
  if (pow_r(r, t) == q) return t;
  return std::nullopt;
}

Rational to_rational(mpfr_t v) {
  Rational q;
  mpfr_get_q(q.get_mpq_t(), v);
  return q;
}

}  // namespace

Enclosure log_enclosure(const Rational& q, int r) {
  if (q <= 0) throw std::domain_error("log of non-positive value");
  if (auto t = exact_log(q, r)) return {Rational(*t), Rational(*t)};
  constexpr mpfr_prec_t prec = 256;
  mpfr_t x, lr;
  mpfr_inits2(prec, x, lr, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_q(x, q.get_mpq_t(), MPFR_RNDN);
  mpfr_log2(x, x, MPFR_RNDN);
  mpfr_set_ui(lr, static_cast<unsigned long>(r), MPFR_RNDN);
  mpfr_log2(lr, lr, MPFR_RNDN);
  mpfr_div(x, x, lr, MPFR_RNDN);
  Rational v = to_rational(x);
  mpfr_clears(x, lr, static_cast<mpfr_ptr>(nullptr));
  // A few ulps at 256 bits; the margin is far wider and still tight enough to
  // leave floor() unambiguous except at (near-)integers, which are resolved exactly.
  Rational margin = pow_r(2, -200) * (abs(v) + 1);
  return {v - margin, v + margin};
}

namespace {

SystemSpec finish(const RationalMatrix& A, const RationalVector& b, const RationalMatrix& M,
                  const RationalMatrix& Minv, int radix) {
  SystemSpec s;
  s.n = A.rows();
  s.radix = radix;
  s.A = A;
  s.b = b;
  s.M = M;
  s.N = M - A;
  s.G = Minv * s.N;
  s.c = Minv * b;
  s.g_norm = s.G.inf_norm(&s.g_norm_row);
  if (s.g_norm >= 1) {
    throw AdmissionError("iteration matrix norm ||G||_inf = " + s.g_norm.get_str() +
                             " >= 1 (row " + std::to_string(s.g_norm_row) + ")",
                         s.g_norm_row);
  }
  s.alpha = log_enclosure((1 - s.g_norm) / 2, radix);
  if (s.g_norm > 0) s.beta = log_enclosure(s.g_norm, radix);
  return s;
}

void check_shape(const RationalMatrix& A, const RationalVector& b) {
  if (A.rows() == 0 || A.rows() != A.cols()) throw AdmissionError("A must be square and non-empty");
  if (b.size() != A.rows()) throw AdmissionError("b has the wrong length");
}

}  // namespace

SystemSpec build_jacobi(const RationalMatrix& A, const RationalVector& b, int radix) {
  check_shape(A, b);
  const std::size_t n = A.rows();
  RationalMatrix M(n, n), Minv(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (A(i, i) == 0) throw AdmissionError("zero diagonal entry in row " + std::to_string(i), i);
    M(i, i) = A(i, i);
    Minv(i, i) = 1 / A(i, i);
  }
  return finish(A, b, M, Minv, radix);
}

SystemSpec build_splitting(const RationalMatrix& A, const RationalVector& b,
                           const RationalMatrix& M, int radix) {
  check_shape(A, b);
  if (M.rows() != A.rows() || M.cols() != A.cols()) throw AdmissionError("M has the wrong shape");
  RationalMatrix Minv;
  try {
    Minv = inverse(M);
  } catch (const SingularMatrix&) {
    throw AdmissionError("splitting matrix M is singular");
  }
  return finish(A, b, M, Minv, radix);
}

}  // namespace sdsi
