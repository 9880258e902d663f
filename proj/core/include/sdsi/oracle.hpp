#pragma once

#include "sdsi/rational.hpp"
#include "sdsi/solver.hpp"
#include "sdsi/system.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace sdsi {

RationalVector exact_solve(const RationalMatrix& A, const RationalVector& b);
// x0, G x0 + c, ... (K + 1 vectors).
std::vector<RationalVector> exact_orbit(const SystemSpec& spec, const RationalVector& x0,
                                        std::size_t K);

struct Violation {
  // 'a' stable digit changed, 'b' residue bound, 'c' successive-difference
  // bound, 'd' consistency of the stable prefix with x*, 'e' contraction.
  char check;
  std::size_t k;
  std::size_t j;
  std::string detail;
};

struct VerificationEntry {
  std::size_t k = 0;
  Rational residue_inf;                 // ||x^(k) - x*||_inf
  std::optional<Rational> residue_bound;  // bound implied by D between x^(k-1), x^(k)
  bool residue_ok = true;
  bool difference_ok = true;
  bool consistency_ok = true;
};

struct VerificationReport {
  RationalVector x_star;
  std::vector<VerificationEntry> entries;  // entries[k-1] for x^(k)
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::size_t count(char check) const;
};

// Audits a completed trace against exact arithmetic.
VerificationReport verify(const SolverTrace& trace, const SystemSpec& spec);

// For each approximant k: the number of leading digits of element j that
// agree with every later approximant (full length for the last one).
std::vector<std::vector<std::size_t>> settled_prefix_lengths(const SolverTrace& trace);

struct ControlComparison {
  bool same_iterations = false;
  bool final_identical = false;
  std::size_t differing_approximants = 0;
  std::optional<std::size_t> first_difference;  // iteration index
};

ControlComparison compare_with_control(const SolverTrace& run, const SolverTrace& control);

}  // namespace sdsi
