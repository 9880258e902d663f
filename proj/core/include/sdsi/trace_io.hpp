#pragma once

#include "sdsi/oracle.hpp"
#include "sdsi/solver.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sdsi {

// Line-oriented trace: a '#' header, a column line, one record per iteration,
// then any `violation` records.
struct TraceLine {
  std::size_t k = 0;
  std::size_t D = 0;
  std::optional<std::size_t> k_hat;
  long psi = 0;
  std::uint64_t digits_computed = 0;
  std::uint64_t digits_elided = 0;
  std::string residual_2norm;  // 40 significant digits

  friend bool operator==(const TraceLine&, const TraceLine&) = default;
};

struct TraceDocument {
  std::string header;
  std::vector<TraceLine> lines;
  std::vector<Violation> violations;
};

TraceLine to_line(const IterationRecord& rec);
void write_trace(std::ostream& os, const SolverTrace& trace, const VerificationReport* report = nullptr);
TraceDocument read_trace(std::istream& is);

}  // namespace sdsi
