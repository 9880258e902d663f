#include "sdsi/trace_io.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sdsi {

namespace {
constexpr const char* kColumns = "k,D,k_hat,psi,digits_computed,digits_elided,residual_2norm";

std::vector<std::string> split(const std::string& s, char sep, std::size_t max_fields) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (out.size() + 1 < max_fields) {
    auto pos = s.find(sep, start);
    if (pos == std::string::npos) break;
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  out.push_back(s.substr(start));
  return out;
}
}  // namespace

TraceLine to_line(const IterationRecord& rec) {
  return TraceLine{rec.k, rec.D, rec.k_hat, rec.psi, rec.digits_computed, rec.digits_elided,
                   sqrt_decimal(rec.residual_sq, 40)};
}

void write_trace(std::ostream& os, const SolverTrace& trace, const VerificationReport* report) {
  os << "# sdsi-trace mode=" << to_string(trace.mode) << " radix=" << trace.radix
     << " w=" << trace.int_len << " L=" << trace.frac_len << " delay=" << trace.delay
     << " eta=" << to_compact(trace.eta) << " stop=" << to_string(trace.stop) << '\n';
  os << kColumns << '\n';
  for (const auto& rec : trace.records) {
    TraceLine l = to_line(rec);
    os << l.k << ',' << l.D << ',';
    if (l.k_hat) os << *l.k_hat;
    os << ',' << l.psi << ',' << l.digits_computed << ',' << l.digits_elided << ','
       << l.residual_2norm << '\n';
  }
  if (report) {
    for (const auto& v : report->violations)
      os << "violation," << v.check << ',' << v.k << ',' << v.j << ',' << v.detail << '\n';
  }
}

TraceDocument read_trace(std::istream& is) {
  TraceDocument doc;
  std::string line;
  bool columns = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      doc.header = line;
      continue;
    }
    if (line == kColumns) {
      columns = true;
      continue;
    }
    if (line.rfind("violation,", 0) == 0) {
      auto f = split(line, ',', 5);
      if (f.size() != 5 || f[1].size() != 1) throw std::runtime_error("bad violation record: " + line);
      doc.violations.push_back({f[1][0], std::stoul(f[2]), std::stoul(f[3]), f[4]});
      continue;
    }
    if (!columns) throw std::runtime_error("trace record before column line");
    auto f = split(line, ',', 7);
    if (f.size() != 7) throw std::runtime_error("bad trace record: " + line);
    TraceLine t;
    t.k = std::stoul(f[0]);
    t.D = std::stoul(f[1]);
    if (!f[2].empty()) t.k_hat = std::stoul(f[2]);
    t.psi = std::stol(f[3]);
    t.digits_computed = std::stoull(f[4]);
    t.digits_elided = std::stoull(f[5]);
    t.residual_2norm = f[6];
    doc.lines.push_back(std::move(t));
  }
  return doc;
}

}  // namespace sdsi
