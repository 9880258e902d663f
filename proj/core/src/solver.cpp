#include "sdsi/solver.hpp"

#include "sdsi/datapath.hpp"
#include "sdsi/online.hpp"

#include <algorithm>
#include <stdexcept>

namespace sdsi {

const char* to_string(ElisionMode m) {
  switch (m) {
    case ElisionMode::stable: return "stable-elide";
    case ElisionMode::delay: return "delay-elide";
    case ElisionMode::none: return "no-elide";
  }
  return "?";
}

ElisionMode parse_elision_mode(const std::string& s) {
  if (s == "stable-elide" || s == "stable") return ElisionMode::stable;
  if (s == "delay-elide" || s == "delay") return ElisionMode::delay;
  if (s == "no-elide" || s == "none") return ElisionMode::none;
  throw std::invalid_argument("unknown elision mode: " + s);
}

const char* to_string(StopReason s) {
  switch (s) {
    case StopReason::converged: return "converged";
    case StopReason::iteration_cap: return "iteration_cap";
    case StopReason::memory_cap: return "memory_cap";
    case StopReason::precision_floor: return "precision_floor";
  }
  return "?";
}

int row_datapath_delay(std::size_t terms, int delta_mul, int delta_add) {
  if (terms == 0) return 0;
  DigitSet ds(2);
  DatapathGraph g;
  std::vector<DatapathGraph::Port> level;
  for (std::size_t t = 0; t < terms; ++t) {
    auto in = g.add_input();
    auto node = g.add_node(OnlineOperator::const_mul(ds, Rational(1, 2), 0, {}, delta_mul));
    g.connect(DatapathGraph::input(in), node, 0);
    level.push_back(DatapathGraph::node(node));
  }
  while (level.size() > 1) {
    std::vector<DatapathGraph::Port> next;
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
      auto node = g.add_node(OnlineOperator::add(ds, 0, {}, delta_add));
      g.connect(level[i], node, 0);
      g.connect(level[i + 1], node, 1);
      next.push_back(DatapathGraph::node(node));
    }
    if (level.size() % 2) next.push_back(level.back());
    level = std::move(next);
  }
  auto last = g.add_node(OnlineOperator::const_add(ds, Rational(1, 2), 0, {}, delta_add));
  g.connect(level.front(), last, 0);
  g.add_output(DatapathGraph::node(last));
  return g.delay();
}

int default_int_len(const SystemSpec& spec, const RationalVector& x0) {
  Rational X = inf_norm(x0);
  if (!spec.c.empty()) {
    Rational bound = inf_norm(spec.c) / (1 - spec.g_norm);
    if (bound > X) X = bound;
  }
  int w = 1;
  while (pow_r(spec.radix, w - 1) < X) ++w;
  return w;
}

int default_frac_len(const Rational& eta, int radix, int guard_digits) {
  if (eta <= 0) throw std::invalid_argument("eta must be positive");
  long need = -floor_log(eta, radix);  // ceil(-log_r eta)
  return static_cast<int>(std::max(0L, need)) + guard_digits;
}

RationalVector values(const std::vector<SDNumber>& x) {
  RationalVector v;
  v.reserve(x.size());
  for (const auto& e : x) v.push_back(eval(e));
  return v;
}

Rational residual_sq(const SystemSpec& spec, const RationalVector& x) {
  RationalVector r = spec.A * x;
  Rational s = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    Rational d = r[i] - spec.b[i];
    s += d * d;
  }
  return s;
}

bool terminate(const std::vector<SDNumber>& x, const SystemSpec& spec, const Rational& eta) {
  return residual_sq(spec, values(x)) < eta * eta;
}

Solver::Solver(const SystemSpec& spec, Rational eta, SolverConfig config)
    : spec_(spec), cfg_(std::move(config)), ds_(spec.radix) {
  if (eta <= 0) throw std::invalid_argument("eta must be positive");
  const std::size_t n = spec_.n;
  RationalVector x0 = cfg_.x0.value_or(RationalVector(n, Rational(0)));
  if (x0.size() != n) throw std::invalid_argument("x0 has the wrong length");

  trace_.mode = cfg_.mode;
  trace_.strict_single_trigger = cfg_.strict_single_trigger;
  trace_.radix = spec_.radix;
  trace_.eta = eta;
  trace_.int_len = cfg_.int_len.value_or(default_int_len(spec_, x0));
  trace_.frac_len = cfg_.frac_len.value_or(default_frac_len(eta, spec_.radix, cfg_.guard_digits));
  eta_sq_ = eta * eta;
  if (!spec_.degenerate()) growth_ = GrowthModel::from(spec_);

  const int w = trace_.int_len;
  const int anchor = w - 1;
  std::size_t max_terms = 0;
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t t = 0;
    for (std::size_t l = 0; l < n; ++l)
      if (spec_.G(j, l) != 0) ++t;
    max_terms = std::max(max_terms, t);
  }
  trace_.delay = row_datapath_delay(max_terms, cfg_.delta_mul, cfg_.delta_add);

  for (std::size_t j = 0; j < n; ++j) {
    std::vector<LinearOnlineOperator::Input> ins;
    std::vector<std::size_t> idx;
    for (std::size_t l = 0; l < n; ++l) {
      if (spec_.G(j, l) == 0) continue;
      ins.push_back({spec_.G(j, l), anchor});
      idx.push_back(l);
    }
    rows_.emplace_back(ds_, trace_.delay, std::move(ins), spec_.c[j], anchor);
    row_inputs_.push_back(std::move(idx));
  }

  std::vector<SDNumber> first;
  for (const auto& v : x0) first.push_back(recode(v, ds_, w, trace_.frac_len));
  trace_.approximants.push_back(std::move(first));
  if (residual_sq(spec_, values(trace_.approximants[0])) < eta_sq_) {
    trace_.stop = StopReason::converged;
    done_ = true;
  }
}

std::size_t Solver::elision_count() const {
  const std::size_t tot = trace_.total_digits();
  const std::size_t k = trace_.records.size();
  long e = 0;
  switch (cfg_.mode) {
    case ElisionMode::none: e = 0; break;
    case ElisionMode::stable: e = trace_.psi_of(k); break;
    case ElisionMode::delay:
      if (k >= 1) e = static_cast<long>(trace_.records[k - 1].D) - trace_.delay;
      break;
  }
  return static_cast<std::size_t>(std::clamp<long>(e, 0, static_cast<long>(tot)));
}

void Solver::update_trigger(IterationRecord& rec) {
  const long tot = static_cast<long>(trace_.total_digits());
  if (!growth_) return;  // G = 0: nothing to infer
  const long k = static_cast<long>(rec.k);
  if (rec.D > 0) {
    if (!k_hat_) {
      k_hat_ = rec.k;
      D_hat_ = rec.D;
    } else if (!cfg_.strict_single_trigger) {
      long current = psi(static_cast<long>(D_hat_), k, static_cast<long>(*k_hat_), *growth_);
      long candidate = psi(static_cast<long>(rec.D), k, k, *growth_);
      if (candidate > current) {
        k_hat_ = rec.k;
        D_hat_ = rec.D;
      }
    }
  }
  if (k_hat_) {
    rec.k_hat = k_hat_;
    rec.D_trigger = D_hat_;
    rec.psi = psi(static_cast<long>(D_hat_), k, static_cast<long>(*k_hat_), *growth_, tot);
  }
}

bool Solver::iterate() {
  if (done_) return false;
  const std::size_t n = spec_.n;
  const std::size_t tot = trace_.total_digits();
  const std::size_t k = trace_.records.size();  // generating x^(k+1)

  if (k >= cfg_.max_iterations) {
    trace_.stop = StopReason::iteration_cap;
    done_ = true;
    return false;
  }
  if (static_cast<std::uint64_t>(k + 2) * n * tot > cfg_.max_digits) {
    trace_.stop = StopReason::memory_cap;
    done_ = true;
    return false;
  }

  const auto& prev = trace_.approximants.back();
  const std::size_t e = elision_count();
  const std::size_t Delta = static_cast<std::size_t>(trace_.delay);

  IterationRecord rec;
  rec.k = k + 1;
  std::vector<SDNumber> next;
  next.reserve(n);
  std::vector<const Digit*> ptrs;
  std::vector<Rational> prefix_values;
  for (std::size_t j = 0; j < n; ++j) {
    auto& op = rows_[j];
    const auto& idx = row_inputs_[j];
    ptrs.clear();
    for (std::size_t l : idx) ptrs.push_back(prev[l].digits().data());

    std::vector<Digit> digits;
    digits.reserve(tot);
    if (e == 0) {
      op.reset();
    } else {
      // Resume where a full run would be after emitting the copied prefix.
      const std::size_t consumed = e + Delta;
      prefix_values.clear();
      for (std::size_t l : idx) {
        Rational v(eval_prefix_scaled(prev[l], consumed),
                   Integer(1));
        std::size_t used = std::min(consumed, prev[l].size());
        v *= pow_r(spec_.radix, static_cast<long>(trace_.int_len) - static_cast<long>(used));
        prefix_values.push_back(v);
      }
      digits.assign(prev[j].digits().begin(), prev[j].digits().begin() + static_cast<std::ptrdiff_t>(e));
      op.restore(prefix_values, consumed, digits);
    }
    op.generate(ptrs, tot, tot, digits);
    next.emplace_back(ds_, trace_.int_len, std::move(digits));
  }
  rec.digits_elided = static_cast<std::uint64_t>(e) * n;
  rec.digits_computed = static_cast<std::uint64_t>(tot - e) * n;

  std::size_t cmp = 0;
  rec.D = detect(prev, next, &cmp);
  rec.comparisons = cmp;
  rec.residual_sq = residual_sq(spec_, values(next));
  update_trigger(rec);

  trace_.work.digits_computed += rec.digits_computed;
  trace_.work.digits_elided += rec.digits_elided;
  trace_.work.comparisons += rec.comparisons;
  trace_.work.iterations += 1;
  trace_.approximants.push_back(std::move(next));
  const bool stalled = rec.D == tot;
  const bool conv = rec.residual_sq < eta_sq_;
  trace_.records.push_back(std::move(rec));

  if (conv || spec_.degenerate()) {
    trace_.stop = conv ? StopReason::converged : StopReason::precision_floor;
    done_ = true;
  } else if (stalled) {
    trace_.stop = StopReason::precision_floor;
    done_ = true;
  }
  return !done_;
}

SolveResult Solver::finish() && {
  while (iterate()) {
  }
  SolveResult out;
  out.solution = trace_.approximants.back();
  out.trace = std::move(trace_);
  return out;
}

SolveResult solve(const SystemSpec& spec, const Rational& eta, const SolverConfig& config) {
  Solver s(spec, eta, config);
  return std::move(s).finish();
}

}  // namespace sdsi
