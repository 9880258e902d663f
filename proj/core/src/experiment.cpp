#include "sdsi/experiment.hpp"

#include <mpfr.h>

#include <algorithm>
#include <atomic>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>

namespace sdsi {

const char* to_string(RunMode m) {
  switch (m) {
    case RunMode::stable_elide: return "stable-elide";
    case RunMode::delay_elide: return "delay-elide";
    case RunMode::no_elide: return "no-elide";
    case RunMode::lsd: return "lsd";
  }
  return "?";
}

RunMode parse_run_mode(const std::string& s) {
  if (s == "stable-elide") return RunMode::stable_elide;
  if (s == "delay-elide") return RunMode::delay_elide;
  if (s == "no-elide") return RunMode::no_elide;
  if (s == "lsd") return RunMode::lsd;
  throw std::invalid_argument("unknown mode: " + s);
}

void ExperimentConfig::validate() const {
  Rational mv = parse_rational(m);
  if (mv < 0) throw std::invalid_argument("m must be non-negative");
  if (eta <= 0 || eta > 1) throw std::invalid_argument("eta must lie in (0, 1]");
  if (radix < 2) throw std::invalid_argument("radix must be >= 2");
  if (mode == RunMode::lsd && (precision < 2 || precision > 62))
    throw std::invalid_argument("lsd precision must be in [2, 62]");
}

Rational off_diagonal(const std::string& m) {
  Rational mv = parse_rational(m);
  if (mv < 0) throw std::invalid_argument("m must be non-negative");
  if (mv.get_den() == 1) return 1 - pow_r(2, -mv.get_num().get_si());
  mpfr_t t;
  mpfr_init2(t, 256);
  mpfr_set_q(t, mv.get_mpq_t(), MPFR_RNDN);
  mpfr_neg(t, t, MPFR_RNDN);
  mpfr_exp2(t, t, MPFR_RNDN);
  mpfr_ui_sub(t, 1, t, MPFR_RNDN);
  mpfr_mul_2ui(t, t, 64, MPFR_RNDN);
  mpfr_rint(t, t, MPFR_RNDN);
  Integer z;
  mpfr_get_z(z.get_mpz_t(), t, MPFR_RNDN);
  mpfr_clear(t);
  Rational c(z, Integer(1));
  c *= pow_r(2, -64);
  c.canonicalize();
  return c;
}

std::pair<RationalMatrix, RationalVector> gen_system(const std::string& m, std::uint64_t seed) {
  Rational c = off_diagonal(m);
  RationalMatrix A{{Rational(1), c}, {c, Rational(1)}};
  std::mt19937_64 rng(seed);
  RationalVector b;
  for (int i = 0; i < 2; ++i) {
    const std::uint64_t draw = rng();
    Integer z;
    mpz_import(z.get_mpz_t(), 1, 1, sizeof(draw), 0, 0, &draw);
    Rational v(z, Integer(1));
    v *= pow_r(2, -64);
    v.canonicalize();
    b.push_back(v);
  }
  return {A, b};
}

namespace {

ElisionMode to_elision(RunMode m) {
  switch (m) {
    case RunMode::stable_elide: return ElisionMode::stable;
    case RunMode::delay_elide: return ElisionMode::delay;
    default: return ElisionMode::none;
  }
}

CsvRow base_row(const ExperimentConfig& cfg) {
  CsvRow r;
  r.mode = to_string(cfg.mode);
  r.m = cfg.m;
  r.eta = to_compact(cfg.eta);
  r.seed = std::to_string(cfg.seed);
  return r;
}

void run_elision(const ExperimentConfig& cfg, const SystemSpec& spec, ExperimentResult& out) {
  SolverConfig sc;
  sc.mode = to_elision(cfg.mode);
  sc.strict_single_trigger = cfg.strict_single_trigger;
  sc.max_iterations = cfg.max_iterations;
  sc.max_digits = cfg.max_digits;
  SolveResult res = solve(spec, cfg.eta, sc);
  const SolverTrace& tr = res.trace;
  const long tot = static_cast<long>(tr.total_digits());
  const std::uint64_t n = spec.n;

  for (const auto& rec : tr.records) {
    CsvRow row = base_row(cfg);
    row.k = std::to_string(rec.k);
    row.D = std::to_string(rec.D);
    row.k_hat = rec.k_hat ? std::to_string(*rec.k_hat) : "";
    row.psi = std::to_string(rec.psi);
    row.digits_computed = std::to_string(rec.digits_computed);
    row.digits_elided = std::to_string(rec.digits_elided);
    row.residual_2norm = sqrt_decimal(rec.residual_sq, 40);
    row.converged = rec.residual_sq < cfg.eta * cfg.eta ? "1" : "0";
    out.rows.push_back(std::move(row));

    if (rec.k_hat) {
      const long k = static_cast<long>(rec.k), kh = static_cast<long>(*rec.k_hat);
      const long D = static_cast<long>(rec.D_trigger);
      out.summary.prev_work_identical_total +=
          n * static_cast<std::uint64_t>(std::min(tot, prev_work_identical(D, tr.delay, k, kh)));
      out.summary.emethod_stable_total +=
          n * static_cast<std::uint64_t>(std::min(tot, emethod_stable(D, k, kh)));
    }
  }
  auto& s = out.summary;
  s.iterations = tr.iterations();
  s.digits_computed = tr.work.digits_computed;
  s.digits_elided = tr.work.digits_elided;
  s.comparisons = tr.work.comparisons;
  s.converged = tr.converged();
  s.stop = to_string(tr.stop);
  s.emethod_applicable = emethod_applicable(spec, spec.b);

  CsvRow sum = base_row(cfg);
  sum.k = "summary";
  sum.D = tr.records.empty() ? "0" : std::to_string(tr.records.back().D);
  sum.k_hat = !tr.records.empty() && tr.records.back().k_hat ? std::to_string(*tr.records.back().k_hat) : "";
  sum.psi = std::to_string(tr.psi_of(tr.records.size()));
  sum.digits_computed = std::to_string(s.digits_computed);
  sum.digits_elided = std::to_string(s.digits_elided);
  sum.residual_2norm = tr.records.empty()
                           ? sqrt_decimal(residual_sq(spec, values(tr.approximants[0])), 40)
                           : sqrt_decimal(tr.records.back().residual_sq, 40);
  sum.converged = s.converged ? "1" : "0";
  out.rows.push_back(sum);

  CsvRow pw = base_row(cfg);
  pw.mode = "comparator:prev-work";
  pw.k = "summary";
  pw.digits_elided = std::to_string(s.prev_work_identical_total);
  out.rows.push_back(pw);
  CsvRow em = base_row(cfg);
  em.mode = s.emethod_applicable ? "comparator:emethod" : "comparator:emethod-inapplicable";
  em.k = "summary";
  em.digits_elided = std::to_string(s.emethod_stable_total);
  out.rows.push_back(em);

  if (cfg.verify) out.report = verify(tr, spec);
  out.trace = std::move(res.trace);
}

void run_lsd(const ExperimentConfig& cfg, const RationalMatrix& A, const RationalVector& b,
             ExperimentResult& out) {
  LsdOptions opt;
  opt.max_iterations = cfg.max_iterations;
  LsdResult res = lsd_solve(A, b, cfg.eta, cfg.precision, opt);
  const Rational eta_sq = cfg.eta * cfg.eta;
  for (std::size_t i = 0; i < res.residual_sq.size(); ++i) {
    CsvRow row = base_row(cfg);
    row.k = std::to_string(i + 1);
    row.digits_computed = std::to_string(static_cast<std::uint64_t>(cfg.precision) * b.size());
    row.digits_elided = "0";
    row.residual_2norm = sqrt_decimal(res.residual_sq[i], 40);
    row.converged = res.residual_sq[i] < eta_sq ? "1" : "0";
    out.rows.push_back(std::move(row));
  }
  auto& s = out.summary;
  s.iterations = res.iterations;
  s.digits_computed = res.digit_ops;
  s.converged = res.converged();
  s.stop = to_string(res.stop);
  CsvRow sum = base_row(cfg);
  sum.k = "summary";
  sum.digits_computed = std::to_string(res.digit_ops);
  sum.digits_elided = "0";
  sum.residual_2norm = res.residual_sq.empty() ? "" : sqrt_decimal(res.residual_sq.back(), 40);
  sum.converged = s.converged ? "1" : "0";
  out.rows.push_back(sum);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentResult out;
  out.config = config;
  auto [A, b] = gen_system(config.m, config.seed);
  if (config.mode == RunMode::lsd) {
    run_lsd(config, A, b, out);
    return out;
  }
  SystemSpec spec = build_jacobi(A, b, config.radix);
  try {
    run_elision(config, spec, out);
  } catch (const SelectionOverflow& e) {
    out.error = e.what();
  }
  return out;
}

std::vector<SweepPoint> sweep(const ExperimentConfig& config_template, SweepAxis axis,
                              const std::vector<std::string>& values,
                              const std::vector<RunMode>& modes, unsigned threads) {
  if (values.empty()) throw std::invalid_argument("sweep: no values");
  if (modes.empty()) throw std::invalid_argument("sweep: no modes");
  std::vector<SweepPoint> points;
  std::vector<ExperimentConfig> configs;
  for (const auto& v : values) {
    for (RunMode mode : modes) {
      ExperimentConfig c = config_template;
      c.mode = mode;
      if (axis == SweepAxis::eta) c.eta = parse_rational(v);
      else c.m = v;
      c.validate();
      configs.push_back(c);
      points.push_back(SweepPoint{v, mode, {}});
    }
  }
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(configs.size()));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < configs.size(); i = next++) {
        try {
          points[i].result = run_experiment(configs[i]);
        } catch (const std::exception& e) {
          points[i].result.config = configs[i];
          points[i].result.error = e.what();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  return points;
}

void write_csv_header(std::ostream& os) {
  os << "mode,m,eta,seed,k,D,k_hat,psi,digits_computed,digits_elided,residual_2norm,converged\n";
}

void write_csv(std::ostream& os, const std::vector<CsvRow>& rows) {
  for (const auto& r : rows) {
    os << r.mode << ',' << r.m << ',' << r.eta << ',' << r.seed << ',' << r.k << ',' << r.D << ','
       << r.k_hat << ',' << r.psi << ',' << r.digits_computed << ',' << r.digits_elided << ','
       << r.residual_2norm << ',' << r.converged << '\n';
  }
}

ElisionRatios elision_ratios(const std::vector<SweepPoint>& points) {
  ElisionRatios out;
  std::vector<std::string> order;
  for (const auto& p : points)
    if (std::find(order.begin(), order.end(), p.value) == order.end()) order.push_back(p.value);
  std::uint64_t st = 0, dt = 0;
  double sum = 0;
  for (const auto& v : order) {
    std::uint64_t s = 0, d = 0;
    for (const auto& p : points) {
      if (p.value != v) continue;
      if (p.mode == RunMode::stable_elide) s = p.result.summary.digits_elided;
      if (p.mode == RunMode::delay_elide) d = p.result.summary.digits_elided;
    }
    st += s;
    dt += d;
    if (s > 0 && d > 0) {
      double r = static_cast<double>(s) / static_cast<double>(d);
      out.per_value.emplace_back(v, r);
      sum += r;
    }
  }
  if (!out.per_value.empty()) out.mean_ratio = sum / static_cast<double>(out.per_value.size());
  if (dt > 0) out.ratio_of_totals = static_cast<double>(st) / static_cast<double>(dt);
  out.total_gap = static_cast<long long>(st) - static_cast<long long>(dt);
  return out;
}

}  // namespace sdsi
