#include <doctest.h>

#include "sdsi/experiment.hpp"

#include <sstream>

using namespace sdsi;

namespace {

ExperimentConfig cfg_for(RunMode mode, Rational eta, std::uint64_t seed = 1) {
  ExperimentConfig c;
  c.m = "1";
  c.eta = eta;
  c.mode = mode;
  c.seed = seed;
  return c;
}

const CsvRow& summary_row(const ExperimentResult& r) {
  for (const auto& row : r.rows)
    if (row.k == "summary") return row;
  FAIL("no summary row");
  return r.rows.front();
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("gen_system") {
  auto [A0, b0] = gen_system("0", 7);
  CHECK(A0 == RationalMatrix::identity(2));
  auto [A1, b1] = gen_system("1", 7);
  CHECK(A1(0, 1) == Rational(1, 2));
  CHECK(A1(1, 0) == Rational(1, 2));
  CHECK(b0 == b1);  // same seed, same draws
  for (const auto& v : b1) {
    CHECK(v >= 0);
    CHECK(v < 1);
    CHECK(v * pow_r(2, 64) == floor_rational(v * pow_r(2, 64)));
  }
  // 1 - 2^-2.5 to 50 significant digits.
  Rational ref = parse_rational("0.82322330470336311889978890947378774017879101557788");
  Rational c = off_diagonal("2.5");
  CHECK(abs(c - ref) < pow_r(2, -64));
  CHECK(c * pow_r(2, 64) == floor_rational(c * pow_r(2, 64)));
  CHECK(off_diagonal("8") == 1 - pow_r(2, -8));
  CHECK_THROWS(off_diagonal("-1"));
  CHECK(gen_system("1", 8).second != b1);
}

TEST_CASE("config validation") {
  auto c = cfg_for(RunMode::stable_elide, Rational(0));
  CHECK_THROWS(c.validate());
  c.eta = Rational(3, 2);
  CHECK_THROWS(c.validate());
  c.eta = 1;
  CHECK_NOTHROW(c.validate());
  c.mode = RunMode::lsd;
  c.precision = 80;
  CHECK_THROWS(c.validate());
  CHECK_THROWS(parse_run_mode("fast"));
  for (auto m : {RunMode::stable_elide, RunMode::delay_elide, RunMode::no_elide, RunMode::lsd})
    CHECK(parse_run_mode(to_string(m)) == m);
}

TEST_CASE("deterministic CSV") {
  auto a = run_experiment(cfg_for(RunMode::stable_elide, pow_r(2, -32), 9));
  auto b = run_experiment(cfg_for(RunMode::stable_elide, pow_r(2, -32), 9));
  std::ostringstream sa, sb;
  write_csv(sa, a.rows);
  write_csv(sb, b.rows);
  CHECK(sa.str() == sb.str());
  CHECK_FALSE(sa.str().empty());
}

TEST_CASE("summary accounting") {
  for (auto mode : {RunMode::stable_elide, RunMode::delay_elide, RunMode::no_elide}) {
    auto r = run_experiment(cfg_for(mode, pow_r(2, -32), 3));
    std::uint64_t c = 0, e = 0;
    std::size_t iters = 0;
    for (const auto& row : r.rows) {
      if (row.k == "summary" || row.k.rfind("comparator", 0) == 0) continue;
      c += std::stoull(row.digits_computed);
      e += std::stoull(row.digits_elided);
      ++iters;
    }
    CHECK(c == r.summary.digits_computed);
    CHECK(e == r.summary.digits_elided);
    CHECK(iters == r.summary.iterations);
    const auto& s = summary_row(r);
    CHECK(s.digits_computed == std::to_string(c));
    CHECK(s.digits_elided == std::to_string(e));
    CHECK(s.converged == "1");
  }
}

TEST_CASE("elision onset at m = 1") {
  auto at = [](RunMode mode, int e) { return run_experiment(cfg_for(mode, pow_r(2, -e))).summary; };
  CHECK(at(RunMode::stable_elide, 4).digits_elided == 0);
  CHECK(at(RunMode::stable_elide, 8).digits_elided > 0);
  CHECK(at(RunMode::delay_elide, 8).digits_elided == 0);
  CHECK(at(RunMode::delay_elide, 16).digits_elided > 0);
}

TEST_CASE("verification in run_experiment") {
  auto c = cfg_for(RunMode::stable_elide, pow_r(2, -20));
  c.verify = true;
  auto r = run_experiment(c);
  REQUIRE(r.report);
  CHECK(r.report->ok());
  CHECK_FALSE(r.invariant_violation());
}

TEST_CASE("lsd rows") {
  auto c = cfg_for(RunMode::lsd, pow_r(2, -6));
  c.m = "3";
  c.precision = 8;
  auto r = run_experiment(c);
  CHECK_FALSE(r.summary.converged);
  CHECK(r.summary.stop == "non_convergence");
}

TEST_CASE("sweep") {
  auto tmpl = cfg_for(RunMode::stable_elide, 1);
  std::vector<std::string> vals{"2^-4", "2^-8", "2^-16"};
  auto pts = sweep(tmpl, SweepAxis::eta, vals, {RunMode::stable_elide, RunMode::delay_elide}, 3);
  REQUIRE(pts.size() == 6);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(pts[i].value == vals[i / 2]);
    CHECK(pts[i].mode == (i % 2 ? RunMode::delay_elide : RunMode::stable_elide));
  }
  auto serial = sweep(tmpl, SweepAxis::eta, vals, {RunMode::stable_elide, RunMode::delay_elide}, 1);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::ostringstream a, b;
    write_csv(a, pts[i].result.rows);
    write_csv(b, serial[i].result.rows);
    CHECK(a.str() == b.str());
  }
  auto ratios = elision_ratios(pts);
  CHECK(ratios.total_gap >= 0);
  CHECK_THROWS(sweep(tmpl, SweepAxis::eta, vals, {}, 1));
  CHECK_THROWS(sweep(tmpl, SweepAxis::eta, {}, {RunMode::lsd}, 1));
}

}
