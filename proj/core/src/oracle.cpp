#include "sdsi/oracle.hpp"

#include "sdsi/stability.hpp"

#include <algorithm>
#include <sstream>

namespace sdsi {

RationalVector exact_solve(const RationalMatrix& A, const RationalVector& b) {
  return gauss_solve(A, b);
}

std::vector<RationalVector> exact_orbit(const SystemSpec& spec, const RationalVector& x0,
                                        std::size_t K) {
  std::vector<RationalVector> orbit{x0};
  orbit.reserve(K + 1);
  for (std::size_t k = 0; k < K; ++k) {
    RationalVector x = spec.G * orbit.back();
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += spec.c[i];
    orbit.push_back(std::move(x));
  }
  return orbit;
}

std::size_t VerificationReport::count(char check) const {
  return static_cast<std::size_t>(std::count_if(violations.begin(), violations.end(),
                                                [&](const Violation& v) { return v.check == check; }));
}

std::vector<std::vector<std::size_t>> settled_prefix_lengths(const SolverTrace& trace) {
  const auto& xs = trace.approximants;
  std::vector<std::vector<std::size_t>> settled(xs.size());
  if (xs.empty()) return settled;
  const std::size_t n = xs.front().size();
  settled.back().assign(n, trace.total_digits());
  for (std::size_t k = xs.size() - 1; k-- > 0;) {
    settled[k].resize(n);
    for (std::size_t j = 0; j < n; ++j)
      settled[k][j] = std::min(common_msd_count(xs[k][j], xs[k + 1][j]), settled[k + 1][j]);
  }
  return settled;
}

namespace {

std::string str(const Rational& q) { return to_decimal(q, 12); }

// Exact contraction check along the orbit s^(k+1) = G s^(k), kept as integer
// numerators over a shared denominator to avoid gcd work on long runs.
void check_contraction(const SystemSpec& spec, const RationalVector& x0, const RationalVector& xs,
                       std::size_t K, std::vector<Violation>& out) {
  const std::size_t n = spec.n;
  Integer dG = 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) mpz_lcm(dG.get_mpz_t(), dG.get_mpz_t(), spec.G(i, j).get_den_mpz_t());
  std::vector<Integer> Gi(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Rational v = spec.G(i, j) * dG;
      Gi[i * n + j] = v.get_num();
    }
  Integer d0 = 1;
  RationalVector s0(n);
  for (std::size_t j = 0; j < n; ++j) {
    s0[j] = x0[j] - xs[j];
    mpz_lcm(d0.get_mpz_t(), d0.get_mpz_t(), s0[j].get_den_mpz_t());
  }
  std::vector<Integer> s(n), t(n);
  for (std::size_t j = 0; j < n; ++j) {
    Rational v = s0[j] * d0;
    s[j] = v.get_num();
  }
  const Integer& p = spec.g_norm.get_num();
  const Integer& q = spec.g_norm.get_den();
  auto norm = [](const std::vector<Integer>& v) {
    Integer m = 0;
    for (const auto& e : v) {
      Integer a = ::abs(e);
      if (a > m) m = a;
    }
    return m;
  };
  Integer prev = norm(s);
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (Gi[i * n + j] != 0) t[i] += Gi[i * n + j] * s[j];
    }
    std::swap(s, t);
    Integer cur = norm(s);
    // ||s'|| / (d0 dG^(k+1)) <= g ||s|| / (d0 dG^k)  <=>  q ||s'|| <= p dG ||s||
    if (q * cur > p * dG * prev) {
      out.push_back({'e', k + 1, 0, "exact orbit residue failed to contract"});
    }
    prev = std::move(cur);
  }
}

}  // namespace

VerificationReport verify(const SolverTrace& trace, const SystemSpec& spec) {
  VerificationReport rep;
  rep.x_star = exact_solve(spec.A, spec.b);
  const auto& xs = trace.approximants;
  const std::size_t n = spec.n;
  const int r = trace.radix;
  const long w = trace.int_len;
  const bool infer = spec.g_norm > 0;

  std::vector<RationalVector> vals;
  vals.reserve(xs.size());
  for (const auto& x : xs) vals.push_back(values(x));

  auto settled = settled_prefix_lengths(trace);

  for (std::size_t k = 1; k < xs.size(); ++k) {
    const auto& rec = trace.records[k - 1];
    VerificationEntry e;
    e.k = k;
    Rational res = 0, diff = 0;
    for (std::size_t j = 0; j < n; ++j) {
      Rational a = abs(vals[k][j] - rep.x_star[j]);
      if (a > res) res = a;
      Rational d = abs(vals[k][j] - vals[k - 1][j]);
      if (d > diff) diff = d;
    }
    e.residue_inf = res;

    if (infer) {
      // (b) residue bound from the D shared by x^(k-1) and x^(k), anchor-scaled.
      Rational bound = residue_bound(static_cast<long>(rec.D), spec.g_norm, r) * pow_r(r, w);
      e.residue_bound = bound;
      if (!(res < bound)) {
        e.residue_ok = false;
        rep.violations.push_back({'b', k, 0,
                                  "||x^(k) - x*|| = " + str(res) + " not below " + str(bound) +
                                      " (D=" + std::to_string(rec.D) + ")"});
      }
    }
    // (c) successive difference below 2 r^(w - D).
    Rational dbound = 2 * pow_r(r, w - static_cast<long>(rec.D));
    if (!(diff < dbound)) {
      e.difference_ok = false;
      rep.violations.push_back({'c', k, 0, "successive difference " + str(diff) + " not below " +
                                               str(dbound)});
    }

    const long psi = rec.psi;
    if (psi > 0) {
      for (std::size_t j = 0; j < n; ++j) {
        // (a) declared-stable digits never change later.
        if (settled[k][j] < static_cast<std::size_t>(psi)) {
          std::ostringstream os;
          os << "declared " << psi << " stable digits but digit " << settled[k][j]
             << " changes in a later approximant";
          rep.violations.push_back({'a', k, j, os.str()});
        }
      }
    }
    if (rec.k_hat) {
      // (d) x* lies in the representation interval of the psi-digit prefix.
      for (std::size_t j = 0; j < n; ++j) {
        Rational radius = pow_r(r, w - std::max(0L, psi));
        Rational pv = Rational(eval_prefix_scaled(xs[k][j], static_cast<std::size_t>(std::max(0L, psi)))) *
                      pow_r(r, w - std::max(0L, psi));
        pv.canonicalize();
        if (!(abs(rep.x_star[j] - pv) < radius)) {
          e.consistency_ok = false;
          rep.violations.push_back({'d', k, j,
                                    "x* not consistent with the " + std::to_string(psi) +
                                        "-digit stable prefix"});
        }
      }
    }
    rep.entries.push_back(std::move(e));
  }

  // (e) contraction along the exact orbit from the same starting point.
  if (!xs.empty() && xs.size() > 1) check_contraction(spec, vals[0], rep.x_star, xs.size() - 1, rep.violations);
  std::stable_sort(rep.violations.begin(), rep.violations.end(),
                   [](const Violation& a, const Violation& b) { return a.k < b.k; });
  return rep;
}

ControlComparison compare_with_control(const SolverTrace& run, const SolverTrace& control) {
  ControlComparison c;
  c.same_iterations = run.iterations() == control.iterations();
  const std::size_t K = std::min(run.approximants.size(), control.approximants.size());
  for (std::size_t k = 0; k < K; ++k) {
    if (run.approximants[k] != control.approximants[k]) {
      ++c.differing_approximants;
      if (!c.first_difference) c.first_difference = k;
    }
  }
  c.final_identical = c.same_iterations && run.approximants.back() == control.approximants.back();
  return c;
}

}  // namespace sdsi
