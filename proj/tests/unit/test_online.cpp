#include <doctest.h>

#include "sdsi/datapath.hpp"
#include "sdsi/online.hpp"

#include <random>

using namespace sdsi;

namespace {

const DigitSet kBin(2);


// Value of a digit list anchored at `anchor`.
Rational value_at(const std::vector<Digit>& d, int anchor, int r = 2) {
  Rational v = 0;
  for (std::size_t i = 0; i < d.size(); ++i) v += Rational(d[i]) * pow_r(r, anchor - static_cast<long>(i));
  return v;
}

std::vector<Digit> random_digits(std::mt19937_64& rng, std::size_t n, int r = 2) {
  std::uniform_int_distribution<int> dig(-(r - 1), r - 1);
  std::vector<Digit> d(n);
  for (auto& x : d) x = static_cast<Digit>(dig(rng));
  return d;
}

DigitStream stream_of(const std::vector<Digit>& d, int anchor, int r = 2) {
  auto data = std::make_shared<std::vector<Digit>>(d);
  auto pos = std::make_shared<std::size_t>(0);
  return DigitStream(DigitSet(r), anchor, [data, pos]() -> Digit {
    std::size_t i = (*pos)++;
    return i < data->size() ? (*data)[i] : Digit{0};
  });
}

}  // namespace

TEST_SUITE("online") {

TEST_CASE("zero streams give zero digits") {
  auto s = online_add(DigitStream::zeros(kBin, -1), DigitStream::zeros(kBin, -1));
  for (Digit d : s.take(30)) CHECK(d == 0);
  auto p = online_mul(DigitStream::zeros(kBin, -1), stream_of({1, 1, 0, 1}, -1));
  for (Digit d : p.take(30)) CHECK(d == 0);
}

TEST_CASE("add 3/4 + (-1/4)") {
  // 3/4 = .11, -1/4 = .0(-1) at anchor -1.
  auto s = online_add(stream_of({1, 1}, -1), stream_of({0, -1}, -1));
  CHECK(s.anchor() == 0);
  auto p = s.take(8);
  Rational v = value_at(p, 0);
  CHECK(abs(v - Rational(1, 2)) < pow_r(2, 0 - 7));
}

TEST_CASE("mul 1/2 * 1/2") {
  auto s = online_mul(stream_of({1}, -1), stream_of({1}, -1));
  auto p = s.take(10);
  CHECK(abs(value_at(p, s.anchor()) - Rational(1, 4)) < pow_r(2, s.anchor() - 9));
}

TEST_CASE("const_mul with random rational constants") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> num(-999, 999), den(1, 1000);
  for (int t = 0; t < 100; ++t) {
    Rational c(num(rng), den(rng) + 999);
    c.canonicalize();
    auto a = random_digits(rng, 16);
    auto s = online_const_mul(c, stream_of(a, -1));
    auto p = s.take(20);
    Rational exact = c * value_at(a, -1);
    for (std::size_t n = 1; n <= p.size(); ++n) {
      std::vector<Digit> pre(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(n));
      CHECK(abs(value_at(pre, s.anchor()) - exact) < pow_r(2, s.anchor() - static_cast<long>(n) + 1));
    }
  }
}

TEST_CASE("const_add shifts the value") {
  auto s = online_const_add(Rational(5, 4), stream_of({1, -1, 1}, -1));
  auto p = s.take(12);
  Rational exact = Rational(5, 4) + Rational(3, 8);
  CHECK(abs(value_at(p, s.anchor()) - exact) < pow_r(2, s.anchor() - 11));
}

TEST_CASE("online delay and rate") {
  for (auto op : {OnlineOperator::add(kBin, -1), OnlineOperator::mul(kBin, -1, -1)}) {
    std::vector<Digit> in{1, -1};
    for (int i = 0; i < op.delta(); ++i) {
      CHECK_FALSE(op.pull_digit(in).has_value());
      CHECK(op.produced_count() == 0);
    }
    for (int i = 0; i < 10; ++i) {
      CHECK(op.pull_digit(in).has_value());
      CHECK(op.produced_count() == op.consumed_count() - static_cast<std::size_t>(op.delta()));
    }
  }
  CHECK(OnlineOperator::add(kBin, 0).delta() == 2);
  CHECK(OnlineOperator::mul(kBin, 0, 0).delta() == 3);
}

TEST_CASE("randomized 12-digit inputs") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 200; ++t) {
    auto a = random_digits(rng, 12), b = random_digits(rng, 12);
    for (bool mul : {false, true}) {
      auto op = mul ? OnlineOperator::mul(kBin, -1, -1) : OnlineOperator::add(kBin, -1);
      std::vector<Digit> out;
      for (std::size_t i = 0; i < 12; ++i) {
        std::vector<Digit> in{a[i], b[i]};
        if (auto d = op.pull_digit(in)) out.push_back(*d);
      }
      CHECK(out.size() == 12u - static_cast<std::size_t>(op.delta()));
      Rational exact = mul ? Rational(value_at(a, -1) * value_at(b, -1)) : Rational(value_at(a, -1) + value_at(b, -1));
      // Emitted prefix is within one unit of its last digit of the exact result.
      Rational unit = pow_r(2, op.out_anchor() - static_cast<long>(out.size()) + 1);
      CHECK(abs(value_at(out, op.out_anchor()) - exact) < unit);
      CHECK(unit <= pow_r(2, -9));
    }
  }
}

TEST_CASE("exhausted finite stream") {
  auto s = DigitStream::from_number(SDNumber(kBin, 0, {1, 0}), false);
  s.take(2);
  CHECK_THROWS_AS(s.pull(), std::out_of_range);
  auto z = DigitStream::from_number(SDNumber(kBin, 0, {1, 0}));
  z.take(2);
  CHECK(z.pull() == 0);
}

TEST_CASE("mismatched streams rejected") {
  CHECK_THROWS(online_add(DigitStream::zeros(kBin, 0), DigitStream::zeros(kBin, -1)));
  CHECK_THROWS(online_add(DigitStream::zeros(kBin, 0), DigitStream::zeros(DigitSet(10), 0)));
  CHECK_THROWS(online_mul(DigitStream::zeros(kBin, 0), DigitStream::zeros(DigitSet(10), 0)));
}

TEST_CASE("datapath delay") {
  DatapathGraph single;
  auto i0 = single.add_input(), i1 = single.add_input();
  auto add = single.add_node(OnlineOperator::add(kBin, 0));
  single.connect(DatapathGraph::input(i0), add, 0);
  single.connect(DatapathGraph::input(i1), add, 1);
  single.add_output(DatapathGraph::node(add));
  CHECK(single.delay() == 2);

  DatapathGraph fig3;
  auto x = fig3.add_input();
  auto m = fig3.add_node(OnlineOperator::const_mul(kBin, Rational(-1, 2), 0));
  auto c = fig3.add_node(OnlineOperator::const_add(kBin, Rational(1, 4), 0));
  fig3.connect(DatapathGraph::input(x), m, 0);
  fig3.connect(DatapathGraph::node(m), c, 0);
  fig3.add_output(DatapathGraph::node(c));
  CHECK(fig3.delay() == 5);

  DatapathGraph par;
  auto a = par.add_input(), b = par.add_input();
  auto m1 = par.add_node(OnlineOperator::mul(kBin, 0, 0));
  auto m2 = par.add_node(OnlineOperator::mul(kBin, 0, 0));
  auto s = par.add_node(OnlineOperator::add(kBin, 1));
  par.connect(DatapathGraph::input(a), m1, 0);
  par.connect(DatapathGraph::input(b), m1, 1);
  par.connect(DatapathGraph::input(a), m2, 0);
  par.connect(DatapathGraph::input(b), m2, 1);
  par.connect(DatapathGraph::node(m1), s, 0);
  par.connect(DatapathGraph::node(m2), s, 1);
  par.add_output(DatapathGraph::node(s));
  CHECK(par.delay() == 5);

  DatapathGraph cyc;
  auto n1 = cyc.add_node(OnlineOperator::const_add(kBin, Rational(0), 0));
  auto n2 = cyc.add_node(OnlineOperator::const_add(kBin, Rational(0), 0));
  cyc.connect(DatapathGraph::node(n1), n2, 0);
  cyc.connect(DatapathGraph::node(n2), n1, 0);
  cyc.add_output(DatapathGraph::node(n2));
  CHECK_THROWS_AS(cyc.delay(), std::logic_error);
}

TEST_CASE("composed datapath honours the summed delay") {
  // y = (-1/2) x + 1/4 through const_mul then const_add.
  DatapathGraph g;
  auto x = g.add_input();
  auto m = g.add_node(OnlineOperator::const_mul(kBin, Rational(-1, 2), -1, -1));
  auto c = g.add_node(OnlineOperator::const_add(kBin, Rational(1, 4), -1, 0));
  g.connect(DatapathGraph::input(x), m, 0);
  g.connect(DatapathGraph::node(m), c, 0);
  g.add_output(DatapathGraph::node(c));
  std::mt19937_64 rng(23);
  for (int t = 0; t < 50; ++t) {
    auto in = random_digits(rng, 20);
    DatapathExecutor ex(g);
    std::vector<Digit> out;
    for (std::size_t i = 0; i < 30; ++i) {
      Digit d = i < in.size() ? in[i] : Digit{0};
      auto o = ex.step(std::span<const Digit>(&d, 1));
      out.insert(out.end(), o[0].begin(), o[0].end());
      CHECK(out.size() == (i + 1 > 5 ? i + 1 - 5 : 0));
    }
    Rational exact = Rational(-1, 2) * value_at(in, -1) + Rational(1, 4);
    CHECK(abs(value_at(out, 0) - exact) < pow_r(2, 0 - static_cast<long>(out.size()) + 1));
  }
}

TEST_CASE("restore reproduces the replayed state") {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 100; ++t) {
    auto a = random_digits(rng, 30), b = random_digits(rng, 30);
    std::vector<LinearOnlineOperator::Input> ins{{Rational(-3, 8), 0}, {Rational(5, 16), 0}};
    LinearOnlineOperator full(kBin, 5, ins, Rational(1, 3), 1);
    const Digit* ptrs[] = {a.data(), b.data()};
    std::vector<Digit> ref;
    full.generate(ptrs, 30, 30, ref);

    std::size_t e = 1 + static_cast<std::size_t>(t % 20);
    LinearOnlineOperator resumed(kBin, 5, ins, Rational(1, 3), 1);
    std::vector<Rational> pv{value_at({a.begin(), a.begin() + static_cast<long>(e + 5)}, 0),
                             value_at({b.begin(), b.begin() + static_cast<long>(e + 5)}, 0)};
    std::vector<Digit> out(ref.begin(), ref.begin() + static_cast<long>(e));
    resumed.restore(pv, e + 5, out);
    resumed.generate(ptrs, 30, 30, out);
    CHECK(out == ref);
  }
}

TEST_CASE("wide constants fall back to big-integer residuals") {
  Rational c(Integer(1), Integer(1) << 200);
  c += Rational(1, 3);
  LinearOnlineOperator op(kBin, 3, {{c, -1}}, Rational(0), -1);
  CHECK_FALSE(op.uses_native_residual());
  std::vector<Digit> a{1, 1, -1, 1, 0, 1};
  const Digit* p[] = {a.data()};
  std::vector<Digit> out;
  op.generate(p, a.size(), 40, out);
  Rational exact = c * value_at(a, -1);
  CHECK(abs(value_at(out, -1) - exact) < pow_r(2, -1 - 39));

  LinearOnlineOperator small(kBin, 3, {{Rational(1, 3), -1}}, Rational(0), -1);
  CHECK(small.uses_native_residual());
}

TEST_CASE("radix 10 operators") {
  DigitSet dec(10);
  std::mt19937_64 rng(31);
  for (int t = 0; t < 50; ++t) {
    auto a = random_digits(rng, 10, 10), b = random_digits(rng, 10, 10);
    auto s = online_add(stream_of(a, -1, 10), stream_of(b, -1, 10));
    auto p = s.take(14);
    Rational exact = value_at(a, -1, 10) + value_at(b, -1, 10);
    CHECK(abs(value_at(p, s.anchor(), 10) - exact) < pow_r(10, s.anchor() - 13));
  }
}


TEST_CASE("tail mutation never changes earlier outputs") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> dig(-1, 1);
  for (int t = 0; t < 100; ++t) {
    auto a = random_digits(rng, 24), b = random_digits(rng, 24);
    bool mul = t % 2;
    auto run = [&](const std::vector<Digit>& x, const std::vector<Digit>& y) {
      auto op = mul ? OnlineOperator::mul(kBin, -1, -1) : OnlineOperator::add(kBin, -1);
      std::vector<Digit> out;
      for (std::size_t i = 0; i < 24; ++i) {
        std::vector<Digit> in{x[i], y[i]};
        if (auto d = op.pull_digit(in)) out.push_back(*d);
      }
      return std::pair{out, op.delta()};
    };
    auto [ref, delta] = run(a, b);
    std::size_t n = static_cast<std::size_t>(t) % ref.size();
    auto a2 = a, b2 = b;
    for (std::size_t i = n + static_cast<std::size_t>(delta); i < 24; ++i) {
      a2[i] = static_cast<Digit>(dig(rng));
      b2[i] = static_cast<Digit>(dig(rng));
    }
    auto [mut, d2] = run(a2, b2);
    CHECK(std::equal(ref.begin(), ref.begin() + static_cast<long>(n), mut.begin()));
  }
}

}
