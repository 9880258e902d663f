#include <doctest.h>

#include "sdsi/sd_number.hpp"

#include <random>

using namespace sdsi;

namespace {
SDNumber num(int r, int w, std::vector<Digit> d) { return SDNumber(DigitSet(r), w, std::move(d)); }

// Independent evaluation: plain sum of d_i r^(w-1-i).
Rational slow_eval(const SDNumber& x) {
  Rational v = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    v += Rational(x[i]) * pow_r(x.radix(), x.int_len() - 1 - static_cast<long>(i));
  return v;
}
}  // namespace

TEST_SUITE("sdrep") {

TEST_CASE("digit set bounds") {
  CHECK_NOTHROW(DigitSet(2));
  CHECK(DigitSet(10).gamma() == 9);
  CHECK_NOTHROW(DigitSet(10, 5));
  CHECK_THROWS(DigitSet(10, 4));
  CHECK_THROWS(DigitSet(2, 0));
  CHECK_THROWS(DigitSet(10, 10));
  CHECK_THROWS(DigitSet(1));
  CHECK_THROWS(num(2, 1, {2}));
}

TEST_CASE("eval") {
  CHECK(eval(num(10, 1, {1, 2, 5, 0, 0, 0, 0})) == Rational(5, 4));
  CHECK(eval(num(10, 1, {1, 0, 0, -4, 1, -1, 3})) == Rational(996093, 1000000));
  CHECK(eval(num(2, 1, {1, -1, 1})) == Rational(3, 4));
  CHECK(eval(num(2, 0, {})) == 0);
}

TEST_CASE("eval matches direct summation") {
  std::mt19937_64 rng(7);
  for (int r : {2, 3, 10, 16}) {
    std::uniform_int_distribution<int> dig(-(r - 1), r - 1), len(0, 40), wl(0, 5);
    for (int t = 0; t < 200; ++t) {
      int w = wl(rng);
      std::vector<Digit> d(static_cast<std::size_t>(w + len(rng)));
      for (auto& x : d) x = static_cast<Digit>(dig(rng));
      SDNumber x(DigitSet(r), w, d);
      CHECK(eval(x) == slow_eval(x));
    }
  }
}

TEST_CASE("consistency is an open interval") {
  SDNumber x = num(2, 0, {1, 1});
  CHECK(eval(x) == Rational(3, 4));
  CHECK(consistent(x, Rational(4, 5)));
  CHECK_FALSE(consistent(x, Rational(1, 2)));
  CHECK_FALSE(consistent(x, Rational(1)));
  CHECK(consistent(x, eval(x)));
}

TEST_CASE("representation interval") {
  SDNumber x = num(10, 1, {1, 2, 5, 0, 0, 0, 0});
  auto iv = representation_interval(x);
  CHECK(iv.lo == Rational(5, 4) - pow_r(10, -6));
  CHECK(iv.hi == Rational(5, 4) + pow_r(10, -6));
  CHECK(iv.width() == 2 * pow_r(10, -6));

  SDNumber half = num(10, 0, {5});
  std::vector<Digit> up{9, 9}, down{-9, -9};
  CHECK(eval(half.extended(up)) < Rational(1, 2) + Rational(1, 10));
  CHECK(eval(half.extended(down)) > Rational(1, 2) - Rational(1, 10));
}

TEST_CASE("random extensions stay consistent") {
  std::mt19937_64 rng(11);
  for (int r : {2, 10}) {
    std::uniform_int_distribution<int> dig(-(r - 1), r - 1), len(1, 20);
    for (int t = 0; t < 500; ++t) {
      std::vector<Digit> d(static_cast<std::size_t>(len(rng) + 1)), tail(static_cast<std::size_t>(len(rng)));
      for (auto& x : d) x = static_cast<Digit>(dig(rng));
      for (auto& x : tail) x = static_cast<Digit>(dig(rng));
      SDNumber x(DigitSet(r), 1, d);
      CHECK(consistent(x, eval(x.extended(tail))));
      CHECK(representation_interval(x).width() == 2 * pow_r(r, 1 - static_cast<long>(d.size())));
    }
  }
}

TEST_CASE("common MSD count") {
  auto x5 = num(10, 1, {1, 0, 0, 0, -3, 5, 5});
  auto x6 = num(10, 1, {1, 0, 0, 0, 0, 6, 1});
  CHECK(common_msd_count(x5, x6) == 4);
  CHECK(common_msd_count(x6, x5) == 4);
  CHECK(common_msd_count(x5, x5) == 7);
  CHECK(common_msd_count(num(2, 1, {1, 0}), num(2, 1, {-1, 0})) == 0);

  // Same value, different digits: the count is digit-wise.
  auto a = num(2, 0, {1, -1}), b = num(2, 0, {0, 1});
  CHECK(eval(a) == eval(b));
  CHECK(common_msd_count(a, b) == 0);

  CHECK_THROWS(common_msd_count(num(2, 1, {1}), num(10, 1, {1})));
  CHECK_THROWS(common_msd_count(num(2, 1, {1}), num(2, 0, {1})));
}

TEST_CASE("recode truncates toward zero") {
  auto x = recode(Rational(99609375, 100000000), DigitSet(10), 1, 6);
  CHECK(x.size() == 7);
  CHECK(eval(x) == Rational(996093, 1000000));
  auto z = recode(Rational(0), DigitSet(2), 2, 5);
  for (Digit d : z.digits()) CHECK(d == 0);
  CHECK(eval(recode(Rational(-3, 8), DigitSet(2), 1, 3)) == Rational(-3, 8));
  CHECK(eval(recode(Rational(-7, 10), DigitSet(10), 1, 0)) == 0);
  CHECK(eval(recode(Rational(-1, 3), DigitSet(10), 1, 3)) == Rational(-333, 1000));
  CHECK_THROWS_AS(recode(Rational(2), DigitSet(2), 1, 4), std::overflow_error);
  // Non-maximal digit set still round-trips.
  CHECK(eval(recode(Rational(789, 100), DigitSet(10, 5), 2, 2)) == Rational(789, 100));
}

TEST_CASE("recode round trip") {
  std::mt19937_64 rng(3);
  for (int r : {2, 3, 10}) {
    std::uniform_int_distribution<long> v(-1000000, 1000000);
    for (int t = 0; t < 300; ++t) {
      Rational q(v(rng), 1000000);
      q.canonicalize();
      for (int f : {0, 3, 12, 30}) {
        auto x = recode(q, DigitSet(r), 1, f);
        Rational e = eval(x);
        CHECK(abs(e) <= abs(q));
        CHECK(abs(q - e) < pow_r(r, -f));
        Rational scaled = q * pow_r(r, f);
        if (scaled.get_den() == 1) CHECK(e == q);
      }
    }
  }
}

TEST_CASE("text form") {
  auto x = num(10, 1, {1, 0, 0, -4, 1, -1, 3});
  CHECK(x.to_string() == "[1,0,0,-4,1,-1,3]@w=1,r=10");
  CHECK(SDNumber::parse("[1,0,0,-4,1,-1,3]@w=1,r=10") == x);
  auto y = SDNumber(DigitSet(10, 6), 0, {6, -6});
  CHECK(SDNumber::parse(y.to_string()) == y);
  CHECK_THROWS(SDNumber::parse("1,0@w=1"));
}

TEST_CASE("prefix keeps the anchor") {
  auto x = num(2, 2, {1, 0, 1, 1});
  CHECK(x.prefix(1).size() == 2);
  CHECK(eval(x.prefix(1)) == 2);
  CHECK(eval(x.prefix(3)) == Rational(5, 2));
}

}
