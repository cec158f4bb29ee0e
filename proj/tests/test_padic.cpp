#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "stabforge/padic.hpp"

using namespace stabforge;

namespace {

// Plain modular arithmetic, used as the oracle.
u64 naive_mod(i64 z, u64 m) {
  __int128 r = static_cast<__int128>(z) % static_cast<__int128>(m);
  if (r < 0) r += m;
  return static_cast<u64>(r);
}

u64 naive_inverse(u64 a, u64 m) {
  for (u64 x = 1; x < m; ++x)
    if (static_cast<unsigned __int128>(a) * x % m == 1) return x;
  return 0;
}

}  // namespace

TEST_CASE("from_integer reduces to canonical digits") {
  CHECK(PadicInt::from_integer(-7, 2, 4).digits() == std::vector<unsigned>{1, 0, 0, 1});
  CHECK(PadicInt::from_integer(0, 3, 5).digits() == std::vector<unsigned>{0, 0, 0, 0, 0});
  CHECK(PadicInt::from_integer(5, 5, 3).digits() == std::vector<unsigned>{0, 1, 0});
}

TEST_CASE("ring operations and inversion") {
  for (unsigned N : {1u, 3u, 10u}) CHECK(PadicInt::from_integer(-1, 7, N) * PadicInt::from_integer(-1, 7, N) == PadicInt::from_integer(1, 7, N));
  CHECK(PadicInt::from_integer(3, 2, 4).invert().residue() == 11);
  CHECK_THROWS_AS(PadicInt::from_integer(2, 2, 5).invert(), Error);
  // precision of a result is the smaller one
  auto a = PadicInt::from_integer(5, 3, 4), b = PadicInt::from_integer(7, 3, 6);
  CHECK((a + b).precision() == 4);
  CHECK((a * b).precision() == 4);
}

TEST_CASE("arithmetic agrees with integer arithmetic mod p^N") {
  std::mt19937_64 rng(11);
  for (unsigned p : {2u, 3u, 5u, 7u}) {
    for (unsigned N : {1u, 4u, 9u}) {
      const u64 m = ipow(p, N);
      for (int it = 0; it < 50; ++it) {
        const i64 x = static_cast<i64>(rng() % 200000) - 100000;
        const i64 y = static_cast<i64>(rng() % 200000) - 100000;
        auto X = PadicInt::from_integer(x, p, N), Y = PadicInt::from_integer(y, p, N);
        CHECK((X + Y).residue() == naive_mod(x + y, m));
        CHECK((X - Y).residue() == naive_mod(x - y, m));
        CHECK((X * Y).residue() == naive_mod(x * y, m));
        CHECK((-X).residue() == naive_mod(-x, m));
        if (x % static_cast<i64>(p) != 0 && m < 5000) CHECK(X.invert().residue() == naive_inverse(naive_mod(x, m), m));
      }
    }
  }
}

TEST_CASE("ring axioms on random triples") {
  std::mt19937_64 rng(5);
  for (unsigned p : {2u, 3u, 5u}) {
    const unsigned N = 12;
    for (int it = 0; it < 100; ++it) {
      auto r = [&] { return PadicInt(p, N, rng() % ipow(p, N)); };
      auto a = r(), b = r(), c = r();
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK((a + b) + c == a + (b + c));
      CHECK(a * b == b * a);
    }
  }
}

TEST_CASE("digit literal round trip") {
  auto x = PadicInt::from_digits(3, {2, 0, 1, 1});
  CHECK(x.residue() == 2 + 0 * 3 + 9 + 27);
  CHECK(PadicInt::parse_literal(x.literal()) == x);
  CHECK(PadicInt::parse_literal("p:3 [2,0,1,1]") == x);
  CHECK_THROWS(PadicInt::parse_literal("p:3 [3]"));
}

TEST_CASE("exact division by p") {
  auto x = PadicInt::from_integer(12, 3, 5);
  auto q = x.exact_div_by_p();
  CHECK(q.precision() == 4);
  CHECK(q.residue() == 4);
  CHECK_THROWS(PadicInt::from_integer(7, 3, 5).exact_div_by_p());
}

TEST_CASE("teichmuller lifts") {
  auto m3 = teichmuller_lift(2, 3, 6);
  CHECK(m3 == PadicInt::from_integer(-1, 3, 6));
  CHECK(teichmuller_lift(1, 5, 6).residue() == 1);
  for (unsigned p : {3u, 5u, 7u, 11u})
    for (unsigned c = 1; c < p; ++c)
      for (unsigned N = 1; N <= 8; ++N) {
        auto w = teichmuller_lift(c, p, N);
        CHECK(w.residue() % p == c);
        CHECK(w.pow(p - 1) == PadicInt::from_integer(1, p, N));
      }
  // oracle: iterate x -> x^5 from 2 to a fixed point mod 5^6
  u64 x = 2;
  const u64 m = ipow(5, 6);
  for (int i = 0; i < 10; ++i) x = powmod(x, 5, m);
  CHECK(teichmuller_lift(2, 5, 6).residue() == x);
  CHECK(powmod(x, 4, m) == 1);
}

TEST_CASE("hensel square roots") {
  auto r = hensel_sqrt(PadicInt::from_integer(-7, 2, 12));
  // for p = 2 the root is determined modulo 2^{N-1}
  CHECK((r * r).reduce(11) == PadicInt::from_integer(-7, 2, 11));
  CHECK_THROWS_AS(hensel_sqrt(PadicInt::from_integer(2, 5, 6)), Error);
  CHECK_THROWS_AS(hensel_sqrt(PadicInt::from_integer(3, 2, 6)), Error);
  CHECK(hensel_sqrt(PadicInt::from_integer(4, 3, 6)).residue() == 2);

  std::mt19937_64 rng(3);
  for (unsigned p : {3u, 5u, 7u}) {
    for (unsigned N = 3; N <= 10; ++N) {
      for (int it = 0; it < 20; ++it) {
        u64 v = rng() % ipow(p, N);
        if (v % p == 0) continue;
        auto u = PadicInt(p, N, v);
        bool square = powmod(v % p, (p - 1) / 2, p) == 1;
        if (!square) {
          CHECK_THROWS(hensel_sqrt(u));
          continue;
        }
        auto s = hensel_sqrt(u);
        CHECK(s * s == u);
        CHECK(s.residue() <= (-s).residue());  // smaller canonical value
      }
    }
  }
}

TEST_CASE("unit decomposition") {
  auto [t, q] = unit_decompose(PadicInt::from_integer(5, 3, 6));
  CHECK(t == PadicInt::from_integer(-1, 3, 6));
  CHECK(q == PadicInt::from_integer(-5, 3, 6));
  auto [t2, q2] = unit_decompose(PadicInt::from_integer(3, 2, 6));
  CHECK(t2 == PadicInt::from_integer(-1, 2, 6));
  CHECK(q2 == PadicInt::from_integer(-3, 2, 6));
  auto [t5, q5] = unit_decompose(PadicInt::from_integer(7, 5, 6));
  CHECK(t5 == teichmuller_lift(2, 5, 6));
  CHECK(q5.residue() % 5 == 1);

  std::mt19937_64 rng(8);
  for (unsigned p : {2u, 3u, 5u, 7u}) {
    for (int it = 0; it < 100; ++it) {
      const unsigned N = 8;
      u64 v = rng() % ipow(p, N);
      if (v % p == 0) continue;
      auto u = PadicInt(p, N, v);
      auto [tor, pr] = unit_decompose(u);
      CHECK(tor * pr == u);
      if (p == 2) {
        CHECK((tor.residue() == 1 || tor == PadicInt::from_integer(-1, 2, N)));
        CHECK(pr.residue() % 4 == 1);
      } else {
        CHECK(tor.pow(p - 1) == PadicInt::from_integer(1, p, N));
        CHECK(pr.residue() % p == 1);
      }
    }
  }
}

TEST_CASE("residue datum") {
  CHECK(residue_datum(PadicInt::from_integer(-1, 2, 6), 8) == 7);
  CHECK(residue_datum(PadicInt::from_integer(4, 3, 6), 9) == 4);
  CHECK_THROWS_AS(residue_datum(PadicInt::from_integer(3, 2, 2), 8), Error);
}

TEST_CASE("precision limits") {
  CHECK(max_precision(2) == 62);
  CHECK_THROWS_AS(PadicInt(2, 63, 1), Error);
}
