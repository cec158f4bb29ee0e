#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "stabforge/classifier.hpp"
#include "stabforge/numtheory.hpp"
#include "stabforge/unit_classes.hpp"

using namespace stabforge;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE_MESSAGE(in.good(), path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::multiset<std::string> names(const ClassificationReport& r) {
  std::multiset<std::string> out;
  for (const auto& c : r.classes)
    for (u64 i = 0; i < c.count; ++i) out.insert(c.name);
  return out;
}

std::multiset<u64> orders(const ClassificationReport& r) {
  std::multiset<u64> out;
  for (const auto& c : r.classes)
    for (u64 i = 0; i < c.count; ++i) out.insert(c.order);
  return out;
}

u64 upow(u64 b, u64 e) {
  u64 r = 1;
  while (e--) r *= b;
  return r;
}

unsigned v_p(u64 x, unsigned p) {
  unsigned v = 0;
  while (x % p == 0) x /= p, ++v;
  return v;
}

// ---- abstract finite groups, used as the oracle for the realizations ----

template <class T>
std::map<u64, u64> order_signature(const std::vector<T>& gens, std::function<T(const T&, const T&)> mul, const T& id) {
  std::set<T> seen{id};
  std::vector<T> queue{id};
  for (std::size_t i = 0; i < queue.size(); ++i)
    for (const auto& g : gens) {
      T y = mul(queue[i], g);
      if (seen.insert(y).second) queue.push_back(y);
    }
  std::map<u64, u64> sig;
  for (const auto& x : queue) {
    u64 k = 1;
    T y = x;
    while (!(y == id)) y = mul(y, x), ++k;
    ++sig[k];
  }
  return sig;
}

// Quaternion with coordinates (a + b sqrt2) / 2.
struct Quat {
  std::array<i64, 4> a{}, b{};
  bool operator<(const Quat& o) const { return std::tie(a, b) < std::tie(o.a, o.b); }
  bool operator==(const Quat& o) const { return a == o.a && b == o.b; }
};

Quat qmul(const Quat& x, const Quat& y) {
  // Hamilton product; sign and index table for e_s * e_t
  static const int idx[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static const int sgn[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
  std::array<i64, 4> A{}, B{};
  for (int s = 0; s < 4; ++s)
    for (int t = 0; t < 4; ++t) {
      const int k = idx[s][t], e = sgn[s][t];
      A[k] += e * (x.a[s] * y.a[t] + 2 * x.b[s] * y.b[t]);
      B[k] += e * (x.a[s] * y.b[t] + x.b[s] * y.a[t]);
    }
  Quat z;
  for (int k = 0; k < 4; ++k) {
    REQUIRE(A[k] % 2 == 0);
    REQUIRE(B[k] % 2 == 0);
    z.a[k] = A[k] / 2;
    z.b[k] = B[k] / 2;
  }
  return z;
}

Quat quat(i64 a0, i64 a1, i64 a2, i64 a3, i64 b0 = 0, i64 b1 = 0, i64 b2 = 0, i64 b3 = 0) {
  Quat q;
  q.a = {a0, a1, a2, a3};
  q.b = {b0, b1, b2, b3};
  return q;
}

const Quat kOne = quat(2, 0, 0, 0), kI = quat(0, 2, 0, 0), kJ = quat(0, 0, 2, 0);
const Quat kOmega = quat(-1, 1, 1, 1);               // (-1 + i + j + k) / 2
const Quat kRootTwoUnit = quat(0, 0, 0, 0, 1, 1, 0, 0);  // (1 + i) / sqrt2

std::map<u64, u64> quat_signature(const std::vector<Quat>& gens) { return order_signature<Quat>(gens, qmul, kOne); }

// C_m x| H with h acting on C_m by multiplication with phi(h).
template <class H>
std::map<u64, u64> semidirect_signature(i64 m, const std::vector<H>& hgens, std::function<H(const H&, const H&)> hmul, const H& hid,
                                        std::function<i64(const H&)> phi) {
  using E = std::pair<i64, H>;
  auto mul = [&](const E& x, const E& y) { return E{((x.first + phi(x.second) * y.first) % m + m) % m, hmul(x.second, y.second)}; };
  std::vector<E> gens{{1, hid}};
  for (const auto& h : hgens) gens.push_back({0, h});
  return order_signature<E>(gens, mul, E{0, hid});
}

std::map<u64, u64> cyclic_by_cyclic(i64 m, i64 k, i64 s) {
  auto mul = [k](const i64& x, const i64& y) { return (x + y) % k; };
  auto phi = [m, s](const i64& h) {
    i64 r = 1;
    for (i64 i = 0; i < h; ++i) r = r * s % m;
    return r;
  };
  return semidirect_signature<i64>(m, {1}, mul, 0, phi);
}

// Q_8 acting on C_3 through Q_8 / <j>.
std::map<u64, u64> c3_by_q8() {
  auto phi = [](const Quat& q) { return (q.a[1] != 0 || q.a[3] != 0) ? i64(-1) : i64(1); };
  return semidirect_signature<Quat>(3, {kI, kJ}, qmul, kOne, phi);
}

// D_8 = <r, s> acting on C_3 through D_8 / <r^2, s>.
std::map<u64, u64> c3_by_d8() {
  using D = std::pair<i64, i64>;  // r^a s^b
  auto dmul = [](const D& x, const D& y) { return D{((x.first + (x.second ? -y.first : y.first)) % 4 + 4) % 4, (x.second + y.second) % 2}; };
  auto phi = [](const D& d) { return d.first % 2 ? i64(-1) : i64(1); };
  return semidirect_signature<D>(3, {{1, 0}, {0, 1}}, dmul, D{0, 0}, phi);
}

// GL(2, F_3), which is T_24 x| C_2.
std::map<u64, u64> gl23() {
  using M = std::array<i64, 4>;
  auto mul = [](const M& x, const M& y) {
    return M{(x[0] * y[0] + x[1] * y[2]) % 3, (x[0] * y[1] + x[1] * y[3]) % 3, (x[2] * y[0] + x[3] * y[2]) % 3, (x[2] * y[1] + x[3] * y[3]) % 3};
  };
  std::vector<M> all;
  for (i64 a = 0; a < 81; ++a) {
    M x{a % 3, a / 3 % 3, a / 9 % 3, a / 27};
    if ((x[0] * x[3] - x[1] * x[2]) % 3 != 0) all.push_back(x);
  }
  REQUIRE(all.size() == 48);
  return order_signature<M>(all, mul, M{1, 0, 0, 1});
}

std::map<std::string, std::map<u64, u64>> abstract_groups() {
  return {
      {"SD_16", cyclic_by_cyclic(8, 2, 3)},
      {"C_3 x| C_4", cyclic_by_cyclic(3, 4, 2)},
      {"C_6 x| C_2", cyclic_by_cyclic(6, 2, 5)},
      {"D_8", cyclic_by_cyclic(4, 2, 3)},
      {"C_3 x| Q_8", c3_by_q8()},
      {"C_3 x| D_8", c3_by_d8()},
      {"Q_8", quat_signature({kI, kJ})},
      {"T_24", quat_signature({kI, kJ, kOmega})},
      {"O_48", quat_signature({kI, kJ, kOmega, kRootTwoUnit})},
      {"T_24 x| C_2", gl23()},
  };
}

// ---- closed formulas for the unit-group classes ----

// Order of the maximal class of S_n attached to alpha (p odd: alpha >= 0; p = 2: alpha >= 1).
u64 sn_class_order(unsigned p, unsigned n, unsigned alpha) {
  if (alpha == 0) return upow(p, n) - 1;
  const u64 phi = (p - 1) * upow(p, alpha - 1);
  const u64 na = n / phi;
  if (p == 2) return upow(2, alpha) * (upow(2, na) - 1);
  return upow(p, alpha) * (upow(p, na) - 1) * (p - 1);
}

std::multiset<u64> sn_orders_oracle(unsigned p, unsigned n) {
  std::multiset<u64> out;
  if (p == 2) {
    const unsigned k = v_p(n, 2) + 1;
    const u64 m = n >> (k - 1);
    for (unsigned a = 1; a <= k; ++a) {
      if (k == 2 && a == 2) {
        out.insert(24 * (upow(2, m) - 1));
      } else if (!(k == 2 && a == 1 && m == 1)) {
        out.insert(sn_class_order(2, n, a));
      }
    }
    return out;
  }
  out.insert(upow(p, n) - 1);
  if (n % (p - 1) != 0) return out;
  const unsigned k = v_p(n / (p - 1), p) + 1;
  for (unsigned a = 1; a <= k; ++a) out.insert(sn_class_order(p, n, a));
  return out;
}

std::vector<u64> unit_residues(unsigned p) {
  std::vector<u64> out;
  for (u64 r = 1; r < residue_modulus(p); ++r)
    if (r % p != 0) out.push_back(r);
  return out;
}

}  // namespace

TEST_CASE("golden reports are reproduced byte for byte") {
  for (u64 u : {1, 2}) {
    auto r = maximal_in_Gn({3, 2, u, std::nullopt});
    CHECK(read_file("tests/golden/gn_p3_n2_u" + std::to_string(u) + ".json") == report_json(r) + "\n");
  }
  for (u64 u : {1, 3, 5, 7}) {
    auto r = maximal_in_Gn({2, 2, u, std::nullopt});
    CHECK(read_file("tests/golden/gn_p2_n2_u" + std::to_string(u) + ".json") == report_json(r) + "\n");
  }
  for (auto [p, n] : std::vector<std::pair<unsigned, unsigned>>{{3, 2}, {3, 4}, {3, 6}, {5, 4}, {2, 2}, {2, 4}, {2, 6}}) {
    auto r = maximal_in_Sn(p, n);
    CHECK(read_file("tests/golden/sn_p" + std::to_string(p) + "_n" + std::to_string(n) + ".json") == report_json(r) + "\n");
  }
  // same report, same bytes
  CHECK(report_json(maximal_in_Gn({2, 6, 3, std::nullopt})) == report_json(maximal_in_Gn({2, 6, 3, std::nullopt})));
}

TEST_CASE("n = 2 tables") {
  for (u64 u : unit_residues(3)) {
    auto r = maximal_in_Gn({3, 2, u, std::nullopt});
    const std::string second = u % 3 == 1 ? "C_3 x| Q_8" : "C_3 x| D_8";
    CHECK(names(r) == std::multiset<std::string>{"SD_16", second});
  }
  const std::map<u64, std::multiset<std::string>> p2{
      {1, {"C_6 x| C_2", "O_48"}},
      {7, {"C_3 x| C_4", "T_24 x| C_2"}},
      {3, {"C_3 x| C_4", "C_6 x| C_2", "D_8", "T_24"}},
      {5, {"C_3 x| C_4", "C_6 x| C_2", "Q_8", "T_24"}},
  };
  for (const auto& [u, want] : p2) CHECK(names(maximal_in_Gn({2, 2, u, std::nullopt})) == want);
}

TEST_CASE("engine agrees with the n = 2 tables") {
  for (unsigned p : {2u, 3u})
    for (u64 u : unit_residues(p)) {
      ClassificationInput in{p, 2, u, std::nullopt};
      CHECK_MESSAGE(orders(maximal_in_Gn_engine(in)) == orders(maximal_in_Gn(in)), "p=" << p << " u=" << u);
    }
}

TEST_CASE("maximal classes of S_n") {
  auto s = maximal_in_Sn(3, 4);
  CHECK(names(s) == std::multiset<std::string>{"C_80", "C_3 x| C_16"});
  CHECK(names(maximal_in_Sn(5, 3)) == std::multiset<std::string>{"C_124"});
  CHECK(names(maximal_in_Sn(2, 6)) == std::multiset<std::string>{"C_126", "T_24 x C_7"});
  auto t = maximal_in_Sn(2, 2);
  CHECK(names(t) == std::multiset<std::string>{"T_24"});
  REQUIRE(t.dropped.size() == 1);
  CHECK(t.dropped[0].label.name == "C_6");
  for (unsigned p : {2u, 3u, 5u, 7u, 11u, 13u})
    for (unsigned n = 1; n <= 16; ++n) {
      auto r = maximal_in_Sn(p, n);
      CHECK_MESSAGE(orders(r) == sn_orders_oracle(p, n), "p=" << p << " n=" << n);
      for (const auto& c : r.classes) {
        if (c.kind == LabelKind::Metacyclic) {
          // the acting generator has order dividing the quotient and acts faithfully
          const u64 ker = c.parts[0], quo = c.parts[1];
          CHECK(powmod(c.action, quo, ker) == 1 % ker);
          CHECK(std::gcd(c.action, ker) == 1);
        }
      }
    }
}

TEST_CASE("abelian class pairs") {
  auto pairs_oracle = [](unsigned p, unsigned n) {
    std::set<std::pair<unsigned, u64>> out;
    const unsigned k = class_depth(p, n);
    for (unsigned a = 0; a <= k; ++a) {
      const u64 na = a == 0 ? n : n / ((p - 1) * upow(p, a - 1));
      const u64 top = upow(p, na) - 1;
      for (u64 d = 1; d <= top; ++d)
        if (top % d == 0) out.insert({a, d});
    }
    return out;
  };
  auto as_set = [](const ClassificationReport& r) { return std::set<std::pair<unsigned, u64>>(r.pairs.begin(), r.pairs.end()); };
  CHECK(as_set(abelian_classes(2, 2)) == std::set<std::pair<unsigned, u64>>{{0, 1}, {0, 3}, {1, 1}, {1, 3}, {2, 1}});
  CHECK(as_set(abelian_classes(3, 2)) == std::set<std::pair<unsigned, u64>>{{0, 1}, {0, 2}, {0, 4}, {0, 8}, {1, 1}, {1, 2}});
  for (unsigned p : {2u, 3u, 5u})
    for (unsigned n = 1; n <= 8; ++n) {
      auto r = abelian_classes(p, n);
      CHECK(as_set(r) == pairs_oracle(p, n));
      CHECK(as_set(r).size() == r.pairs.size());
    }
}

TEST_CASE("class depth and odd part") {
  CHECK(class_depth(3, 4) == 1);
  CHECK(class_depth(3, 6) == 2);
  CHECK(class_depth(5, 3) == 0);
  CHECK(class_depth(2, 6) == 2);
  CHECK(class_depth(2, 8) == 4);
  CHECK(odd_part_m(2, 12) == 3);
  CHECK(odd_part_m(3, 12) == 2);
}

TEST_CASE("quaternionic extension") {
  for (unsigned n : {2u, 6u, 10u}) {
    const u64 m = n / 2;
    for (u64 u : {1, 3, 5, 7}) {
      auto q = quaternionic_extension(n, u);
      CHECK(q.exists == (u == 1 || u == 7));
      CHECK(q.order == 48 * m * (upow(2, m) - 1));
      CHECK(q.unique == q.exists);
    }
  }
  CHECK(quaternionic_extension(2, 1).order == 48);
  for (unsigned n : {1u, 3u, 4u, 8u, 12u}) CHECK_THROWS_AS(quaternionic_extension(n, 1), Error);
  try {
    quaternionic_extension(4, 1);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotApplicable);
  }
}

TEST_CASE("engine invariants over the supported grid") {
  int reports = 0;
  for (unsigned p : {2u, 3u, 5u, 7u})
    for (unsigned n = 1; n <= kMaxGridN; ++n)
      for (u64 u : unit_residues(p)) {
        ClassificationInput in{p, n, u, std::nullopt};
        auto r = maximal_in_Gn(in);
        ++reports;
        REQUIRE(!r.classes.empty());
        std::set<std::string> seen;
        for (const auto& c : r.classes) {
          CHECK(std::accumulate(c.parts.begin(), c.parts.end(), u64(1), std::multiplies<>()) == c.order);
          CHECK(c.count >= 1);
          CHECK(c.provenance.rfind("Gn:", 0) == 0);
          CHECK_MESSAGE(seen.insert(c.name).second, "duplicate " << c.name);
          if (n == 2 && (p == 2 || p == 3)) continue;
          if (c.alpha >= 0) {
            CHECK_MESSAGE((n * sn_class_order(p, n, static_cast<unsigned>(c.alpha))) % c.order == 0, c.name);
          } else {
            const u64 m = n / 2;
            auto q = quaternionic_extension(n, u);
            CHECK(c.order == (q.exists ? q.order : 24 * m * (upow(2, m) - 1)));
          }
          // an asserted r1 = p - 1 extension passes the unit test
          if (p != 2 && c.kind == LabelKind::Extension && c.parts.size() == 4 && c.parts[2] == p - 1 && c.alpha >= 1)
            CHECK(epsilon_test(p, n, static_cast<unsigned>(c.alpha), c.parts[1], static_cast<i64>(u), p - 1));
        }
      }
  CHECK(reports > 300);
}

TEST_CASE("stated engine example") {
  auto r = maximal_in_Gn({3, 6, 4, std::nullopt});
  bool found = false;
  for (const auto& c : r.classes)
    if (c.alpha == 2) {
      found = true;
      CHECK(c.count == 1);
      CHECK(c.order % 6 == 0);
      CHECK(c.provenance.find("full-G") != std::string::npos);
    }
  CHECK(found);
  // u = 1 lies in mu x U_2, so only the prime-to-p part extends
  for (const auto& c : maximal_in_Gn({3, 6, 1, std::nullopt}).classes)
    if (c.alpha == 2) CHECK(c.provenance.find("full-G") == std::string::npos);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(maximal_in_Gn({11, 2, 1, std::nullopt}), Error);
  CHECK_THROWS_AS(maximal_in_Gn({3, 13, 1, std::nullopt}), Error);
  try {
    maximal_in_Gn({11, 2, 1, std::nullopt});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnsupportedParameters);
  }
  CHECK_THROWS_AS(validate_input({3, 2, 3, std::nullopt}), Error);
  CHECK_THROWS_AS(validate_input({3, 2, 9, std::nullopt}), Error);
  CHECK_THROWS_AS(validate_input({2, 2, 4, std::nullopt}), Error);
  CHECK_THROWS_AS(validate_input({3, 2, 1, 5}), Error);
  CHECK_NOTHROW(validate_input({3, 2, 1, 10}));
  CHECK_NOTHROW(validate_input({2, 2, 7, -1}));
  CHECK(residue_modulus(2) == 8);
  CHECK(residue_modulus(5) == 25);
}

TEST_CASE("explicit realizations match abstract groups") {
  const auto groups = abstract_groups();
  CHECK(groups.at("SD_16") == std::map<u64, u64>{{1, 1}, {2, 5}, {4, 6}, {8, 4}});
  CHECK(groups.at("O_48").size() == 6);
  for (unsigned p : {2u, 3u})
    for (i64 u : p == 2 ? std::vector<i64>{1, 3, 5, 7} : std::vector<i64>{1, 2}) {
      auto rs = realize_n2(p, u);
      std::multiset<std::string> got;
      for (const auto& r : rs) {
        got.insert(r.name);
        REQUIRE(groups.count(r.name));
        u64 total = 0;
        for (auto [o, c] : r.element_orders) total += c;
        CHECK(total == r.order);
        CHECK_MESSAGE(r.element_orders == groups.at(r.name), r.name << " p=" << p << " u=" << u);
      }
      CHECK(got == names(maximal_in_Gn({p, 2, static_cast<u64>(u), std::nullopt})));
    }
}
