#include "stabforge/unramified.hpp"

#include <algorithm>

namespace stabforge {

namespace {

using Poly = std::vector<u64>;  // F_p polynomial, low degree first

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly pmod(Poly a, const Poly& m, u64 p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const u64 inv_lead = powmod(m.back(), p - 2, p);
  while (a.size() > dm) {
    u64 c = a.back() * inv_lead % p;
    std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) a[shift + i] = (a[shift + i] + (p - c) * m[i]) % p;
    trim(a);
  }
  return a;
}

Poly pmulmod(const Poly& a, const Poly& b, const Poly& m, u64 p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  return pmod(r, m, p);
}

Poly ppowmod(Poly b, u64 e, const Poly& m, u64 p) {
  Poly r{1};
  b = pmod(b, m, p);
  while (e) {
    if (e & 1) r = pmulmod(r, b, m, p);
    b = pmulmod(b, b, m, p);
    e >>= 1;
  }
  return r;
}

Poly pgcd(Poly a, Poly b, u64 p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = pmod(a, b, p);
    a = b;
    b = r;
  }
  return a;
}

// X^{p^k} mod m
Poly frobenius_power_of_x(unsigned k, const Poly& m, u64 p) {
  Poly x = pmod(Poly{0, 1}, m, p);
  for (unsigned i = 0; i < k; ++i) x = ppowmod(x, p, m, p);
  return x;
}

Poly sub_x(Poly a, u64 p) {
  if (a.size() < 2) a.resize(2, 0);
  a[1] = (a[1] + p - 1) % p;
  trim(a);
  return a;
}

bool rabin_irreducible(const Poly& g, unsigned f, u64 p) {
  if (!sub_x(frobenius_power_of_x(f, g, p), p).empty()) return false;
  for (u64 r : prime_factors(f)) {
    Poly h = sub_x(frobenius_power_of_x(f / static_cast<unsigned>(r), g, p), p);
    Poly d = pgcd(g, h, p);
    if (d.size() != 1) return false;
  }
  return true;
}

}  // namespace

std::vector<u64> prime_factors(u64 n) {
  std::vector<u64> out;
  for (u64 d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::vector<unsigned> smallest_irreducible(unsigned p, unsigned f) {
  if (f == 0) throw Error(ErrorKind::InvalidArgument, "degree must be positive");
  const u64 total = ipow(p, f);
  for (u64 code = 0; code < total; ++code) {
    Poly g(f + 1, 0);
    u64 c = code;
    for (unsigned j = 0; j < f; ++j) {
      g[j] = c % p;
      c /= p;
    }
    g[f] = 1;
    if (f == 1 || rabin_irreducible(g, f, p)) {
      std::vector<unsigned> out(f);
      for (unsigned j = 0; j < f; ++j) out[j] = static_cast<unsigned>(g[j]);
      return out;
    }
  }
  throw Error(ErrorKind::InvalidArgument, "no irreducible polynomial found");
}

UnramifiedRing::UnramifiedRing(unsigned p, unsigned f, unsigned P) : p_(p), f_(f), P_(P) {
  if (!is_prime(p)) throw Error(ErrorKind::InvalidArgument, "p must be prime");
  if (f < 1 || P < 1) throw Error(ErrorKind::InvalidArgument, "degree and precision must be positive");
  mod_ = ipow(p, P);
  q_ = ipow(p, f);
  g_ = smallest_irreducible(p, f);
  residue_factor_ = prime_factors(q_ - 1);

  // sigma(beta): the root of g congruent to beta^p, found by Newton iteration.
  WElem y = pow(beta(), p);
  auto eval = [&](const WElem& x, bool deriv) {
    WElem acc = zero();
    // Horner over g (monic) or g'
    if (!deriv) {
      acc = one();
      for (unsigned j = f; j-- > 0;) acc = add(mul(acc, x), from_int(g_[j]));
    } else {
      acc = from_int(f);
      for (unsigned j = f - 1; j-- > 0;) acc = add(mul(acc, x), from_int(static_cast<i64>(g_[j + 1]) * (j + 1)));
    }
    return acc;
  };
  for (unsigned it = 0; it < P + 1; ++it) y = sub(y, mul(eval(y, false), inverse(eval(y, true))));
  frob_cols_.resize(f);
  WElem cur = one();
  for (unsigned j = 0; j < f; ++j) {
    frob_cols_[j] = cur;
    cur = mul(cur, y);
  }
}

WElem UnramifiedRing::one() const {
  WElem r = zero();
  r[0] = 1 % mod_;
  return r;
}

WElem UnramifiedRing::from_int(i64 z) const {
  WElem r = zero();
  i64 m = static_cast<i64>(mod_);
  i64 v = z % m;
  if (v < 0) v += m;
  r[0] = static_cast<u64>(v);
  return r;
}

WElem UnramifiedRing::from_padic(const PadicInt& x) const {
  if (x.prime() != p_) throw Error(ErrorKind::InvalidArgument, "mismatched primes");
  if (x.precision() < P_) throw Error(ErrorKind::InsufficientPrecision, "scalar precision below ring precision");
  WElem r = zero();
  r[0] = x.residue() % mod_;
  return r;
}

WElem UnramifiedRing::beta() const {
  if (f_ == 1) return from_int(-static_cast<i64>(g_[0]));
  WElem r = zero();
  r[1] = 1;
  return r;
}

WElem UnramifiedRing::add(const WElem& a, const WElem& b) const {
  WElem r(f_);
  for (unsigned j = 0; j < f_; ++j) r[j] = (a[j] + b[j]) % mod_;
  return r;
}

WElem UnramifiedRing::sub(const WElem& a, const WElem& b) const {
  WElem r(f_);
  for (unsigned j = 0; j < f_; ++j) r[j] = (a[j] + mod_ - b[j]) % mod_;
  return r;
}

WElem UnramifiedRing::neg(const WElem& a) const {
  WElem r(f_);
  for (unsigned j = 0; j < f_; ++j) r[j] = (mod_ - a[j]) % mod_;
  return r;
}

WElem UnramifiedRing::mul(const WElem& a, const WElem& b) const {
  std::vector<u64> t(2 * f_ - 1, 0);
  for (unsigned i = 0; i < f_; ++i) {
    if (a[i] == 0) continue;
    for (unsigned j = 0; j < f_; ++j) t[i + j] = (t[i + j] + mulmod(a[i], b[j], mod_)) % mod_;
  }
  // beta^f = -sum g_j beta^j
  for (unsigned d = 2 * f_ - 1; d-- > f_;) {
    u64 c = t[d];
    if (c == 0) continue;
    t[d] = 0;
    for (unsigned j = 0; j < f_; ++j) {
      u64 s = mulmod(c, g_[j], mod_);
      t[d - f_ + j] = (t[d - f_ + j] + mod_ - s) % mod_;
    }
  }
  t.resize(f_);
  return t;
}

WElem UnramifiedRing::scale(const WElem& a, u64 s) const {
  WElem r(f_);
  for (unsigned j = 0; j < f_; ++j) r[j] = mulmod(a[j], s % mod_, mod_);
  return r;
}

WElem UnramifiedRing::pow(const WElem& a, u64 e) const {
  WElem r = one();
  WElem b = a;
  while (e) {
    if (e & 1) r = mul(r, b);
    e >>= 1;
    if (e) b = mul(b, b);
  }
  return r;
}

WElem UnramifiedRing::inverse(const WElem& a) const {
  if (!is_unit(a)) throw Error(ErrorKind::NonUnit, "inverting a non-unit of the unramified ring");
  WElem y = pow(a, q_ - 2);
  WElem two = from_int(2);
  for (unsigned prec = 1; prec < P_; prec *= 2) y = mul(y, sub(two, mul(a, y)));
  return y;
}

WElem UnramifiedRing::exact_div_p(const WElem& a) const {
  WElem r(f_);
  for (unsigned j = 0; j < f_; ++j) {
    if (a[j] % p_ != 0) throw Error(ErrorKind::NonUnit, "exact division by p of a unit");
    r[j] = a[j] / p_;
  }
  return r;
}

bool UnramifiedRing::is_zero(const WElem& a) const {
  return std::all_of(a.begin(), a.end(), [](u64 c) { return c == 0; });
}

bool UnramifiedRing::is_unit(const WElem& a) const {
  return std::any_of(a.begin(), a.end(), [&](u64 c) { return c % p_ != 0; });
}

unsigned UnramifiedRing::valuation(const WElem& a) const {
  unsigned v = P_;
  for (u64 c : a)
    if (c != 0) v = std::min(v, vp(c, p_));
  return v;
}

WElem UnramifiedRing::reduce_to(const WElem& a, unsigned P) const {
  u64 m = ipow(p_, std::min(P, P_));
  WElem r(f_);
  for (unsigned j = 0; j < f_; ++j) r[j] = a[j] % m;
  return r;
}

u64 UnramifiedRing::residue_code(const WElem& a) const {
  u64 code = 0;
  for (unsigned j = f_; j-- > 0;) code = code * p_ + a[j] % p_;
  return code;
}

WElem UnramifiedRing::lift_code(u64 code) const {
  if (code >= q_) throw Error(ErrorKind::InvalidArgument, "residue code out of range");
  WElem r = zero();
  for (unsigned j = 0; j < f_; ++j) {
    r[j] = code % p_;
    code /= p_;
  }
  return r;
}

WElem UnramifiedRing::teichmuller(u64 code) const {
  if (code == 0) return zero();
  {
    std::lock_guard<std::mutex> lk(cache_mu_);
    auto it = teich_cache_.find(code);
    if (it != teich_cache_.end()) return it->second;
  }
  WElem x = lift_code(code);
  for (unsigned i = 0; i < P_; ++i) x = pow(x, q_);
  std::lock_guard<std::mutex> lk(cache_mu_);
  teich_cache_.emplace(code, x);
  return x;
}

u64 UnramifiedRing::residue_mul(u64 a, u64 b) const {
  // Reduce mod p after multiplying lifts.
  WElem r = mul(lift_code(a), lift_code(b));
  return residue_code(r);
}

u64 UnramifiedRing::residue_add(u64 a, u64 b) const {
  return residue_code(add(lift_code(a), lift_code(b)));
}

u64 UnramifiedRing::residue_pow(u64 a, u64 e) const {
  u64 r = 1, b = a;
  while (e) {
    if (e & 1) r = residue_mul(r, b);
    e >>= 1;
    if (e) b = residue_mul(b, b);
  }
  return r;
}

u64 UnramifiedRing::residue_order(u64 a) const {
  if (a == 0) throw Error(ErrorKind::NonUnit, "order of zero residue");
  u64 ord = q_ - 1;
  for (u64 r : residue_factor_)
    while (ord % r == 0 && residue_pow(a, ord / r) == 1) ord /= r;
  return ord;
}

u64 UnramifiedRing::primitive_residue() const {
  for (u64 c = 1; c < q_; ++c)
    if (residue_order(c) == q_ - 1) return c;
  throw Error(ErrorKind::InvalidArgument, "no primitive element");
}

WElem UnramifiedRing::frobenius(const WElem& a, long t) const {
  long tt = t % static_cast<long>(f_);
  if (tt < 0) tt += f_;
  WElem x = a;
  for (long s = 0; s < tt; ++s) {
    WElem r = zero();
    for (unsigned j = 0; j < f_; ++j)
      if (x[j]) r = add(r, scale(frob_cols_[j], x[j]));
    x = r;
  }
  return x;
}

WElem UnramifiedRing::norm_to_base(const WElem& a) const {
  WElem r = one();
  WElem x = a;
  for (unsigned i = 0; i < f_; ++i) {
    r = mul(r, x);
    x = frobenius(x, 1);
  }
  return r;
}

WElem UnramifiedRing::trace_to_base(const WElem& a) const {
  WElem r = zero();
  WElem x = a;
  for (unsigned i = 0; i < f_; ++i) {
    r = add(r, x);
    x = frobenius(x, 1);
  }
  return r;
}

}  // namespace stabforge
