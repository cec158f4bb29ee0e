#include "stabforge/local_field.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <sstream>

namespace stabforge {

namespace {

u64 bigint_mod(const BigInt& a, u64 m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return static_cast<u64>(r);
}

BigInt binomial(u64 n, u64 k) {
  if (k > n) return 0;
  BigInt r = 1;
  for (u64 i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

RationalValuation RationalValuation::make(i64 num, i64 den) {
  if (den <= 0) throw Error(ErrorKind::InvalidArgument, "denominator must be positive");
  i64 g = std::gcd(num < 0 ? -num : num, den);
  if (g == 0) g = 1;
  return {num / g, den / g};
}

std::string RationalValuation::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

u64 euler_phi_prime_power(unsigned p, unsigned alpha) {
  if (alpha == 0) return 1;
  return ipow(p, alpha - 1) * (p - 1);
}

std::vector<BigInt> q_alpha_coeffs(unsigned p, unsigned alpha) {
  if (alpha == 0) throw Error(ErrorKind::InvalidArgument, "alpha must be at least 1");
  // Phi_{p^alpha}(X+1) = sum_{k<p} (X+1)^{k p^{alpha-1}}
  const u64 step = ipow(p, alpha - 1);
  const u64 e = step * (p - 1);
  std::vector<BigInt> a(e + 1, 0);
  for (u64 k = 0; k < p; ++k)
    for (u64 i = 0; i <= k * step; ++i) a[i] += binomial(k * step, i);
  return a;
}

FieldTower::FieldTower(unsigned p, unsigned f, unsigned alpha, unsigned P)
    : p_(p), f_(f), alpha_(alpha) {
  if (!is_prime(p)) throw Error(ErrorKind::InvalidArgument, "p must be prime");
  if (P > max_precision(p))
    throw Error(ErrorKind::PrecisionOverflow, "coefficient precision exceeds the word size");
  e_ = static_cast<unsigned>(euler_phi_prime_power(p, alpha));
  pa_ = alpha == 0 ? 1 : ipow(p, alpha);
  W_ = std::make_shared<const UnramifiedRing>(p, f, P);
  if (alpha == 0)
    q_ = {BigInt(-static_cast<i64>(p)), BigInt(1)};
  else
    q_ = q_alpha_coeffs(p, alpha);
  const u64 m = W_->modulus();
  q_mod_.resize(q_.size());
  for (std::size_t i = 0; i < q_.size(); ++i) q_mod_[i] = bigint_mod(q_[i], m);
  q_over_p_.resize(e_);
  for (unsigned i = 0; i < e_; ++i) q_over_p_[i] = bigint_mod(q_[i] / p, m);
  a0_inv_ = PadicInt(p, P, q_over_p_[0]).invert().residue();
}

TowerPtr FieldTower::make(unsigned p, unsigned f, unsigned alpha, unsigned pi_prec) {
  const unsigned e = static_cast<unsigned>(euler_phi_prime_power(p, alpha));
  const unsigned P = (pi_prec + e - 1) / e + 2;
  return std::make_shared<const FieldTower>(p, f, alpha, P);
}

TowerPtr FieldTower::make_with_p_prec(unsigned p, unsigned f, unsigned alpha, unsigned p_prec) {
  return std::make_shared<const FieldTower>(p, f, alpha, p_prec);
}

FieldElem::FieldElem(TowerPtr t) : t_(std::move(t)) {
  c_.assign(t_->e(), t_->W().zero());
}

FieldElem FieldElem::from_int(TowerPtr t, i64 z) {
  FieldElem r(t);
  r.c_[0] = t->W().from_int(z);
  return r;
}

FieldElem FieldElem::from_w(TowerPtr t, const WElem& w) {
  FieldElem r(t);
  r.c_[0] = w;
  return r;
}

FieldElem FieldElem::pi(TowerPtr t) {
  FieldElem r(t);
  if (t->e() == 1) {
    // pi = -a_0
    r.c_[0][0] = (t->W().modulus() - t->q_mod()[0]) % t->W().modulus();
  } else {
    r.c_[1] = t->W().one();
  }
  return r;
}

FieldElem FieldElem::zeta(TowerPtr t) { return from_int(t, 1) + pi(t); }

FieldElem FieldElem::teichmuller(TowerPtr t, u64 residue_code) {
  return from_w(t, t->W().teichmuller(residue_code));
}

FieldElem FieldElem::omega(TowerPtr t) { return teichmuller(t, t->W().primitive_residue()); }

FieldElem FieldElem::parse(TowerPtr t, const std::string& s) {
  FieldElem r(t);
  std::size_t i = 0;
  auto skip = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  auto integer = [&]() -> i64 {
    skip();
    bool neg = false;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = s[i++] == '-';
    skip();
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
      throw Error(ErrorKind::ParseError, "expected integer in '" + s + "'");
    i64 v = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      v = v * 10 + (s[i++] - '0');
      if (v > (i64(1) << 50)) throw Error(ErrorKind::ParseError, "integer too large");
    }
    return neg ? -v : v;
  };
  bool any = false;
  for (;;) {
    skip();
    if (i >= s.size()) break;
    if (any) {
      if (s[i] != '+') throw Error(ErrorKind::ParseError, "expected '+' in '" + s + "'");
      ++i;
      skip();
    }
    unsigned power = 0;
    bool has_pi = false;
    if (s.compare(i, 2, "pi") == 0) {
      has_pi = true;
      i += 2;
      power = 1;
      skip();
      if (i < s.size() && s[i] == '^') {
        ++i;
        i64 k = integer();
        if (k < 0) throw Error(ErrorKind::ParseError, "negative pi exponent");
        power = static_cast<unsigned>(k);
      }
      skip();
      if (i < s.size() && s[i] == '*') {
        ++i;
        skip();
      } else {
        FieldElem term = FieldElem::pi(t).pow(power);
        r = r + term;
        any = true;
        continue;
      }
    }
    WElem w = t->W().zero();
    skip();
    if (i < s.size() && s[i] == '[') {
      ++i;
      unsigned j = 0;
      for (;;) {
        i64 c = integer();
        if (j >= t->f()) throw Error(ErrorKind::ParseError, "too many beta coefficients");
        w[j++] = t->W().from_int(c)[0];
        skip();
        if (i < s.size() && s[i] == ',') {
          ++i;
          continue;
        }
        break;
      }
      skip();
      if (i >= s.size() || s[i] != ']') throw Error(ErrorKind::ParseError, "expected ']' in '" + s + "'");
      ++i;
    } else {
      w = t->W().from_int(integer());
    }
    FieldElem term = FieldElem::from_w(t, w);
    if (has_pi) term = term * FieldElem::pi(t).pow(power);
    r = r + term;
    any = true;
  }
  if (!any) throw Error(ErrorKind::ParseError, "empty element literal");
  return r;
}

void FieldElem::check_same(const FieldElem& o) const {
  if (t_.get() != o.t_.get()) throw Error(ErrorKind::InvalidArgument, "elements from different towers");
}

FieldElem FieldElem::operator+(const FieldElem& o) const {
  check_same(o);
  FieldElem r(t_);
  for (unsigned i = 0; i < t_->e(); ++i) r.c_[i] = t_->W().add(c_[i], o.c_[i]);
  return r;
}

FieldElem FieldElem::operator-(const FieldElem& o) const {
  check_same(o);
  FieldElem r(t_);
  for (unsigned i = 0; i < t_->e(); ++i) r.c_[i] = t_->W().sub(c_[i], o.c_[i]);
  return r;
}

FieldElem FieldElem::operator-() const {
  FieldElem r(t_);
  for (unsigned i = 0; i < t_->e(); ++i) r.c_[i] = t_->W().neg(c_[i]);
  return r;
}

FieldElem FieldElem::operator*(const FieldElem& o) const {
  check_same(o);
  const auto& W = t_->W();
  const unsigned e = t_->e();
  std::vector<WElem> prod(2 * e - 1, W.zero());
  for (unsigned i = 0; i < e; ++i) {
    if (W.is_zero(c_[i])) continue;
    for (unsigned j = 0; j < e; ++j) {
      if (W.is_zero(o.c_[j])) continue;
      prod[i + j] = W.add(prod[i + j], W.mul(c_[i], o.c_[j]));
    }
  }
  const auto& a = t_->q_mod();
  for (unsigned d = 2 * e - 1; d-- > e;) {
    if (W.is_zero(prod[d])) continue;
    WElem c = prod[d];
    for (unsigned j = 0; j < e; ++j) prod[d - e + j] = W.sub(prod[d - e + j], W.scale(c, a[j]));
  }
  // e == 1: pi = -a_0 is a scalar and no reduction is needed
  FieldElem r(t_);
  for (unsigned i = 0; i < e; ++i) r.c_[i] = prod[i];
  return r;
}

FieldElem FieldElem::mul_w(const WElem& w) const {
  FieldElem r(t_);
  for (unsigned i = 0; i < t_->e(); ++i) r.c_[i] = t_->W().mul(c_[i], w);
  return r;
}

FieldElem FieldElem::pow(u64 k) const {
  FieldElem r = from_int(t_, 1);
  FieldElem b = *this;
  while (k) {
    if (k & 1) r = r * b;
    k >>= 1;
    if (k) b = b * b;
  }
  return r;
}

FieldElem FieldElem::pow_signed(i64 k) const {
  if (k >= 0) return pow(static_cast<u64>(k));
  return inverse().pow(static_cast<u64>(-k));
}

FieldElem FieldElem::inverse() const {
  if (!is_unit()) throw Error(ErrorKind::NonUnit, "inverting a non-unit field element");
  FieldElem z = from_w(t_, t_->W().inverse(c_[0]));
  FieldElem two = from_int(t_, 2);
  // Each Newton step doubles the pi-adic precision of z.
  for (unsigned prec = 1; prec < t_->pi_precision(); prec *= 2) z = z * (two - *this * z);
  return z;
}

FieldElem FieldElem::div_pi() const {
  const auto& W = t_->W();
  const unsigned e = t_->e();
  const unsigned p = t_->p();
  for (u64 v : c_[0])
    if (v % p != 0) throw Error(ErrorKind::NonUnit, "dividing a unit by pi");
  // c_0 = w a_0 with w = (c_0/p)(a_0/p)^{-1}; a_0 = -(a_1 pi + ... + pi^e).
  WElem w = W.scale(W.exact_div_p(c_[0]), t_->a0_over_p_inverse());
  FieldElem r(t_);
  const auto& a = t_->q_mod();
  for (unsigned j = 1; j < e; ++j) r.c_[j - 1] = W.sub(c_[j], W.scale(w, a[j]));
  r.c_[e - 1] = W.sub(r.c_[e - 1], w);
  return r;
}

FieldElem FieldElem::exact_div_p() const {
  FieldElem r(t_);
  for (unsigned i = 0; i < t_->e(); ++i) r.c_[i] = t_->W().exact_div_p(c_[i]);
  return r;
}

bool FieldElem::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [&](const WElem& w) { return t_->W().is_zero(w); });
}

bool FieldElem::is_unit() const { return t_->W().is_unit(c_[0]); }

u64 FieldElem::residue_code() const { return t_->W().residue_code(c_[0]); }

unsigned FieldElem::pi_valuation() const {
  const unsigned e = t_->e();
  unsigned best = t_->pi_precision();
  for (unsigned i = 0; i < e; ++i) {
    if (t_->W().is_zero(c_[i])) continue;
    best = std::min(best, e * t_->W().valuation(c_[i]) + i);
  }
  return best;
}

bool FieldElem::pi_valuation_at_least(unsigned n) const {
  if (n > t_->pi_precision())
    throw Error(ErrorKind::InsufficientPrecision, "requested pi-adic precision exceeds the tower");
  return pi_valuation() >= n;
}

RationalValuation FieldElem::valuation() const {
  if (is_zero()) throw Error(ErrorKind::IndeterminateAtPrecision, "element vanishes at working precision");
  return RationalValuation::make(pi_valuation(), t_->e());
}

std::string FieldElem::str() const {
  std::ostringstream os;
  bool first = true;
  const u64 m = t_->W().modulus();
  for (unsigned i = 0; i < t_->e(); ++i) {
    if (t_->W().is_zero(c_[i])) continue;
    if (!first) os << " + ";
    first = false;
    os << "pi^" << i << " * [";
    for (unsigned j = 0; j < t_->f(); ++j) {
      u64 v = c_[i][j];
      i64 cv = v > m / 2 ? -static_cast<i64>(m - v) : static_cast<i64>(v);
      os << (j ? "," : "") << cv;
    }
    os << "]";
  }
  if (first) os << "0";
  return os.str();
}

FieldElem epsilon_alpha(TowerPtr t) {
  FieldElem r(t);
  const auto& W = t->W();
  for (unsigned i = 0; i < t->e(); ++i) {
    WElem w = W.zero();
    w[0] = t->q_over_p()[i];
    r.coeffs()[i] = W.neg(w);
  }
  return r;
}

std::vector<i64> DigitExpansion::signed_digits() const {
  std::vector<i64> out;
  out.reserve(digits.size());
  for (u64 d : digits) out.push_back(d == p - 1 && p > 2 ? -1 : static_cast<i64>(d));
  return out;
}

DigitExpansion pi_digit_expansion(const FieldElem& x, unsigned n_pi) {
  const auto& t = x.tower();
  if (t->pi_precision() < n_pi + t->e() - 1)
    throw Error(ErrorKind::InsufficientPrecision, "tower precision too small for the expansion");
  DigitExpansion out;
  out.p = t->p();
  out.precision = n_pi;
  FieldElem cur = x;
  for (unsigned k = 0; k < n_pi; ++k) {
    u64 code = cur.residue_code();
    out.digits.push_back(code);
    if (k + 1 == n_pi) break;
    if (code != 0) cur = cur - FieldElem::teichmuller(t, code);
    cur = cur.div_pi();
  }
  return out;
}

FieldElem reconstruct(TowerPtr t, const DigitExpansion& d) {
  FieldElem r(t);
  FieldElem pk = FieldElem::from_int(t, 1);
  const FieldElem pi = FieldElem::pi(t);
  for (u64 code : d.digits) {
    if (code != 0) r = r + FieldElem::teichmuller(t, code) * pk;
    pk = pk * pi;
  }
  return r;
}

namespace {

FieldElem substitute(const FieldElem& x, const FieldElem& image_of_pi, long frob, TowerPtr target) {
  const auto& Ws = x.tower()->W();
  const auto& Wt = target->W();
  FieldElem r(target);
  for (unsigned i = x.tower()->e(); i-- > 0;) {
    WElem c = Ws.frobenius(x.coeffs()[i], frob);
    if (Ws.modulus() != Wt.modulus()) {
      if (Ws.modulus() < Wt.modulus())
        throw Error(ErrorKind::InsufficientPrecision, "source precision below target precision");
      for (auto& v : c) v %= Wt.modulus();
    }
    r = r * image_of_pi + FieldElem::from_w(target, c);
  }
  return r;
}

u64 normalize_s(const FieldTower& t, i64 s) {
  const u64 pa = t.cyclotomic_order();
  if (pa == 1) return 1;
  i64 m = static_cast<i64>(pa);
  i64 v = s % m;
  if (v < 0) v += m;
  if (v % static_cast<i64>(t.p()) == 0) throw Error(ErrorKind::InvalidArgument, "s must be prime to p");
  return static_cast<u64>(v);
}

}  // namespace

FieldElem galois_act(const FieldElem& x, i64 s, i64 t) {
  const auto& T = x.tower();
  u64 sn = normalize_s(*T, s);
  if (sn == 1 && (t % static_cast<i64>(T->f())) == 0) return x;
  FieldElem img = FieldElem::zeta(T).pow(sn) - FieldElem::from_int(T, 1);
  return substitute(x, img, static_cast<long>(t), T);
}

std::vector<GaloisElem> galois_closure(const FieldTower& t, const std::vector<std::pair<i64, i64>>& gens) {
  const u64 pa = t.cyclotomic_order();
  const u64 f = t.f();
  std::vector<GaloisElem> g;
  for (auto [s, tt] : gens) {
    i64 fm = static_cast<i64>(f);
    u64 tn = static_cast<u64>(((tt % fm) + fm) % fm);
    g.push_back({normalize_s(t, s), tn});
  }
  std::set<GaloisElem> seen{{1, 0}};
  std::vector<GaloisElem> order{{1, 0}};
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (const auto& h : g) {
      GaloisElem n{pa == 1 ? 1 : mulmod(order[i].s, h.s, pa), (order[i].t + h.t) % f};
      if (seen.insert(n).second) order.push_back(n);
    }
  }
  std::sort(order.begin(), order.end());
  return order;
}

FieldElem norm(const FieldElem& x, const std::vector<std::pair<i64, i64>>& gens) {
  FieldElem r = FieldElem::from_int(x.tower(), 1);
  for (const auto& g : galois_closure(*x.tower(), gens))
    r = r * galois_act(x, static_cast<i64>(g.s), static_cast<i64>(g.t));
  return r;
}

FieldElem trace(const FieldElem& x, const std::vector<std::pair<i64, i64>>& gens) {
  FieldElem r(x.tower());
  for (const auto& g : galois_closure(*x.tower(), gens))
    r = r + galois_act(x, static_cast<i64>(g.s), static_cast<i64>(g.t));
  return r;
}

FieldElem change_rings(const FieldElem& x, TowerPtr target) {
  const auto& S = x.tower();
  if (target->p() != S->p() || target->f() != S->f() || target->alpha() != S->alpha() + 1)
    throw Error(ErrorKind::InvalidArgument, "target must be the next cyclotomic level over the same base");
  if (S->W().defining_poly() != target->W().defining_poly())
    throw Error(ErrorKind::InvalidArgument, "mismatched unramified parts");
  FieldElem img = FieldElem::zeta(target).pow(S->p()) - FieldElem::from_int(target, 1);
  if (S->e() == 1 && S->alpha() == 0) {
    // Level 0 has no cyclotomic part; only scalars move.
    FieldElem r(target);
    WElem c = x.coeffs()[0];
    for (auto& v : c) v %= target->W().modulus();
    r.coeffs()[0] = c;
    return r;
  }
  return substitute(x, img, 0, target);
}

}  // namespace stabforge
