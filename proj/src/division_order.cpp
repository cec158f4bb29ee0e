#include "stabforge/division_order.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <sstream>

#include "stabforge/numtheory.hpp"

namespace stabforge {

namespace {

i64 floor_div(i64 a, i64 b) {
  i64 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
i64 ceil_div(i64 a, i64 b) { return -floor_div(-a, b); }

}  // namespace

OrderRing::OrderRing(const OrderParams& params) : params_(params) {
  if (!is_prime(params.p)) throw Error(ErrorKind::InvalidArgument, "p must be prime");
  if (params.n < 1) throw Error(ErrorKind::InvalidArgument, "n must be positive");
  if (params.prec < 1) throw Error(ErrorKind::PrecisionTooLow, "p-adic precision must be positive");
  if (params.u % i64(params.p) == 0) throw Error(ErrorKind::NonUnit, "u must be a p-adic unit");
  if (params_.M == 0) params_.M = 2 * params.n;
  W_ = std::make_shared<UnramifiedRing>(params.p, params.n, params.prec);
  u_w_ = W_->from_int(params.u);
}

OrderRingPtr make_order(const OrderParams& params) { return std::make_shared<OrderRing>(params); }

const char* relation_status_name(RelationStatus s) {
  switch (s) {
    case RelationStatus::Holds: return "holds";
    case RelationStatus::Fails: return "fails";
    case RelationStatus::Indeterminate: return "indeterminate";
  }
  return "?";
}

OrderElem::OrderElem(OrderRingPtr R, i64 k, std::vector<WElem> w, i64 A)
    : R_(std::move(R)), k_(k), w_(std::move(w)), A_(A) {
  normalize();
}

i64 OrderElem::cap() const { return i64(R_->n()) * (k_ + i64(R_->W().P())); }

void OrderElem::normalize() {
  const auto& W = R_->W();
  const i64 n = R_->n();
  A_ = std::min(A_, cap());
  bool all_zero = true;
  for (i64 i = 0; i < n; ++i) {
    i64 m = ceil_div(A_ - i, n) - k_;
    if (m <= 0) {
      w_[i] = W.zero();
    } else if (m < i64(W.P())) {
      w_[i] = W.reduce_to(w_[i], unsigned(m));
    }
    if (!W.is_zero(w_[i])) all_zero = false;
  }
  if (all_zero) return;
  while (std::all_of(w_.begin(), w_.end(), [&](const WElem& c) { return W.valuation(c) >= 1; })) {
    for (auto& c : w_) c = W.exact_div_p(c);
    ++k_;
  }
}

OrderElem OrderElem::zero(OrderRingPtr R) {
  const i64 A = i64(R->n()) * R->W().P();
  std::vector<WElem> w(R->n(), R->W().zero());
  return OrderElem(std::move(R), 0, std::move(w), A);
}

OrderElem OrderElem::from_w(OrderRingPtr R, const WElem& c) {
  std::vector<WElem> w(R->n(), R->W().zero());
  w[0] = c;
  const i64 A = i64(R->n()) * R->W().P();
  return OrderElem(std::move(R), 0, std::move(w), A);
}

OrderElem OrderElem::from_int(OrderRingPtr R, i64 z) {
  WElem c = R->W().from_int(z);
  return from_w(std::move(R), c);
}

OrderElem OrderElem::from_padic(OrderRingPtr R, const PadicInt& x) {
  if (x.prime() != R->p()) throw Error(ErrorKind::InvalidArgument, "prime mismatch");
  std::vector<WElem> w(R->n(), R->W().zero());
  const unsigned P = std::min(x.precision(), R->W().P());
  w[0] = R->W().from_padic(x.reduce(P));
  const i64 A = i64(R->n()) * P;
  return OrderElem(std::move(R), 0, std::move(w), A);
}

OrderElem OrderElem::S(OrderRingPtr R) {
  const auto& W = R->W();
  std::vector<WElem> w(R->n(), W.zero());
  i64 k = 0;
  if (R->n() == 1) {
    w[0] = R->u_w();
    k = 1;
  } else {
    w[1] = W.one();
  }
  const i64 A = i64(R->n()) * (k + W.P());
  return OrderElem(std::move(R), k, std::move(w), A);
}

OrderElem OrderElem::teichmuller(OrderRingPtr R, u64 code) {
  WElem c = R->W().teichmuller(code);
  return from_w(std::move(R), c);
}

OrderElem OrderElem::omega(OrderRingPtr R) {
  const u64 code = R->W().primitive_residue();
  return teichmuller(std::move(R), code);
}

OrderElem OrderElem::operator+(const OrderElem& o) const {
  if (R_ != o.R_) throw Error(ErrorKind::InvalidArgument, "elements of different orders");
  const auto& W = R_->W();
  const OrderElem& lo = k_ <= o.k_ ? *this : o;
  const OrderElem& hi = k_ <= o.k_ ? o : *this;
  const i64 d = hi.k_ - lo.k_;
  std::vector<WElem> w = lo.w_;
  if (d < i64(W.P())) {
    const u64 s = ipow(R_->p(), unsigned(d));
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = W.add(w[i], W.scale(hi.w_[i], s));
  }
  return OrderElem(R_, lo.k_, std::move(w), std::min(A_, o.A_));
}

OrderElem OrderElem::operator-() const {
  std::vector<WElem> w = w_;
  for (auto& c : w) c = R_->W().neg(c);
  return OrderElem(R_, k_, std::move(w), A_);
}

OrderElem OrderElem::operator-(const OrderElem& o) const { return *this + (-o); }

OrderElem OrderElem::operator*(const OrderElem& o) const {
  if (R_ != o.R_) throw Error(ErrorKind::InvalidArgument, "elements of different orders");
  const auto& W = R_->W();
  const unsigned n = R_->n();
  const WElem pu = W.scale(R_->u_w(), R_->p());
  std::vector<WElem> w(n, W.zero());
  for (unsigned j = 0; j < n; ++j) {
    if (W.is_zero(o.w_[j])) continue;
    for (unsigned i = 0; i < n; ++i) {
      if (W.is_zero(w_[i])) continue;
      WElem t = W.mul(w_[i], W.frobenius(o.w_[j], long(i)));
      if (i + j >= n) {
        w[i + j - n] = W.add(w[i + j - n], W.mul(t, pu));
      } else {
        w[i + j] = W.add(w[i + j], t);
      }
    }
  }
  const i64 A = std::min(A_ + o.vn(), o.A_ + vn());
  return OrderElem(R_, k_ + o.k_, std::move(w), A);
}

bool OrderElem::is_zero() const {
  return std::all_of(w_.begin(), w_.end(), [&](const WElem& c) { return R_->W().is_zero(c); });
}

i64 OrderElem::vn() const {
  const auto& W = R_->W();
  const i64 n = R_->n();
  i64 best = A_;
  for (i64 i = 0; i < n; ++i) {
    if (W.is_zero(w_[i])) continue;
    best = std::min(best, n * (k_ + W.valuation(w_[i])) + i);
  }
  return best;
}

RationalValuation OrderElem::valuation() const {
  if (is_zero()) throw Error(ErrorKind::IndeterminateAtPrecision, "valuation of an element that vanishes at precision");
  return RationalValuation::make(vn(), R_->n());
}

OrderElem OrderElem::inverse() const {
  if (is_zero()) throw Error(ErrorKind::IndeterminateAtPrecision, "inverse of an element that vanishes at precision");
  const auto& W = R_->W();
  const unsigned n = R_->n();
  const i64 v0 = vn();
  const unsigned i0 = unsigned(((v0 % n) + n) % n);
  const unsigned m = W.valuation(w_[i0]);
  WElem c = w_[i0];
  for (unsigned t = 0; t < m; ++t) c = W.exact_div_p(c);
  WElem ci = W.frobenius(W.inverse(c), -long(i0));
  i64 k = -(k_ + i64(m));
  if (i0 > 0) {
    ci = W.mul(ci, W.inverse(R_->u_w()));
    k -= 1;
  }
  std::vector<WElem> w(n, W.zero());
  w[(n - i0) % n] = ci;
  OrderElem y(R_, k, std::move(w), std::numeric_limits<i64>::max() / 4);
  const OrderElem one = from_int(R_, 1);
  for (int iter = 0; iter < 200; ++iter) {
    OrderElem e = one - (*this) * y;
    if (e.is_zero()) {
      y.A_ = std::min(y.A_, A_ - 2 * v0);
      y.normalize();
      return y;
    }
    y = y + y * e;
  }
  throw Error(ErrorKind::IndeterminateAtPrecision, "inverse iteration did not settle");
}

OrderElem OrderElem::pow(i64 e) const {
  if (e < 0) return inverse().pow(-e);
  OrderElem result = from_int(R_, 1);
  OrderElem base = *this;
  u64 k = u64(e);
  while (k) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

std::string OrderElem::str() const {
  const auto& W = R_->W();
  std::ostringstream os;
  bool first = true;
  for (unsigned i = 0; i < w_.size(); ++i) {
    if (W.is_zero(w_[i])) continue;
    if (!first) os << " + ";
    first = false;
    os << "[";
    for (unsigned j = 0; j < w_[i].size(); ++j) {
      if (j) os << ",";
      PadicInt c(R_->p(), W.P(), w_[i][j]);
      os << c.centered();
    }
    os << "]";
    if (i) os << "*S^" << i;
  }
  if (first) os << "0";
  if (k_ != 0) os << " (times p^" << k_ << ")";
  os << " + O(S^" << A_ << ")";
  return os.str();
}

OrderElem mul(const OrderElem& x, const OrderElem& y) { return x * y; }
OrderElem invert(const OrderElem& x) { return x.inverse(); }
RationalValuation valuation(const OrderElem& x) { return x.valuation(); }

RelationStatus compare(const OrderElem& lhs, const OrderElem& rhs) {
  OrderElem d = lhs - rhs;
  if (!d.is_zero()) return RelationStatus::Fails;
  return d.precision() >= i64(lhs.ring()->threshold()) ? RelationStatus::Holds : RelationStatus::Indeterminate;
}

namespace {

OrderElem sqrt_int(const OrderRingPtr& R, i64 a) {
  const unsigned P = R->W().P();
  PadicInt x = PadicInt::from_integer(a, R->p(), P + 1);
  PadicInt r = hensel_sqrt(x);
  // For p = 2 the root is only determined modulo 2^{N-1}.
  return OrderElem::from_padic(R, r.reduce(P));
}

void require_all_hold(const std::vector<NamedCheck>& checks, const char* what) {
  for (const auto& c : checks) {
    if (c.status == RelationStatus::Holds) continue;
    if (c.status == RelationStatus::Indeterminate)
      throw Error(ErrorKind::PrecisionTooLow, std::string(what) + ": " + c.name + " is indeterminate at this precision");
    throw Error(ErrorKind::InvalidArgument, std::string(what) + ": " + c.name + " fails");
  }
}

}  // namespace

Q8Embedding embed_q8(const OrderParams& params) {
  if (params.p != 2 || params.n != 2 || params.u != 1)
    throw Error(ErrorKind::InvalidArgument, "Q_8 embedding is defined for p = 2, n = 2, u = 1");
  auto R = make_order(params);
  Q8Embedding e;
  e.omega = OrderElem::omega(R);
  e.rho = sqrt_int(R, -7);
  const OrderElem one = OrderElem::from_int(R, 1);
  const OrderElem three_inv = OrderElem::from_int(R, 3).inverse();
  const OrderElem S = OrderElem::S(R);
  const OrderElem& w = e.omega;
  auto I = [&](i64 z) { return OrderElem::from_int(R, z); };
  const OrderElem a = (one + I(2) * w) * three_inv;
  const OrderElem srho = (I(3) * e.rho).inverse() * S;
  e.i = a + (one - I(4) * w) * srho;
  e.j = a - (I(5) + w) * srho;
  e.k = e.i * e.j;
  require_all_hold(q8_checks(e), "Q_8 embedding");
  return e;
}

std::vector<NamedCheck> q8_checks(const Q8Embedding& e) {
  auto R = e.i.ring();
  const OrderElem one = OrderElem::from_int(R, 1);
  const OrderElem m1 = OrderElem::from_int(R, -1);
  const OrderElem two = OrderElem::from_int(R, 2);
  const OrderElem S = OrderElem::S(R);
  const auto& i = e.i;
  const auto& j = e.j;
  const auto& k = e.k;
  const auto& w = e.omega;
  const OrderElem k_stated = OrderElem::from_int(R, -1) * (one + two * w) * OrderElem::from_int(R, 3).inverse() -
                             (OrderElem::from_int(R, 4) + OrderElem::from_int(R, 5) * w) *
                                 (OrderElem::from_int(R, 3) * e.rho).inverse() * S;
  const OrderElem T = (OrderElem::from_int(R, 3) + two * w) * e.rho.inverse() * S;
  return {
      {"rho^2 = -7", compare(e.rho * e.rho, OrderElem::from_int(R, -7))},
      {"T^2 = -2 for T = (3+2w)/rho S", compare(T * T, OrderElem::from_int(R, -2))},
      {"i^2 = -1", compare(i * i, m1)},
      {"j^2 = -1", compare(j * j, m1)},
      {"k^2 = -1", compare(k * k, m1)},
      {"ij = k", compare(i * j, k)},
      {"jk = i", compare(j * k, i)},
      {"ki = j", compare(k * i, j)},
      {"ji = -k", compare(j * i, -k)},
      {"ijk = -1", compare(i * j * k, m1)},
      {"k = -(1+2w)/3 - (4+5w)/(3 rho) S", compare(k, k_stated)},
      {"w^3 = 1", compare(w.pow(3), one)},
      {"1 + w + w^2 = 0", compare(one + w + w * w, OrderElem::zero(R))},
      {"w^2 i w^-2 = -k", compare(i.conj(w * w), -k)},
      {"w j w^-1 = -k", compare(j.conj(w), -k)},
      {"(1+i)^2 = 2i", compare((one + i) * (one + i), two * i)},
      {"(1+i) j (1+i)^-1 = k", compare(j.conj(one + i), k)},
  };
}

C3NormalizerElements c3_normalizer_elements(const OrderParams& params) {
  if (params.p != 3 || params.n != 4 || params.u != 1)
    throw Error(ErrorKind::InvalidArgument, "this construction is defined for p = 3, n = 4, u = 1");
  auto R = make_order(params);
  C3NormalizerElements e;
  e.omega = OrderElem::omega(R);
  const OrderElem S = OrderElem::S(R);
  e.X = e.omega * S;
  e.Z = e.omega.pow(4) * S * S;
  e.zeta3 = OrderElem::from_int(R, -2).inverse() * (OrderElem::from_int(R, 1) + e.Z);
  e.tau = e.omega.pow(5);
  require_all_hold(c3_normalizer_checks(e), "p = 3, n = 4 construction");
  return e;
}

std::vector<NamedCheck> c3_normalizer_checks(const C3NormalizerElements& e) {
  auto R = e.X.ring();
  const OrderElem one = OrderElem::from_int(R, 1);
  const OrderElem z2 = e.zeta3 * e.zeta3;
  std::vector<NamedCheck> out = {
      {"Z^2 = -3", compare(e.Z * e.Z, OrderElem::from_int(R, -3))},
      {"X^4 = 3 N(w)", compare(e.X.pow(4), OrderElem::from_int(R, 3) * OrderElem::from_w(R, R->W().norm_to_base(e.omega.coeffs()[0])))},
      {"zeta3^3 = 1", compare(e.zeta3.pow(3), one)},
      {"zeta3 != 1", compare(e.zeta3, one) == RelationStatus::Fails ? RelationStatus::Holds : RelationStatus::Fails},
      {"zeta3^2 = -(1 - Z)/2", compare(z2, OrderElem::from_int(R, -2).inverse() * (one - e.Z))},
      {"tau^16 = 1", compare(e.tau.pow(16), one)},
      {"tau^8 = -1", compare(e.tau.pow(8), OrderElem::from_int(R, -1))},
      {"tau zeta3 tau^-1 = zeta3^2", compare(e.zeta3.conj(e.tau), z2)},
      {"X zeta3 X^-1 = zeta3", compare(e.zeta3.conj(e.X), e.zeta3)},
      {"X tau X^-1 = tau^3", compare(e.tau.conj(e.X), e.tau.pow(3))},
  };
  return out;
}

WElem solve_norm_equation(const UnramifiedRing& W, const PadicInt& t_in) {
  const unsigned p = W.p();
  const unsigned P = W.P();
  if (!t_in.is_unit()) throw Error(ErrorKind::NonUnit, "norm target must be a unit");
  const PadicInt t = t_in.reduce(std::min(P, t_in.precision()));
  auto norm0 = [&](const WElem& c) { return PadicInt(p, P, W.norm_to_base(c)[0]); };

  WElem c;
  bool found = false;
  for (u64 code = 1; code < W.residue_size() && !found; ++code) {
    WElem cand = W.lift_code(code);
    if (norm0(cand).residue() % p == t.residue() % p) {
      c = cand;
      found = true;
    }
  }
  if (!found) throw Error(ErrorKind::InvalidArgument, "residue norm equation has no solution");

  std::vector<WElem> trace_rep(p);
  std::vector<bool> have(p, false);
  for (u64 code = 0; code < W.residue_size(); ++code) {
    WElem x = W.lift_code(code);
    const u64 tr = W.trace_to_base(x)[0] % p;
    if (!have[tr]) {
      have[tr] = true;
      trace_rep[tr] = x;
    }
  }

  for (unsigned j = 1; j < t.precision(); ++j) {
    PadicInt r = t.reduce(t.precision()) * norm0(c).reduce(t.precision()).invert();
    const u64 pj = ipow(p, j);
    const u64 diff = (r.residue() + r.modulus() - 1) % r.modulus();
    if (diff % pj != 0) throw Error(ErrorKind::InvalidArgument, "norm lifting lost a level");
    const u64 delta = (diff / pj) % p;
    if (delta == 0) continue;
    WElem step = W.add(W.one(), W.scale(trace_rep[delta], pj));
    c = W.mul(c, step);
  }
  if (norm0(c).reduce(t.precision()) != t) throw Error(ErrorKind::InvalidArgument, "norm equation not solved");
  return c;
}

OrderElem xi_generator(OrderRingPtr R, i64 target) {
  const auto& W = R->W();
  const unsigned P = W.P();
  PadicInt t = PadicInt::from_integer(target, R->p(), P) * PadicInt::from_integer(R->params().u, R->p(), P).invert();
  WElem c = solve_norm_equation(W, t);
  return OrderElem::from_w(R, c) * OrderElem::S(R);
}

bool order_check(const OrderElem& x, u64 d) {
  if (d == 0) throw Error(ErrorKind::InvalidArgument, "order must be positive");
  if (x.is_zero()) throw Error(ErrorKind::IndeterminateAtPrecision, "element vanishes at precision");
  if (x.vn() != 0) return false;
  const OrderElem one = OrderElem::from_int(x.ring(), 1);
  RelationStatus full = compare(x.pow(i64(d)), one);
  if (full == RelationStatus::Indeterminate) throw Error(ErrorKind::IndeterminateAtPrecision, "x^d = 1 undecided");
  if (full == RelationStatus::Fails) return false;
  for (u64 q : prime_factors(d)) {
    RelationStatus s = compare(x.pow(i64(d / q)), one);
    if (s == RelationStatus::Indeterminate) throw Error(ErrorKind::IndeterminateAtPrecision, "x^(d/q) = 1 undecided");
    if (s == RelationStatus::Holds) return false;
  }
  return true;
}

bool hasse_embeds(u64 m, u64 n) {
  if (m == 0 || n == 0) throw Error(ErrorKind::InvalidArgument, "m and n must be positive");
  return n % m == 0 && (n / m) % m == 1 % m;
}

namespace {

bool parse_int(const std::string& s, i64& out) {
  if (s.empty()) return false;
  std::size_t pos = 0;
  try {
    out = std::stoll(s, &pos);
  } catch (...) {
    return false;
  }
  return pos == s.size();
}

}  // namespace

RelationStatus verify_relation(const RelationWord& word, const OrderEnv& env) {
  if (env.empty()) throw Error(ErrorKind::InvalidArgument, "empty environment");
  auto R = env.begin()->second.ring();
  auto lookup = [&](const std::string& name) -> const OrderElem& {
    auto it = env.find(name);
    if (it == env.end()) throw Error(ErrorKind::UnknownName, name);
    return it->second;
  };
  OrderElem lhs = OrderElem::from_int(R, 1);
  for (const auto& [name, e] : word.factors) lhs = lhs * lookup(name).pow(e);
  i64 lit = 0;
  OrderElem rhs = parse_int(word.target, lit) ? OrderElem::from_int(R, lit) : lookup(word.target);
  return compare(lhs, rhs);
}

bool ScriptResult::all_hold() const {
  return std::all_of(checks.begin(), checks.end(), [](const ScriptCheck& c) { return c.status == RelationStatus::Holds; });
}

namespace {

class ExprParser {
 public:
  ExprParser(const std::string& s, const OrderRingPtr& R, const OrderEnv& env, unsigned line)
      : s_(s), R_(R), env_(env), line_(line) {}

  OrderElem parse() {
    OrderElem v = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + s_.substr(pos_) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line_) + ": " + msg);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  i64 integer() {
    skip();
    bool neg = false;
    if (eat('-')) neg = true;
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("integer expected");
    i64 v = std::stoll(s_.substr(start, pos_ - start));
    return neg ? -v : v;
  }
  i64 exponent() {
    if (eat('(')) {
      i64 e = integer();
      if (!eat(')')) fail("')' expected");
      return e;
    }
    return integer();
  }
  OrderElem expr() {
    OrderElem v = term();
    for (;;) {
      if (eat('+')) v = v + term();
      else if (eat('-')) v = v - term();
      else return v;
    }
  }
  OrderElem term() {
    OrderElem v = unary();
    for (;;) {
      if (eat('*')) v = v * unary();
      else if (eat('/')) v = v * unary().inverse();
      else return v;
    }
  }
  OrderElem unary() {
    if (eat('-')) return -unary();
    OrderElem b = primary();
    if (eat('^')) return b.pow(exponent());
    return b;
  }
  OrderElem primary() {
    skip();
    if (eat('(')) {
      OrderElem v = expr();
      if (!eat(')')) fail("')' expected");
      return v;
    }
    if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) return OrderElem::from_int(R_, integer());
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    if (start == pos_) fail("operand expected");
    const std::string name = s_.substr(start, pos_ - start);
    if (name == "sqrt" || name == "teich") {
      if (!eat('(')) fail("'(' expected after " + name);
      i64 a = integer();
      if (!eat(')')) fail("')' expected");
      if (name == "sqrt") return sqrt_int(R_, a);
      if (a < 0 || u64(a) >= R_->W().residue_size()) fail("residue code out of range");
      return OrderElem::teichmuller(R_, u64(a));
    }
    auto it = env_.find(name);
    if (it != env_.end()) return it->second;
    if (name == "S") return OrderElem::S(R_);
    if (name == "omega") return OrderElem::omega(R_);
    if (name == "rho") return sqrt_int(R_, -7);
    throw Error(ErrorKind::UnknownName, "line " + std::to_string(line_) + ": " + name);
  }

  const std::string& s_;
  OrderRingPtr R_;
  const OrderEnv& env_;
  unsigned line_;
  std::size_t pos_ = 0;
};

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

ScriptResult run_relation_script(const std::string& text, const OrderParams& defaults) {
  ScriptResult result;
  result.params = defaults;
  OrderRingPtr R;
  OrderEnv env;
  std::istringstream in(text);
  std::string raw;
  unsigned line = 0;
  auto ring = [&]() {
    if (!R) R = make_order(result.params);
    return R;
  };
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    if (auto h = s.find('#'); h != std::string::npos) s = s.substr(0, h);
    s = trim(s);
    if (s.empty()) continue;
    if (s.rfind("params", 0) == 0 && (s.size() == 6 || std::isspace(static_cast<unsigned char>(s[6])))) {
      if (R) throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": params must precede all definitions");
      std::istringstream ps(s.substr(6));
      std::string kv;
      while (ps >> kv) {
        auto eq = kv.find('=');
        i64 v = 0;
        if (eq == std::string::npos || !parse_int(kv.substr(eq + 1), v))
          throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": bad parameter '" + kv + "'");
        const std::string key = kv.substr(0, eq);
        if (key == "p") result.params.p = unsigned(v);
        else if (key == "n") result.params.n = unsigned(v);
        else if (key == "u") result.params.u = v;
        else if (key == "prec") result.params.prec = unsigned(v);
        else if (key == "M") result.params.M = unsigned(v);
        else throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": unknown parameter '" + key + "'");
      }
      continue;
    }
    if (s.rfind("check", 0) == 0 && s.size() > 5 && std::isspace(static_cast<unsigned char>(s[5]))) {
      const std::string body = trim(s.substr(5));
      auto eq = body.find("==");
      if (eq == std::string::npos) throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": check needs '=='");
      const std::string lhs = body.substr(0, eq);
      const std::string rhs = body.substr(eq + 2);
      OrderElem a = ExprParser(lhs, ring(), env, line).parse();
      OrderElem b = ExprParser(rhs, ring(), env, line).parse();
      result.checks.push_back({line, body, compare(a, b)});
      continue;
    }
    auto def = s.find(":=");
    if (def == std::string::npos) throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": expected 'name := expr' or 'check'");
    const std::string name = trim(s.substr(0, def));
    if (name.empty() || !std::all_of(name.begin(), name.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }) ||
        std::isdigit(static_cast<unsigned char>(name[0])))
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": bad name '" + name + "'");
    const std::string rhs = s.substr(def + 2);
    env[name] = ExprParser(rhs, ring(), env, line).parse();
  }
  if (R) result.params = R->params();
  return result;
}

}  // namespace stabforge
