#pragma once
// Maximal order O_n = W_n<S>/(S^n = p*u, S*w = sigma(w)*S) with tracked precision.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "stabforge/local_field.hpp"
#include "stabforge/unramified.hpp"

namespace stabforge {

struct OrderParams {
  unsigned p = 2;
  unsigned n = 1;
  i64 u = 1;
  unsigned prec = 6;  // p-adic precision of coefficients
  unsigned M = 0;     // confidence threshold in units of 1/n; 0 means 2n
};

class OrderRing {
 public:
  explicit OrderRing(const OrderParams& params);
  const OrderParams& params() const { return params_; }
  unsigned p() const { return params_.p; }
  unsigned n() const { return params_.n; }
  unsigned threshold() const { return params_.M; }
  const UnramifiedRing& W() const { return *W_; }
  const WElem& u_w() const { return u_w_; }

 private:
  OrderParams params_;
  UnramifiedRingPtr W_;
  WElem u_w_;
};

using OrderRingPtr = std::shared_ptr<const OrderRing>;
OrderRingPtr make_order(const OrderParams& params);

enum class RelationStatus { Holds, Fails, Indeterminate };
const char* relation_status_name(RelationStatus s);

// p^k * sum_{i<n} w_i S^i, known modulo elements of valuation >= A/n.
class OrderElem {
 public:
  OrderElem() = default;

  static OrderElem zero(OrderRingPtr R);
  static OrderElem from_int(OrderRingPtr R, i64 z);
  static OrderElem from_w(OrderRingPtr R, const WElem& w);
  static OrderElem from_padic(OrderRingPtr R, const PadicInt& x);  // precision of x is kept
  static OrderElem S(OrderRingPtr R);
  static OrderElem omega(OrderRingPtr R);  // Teichmuller lift of the primitive residue
  static OrderElem teichmuller(OrderRingPtr R, u64 code);

  const OrderRingPtr& ring() const { return R_; }
  i64 shift() const { return k_; }
  const std::vector<WElem>& coeffs() const { return w_; }
  i64 precision() const { return A_; }  // in units of 1/n

  OrderElem operator+(const OrderElem& o) const;
  OrderElem operator-(const OrderElem& o) const;
  OrderElem operator-() const;
  OrderElem operator*(const OrderElem& o) const;
  OrderElem pow(i64 e) const;
  OrderElem inverse() const;  // IndeterminateAtPrecision when zero at precision
  OrderElem conj(const OrderElem& g) const { return g * (*this) * g.inverse(); }

  bool is_zero() const;          // zero at the tracked precision
  i64 vn() const;                // n * valuation; A when zero
  RationalValuation valuation() const;  // IndeterminateAtPrecision when zero
  std::string str() const;

 private:
  OrderElem(OrderRingPtr R, i64 k, std::vector<WElem> w, i64 A);
  void normalize();
  i64 cap() const;

  OrderRingPtr R_;
  i64 k_ = 0;
  std::vector<WElem> w_;
  i64 A_ = 0;
};

OrderElem mul(const OrderElem& x, const OrderElem& y);
OrderElem invert(const OrderElem& x);
RationalValuation valuation(const OrderElem& x);

// lhs - rhs vanishes at precision A: Holds when A reaches the threshold, else Indeterminate.
RelationStatus compare(const OrderElem& lhs, const OrderElem& rhs);

struct NamedCheck {
  std::string name;
  RelationStatus status;
};

struct Q8Embedding {
  OrderElem i, j, k, omega, rho;
};
// p = 2, n = 2, u = 1. PrecisionTooLow unless every check holds.
Q8Embedding embed_q8(const OrderParams& params);
std::vector<NamedCheck> q8_checks(const Q8Embedding& e);

struct C3NormalizerElements {
  OrderElem X, Z, zeta3, tau, omega;
};
// p = 3, n = 4, u = 1.
C3NormalizerElements c3_normalizer_elements(const OrderParams& params);
std::vector<NamedCheck> c3_normalizer_checks(const C3NormalizerElements& e);

// xi = c*S with c in W_n^x and xi^n = p * target.
OrderElem xi_generator(OrderRingPtr R, i64 target);
// c in W_n^x with N(c) = t, built level by level from the lexicographically first residue solution.
WElem solve_norm_equation(const UnramifiedRing& W, const PadicInt& t);

bool order_check(const OrderElem& x, u64 d);
bool hasse_embeds(u64 m, u64 n);

struct RelationWord {
  std::vector<std::pair<std::string, i64>> factors;
  std::string target;  // a name, or an integer literal
};
using OrderEnv = std::map<std::string, OrderElem>;
RelationStatus verify_relation(const RelationWord& word, const OrderEnv& env);

struct ScriptCheck {
  unsigned line = 0;
  std::string text;
  RelationStatus status = RelationStatus::Fails;
};
struct ScriptResult {
  OrderParams params;
  std::vector<ScriptCheck> checks;
  bool all_hold() const;
};
// Lines: "params p=2 n=2 u=1 [prec=6] [M=4]", "name := expr", "check expr == expr", "# comment".
// Expressions: + - * / ^ (integer exponent), parentheses, integers, names,
// builtins S, omega, rho (= sqrt(-7)), sqrt(int), teich(code).
ScriptResult run_relation_script(const std::string& text, const OrderParams& defaults = {});

}  // namespace stabforge
