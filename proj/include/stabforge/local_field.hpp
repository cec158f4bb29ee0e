#pragma once
// Q_p(zeta_{p^alpha}, zeta_{p^f - 1}) as polynomials in pi = zeta_{p^alpha} - 1 over W_f.

#include <memory>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "stabforge/unramified.hpp"

namespace stabforge {

using BigInt = boost::multiprecision::cpp_int;

struct RationalValuation {
  i64 num = 0;
  i64 den = 1;

  static RationalValuation make(i64 num, i64 den);
  bool operator==(const RationalValuation& o) const { return num == o.num && den == o.den; }
  bool operator<(const RationalValuation& o) const { return num * o.den < o.num * den; }
  std::string str() const;
};

// Coefficients a_0..a_{phi(p^alpha)} of the minimal polynomial of zeta_{p^alpha} - 1.
std::vector<BigInt> q_alpha_coeffs(unsigned p, unsigned alpha);

u64 euler_phi_prime_power(unsigned p, unsigned alpha);

class FieldTower;
using TowerPtr = std::shared_ptr<const FieldTower>;

class FieldTower {
 public:
  // Coefficient precision defaults to ceil(pi_prec / e) + 2.
  static TowerPtr make(unsigned p, unsigned f, unsigned alpha, unsigned pi_prec);
  static TowerPtr make_with_p_prec(unsigned p, unsigned f, unsigned alpha, unsigned p_prec);

  unsigned p() const { return p_; }
  unsigned f() const { return f_; }
  unsigned alpha() const { return alpha_; }
  unsigned e() const { return e_; }
  unsigned P() const { return W_->P(); }
  unsigned pi_precision() const { return e_ * W_->P(); }
  const UnramifiedRing& W() const { return *W_; }
  UnramifiedRingPtr W_ptr() const { return W_; }
  const std::vector<BigInt>& q_coeffs() const { return q_; }   // exact, monic
  const std::vector<u64>& q_mod() const { return q_mod_; }     // reduced mod p^P
  u64 cyclotomic_order() const { return pa_; }                 // p^alpha
  const std::vector<u64>& q_over_p() const { return q_over_p_; }  // a_i / p for i < e, mod p^P
  u64 a0_over_p_inverse() const { return a0_inv_; }

  FieldTower(unsigned p, unsigned f, unsigned alpha, unsigned P);

 private:
  unsigned p_, f_, alpha_, e_;
  u64 pa_;
  UnramifiedRingPtr W_;
  std::vector<BigInt> q_;
  std::vector<u64> q_mod_;
  std::vector<u64> q_over_p_;
  u64 a0_inv_ = 1;
};

class FieldElem {
 public:
  FieldElem() = default;
  explicit FieldElem(TowerPtr t);  // zero

  static FieldElem from_int(TowerPtr t, i64 z);
  static FieldElem from_w(TowerPtr t, const WElem& w);
  static FieldElem pi(TowerPtr t);
  static FieldElem zeta(TowerPtr t);           // 1 + pi, of order p^alpha
  static FieldElem teichmuller(TowerPtr t, u64 residue_code);
  static FieldElem omega(TowerPtr t);          // Teichmuller lift of the primitive residue
  // "pi^i * [c0,c1,...] + ..." with integer beta-coefficients
  static FieldElem parse(TowerPtr t, const std::string& s);

  const TowerPtr& tower() const { return t_; }
  const std::vector<WElem>& coeffs() const { return c_; }
  std::vector<WElem>& coeffs() { return c_; }

  FieldElem operator+(const FieldElem& o) const;
  FieldElem operator-(const FieldElem& o) const;
  FieldElem operator*(const FieldElem& o) const;
  FieldElem operator-() const;
  FieldElem pow(u64 k) const;
  FieldElem pow_signed(i64 k) const;
  FieldElem inverse() const;                   // NonUnit
  FieldElem div_pi() const;                    // constant coefficient must be divisible by p
  FieldElem exact_div_p() const;
  FieldElem mul_w(const WElem& w) const;

  bool is_zero() const;
  bool is_unit() const;
  u64 residue_code() const;                    // residue class in F_{p^f}
  // v_pi(x) >= n, read off the coefficient grid
  bool pi_valuation_at_least(unsigned n) const;
  unsigned pi_valuation() const;               // e*P when zero at precision
  RationalValuation valuation() const;         // IndeterminateAtPrecision when zero

  bool operator==(const FieldElem& o) const { return c_ == o.c_; }
  bool operator!=(const FieldElem& o) const { return !(*this == o); }
  std::string str() const;

 private:
  void check_same(const FieldElem& o) const;
  TowerPtr t_;
  std::vector<WElem> c_;
};

// p * eps = pi^{phi(p^alpha)}
FieldElem epsilon_alpha(TowerPtr t);

struct DigitExpansion {
  std::vector<u64> digits;  // residue codes; digit i multiplies pi^i via its Teichmuller lift
  unsigned precision = 0;
  unsigned p = 0;
  // For residue degree 1: the digit p-1 is shown as -1 (its lift is -1).
  std::vector<i64> signed_digits() const;
};

DigitExpansion pi_digit_expansion(const FieldElem& x, unsigned n_pi);
FieldElem reconstruct(TowerPtr t, const DigitExpansion& d);

// sigma_{s,t}: zeta -> zeta^s, Frobenius^t on W_f.
FieldElem galois_act(const FieldElem& x, i64 s, i64 t);

struct GaloisElem {
  u64 s;  // unit mod p^alpha (1 when alpha = 0)
  u64 t;  // mod f
  bool operator<(const GaloisElem& o) const { return s != o.s ? s < o.s : t < o.t; }
  bool operator==(const GaloisElem& o) const { return s == o.s && t == o.t; }
};

std::vector<GaloisElem> galois_closure(const FieldTower& t, const std::vector<std::pair<i64, i64>>& gens);
FieldElem norm(const FieldElem& x, const std::vector<std::pair<i64, i64>>& gens);
FieldElem trace(const FieldElem& x, const std::vector<std::pair<i64, i64>>& gens);

// Level alpha -> level alpha+1 via zeta_{p^alpha} -> zeta_{p^{alpha+1}}^p.
FieldElem change_rings(const FieldElem& x, TowerPtr target);

}  // namespace stabforge
