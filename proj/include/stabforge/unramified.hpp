#pragma once
// W_f = Z_p[beta]/(g), g a lift of an irreducible polynomial of degree f over F_p,
// with coefficients stored modulo p^P.

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "stabforge/padic.hpp"

namespace stabforge {

using WElem = std::vector<u64>;  // coefficients of beta^0..beta^{f-1}

// Monic irreducible of degree f over F_p with the smallest code sum c_j p^j (j < f).
std::vector<unsigned> smallest_irreducible(unsigned p, unsigned f);

class UnramifiedRing {
 public:
  UnramifiedRing(unsigned p, unsigned f, unsigned P);

  unsigned p() const { return p_; }
  unsigned f() const { return f_; }
  unsigned P() const { return P_; }
  u64 modulus() const { return mod_; }
  u64 residue_size() const { return q_; }           // p^f
  const std::vector<unsigned>& defining_poly() const { return g_; }  // c_0..c_{f-1}, monic

  WElem zero() const { return WElem(f_, 0); }
  WElem one() const;
  WElem from_int(i64 z) const;
  WElem from_padic(const PadicInt& x) const;
  WElem beta() const;

  WElem add(const WElem& a, const WElem& b) const;
  WElem sub(const WElem& a, const WElem& b) const;
  WElem neg(const WElem& a) const;
  WElem mul(const WElem& a, const WElem& b) const;
  WElem scale(const WElem& a, u64 s) const;
  WElem pow(const WElem& a, u64 e) const;
  WElem inverse(const WElem& a) const;               // NonUnit
  WElem exact_div_p(const WElem& a) const;           // all coefficients divisible by p
  bool is_zero(const WElem& a) const;
  bool is_unit(const WElem& a) const;
  unsigned valuation(const WElem& a) const;          // P when zero
  WElem reduce_to(const WElem& a, unsigned P) const; // truncate coefficients mod p^P

  // Residue field F_{p^f} encoded as sum (c_j mod p) p^j.
  u64 residue_code(const WElem& a) const;
  WElem lift_code(u64 code) const;
  WElem teichmuller(u64 code) const;
  u64 residue_mul(u64 a, u64 b) const;
  u64 residue_add(u64 a, u64 b) const;
  u64 residue_pow(u64 a, u64 e) const;
  u64 residue_order(u64 a) const;                    // multiplicative order, a != 0
  u64 primitive_residue() const;                     // smallest code generating F_q^x

  WElem frobenius(const WElem& a, long t = 1) const; // sigma^t, t taken mod f
  WElem norm_to_base(const WElem& a) const;          // prod sigma^i(a), lies in Z_p
  WElem trace_to_base(const WElem& a) const;

 private:
  unsigned p_, f_, P_;
  u64 mod_, q_;
  std::vector<unsigned> g_;
  std::vector<WElem> frob_cols_;  // sigma(beta^j)
  std::vector<u64> residue_factor_;  // factorization of q-1 (distinct primes)
  mutable std::mutex cache_mu_;
  mutable std::map<u64, WElem> teich_cache_;
};

using UnramifiedRingPtr = std::shared_ptr<const UnramifiedRing>;

std::vector<u64> prime_factors(u64 n);

}  // namespace stabforge
