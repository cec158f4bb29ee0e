#pragma once
// Truncated p-adic integers: values of Z_p known modulo p^N.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "stabforge/error.hpp"

namespace stabforge {

using u64 = std::uint64_t;
using i64 = std::int64_t;

// Largest p^N the fixed-width representation accepts.
constexpr u64 kMaxModulus = u64(1) << 62;

bool is_prime(u64 n);
u64 ipow(u64 b, unsigned e);                      // throws PrecisionOverflow above kMaxModulus
u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 b, u64 e, u64 m);
unsigned vp(u64 x, unsigned p);                   // x > 0
unsigned max_precision(unsigned p);               // largest N with p^N <= kMaxModulus

class PadicInt {
 public:
  PadicInt() = default;
  // value is reduced modulo p^N
  PadicInt(unsigned p, unsigned N, u64 value);

  static PadicInt from_integer(i64 z, unsigned p, unsigned N);
  static PadicInt from_digits(unsigned p, const std::vector<unsigned>& digits);
  // "p:3 [d0,d1,...]"
  static PadicInt parse_literal(const std::string& s);

  unsigned prime() const { return p_; }
  unsigned precision() const { return n_; }
  u64 modulus() const { return mod_; }
  u64 residue() const { return v_; }          // canonical value in [0, p^N)
  i64 centered() const;                       // representative in (-p^N/2, p^N/2]
  std::vector<unsigned> digits() const;
  std::string literal() const;

  bool is_zero() const { return v_ == 0; }
  bool is_unit() const { return v_ % p_ != 0; }
  unsigned valuation() const;                 // N when zero

  PadicInt operator+(const PadicInt& o) const;
  PadicInt operator-(const PadicInt& o) const;
  PadicInt operator*(const PadicInt& o) const;
  PadicInt operator-() const;
  PadicInt pow(u64 e) const;
  PadicInt invert() const;                    // NonUnit
  PadicInt exact_div_by_p() const;            // precision drops by one; NonUnit-style failure if d0 != 0
  PadicInt reduce(unsigned N) const;          // lower precision

  bool operator==(const PadicInt& o) const {
    return p_ == o.p_ && n_ == o.n_ && v_ == o.v_;
  }
  bool operator!=(const PadicInt& o) const { return !(*this == o); }

 private:
  void check_compat(const PadicInt& o) const;
  PadicInt at_min(const PadicInt& o, u64 value) const;

  unsigned p_ = 2;
  unsigned n_ = 1;
  u64 mod_ = 2;
  u64 v_ = 0;
};

using PadicUnit = PadicInt;

PadicUnit teichmuller_lift(unsigned c, unsigned p, unsigned N);
PadicUnit hensel_sqrt(const PadicUnit& u);
std::pair<PadicUnit, PadicUnit> unit_decompose(const PadicUnit& u);
unsigned residue_datum(const PadicUnit& u, unsigned modulus);

}  // namespace stabforge
