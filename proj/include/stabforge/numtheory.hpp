#pragma once

#include <vector>

#include "stabforge/padic.hpp"

namespace stabforge {

std::vector<u64> divisors(u64 n);  // ascending
u64 multiplicative_order(u64 a, u64 m);  // gcd(a, m) = 1; returns 1 for m = 1
u64 gcd_u(u64 a, u64 b);
u64 lcm_u(u64 a, u64 b);
// n = p^v * rest
unsigned p_part_exponent(u64 n, unsigned p);
u64 prime_to_p_part(u64 n, unsigned p);
u64 unit_residue_mod(i64 u, u64 m);  // representative in [0, m)

}  // namespace stabforge
