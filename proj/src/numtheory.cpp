#include "stabforge/numtheory.hpp"

#include <algorithm>
#include <numeric>

namespace stabforge {

std::vector<u64> divisors(u64 n) {
  std::vector<u64> out;
  for (u64 d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    out.push_back(d);
    if (d != n / d) out.push_back(n / d);
  }
  std::sort(out.begin(), out.end());
  return out;
}

u64 multiplicative_order(u64 a, u64 m) {
  if (m == 1) return 1;
  if (std::gcd(a % m, m) != 1) throw Error(ErrorKind::InvalidArgument, "order of a non-invertible residue");
  u64 k = 1;
  u64 x = a % m;
  while (x != 1) {
    x = mulmod(x, a, m);
    ++k;
  }
  return k;
}

u64 gcd_u(u64 a, u64 b) { return std::gcd(a, b); }
u64 lcm_u(u64 a, u64 b) { return a / std::gcd(a, b) * b; }

unsigned p_part_exponent(u64 n, unsigned p) { return n == 0 ? 0 : vp(n, p); }

u64 prime_to_p_part(u64 n, unsigned p) {
  while (n && n % p == 0) n /= p;
  return n;
}

u64 unit_residue_mod(i64 u, u64 m) {
  i64 r = u % static_cast<i64>(m);
  if (r < 0) r += static_cast<i64>(m);
  return static_cast<u64>(r);
}

}  // namespace stabforge
