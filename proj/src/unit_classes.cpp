#include "stabforge/unit_classes.hpp"

#include <algorithm>
#include <deque>

#include "stabforge/numtheory.hpp"

namespace stabforge {

namespace {

std::vector<u64> code_digits(u64 code, unsigned p, unsigned f) {
  std::vector<u64> out(f);
  for (unsigned j = 0; j < f; ++j) {
    out[j] = code % p;
    code /= p;
  }
  return out;
}

}  // namespace

u64 n_alpha(unsigned p, unsigned n, unsigned alpha) {
  u64 e = euler_phi_prime_power(p, alpha);
  if (n % e != 0) throw Error(ErrorKind::InvalidArgument, "phi(p^alpha) must divide n");
  return n / e;
}

FiltrationQuotient make_quotient(unsigned p, unsigned f, unsigned alpha, unsigned depth) {
  unsigned e = static_cast<unsigned>(euler_phi_prime_power(p, alpha));
  return {FieldTower::make(p, f, alpha, depth + e), depth};
}

unsigned safe_depth(unsigned p, unsigned alpha, u64 k) {
  const unsigned a = p_part_exponent(k, p);
  if (a == 0) return 1;
  const unsigned e = static_cast<unsigned>(euler_phi_prime_power(p, alpha));
  // U_n^p = U_{n+e} once n > e/(p-1)
  const unsigned n0 = e / (p - 1) + 1;
  return n0 + a * e + 1;
}

unsigned required_depth(unsigned p, unsigned alpha, u64 k, bool include_mu) {
  const unsigned a = p_part_exponent(k, p);
  if (a == 0) return 1;
  if (p != 2 && a == 1) return static_cast<unsigned>(ipow(p, alpha)) + 2;
  (void)include_mu;  // mu cap U_1 does not lower the closing depth for the other cases
  return safe_depth(p, alpha, k);
}

SubgroupEchelon::SubgroupEchelon(FiltrationQuotient q, u64 k, bool include_mu)
    : q_(std::move(q)), k_(k), mu_(include_mu) {
  const auto& T = q_.tower;
  const unsigned p = T->p();
  const unsigned N = q_.depth;
  if (N < required_depth(p, T->alpha(), k, include_mu))
    throw Error(ErrorKind::DepthTooSmall, "quotient depth below the closing depth for this power");
  if (T->pi_precision() < N + T->e())
    throw Error(ErrorKind::InsufficientPrecision, "tower precision below the quotient depth");
  const unsigned a = p_part_exponent(k, p);
  const u64 pk = ipow(p, a);
  if (include_mu) {
    if (T->alpha() >= 1)
      insert(FieldElem::zeta(T));
    else if (p == 2)
      insert(FieldElem::from_int(T, -1));
  }
  const FieldElem pi = FieldElem::pi(T);
  FieldElem pi_i = pi;
  for (unsigned i = 1; i < N; ++i) {
    for (unsigned j = 0; j < T->f(); ++j) {
      FieldElem g = FieldElem::from_int(T, 1) + FieldElem::from_w(T, T->W().lift_code(ipow(p, j))) * pi_i;
      insert(g.pow(pk));
    }
    pi_i = pi_i * pi;
  }
}

LeadingTerm SubgroupEchelon::leading(const FieldElem& x) const {
  const auto& T = q_.tower;
  const unsigned p = T->p();
  const unsigned e = T->e();
  FieldElem y = x - FieldElem::from_int(T, 1);
  LeadingTerm lt;
  unsigned best = q_.depth;
  unsigned best_j = 0, best_v = 0;
  for (unsigned j = 0; j < e; ++j) {
    const WElem& c = y.coeffs()[j];
    if (T->W().is_zero(c)) continue;
    unsigned v = T->W().valuation(c);
    unsigned lev = e * v + j;
    if (lev < best) {
      best = lev;
      best_j = j;
      best_v = v;
    }
  }
  lt.level = best;
  if (best >= q_.depth) return lt;
  if (best == 0) throw Error(ErrorKind::InvalidArgument, "element is not 1 mod pi");
  // y/pi^level = (c_j / p^v) eps^{-v} mod pi, and eps = -a_0/p mod pi
  WElem c = y.coeffs()[best_j];
  for (unsigned s = 0; s < best_v; ++s) c = T->W().exact_div_p(c);
  u64 eps_res = (p - T->q_over_p()[0] % p) % p;
  u64 scale = powmod(powmod(eps_res, p - 2, p), best_v, p);
  if (p == 2) scale = 1;
  lt.coords = code_digits(T->W().residue_code(c), p, T->f());
  for (auto& v : lt.coords) v = v * scale % p;
  return lt;
}

FieldElem SubgroupEchelon::reduce(const FieldElem& x) const {
  const unsigned p = q_.tower->p();
  FieldElem cur = x;
  for (;;) {
    LeadingTerm lt = leading(cur);
    if (lt.trivial()) return cur;
    unsigned j = 0;
    while (lt.coords[j] == 0) ++j;
    auto it = entries_.find({lt.level, j});
    if (it == entries_.end()) return cur;
    cur = cur * it->second.pow(p - lt.coords[j]);
  }
}

bool SubgroupEchelon::contains_principal(const FieldElem& x) const {
  return leading(reduce(x)).trivial();
}

void SubgroupEchelon::insert(const FieldElem& x0) {
  const unsigned p = q_.tower->p();
  std::deque<FieldElem> queue{x0};
  while (!queue.empty()) {
    FieldElem r = reduce(queue.front());
    queue.pop_front();
    LeadingTerm lt = leading(r);
    if (lt.trivial()) continue;
    unsigned j = 0;
    while (lt.coords[j] == 0) ++j;
    u64 c = lt.coords[j];
    if (c != 1) r = r.pow(powmod(c, p - 2, p));
    entries_.emplace(std::make_pair(lt.level, j), r);
    queue.push_back(r.pow(p));
  }
}

SubgroupEchelon subgroup_span(const FiltrationQuotient& q, u64 k, bool include_mu) {
  return SubgroupEchelon(q, k, include_mu);
}

bool membership(const FieldElem& x, const SubgroupEchelon& span) {
  if (x.tower().get() != span.quotient().tower.get())
    throw Error(ErrorKind::InvalidArgument, "element and span live in different towers");
  if (!x.is_unit()) throw Error(ErrorKind::NonUnit, "membership of a non-unit");
  FieldElem w = x * FieldElem::teichmuller(x.tower(), x.residue_code()).inverse();
  return span.contains_principal(w);
}

bool depth_closes(const SubgroupEchelon& span, unsigned depth_claim) {
  const auto& T = span.quotient().tower;
  const FieldElem pi = FieldElem::pi(T);
  for (unsigned i = depth_claim; i < span.quotient().depth; ++i) {
    FieldElem pi_i = pi.pow(i);
    for (unsigned j = 0; j < T->f(); ++j) {
      FieldElem g = FieldElem::from_int(T, 1) + FieldElem::from_w(T, T->W().lift_code(ipow(T->p(), j))) * pi_i;
      if (!span.contains_principal(g)) return false;
    }
  }
  return true;
}

namespace {

EpsilonVerdict epsilon_core(unsigned p, unsigned n, unsigned alpha, u64 d, i64 u, u64 r1, bool compare) {
  if (alpha < 1) throw Error(ErrorKind::InvalidArgument, "alpha must be at least 1");
  const u64 na = n_alpha(p, n, alpha);
  const u64 e = euler_phi_prime_power(p, alpha);
  if (d == 0 || r1 == 0) throw Error(ErrorKind::InvalidArgument, "d and r1 must be positive");
  if (e % r1 != 0) throw Error(ErrorKind::InvalidArgument, "r1 must divide the ramification index");
  if (unit_residue_mod(u, p) == 0) throw Error(ErrorKind::NonUnit, "u must be a p-adic unit");
  const u64 f0 = multiplicative_order(p, d);
  if (na % f0 != 0) throw Error(ErrorKind::InvalidArgument, "d must divide p^{n_alpha} - 1");
  if (f0 > kMaxResidueDegree) throw Error(ErrorKind::UnsupportedParameters, "residue degree above the supported bound");

  const unsigned a = p_part_exponent(r1, p);
  const u64 pk = ipow(p, a);
  const unsigned depth = required_depth(p, alpha, pk, true);
  FiltrationQuotient q = make_quotient(p, static_cast<unsigned>(f0), alpha, depth);
  const TowerPtr& T = q.tower;

  FieldElem x = epsilon_alpha(T) * FieldElem::from_int(T, u).inverse();
  EpsilonVerdict out;
  out.residue_degree = static_cast<unsigned>(f0);
  const u64 q0 = T->W().residue_size() - 1;
  const u64 code = x.residue_code();
  const u64 ord = T->W().residue_order(code);
  out.torsion_ok = lcm_u(d, q0 / gcd_u(r1, q0)) % ord == 0;
  if (a == 0) {
    out.principal_ok = true;
  } else {
    SubgroupEchelon span(q, pk, true);
    out.principal_ok = membership(x, span);
  }
  out.holds = out.torsion_ok && out.principal_ok;
  const u64 dmax = ipow(p, static_cast<unsigned>(na)) - 1;
  if (compare && d != dmax && na <= kMaxResidueDegree) {
    out.mu_maximal_checked = true;
    out.holds_mu_maximal = epsilon_core(p, n, alpha, dmax, u, r1, false).holds;
  }
  return out;
}

}  // namespace

EpsilonVerdict epsilon_test_detail(unsigned p, unsigned n, unsigned alpha, u64 d, i64 u, u64 r1) {
  return epsilon_core(p, n, alpha, d, u, r1, true);
}

bool epsilon_test(unsigned p, unsigned n, unsigned alpha, u64 d, i64 u, u64 r1) {
  return epsilon_core(p, n, alpha, d, u, r1, false).holds;
}

R1Verdict r1_max(unsigned p, unsigned n, unsigned alpha, u64 d, i64 u) {
  const u64 na = n_alpha(p, n, alpha);
  const u64 full = ipow(p, static_cast<unsigned>(na)) - 1;
  if (d == 0 || full % d != 0) throw Error(ErrorKind::InvalidArgument, "d must divide p^{n_alpha} - 1");
  if (unit_residue_mod(u, p) == 0) throw Error(ErrorKind::NonUnit, "u must be a p-adic unit");
  R1Verdict v;
  if (p != 2) {
    if (alpha == 0) {
      v.max = 1;
      v.branch = "p-odd:unramified";
    } else if (d == full) {
      v.max = p - 1;
      v.branch = "p-odd:ramified:maximal-F0";
    } else {
      const u64 e = euler_phi_prime_power(p, alpha);
      v.max = 1;
      for (u64 r : divisors(e))
        if (epsilon_test(p, n, alpha, d, u, r)) v.max = std::max(v.max, r);
      v.branch = "p-odd:ramified:computed";
    }
  } else {
    const u64 u8 = unit_residue_mod(u, 8);
    if (alpha <= 1) {
      v.max = 1;
      v.branch = "p2:alpha<=1";
    } else if (u8 == 1 || u8 == 7) {
      v.max = 2;
      v.branch = "p2:u=+-1-mod-8";
    } else if (d % 3 == 0) {
      v.max = 2;
      v.branch = "p2:u=+-3-mod-8:zeta3-in-F0";
    } else {
      v.max = 1;
      v.branch = "p2:u=+-3-mod-8:no-zeta3";
    }
  }
  v.admissible = divisors(v.max);
  return v;
}

R2Verdict r2_admissible(unsigned p, unsigned n, unsigned alpha, u64 d, i64 u, u64 r1) {
  R1Verdict r1v = r1_max(p, n, alpha, d, u);
  if (r1 == 0 || r1v.max % r1 != 0) throw Error(ErrorKind::InvalidArgument, "r1 is not admissible");
  const u64 na = n_alpha(p, n, alpha);
  const u64 e = euler_phi_prime_power(p, alpha);
  R2Verdict v;
  v.field_degree = e * multiplicative_order(p, d);
  v.r1_maximal = r1 == r1v.max;
  v.f0_maximal = d == ipow(p, static_cast<unsigned>(na)) - 1;
  const u64 base = n / v.field_degree;
  u64 c = 1;
  if (e == 1) {
    c = 1;
  } else if (p != 2) {
    c = (p - 1) / r1;
  } else {
    const u64 u8 = unit_residue_mod(u, 8);
    if (alpha >= 2 && (u8 == 1 || u8 == 7 || d % 3 == 0)) c = 2 / r1;
  }
  u64 r = base;
  for (u64 g = gcd_u(r, c); g > 1; g = gcd_u(r, c)) r /= g;
  v.r_f0_r1 = r;
  if (v.r1_maximal) {
    v.admissible = divisors(base);
    v.branch = "r1-maximal:iff";
  } else {
    v.admissible = divisors(r);
    v.branch = "r1-not-maximal:sufficient";
  }
  v.max = v.admissible.back();
  const u64 f0_order = ipow(p, alpha) * d;
  for (u64 r2 : v.admissible) v.counts.emplace_back(r2, gcd_u(f0_order, r2));
  return v;
}

SplitElem split_uniformizer(const FieldElem& a) {
  if (a.is_zero()) throw Error(ErrorKind::IndeterminateAtPrecision, "element vanishes at working precision");
  SplitElem s;
  unsigned k = a.pi_valuation();
  s.k = k;
  s.w = a;
  for (unsigned i = 0; i < k; ++i) s.w = s.w.div_pi();
  return s;
}

bool is_power(const SplitElem& a, u64 m) {
  if (m <= 1) return true;
  const i64 mm = static_cast<i64>(m);
  if (((a.k % mm) + mm) % mm != 0) return false;
  const auto& T = a.w.tower();
  const unsigned p = T->p();
  const u64 q0 = T->W().residue_size() - 1;
  const u64 code = a.w.residue_code();
  if (code == 0) throw Error(ErrorKind::InvalidArgument, "unit part is not a unit");
  const u64 ord = T->W().residue_order(code);
  if ((q0 / gcd_u(m, q0)) % ord != 0) return false;
  const unsigned ap = p_part_exponent(m, p);
  if (ap == 0) return true;
  const u64 pk = ipow(p, ap);
  const unsigned depth = required_depth(p, T->alpha(), pk, false);
  const i64 avail = static_cast<i64>(T->pi_precision()) - std::max<i64>(a.k, 0);
  if (avail < static_cast<i64>(depth + T->e()))
    throw Error(ErrorKind::IndeterminateAtPrecision, "not enough precision to decide the power class");
  SubgroupEchelon span({T, depth}, pk, false);
  return membership(a.w, span);
}

bool radical_irreducible(const FieldElem& a, u64 r) {
  if (r == 0) throw Error(ErrorKind::InvalidArgument, "r must be positive");
  if (r == 1) return true;
  SplitElem s = split_uniformizer(a);
  for (u64 q : prime_factors(r))
    if (is_power(s, q)) return false;
  if (r % 4 == 0) {
    const auto& T = a.tower();
    SplitElem four = split_uniformizer(FieldElem::from_int(T, 4));
    SplitElem b{s.k - four.k, -(s.w * four.w.inverse())};
    if (is_power(b, 4)) return false;
  }
  return true;
}

}  // namespace stabforge
