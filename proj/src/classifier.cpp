#include "stabforge/classifier.hpp"

#include <algorithm>

#include <fmt/format.h>
#include <json.hpp>

#include "stabforge/division_order.hpp"
#include "stabforge/local_field.hpp"
#include "stabforge/numtheory.hpp"
#include "stabforge/unit_classes.hpp"

namespace stabforge {

const char* label_kind_name(LabelKind k) {
  switch (k) {
    case LabelKind::Cyclic: return "cyclic";
    case LabelKind::Metacyclic: return "metacyclic";
    case LabelKind::Named: return "named";
    case LabelKind::Composite: return "composite";
    case LabelKind::Extension: return "extension";
  }
  return "?";
}

namespace {

u64 product(const std::vector<u64>& v) {
  u64 r = 1;
  for (u64 x : v) r *= x;
  return r;
}

GroupClassLabel cyclic(u64 k, std::string prov) {
  GroupClassLabel l;
  l.kind = LabelKind::Cyclic;
  l.name = fmt::format("C_{}", k);
  l.order = k;
  l.parts = {k};
  l.provenance = std::move(prov);
  return l;
}

GroupClassLabel metacyclic(u64 a, u64 b, u64 action, std::string prov) {
  GroupClassLabel l;
  l.kind = LabelKind::Metacyclic;
  l.name = fmt::format("C_{} x| C_{}", a, b);
  l.order = a * b;
  l.parts = {a, b};
  l.action = action;
  l.provenance = std::move(prov);
  return l;
}

GroupClassLabel named(const std::string& name, u64 order, std::vector<u64> parts, LabelKind kind, std::string prov) {
  GroupClassLabel l;
  l.kind = kind;
  l.name = name;
  l.order = order;
  l.parts = std::move(parts);
  l.provenance = std::move(prov);
  if (product(l.parts) != l.order) throw Error(ErrorKind::InvalidArgument, "label order mismatch: " + name);
  return l;
}

u64 smallest_primitive_root(unsigned p) {
  for (u64 g = 1; g < p; ++g)
    if (multiplicative_order(g, p) == p - 1) return g;
  return 1;
}

void check_prime(unsigned p, unsigned n) {
  if (!is_prime(p)) throw Error(ErrorKind::InvalidArgument, "p must be prime");
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "n must be positive");
}

bool pm1_mod8(u64 u8) { return u8 == 1 || u8 == 7; }

}  // namespace

u64 residue_modulus(unsigned p) { return p == 2 ? 8 : u64(p) * p; }

void validate_input(const ClassificationInput& in) {
  check_prime(in.p, in.n);
  const u64 m = residue_modulus(in.p);
  if (in.u_residue >= m || in.u_residue % in.p == 0)
    throw Error(ErrorKind::InvalidArgument, fmt::format("u residue must be a unit modulo {}", m));
  if (in.u_full) {
    const i64 mm = static_cast<i64>(m);
    const u64 r = static_cast<u64>(((*in.u_full % mm) + mm) % mm);
    if (r != in.u_residue)
      throw Error(ErrorKind::InvalidArgument, fmt::format("u = {} does not reduce to residue {} mod {}", *in.u_full, in.u_residue, m));
  }
}

unsigned class_depth(unsigned p, unsigned n) {
  if (p == 2) return p_part_exponent(n, 2) + 1;
  if (n % (p - 1) != 0) return 0;
  return p_part_exponent(n / (p - 1), p) + 1;
}

u64 odd_part_m(unsigned p, unsigned n) {
  if (p == 2) return prime_to_p_part(n, 2);
  if (n % (p - 1) != 0) return n;
  return prime_to_p_part(n / (p - 1), p);
}

ClassificationReport maximal_in_Sn(unsigned p, unsigned n) {
  check_prime(p, n);
  ClassificationReport r;
  r.query = "maximal_in_Sn";
  r.p = p;
  r.n = n;
  const unsigned k = class_depth(p, n);
  if (p != 2) {
    r.classes.push_back(cyclic(ipow(p, n) - 1, k == 0 ? "Sn:p-odd:(p-1)-does-not-divide-n" : "Sn:p-odd:alpha=0"));
    r.classes.back().alpha = 0;
    const u64 g = smallest_primitive_root(p);
    for (unsigned a = 1; a <= k; ++a) {
      const u64 na = n_alpha(p, n, a);
      const u64 pa = ipow(p, a);
      const u64 action = teichmuller_lift(static_cast<unsigned>(g), p, a).residue();
      r.classes.push_back(metacyclic(pa, (ipow(p, static_cast<unsigned>(na)) - 1) * (p - 1), action, "Sn:p-odd:alpha>=1"));
      r.classes.back().alpha = static_cast<int>(a);
    }
    return r;
  }
  const u64 m = odd_part_m(2, n);
  std::vector<GroupClassLabel> cand;
  for (unsigned a = 1; a <= k; ++a) {
    if (k == 2 && a == 2) {
      const u64 c = ipow(2, static_cast<unsigned>(m)) - 1;
      GroupClassLabel l = m == 1 ? named("T_24", 24, {24}, LabelKind::Named, "Sn:p2:k=2:quaternionic")
                                 : named(fmt::format("T_24 x C_{}", c), 24 * c, {24, c}, LabelKind::Composite,
                                         "Sn:p2:k=2:quaternionic");
      l.alpha = -1;
      cand.push_back(l);
      continue;
    }
    const u64 na = n_alpha(2, n, a);
    GroupClassLabel l = cyclic(ipow(2, a) * (ipow(2, static_cast<unsigned>(na)) - 1), "Sn:p2:cyclic");
    l.alpha = static_cast<int>(a);
    cand.push_back(l);
  }
  for (const auto& l : cand) {
    // m = 1, k = 2: C_6 is a subgroup of T_24.
    if (k == 2 && m == 1 && l.alpha == 1) {
      r.dropped.push_back({l, "contained in T_24 (m = 1); listed among the k classes but not maximal"});
      r.notes.push_back("m=1: C_6 embeds in T_24, so the alpha=1 class is absorbed");
      continue;
    }
    r.classes.push_back(l);
  }
  return r;
}

ClassificationReport abelian_classes(unsigned p, unsigned n) {
  check_prime(p, n);
  ClassificationReport r;
  r.query = "abelian_classes";
  r.p = p;
  r.n = n;
  const unsigned k = class_depth(p, n);
  for (unsigned a = 0; a <= k; ++a) {
    const u64 na = n_alpha(p, n, a);
    for (u64 d : divisors(ipow(p, static_cast<unsigned>(na)) - 1)) r.pairs.emplace_back(a, d);
  }
  return r;
}

namespace {

void check_grid(const ClassificationInput& in) {
  if (in.p > kMaxGridPrime || in.n > kMaxGridN)
    throw Error(ErrorKind::UnsupportedParameters,
                fmt::format("(p, n) = ({}, {}) outside the grid p <= {}, n <= {}", in.p, in.n, kMaxGridPrime, kMaxGridN));
}

GroupClassLabel extension_label(unsigned p, unsigned a, u64 d, u64 r1, u64 w, std::string prov) {
  GroupClassLabel l;
  l.kind = LabelKind::Extension;
  const u64 pa = ipow(p, a);
  l.name = fmt::format("(C_{} x C_{}).{}.{}", pa, d, r1, w);
  l.parts = {pa, d, r1, w};
  l.order = product(l.parts);
  l.alpha = static_cast<int>(a);
  l.provenance = std::move(prov);
  return l;
}

ClassificationReport engine_odd(const ClassificationInput& in, ClassificationReport r) {
  const unsigned p = in.p, n = in.n;
  const i64 u = static_cast<i64>(in.u_residue);
  const unsigned k = class_depth(p, n);
  const bool u_condition = powmod(in.u_residue, p - 1, u64(p) * p) != 1;  // u not in mu x (1 + p^2 Z_p)
  for (unsigned a = 0; a <= k; ++a) {
    const u64 na = n_alpha(p, n, a);
    const u64 d = ipow(p, static_cast<unsigned>(na)) - 1;
    const R1Verdict r1 = r1_max(p, n, a, d, u);
    std::string prov;
    u64 w;
    if (a == 0) {
      w = n;
      prov = k == 0 ? "Gn:p-odd:(p-1)-does-not-divide-n:alpha=0:full-G" : "Gn:p-odd:alpha=0:full-G";
    } else if (a == 1) {
      w = n;
      prov = "Gn:p-odd:alpha=1:full-G";
    } else if (a == k && u_condition) {
      w = n;
      prov = "Gn:p-odd:alpha=k>=2:u-outside-mu-x-U2:full-G";
    } else {
      w = (p - 1) * prime_to_p_part(na, p);
      prov = a == k ? "Gn:p-odd:alpha=k>=2:u-in-mu-x-U2:G_p'-only" : "Gn:p-odd:2<=alpha<k:G_p'-only";
    }
    GroupClassLabel l = extension_label(p, a, d, r1.max, w, prov + "|r1:" + r1.branch);
    r.classes.push_back(l);
  }
  return r;
}

ClassificationReport engine_two(const ClassificationInput& in, ClassificationReport r) {
  const unsigned n = in.n;
  const i64 u = static_cast<i64>(in.u_residue);
  const bool pm1 = pm1_mod8(in.u_residue);
  const unsigned k = class_depth(2, n);
  const u64 m = odd_part_m(2, n);
  std::vector<GroupClassLabel> out;
  for (unsigned a = 1; a <= k; ++a) {
    const u64 na = n_alpha(2, n, a);
    const u64 d = ipow(2, static_cast<unsigned>(na)) - 1;
    const R1Verdict r1 = r1_max(2, n, a, d, u);
    GroupClassLabel l;
    if (a == 1) {
      l = extension_label(2, a, d, r1.max, n, n % 2 ? "Gn:p2:alpha=1:full-G:n-odd" : "Gn:p2:alpha=1:full-G:n-even");
      l.count = n % 2 ? 1 : 2;
      if (l.count == 2)
        l.note = fmt::format("two classes, generated by F_0 and xi_u resp. xi_-u; 2-Sylow C_2 x C_{} resp. C_{}",
                             ipow(2, k - 1), ipow(2, k));
    } else if (a == 2 && k == 2) {
      l = extension_label(2, a, d, r1.max, n, pm1 ? "Gn:p2:alpha=2:k=2:full-G:u=+-1" : "Gn:p2:alpha=2:k=2:full-G:u=+-3");
      l.count = pm1 ? 1 : 2;
    } else {
      l = extension_label(2, a, d, r1.max, m, a == 2 ? "Gn:p2:alpha=2:k>2:G_2'-only" : "Gn:p2:alpha>=3:G_2'-only");
    }
    l.provenance += "|r1:" + r1.branch;
    out.push_back(l);
  }
  if (k == 2) {
    const u64 c = ipow(2, static_cast<unsigned>(m)) - 1;
    const QuaternionicExtension q = quaternionic_extension(n, in.u_residue);
    GroupClassLabel l;
    if (q.exists) {
      l = named(m == 1 ? "(T_24).2" : fmt::format("(T_24 x C_{}).{}", c, n), q.order, {24, c, n}, LabelKind::Composite,
                "Gn:p2:quaternionic:u=+-1:full-G");
    } else {
      l = named(m == 1 ? "T_24" : fmt::format("(T_24 x C_{}).{}", c, m), 24 * c * m, {24, c, m}, LabelKind::Composite,
                "Gn:p2:quaternionic:u=+-3:odd-part-only");
    }
    l.alpha = -1;
    // Absorption into the quaternionic class.
    for (auto& o : out) {
      if (o.alpha == 2) {
        if (pm1) {
          r.dropped.push_back({o, "the alpha=2 extension lies in the quaternionic class"});
          o.count = 0;
        } else {
          GroupClassLabel gone = o;
          gone.count = 1;
          r.dropped.push_back({gone, "one of the two alpha=2 classes lies in the quaternionic class"});
          o.count = 1;
        }
      }
      if (o.alpha == 1 && m == 1 && pm1) {
        GroupClassLabel gone = o;
        gone.count = 1;
        gone.note = in.u_residue == 1 ? "the class with cyclic 2-Sylow" : "the class with 2-Sylow C_2 x C_2";
        r.dropped.push_back({gone, "contained in the quaternionic class (m = 1)"});
        o.count = 1;
        o.note = in.u_residue == 1 ? "remaining class has 2-Sylow C_2 x C_2" : "remaining class has cyclic 2-Sylow";
      }
    }
    out.push_back(l);
  }
  for (auto& o : out)
    if (o.count > 0) r.classes.push_back(o);
  return r;
}

ClassificationReport table_p3(const ClassificationInput& in, ClassificationReport r) {
  const u64 u3 = in.u_residue % 3;
  auto a = named("SD_16", 16, {16}, LabelKind::Named, "Gn:n=2:p=3:alpha=0");
  a.alpha = 0;
  r.classes.push_back(a);
  auto b = u3 == 1 ? named("C_3 x| Q_8", 24, {3, 8}, LabelKind::Composite, "Gn:n=2:p=3:alpha=1:u=1-mod-3")
                   : named("C_3 x| D_8", 24, {3, 8}, LabelKind::Composite, "Gn:n=2:p=3:alpha=1:u=-1-mod-3");
  b.alpha = 1;
  r.classes.push_back(b);
  return r;
}

ClassificationReport table_p2(const ClassificationInput& in, ClassificationReport r) {
  const u64 u8 = in.u_residue;
  auto c6c2 = named("C_6 x| C_2", 12, {6, 2}, LabelKind::Composite, "Gn:n=2:p=2:alpha=1:xi_u");
  auto c3c4 = named("C_3 x| C_4", 12, {3, 4}, LabelKind::Composite, "Gn:n=2:p=2:alpha=1:xi_-u");
  c6c2.alpha = c3c4.alpha = 1;
  if (u8 == 1) {
    auto o48 = named("O_48", 48, {48}, LabelKind::Named, "Gn:n=2:p=2:quaternionic:u=1-mod-8");
    o48.alpha = -1;
    r.classes = {c6c2, o48};
  } else if (u8 == 7) {
    auto t = named("T_24 x| C_2", 48, {24, 2}, LabelKind::Composite, "Gn:n=2:p=2:quaternionic:u=-1-mod-8");
    t.alpha = -1;
    r.classes = {c3c4, t};
  } else {
    auto s = u8 == 3 ? named("D_8", 8, {8}, LabelKind::Named, "Gn:n=2:p=2:alpha=2:u=3-mod-8")
                     : named("Q_8", 8, {8}, LabelKind::Named, "Gn:n=2:p=2:alpha=2:u=-3-mod-8");
    s.alpha = 2;
    auto t = named("T_24", 24, {24}, LabelKind::Named, "Gn:n=2:p=2:quaternionic:u=+-3-mod-8");
    t.alpha = -1;
    r.classes = {c3c4, c6c2, s, t};
  }
  return r;
}

ClassificationReport gn_header(const ClassificationInput& in, const char* query) {
  validate_input(in);
  check_grid(in);
  ClassificationReport r;
  r.query = query;
  r.p = in.p;
  r.n = in.n;
  r.u_residue = in.u_residue;
  return r;
}

}  // namespace

ClassificationReport maximal_in_Gn_engine(const ClassificationInput& in) {
  ClassificationReport r = gn_header(in, "maximal_in_Gn_engine");
  return in.p == 2 ? engine_two(in, std::move(r)) : engine_odd(in, std::move(r));
}

ClassificationReport maximal_in_Gn(const ClassificationInput& in) {
  ClassificationReport r = gn_header(in, "maximal_in_Gn");
  if (in.n == 2 && in.p == 3) return table_p3(in, std::move(r));
  if (in.n == 2 && in.p == 2) return table_p2(in, std::move(r));
  return in.p == 2 ? engine_two(in, std::move(r)) : engine_odd(in, std::move(r));
}

QuaternionicExtension quaternionic_extension(unsigned n, u64 u_residue) {
  if (n % 4 != 2) throw Error(ErrorKind::NotApplicable, "the quaternionic extension needs n = 2 mod 4");
  if (u_residue >= 8 || u_residue % 2 == 0) throw Error(ErrorKind::InvalidArgument, "u residue must be odd, mod 8");
  const u64 m = n / 2;
  QuaternionicExtension q;
  q.exists = pm1_mod8(u_residue);
  q.unique = q.exists;
  q.order = 48 * m * (ipow(2, static_cast<unsigned>(m)) - 1);
  return q;
}

namespace {

// Finite subgroup of D^x / <p u> generated by gens; elements kept with 0 <= vn < n.
class QuotientGroup {
 public:
  QuotientGroup(OrderRingPtr R, i64 pu) : R_(R), pu_(OrderElem::from_int(R, pu)), pu_inv_(pu_.inverse()) {}

  OrderElem reduce(OrderElem x) const {
    const i64 n = R_->n();
    while (x.vn() >= n) x = x * pu_inv_;
    while (x.vn() < 0) x = x * pu_;
    return x;
  }

  bool same(const OrderElem& a, const OrderElem& b) const {
    if (a.vn() != b.vn()) return false;
    RelationStatus s = compare(a, b);
    if (s == RelationStatus::Indeterminate) throw Error(ErrorKind::PrecisionTooLow, "group element equality undecided");
    return s == RelationStatus::Holds;
  }

  std::vector<OrderElem> closure(const std::vector<OrderElem>& gens, std::size_t limit = 256) const {
    std::vector<OrderElem> elems{OrderElem::from_int(R_, 1)};
    for (std::size_t i = 0; i < elems.size(); ++i) {
      for (const auto& g : gens) {
        OrderElem y = reduce(elems[i] * g);
        bool found = false;
        for (const auto& e : elems)
          if (same(e, y)) {
            found = true;
            break;
          }
        if (!found) {
          elems.push_back(y);
          if (elems.size() > limit) throw Error(ErrorKind::InvalidArgument, "generated group is too large");
        }
      }
    }
    return elems;
  }

  u64 element_order(const OrderElem& x, u64 limit = 256) const {
    const OrderElem one = OrderElem::from_int(R_, 1);
    OrderElem y = x;
    for (u64 k = 1; k <= limit; ++k) {
      if (same(y, one)) return k;
      y = reduce(y * x);
    }
    throw Error(ErrorKind::InvalidArgument, "element order exceeds limit");
  }

  Realization realize(const std::string& name, const std::vector<OrderElem>& gens) const {
    Realization out;
    out.name = name;
    auto elems = closure(gens);
    out.order = elems.size();
    for (const auto& e : elems) ++out.element_orders[element_order(e)];
    return out;
  }

 private:
  OrderRingPtr R_;
  OrderElem pu_, pu_inv_;
};

OrderElem padic_sqrt(const OrderRingPtr& R, i64 a, unsigned prec) {
  PadicInt x = PadicInt::from_integer(a, R->p(), prec + 1);
  return OrderElem::from_padic(R, hensel_sqrt(x).reduce(prec));
}

}  // namespace

std::vector<Realization> realize_n2(unsigned p, i64 u, unsigned prec) {
  if (p != 2 && p != 3) throw Error(ErrorKind::UnsupportedParameters, "realizations exist for p = 2, 3 only");
  if (unit_residue_mod(u, p) == 0) throw Error(ErrorKind::NonUnit, "u must be a unit");
  OrderParams params;
  params.p = p;
  params.n = 2;
  params.u = 1;
  params.prec = prec;
  std::vector<Realization> out;
  if (p == 3) {
    auto R = make_order(params);
    QuotientGroup G(R, 3 * u);
    const OrderElem w = OrderElem::omega(R);
    const OrderElem wS = w * OrderElem::S(R);
    const OrderElem one = OrderElem::from_int(R, 1);
    out.push_back(G.realize("SD_16", {w, xi_generator(R, u)}));
    const i64 s = unit_residue_mod(u, 3) == 1 ? u : -u;  // t^2 = s = 1 mod 3
    const OrderElem x1 = wS * padic_sqrt(R, s, prec);
    const OrderElem zeta3 = -((one + wS) * OrderElem::from_int(R, 2).inverse());
    out.push_back(G.realize(s == u ? "C_3 x| Q_8" : "C_3 x| D_8", {x1, zeta3, w * w}));
    return out;
  }
  const u64 u8 = unit_residue_mod(u, 8);
  const Q8Embedding q = embed_q8(params);
  auto R = q.i.ring();
  QuotientGroup G(R, 2 * u);
  const OrderElem one = OrderElem::from_int(R, 1);
  const OrderElem mw = -q.omega;
  Realization plus = G.realize("C_6 x| C_2", {mw, xi_generator(R, u)});
  Realization minus = G.realize("C_3 x| C_4", {mw, xi_generator(R, -u)});
  if (u8 == 1 || u8 == 7) {
    const OrderElem x1 = (one + q.i) * padic_sqrt(R, u8 == 1 ? u : -u, prec);
    Realization big = G.realize(u8 == 1 ? "O_48" : "T_24 x| C_2", {q.i, q.j, q.omega, x1});
    if (u8 == 1) return {plus, big};
    return {minus, big};
  }
  // x_3 = j z with z in Q_2(i), N(z) = -2u (u = 3 mod 8) or 2u (u = -3 mod 8), so x_3^2 = -N(z).
  const i64 target = u8 == 3 ? -2 * u : 2 * u;
  const OrderElem z = one + padic_sqrt(R, target - 1, prec) * q.i;
  const OrderElem x3 = q.j * z;
  Realization small = G.realize(u8 == 3 ? "D_8" : "Q_8", {q.i, x3});
  Realization t24 = G.realize("T_24", {q.i, q.j, q.omega});
  return {minus, plus, small, t24};
}

std::string report_json(const ClassificationReport& r, int indent) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["query"] = r.query;
  ordered_json input;
  input["p"] = r.p;
  input["n"] = r.n;
  if (r.u_residue) {
    input["u_residue"] = *r.u_residue;
    input["u_modulus"] = residue_modulus(r.p);
  }
  j["input"] = input;
  auto label_json = [](const GroupClassLabel& l) {
    ordered_json o;
    o["label"] = l.name;
    o["kind"] = label_kind_name(l.kind);
    o["order"] = l.order;
    o["parts"] = l.parts;
    if (l.kind == LabelKind::Metacyclic) o["action"] = l.action;
    if (l.alpha >= 0) o["alpha"] = l.alpha;
    o["count"] = l.count;
    o["provenance"] = l.provenance;
    if (!l.note.empty()) o["note"] = l.note;
    return o;
  };
  if (r.query != "abelian_classes") {
    ordered_json cls = ordered_json::array();
    for (const auto& l : r.classes) cls.push_back(label_json(l));
    j["classes"] = cls;
  } else {
    ordered_json pairs = ordered_json::array();
    for (const auto& [a, d] : r.pairs) pairs.push_back({{"alpha", a}, {"d", d}});
    j["pairs"] = pairs;
  }
  if (!r.dropped.empty()) {
    ordered_json dr = ordered_json::array();
    for (const auto& d : r.dropped) {
      ordered_json o = label_json(d.label);
      o["reason"] = d.reason;
      dr.push_back(o);
    }
    j["dropped"] = dr;
  }
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j.dump(indent);
}

}  // namespace stabforge
