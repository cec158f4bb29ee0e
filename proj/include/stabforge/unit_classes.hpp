#pragma once
// Unit filtration quotients U_1/U_N and power-class decisions.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "stabforge/local_field.hpp"

namespace stabforge {

struct FiltrationQuotient {
  TowerPtr tower;
  unsigned depth = 0;  // quotient U_1/U_depth
};

// Builds the tower with enough pi-adic precision for depth N.
FiltrationQuotient make_quotient(unsigned p, unsigned f, unsigned alpha, unsigned depth);

// Smallest depth at which the span <mu cap U_1, U_1^k> (or U_1^k alone) is known to contain U_depth.
unsigned required_depth(unsigned p, unsigned alpha, u64 k, bool include_mu);
// Depth bound that holds for every input; used to validate required_depth.
unsigned safe_depth(unsigned p, unsigned alpha, u64 k);

struct LeadingTerm {
  unsigned level = 0;          // depth when trivial
  std::vector<u64> coords;     // residue of (x-1)/pi^level in F_p^f
  bool trivial() const { return coords.empty(); }
};

class SubgroupEchelon {
 public:
  SubgroupEchelon(FiltrationQuotient q, u64 k, bool include_mu);

  const FiltrationQuotient& quotient() const { return q_; }
  u64 k() const { return k_; }
  bool includes_mu() const { return mu_; }
  // log_p of the span's order in U_1/U_depth
  std::size_t log_order() const { return entries_.size(); }
  const std::map<std::pair<unsigned, unsigned>, FieldElem>& entries() const { return entries_; }

  LeadingTerm leading(const FieldElem& x) const;  // x = 1 mod pi
  FieldElem reduce(const FieldElem& x) const;     // residual after echelon reduction
  bool contains_principal(const FieldElem& x) const;

 private:
  void insert(const FieldElem& x);

  FiltrationQuotient q_;
  u64 k_;
  bool mu_;
  std::map<std::pair<unsigned, unsigned>, FieldElem> entries_;  // (level, pivot) -> normalized element
};

SubgroupEchelon subgroup_span(const FiltrationQuotient& q, u64 k, bool include_mu);
// x a unit; its Teichmuller part is divided out first.
bool membership(const FieldElem& x, const SubgroupEchelon& span);

// 1 + beta^j pi^i is in the span for every depth_claim <= i < safe_depth.
bool depth_closes(const SubgroupEchelon& span_at_safe_depth, unsigned depth_claim);

struct EpsilonVerdict {
  bool holds = false;             // eps_alpha/u trivial modulo <F_0, units^{r1}>
  bool torsion_ok = false;
  bool principal_ok = false;
  unsigned residue_degree = 0;    // residue degree of Q_p(F_0)
  // Same test with F_0 replaced by all roots of unity of Q_p(zeta_{p^alpha}, zeta_{p^{n_alpha}-1}),
  // evaluated when d is not maximal and that field is within the supported size.
  bool mu_maximal_checked = false;
  bool holds_mu_maximal = false;
};

// F_0 = C_{p^alpha} x C_d; computed in Q_p(zeta_{p^alpha}, zeta_d).
EpsilonVerdict epsilon_test_detail(unsigned p, unsigned n, unsigned alpha, u64 d, i64 u, u64 r1);
bool epsilon_test(unsigned p, unsigned n, unsigned alpha, u64 d, i64 u, u64 r1);

struct R1Verdict {
  std::vector<u64> admissible;
  u64 max = 1;
  std::string branch;
};

struct R2Verdict {
  std::vector<u64> admissible;
  u64 max = 1;
  u64 r_f0_r1 = 1;
  u64 field_degree = 1;           // [Q_p(F_0) : Q_p]
  bool r1_maximal = false;
  bool f0_maximal = false;
  std::vector<std::pair<u64, u64>> counts;  // (r2, |F_0 tensor Z/r2|)
  std::string branch;
};

constexpr unsigned kMaxResidueDegree = 6;

R1Verdict r1_max(unsigned p, unsigned n, unsigned alpha, u64 d, i64 u);
R2Verdict r2_admissible(unsigned p, unsigned n, unsigned alpha, u64 d, i64 u, u64 r1);

// a = pi^k * w with w a unit
struct SplitElem {
  i64 k = 0;
  FieldElem w;
};
SplitElem split_uniformizer(const FieldElem& a);  // IndeterminateAtPrecision when a vanishes
bool is_power(const SplitElem& a, u64 m);
bool radical_irreducible(const FieldElem& a, u64 r);

// Parameters shared by several modules.
u64 n_alpha(unsigned p, unsigned n, unsigned alpha);  // n / phi(p^alpha); InvalidArgument if not integral

}  // namespace stabforge
