#pragma once
// Tate-style cohomology of a finite cyclic group acting on Z^a + sum Z/d_j.

#include <string>
#include <vector>

#include "stabforge/local_field.hpp"

namespace stabforge {

using IntMatrix = std::vector<std::vector<BigInt>>;  // row-major

struct CycModule {
  unsigned rank = 0;              // free summands come first
  std::vector<BigInt> torsion;    // orders of the cyclic summands (1 allowed)
  IntMatrix action;               // column j = t(e_j)
  u64 order = 1;                  // r = |<t>|

  std::size_t dim() const { return rank + torsion.size(); }
  BigInt relation(std::size_t i) const { return i < rank ? BigInt(0) : torsion[i - rank]; }
};

// Checks that t preserves the relations and t^r = 1; BadAction otherwise.
void validate(const CycModule& M);

struct CohomologyGroup {
  unsigned free_rank = 0;
  std::vector<BigInt> factors;  // invariant factors > 1, each dividing the next

  BigInt order() const;  // of the torsion part
  bool operator==(const CohomologyGroup& o) const { return free_rank == o.free_rank && factors == o.factors; }
  std::string str() const;
};

// Canonical form of a product of cyclic groups of the given orders (0 means Z).
CohomologyGroup abelian_group(const std::vector<BigInt>& cyclic_orders);

IntMatrix one_minus_t(const CycModule& M);
IntMatrix norm_map(const CycModule& M);  // sum_{i<r} t^i

CohomologyGroup h0(const CycModule& M);
CohomologyGroup h_odd(const CycModule& M);
CohomologyGroup h_even(const CycModule& M);
// ker(f)/im(g) on M, where f and g are endomorphisms with f g = 0 modulo relations.
CohomologyGroup subquotient(const CycModule& M, const IntMatrix& f, const IntMatrix& g);
// H^{2k} from an explicit truncated complex M -(1-t)-> M -N-> ... with 2k+1 maps.
CohomologyGroup h_even_from_complex(const CycModule& M, unsigned k);

std::vector<BigInt> smith_diagonal(IntMatrix A);

struct GoldenInstance {
  std::string tag;         // which statement this instance comes from
  std::string params;
  CycModule module;
  CohomologyGroup expect_h0, expect_odd, expect_even;
  IntMatrix displayed_one_minus_t, displayed_norm;  // as printed; empty when not printed
};

struct GoldenResult {
  GoldenInstance instance;
  CohomologyGroup h0, odd, even;
  bool matches = false;
  bool display_consistent = true;  // printed maps agree with those computed from t
  std::string note;
};

std::vector<GoldenInstance> golden_instances();
std::vector<GoldenResult> golden_suite();

}  // namespace stabforge
