#pragma once
// Conjugacy classes of maximal finite subgroups of S_n and G_n(u).

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stabforge/padic.hpp"

namespace stabforge {

enum class LabelKind {
  Cyclic,       // C_k
  Metacyclic,   // C_a x| C_b, generator of C_b acting by x -> x^action
  Named,        // SD_16, Q_8, D_8, Q_16, T_24, O_48
  Composite,    // products and semidirect products of the above
  Extension,    // engine output: F_0 = C_{p^alpha} x C_d, extended by x_1 (index r1), then by W
};
const char* label_kind_name(LabelKind k);

struct GroupClassLabel {
  LabelKind kind = LabelKind::Cyclic;
  std::string name;
  u64 order = 1;
  std::vector<u64> parts;   // constituent orders; their product is order
  u64 action = 0;           // Metacyclic only
  int alpha = -1;           // the alpha the class comes from; -1 for the quaternionic family
  u64 count = 1;            // conjugacy classes sharing this description
  std::string provenance;   // branch tag
  std::string note;
};

struct ClassificationInput {
  unsigned p = 2;
  unsigned n = 1;
  u64 u_residue = 1;             // u mod p^2 (p odd) or u mod 8
  std::optional<i64> u_full;     // optional integer unit, checked against the residue
};

// Modulus of the residue datum: p^2 for p odd, 8 for p = 2.
u64 residue_modulus(unsigned p);
// InvalidArgument unless the datum is a unit residue consistent with u_full.
void validate_input(const ClassificationInput& in);

struct DroppedLabel {
  GroupClassLabel label;
  std::string reason;
};

struct ClassificationReport {
  std::string query;
  unsigned p = 2, n = 1;
  std::optional<u64> u_residue;
  std::vector<GroupClassLabel> classes;
  std::vector<std::pair<unsigned, u64>> pairs;  // abelian scan: (alpha, d)
  std::vector<DroppedLabel> dropped;
  std::vector<std::string> notes;
};

// n = (p-1) p^{k-1} m for p odd, n = 2^{k-1} m for p = 2; k = 0 when (p-1) does not divide n.
unsigned class_depth(unsigned p, unsigned n);
u64 odd_part_m(unsigned p, unsigned n);

ClassificationReport maximal_in_Sn(unsigned p, unsigned n);
ClassificationReport abelian_classes(unsigned p, unsigned n);

// Tables for n = 2 at p = 2, 3; the general engine elsewhere.
ClassificationReport maximal_in_Gn(const ClassificationInput& in);
// The general engine alone, also for n = 2.
ClassificationReport maximal_in_Gn_engine(const ClassificationInput& in);

constexpr unsigned kMaxGridPrime = 7;
constexpr unsigned kMaxGridN = 12;

struct QuaternionicExtension {
  bool exists = false;
  u64 order = 0;   // 48 m (2^m - 1)
  bool unique = false;
};
// p = 2, n = 2m with m odd; NotApplicable otherwise.
QuaternionicExtension quaternionic_extension(unsigned n, u64 u_residue);

// Explicit generators of the n = 2 table classes inside D_2^x / <p u>.
struct Realization {
  std::string name;
  u64 order = 0;
  std::map<u64, u64> element_orders;  // element order -> number of elements
};
std::vector<Realization> realize_n2(unsigned p, i64 u, unsigned prec = 10);

// Deterministic JSON; the same bytes for the same report.
std::string report_json(const ClassificationReport& r, int indent = 2);

}  // namespace stabforge
