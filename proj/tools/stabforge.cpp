// stabforge: command-line front end.
// Exit codes: 0 success or true verdict, 1 false verdict (membership, verify), 2 usage or input error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stabforge/classifier.hpp"
#include "stabforge/cyclic_cohomology.hpp"
#include "stabforge/division_order.hpp"
#include "stabforge/local_field.hpp"
#include "stabforge/unit_classes.hpp"

using namespace stabforge;
using json = nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string format = "json";
  int pi_prec = 0;  // 0: p^alpha + 2
  int p_prec = 0;   // 0: 6, or STABFORGE_PREC_OVERRIDE
  int s_prec = 0;   // 0: 2n
};

unsigned default_p_prec(const Common& c) {
  if (c.p_prec > 0) return static_cast<unsigned>(c.p_prec);
  if (const char* env = std::getenv("STABFORGE_PREC_OVERRIDE")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v <= 0) throw UsageError("STABFORGE_PREC_OVERRIDE must be a positive integer");
    return static_cast<unsigned>(v);
  }
  return 6;
}

unsigned pi_prec_for(const Common& c, unsigned p, unsigned alpha) {
  if (c.pi_prec > 0) return static_cast<unsigned>(c.pi_prec);
  return static_cast<unsigned>(ipow(p, alpha)) + 2;
}

// Integer, or a digit literal "p:3 [d0,d1,...]".
i64 parse_unit(const std::string& s, unsigned p, const char* flag) {
  if (s.find('[') != std::string::npos) {
    PadicInt x = PadicInt::parse_literal(s);
    if (x.prime() != p) throw UsageError(std::string(flag) + ": digit literal has the wrong prime");
    return static_cast<i64>(x.residue());
  }
  try {
    std::size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string(flag) + ": expected an integer or a digit literal, got '" + s + "'");
  }
}

std::vector<u64> parse_u64_list(const std::string& s, const char* flag) {
  std::vector<u64> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stoull(item));
    } catch (const std::exception&) {
      throw UsageError(std::string(flag) + ": bad entry '" + item + "'");
    }
  }
  return out;
}

void emit(const json& j, const Common& c) {
  if (c.format == "table") {
    for (auto it = j.begin(); it != j.end(); ++it) {
      std::cout << it.key() << "\t" << (it->is_string() ? it->get<std::string>() : it->dump()) << "\n";
    }
    return;
  }
  std::cout << j.dump(2) << "\n";
}

json expansion_json(const DigitExpansion& d, unsigned f) {
  json j;
  j["digits"] = d.digits;
  if (f == 1) j["signed_digits"] = d.signed_digits();
  j["precision"] = d.precision;
  return j;
}

json group_json(const CohomologyGroup& g) {
  json j;
  j["free_rank"] = g.free_rank;
  std::vector<std::string> f;
  for (const auto& x : g.factors) f.push_back(x.str());
  j["factors"] = f;
  j["text"] = g.str();
  return j;
}

void print_class_table(const ClassificationReport& r, std::ostream& os, bool header) {
  if (header) os << "p\tn\tu\tlabel\torder\tcount\tprovenance\n";
  for (const auto& l : r.classes)
    os << r.p << "\t" << r.n << "\t" << (r.u_residue ? std::to_string(*r.u_residue) : "-") << "\t" << l.name << "\t"
       << l.order << "\t" << l.count << "\t" << l.provenance << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stabforge: finite subgroups of Morava stabilizer groups, local field and division algebra arithmetic"};
  app.require_subcommand(1);
  app.fallthrough();
  Common com;
  app.add_option("--format", com.format, "Output mode")->check(CLI::IsMember({"json", "table"}));
  app.add_option("--pi-prec", com.pi_prec, "pi-adic precision (default p^alpha + 2)");
  app.add_option("--p-prec", com.p_prec, "p-adic coefficient precision (default 6, or STABFORGE_PREC_OVERRIDE)");
  app.add_option("--s-prec", com.s_prec, "confidence threshold for relations, in units of 1/n (default 2n)");

  unsigned p = 0, n = 0, alpha = 0, f = 1;
  u64 d = 0, r1 = 1, k = 0;
  std::string u_str = "1", elem, file, torsion, action;
  int depth = 0;
  bool scan = false, in_sn = false, abelian = false, with_mu = false, use_eps = false, engine = false;
  u64 u_mod = 0;
  std::string u_full;
  unsigned rank = 0;
  u64 order = 0;

  auto* classify = app.add_subcommand(
      "classify",
      "Maximal finite subgroup classes of G_n(u) as a function of u mod p^2 (p odd) or u mod 8 (p = 2); "
      "--sn for S_n, --abelian for the (alpha, d) lattice of abelian classes");
  classify->add_option("--p", p, "prime")->required(false);
  classify->add_option("--n", n, "height");
  classify->add_option("--u-mod", u_mod, "residue of u");
  classify->add_option("--u", u_full, "full unit u, checked against --u-mod");
  classify->add_flag("--scan", scan, "sweep p <= 7, n <= 12 over all unit residues");
  classify->add_flag("--sn", in_sn, "classes in S_n instead of G_n(u)");
  classify->add_flag("--abelian", abelian, "abelian classes as (alpha, d) pairs");
  classify->add_flag("--engine", engine, "use the general engine also for n = 2");

  auto* epsilon = app.add_subcommand(
      "epsilon", "pi-adic digits of eps_alpha, defined by (zeta_{p^alpha} - 1)^{phi(p^alpha)} = p eps_alpha, and of -eps_alpha");
  epsilon->add_option("--p", p)->required();
  epsilon->add_option("--alpha", alpha)->required();
  epsilon->add_option("--f", f, "residue degree of the tower");

  auto* expand = app.add_subcommand("expand", "pi-adic Teichmuller digit expansion of an element of Q_p(zeta_{p^alpha}, zeta_{p^f-1})");
  expand->add_option("--p", p)->required();
  expand->add_option("--alpha", alpha)->required();
  expand->add_option("--f", f);
  expand->add_option("--elem", elem, "element literal 'pi^i * [c0,c1,...] + ...'")->required();

  auto* member = app.add_subcommand(
      "membership", "Is x in <mu cap U_1, U_1^k> (with --mu) or U_1^k, after removing its Teichmuller part");
  member->add_option("--p", p)->required();
  member->add_option("--alpha", alpha)->required();
  member->add_option("--f", f);
  member->add_option("--k", k, "power")->required();
  member->add_option("--elem", elem, "element literal");
  member->add_flag("--eps", use_eps, "use eps_alpha / u as x");
  member->add_option("--u", u_str, "unit dividing eps_alpha (with --eps)");
  member->add_flag("--mu", with_mu, "include the roots of unity in U_1");
  member->add_option("--depth", depth, "quotient depth (default: smallest proven closing depth)");

  auto* r1cmd = app.add_subcommand("r1", "Largest index r1 of F_0 in F_1 for F_0 = C_{p^alpha} x C_d, with the branch used");
  auto* r2cmd = app.add_subcommand("r2", "Admissible r2 = |F_2/F_1| and extension counts |F_0 tensor Z/r2|");
  auto* etest = app.add_subcommand("epsilon-test", "Is eps_alpha / u trivial modulo <F_0, units^{r1}>");
  for (auto* c : {r1cmd, r2cmd, etest}) {
    c->add_option("--p", p)->required();
    c->add_option("--n", n)->required();
    c->add_option("--alpha", alpha)->required();
    c->add_option("--d", d, "order of the prime-to-p part of F_0")->required();
    c->add_option("--u", u_str, "unit u (integer or digit literal)");
  }
  for (auto* c : {r2cmd, etest}) c->add_option("--r1", r1)->required();

  auto* verify = app.add_subcommand(
      "verify", "Run a relation script in the maximal order W_n<S> of the division algebra of invariant 1/n");
  verify->add_option("file", file, "script path")->required();

  auto* cohom = app.add_subcommand(
      "cohomology", "H^0, H^odd and H^even of a cyclic group of order r acting on Z^rank + sum Z/d_j");
  cohom->add_option("--rank", rank, "number of free summands");
  cohom->add_option("--torsion", torsion, "comma-separated orders d_j");
  cohom->add_option("--action", action, "rows separated by ';', row i = t(e_i)")->required();
  cohom->add_option("--order", order, "r")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (classify->parsed()) {
      if (scan) {
        if (com.format == "json") {
          json rows = json::array();
          for (unsigned q : {2u, 3u, 5u, 7u})
            for (unsigned m = 1; m <= kMaxGridN; ++m)
              for (u64 r = 1; r < residue_modulus(q); ++r) {
                if (r % q == 0) continue;
                ClassificationReport rep = maximal_in_Gn({q, m, r, std::nullopt});
                rows.push_back(json::parse(report_json(rep, -1)));
              }
          std::cout << rows.dump(2) << "\n";
        } else {
          bool header = true;
          for (unsigned q : {2u, 3u, 5u, 7u})
            for (unsigned m = 1; m <= kMaxGridN; ++m)
              for (u64 r = 1; r < residue_modulus(q); ++r) {
                if (r % q == 0) continue;
                print_class_table(maximal_in_Gn({q, m, r, std::nullopt}), std::cout, header);
                header = false;
              }
        }
        return 0;
      }
      if (p == 0) throw UsageError("--p is required");
      if (n == 0) throw UsageError("--n is required");
      ClassificationReport rep;
      if (in_sn) {
        rep = maximal_in_Sn(p, n);
      } else if (abelian) {
        rep = abelian_classes(p, n);
      } else {
        if (classify->count("--u-mod") == 0) throw UsageError("--u-mod is required");
        ClassificationInput in{p, n, u_mod, std::nullopt};
        if (!u_full.empty()) in.u_full = parse_unit(u_full, p, "--u");
        rep = engine ? maximal_in_Gn_engine(in) : maximal_in_Gn(in);
      }
      if (com.format == "table" && !abelian) {
        print_class_table(rep, std::cout, true);
      } else {
        std::cout << report_json(rep, 2) << "\n";
      }
      return 0;
    }

    if (epsilon->parsed() || expand->parsed()) {
      const unsigned np = pi_prec_for(com, p, alpha);
      TowerPtr t = FieldTower::make(p, f, alpha, np);
      json j;
      j["p"] = p;
      j["alpha"] = alpha;
      j["f"] = f;
      if (epsilon->parsed()) {
        FieldElem e = epsilon_alpha(t);
        j["eps"] = expansion_json(pi_digit_expansion(e, np), f);
        j["minus_eps"] = expansion_json(pi_digit_expansion(-e, np), f);
      } else {
        FieldElem x = FieldElem::parse(t, elem);
        j["expansion"] = expansion_json(pi_digit_expansion(x, np), f);
      }
      emit(j, com);
      return 0;
    }

    if (member->parsed()) {
      if (use_eps == !elem.empty()) throw UsageError("give exactly one of --elem and --eps");
      const unsigned N = depth > 0 ? static_cast<unsigned>(depth) : required_depth(p, alpha, k, with_mu);
      FiltrationQuotient q = make_quotient(p, f, alpha, N);
      FieldElem x;
      if (use_eps) {
        x = epsilon_alpha(q.tower) * FieldElem::from_int(q.tower, parse_unit(u_str, p, "--u")).inverse();
      } else {
        x = FieldElem::parse(q.tower, elem);
      }
      SubgroupEchelon span = subgroup_span(q, k, with_mu);
      const bool verdict = membership(x, span);
      json j;
      j["p"] = p;
      j["alpha"] = alpha;
      j["f"] = f;
      j["k"] = k;
      j["mu"] = with_mu;
      j["depth"] = N;
      j["span_log_order"] = span.log_order();
      j["member"] = verdict;
      emit(j, com);
      return verdict ? 0 : 1;
    }

    if (r1cmd->parsed() || r2cmd->parsed() || etest->parsed()) {
      const i64 u = parse_unit(u_str, p, "--u");
      json j;
      j["p"] = p;
      j["n"] = n;
      j["alpha"] = alpha;
      j["d"] = d;
      j["u"] = u;
      if (r1cmd->parsed()) {
        R1Verdict v = r1_max(p, n, alpha, d, u);
        j["max"] = v.max;
        j["admissible"] = v.admissible;
        j["branch"] = v.branch;
      } else if (r2cmd->parsed()) {
        R2Verdict v = r2_admissible(p, n, alpha, d, u, r1);
        j["r1"] = r1;
        j["max"] = v.max;
        j["admissible"] = v.admissible;
        j["r_f0_r1"] = v.r_f0_r1;
        j["field_degree"] = v.field_degree;
        j["r1_maximal"] = v.r1_maximal;
        j["f0_maximal"] = v.f0_maximal;
        json counts = json::array();
        for (auto [r2, c] : v.counts) counts.push_back({{"r2", r2}, {"count", c}});
        j["counts"] = counts;
        j["branch"] = v.branch;
      } else {
        EpsilonVerdict v = epsilon_test_detail(p, n, alpha, d, u, r1);
        j["r1"] = r1;
        j["holds"] = v.holds;
        j["torsion_ok"] = v.torsion_ok;
        j["principal_ok"] = v.principal_ok;
        j["residue_degree"] = v.residue_degree;
        if (v.mu_maximal_checked) j["holds_mu_maximal"] = v.holds_mu_maximal;
      }
      emit(j, com);
      return 0;
    }

    if (verify->parsed()) {
      std::ifstream in(file);
      if (!in) throw UsageError("file: cannot open '" + file + "'");
      std::stringstream buf;
      buf << in.rdbuf();
      OrderParams defaults;
      defaults.prec = default_p_prec(com);
      defaults.M = static_cast<unsigned>(com.s_prec);
      ScriptResult res = run_relation_script(buf.str(), defaults);
      json j;
      j["file"] = file;
      j["params"] = {{"p", res.params.p}, {"n", res.params.n}, {"u", res.params.u}, {"prec", res.params.prec},
                     {"M", res.params.M == 0 ? 2 * res.params.n : res.params.M}};
      json checks = json::array();
      for (const auto& c : res.checks)
        checks.push_back({{"line", c.line}, {"check", c.text}, {"status", relation_status_name(c.status)}});
      j["checks"] = checks;
      j["all_hold"] = res.all_hold();
      emit(j, com);
      return res.all_hold() ? 0 : 1;
    }

    if (cohom->parsed()) {
      CycModule M;
      M.rank = rank;
      for (u64 t : parse_u64_list(torsion, "--torsion")) M.torsion.push_back(BigInt(t));
      M.order = order;
      const std::size_t dim = M.dim();
      std::vector<std::vector<BigInt>> rows;
      std::stringstream ss(action);
      std::string row;
      while (std::getline(ss, row, ';')) {
        std::vector<BigInt> r;
        std::stringstream rs(row);
        std::string x;
        while (std::getline(rs, x, ',')) {
          try {
            r.push_back(BigInt(std::stoll(x)));
          } catch (const std::exception&) {
            throw UsageError("--action: bad entry '" + x + "'");
          }
        }
        if (r.size() != dim) throw UsageError("--action: every row needs " + std::to_string(dim) + " entries");
        rows.push_back(r);
      }
      if (rows.size() != dim) throw UsageError("--action: expected " + std::to_string(dim) + " rows");
      M.action.assign(dim, std::vector<BigInt>(dim));
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t jj = 0; jj < dim; ++jj) M.action[jj][i] = rows[i][jj];
      validate(M);
      json j;
      j["rank"] = rank;
      j["torsion"] = parse_u64_list(torsion, "--torsion");
      j["order"] = order;
      j["H0"] = group_json(h0(M));
      j["H_odd"] = group_json(h_odd(M));
      j["H_even"] = group_json(h_even(M));
      emit(j, com);
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
