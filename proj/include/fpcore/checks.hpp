#pragma once

#include <map>
#include <optional>
#include <string>

#include "fpcore/pullback.hpp"

namespace fpcore {

/// Exact nonnegative rational; inequalities are evaluated in integers
/// (lhs * den <= num), never in floating point.
struct Rat {
  long long num = 1;
  long long den = 1;
};

/// max over factors of theta(G_i / image(A)).
Rat theta_of_quotients(const AmbientSpec& spec);
/// theta(G) for a plain free product: every finite subgroup is conjugate
/// into a factor, so a3(G) = min over factors of a3(G_i).
Rat theta_plain_product(const AmbientSpec& spec);

struct CheckResult {
  std::string name;
  bool applicable = false;
  std::string reason;  // why not applicable / budget notes
  long long lhs = 0;
  Rat rhs;
  bool ok = true;
  double ratio = 0.0;  // lhs/rhs when evaluable, else 0
  bool budget_flagged = false;
};

/// Everything the per-theorem checkers consume.
struct Measured {
  bool plain = true;
  bool free_rank0 = false;
  int a_order = 1;
  bool hk_elliptic = false;
  long long cbar_h = 0, cbar_k = 0, cbar_hk = 0;
  bool h_edge_free = true, k_edge_free = true;
  bool h_free = false, k_free = false;  // trivial vertex stabilizers
  bool valence2_ok = false;             // thm 1(1) hypothesis on both cores
  bool star_stab_ok = true;             // thm 1(2) hypothesis
  long long n_eff = 1;
  long long m = 1;
  std::optional<int> a_cap_hk;  // nullopt = unverified at budget
  Rat theta_quot{1, 1}, theta_plain{1, 1};
};

CheckResult check_thm1_part1(const Measured& m);
CheckResult check_thm1_part2(const Measured& m);
CheckResult check_thm1_part2_kurosh(const Measured& m);
CheckResult check_thm2(const Measured& m);
CheckResult check_thm2_absA(const Measured& m);
CheckResult check_thm3(const Measured& m);
CheckResult check_ivanov(const Measured& m);
CheckResult check_zakharov(const Measured& m);
CheckResult check_finite_index(const Measured& m);
CheckResult check_elliptic_trivial(const Measured& m);
std::vector<CheckResult> all_checks(const Measured& m);

/// Per image-vertex-pair degree sums (the proof's per-pair inequalities) over
/// the trimmed intersection core.
struct LocalChecks {
  int pairs = 0, violations = 0;
  int case1_pairs = 0, case1_violations = 0;
  int ineq2_pairs = 0, ineq2_violations = 0;
  double max_ratio = 0.0;
};
LocalChecks check_local_degree_inequality(const PullbackGraph& p,
                                          const IntersectionResult& ir,
                                          const Measured& m);

/// Star bounds of Lemma 2 at every core vertex of the intersection, plus the
/// embedding property where the image vertex is degenerate.
struct Lemma2Checks {
  int vertices = 0, violations = 0;
  int embed_checked = 0, embed_violations = 0;
};
Lemma2Checks check_lemma2(const PullbackGraph& p, const IntersectionResult& ir);

/// One verified instance.
struct VerificationRecord {
  std::string id;
  std::string spec_summary;
  std::vector<std::string> gens_h, gens_k;
  bool h_elliptic = false, k_elliptic = false, hk_elliptic = false;
  bool h_edge_free = true, k_edge_free = true;
  ComplexityReport ch, ck, chk;
  long long n_eff = 1, m_h = 1, m_k = 1;
  std::optional<int> a_cap_hk;
  Rat theta_quot{1, 1}, theta_plain{1, 1};
  std::vector<CheckResult> checks;
  LocalChecks local;
  Lemma2Checks lemma2;
  bool lemma1_ok = true;
  int violations = 0;  // across checks + local + lemma2 + lemma1
  std::string note;
};

struct Budgets {
  int oracle_len = 8;
  int tree_radius = 3;
  size_t node_cap = 400000;
};

/// Full single-instance analysis: builds both graphs, the pullback and the
/// intersection, evaluates every applicable check. Throws on the unsupported
/// combination (amalgamated, free_rank > 0, not edge-free).
VerificationRecord analyze_instance(const AmbientSpec& spec,
                                    const std::vector<NormalForm>& gens_h,
                                    const std::vector<NormalForm>& gens_k,
                                    const Budgets& budgets,
                                    const std::string& id);

}  // namespace fpcore
