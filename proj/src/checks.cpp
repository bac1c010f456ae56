#include "fpcore/checks.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>

namespace fpcore {

namespace {

Rat theta_from_a3(const A3Theta& t) { return {t.theta_num, t.theta_den}; }

Rat max_theta(const std::vector<A3Theta>& ts) {
  // theta = a3/(a3-2) is decreasing in a3; infinite a3 gives theta = 1
  std::optional<int> min_a3;
  for (auto& t : ts)
    if (t.a3 && (!min_a3 || *t.a3 < *min_a3)) min_a3 = t.a3;
  if (!min_a3) return {1, 1};
  return {*min_a3, *min_a3 - 2};
}

CheckResult finish(CheckResult r, const Measured&) {
  if (r.applicable) {
    r.ok = r.lhs * r.rhs.den <= r.rhs.num;
    if (r.rhs.num > 0)
      r.ratio = (double)r.lhs * (double)r.rhs.den / (double)r.rhs.num;
    else
      r.ratio = r.lhs == 0 ? 0.0 : -1.0;
  }
  return r;
}

}  // namespace

Rat theta_of_quotients(const AmbientSpec& spec) {
  if (!spec.amalgamated()) return theta_plain_product(spec);
  std::vector<A3Theta> ts;
  for (int i = 0; i < spec.num_factors(); ++i) {
    QuotientMap q = quotient_group(spec.factors[i], spec.a_image(i));
    ts.push_back(a3_theta(q.quotient));
  }
  return max_theta(ts);
}

Rat theta_plain_product(const AmbientSpec& spec) {
  std::vector<A3Theta> ts;
  for (auto& g : spec.factors) ts.push_back(a3_theta(g));
  return max_theta(ts);
}

CheckResult check_thm1_part1(const Measured& m) {
  CheckResult r;
  r.name = "thm1_part1";
  if (m.hk_elliptic) {
    r.reason = "intersection fixes a vertex";
    return r;
  }
  if (!m.valence2_ok) {
    r.reason = "a core has a degenerate vertex of valence two";
    return r;
  }
  r.applicable = true;
  r.lhs = m.cbar_hk;
  r.rhs = {(6 * m.n_eff * m.m + 12 * (m.m - 1) * m.n_eff) * m.cbar_h *
               m.cbar_k,
           1};
  return finish(r, m);
}

CheckResult check_thm1_part2(const Measured& m) {
  CheckResult r;
  r.name = "thm1_part2";
  if (m.hk_elliptic) {
    r.reason = "intersection fixes a vertex";
    return r;
  }
  if (!m.star_stab_ok) {
    r.reason = "degenerate stabilizers do not stabilize their stars";
    return r;
  }
  r.applicable = true;
  r.lhs = m.cbar_hk;
  r.rhs = {6 * m.n_eff * m.cbar_h * m.cbar_k, 1};
  return finish(r, m);
}

CheckResult check_thm1_part2_kurosh(const Measured& m) {
  CheckResult r = check_thm1_part2(m);
  r.name = "thm1_part2_kurosh";
  if (r.applicable && !(m.h_edge_free && m.k_edge_free)) {
    r.applicable = false;
    r.ok = true;
    r.reason = "subgroups do not act freely on edges";
  }
  return r;
}

CheckResult check_thm2(const Measured& m) {
  CheckResult r;
  r.name = "thm2";
  if (m.plain) {
    r.reason = "plain setting";
    return r;
  }
  if (!(m.h_edge_free && m.k_edge_free)) {
    r.reason = "subgroups do not act freely on edges";
    return r;
  }
  if (m.hk_elliptic) {
    r.reason = "intersection fixes a vertex";
    return r;
  }
  r.applicable = true;
  r.lhs = m.cbar_hk;
  r.rhs = {2 * m.theta_quot.num * m.n_eff * m.cbar_h * m.cbar_k,
           m.theta_quot.den};
  return finish(r, m);
}

CheckResult check_thm2_absA(const Measured& m) {
  CheckResult r = check_thm2(m);
  r.name = "thm2_absA";
  if (!r.applicable) return r;
  r.rhs = {2 * m.theta_quot.num * m.a_order * m.cbar_h * m.cbar_k,
           m.theta_quot.den};
  return finish(r, m);
}

CheckResult check_thm3(const Measured& m) {
  CheckResult r;
  r.name = "thm3";
  if (m.plain || !m.free_rank0) {
    r.reason = "needs the amalgamated free_rank-0 setting";
    return r;
  }
  if (m.hk_elliptic) {
    r.reason = "intersection fixes a vertex";
    return r;
  }
  r.applicable = true;
  long long c = m.a_cap_hk ? *m.a_cap_hk : m.a_order;
  if (!m.a_cap_hk) {
    r.budget_flagged = true;
    r.reason = "|A cap HK| unverified at budget; |A| substituted";
  }
  r.lhs = m.cbar_hk;
  r.rhs = {2 * m.theta_quot.num * c * m.cbar_h * m.cbar_k, m.theta_quot.den};
  return finish(r, m);
}

CheckResult check_ivanov(const Measured& m) {
  CheckResult r;
  r.name = "ivanov";
  if (!m.plain) {
    r.reason = "amalgamated setting";
    return r;
  }
  if (m.hk_elliptic) {
    r.reason = "intersection fixes a vertex";
    return r;
  }
  r.applicable = true;
  r.lhs = m.cbar_hk;
  r.rhs = {2 * m.theta_plain.num * m.cbar_h * m.cbar_k, m.theta_plain.den};
  return finish(r, m);
}

CheckResult check_zakharov(const Measured& m) {
  CheckResult r;
  r.name = "zakharov";
  if (!(m.h_free && m.k_free)) {
    r.reason = "a subgroup meets a vertex stabilizer";
    return r;
  }
  if (m.hk_elliptic) {
    r.reason = "intersection fixes a vertex";
    return r;
  }
  r.applicable = true;
  r.lhs = m.cbar_hk;
  r.rhs = {6 * m.n_eff * m.cbar_h * m.cbar_k, 1};
  return finish(r, m);
}

CheckResult check_finite_index(const Measured& m) {
  CheckResult r;
  r.name = "finite_index";
  r.reason = m.plain && m.free_rank0
                 ? "no infinite vertex stabilizers (finite factors)"
                 : "no infinite vertex stabilizers";
  (void)m;
  return r;
}

CheckResult check_elliptic_trivial(const Measured& m) {
  CheckResult r;
  r.name = "elliptic_trivial_bound";
  if (!m.hk_elliptic) {
    r.reason = "intersection is not elliptic";
    return r;
  }
  r.applicable = true;
  r.lhs = m.cbar_hk;
  r.rhs = {m.cbar_h * m.cbar_k, 1};
  return finish(r, m);
}

std::vector<CheckResult> all_checks(const Measured& m) {
  return {check_thm1_part1(m),  check_thm1_part2(m),
          check_thm1_part2_kurosh(m), check_thm2(m),
          check_thm2_absA(m),   check_thm3(m),
          check_ivanov(m),      check_zakharov(m),
          check_finite_index(m), check_elliptic_trivial(m)};
}

// ---------------------------------------------------------------------------
// per-pair local inequalities

namespace {

// tilde degree of a core vertex: its core valence plus 2 for the attached
// loop at non-degenerate vertices
int tilde_deg_base(const HGraph& g, const CoreFlags& f, int b) {
  return flag_valence_base(g, f, b) + (flag_base_degenerate(g, f, b) ? 0 : 2);
}
int tilde_deg_factor(const HGraph& g, const CoreFlags& f, int v) {
  return flag_valence_factor(g, f, v) +
         (flag_factor_degenerate(g, f, v) ? 0 : 2);
}

}  // namespace

LocalChecks check_local_degree_inequality(const PullbackGraph& p,
                                          const IntersectionResult& ir,
                                          const Measured& m) {
  LocalChecks out;
  if (m.hk_elliptic) return out;
  CoreFlags fx = trim_flags(ir.graph);
  CoreFlags fl = trim_flags(*p.left), fr = trim_flags(*p.right);

  struct Pair {
    long long sum = 0;
    int deg_y = 0, deg_z = 0;
    bool y_deg = false, z_deg = false;
  };
  std::map<std::pair<int, int>, Pair> groups;  // key: image pair, bases < 0

  for (int b = 0; b < (int)ir.graph.bases.size(); ++b) {
    if (!fx.base[b]) continue;
    const auto& cell = p.base_cells[ir.base_cell_of[b]];
    assert(fl.base[cell.b] && fr.base[cell.b2]);
    auto& g = groups[{~cell.b, ~cell.b2}];
    g.sum += tilde_deg_base(ir.graph, fx, b) - 2;
    g.deg_y = tilde_deg_base(*p.left, fl, cell.b);
    g.deg_z = tilde_deg_base(*p.right, fr, cell.b2);
    g.y_deg = flag_base_degenerate(*p.left, fl, cell.b);
    g.z_deg = flag_base_degenerate(*p.right, fr, cell.b2);
  }
  for (int v = 0; v < (int)ir.graph.fvs.size(); ++v) {
    if (!fx.fv[v]) continue;
    const auto& cell = p.factor_cells[ir.factor_cell_of[v]];
    assert(fl.fv[cell.v] && fr.fv[cell.v2]);
    auto& g = groups[{cell.v, cell.v2}];
    g.sum += tilde_deg_factor(ir.graph, fx, v) - 2;
    g.deg_y = tilde_deg_factor(*p.left, fl, cell.v);
    g.deg_z = tilde_deg_factor(*p.right, fr, cell.v2);
    g.y_deg = flag_factor_degenerate(*p.left, fl, cell.v);
    g.z_deg = flag_factor_degenerate(*p.right, fr, cell.v2);
  }

  for (auto& [key, g] : groups) {
    long long base = (long long)(g.deg_y - 2) * (g.deg_z - 2);
    ++out.pairs;
    if (m.star_stab_ok) {
      long long rhs = 3 * m.n_eff * base;
      if (g.sum > rhs) ++out.violations;
      if (rhs > 0)
        out.max_ratio = std::max(out.max_ratio, (double)g.sum / (double)rhs);
    }
    if (m.valence2_ok) {
      ++out.ineq2_pairs;
      long long rhs = (3 * m.n_eff * m.m + 6 * m.n_eff * (m.m - 1)) * base;
      if (g.sum > rhs) ++out.ineq2_violations;
    }
    if (!g.y_deg && !g.z_deg) {
      ++out.case1_pairs;
      if (g.sum > m.n_eff * base) ++out.case1_violations;
    }
  }
  return out;
}

Lemma2Checks check_lemma2(const PullbackGraph& p, const IntersectionResult& ir) {
  Lemma2Checks out;
  CoreFlags fx = trim_flags(ir.graph);
  CoreFlags fl = trim_flags(*p.left), fr = trim_flags(*p.right);

  // stars of intersection core cells, as lists of (left edge, right edge)
  auto star_of_base = [&](int b) {
    std::vector<std::pair<int, int>> st;
    for (int e = 0; e < (int)ir.graph.fedges.size(); ++e)
      if (fx.fe[e] && ir.graph.fedges[e].b == b) {
        const auto& ec = p.edge_cells[ir.edge_cell_of[e]];
        st.push_back({ec.fe_left, ec.fe_right});
      }
    for (int e = 0; e < (int)ir.graph.xedges.size(); ++e) {
      if (!fx.xe[e]) continue;
      const auto& fc = p.free_cells[ir.free_cell_of[e]];
      if (ir.graph.xedges[e].src == b)
        st.push_back({~fc.xe_left, ~fc.xe_right});
      if (ir.graph.xedges[e].dst == b)
        st.push_back({-1000 - fc.xe_left, -1000 - fc.xe_right});
    }
    return st;
  };
  auto star_of_factor = [&](int v) {
    std::vector<std::pair<int, int>> st;
    for (int e = 0; e < (int)ir.graph.fedges.size(); ++e)
      if (fx.fe[e] && ir.graph.fedges[e].v == v) {
        const auto& ec = p.edge_cells[ir.edge_cell_of[e]];
        st.push_back({ec.fe_left, ec.fe_right});
      }
    return st;
  };

  auto run = [&](const std::vector<std::pair<int, int>>& star, int stab_left,
                 int stab_right, int star_left, int star_right,
                 bool img_left_degenerate, bool img_right_degenerate) {
    ++out.vertices;
    if ((long long)star.size() > (long long)stab_left * star_left ||
        (long long)star.size() > (long long)stab_right * star_right)
      ++out.violations;
    auto injective = [&](bool left_side) {
      std::set<int> seen;
      for (auto& [a, b] : star)
        if (!seen.insert(left_side ? a : b).second) return false;
      return true;
    };
    if (img_left_degenerate) {
      ++out.embed_checked;
      if (!injective(true)) ++out.embed_violations;
    }
    if (img_right_degenerate) {
      ++out.embed_checked;
      if (!injective(false)) ++out.embed_violations;
    }
  };

  for (int b = 0; b < (int)ir.graph.bases.size(); ++b) {
    if (!fx.base[b]) continue;
    const auto& cell = p.base_cells[ir.base_cell_of[b]];
    run(star_of_base(b), (int)p.left->bases[cell.b].p.size(),
        (int)p.right->bases[cell.b2].p.size(),
        flag_valence_base(*p.left, fl, cell.b),
        flag_valence_base(*p.right, fr, cell.b2),
        flag_base_degenerate(*p.left, fl, cell.b),
        flag_base_degenerate(*p.right, fr, cell.b2));
  }
  for (int v = 0; v < (int)ir.graph.fvs.size(); ++v) {
    if (!fx.fv[v]) continue;
    const auto& cell = p.factor_cells[ir.factor_cell_of[v]];
    run(star_of_factor(v), (int)p.left->fvs[cell.v].s.size(),
        (int)p.right->fvs[cell.v2].s.size(),
        flag_valence_factor(*p.left, fl, cell.v),
        flag_valence_factor(*p.right, fr, cell.v2),
        flag_factor_degenerate(*p.left, fl, cell.v),
        flag_factor_degenerate(*p.right, fr, cell.v2));
  }
  return out;
}

// ---------------------------------------------------------------------------
// single-instance analysis

namespace {

bool subgroup_is_free(const HGraph& g) {
  for (auto& b : g.bases)
    if (b.alive && b.p.size() > 1) return false;
  for (auto& v : g.fvs)
    if (v.alive && v.s.size() > 1) return false;
  return true;
}

bool valence2_hypothesis(const HGraph& g, const CoreFlags& f) {
  for (int b = 0; b < (int)g.bases.size(); ++b)
    if (f.base[b] && flag_base_degenerate(g, f, b) &&
        flag_valence_base(g, f, b) == 2)
      return false;
  for (int v = 0; v < (int)g.fvs.size(); ++v)
    if (f.fv[v] && flag_factor_degenerate(g, f, v) &&
        flag_valence_factor(g, f, v) == 2)
      return false;
  return true;
}

}  // namespace

VerificationRecord analyze_instance(const AmbientSpec& spec,
                                    const std::vector<NormalForm>& gens_h,
                                    const std::vector<NormalForm>& gens_k,
                                    const Budgets& budgets,
                                    const std::string& id) {
  VerificationRecord rec;
  rec.id = id;
  rec.spec_summary = spec.summary();
  for (auto& g : gens_h) rec.gens_h.push_back(format_word(spec, g));
  for (auto& g : gens_k) rec.gens_k.push_back(format_word(spec, g));

  HGraph gh = build_from_generators(spec, gens_h);
  HGraph gk = build_from_generators(spec, gens_k);
  rec.h_edge_free = is_edge_free(gh);
  rec.k_edge_free = is_edge_free(gk);
  if (spec.amalgamated() && spec.free_rank > 0 &&
      !(rec.h_edge_free && rec.k_edge_free))
    throw error(
        "unsupported instance: amalgamated with free generators requires "
        "edge-free subgroups");

  HGraph core_h = trim_core(gh), core_k = trim_core(gk);
  rec.ch = complexity(core_h);
  rec.ck = complexity(core_k);
  rec.h_elliptic = rec.ch.elliptic;
  rec.k_elliptic = rec.ck.elliptic;
  if (!rec.ch.elliptic && !lemma1_check(core_h)) rec.lemma1_ok = false;
  if (!rec.ck.elliptic && !lemma1_check(core_k)) rec.lemma1_ok = false;

  PullbackGraph p = pullback(gh, gk);
  IntersectionResult ir = intersection_core(p);
  rec.chk = complexity(ir.core);
  rec.hk_elliptic = rec.chk.elliptic;
  if (!rec.chk.elliptic && !lemma1_check(ir.core)) rec.lemma1_ok = false;

  CoreFlags fl = trim_flags(gh), fr = trim_flags(gk);
  rec.m_h = max_degenerate_stab(gh, fl);
  rec.m_k = max_degenerate_stab(gk, fr);
  {
    // n_eff over the trimmed core of the basepoint component
    CoreFlags fx = trim_flags(ir.graph);
    std::map<std::pair<int, int>, int> fibers;
    for (int e = 0; e < (int)ir.graph.fedges.size(); ++e) {
      if (!fx.fe[e]) continue;
      const auto& ec = p.edge_cells[ir.edge_cell_of[e]];
      fibers[{ec.fe_left, ~ec.fe_right}]++;
    }
    for (int e = 0; e < (int)ir.graph.xedges.size(); ++e) {
      if (!fx.xe[e]) continue;
      const auto& fc = p.free_cells[ir.free_cell_of[e]];
      fibers[{~fc.xe_left, fc.xe_right}]++;
    }
    rec.n_eff = 1;
    for (auto& [k, v] : fibers) rec.n_eff = std::max(rec.n_eff, (long long)v);
  }

  rec.theta_plain = theta_plain_product(spec);
  if (spec.amalgamated()) {
    rec.theta_quot = theta_of_quotients(spec);
    // |A cap HK| by bounded enumeration
    SubgroupOracle oh(spec, gens_h, budgets.oracle_len, budgets.node_cap);
    SubgroupOracle ok(spec, gens_k, budgets.oracle_len, budgets.node_cap);
    int count = 0;
    bool unverified = oh.truncated() || ok.truncated();
    for (int a = 0; a < spec.a_order(); ++a) {
      NormalForm t = normalize(spec, {Letter::amalgam(a)});
      if (hk_member(oh, ok, t) == OracleVerdict::Yes)
        ++count;
      else if (a != 0)
        unverified = true;
    }
    if (!unverified) rec.a_cap_hk = count;
  }

  // the quotient-reduction cross-check for the free_rank-0 amalgamated
  // setting: complexities agree with the plain machinery over G_i/A
  if (spec.amalgamated() && spec.free_rank == 0) {
    QuotientReduction red = quotient_reduction(spec);
    auto via_quotient = [&](const std::vector<NormalForm>& gens) {
      std::vector<NormalForm> q;
      for (auto& g : gens) {
        NormalForm m = map_to_quotient(spec, red, g);
        if (!m.is_identity()) q.push_back(m);
      }
      return complexity(trim_core(build_from_generators(red.plain, q)));
    };
    auto qh = via_quotient(gens_h), qk = via_quotient(gens_k);
    auto qi = via_quotient(ir.generators);
    if (qh.c != rec.ch.c || qk.c != rec.ck.c || qi.c != rec.chk.c ||
        qh.elliptic != rec.ch.elliptic || qi.elliptic != rec.chk.elliptic)
      throw error("quotient reduction disagrees with the direct machinery");
  }

  Measured m;
  m.plain = !spec.amalgamated();
  m.free_rank0 = spec.free_rank == 0;
  m.a_order = spec.a_order();
  m.hk_elliptic = rec.hk_elliptic;
  m.cbar_h = rec.ch.c_bar;
  m.cbar_k = rec.ck.c_bar;
  m.cbar_hk = rec.chk.c_bar;
  m.h_edge_free = rec.h_edge_free;
  m.k_edge_free = rec.k_edge_free;
  m.h_free = subgroup_is_free(gh);
  m.k_free = subgroup_is_free(gk);
  m.valence2_ok =
      valence2_hypothesis(gh, fl) && valence2_hypothesis(gk, fr);
  m.star_stab_ok = m.plain || spec.free_rank == 0 ||
                   (rec.h_edge_free && rec.k_edge_free);
  m.n_eff = rec.n_eff;
  m.m = std::max(rec.m_h, rec.m_k);
  m.a_cap_hk = rec.a_cap_hk;
  m.theta_quot = rec.theta_quot;
  m.theta_plain = rec.theta_plain;

  rec.checks = all_checks(m);
  rec.local = check_local_degree_inequality(p, ir, m);
  rec.lemma2 = check_lemma2(p, ir);

  rec.violations = rec.local.violations + rec.local.ineq2_violations +
                   rec.local.case1_violations + rec.lemma2.violations +
                   rec.lemma2.embed_violations + (rec.lemma1_ok ? 0 : 1);
  for (auto& c : rec.checks)
    if (c.applicable && !c.ok) ++rec.violations;
  return rec;
}

}  // namespace fpcore
