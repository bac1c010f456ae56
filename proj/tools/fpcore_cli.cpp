// Command-line front end: single computations, comparisons, campaigns and
// DOT exports over the instance-file format.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "fpcore/campaign.hpp"
#include "fpcore/checks.hpp"
#include "fpcore/instance_file.hpp"
#include "fpcore/oracle.hpp"
#include "fpcore/pullback.hpp"

using namespace fpcore;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw error("cannot write '" + out_path + "'");
  out << text;
}

std::string render_complexity(const ComplexityReport& r) {
  std::ostringstream os;
  if (r.elliptic) {
    os << "elliptic, C = 1";
  } else {
    os << "C = " << r.c << " (rank " << r.rank_r << " + " << r.n_nondegenerate
       << " nondegenerate), Cbar = " << r.c_bar;
  }
  if (r.kurosh_rank) os << ", Kurosh rank = " << *r.kurosh_rank;
  return os.str();
}

nlohmann::ordered_json complexity_json(const ComplexityReport& r) {
  nlohmann::ordered_json j;
  j["elliptic"] = r.elliptic;
  j["rank"] = r.rank_r;
  j["nondegenerate"] = r.n_nondegenerate;
  j["C"] = r.c;
  j["Cbar"] = r.c_bar;
  if (r.kurosh_rank)
    j["kurosh"] = *r.kurosh_rank;
  else
    j["kurosh"] = nullptr;
  return j;
}

std::string render_record(const VerificationRecord& rec) {
  std::ostringstream os;
  os << "instance " << rec.id << "  " << rec.spec_summary << "\n";
  os << "  H: " << render_complexity(rec.ch)
     << (rec.h_edge_free ? " [edge-free]" : "") << "\n";
  os << "  K: " << render_complexity(rec.ck)
     << (rec.k_edge_free ? " [edge-free]" : "") << "\n";
  os << "  H cap K: " << render_complexity(rec.chk) << "\n";
  os << "  N_eff = " << rec.n_eff << ", M_H = " << rec.m_h
     << ", M_K = " << rec.m_k;
  if (rec.a_cap_hk)
    os << ", |A cap HK| = " << *rec.a_cap_hk;
  os << "\n";
  for (auto& c : rec.checks) {
    os << "  " << c.name << ": ";
    if (!c.applicable) {
      os << "n/a (" << c.reason << ")\n";
      continue;
    }
    os << c.lhs << " <= " << c.rhs.num;
    if (c.rhs.den != 1) os << "/" << c.rhs.den;
    os << (c.ok ? "  ok" : "  VIOLATED");
    if (c.budget_flagged) os << "  [budget]";
    os << "\n";
  }
  os << "  local pairs " << rec.local.pairs << " (violations "
     << rec.local.violations << "), lemma2 vertices " << rec.lemma2.vertices
     << " (violations " << rec.lemma2.violations << "), lemma1 "
     << (rec.lemma1_ok ? "ok" : "FAILED") << "\n";
  return os.str();
}

struct LoadedInstance {
  InstanceData data;
  AmbientSpec spec;
  std::vector<NormalForm> gens_h, gens_k;
};

LoadedInstance load(const std::string& path, bool need_k) {
  LoadedInstance li;
  li.data = parse_instance_file(slurp(path));
  li.spec = li.data.to_spec();
  li.gens_h = li.data.words_h(li.spec);
  li.gens_k = li.data.words_k(li.spec);
  if (li.gens_h.empty()) throw error("instance has no [subgroup.H] generators");
  if (need_k && li.gens_k.empty())
    throw error("instance has no [subgroup.K] generators");
  return li;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"core quotient graphs, complexities and intersections of "
               "finitely generated subgroups of free products"};
  app.require_subcommand(1);

  std::string file, word, out_path, target = "H", theorem;
  std::string profile_path;
  bool json = false, parallel = false;
  int n = 100;
  int budget_l = 8, budget_r = 3;
  uint64_t seed = 0;
  bool seed_set = false;

  auto add_common = [&](CLI::App* cmd, bool with_json = true) {
    cmd->add_option("--budget-L", budget_l, "oracle syllable budget");
    cmd->add_option("--budget-R", budget_r, "tree-ball radius budget");
    cmd->add_option("--out", out_path, "output path (default stdout)");
    if (with_json) cmd->add_flag("--json", json, "machine-readable output");
  };

  auto* rank = app.add_subcommand("rank", "complexity of H");
  rank->add_option("file", file)->required();
  add_common(rank);

  auto* member = app.add_subcommand("member", "membership of a word in H");
  member->add_option("file", file)->required();
  member->add_option("word", word, "word text, e.g. 'f1:1 x2'")->required();
  add_common(member);

  auto* intersect =
      app.add_subcommand("intersect", "intersection record for H and K");
  intersect->add_option("file", file)->required();
  add_common(intersect);

  auto* check = app.add_subcommand("check", "evaluate one named inequality");
  check->add_option("theorem", theorem,
                    "thm1_part1|thm1_part2|thm1_part2_kurosh|thm2|thm2_absA|"
                    "thm3|ivanov|zakharov|finite_index|elliptic_trivial_bound")
      ->required();
  check->add_option("file", file)->required();
  add_common(check);

  auto* campaign = app.add_subcommand("campaign", "randomized instance runs");
  campaign->add_option("profile", profile_path)->required();
  campaign->add_option("-n,--count", n, "number of instances");
  campaign->add_option("--seed", seed, "override profile seed")
      ->each([&](const std::string&) { seed_set = true; });
  campaign->add_flag("--parallel", parallel, "run instances with OpenMP");
  campaign->add_option("--out", out_path, "output prefix (default campaign)");

  auto* oracle_cmp = app.add_subcommand(
      "oracle-compare", "accepts() vs brute-force membership on a ball");
  oracle_cmp->add_option("file", file)->required();
  add_common(oracle_cmp);

  auto* export_dot = app.add_subcommand("export-dot", "DOT export");
  export_dot->add_option("file", file)->required();
  export_dot
      ->add_option("--target", target, "H | K | pullback | tilde | psi")
      ->required();
  add_common(export_dot, false);

  CLI11_PARSE(app, argc, argv);

  try {
    Budgets budgets;
    budgets.oracle_len = budget_l;
    budgets.tree_radius = budget_r;

    if (rank->parsed()) {
      auto li = load(file, false);
      auto core = trim_core(build_from_generators(li.spec, li.gens_h));
      auto rep = complexity(core);
      if (json) {
        nlohmann::ordered_json j;
        j["spec"] = li.spec.summary();
        j["H"] = complexity_json(rep);
        emit(j.dump() + "\n", out_path);
      } else {
        emit(li.spec.summary() + "\n  H: " + render_complexity(rep) + "\n",
             out_path);
      }
      return 0;
    }

    if (member->parsed()) {
      auto li = load(file, false);
      auto g = build_from_generators(li.spec, li.gens_h);
      bool yes = accepts(g, parse_word(li.spec, word));
      if (json) {
        nlohmann::ordered_json j;
        j["word"] = word;
        j["member"] = yes;
        emit(j.dump() + "\n", out_path);
      } else {
        emit(std::string(yes ? "yes" : "no") + "\n", out_path);
      }
      return 0;
    }

    if (intersect->parsed() || check->parsed()) {
      auto li = load(file, true);
      auto rec =
          analyze_instance(li.spec, li.gens_h, li.gens_k, budgets, file);
      if (check->parsed()) {
        const CheckResult* found = nullptr;
        for (auto& c : rec.checks)
          if (c.name == theorem) found = &c;
        if (!found) throw error("unknown theorem id '" + theorem + "'");
        if (json) {
          nlohmann::ordered_json j;
          j["name"] = found->name;
          j["applicable"] = found->applicable;
          j["reason"] = found->reason;
          j["lhs"] = found->lhs;
          j["rhs_num"] = found->rhs.num;
          j["rhs_den"] = found->rhs.den;
          j["ok"] = found->ok;
          emit(j.dump() + "\n", out_path);
        } else {
          std::ostringstream os;
          os << found->name << ": ";
          if (!found->applicable)
            os << "n/a (" << found->reason << ")";
          else
            os << found->lhs << " <= " << found->rhs.num
               << (found->rhs.den != 1 ? "/" + std::to_string(found->rhs.den)
                                       : "")
               << (found->ok ? "  ok" : "  VIOLATED");
          os << "\n";
          emit(os.str(), out_path);
        }
        return found->applicable && !found->ok ? 3 : 0;
      }
      emit(json ? record_to_json(rec) + "\n" : render_record(rec), out_path);
      return rec.violations > 0 ? 3 : 0;
    }

    if (campaign->parsed()) {
      InstanceProfile profile = parse_profile(slurp(profile_path));
      if (seed_set) profile.seed = seed;
      profile.budgets = budgets;
      auto result = run_campaign(profile, n, parallel);
      std::string prefix = out_path.empty() ? "campaign" : out_path;
      {
        std::ofstream jl(prefix + ".jsonl");
        for (auto& line : result.jsonl) jl << line << "\n";
        std::ofstream csv(prefix + ".csv");
        csv << summary_to_csv(result.summary);
      }
      std::cout << "instances: " << result.summary.n
                << ", violations: " << result.summary.total_violations
                << ", elliptic intersections: "
                << result.summary.elliptic_intersections << "\n";
      for (auto& [name, agg] : result.summary.per_check)
        std::cout << "  " << name << ": applicable " << agg.applicable
                  << ", violations " << agg.violations << ", max ratio "
                  << agg.max_ratio << "\n";
      if (result.summary.total_violations > 0) {
        int i = 0;
        for (auto& inst : result.violating_instances) {
          std::ofstream rep(prefix + "_violation_" + std::to_string(i++) +
                            ".ini");
          rep << format_instance_file(inst);
        }
        std::cout << "VIOLATIONS FOUND; reproducers written\n";
        return 3;
      }
      return 0;
    }

    if (oracle_cmp->parsed()) {
      auto li = load(file, false);
      auto g = build_from_generators(li.spec, li.gens_h);
      SubgroupOracle oracle(li.spec, li.gens_h, budget_l);
      std::vector<NormalForm> ball;
      bool complete = enumerate_ball(
          li.spec, alphabet_of(li.spec, li.gens_h), budget_l, 500000, &ball);
      long long both_yes = 0, both_no = 0, accept_only = 0, oracle_only = 0;
      for (auto& u : ball) {
        bool acc = accepts(g, u);
        bool yes = oracle.member(u) == OracleVerdict::Yes;
        if (acc && yes) ++both_yes;
        if (!acc && !yes) ++both_no;
        if (acc && !yes) ++accept_only;
        if (!acc && yes) ++oracle_only;
      }
      std::ostringstream os;
      os << "ball words: " << ball.size() << (complete ? "" : " (truncated)")
         << ", oracle ball truncated: " << (oracle.truncated() ? "yes" : "no")
         << "\n";
      os << "  both yes: " << both_yes << "\n  both no: " << both_no
         << "\n  accepts only: " << accept_only
         << "\n  oracle only: " << oracle_only << "\n";
      emit(os.str(), out_path);
      bool disagreement =
          oracle_only > 0 || (accept_only > 0 && !oracle.truncated());
      return disagreement ? 4 : 0;
    }

    if (export_dot->parsed()) {
      auto li = load(file, target == "K" || target == "pullback");
      if (target == "psi") {
        emit(build_psi(li.spec).psi.to_dot("psi"), out_path);
      } else if (target == "H" || target == "K") {
        auto g = build_from_generators(
            li.spec, target == "H" ? li.gens_h : li.gens_k);
        emit(hgraph_to_dot(g, target), out_path);
      } else if (target == "tilde") {
        auto core = trim_core(build_from_generators(li.spec, li.gens_h));
        emit(tilde_graph(core).to_dot("tilde"), out_path);
      } else if (target == "pullback") {
        auto gh = build_from_generators(li.spec, li.gens_h);
        auto gk = build_from_generators(li.spec, li.gens_k);
        emit(pullback_to_dot(pullback(gh, gk)), out_path);
      } else {
        throw error("unknown export target '" + target + "'");
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
