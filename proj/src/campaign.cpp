#include "fpcore/campaign.hpp"

#include <json.hpp>

#include <random>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fpcore {

namespace {

uint64_t mix_seed(uint64_t seed, uint64_t index) {
  uint64_t x = seed * 0x9e3779b97f4a7c15ull + index + 1;
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

int pick(std::mt19937_64& rng, int lo, int hi) {
  if (hi <= lo) return lo;
  return lo + (int)(rng() % (uint64_t)(hi - lo + 1));
}

// deterministic central embedding of a cyclic amalgam: powers of the
// minimal central element of the right order
std::vector<int> central_embedding(const FiniteGroup& factor,
                                   const FiniteGroup& amalgam) {
  int n = amalgam.order();
  for (int z = 1; z < factor.order(); ++z) {
    if (!factor.is_central(z) || factor.elem_order(z) != n) continue;
    // amalgam must be cyclic generated by element 1 for the power map
    if (n > 1 && amalgam.elem_order(1) != n) break;
    std::vector<int> images(n);
    images[0] = 0;
    int a = 1, g = z;
    for (int k = 1; k < n; ++k) {
      images[a] = g;
      a = amalgam.mul(a, 1);
      g = factor.mul(g, z);
    }
    return images;
  }
  throw error("no central copy of " + amalgam.name() + " in " + factor.name());
}

}  // namespace

InstanceData make_instance(const InstanceProfile& profile, uint64_t index) {
  if (profile.factor_pool.empty() && profile.free_rank_min < 1)
    throw error("make_instance: empty factor pool with free_rank 0");
  for (int attempt = 0; attempt < 400; ++attempt) {
    std::mt19937_64 rng(mix_seed(profile.seed, index * 1000 + attempt));
    InstanceData d;
    d.seed = profile.seed;
    d.setting =
        profile.setting == Setting::Plain ? "plain" : "amalgamated";
    d.budget_l = profile.budgets.oracle_len;
    d.budget_r = profile.budgets.tree_radius;
    int nf = profile.factor_pool.empty()
                 ? 0
                 : pick(rng, profile.factors_min, profile.factors_max);
    for (int i = 0; i < nf; ++i)
      d.factor_desc.push_back(
          profile.factor_pool[rng() % profile.factor_pool.size()]);
    d.free_rank = pick(rng, profile.free_rank_min, profile.free_rank_max);
    if (nf == 0 && d.free_rank == 0) d.free_rank = 1;
    if (profile.setting == Setting::Amalgamated) {
      if (nf == 0) continue;
      d.amalgam_desc = profile.amalgam_desc;
      FiniteGroup a = make_group(d.amalgam_desc);
      bool ok = true;
      for (auto& f : d.factor_desc) {
        try {
          d.embeds.push_back(central_embedding(make_group(f), a));
        } catch (const error&) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
    }
    AmbientSpec spec;
    try {
      spec = d.to_spec();
    } catch (const error&) {
      continue;
    }
    auto gen_words = [&](std::vector<std::string>* out) {
      int n = pick(rng, profile.gens_min, profile.gens_max);
      for (int i = 0; i < n; ++i) {
        int len = pick(rng, profile.syllables_min, profile.syllables_max);
        NormalForm w = random_word(spec, len, rng());
        out->push_back(format_word(spec, w));
      }
    };
    gen_words(&d.gens_h);
    gen_words(&d.gens_k);
    d.has_h = d.has_k = true;

    bool need_edge_free =
        profile.require_edge_free ||
        (profile.setting == Setting::Amalgamated && d.free_rank > 0);
    if (need_edge_free) {
      auto gh = build_from_generators(spec, d.words_h(spec));
      auto gk = build_from_generators(spec, d.words_k(spec));
      if (!is_edge_free(gh) || !is_edge_free(gk)) continue;
    }
    return d;
  }
  throw error("make_instance: could not generate an admissible instance");
}

std::string record_to_json(const VerificationRecord& rec) {
  nlohmann::ordered_json j;
  j["id"] = rec.id;
  j["spec"] = rec.spec_summary;
  j["gens_H"] = rec.gens_h;
  j["gens_K"] = rec.gens_k;
  j["elliptic"] = {{"H", rec.h_elliptic},
                   {"K", rec.k_elliptic},
                   {"HK", rec.hk_elliptic}};
  j["edge_free"] = {{"H", rec.h_edge_free}, {"K", rec.k_edge_free}};
  auto rep = [](const ComplexityReport& r) {
    nlohmann::ordered_json o;
    o["elliptic"] = r.elliptic;
    o["rank"] = r.rank_r;
    o["nondegenerate"] = r.n_nondegenerate;
    o["C"] = r.c;
    o["Cbar"] = r.c_bar;
    if (r.kurosh_rank)
      o["kurosh"] = *r.kurosh_rank;
    else
      o["kurosh"] = nullptr;
    return o;
  };
  j["measured"]["H"] = rep(rec.ch);
  j["measured"]["K"] = rep(rec.ck);
  j["measured"]["HK"] = rep(rec.chk);
  j["measured"]["N_eff"] = rec.n_eff;
  j["measured"]["M_H"] = rec.m_h;
  j["measured"]["M_K"] = rec.m_k;
  if (rec.a_cap_hk)
    j["measured"]["A_cap_HK"] = *rec.a_cap_hk;
  else
    j["measured"]["A_cap_HK"] = nullptr;
  j["measured"]["theta_quot"] = {rec.theta_quot.num, rec.theta_quot.den};
  j["measured"]["theta_plain"] = {rec.theta_plain.num, rec.theta_plain.den};
  j["checks"] = nlohmann::ordered_json::array();
  for (auto& c : rec.checks) {
    nlohmann::ordered_json o;
    o["name"] = c.name;
    o["applicable"] = c.applicable;
    if (!c.applicable || c.budget_flagged) o["reason"] = c.reason;
    if (c.applicable) {
      o["lhs"] = c.lhs;
      o["rhs_num"] = c.rhs.num;
      o["rhs_den"] = c.rhs.den;
      o["ok"] = c.ok;
      o["ratio"] = c.ratio;
      o["budget_flagged"] = c.budget_flagged;
    }
    j["checks"].push_back(o);
  }
  j["local"] = {{"pairs", rec.local.pairs},
                {"violations", rec.local.violations},
                {"case1_pairs", rec.local.case1_pairs},
                {"case1_violations", rec.local.case1_violations},
                {"ineq2_pairs", rec.local.ineq2_pairs},
                {"ineq2_violations", rec.local.ineq2_violations},
                {"max_ratio", rec.local.max_ratio}};
  j["lemma2"] = {{"vertices", rec.lemma2.vertices},
                 {"violations", rec.lemma2.violations},
                 {"embed_checked", rec.lemma2.embed_checked},
                 {"embed_violations", rec.lemma2.embed_violations}};
  j["lemma1_ok"] = rec.lemma1_ok;
  j["violations"] = rec.violations;
  if (!rec.note.empty()) j["note"] = rec.note;
  return j.dump();
}

CampaignResult run_campaign(const InstanceProfile& profile, int n,
                            bool parallel) {
  std::vector<VerificationRecord> records(n);
  std::vector<InstanceData> instances(n);
  std::vector<std::string> errors(n);

  auto body = [&](int i) {
    try {
      InstanceData d = make_instance(profile, (uint64_t)i);
      AmbientSpec spec = d.to_spec();
      records[i] =
          analyze_instance(spec, d.words_h(spec), d.words_k(spec),
                           profile.budgets,
                           std::to_string(profile.seed) + "-" +
                               std::to_string(i));
      instances[i] = std::move(d);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  };
#ifdef _OPENMP
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) body(i);
  } else {
    for (int i = 0; i < n; ++i) body(i);
  }
#else
  (void)parallel;
  for (int i = 0; i < n; ++i) body(i);
#endif
  for (int i = 0; i < n; ++i)
    if (!errors[i].empty())
      throw error("campaign instance " + std::to_string(i) + ": " + errors[i]);

  CampaignResult out;
  out.summary.n = n;
  for (int i = 0; i < n; ++i) {
    const auto& r = records[i];
    out.jsonl.push_back(record_to_json(r));
    out.summary.total_violations += r.violations;
    if (r.hk_elliptic) out.summary.elliptic_intersections++;
    out.summary.local_pairs += r.local.pairs;
    out.summary.local_violations +=
        r.local.violations + r.local.ineq2_violations +
        r.local.case1_violations;
    out.summary.lemma2_vertices += r.lemma2.vertices;
    out.summary.lemma2_violations +=
        r.lemma2.violations + r.lemma2.embed_violations;
    if (!r.lemma1_ok) out.summary.lemma1_failures++;
    for (auto& c : r.checks) {
      auto& agg = out.summary.per_check[c.name];
      if (c.applicable) {
        agg.applicable++;
        if (!c.ok) agg.violations++;
        if (c.budget_flagged) agg.budget_flagged++;
        agg.max_ratio = std::max(agg.max_ratio, c.ratio);
      }
    }
    if (r.violations > 0) {
      if (out.summary.first_violation_id.empty())
        out.summary.first_violation_id = r.id;
      out.violating_instances.push_back(instances[i]);
    }
  }
  return out;
}

InstanceProfile parse_profile(const std::string& text) {
  InstanceProfile p;
  std::istringstream is(text);
  std::string line, section;
  int ln = 0;
  auto trim = [](const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return std::string();
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  };
  while (std::getline(is, line)) {
    ++ln;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      section = t.substr(1, t.size() - 2);
      if (section != "campaign")
        throw error("profile line " + std::to_string(ln) +
                    ": unknown section");
      continue;
    }
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw error("profile line " + std::to_string(ln) + ": expected key=value");
    std::string key = trim(t.substr(0, eq)), val = trim(t.substr(eq + 1));
    if (key == "setting") {
      if (val == "plain")
        p.setting = Setting::Plain;
      else if (val == "amalgamated")
        p.setting = Setting::Amalgamated;
      else
        throw error("profile line " + std::to_string(ln) + ": bad setting");
    } else if (key == "factor_pool") {
      std::istringstream vs(val);
      std::string item;
      while (std::getline(vs, item, ',')) {
        item = trim(item);
        if (!item.empty()) p.factor_pool.push_back(item);
      }
    } else if (key == "factors_min") {
      p.factors_min = std::stoi(val);
    } else if (key == "factors_max") {
      p.factors_max = std::stoi(val);
    } else if (key == "free_rank_min") {
      p.free_rank_min = std::stoi(val);
    } else if (key == "free_rank_max") {
      p.free_rank_max = std::stoi(val);
    } else if (key == "gens_min") {
      p.gens_min = std::stoi(val);
    } else if (key == "gens_max") {
      p.gens_max = std::stoi(val);
    } else if (key == "syllables_min") {
      p.syllables_min = std::stoi(val);
    } else if (key == "syllables_max") {
      p.syllables_max = std::stoi(val);
    } else if (key == "amalgam") {
      p.amalgam_desc = val;
    } else if (key == "require_edge_free") {
      p.require_edge_free = val == "true" || val == "1";
    } else if (key == "seed") {
      p.seed = std::stoull(val);
    } else if (key == "budget_L") {
      p.budgets.oracle_len = std::stoi(val);
    } else if (key == "budget_R") {
      p.budgets.tree_radius = std::stoi(val);
    } else {
      throw error("profile line " + std::to_string(ln) + ": unknown key '" +
                  key + "'");
    }
  }
  return p;
}

std::string summary_to_csv(const CampaignSummary& s) {
  std::ostringstream os;
  os << "check,applicable,violations,budget_flagged,max_ratio\n";
  for (auto& [name, agg] : s.per_check)
    os << name << "," << agg.applicable << "," << agg.violations << ","
       << agg.budget_flagged << "," << agg.max_ratio << "\n";
  os << "local_pairs," << s.local_pairs << "," << s.local_violations
     << ",0,0\n";
  os << "lemma2_vertices," << s.lemma2_vertices << ","
     << s.lemma2_violations << ",0,0\n";
  os << "lemma1," << (s.n - s.lemma1_failures) << "," << s.lemma1_failures
     << ",0,0\n";
  return os.str();
}

}  // namespace fpcore
