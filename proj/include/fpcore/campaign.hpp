#pragma once

#include <map>
#include <string>
#include <vector>

#include "fpcore/checks.hpp"
#include "fpcore/instance_file.hpp"

namespace fpcore {

/// Randomized instance generation: reproducible from (seed, index).
struct InstanceProfile {
  Setting setting = Setting::Plain;
  std::vector<std::string> factor_pool;  // constructor descriptors
  int factors_min = 1, factors_max = 3;
  int free_rank_min = 0, free_rank_max = 2;
  int gens_min = 1, gens_max = 4;
  int syllables_min = 1, syllables_max = 6;
  std::string amalgam_desc;  // amalgamated settings only
  bool require_edge_free = false;
  uint64_t seed = 1;
  Budgets budgets;
};

InstanceData make_instance(const InstanceProfile& profile, uint64_t index);

struct CheckAgg {
  int applicable = 0;
  int violations = 0;
  int budget_flagged = 0;
  double max_ratio = 0.0;
};

struct CampaignSummary {
  int n = 0;
  int total_violations = 0;
  int elliptic_intersections = 0;
  long long local_pairs = 0;
  int local_violations = 0;
  long long lemma2_vertices = 0;
  int lemma2_violations = 0;
  int lemma1_failures = 0;
  std::map<std::string, CheckAgg> per_check;
  std::string first_violation_id;
};

struct CampaignResult {
  CampaignSummary summary;
  std::vector<std::string> jsonl;  // one line per instance, in index order
  std::vector<InstanceData> violating_instances;
};

/// Runs n instances (OpenMP across instances when parallel, aggregation in
/// index order either way, so output is bytewise independent of threading).
CampaignResult run_campaign(const InstanceProfile& profile, int n,
                            bool parallel);

std::string record_to_json(const VerificationRecord& rec);
std::string summary_to_csv(const CampaignSummary& s);

/// Profile text format: a single [campaign] section with keys setting,
/// factor_pool (comma-separated descriptors), factors_min/max,
/// free_rank_min/max, gens_min/max, syllables_min/max, amalgam,
/// require_edge_free, seed. Unknown keys rejected.
InstanceProfile parse_profile(const std::string& text);

}  // namespace fpcore
