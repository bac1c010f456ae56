#pragma once

#include <map>
#include <string>
#include <vector>

#include "fpcore/word.hpp"

namespace fpcore {

/// Parsed form of the plain-text instance format:
///
///   [group]
///   setting = plain | amalgamated
///   factor = cyclic:3            # repeated, ordered; also sym:n,
///   factor = table:q8            # dihedral:n, table:<name>
///   table.q8 = 0,1 / 1,0         # rows of an explicit table
///   free_rank = 1
///   amalgam = cyclic:2           # amalgamated only
///   embed = 0,2                  # images of A's elements, one per factor
///   [subgroup.H]
///   gen = f1:1 x1 f2:2
///   [subgroup.K]
///   gen = ...
///   [budgets]                    # optional
///   L = 8
///   R = 3
///   [seed]                       # optional
///   seed = 42
///
/// Unknown keys and sections are rejected with line numbers.
struct InstanceData {
  std::string setting = "plain";
  std::vector<std::string> factor_desc;
  std::map<std::string, std::vector<std::vector<int>>> tables;
  std::string amalgam_desc;
  std::vector<std::vector<int>> embeds;
  int free_rank = 0;
  std::vector<std::string> gens_h, gens_k;
  bool has_h = false, has_k = false;
  int budget_l = 8, budget_r = 3;
  uint64_t seed = 0;

  AmbientSpec to_spec() const;
  std::vector<NormalForm> words_h(const AmbientSpec& spec) const;
  std::vector<NormalForm> words_k(const AmbientSpec& spec) const;
};

InstanceData parse_instance_file(const std::string& text);
std::string format_instance_file(const InstanceData& d);

}  // namespace fpcore
