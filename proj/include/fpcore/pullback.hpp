#pragma once

#include <vector>

#include "fpcore/hgraph.hpp"
#include "fpcore/oracle.hpp"

namespace fpcore {

/// Fiber product of two marked folded H-graphs over the same spec. Cells
/// carry the relative-position data that distinguishes tree objects with the
/// same pair of images: a double coset of A between base vertices, a double
/// coset of G_i between factor vertices. The basepoint component is the
/// quotient graph of the whole tree by H cap K restricted to the region both
/// marked graphs cover; its trimmed core models T_{HcapK}/(H cap K).
struct PullbackGraph {
  const HGraph* left = nullptr;
  const HGraph* right = nullptr;
  const AmbientSpec* spec = nullptr;

  struct BaseCell {
    int b = -1, b2 = -1;
    int delta = 0;  // canonical rep of its P_b \ A / P'_b2 class
    Subgroup p{0};  // delta^-1 P_b delta  cap  P'_b2
    int component = -1;
  };
  struct FactorCell {
    int v = -1, v2 = -1;
    int d = 0;           // canonical rep of its S_v \ G_i / S'_v2 class
    int u0 = 0, u0p = 0; // frame anchors fixed at first discovery
    Subgroup s{0};       // u0^-1 S_v u0  cap  u0p^-1 S'_v2 u0p
    int component = -1;
  };
  struct EdgeCell {
    int base_cell = -1, factor_cell = -1;
    int fe_left = -1, fe_right = -1;
    int rep = 0;  // label of the induced edge in the intersection graph
  };
  struct FreeCell {
    int src_cell = -1, dst_cell = -1;
    int xe_left = -1, xe_right = -1;
    int gen = 0;
    int d = 0, d2 = 0;
  };

  std::vector<BaseCell> base_cells;
  std::vector<FactorCell> factor_cells;
  std::vector<EdgeCell> edge_cells;
  std::vector<FreeCell> free_cells;
  int basepoint_cell = -1;
  int mark = 0;  // mark of the induced intersection graph
  int num_components = 0;
};

PullbackGraph pullback(const HGraph& left, const HGraph& right);

/// The basepoint component as a marked folded HGraph, its trimmed core, the
/// extracted generating set, and cell ids per vertex of `graph`.
struct IntersectionResult {
  HGraph graph;  // marked, folded
  HGraph core;   // trimmed, unmarked
  std::vector<NormalForm> generators;
  std::vector<int> base_cell_of;    // graph base vertex -> pullback cell id
  std::vector<int> factor_cell_of;  // graph factor vertex -> cell id
  std::vector<int> edge_cell_of;    // graph factor edge -> edge cell id
  std::vector<int> free_cell_of;    // graph free edge -> free cell id
};
IntersectionResult intersection_core(const PullbackGraph& p);

/// Bass fiber verification and the derived quantities. Fibers are counted
/// over image pairs of core cells of both sides, where the basepoint
/// component provably contains every tree-realized cell.
struct FiberReport {
  struct Cell {
    char kind = 'v';  // 'b' base pair, 'v' factor-vertex pair, 'e' edge pair
    int image_left = -1, image_right = -1;
    int count = 0;
    int oracle_count = -1;
    bool verified = false;
    bool match = true;
  };
  std::vector<Cell> cells;
  int n_eff = 1;  // max fiber over edge cells of the trimmed core
  int m_left = 1, m_right = 1;
  int unverified = 0;
  int mismatches = 0;
};
FiberReport fiber_check(const PullbackGraph& p, const SubgroupOracle& h,
                        const SubgroupOracle& k);

/// N_eff alone (no oracle): max fiber size over edge cells of the trimmed
/// basepoint component, grouped by image pair.
int n_eff(const PullbackGraph& p);

/// DOT rendering with per-image-pair fiber counts on the edges of the
/// basepoint component.
std::string pullback_to_dot(const PullbackGraph& p);

}  // namespace fpcore
