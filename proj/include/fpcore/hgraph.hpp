#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fpcore/graph.hpp"
#include "fpcore/word.hpp"

namespace fpcore {

/// Folded quotient-graph model of T_H/H for a finitely generated subgroup H
/// of the ambient group. Base vertices sit over the wedge point of the
/// graph of groups, factor vertices over the factor vertex of their index.
///
/// Every vertex carries an implicit frame (a lift to the Bass-Serre tree);
/// the stored subgroups and labels are exact in those frames:
///   base vertex b:    P_b <= A with H cap g_b A g_b^-1 = g_b P_b g_b^-1.
///   factor vertex v:  S_v <= G_i with H cap g_v G_i g_v^-1 = g_v S_v g_v^-1
///                     (at the fold fixpoint).
///   factor edge (b,v,rep):      g_v * rep = h * g_b for some h in H.
///   free edge (s,d,j,t,d2):     g_s * d * x_j = h * g_t * d2.
/// In PLAIN all A-data is trivial and this reduces to the classic Stallings
/// picture for free products.
struct HGraph {
  struct BaseV {
    Subgroup p = {0};
    bool alive = true;
  };
  struct FactorV {
    int factor = 0;
    Subgroup s = {0};
    bool alive = true;
  };
  struct FEdge {
    int b = -1, v = -1;
    int rep = 0;
    bool alive = true;
  };
  struct XEdge {
    int src = -1, dst = -1, gen = 0;
    int d = 0, d2 = 0;
    bool alive = true;
  };

  const AmbientSpec* spec = nullptr;
  std::vector<BaseV> bases;
  std::vector<FactorV> fvs;
  std::vector<FEdge> fedges;
  std::vector<XEdge> xedges;
  int basepoint = -1;  // -1 = unmarked
  int mark = 0;        // mu in A: identity = h * g_basepoint * mu
  bool folded = false;

  bool marked() const { return basepoint >= 0; }
  int num_alive_bases() const;
  int num_alive_factors() const;
  int num_alive_edges() const;  // geometric
  int valence_base(int b) const;
  int valence_factor(int v) const;
  std::optional<int> factor_edge_at(int b, int factor) const;

  bool base_degenerate(int b) const;
  bool factor_degenerate(int v) const;
};

HGraph build_from_generators(const AmbientSpec& spec,
                             const std::vector<NormalForm>& gens);

/// Applies FB / FF-merge / FF-self moves (plus the amalgamated bookkeeping:
/// base merges with A-offsets, P_b growth and propagation) to exhaustion.
/// shuffle_seed != 0 randomizes the worklist order; the result is
/// label-isomorphic for every order.
void fold(HGraph& g, uint64_t shuffle_seed = 0);

/// Structural verification of the folded invariants; returns a description
/// of the first violation, or nullopt when folded.
std::optional<std::string> folded_violation(const HGraph& g);

/// Walk state for the deterministic acceptance automaton: the word read so
/// far equals h * g_base * alpha for some h in H.
struct WalkState {
  int base = -1;
  int alpha = 0;
};
std::optional<WalkState> walk_amalgam(const HGraph& g, WalkState st, int a);
std::optional<WalkState> walk_factor(const HGraph& g, WalkState st, int factor,
                                     int elem);
std::optional<WalkState> walk_free(const HGraph& g, WalkState st, int gen,
                                   int sign);
std::optional<WalkState> walk_word(const HGraph& g, WalkState st,
                                   const NormalForm& w);

/// Membership: g folded and marked, word over the same spec.
bool accepts(const HGraph& g, const NormalForm& w);

/// Unmarked core: valence-<=1 degenerate vertices removed to exhaustion.
/// Never empty; an edgeless result models an elliptic subgroup.
HGraph trim_core(const HGraph& g);

/// Alive flags after core trimming, indexed by the original ids (basis for
/// projections between a pullback and its sides).
struct CoreFlags {
  std::vector<char> base, fv, fe, xe;
  bool all_trimmed = false;  // nothing survived: core is a lone base vertex
};
CoreFlags trim_flags(const HGraph& g);
int flag_valence_base(const HGraph& g, const CoreFlags& f, int b);
int flag_valence_factor(const HGraph& g, const CoreFlags& f, int v);
bool flag_base_degenerate(const HGraph& g, const CoreFlags& f, int b);
bool flag_factor_degenerate(const HGraph& g, const CoreFlags& f, int v);
/// Max stabilizer order over degenerate core vertices (the paper's M_B).
int max_degenerate_stab(const HGraph& g, const CoreFlags& f);

bool is_elliptic(const HGraph& core);
bool is_edge_free(const HGraph& g);

struct ComplexityReport {
  bool elliptic = false;
  int rank_r = 0;
  int n_nondegenerate = 0;
  int c = 0;
  int c_bar = 0;
  std::optional<int> kurosh_rank;  // present iff edge-free
};
ComplexityReport complexity(const HGraph& core);

/// Core with one loop attached at each non-degenerate vertex. Throws on
/// elliptic input.
Graph tilde_graph(const HGraph& core);
/// Exact integer identity C-bar = reduced_rank(tilde) = 1/2 sum(deg - 2).
bool lemma1_check(const HGraph& core);

/// Conjugation-invariant labeled skeleton for isomorphism tests. Free edges
/// are subdivided with oriented labels so direction is preserved.
Graph to_labeled_graph(const HGraph& g);

/// Spanning-tree data of a marked folded graph: a raw walk word and arrival
/// offset per base vertex, the tree entry edge per factor vertex, and tree
/// flags per edge.
struct BaseWalks {
  std::vector<std::vector<Letter>> word;
  std::vector<int> alpha;  // -1 = unreached
  std::vector<int> fv_entry;
  std::vector<char> fedge_tree, xedge_tree;
};
BaseWalks base_walks(const HGraph& g);

/// Generating set read off a marked folded graph: spanning-tree loops plus
/// conjugated vertex-subgroup generators.
std::vector<NormalForm> extract_generators(const HGraph& g);

std::string hgraph_to_dot(const HGraph& g, const std::string& name = "H");

/// Renumbers vertices/edges dropping dead entries.
void compact(HGraph& g);

}  // namespace fpcore
