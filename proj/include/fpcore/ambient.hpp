#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fpcore/finite_group.hpp"

namespace fpcore {

/// Injective homomorphism A -> G_i given by per-element images.
struct EmbeddingMap {
  std::vector<int> images;  // image of each element of A, images[0] == 0

  Subgroup image_subgroup() const {
    Subgroup s(images.begin(), images.end());
    std::sort(s.begin(), s.end());
    return s;
  }
  int apply(int a) const { return images[a]; }
  /// Index in A of a target element, or nullopt if outside the image.
  std::optional<int> preimage(int g) const {
    for (size_t i = 0; i < images.size(); ++i)
      if (images[i] == g) return (int)i;
    return std::nullopt;
  }
};

enum class Setting { Plain, Amalgamated };

/// Presentation of the ambient group: a free product of finite factors and a
/// free group (PLAIN), or (*_A G_i) * F with A finite and normally embedded
/// in every factor (AMALGAMATED).
struct AmbientSpec {
  Setting setting = Setting::Plain;
  std::vector<FiniteGroup> factors;
  int free_rank = 0;
  // AMALGAMATED only:
  FiniteGroup amalgam;                 // trivial (order 1) in PLAIN
  std::vector<EmbeddingMap> embeds;    // one per factor

  int num_factors() const { return (int)factors.size(); }
  bool amalgamated() const { return setting == Setting::Amalgamated; }
  int a_order() const { return amalgamated() ? amalgam.order() : 1; }

  int phi(int factor, int a) const {
    return amalgamated() ? embeds[factor].apply(a) : 0;
  }
  std::optional<int> phi_inv(int factor, int g) const {
    if (!amalgamated()) return g == 0 ? std::optional<int>(0) : std::nullopt;
    return embeds[factor].preimage(g);
  }
  Subgroup a_image(int factor) const {
    return amalgamated() ? embeds[factor].image_subgroup() : trivial_subgroup();
  }
  bool in_a_image(int factor, int g) const {
    return phi_inv(factor, g).has_value();
  }
  /// a -> phi_i^-1( c * phi_i(a) * c^-1 ), defined for every a by normality.
  int a_conj(int factor, int c, int a) const;

  std::string summary() const;
  void validate() const;  // throws fpcore::error on any broken invariant
};

AmbientSpec plain_spec(std::vector<FiniteGroup> factors, int free_rank);
AmbientSpec amalgamated_spec(std::vector<FiniteGroup> factors,
                             FiniteGroup amalgam,
                             std::vector<EmbeddingMap> embeds, int free_rank);

/// The Theorem 3 reduction: for an AMALGAMATED spec with free_rank 0, the
/// amalgam acts trivially on the tree, so complexities live in the PLAIN
/// spec over the quotients G_i/A.
struct QuotientReduction {
  AmbientSpec plain;                // factors G_i / image(A)
  std::vector<QuotientMap> maps;    // one per factor
};
QuotientReduction quotient_reduction(const AmbientSpec& spec);

}  // namespace fpcore
