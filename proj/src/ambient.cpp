#include "fpcore/ambient.hpp"

#include <sstream>

namespace fpcore {

int AmbientSpec::a_conj(int factor, int c, int a) const {
  if (!amalgamated()) return 0;
  const FiniteGroup& gi = factors[factor];
  int image = gi.conj(c, phi(factor, a));
  auto pre = phi_inv(factor, image);
  if (!pre)
    throw error("amalgam image is not normal in factor " +
                std::to_string(factor + 1));
  return *pre;
}

std::string AmbientSpec::summary() const {
  std::ostringstream os;
  if (amalgamated()) {
    os << "*_{" << amalgam.name() << "}(";
  } else {
    os << "(";
  }
  for (size_t i = 0; i < factors.size(); ++i) {
    if (i) os << " * ";
    os << factors[i].name();
  }
  os << ")";
  if (free_rank > 0) os << " * F" << free_rank;
  return os.str();
}

void AmbientSpec::validate() const {
  if (factors.empty() && free_rank < 1)
    throw error("spec: need at least one factor or free_rank >= 1");
  if (free_rank < 0) throw error("spec: negative free_rank");
  if (setting == Setting::Plain) {
    if (amalgam.order() > 1 || !embeds.empty())
      throw error("spec: PLAIN must not carry an amalgam");
    return;
  }
  if (factors.empty()) throw error("spec: AMALGAMATED needs >= 1 factor");
  if (amalgam.order() < 1) throw error("spec: missing amalgam group");
  if (embeds.size() != factors.size())
    throw error("spec: need one embedding per factor");
  for (size_t i = 0; i < factors.size(); ++i) {
    const EmbeddingMap& e = embeds[i];
    const FiniteGroup& gi = factors[i];
    if ((int)e.images.size() != amalgam.order())
      throw error("spec: embedding " + std::to_string(i + 1) +
                  " has wrong size");
    if (e.images[0] != 0)
      throw error("spec: embedding " + std::to_string(i + 1) +
                  " does not fix the identity");
    for (int a = 0; a < amalgam.order(); ++a) {
      if (e.images[a] < 0 || e.images[a] >= gi.order())
        throw error("spec: embedding image out of range");
      for (int b = 0; b < amalgam.order(); ++b)
        if (gi.mul(e.images[a], e.images[b]) != e.images[amalgam.mul(a, b)])
          throw error("spec: embedding " + std::to_string(i + 1) +
                      " is not a homomorphism at (" + std::to_string(a) + "," +
                      std::to_string(b) + ")");
      for (int b = 0; b < a; ++b)
        if (e.images[a] == e.images[b])
          throw error("spec: embedding " + std::to_string(i + 1) +
                      " is not injective");
    }
    Subgroup img = e.image_subgroup();
    std::pair<int, int> w;
    if (!is_normal(gi, img, &w))
      throw error("spec: amalgam image is not normal in factor " +
                  std::to_string(i + 1) + " (conjugation by " +
                  std::to_string(w.first) + ")");
    if ((int)img.size() == gi.order())
      throw error("spec: factor " + std::to_string(i + 1) +
                  " equals the amalgam image");
  }
}

AmbientSpec plain_spec(std::vector<FiniteGroup> factors, int free_rank) {
  AmbientSpec s;
  s.setting = Setting::Plain;
  s.factors = std::move(factors);
  s.free_rank = free_rank;
  s.amalgam = FiniteGroup::cyclic(1);
  s.validate();
  return s;
}

AmbientSpec amalgamated_spec(std::vector<FiniteGroup> factors,
                             FiniteGroup amalgam,
                             std::vector<EmbeddingMap> embeds, int free_rank) {
  AmbientSpec s;
  s.setting = Setting::Amalgamated;
  s.factors = std::move(factors);
  s.amalgam = std::move(amalgam);
  s.embeds = std::move(embeds);
  s.free_rank = free_rank;
  s.validate();
  return s;
}

QuotientReduction quotient_reduction(const AmbientSpec& spec) {
  if (!spec.amalgamated() || spec.free_rank != 0)
    throw error("quotient_reduction: needs AMALGAMATED with free_rank 0");
  QuotientReduction red;
  std::vector<FiniteGroup> qfactors;
  for (int i = 0; i < spec.num_factors(); ++i) {
    QuotientMap q = quotient_group(spec.factors[i], spec.a_image(i));
    qfactors.push_back(q.quotient);
    red.maps.push_back(std::move(q));
  }
  red.plain = plain_spec(std::move(qfactors), 0);
  return red;
}

}  // namespace fpcore
