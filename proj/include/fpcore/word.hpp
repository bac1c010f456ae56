#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fpcore/ambient.hpp"

namespace fpcore {

/// One letter of a word. Canonical forms contain only Factor and Free
/// letters; Amalgam letters appear in raw input and are absorbed by
/// normalize().
struct Letter {
  enum class Kind : uint8_t { Factor, Free, Amalgam };
  Kind kind = Kind::Factor;
  int idx = 0;   // factor index (Factor) or generator index (Free)
  int elem = 0;  // Factor: element of G_idx; Amalgam: element of A
  int sign = 0;  // Free: +1 / -1
  int dec = 0;   // Free: trailing amalgam element (always 0 in PLAIN)

  static Letter factor(int i, int g) { return {Kind::Factor, i, g, 0, 0}; }
  static Letter free_gen(int j, int sign, int dec = 0) {
    return {Kind::Free, j, 0, sign, dec};
  }
  static Letter amalgam(int a) { return {Kind::Amalgam, 0, a, 0, 0}; }
  bool operator==(const Letter&) const = default;
};

/// Canonical form of an ambient-group element:
///   head * s_1 * ... * s_n
/// where head lies in A, each Factor letter carries the minimal-index
/// representative of its right image(A)-coset (never an image(A) element),
/// no two consecutive Factor letters share a factor, each Free letter
/// carries a trailing A-decoration, and a Free letter with trivial
/// decoration is never followed by its inverse. In PLAIN every A-part is
/// trivial and letters reduce to the classic free-product normal form.
struct NormalForm {
  int head = 0;
  std::vector<Letter> letters;

  bool is_identity() const { return head == 0 && letters.empty(); }
  bool operator==(const NormalForm&) const = default;
};

NormalForm normalize(const AmbientSpec& spec, const std::vector<Letter>& raw);
NormalForm multiply(const AmbientSpec& spec, const NormalForm& u,
                    const NormalForm& v);
NormalForm invert(const AmbientSpec& spec, const NormalForm& u);
int syllable_length(const NormalForm& u);

/// Deterministic nontrivial pseudo-random word with at most max_syllables
/// letters. Identical (spec, max_syllables, seed) always yields the same
/// word.
NormalForm random_word(const AmbientSpec& spec, int max_syllables,
                       uint64_t seed);

/// Token grammar: "f<i>:<k>" = element k of factor i (1-based factor,
/// nonidentity element id), "x<j>"/"X<j>" = free generator / its inverse,
/// "a:<k>" = amalgam element k (AMALGAMATED only). Tokens are
/// whitespace-separated.
NormalForm parse_word(const AmbientSpec& spec, const std::string& text);
std::string format_word(const AmbientSpec& spec, const NormalForm& u);

/// Stable integer encoding, usable as a hash/equality key.
std::vector<int64_t> encode(const NormalForm& u);

struct NormalFormHash {
  size_t operator()(const NormalForm& u) const {
    uint64_t h = 1469598103934665603ull;
    auto mix = [&h](uint64_t x) {
      h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    };
    mix((uint64_t)u.head);
    for (const Letter& l : u.letters) {
      mix((uint64_t)l.kind);
      mix((uint64_t)l.idx);
      mix((uint64_t)l.elem);
      mix((uint64_t)(l.sign + 1));
      mix((uint64_t)l.dec);
    }
    return (size_t)h;
  }
};

/// Maps a word of an AMALGAMATED free_rank-0 spec to the PLAIN quotient
/// spec of quotient_reduction().
NormalForm map_to_quotient(const AmbientSpec& amalg,
                           const QuotientReduction& red, const NormalForm& u);

}  // namespace fpcore
