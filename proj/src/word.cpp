#include "fpcore/word.hpp"

#include <cassert>
#include <random>
#include <sstream>

namespace fpcore {

namespace {

// Pushes an amalgam element leftward from the end of nf: through factor
// letters by conjugation (their coset representatives are stable under
// right multiplication by image(A)), into the decoration of the first free
// letter met, or into the head.
void append_amalgam(const AmbientSpec& spec, NormalForm& nf, int a) {
  int cur = a;
  for (int idx = (int)nf.letters.size() - 1; idx >= 0; --idx) {
    if (cur == 0) return;
    Letter& l = nf.letters[idx];
    if (l.kind == Letter::Kind::Free) {
      l.dec = spec.amalgam.mul(l.dec, cur);
      return;
    }
    cur = spec.a_conj(l.idx, l.elem, cur);
  }
  if (cur != 0) nf.head = spec.amalgam.mul(nf.head, cur);
}

void append_factor(const AmbientSpec& spec, NormalForm& nf, int i, int g) {
  const FiniteGroup& gi = spec.factors[i];
  int m = g;
  if (!nf.letters.empty() && nf.letters.back().kind == Letter::Kind::Factor &&
      nf.letters.back().idx == i) {
    m = gi.mul(nf.letters.back().elem, g);
    nf.letters.pop_back();
  }
  if (auto a = spec.phi_inv(i, m)) {
    append_amalgam(spec, nf, *a);
    return;
  }
  int t = coset_min(gi, spec.a_image(i), m, trivial_subgroup());
  auto a = spec.phi_inv(i, gi.mul(m, gi.inv(t)));
  assert(a.has_value());
  append_amalgam(spec, nf, *a);
  nf.letters.push_back(Letter::factor(i, t));
}

void append_free(const AmbientSpec& spec, NormalForm& nf, int j, int sign) {
  (void)spec;
  if (!nf.letters.empty()) {
    const Letter& l = nf.letters.back();
    if (l.kind == Letter::Kind::Free && l.idx == j && l.sign == -sign &&
        l.dec == 0) {
      nf.letters.pop_back();
      return;
    }
  }
  nf.letters.push_back(Letter::free_gen(j, sign));
}

void check_letter(const AmbientSpec& spec, const Letter& l) {
  switch (l.kind) {
    case Letter::Kind::Factor:
      if (l.idx < 0 || l.idx >= spec.num_factors())
        throw error("word: factor index out of range");
      if (l.elem < 0 || l.elem >= spec.factors[l.idx].order())
        throw error("word: factor element out of range");
      break;
    case Letter::Kind::Free:
      if (l.idx < 0 || l.idx >= spec.free_rank)
        throw error("word: free generator index out of range");
      if (l.sign != 1 && l.sign != -1) throw error("word: bad sign");
      if (l.dec < 0 || l.dec >= spec.a_order())
        throw error("word: decoration out of range");
      break;
    case Letter::Kind::Amalgam:
      if (l.elem < 0 || l.elem >= spec.a_order())
        throw error("word: amalgam element out of range");
      break;
  }
}

}  // namespace

NormalForm normalize(const AmbientSpec& spec, const std::vector<Letter>& raw) {
  NormalForm nf;
  for (const Letter& l : raw) {
    check_letter(spec, l);
    switch (l.kind) {
      case Letter::Kind::Factor:
        append_factor(spec, nf, l.idx, l.elem);
        break;
      case Letter::Kind::Free:
        append_free(spec, nf, l.idx, l.sign);
        if (l.dec != 0) append_amalgam(spec, nf, l.dec);
        break;
      case Letter::Kind::Amalgam:
        append_amalgam(spec, nf, l.elem);
        break;
    }
  }
  return nf;
}

NormalForm multiply(const AmbientSpec& spec, const NormalForm& u,
                    const NormalForm& v) {
  NormalForm nf = u;
  append_amalgam(spec, nf, v.head);
  for (const Letter& l : v.letters) {
    if (l.kind == Letter::Kind::Factor) {
      append_factor(spec, nf, l.idx, l.elem);
    } else {
      append_free(spec, nf, l.idx, l.sign);
      if (l.dec != 0) append_amalgam(spec, nf, l.dec);
    }
  }
  return nf;
}

NormalForm invert(const AmbientSpec& spec, const NormalForm& u) {
  NormalForm nf;
  for (auto it = u.letters.rbegin(); it != u.letters.rend(); ++it) {
    if (it->kind == Letter::Kind::Factor) {
      append_factor(spec, nf, it->idx, spec.factors[it->idx].inv(it->elem));
    } else {
      if (it->dec != 0)
        append_amalgam(spec, nf, spec.amalgam.inv(it->dec));
      append_free(spec, nf, it->idx, -it->sign);
    }
  }
  if (u.head != 0) append_amalgam(spec, nf, spec.amalgam.inv(u.head));
  return nf;
}

int syllable_length(const NormalForm& u) { return (int)u.letters.size(); }

NormalForm random_word(const AmbientSpec& spec, int max_syllables,
                       uint64_t seed) {
  if (max_syllables < 1) throw error("random_word: max_syllables must be >= 1");
  std::mt19937_64 rng(seed);
  // nonidentity choices per factor, outside the amalgam image
  std::vector<std::vector<int>> pool(spec.num_factors());
  for (int i = 0; i < spec.num_factors(); ++i)
    for (int g = 1; g < spec.factors[i].order(); ++g)
      if (!spec.in_a_image(i, g)) pool[i].push_back(g);
  const int kinds = spec.num_factors() + spec.free_rank;
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<Letter> raw;
    int len = 1 + (int)(rng() % (uint64_t)max_syllables);
    if (spec.amalgamated() && rng() % 4 == 0)
      raw.push_back(Letter::amalgam((int)(rng() % spec.a_order())));
    int last_factor = -1;
    for (int k = 0; k < len; ++k) {
      int pick = (int)(rng() % (uint64_t)kinds);
      if (pick < spec.num_factors()) {
        if (pick == last_factor && kinds > 1) pick = (pick + 1) % kinds;
        if (pick < spec.num_factors() && !pool[pick].empty()) {
          int g = pool[pick][rng() % pool[pick].size()];
          raw.push_back(Letter::factor(pick, g));
          last_factor = pick;
          continue;
        }
      }
      if (spec.free_rank > 0) {
        int j = (int)(rng() % (uint64_t)spec.free_rank);
        int sign = (rng() % 2) ? 1 : -1;
        int dec = spec.amalgamated() && rng() % 3 == 0
                      ? (int)(rng() % spec.a_order())
                      : 0;
        raw.push_back(Letter::free_gen(j, sign, dec));
        last_factor = -1;
      }
    }
    NormalForm nf = normalize(spec, raw);
    if (!nf.is_identity()) return nf;
  }
  throw error("random_word: failed to produce a nontrivial word");
}

NormalForm parse_word(const AmbientSpec& spec, const std::string& text) {
  std::vector<Letter> raw;
  std::istringstream is(text);
  std::string tok;
  int pos = 0;
  while (is >> tok) {
    ++pos;
    auto bad = [&](const std::string& why) {
      return error("word token " + std::to_string(pos) + " '" + tok + "': " +
                   why);
    };
    try {
      if (tok.size() >= 2 && (tok[0] == 'x' || tok[0] == 'X')) {
        int j = std::stoi(tok.substr(1));
        if (j < 1 || j > spec.free_rank) throw bad("no such free generator");
        raw.push_back(Letter::free_gen(j - 1, tok[0] == 'x' ? 1 : -1));
      } else if (tok.size() >= 3 && tok[0] == 'f') {
        auto colon = tok.find(':');
        if (colon == std::string::npos) throw bad("expected f<i>:<k>");
        int i = std::stoi(tok.substr(1, colon - 1));
        int k = std::stoi(tok.substr(colon + 1));
        if (i < 1 || i > spec.num_factors()) throw bad("no such factor");
        if (k < 1 || k >= spec.factors[i - 1].order())
          throw bad("element out of range (nonidentity 1-based id)");
        raw.push_back(Letter::factor(i - 1, k));
      } else if (tok.size() >= 3 && tok[0] == 'a' && tok[1] == ':') {
        if (!spec.amalgamated()) throw bad("amalgam letter in PLAIN spec");
        int k = std::stoi(tok.substr(2));
        if (k < 1 || k >= spec.a_order()) throw bad("amalgam element range");
        raw.push_back(Letter::amalgam(k));
      } else {
        throw bad("unrecognized token");
      }
    } catch (const error&) {
      throw;
    } catch (...) {
      throw bad("malformed number");
    }
  }
  return normalize(spec, raw);
}

std::string format_word(const AmbientSpec& spec, const NormalForm& u) {
  (void)spec;
  std::ostringstream os;
  bool first = true;
  auto sep = [&]() {
    if (!first) os << ' ';
    first = false;
  };
  if (u.head != 0) {
    sep();
    os << "a:" << u.head;
  }
  for (const Letter& l : u.letters) {
    sep();
    if (l.kind == Letter::Kind::Factor) {
      os << 'f' << (l.idx + 1) << ':' << l.elem;
    } else {
      os << (l.sign > 0 ? 'x' : 'X') << (l.idx + 1);
      if (l.dec != 0) {
        os << ' ' << "a:" << l.dec;
      }
    }
  }
  return os.str();
}

std::vector<int64_t> encode(const NormalForm& u) {
  std::vector<int64_t> v;
  v.reserve(u.letters.size() + 1);
  v.push_back(u.head);
  for (const Letter& l : u.letters) {
    int64_t x = (int64_t)(uint8_t)l.kind;
    x = x * 1000003 + l.idx;
    x = x * 1000003 + l.elem;
    x = x * 1000003 + (l.sign + 1);
    x = x * 1000003 + l.dec;
    v.push_back(x);
  }
  return v;
}

NormalForm map_to_quotient(const AmbientSpec& amalg,
                           const QuotientReduction& red, const NormalForm& u) {
  std::vector<Letter> raw;
  for (const Letter& l : u.letters) {
    if (l.kind != Letter::Kind::Factor)
      throw error("map_to_quotient: free letters unsupported");
    raw.push_back(Letter::factor(l.idx, red.maps[l.idx].proj[l.elem]));
  }
  (void)amalg;
  return normalize(red.plain, raw);
}

}  // namespace fpcore
