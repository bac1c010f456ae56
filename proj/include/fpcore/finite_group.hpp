#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fpcore {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Finite group stored as a full multiplication table over element ids
/// 0..n-1, with 0 the identity. Orders stay desk-scale (<= 120), so every
/// operation is a table lookup or a short scan.
class FiniteGroup {
 public:
  FiniteGroup() = default;

  static FiniteGroup cyclic(int n);
  static FiniteGroup symmetric(int n);  // n <= 5
  static FiniteGroup dihedral(int n);   // order 2n
  static FiniteGroup from_table(std::string name,
                                std::vector<std::vector<int>> table);

  int order() const { return order_; }
  const std::string& name() const { return name_; }

  int mul(int a, int b) const { return mult_[a * order_ + b]; }
  int inv(int a) const { return inv_[a]; }
  int conj(int g, int x) const { return mul(mul(g, x), inv(g)); }  // g x g^-1
  int elem_order(int a) const;

  bool is_central(int a) const;

 private:
  void finish(std::string name);  // builds inv_, validates axioms

  int order_ = 0;
  std::vector<int> mult_;  // row-major order_ x order_
  std::vector<int> inv_;
  std::string name_;
};

/// Parses "cyclic:<n>", "sym:<n>", "dihedral:<n>". Explicit tables go
/// through FiniteGroup::from_table (the instance-file parser feeds them).
FiniteGroup make_group(const std::string& descriptor);

/// Subgroups are sorted element-id lists containing 0.
using Subgroup = std::vector<int>;

Subgroup trivial_subgroup();
Subgroup full_subgroup(const FiniteGroup& g);
Subgroup subgroup_closure(const FiniteGroup& g, const std::vector<int>& gens);
bool subgroup_contains(const Subgroup& s, int x);
bool is_subgroup(const FiniteGroup& g, const Subgroup& s);
Subgroup subgroup_intersection(const Subgroup& a, const Subgroup& b);
Subgroup conjugate_subgroup(const FiniteGroup& g, const Subgroup& s, int by);
/// Returns true iff s is normal; otherwise *witness = {g, x} with
/// g x g^-1 outside s.
bool is_normal(const FiniteGroup& g, const Subgroup& s,
               std::pair<int, int>* witness = nullptr);
/// Greedy minimal generating list (not necessarily optimal).
std::vector<int> subgroup_generators(const FiniteGroup& g, const Subgroup& s);

/// Partition of G into double cosets S g T, blocks sorted by minimal element.
std::vector<std::vector<int>> double_cosets(const FiniteGroup& g,
                                            const Subgroup& s,
                                            const Subgroup& t);

/// Minimal element of the set S * c * T (either side may be {0}).
int coset_min(const FiniteGroup& g, const Subgroup& s, int c, const Subgroup& t);

struct QuotientMap {
  FiniteGroup quotient;
  std::vector<int> proj;  // element id -> coset id
};
/// Throws fpcore::error naming a violating conjugation if a is not normal.
QuotientMap quotient_group(const FiniteGroup& g, const Subgroup& a);

struct A3Theta {
  std::optional<int> a3;  // nullopt = no subgroup of order >= 3
  long long theta_num = 1;
  long long theta_den = 1;
};
/// a3 = min order of a subgroup of order >= 3; theta = a3/(a3-2), with the
/// convention theta = 1 when a3 is infinite. theta always lies in [1,3].
A3Theta a3_theta(const FiniteGroup& g);

}  // namespace fpcore
