#ifndef ORBIKIT_GROUP_HPP
#define ORBIKIT_GROUP_HPP

#include <map>
#include <optional>
#include <vector>

#include "orbikit/perm.hpp"

namespace orbikit {

// Finite permutation group with a full, lexicographically sorted element list.
// elems[0] is always the identity.
struct PermGroup {
  int degree = 0;
  std::vector<Perm> gens;
  std::vector<Perm> elems;
  std::map<std::vector<int>, int> idx;

  static PermGroup generated(int degree, const std::vector<Perm>& gens);
  static PermGroup symmetric(int n);
  static PermGroup cyclic(int n);

  long long order() const { return (long long)elems.size(); }
  int index_of(const Perm& p) const;
  bool contains(const Perm& p) const { return idx.count(p.img) > 0; }
  int mul(int a, int b) const { return index_of(elems[a] * elems[b]); }
  int inv(int a) const { return index_of(elems[a].inverse()); }
  // g^{-1} a g by element indices.
  int conj(int a, int g) const { return index_of(elems[a].conjugated_by(elems[g])); }
};

// Subgroup of a fixed parent group, stored as sorted element indices.
struct Subgroup {
  const PermGroup* G = nullptr;
  std::vector<int> elems;  // sorted, includes 0 (identity)
  std::vector<int> gens;   // generator indices (may be empty for trivial)

  long long order() const { return (long long)elems.size(); }
  bool contains(int e) const;
  bool operator==(const Subgroup& o) const { return G == o.G && elems == o.elems; }
  bool operator<(const Subgroup& o) const {
    if (elems.size() != o.elems.size()) return elems.size() < o.elems.size();
    return elems < o.elems;
  }
  std::string gens_string() const;
};

Subgroup subgroup_generated(const PermGroup& G, const std::vector<int>& gen_idx);
Subgroup subgroup_from_perms(const PermGroup& G, const std::vector<Perm>& gens);
Subgroup trivial_subgroup(const PermGroup& G);
Subgroup full_subgroup(const PermGroup& G);
Subgroup subgroup_from_elements(const PermGroup& G, std::vector<int> elems);

// H^g = g^{-1} H g.
Subgroup conjugate_subgroup(const Subgroup& H, int g);
bool is_subgroup_of(const Subgroup& A, const Subgroup& B);
Subgroup intersect(const Subgroup& A, const Subgroup& B);
Subgroup normalizer(const Subgroup& H);
Subgroup centralizer(const Subgroup& H);
// Finds g with A^g = B if the subgroups are conjugate.
std::optional<int> conjugating_element(const Subgroup& A, const Subgroup& B);

// Canonical (minimal-element-index) representatives of left cosets gH, sorted.
std::vector<int> left_coset_reps(const Subgroup& H);
// Canonical representative of the coset g-H.
int coset_rep(const Subgroup& H, int g);

struct DoubleCoset {
  int rep;
  long long size;
};
// Double cosets HgK with canonical minimal representatives, sorted by rep.
std::vector<DoubleCoset> double_cosets(const Subgroup& H, const Subgroup& K);

// All subgroups of H (as subgroups of the ambient group), sorted.
std::vector<Subgroup> all_subgroups(const Subgroup& H);

// N_G(H)/H as an explicit permutation group on the cosets of H in N_G(H).
struct WeylGroup {
  PermGroup W;                  // degree = number of cosets of H in N
  Subgroup H;                   // the subgroup itself
  Subgroup N;                   // normalizer of H
  std::vector<int> coset_reps;  // canonical reps of the cosets of H in N
  std::vector<int> nreps;       // per element of W, one preimage in N (index in G)
  // Index in W of the image of n (n must lie in N).
  int image_of(int n) const;
  // Index within coset_reps of the coset containing g (g must lie in N).
  int coset_index(int g) const;
};
WeylGroup weyl_group(const Subgroup& H);

Subgroup sylow_subgroup(const PermGroup& G, long long p);

// Family of subgroups closed under subgroups and conjugation, kept as the set
// of conjugacy-class representatives (lexicographically least element list),
// ordered by increasing order then element list.
struct Family {
  const PermGroup* G = nullptr;
  std::vector<Subgroup> reps;

  // Class index of S plus a witness g with S^g = reps[i]; nullopt if absent.
  std::optional<std::pair<int, int>> class_of(const Subgroup& S) const;
  bool closed_check() const;  // verify closure under subgroups and conjugation
};

Family family_generate(const PermGroup& G, const std::vector<Subgroup>& seeds);
// Canonical class representative: conjugate with lexicographically least elems.
Subgroup canonical_conjugate(const Subgroup& S, int* witness = nullptr);

}  // namespace orbikit

#endif
