#ifndef ORBIKIT_ORBIT_CAT_HPP
#define ORBIKIT_ORBIT_CAT_HPP

#include <map>
#include <vector>

#include "orbikit/group.hpp"

namespace orbikit {

// Skeletal orbit category of a finite group G with respect to a family F of
// subgroups: one object G/H per conjugacy class (H the canonical class
// representative), ordered by increasing |H| with lexicographic tie-break.
// A morphism G/H -> G/K is a coset gK with H^g <= K, stored by its canonical
// (minimal-element) coset representative.
struct OrbitCat {
  const PermGroup* G = nullptr;
  Family F;
  // mor[i][j]: sorted canonical coset representatives of morphisms i -> j.
  std::vector<std::vector<std::vector<int>>> mor;
  // position lookup per (i,j): canonical rep -> index into mor[i][j].
  std::vector<std::vector<std::map<int, int>>> morpos;
  std::vector<int> length;  // l(x) per object
  std::vector<WeylGroup> weyl;  // Weyl group of each object's subgroup

  int num_objects() const { return (int)F.reps.size(); }
  const Subgroup& obj(int i) const { return F.reps[i]; }
  int mor_count(int i, int j) const { return (int)mor[i][j].size(); }

  // Position in mor[i][j] of the coset gK (g need not be canonical); the coset
  // must actually be a morphism.
  int find_mor(int i, int j, int g) const;
  // Composite of m1: i -> j followed by m2: j -> k, as a position in mor[i][k].
  int compose(int i, int j, int k, int m1, int m2) const;
  int identity_mor(int i) const { return find_mor(i, i, 0); }
  // Position in mor[i][i] of the automorphism f_n (n in N_G(H_i)), where
  // f_n(gH) = g n^{-1} H.
  int aut_of_normalizer(int i, int n) const;

  // True when there is a morphism i -> j (i subconjugate to j).
  bool leq(int i, int j) const { return !mor[i][j].empty(); }

  int max_length() const;
  // Objects of maximal length among those where pred holds; helper for
  // resolution loops: objects sorted by decreasing length.
  std::vector<int> objects_by_decreasing_length() const;
};

OrbitCat build_orbit_cat(const Family& F);

// Orbits of Aut(x) acting on Mor(y, x) by post-composition.  The action is
// free; witness[m] is the unique automorphism a with m = compose(rep, a).
struct MorOrbits {
  std::vector<int> reps;      // orbit representatives (minimal position)
  std::vector<int> orbit_of;  // per morphism position, its orbit index
  std::vector<int> witness;   // per morphism position, a in mor[x][x]
};
MorOrbits mor_orbits_under_aut(const OrbitCat& C, int y, int x);

}  // namespace orbikit

#endif
