#ifndef ORBIKIT_SIMPLICIAL_HPP
#define ORBIKIT_SIMPLICIAL_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "orbikit/complex.hpp"

namespace orbikit {

// Finite G-simplicial complex: vertices 0..num_vertices-1 with the action
// recorded per group element, and a downward-closed list of simplices kept as
// sorted vertex lists.  Admissible means the setwise stabilizer of every
// simplex fixes it vertexwise; one barycentric subdivision always achieves
// this.  G may be null for plain (non-equivariant) complexes.
struct GSimplicialComplex {
  const PermGroup* G = nullptr;
  int num_vertices = 0;
  std::vector<std::vector<int>> vertex_act;  // per group element index
  std::vector<std::vector<int>> simplices;   // sorted lists, sorted by (size, lex)
  std::map<std::vector<int>, int> index;     // simplex -> position in `simplices`

  int dim() const;
  // Number of k-simplices.
  int count_of_dim(int k) const;
  std::vector<std::vector<int>> simplices_of_dim(int k) const;
  // Sorted image of a simplex under the group element with index g.
  std::vector<int> image(int g, const std::vector<int>& s) const;
  // Downward closure, sortedness, and G mapping simplices to simplices.
  bool check(std::string* why = nullptr) const;
  bool is_admissible(std::string* witness = nullptr) const;
  void rebuild_index();
};

// Builds a complex from one vertex permutation per generator of G and a list
// of maximal simplices; closes the simplex list downward under faces and the
// G-action, and extends the generator actions to all group elements (checked
// for consistency, so the generator images must define a homomorphism).
GSimplicialComplex build_gcomplex(const PermGroup& G, int num_vertices,
                                  const std::vector<std::vector<int>>& gen_act,
                                  const std::vector<std::vector<int>>& maximal);

GSimplicialComplex barycentric_subdivision(const GSimplicialComplex& X);

// Full subcomplex on the vertices fixed by every element of H, as a plain
// complex (G = null); vertex numbering is inherited from X.
GSimplicialComplex fixed_subcomplex(const GSimplicialComplex& X, const Subgroup& H);

// Join: Y's vertices are renamed to follow X's; simplices are the unions of a
// (possibly empty) simplex from each side; the common group acts diagonally.
GSimplicialComplex simplicial_join(const GSimplicialComplex& X,
                                   const GSimplicialComplex& Y);

// Plain simplicial homology with the global-vertex-order sign convention;
// reduced by default.  Independent oracle for the chain-level constructions.
std::vector<FGAbGroup> simplicial_homology(const GSimplicialComplex& X, const Ring& R,
                                           bool reduced = true);

// One G-orbit of k-simplices: representative chosen so that its stabilizer is
// literally the family representative of its conjugacy class (cls = -1 when
// the stabilizer class is not in the category's family).
struct GcwOrbit {
  std::vector<int> rep;
  Subgroup stab;
  int cls = -1;
};

// Bredon chain complex of an admissible G-simplicial complex: the value of
// C_k at G/H is R[(X_k)^H] with the signed simplicial boundary.  Each orbit
// with stabilizer in the family contributes a free summand R[G/stab] in the
// morphism-coset basis; other orbits contribute their fixed-point modules.
// With strict = true an out-of-family stabilizer is an error (the exception
// names the offending simplex).  The result carries the standard augmentation.
struct GcwComplex {
  ChainComplex C;
  std::vector<std::vector<GcwOrbit>> orbits;  // per degree
};
GcwComplex gcw_chain_complex(const GSimplicialComplex& X, const OrbitCat& cat,
                             const Ring& R, bool strict = true);

// The first barycentric subdivision of the octahedron (vertices +-e_i) with
// S_4 acting through the rotation group, over the orbit category of the
// family of cyclic 2-subgroups {1, C_2 transposition, C_2 double, C_4}.
// The face-barycenter orbit has stabilizer C_3 outside the family, so degree
// 0 mixes free summands with one fixed-point summand.
struct OctahedronComplex {
  std::shared_ptr<PermGroup> group;       // S_4
  std::shared_ptr<GSimplicialComplex> X;  // 26 vertices, 72 edges, 48 triangles
  std::shared_ptr<OrbitCat> cat;
  GcwComplex gcw;
};
OctahedronComplex octahedron_complex(const Ring& R);

}  // namespace orbikit

#endif
