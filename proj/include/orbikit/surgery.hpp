#ifndef ORBIKIT_SURGERY_HPP
#define ORBIKIT_SURGERY_HPP

#include <memory>
#include <vector>

#include "orbikit/complex.hpp"
#include "orbikit/resolve.hpp"

namespace orbikit {

// H_k(C) as an RGamma-module over a field, with chosen cycle representatives.
// cycles[x] columns live in C_k(x) and their classes are the basis of H(x);
// classes[x] expresses any cycle column basis (see class_of) in that basis.
struct HomologyModule {
  std::shared_ptr<RGammaModule> H;
  std::vector<SpMat> cycles;      // C_k(x) x rank(x)
  std::vector<SpMat> boundaries;  // image basis of the incoming differential
};
HomologyModule homology_module(const ChainComplex& C, int k);
// Classes of cycle columns V (each column must be a cycle at x).
SpMat homology_classes(const HomologyModule& Hk, int x, const SpMat& V);

// Kill the top isotypic free summands of C at one object: for d = dim C(obj)
// with hdim C(obj) < d and dim C(K) <= d-2 at strictly larger K, produce a
// chain homotopy equivalent complex D (quasi-isomorphism checked internally)
// with dim D(obj) = d-1 and all other object dimensions unchanged.  When the
// cokernel of the top differential is not free, elementary complexes in
// degrees d-1, d-2 are summed in first; the number of rounds is reported.
struct KillResult {
  ChainComplex D;
  int stabilizations = 0;
};
KillResult kill_top_free(const ChainComplex& C, int obj);

// Replace H_k(C) by the target of phi: H_k(C) -> T, keeping H_i for i != k.
// Surjective phi: mapping cone over a lifted resolution of ker phi; injective
// phi: stabilize degree k by the start of a resolution of coker phi, then the
// surjective case; general phi: factored through the image.  Field
// coefficients; resolutions come from e_resolution and must be certified
// projective; the homology gap below the resolution length is checked.
ChainComplex modify_homology(const ChainComplex& C, int k,
                             const HomologyModule& Hk, const ModuleHom& phi);

// Degreewise pushout of B <-f- A -g-> C with the induced differentials and
// the canonical chain maps from B and C.  Field coefficients.
struct PushoutResult {
  std::shared_ptr<ChainComplex> P;
  ChainMap from_b, from_c;
};
PushoutResult pushout_complexes(const ChainMap& f, const ChainMap& g);
// The unique map P -> T with w . from_b = u and w . from_c = v, when the
// cocone (u, v) satisfies u . f = v . g; empty when no solution exists.
std::optional<ChainMap> pushout_factor(const PushoutResult& po,
                                       const ChainMap& u, const ChainMap& v);

// Algebraic Postnikov tower of a projective complex over a field.
// sections[i] = C(i) = desuspended cone of the k-invariant map
// alphas[i]: C(i-1) -> targets[i] = Sigma^{i+1} P(H_i); to_section[i] is the
// chain map C -> C(i), a homology isomorphism in degrees <= i.  Sections
// satisfy H_j(C(i)) = H_j(C) for j <= i and H_j = 0 for i < j <= window;
// above the window the truncation of the (possibly infinite) resolutions
// leaves junk, which is pushed past max(top, window + 1) by construction.
struct PostnikovTower {
  std::shared_ptr<ChainComplex> base;
  std::vector<std::shared_ptr<ChainComplex>> sections;
  std::vector<std::shared_ptr<ChainComplex>> targets;  // null when H_i = 0
  std::vector<ChainMap> alphas;       // alphas[i].src is sections[i-1]
  std::vector<ChainMap> to_section;   // f_i: base -> sections[i]
  std::vector<std::shared_ptr<ChainComplex>> owners;
  int window = 0;
};
PostnikovTower postnikov_tower(const ChainComplex& C, int window = -1);

}  // namespace orbikit

#endif
