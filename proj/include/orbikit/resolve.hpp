#ifndef ORBIKIT_RESOLVE_HPP
#define ORBIKIT_RESOLVE_HPP

#include <memory>
#include <vector>

#include "orbikit/module.hpp"

namespace orbikit {

// Largest l(x) over the support of M (-1 for the zero module).
int module_length(const RGammaModule& M);

// E-resolution 0 -> E K^t M -> ... -> E K M -> E M -> M -> 0 built by
// iterating the counit of the (E_x, Res_x) adjunctions summed over objects.
// terms[k] is a direct sum of E_x-extended modules; maps[0]: terms[0] -> M and
// maps[k]: terms[k] -> terms[k-1].  Field coefficients (kernels are computed
// objectwise).
struct EResolution {
  std::vector<std::shared_ptr<RGammaModule>> terms;
  std::vector<ModuleHom> maps;
  std::vector<std::shared_ptr<RGammaModule>> owners;  // intermediate kernels
  int length() const { return (int)terms.size() - 1; }
};
EResolution e_resolution(const RGammaModule& M);
// Exactness of the whole augmented sequence, checked objectwise.
bool e_resolution_exact(const EResolution& E, const RGammaModule& M);

// Minimal free resolution F_len -> ... -> F_0 -> M -> 0 over a field.  Each
// step is a minimal free cover of the previous kernel; stops early when the
// kernel vanishes.  Deterministic: covers pick generators from the fixed
// echelon basis of S_x-residues.
struct FreeResolution {
  std::vector<std::shared_ptr<RGammaModule>> F;
  ModuleHom pi;               // F[0] -> M
  std::vector<ModuleHom> d;   // d[k]: F[k+1] -> F[k]
  std::shared_ptr<RGammaModule> tail;  // kernel of the last map (may be zero)
  ModuleHom tail_incl;                 // tail -> F.back()
  int length() const { return (int)F.size() - 1; }
};
FreeResolution minimal_free_resolution(const RGammaModule& M, int length);

// dim Ext^n(M, N) for n = 0..max_degree, as cohomology of Hom(F_*, N).
std::vector<int> ext_groups(const RGammaModule& M, const RGammaModule& N,
                            int max_degree);

// Group-algebra analogues over R[Aut(x)], used as oracles for the adjunction
// identities and to resolve values at single objects.
struct GmFreeCover {
  GroupModule F;  // gm_free on the chosen generators
  SpMat pi;       // V.rank x F.rank equivariant surjection
  int copies = 0;
};
GmFreeCover gm_free_cover(const GroupModule& V);
struct GmKernel {
  GroupModule K;
  SpMat incl;  // ambient-rank x K.rank
};
GmKernel gm_kernel(const GroupModule& V, const GroupModule& W, const SpMat& X);
std::vector<int> gm_ext_groups(const GroupModule& V, const GroupModule& N,
                               int max_degree);

// D_Q(V)(S) = Hom_{R[W_G(Q)]}(R[Mor(Q,S)], V): the coinduced module of V at Q.
// basis[i] columns are vec(Phi) for the chosen basis of the value at object i
// (Phi is a V.rank x |Mor(Q,i)| matrix, column-major).
struct DQData {
  std::shared_ptr<RGammaModule> D;
  int Q = 0;
  std::vector<SpMat> basis;
};
DQData dq_functor_data(const OrbitCat& C, int Q, const GroupModule& V);
RGammaModule dq_functor(const OrbitCat& C, int Q, const GroupModule& V);

// Exact coresolution 0 -> N -> DN -> DCN -> ... over a field, where DN is the
// sum over supported objects Q of D_Q(N(Q)) and the map out of N is the sum of
// the adjunction units u |-> (x |-> N(x)(u)).
struct Coresolution {
  std::vector<std::shared_ptr<RGammaModule>> D;
  std::vector<ModuleHom> maps;  // maps[0]: N -> D[0]; maps[k]: D[k-1] -> D[k]
  std::vector<std::shared_ptr<RGammaModule>> owners;  // cokernels C^k N
  int length() const { return (int)D.size(); }
};
Coresolution coresolution(const RGammaModule& N);
bool coresolution_exact(const Coresolution& co, const RGammaModule& N);

// Finite projective dimension check: first the maximal-object criterion (the
// value at a maximal object must be projective over its automorphism group),
// then an explicit resolution up to l(Gamma)+extra with a projectivity
// certificate for the final kernel.
struct ProjDimVerdict {
  bool obstructed = false;
  int object = -1;   // obstructing maximal object when obstructed
  bool finite = false;
  int projdim = -1;  // set when finite
  int bound = 0;     // resolution length tried when neither
};
ProjDimVerdict finite_projdim_obstruction(const RGammaModule& M, int extra = 2);

}  // namespace orbikit

#endif
