#ifndef ORBIKIT_MODULE_HPP
#define ORBIKIT_MODULE_HPP

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "orbikit/la.hpp"
#include "orbikit/orbit_cat.hpp"

namespace orbikit {

// Module over R[Aut(x)] for an orbit-category object x, with the category's
// composition convention: act[compose(a,b)] = act[a] * act[b].
struct GroupModule {
  const OrbitCat* cat = nullptr;
  int obj = 0;
  Ring ring = Ring::integers();
  int rank = 0;
  std::vector<SpMat> act;  // per automorphism position in Mor(x,x)

  bool check() const;  // identity + composition law
};

GroupModule gm_trivial(const OrbitCat& C, int x, const Ring& R);
GroupModule gm_free(const OrbitCat& C, int x, const Ring& R, int copies);
GroupModule gm_direct_sum(const std::vector<GroupModule>& parts);
// Permutation module on the W-set of cosets (G/K)^{H_x}-style: given any
// action table point -> point per automorphism.
GroupModule gm_from_action(const OrbitCat& C, int x, const Ring& R,
                           const std::vector<std::vector<int>>& point_images);
// Higman criterion: theta with sum_a P_a theta P_{a^{-1}} = id, if V is
// projective over R[Aut(x)]; verified before returning.
std::optional<SpMat> gm_projective_witness(const GroupModule& V);
// Indices of a minimal generating subset of the standard basis (fields).
std::vector<int> gm_minimal_generators(const GroupModule& V);
std::optional<SpMat> gm_find_isomorphism(const GroupModule& A, const GroupModule& B,
                                         unsigned seed = 1);

// Contravariant (by default) functor from the orbit category to R-modules.
struct RGammaModule {
  const OrbitCat* cat = nullptr;
  Ring ring = Ring::integers();
  bool covariant = false;
  std::vector<int> rank;
  // act[i][j][m] for the m-th morphism f: i -> j.  Contravariant: a matrix
  // value(j) -> value(i); covariant: value(i) -> value(j).
  std::vector<std::vector<std::vector<SpMat>>> act;
  // When the basis is literally a concatenation of free modules R[G/K_b], the
  // ordered block classes; enables subcomplex surgery and K0 bookkeeping.
  std::optional<std::vector<int>> free_blocks;
  // Known class of [M] in K_0(free): multiplicity per object class (kept for
  // sums/tensors of free modules even when the basis is not block-aligned).
  std::optional<std::vector<long long>> k0;

  const SpMat& action(int i, int j, int m) const { return act[i][j][m]; }
  int total_rank() const;
  bool is_zero() const { return total_rank() == 0; }
  bool check(int samples = 200, unsigned seed = 1) const;  // functoriality
  std::vector<int> free_block_offsets(int obj) const;  // basis offset per block
};

struct ModuleHom {
  const RGammaModule* src = nullptr;
  const RGammaModule* dst = nullptr;
  std::vector<SpMat> comp;  // per object: rank_dst(x) x rank_src(x)

  bool check_natural() const;
  bool is_objectwise_iso() const;
  bool is_surjective() const;
  bool is_injective() const;
  ModuleHom then(const ModuleHom& next) const;  // this followed by next
  ModuleHom operator+(const ModuleHom& o) const;
  ModuleHom scaled(long long num, long long den = 1) const;
};

ModuleHom identity_hom(const RGammaModule& M);
ModuleHom zero_hom(const RGammaModule& src, const RGammaModule& dst);

RGammaModule zero_module(const OrbitCat& C, const Ring& R);
RGammaModule constant_module(const OrbitCat& C, const Ring& R);
RGammaModule free_module(const OrbitCat& C, const Ring& R, int cls);
// Free module with the given ordered block classes.
RGammaModule free_module_blocks(const OrbitCat& C, const Ring& R,
                                const std::vector<int>& classes);
RGammaModule direct_sum(const std::vector<RGammaModule>& parts);
RGammaModule tensor_R(const RGammaModule& M, const RGammaModule& N);
// Fixed-point module of the G-set G/S for an arbitrary subgroup S of G (equals
// free_module when S is in the family, with value R[(G/S)^H] at G/H).
RGammaModule fixed_point_module(const OrbitCat& C, const Ring& R, const Subgroup& S);

// Hom out of a free module via generator images: gen_images[b] is a column
// vector in M(class of block b).
ModuleHom hom_from_free(const RGammaModule& F, const RGammaModule& M,
                        const std::vector<SpMat>& gen_images);

// Basis (over a field) or generating set (over Z) of natural transformations.
std::vector<ModuleHom> hom_module_space(const RGammaModule& M, const RGammaModule& N);

// Coend of a contravariant and a covariant module over the category.
FGAbGroup tensor_over_cat(const RGammaModule& M, const RGammaModule& N);
// Covariant corepresentable module R Mor(x, -).
RGammaModule co_free_module(const OrbitCat& C, const Ring& R, int cls);

GroupModule restriction_to_aut(const RGammaModule& M, int x);  // Res_x
RGammaModule extension_functor(const GroupModule& V);           // E_x
RGammaModule atomic_module(const GroupModule& V);               // I_x

// S_x over a field: quotient of M(x) by images from strictly larger objects,
// with chosen standard-basis lift.
struct SplitData {
  GroupModule V;
  std::vector<int> basis_idx;  // standard basis vectors of M(x) lifting V
  SpMat larger_span;           // M(x)-columns spanned by larger objects
};
SplitData splitting_functor(const RGammaModule& M, int x);

struct FreeCover {
  std::shared_ptr<RGammaModule> F;  // heap-held so pi.src stays valid
  ModuleHom pi;
};
FreeCover free_cover(const RGammaModule& M);

// Section s with pi . s = id for a surjective natural map, if one exists.
std::optional<ModuleHom> split_surjection(const ModuleHom& pi);

// Projectivity with witnesses: over fields via the structure theorem
// (Higman witnesses at every object + explicit iso from a sum of E_x S_x M);
// over Z by solving the splitting of a free cover directly.
struct ProjectiveWitness {
  bool projective = false;
  std::string reason;            // when not projective
  std::optional<ModuleHom> iso;  // fields: sum E_x S_x M -> M
  std::optional<ModuleHom> splitting;  // Z: s with pi . s = id
  std::shared_ptr<RGammaModule> model;  // owner of the witness hom's other end
};
ProjectiveWitness is_projective(const RGammaModule& M);

std::optional<ModuleHom> find_isomorphism(const RGammaModule& M, const RGammaModule& N,
                                          unsigned seed = 1, int tries = 64);

// Submodule/quotient machinery over fields.
struct SubmoduleResult {
  std::shared_ptr<RGammaModule> mod;
  ModuleHom incl;  // mod -> ambient
};
struct QuotientResult {
  std::shared_ptr<RGammaModule> mod;
  ModuleHom proj;  // ambient -> mod
};
SubmoduleResult kernel_module(const ModuleHom& phi);
SubmoduleResult image_module(const ModuleHom& phi);
// Quotient of N by the submodule spanned objectwise by the columns of span[x].
QuotientResult quotient_module(const RGammaModule& N, const std::vector<SpMat>& span);

// Restriction / induction along a subgroup inclusion H <= G.
struct SubgroupContext {
  std::shared_ptr<PermGroup> Hgroup;  // H as a standalone permutation group
  const OrbitCat* catG = nullptr;
  OrbitCat catH;              // orbit category of H for the restricted family
  std::vector<int> to_G;      // Hgroup element index -> G element index
  Subgroup H_in_G;
  // Per catH object i: image object in catG and a witness g in G with
  // (K_i)^g = catG representative.
  std::vector<int> obj_map;
  std::vector<int> obj_witness;
};
SubgroupContext make_subgroup_context(const OrbitCat& catG, const Subgroup& H);

RGammaModule restrict_module(const SubgroupContext& ctx, const RGammaModule& M);
RGammaModule induce_module(const SubgroupContext& ctx, const RGammaModule& N);

// Fixed point decomposition of R[G/K] at G/H: summands R[N_G(H)/stab].
struct FixedPointSummand {
  int rep_g;      // g with H^g <= K
  Subgroup stab;  // N_G(H) cap gKg^{-1}
  long long index;  // [N_G(H) : stab]
};
std::vector<FixedPointSummand> fixed_point_decomposition(const Subgroup& H,
                                                         const Subgroup& K);
// Independent oracle: sizes of the N_G(H)-orbits on (G/K)^H, sorted.
std::vector<long long> fixed_point_orbit_sizes(const Subgroup& H, const Subgroup& K);

// K_0(free) bookkeeping: class vectors indexed by category objects.
using K0Free = std::vector<long long>;
K0Free k0_zero(const OrbitCat& C);
K0Free k0_of_class(const OrbitCat& C, int cls);
K0Free k0_multiply(const OrbitCat& C, const K0Free& a, const K0Free& b);

// Random module over a field: cokernel of a random map between free modules.
RGammaModule random_module(const OrbitCat& C, const Ring& R, std::mt19937_64& rng,
                           int max_blocks = 3);

}  // namespace orbikit

#endif
