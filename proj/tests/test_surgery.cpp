#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <string>

#include "orbikit/simplicial.hpp"
#include "orbikit/surgery.hpp"

using namespace orbikit;

namespace {

PermGroup& c4_group() {
  static PermGroup C4 = PermGroup::cyclic(4);
  return C4;
}

// C4 with all three subgroup classes: 0 = 1, 1 = C2, 2 = C4.
OrbitCat c4_cat() {
  return build_orbit_cat(family_generate(c4_group(), {full_subgroup(c4_group())}));
}

// Square with the rotation action: an S^1 with free C4 cells.
GSimplicialComplex c4_square() {
  return build_gcomplex(c4_group(), 4, {{1, 2, 3, 0}}, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
}

// Two points swapped by the rotation (stabilizer C2).
GSimplicialComplex c4_s0_sign() {
  return build_gcomplex(c4_group(), 2, {{1, 0}}, {{0}, {1}});
}

// Two fixed points (stabilizer C4).
GSimplicialComplex c4_s0_trivial() {
  return build_gcomplex(c4_group(), 2, {{0, 1}}, {{0}, {1}});
}

// Orbit category of S_4 for the family of all cyclic subgroups of the
// rotation-image: generated by the octahedron vertex stabilizers, it has the
// five classes 1, C_2 transposition, C_2 double, C_3, C_4, so every simplex
// stabilizer of the (subdivided) octahedron lies in the family.
OrbitCat cyclic_cat_of(const OctahedronComplex& oct) {
  std::vector<Subgroup> seeds;
  for (const auto& o : oct.gcw.orbits[0]) seeds.push_back(o.stab);
  return build_orbit_cat(family_generate(*oct.group, seeds));
}

std::vector<long long> homology_ranks(const ChainComplex& C, int upto) {
  std::vector<long long> out;
  for (int x = 0; x < C.cat->num_objects(); ++x)
    for (int k = 0; k <= upto; ++k) out.push_back(homology_at(C, k, x).rank);
  return out;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("homology_module matches objectwise homology and is natural") {
  OctahedronComplex oct = octahedron_complex(Ring::prime_field(2));
  const ChainComplex& C = oct.gcw.C;
  for (int k = 0; k <= 2; ++k) {
    HomologyModule H = homology_module(C, k);
    CHECK(H.H->check());
    for (int x = 0; x < oct.cat->num_objects(); ++x) {
      CHECK((long long)H.H->rank[x] == homology_at(C, k, x).rank);
      // Representatives are cycles and their classes form the basis.
      CHECK(la_equal(C.ring, C.diff(k, x) * H.cycles[x],
                     SpMat(C.rank_at(k - 1, x), H.H->rank[x])));
      if (H.H->rank[x] > 0)
        CHECK(homology_classes(H, x, H.cycles[x]) == SpMat::identity(H.H->rank[x]));
      // A boundary column has class zero.
      if (!H.boundaries[x].is_zero())
        CHECK(homology_classes(H, x, H.boundaries[x].col(0)).is_zero());
    }
  }
}

TEST_CASE("kill_top_free: preconditions are enforced with witnesses") {
  OrbitCat cat = c4_cat();
  Ring F2 = Ring::prime_field(2);
  GSimplicialComplex J =
      simplicial_join(simplicial_join(c4_square(), c4_s0_sign()), c4_s0_trivial());
  REQUIRE(J.is_admissible());
  ChainComplex C = gcw_chain_complex(J, cat, F2).C;
  REQUIRE(hdim_function(C) == DimFunction{3, 1, 0});

  ChainComplex padded = direct_sum_complex(
      {C, elementary_complex(cat, F2, 1, 2), elementary_complex(cat, F2, 2, 1)});
  REQUIRE(dim_function(padded) == DimFunction{3, 3, 2});

  // Killing at C2 first is blocked: C4 still has dimension 2 > 3 - 2.
  try {
    kill_top_free(padded, 1);
    CHECK(false);
  } catch (const std::invalid_argument& e) {
    CHECK(contains(e.what(), "dimension"));
  }
  // Killing at the trivial object is blocked: its homology reaches the top.
  CHECK_THROWS_AS(kill_top_free(C, 0), std::invalid_argument);
}

TEST_CASE("kill_top_free: iterated kills reach the homology dimension function") {
  OrbitCat cat = c4_cat();
  Ring F2 = Ring::prime_field(2);
  GSimplicialComplex J =
      simplicial_join(simplicial_join(c4_square(), c4_s0_sign()), c4_s0_trivial());
  ChainComplex base = gcw_chain_complex(J, cat, F2).C;
  std::vector<long long> want = homology_ranks(base, 3);

  ChainComplex D = direct_sum_complex(
      {base, elementary_complex(cat, F2, 1, 2), elementary_complex(cat, F2, 2, 1)});
  // Top-down: the padding blocks cancel against nothing, so each kill drops
  // straight to the honest content (2 -> 0 at C4, then 3 -> 1 at C2).
  for (int obj : {2, 1}) {
    DimFunction before = dim_function(D);
    KillResult r = kill_top_free(D, obj);
    D = std::move(r.D);
    CHECK(dim_function(D)[obj] < before[obj]);
    for (int x = 0; x < cat.num_objects(); ++x)
      if (x != obj) CHECK(dim_function(D)[x] == before[x]);
  }
  CHECK(dim_function(D) == DimFunction{3, 1, 0});
  CHECK(is_strictly_monotone(cat, dim_function(D)));
  CHECK(homology_ranks(D, 3) == want);
  for (int k = 0; k <= D.top(); ++k) CHECK(D.terms[k].free_blocks.has_value());
}

TEST_CASE("modify_homology: identity map returns the complex up to homology") {
  OctahedronComplex oct = octahedron_complex(Ring::prime_field(2));
  const ChainComplex& C = oct.gcw.C;
  HomologyModule H0 = homology_module(C, 0);
  ModuleHom id = identity_hom(*H0.H);
  id.src = H0.H.get();
  id.dst = H0.H.get();
  ChainComplex D = modify_homology(C, 0, H0, id);
  CHECK(homology_ranks(D, 2) == homology_ranks(C, 2));
}

TEST_CASE("modify_homology: killing the top homology of the octahedron over Q") {
  OctahedronComplex oct = octahedron_complex(Ring::rationals());
  const ChainComplex& C = oct.gcw.C;
  HomologyModule H2 = homology_module(C, 2);
  REQUIRE(H2.H->rank == std::vector<int>{1, 0, 0, 0});
  RGammaModule zero = zero_module(*oct.cat, Ring::rationals());
  ModuleHom to_zero = zero_hom(*H2.H, zero);
  ChainComplex D = modify_homology(C, 2, H2, to_zero);
  std::string why;
  CHECK(complex_check(D, &why));
  for (int x = 0; x < 4; ++x) {
    CHECK(homology_at(D, 2, x).is_trivial());
    CHECK(homology_at(D, 0, x) == homology_at(C, 0, x));
    CHECK(homology_at(D, 1, x).is_trivial());
  }
}

TEST_CASE("modify_homology error contracts") {
  // Over F2 the kernel resolution of the top octahedron homology starts with
  // the non-projective module I_1 R.
  OctahedronComplex oct = octahedron_complex(Ring::prime_field(2));
  HomologyModule H2 = homology_module(oct.gcw.C, 2);
  RGammaModule z2 = zero_module(*oct.cat, Ring::prime_field(2));
  ModuleHom k2 = zero_hom(*H2.H, z2);
  try {
    modify_homology(oct.gcw.C, 2, H2, k2);
    CHECK(false);
  } catch (const std::runtime_error& e) {
    CHECK(contains(e.what(), "resolution not found within length bound"));
  }

  // Over Q everything is projective, but a long resolution of the constant
  // module collides with nonvanishing homology one degree up.
  OrbitCat cat = c4_cat();
  Ring Q = Ring::rationals();
  ChainComplex C = direct_sum_complex(
      {module_in_degree(constant_module(cat, Q), 0),
       module_in_degree(free_module(cat, Q, 0), 1)});
  REQUIRE(!homology_at(C, 1, 0).is_trivial());
  HomologyModule H0 = homology_module(C, 0);
  RGammaModule zq = zero_module(cat, Q);
  ModuleHom k0 = zero_hom(*H0.H, zq);
  try {
    modify_homology(C, 0, H0, k0);
    CHECK(false);
  } catch (const std::runtime_error& e) {
    CHECK(contains(e.what(), "gap too small"));
  }

  // Integer coefficients are rejected.
  OctahedronComplex octz = octahedron_complex(Ring::integers());
  CHECK_THROWS_AS(homology_module(octz.gcw.C, 0), std::invalid_argument);
}

TEST_CASE("modify_homology: extending H_0 = I_1 R to the constant module over F_5") {
  static PermGroup S5 = PermGroup::symmetric(5);
  Perm t(std::vector<int>{1, 0, 2, 3, 4});
  Subgroup K = subgroup_from_perms(S5, {t});
  OrbitCat cat = build_orbit_cat(family_generate(S5, {K}));
  REQUIRE(cat.num_objects() == 2);
  Ring F5 = Ring::prime_field(5);

  RGammaModule I1 = atomic_module(gm_trivial(cat, 0, F5));
  ChainComplex C = module_in_degree(I1, 0);
  HomologyModule H0 = homology_module(C, 0);
  REQUIRE(H0.H->rank == std::vector<int>{1, 0});

  RGammaModule Rbar = constant_module(cat, F5);
  ModuleHom phi;
  phi.src = H0.H.get();
  phi.dst = &Rbar;
  phi.comp = {SpMat::identity(1), SpMat(1, 0)};
  REQUIRE(phi.check_natural());

  // The cokernel I_K R resolves as 0 -> E_1 R[G/(K x S3)] -> E_K R, with the
  // displayed ranks (the Weyl group of K is S3 acting on the fixed letters).
  {
    RGammaModule IK = atomic_module(gm_trivial(cat, 1, F5));
    EResolution E = e_resolution(IK);
    REQUIRE(E.length() == 1);
    CHECK(E.terms[0]->rank == std::vector<int>{10, 1});
    CHECK(E.terms[1]->rank == std::vector<int>{10, 0});
    CHECK(is_projective(*E.terms[0]).projective);
    CHECK(is_projective(*E.terms[1]).projective);
    CHECK(e_resolution_exact(E, IK));
  }

  ChainComplex D = modify_homology(C, 0, H0, phi);
  HomologyModule H0D = homology_module(D, 0);
  CHECK(H0D.H->rank == std::vector<int>{1, 1});
  CHECK(find_isomorphism(*H0D.H, Rbar).has_value());
  // The structure map of the result is nonzero: the extension of I_K R by
  // I_1 R realized here is the nonsplit one.
  CHECK(!H0D.H->act[0][1][0].is_zero());
  // And indeed the quotient map R -> R/(I_1 R) does not split over F_5.
  QuotientResult q = quotient_module(Rbar, {SpMat::identity(1), SpMat(1, 0)});
  CHECK(!split_surjection(q.proj).has_value());
}

TEST_CASE("pushout of identity legs and of zero legs") {
  OrbitCat cat = c4_cat();
  Ring F3 = Ring::prime_field(3);
  ChainComplex B = direct_sum_complex(
      {module_in_degree(free_module(cat, F3, 1), 0), elementary_complex(cat, F3, 0, 1)});
  ChainMap idb = identity_chain_map(B);

  // B <-id- B -id-> B pushes out to B again.
  PushoutResult p1 = pushout_complexes(idb, idb);
  for (int k = 0; k <= B.top(); ++k)
    for (int x = 0; x < 3; ++x) {
      CHECK(p1.P->rank_at(k, x) == B.rank_at(k, x));
      CHECK(is_invertible(F3, p1.from_b.f[k][x]));
    }

  // B <- 0 -> C pushes out to the direct sum.
  ChainComplex Z = zero_complex(cat, F3);
  ChainComplex Cc = elementary_complex(cat, F3, 2, 0);
  ChainMap zb, zc;
  zb.src = &Z;
  zb.dst = &B;
  zc.src = &Z;
  zc.dst = &Cc;
  PushoutResult p2 = pushout_complexes(zb, zc);
  for (int k = 0; k <= p2.P->top(); ++k)
    for (int x = 0; x < 3; ++x)
      CHECK(p2.P->rank_at(k, x) == B.rank_at(k, x) + Cc.rank_at(k, x));

  // Mismatched sources are rejected.
  CHECK_THROWS_AS(pushout_complexes(idb, zc), std::invalid_argument);
}

TEST_CASE("pushout: glueing a free resolution leg onto E_K R over F_3") {
  static PermGroup S3 = PermGroup::symmetric(3);
  Perm t(std::vector<int>{1, 0, 2});
  Subgroup K = subgroup_from_perms(S3, {t});
  OrbitCat cat = build_orbit_cat(family_generate(S3, {K}));
  REQUIRE(cat.num_objects() == 2);
  Ring F3 = Ring::prime_field(3);
  const PermGroup& G = *cat.G;
  int nG = (int)G.order();

  // C = E_K R in degree 0; A = its restriction to the bottom object.
  RGammaModule EK = extension_functor(gm_trivial(cat, 1, F3));
  REQUIRE(EK.rank == std::vector<int>{3, 1});
  ChainComplex Cc = module_in_degree(EK, 0);
  RGammaModule A0 = atomic_module(restriction_to_aut(EK, 0));
  ChainComplex Ac = module_in_degree(A0, 0);

  // B = E_1 of the start of the bar-type resolution R[G]^2 -> R[G] of R.
  RGammaModule B0 = extension_functor(gm_free(cat, 0, F3, 1));
  RGammaModule B1 = extension_functor(gm_free(cat, 0, F3, 2));
  int a = G.index_of(G.gens[0]);
  int b = G.index_of(G.gens.size() > 1 ? G.gens[1] : G.gens[0]);
  SpMat d0(nG, 2 * nG);
  for (int j = 0; j < 2; ++j) {
    int gen = j == 0 ? a : b;
    for (int c = 0; c < nG; ++c) {
      int g = cat.mor[0][0][c];
      d0.set(cat.find_mor(0, 0, g), j * nG + c, 1);
      d0.set(cat.find_mor(0, 0, G.mul(g, gen)), j * nG + c, -1);
    }
  }
  d0.finish();
  ChainComplex Bc;
  Bc.cat = &cat;
  Bc.ring = F3;
  Bc.terms = {B0, B1};
  Bc.d.resize(2);
  Bc.d[1] = {d0, SpMat(0, 0)};
  REQUIRE(complex_check(Bc));
  REQUIRE(homology_at(Bc, 0, 0).rank == 1);  // coinvariants of R[G]

  // f: A -> B doubles the K-norm of each coset; g: A -> C is the counit.
  ChainMap f, g;
  f.src = &Ac;
  f.dst = &Bc;
  SpMat f0(nG, 3);
  for (int p = 0; p < nG; ++p)
    f0.set(p, cat.find_mor(0, 1, cat.mor[0][0][p]), 2);
  f0.finish();
  f.f = {{f0, SpMat(0, 0)}};
  g.src = &Ac;
  g.dst = &Cc;
  g.f = {{SpMat::identity(3), SpMat(1, 0)}};

  PushoutResult po = pushout_complexes(f, g);
  CHECK(po.P->rank_at(0, 0) == 6);
  CHECK(po.P->rank_at(0, 1) == 1);

  // H_0 of the pushout is the nonsplit extension of I_K R by E_1 R: as a
  // module it is the constant module, whose structure map is nonzero.
  HomologyModule H0 = homology_module(*po.P, 0);
  CHECK(H0.H->rank == std::vector<int>{1, 1});
  CHECK(!H0.H->act[0][1][0].is_zero());
  CHECK(find_isomorphism(*H0.H, constant_module(cat, F3)).has_value());

  // Universal property: the canonical cocone factors through the identity,
  // and a non-cocone has no factorization.
  auto w = pushout_factor(po, po.from_b, po.from_c);
  REQUIRE(w.has_value());
  for (int k = 0; k <= po.P->top(); ++k)
    for (int x = 0; x < 2; ++x)
      CHECK(la_equal(F3, w->f[k][x], SpMat::identity(po.P->rank_at(k, x))));
  ChainMap vzero;
  vzero.src = &Cc;
  vzero.dst = po.P.get();
  CHECK(!pushout_factor(po, po.from_b, vzero).has_value());
}

TEST_CASE("postnikov tower of a disk is trivial past degree zero") {
  static PermGroup S3 = PermGroup::symmetric(3);
  std::vector<std::vector<int>> gen_act;
  for (const auto& p : S3.gens) gen_act.push_back(p.img);
  GSimplicialComplex T = build_gcomplex(S3, 3, gen_act, {{0, 1, 2}});
  GSimplicialComplex B = barycentric_subdivision(T);
  OrbitCat cat = build_orbit_cat(family_generate(S3, {full_subgroup(S3)}));
  Ring F2 = Ring::prime_field(2);
  ChainComplex C = gcw_chain_complex(B, cat, F2).C;

  PostnikovTower tw = postnikov_tower(C);
  REQUIRE((int)tw.sections.size() == C.top() + 1);
  CHECK(tw.targets[0] != nullptr);
  for (int i = 1; i <= tw.window; ++i) {
    CHECK(tw.targets[i] == nullptr);       // H_i(C) = 0
    CHECK(tw.sections[i] == tw.sections[0]);
  }
  for (int x = 0; x < cat.num_objects(); ++x)
    for (int j = 0; j <= tw.window; ++j)
      CHECK(homology_at(*tw.sections[0], j, x) == homology_at(C, j, x));
}

TEST_CASE("postnikov tower of the C4 sphere square * S^0") {
  OrbitCat cat = c4_cat();
  Ring F2 = Ring::prime_field(2);
  GSimplicialComplex J = simplicial_join(c4_square(), c4_s0_sign());
  ChainComplex C = gcw_chain_complex(J, cat, F2).C;
  // S^2 at the bottom, S^0 at C2, empty at C4.
  REQUIRE(hdim_function(C, false) == DimFunction{2, 0, -1});

  PostnikovTower tw = postnikov_tower(C);
  REQUIRE(tw.window == 2);
  CHECK(tw.targets[0] != nullptr);
  CHECK(tw.targets[1] == nullptr);
  CHECK(tw.targets[2] != nullptr);
  CHECK(tw.alphas[2].src == tw.sections[1].get());
  for (int i = 0; i <= 2; ++i)
    for (int x = 0; x < cat.num_objects(); ++x)
      for (int j = 0; j <= 2; ++j) {
        FGAbGroup got = homology_at(*tw.sections[i], j, x);
        if (j <= i)
          CHECK(got == homology_at(C, j, x));
        else
          CHECK(got.is_trivial());
      }
}

TEST_CASE("postnikov tower of the octahedron over the cyclic family") {
  OctahedronComplex oct = octahedron_complex(Ring::prime_field(2));
  OrbitCat cat = cyclic_cat_of(oct);
  REQUIRE(cat.num_objects() == 5);
  Ring F2 = Ring::prime_field(2);
  ChainComplex C = gcw_chain_complex(*oct.X, cat, F2).C;
  for (int k = 0; k <= C.top(); ++k) REQUIRE(C.terms[k].free_blocks.has_value());

  PostnikovTower tw = postnikov_tower(C);
  for (int i = 0; i <= 2; ++i)
    for (int x = 0; x < cat.num_objects(); ++x)
      for (int j = 0; j <= 2; ++j) {
        FGAbGroup got = homology_at(*tw.sections[i], j, x);
        if (j <= i)
          CHECK(got == homology_at(C, j, x));
        else
          CHECK(got.is_trivial());
      }
  // H_1 vanishes everywhere, so the middle stage is skipped.
  CHECK(tw.targets[1] == nullptr);
  CHECK(tw.sections[1] == tw.sections[0]);
  // The base maps to every section by an honest chain map.
  for (int i = 0; i <= 2; ++i) {
    if (tw.to_section[i].f.empty()) continue;
    CHECK(chain_map_check(tw.to_section[i]));
  }
}
