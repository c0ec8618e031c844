#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "orbikit/orbit_cat.hpp"

using namespace orbikit;

namespace {

OrbitCat s5_cat() {
  static PermGroup S5 = PermGroup::symmetric(5);
  Subgroup C4 = subgroup_from_perms(S5, {Perm::from_cycles(5, "(1 2 3 4)")});
  Subgroup C2B = subgroup_from_perms(S5, {Perm::from_cycles(5, "(1 2)")});
  return build_orbit_cat(family_generate(S5, {C4, C2B}));
}

}  // namespace

TEST_CASE("S5 orbit category: objects and morphism counts") {
  OrbitCat C = s5_cat();
  REQUIRE(C.num_objects() == 4);
  std::vector<long long> orders;
  for (int i = 0; i < 4; ++i) orders.push_back(C.obj(i).order());
  CHECK(orders == std::vector<long long>({1, 2, 2, 4}));
  // |Mor(G/H, G/K)| = |{gK : H^g <= K}|; endomorphisms are Weyl-sized.
  for (int i = 0; i < 4; ++i) {
    CHECK(C.mor_count(i, i) == (int)C.weyl[i].W.order());
  }
  // Mor(G/C2B, G/C2B) has 6 elements for the transposition class.
  int c2b = -1;
  for (int i = 0; i < 4; ++i)
    if (C.obj(i).order() == 2 && normalizer(C.obj(i)).order() == 12) c2b = i;
  REQUIRE(c2b >= 0);
  CHECK(C.mor_count(c2b, c2b) == 6);
  // Morphisms only go from smaller to larger subconjugate classes.
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (C.obj(i).order() > C.obj(j).order()) CHECK(C.mor_count(i, j) == 0);
  // Trivial object maps onto every orbit: Mor(G/1, G/K) = G/K as a set.
  for (int j = 0; j < 4; ++j)
    CHECK(C.mor_count(0, j) == 120 / (int)C.obj(j).order());
}

TEST_CASE("composition is associative and unital") {
  OrbitCat C = s5_cat();
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      for (int m = 0; m < C.mor_count(i, j); ++m) {
        CHECK(C.compose(i, i, j, C.identity_mor(i), m) == m);
        CHECK(C.compose(i, j, j, m, C.identity_mor(j)) == m);
      }
      for (int k = j; k < 4; ++k)
        for (int l = k; l < 4; ++l) {
          if (!C.mor_count(i, j) || !C.mor_count(j, k) || !C.mor_count(k, l)) continue;
          // sample a few triples
          for (int t = 0; t < 8; ++t) {
            int m1 = (t * 7) % C.mor_count(i, j);
            int m2 = (t * 5) % C.mor_count(j, k);
            int m3 = (t * 3) % C.mor_count(k, l);
            int a = C.compose(i, k, l, C.compose(i, j, k, m1, m2), m3);
            int b = C.compose(i, j, l, m1, C.compose(j, k, l, m2, m3));
            CHECK(a == b);
          }
        }
    }
}

TEST_CASE("EI property: endomorphisms are invertible") {
  OrbitCat C = s5_cat();
  for (int i = 0; i < 4; ++i) {
    int n = C.mor_count(i, i);
    for (int m = 0; m < n; ++m) {
      bool has_inverse = false;
      for (int w = 0; w < n; ++w)
        if (C.compose(i, i, i, m, w) == C.identity_mor(i) &&
            C.compose(i, i, i, w, m) == C.identity_mor(i))
          has_inverse = true;
      CHECK(has_inverse);
    }
  }
}

TEST_CASE("Aut(G/H) is isomorphic to the Weyl group") {
  OrbitCat C = s5_cat();
  const PermGroup& G = *C.G;
  for (int i = 0; i < 4; ++i) {
    const WeylGroup& w = C.weyl[i];
    // n |-> f_n is surjective with kernel H: distinct cosets give distinct
    // automorphisms and the map is an anti-homomorphism-free correspondence:
    // f_m f_n = f_{nm} (first f_m then f_n gives coset m^{-1} n^{-1}).
    std::set<int> seen;
    for (int rep : w.coset_reps) seen.insert(C.aut_of_normalizer(i, rep));
    CHECK((int)seen.size() == C.mor_count(i, i));
    for (int a : w.N.elems)
      for (int b : w.N.elems) {
        if ((a * 13 + b) % 9 != 0) continue;  // sample
        int fa = C.aut_of_normalizer(i, a);
        int fb = C.aut_of_normalizer(i, b);
        CHECK(C.compose(i, i, i, fa, fb) == C.aut_of_normalizer(i, G.mul(b, a)));
      }
  }
}

TEST_CASE("lengths") {
  OrbitCat C = s5_cat();
  // 1 < C2A < C4 is the longest chain; transposition class sits at length 1.
  CHECK(C.length[0] == 0);
  CHECK(C.max_length() == 2);
  int c4 = 3;
  CHECK(C.obj(c4).order() == 4);
  CHECK(C.length[c4] == 2);
  auto order = C.objects_by_decreasing_length();
  CHECK(order.front() == c4);
  CHECK(order.back() == 0);
}

TEST_CASE("Aut acts freely on Mor(y, x)") {
  OrbitCat C = s5_cat();
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x) {
      if (!C.mor_count(y, x)) continue;
      MorOrbits o = mor_orbits_under_aut(C, y, x);  // throws if not free
      CHECK((int)o.reps.size() * C.mor_count(x, x) == C.mor_count(y, x));
      for (int m = 0; m < C.mor_count(y, x); ++m)
        CHECK(C.compose(y, x, x, o.reps[o.orbit_of[m]], o.witness[m]) == m);
    }
}
