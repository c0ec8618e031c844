#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "orbikit/complex.hpp"

using namespace orbikit;

namespace {

// Trivial group: one object, modules are plain R-modules.
OrbitCat pt_cat() {
  static PermGroup T = PermGroup::symmetric(1);
  return build_orbit_cat(family_generate(T, {trivial_subgroup(T)}));
}

// C2 with both subgroup classes.
OrbitCat c2_cat() {
  static PermGroup C2 = PermGroup::symmetric(2);
  return build_orbit_cat(family_generate(C2, {full_subgroup(C2)}));
}

OrbitCat s3_cat() {
  static PermGroup S3 = PermGroup::symmetric(3);
  return build_orbit_cat(family_generate(S3, {full_subgroup(S3)}));
}

// n+1 points in degree 0 (an n-point "wedge base"), augmented.
ChainComplex points(const OrbitCat& C, const Ring& R, int npts) {
  std::vector<int> blocks;
  int gcls = C.num_objects() - 1;  // the class of G itself (full family)
  for (int i = 0; i < npts; ++i) blocks.push_back(gcls);
  ChainComplex out = module_in_degree(free_module_blocks(C, R, blocks), 0);
  add_standard_augmentation(out);
  return out;
}

// The empty complex (zero in degree 0) with its empty augmentation.
ChainComplex empty_complex(const OrbitCat& C, const Ring& R) {
  ChainComplex out = zero_complex(C, R);
  add_standard_augmentation(out);
  return out;
}

// Random augmentable free complex: free module in degree 0 plus elementary
// complexes in higher degrees.
ChainComplex random_free_complex(const OrbitCat& C, const Ring& R, std::mt19937_64& rng) {
  std::vector<ChainComplex> parts;
  std::vector<int> blocks;
  int nb = 1 + (int)(rng() % 2);
  for (int i = 0; i < nb; ++i) blocks.push_back((int)(rng() % C.num_objects()));
  parts.push_back(module_in_degree(free_module_blocks(C, R, blocks), 0));
  int ne = (int)(rng() % 3);
  for (int i = 0; i < ne; ++i)
    parts.push_back(
        elementary_complex(C, R, (int)(rng() % C.num_objects()), 1 + (int)(rng() % 3)));
  ChainComplex out = direct_sum_complex(parts);
  add_standard_augmentation(out);
  return out;
}

K0Free sigma_join(const OrbitCat& C, const K0Free& a, const K0Free& b) {
  // sigma(C) + sigma(D) - sigma(C) . sigma(D)
  K0Free p = k0_multiply(C, a, b);
  K0Free out = k0_zero(C);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i] - p[i];
  return out;
}

}  // namespace

TEST_CASE("spheres from iterated joins of S^0 at a point") {
  OrbitCat C = pt_cat();
  Ring Z = Ring::integers();
  ChainComplex S = points(C, Z, 2);  // S^0
  REQUIRE(complex_check(S));
  ChainComplex J = S;
  for (int dim = 0; dim <= 3; ++dim) {
    CHECK(is_oriented_sphere(J, {dim}));
    CHECK(hdim_function(J) == DimFunction{dim});
    // Unreduced homology: rank 1 in degrees 0 and dim.
    auto H = homology(J);
    for (int k = 0; k <= J.top(); ++k) {
      long long expect = 0;
      if (dim == 0)
        expect = k == 0 ? 2 : 0;
      else if (k == 0 || k == dim)
        expect = 1;
      CHECK(H[0][k].rank == expect);
      CHECK(H[0][k].torsion.empty());
    }
    if (dim < 3) {
      J = join_tensor(J, S);
      REQUIRE(complex_check(J));
    }
  }
}

TEST_CASE("join with the empty sphere complex is the identity up to homology") {
  OrbitCat C = s3_cat();
  Ring Z = Ring::integers();
  ChainComplex S = points(C, Z, 3);
  ChainComplex E = empty_complex(C, Z);
  // The empty complex is the (-1)-sphere: reduced homology R in degree -1.
  for (int x = 0; x < C.num_objects(); ++x) {
    CHECK(homology_at(E, -1, x, true).rank == 1);
    CHECK(homology_at(E, 0, x, true).is_trivial());
  }
  CHECK(is_homology_sphere(E, DimFunction(C.num_objects(), -1)));
  ChainComplex J = join_tensor(S, E);
  REQUIRE(complex_check(J));
  for (int x = 0; x < C.num_objects(); ++x)
    for (int k = -1; k <= S.top(); ++k)
      CHECK(homology_at(J, k, x, true) == homology_at(S, k, x, true));
}

TEST_CASE("join with S^0 suspends: degrees shift by one") {
  OrbitCat C = c2_cat();
  Ring Z = Ring::integers();
  ChainComplex S0 = points(C, Z, 2);  // two fixed points
  // A based complex with interesting homology: the free orbit as S^0 with the
  // antipodal action.
  ChainComplex A = module_in_degree(free_module(C, Z, 0), 0);
  add_standard_augmentation(A);
  ChainComplex J = join_tensor(A, S0);
  REQUIRE(complex_check(J));
  for (int x = 0; x < C.num_objects(); ++x)
    for (int k = 0; k <= A.top(); ++k) {
      FGAbGroup a = homology_at(A, k, x, true);
      FGAbGroup b = homology_at(J, k + 1, x, true);
      CHECK(a == b);
    }
}

TEST_CASE("free C2-sphere: unoriented S^0 joins to an oriented S^1") {
  OrbitCat C = c2_cat();
  Ring Q = Ring::rationals();
  // X = S^0 with the two points swapped: chains = R[C2/1] in degree 0.
  ChainComplex X = module_in_degree(free_module(C, Q, 0), 0);
  add_standard_augmentation(X);
  REQUIRE(complex_check(X));
  // Fixed sets: S^0 at the trivial subgroup, empty at C2.
  DimFunction n0 = {0, -1};
  CHECK(is_homology_sphere(X, n0));
  CHECK_FALSE(is_oriented_sphere(X, n0));  // the swap acts by -1 on reduced H_0
  GroupModule H = homology_action(X, 0, 0, true);
  REQUIRE(H.rank == 1);
  bool has_sign = false;
  for (const SpMat& a : H.act)
    if (la_equal(Q, a, SpMat::identity(1).scaled(-1))) has_sign = true;
  CHECK(has_sign);
  // The join X * X is S^1 with a free rotation action: now oriented.
  ChainComplex J = join_tensor(X, X);
  REQUIRE(complex_check(J));
  DimFunction n1 = {1, -1};
  CHECK(is_oriented_sphere(J, n1));
  CHECK(is_monotone(C, n1));
}

TEST_CASE("monotonicity of dimension functions") {
  OrbitCat C = s3_cat();  // objects: 1, C2, C3, S3
  CHECK(is_monotone(C, {2, 1, 1, 0}));
  CHECK(is_strictly_monotone(C, {2, 1, 1, 0}));
  CHECK(is_monotone(C, {2, 1, 1, 1}));
  CHECK_FALSE(is_strictly_monotone(C, {2, 1, 1, 1}));  // C2 < S3 but equal values
  CHECK_FALSE(is_monotone(C, {0, 1, 0, 0}));
}

TEST_CASE("constant complex is a Moore complex in degree zero") {
  OrbitCat C = s3_cat();
  ChainComplex K = module_in_degree(constant_module(C, Ring::integers()), 0);
  std::vector<SpMat> aug;
  for (int x = 0; x < C.num_objects(); ++x) aug.push_back(SpMat::identity(1));
  K.aug = aug;
  REQUIRE(complex_check(K));
  // Reduced homology vanishes everywhere; Moore for any n with empty target.
  CHECK(is_moore(K, DimFunction(C.num_objects(), 0)));
  CHECK_FALSE(is_homology_sphere(K, DimFunction(C.num_objects(), 0)));
}

TEST_CASE("euler characteristic equals homology euler characteristic over fields") {
  OrbitCat C = s3_cat();
  Ring F2 = Ring::prime_field(2);
  std::mt19937_64 rng(9);
  for (int t = 0; t < 5; ++t) {
    ChainComplex X = random_free_complex(C, F2, rng);
    auto H = homology(X);
    for (int x = 0; x < C.num_objects(); ++x) {
      long long chi_c = 0, chi_h = 0;
      for (int k = 0; k <= X.top(); ++k) {
        long long s = k % 2 == 0 ? 1 : -1;
        chi_c += s * X.terms[k].rank[x];
        chi_h += s * H[x][k].rank;
      }
      CHECK(chi_c == chi_h);
    }
  }
}

TEST_CASE("sigma of joins satisfies the K0 product formula") {
  OrbitCat C = s3_cat();
  Ring Z = Ring::integers();
  std::mt19937_64 rng(13);
  for (int t = 0; t < 10; ++t) {
    ChainComplex A = random_free_complex(C, Z, rng);
    ChainComplex B = random_free_complex(C, Z, rng);
    ChainComplex J = join_tensor(A, B);
    EulerClass sa = euler_free(A), sb = euler_free(B), sj = euler_free(J);
    REQUIRE(sa.exact);
    REQUIRE(sj.exact);
    CHECK(sj.vec == sigma_join(C, sa.vec, sb.vec));
  }
  // Elementary complexes contribute zero.
  EulerClass e = euler_free(elementary_complex(C, Z, 1, 2));
  CHECK(e.vec == k0_zero(C));
  CHECK(e.exact);
}

TEST_CASE("sigma of a suspension is negated; non-free terms are flagged") {
  OrbitCat C = s3_cat();
  Ring Z = Ring::integers();
  std::mt19937_64 rng(17);
  ChainComplex A = random_free_complex(C, Z, rng);
  EulerClass sa = euler_free(A);
  EulerClass ss = euler_free(suspension(A));
  for (std::size_t i = 0; i < sa.vec.size(); ++i) CHECK(ss.vec[i] == -sa.vec[i]);
  CHECK(ss.exact);
  ChainComplex I = module_in_degree(atomic_module(gm_trivial(C, 0, Z)), 0);
  EulerClass si = euler_free(I);
  CHECK_FALSE(si.exact);
  CHECK(si.vec[0] == 1);
}

TEST_CASE("mapping cones: identity is acyclic, zero map sums homologies") {
  OrbitCat C = s3_cat();
  Ring Z = Ring::integers();
  std::mt19937_64 rng(19);
  ChainComplex A = random_free_complex(C, Z, rng);
  ChainMap id = identity_chain_map(A);
  REQUIRE(chain_map_check(id));
  CHECK(quasi_iso_check(id));
  ChainComplex B = random_free_complex(C, Z, rng);
  ChainMap zero;
  zero.src = &A;
  zero.dst = &B;
  REQUIRE(chain_map_check(zero));
  ChainComplex cone = mapping_cone(zero);
  REQUIRE(complex_check(cone));
  for (int x = 0; x < C.num_objects(); ++x)
    for (int k = 0; k <= cone.top(); ++k) {
      FGAbGroup hb = homology_at(B, k, x);
      FGAbGroup ha = homology_at(A, k - 1, x);
      FGAbGroup hc = homology_at(cone, k, x);
      CHECK(hc.rank == hb.rank + ha.rank);
    }
}

TEST_CASE("torsion in integral homology and the mod-p rank inequality") {
  OrbitCat C = pt_cat();
  Ring Z = Ring::integers();
  // R --2--> R: H_0 = Z/2, H_1 = 0.
  ChainComplex X;
  X.cat = &C;
  X.ring = Z;
  X.terms = {free_module(C, Z, 0), free_module(C, Z, 0)};
  X.d = {{}, {SpMat::identity(1).scaled(2)}};
  REQUIRE(complex_check(X));
  FGAbGroup h0 = homology_at(X, 0, 0);
  CHECK(h0.rank == 0);
  REQUIRE(h0.torsion.size() == 1);
  CHECK(h0.torsion[0] == 2);
  CHECK(homology_at(X, 1, 0).is_trivial());
  // Over F_2 the ranks jump to 1 in both degrees (>= the integral free ranks).
  ChainComplex X2 = X;
  X2.ring = Ring::prime_field(2);
  for (auto& t : X2.terms) t.ring = X2.ring;
  CHECK(homology_at(X2, 0, 0).rank == 1);
  CHECK(homology_at(X2, 1, 0).rank == 1);
}

TEST_CASE("homology of free module complexes is natural in the category") {
  OrbitCat C = s3_cat();
  // One-step complex R[G/1] --(1 - g)--> R[G/1] over F2 at the S3 level is not
  // a chain complex choice we make here; instead check that homology_action
  // returns a verified group module on a join sphere.
  Ring Q = Ring::rationals();
  ChainComplex S = points(C, Q, 2);
  ChainComplex J = join_tensor(S, S);
  for (int x = 0; x < C.num_objects(); ++x) {
    GroupModule H = homology_action(J, 1, x, true);
    CHECK(H.check());
    CHECK(H.rank == 1);
  }
}
