#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "orbikit/la.hpp"

using namespace orbikit;

namespace {

SpMat dense(int r, int c, std::vector<long long> v, long long den = 1) {
  SpMat m(r, c);
  m.den = den;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m.set(i, j, v[i * c + j]);
  m.finish();
  return m;
}

SpMat random_mat(std::mt19937_64& rng, int r, int c, int lo = -3, int hi = 3,
                 double density = 0.6) {
  SpMat m(r, c);
  std::uniform_int_distribution<int> val(lo, hi);
  std::uniform_real_distribution<double> d(0, 1);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j)
      if (d(rng) < density) m.set(i, j, val(rng));
  m.finish();
  return m;
}

}  // namespace

TEST_CASE("sparse matrix arithmetic basics") {
  SpMat a = dense(2, 3, {1, 2, 0, -1, 0, 3});
  SpMat b = dense(3, 2, {1, 0, 0, 1, 2, 2});
  SpMat ab = a * b;
  CHECK(ab == dense(2, 2, {1, 2, 5, 6}));
  CHECK(a.transpose().transpose() == a);
  CHECK((a + a) == a.scaled(2));
  CHECK((a - a).is_zero());
  SpMat h = SpMat::hstack({a, a});
  CHECK(h.cols == 6);
  CHECK(h.at(1, 5) == 3);
  SpMat k = dense(1, 2, {1, -1}).kron(dense(2, 1, {2, 3}));
  CHECK(k == dense(2, 2, {2, -2, 3, -3}));
}

TEST_CASE("rational denominators") {
  SpMat half = dense(1, 1, {1}, 2);
  SpMat third = dense(1, 1, {1}, 3);
  SpMat s = half + third;
  CHECK(s == dense(1, 1, {5}, 6));
  CHECK((half * third) == dense(1, 1, {1}, 6));
  Ring F5 = Ring::prime_field(5);
  SpMat r = half;
  r.reduce(F5);  // 1/2 = 3 mod 5
  CHECK(r.at(0, 0) == 3);
  CHECK(r.den == 1);
}

TEST_CASE("smith normal form on frozen examples") {
  CHECK(smith(SpMat::identity(4)).invariants ==
        std::vector<bigint>({1, 1, 1, 1}));
  // diag(4,6) has invariant factors (2,12).
  CHECK(smith(dense(2, 2, {4, 0, 0, 6})).invariants == std::vector<bigint>({2, 12}));
  // A classic example: [[2,4,4],[-6,6,12],[10,4,16]] ~ diag(2,2,d3).
  SmithResult s = smith(dense(3, 3, {2, 4, 4, -6, 6, 12, 10, 4, 16}));
  REQUIRE(s.rank() == 3);
  CHECK(s.invariants[0] == 2);
  CHECK(s.invariants[0] * s.invariants[1] * s.invariants[2] == 624);  // |det|
  for (int i = 0; i + 1 < 3; ++i) CHECK(s.invariants[i + 1] % s.invariants[i] == 0);
}

TEST_CASE("homology of the triangle (circle)") {
  // Vertices v0 v1 v2, edges e01 e02 e12; d1(e_ij) = v_j - v_i.
  SpMat d1 = dense(3, 3, {-1, -1, 0, 1, 0, -1, 0, 1, 1});
  SpMat d2(3, 0);
  Ring Z = Ring::integers();
  FGAbGroup h0 = homology_group(Z, SpMat(0, 3), d1);
  CHECK(h0.rank == 3 - 2);  // one component
  FGAbGroup h1 = homology_group(Z, d1, d2);
  CHECK(h1.rank == 1);
  CHECK(h1.torsion.empty());
}

TEST_CASE("torsion detection (RP^2 style)") {
  // 0 -> Z --2--> Z -> 0 in degrees 2,1: H_1 = Z/2.
  Ring Z = Ring::integers();
  FGAbGroup h = homology_group(Z, SpMat(0, 1), dense(1, 1, {2}));
  CHECK(h.rank == 0);
  REQUIRE(h.torsion.size() == 1);
  CHECK(h.torsion[0] == 2);
  Ring F2 = Ring::prime_field(2);
  FGAbGroup hf = homology_group(F2, SpMat(0, 1), dense(1, 1, {2}));
  CHECK(hf.rank == 1);
}

TEST_CASE("kernel and solve over all rings") {
  std::mt19937_64 rng(20260826);
  std::vector<Ring> rings = {Ring::integers(), Ring::rationals(), Ring::prime_field(2),
                             Ring::prime_field(3), Ring::prime_field(5)};
  for (int iter = 0; iter < 40; ++iter) {
    int r = 1 + (int)(rng() % 6), c = 1 + (int)(rng() % 6);
    SpMat A = random_mat(rng, r, c);
    for (const Ring& R : rings) {
      SpMat Ar = A;
      Ar.reduce(R);
      SpMat K = kernel(R, Ar);
      SpMat prod = Ar * K;
      prod.reduce(R);
      CHECK(prod.is_zero());
      if (R.is_field()) CHECK(K.cols == c - rank(R, Ar));
      // Solvable system: B in the column span by construction.
      SpMat X0 = random_mat(rng, c, 2, -2, 2);
      SpMat B = Ar * X0;
      auto X = solve(R, Ar, B);
      REQUIRE(X.has_value());
      SpMat diff = Ar * *X - B;
      diff.reduce(R);
      CHECK(diff.is_zero());
    }
  }
}

TEST_CASE("integral kernel is saturated") {
  // ker of [2 -2] over Z is spanned by (1,1), not (2,2).
  SpMat K = kernel(Ring::integers(), dense(1, 2, {2, -2}));
  REQUIRE(K.cols == 1);
  CHECK(std::llabs(K.at(0, 0)) == 1);
  CHECK(K.at(0, 0) == K.at(1, 0));
}

TEST_CASE("unsolvable integral system") {
  auto X = solve(Ring::integers(), dense(1, 1, {2}), dense(1, 1, {1}));
  CHECK(!X.has_value());
  auto XQ = solve(Ring::rationals(), dense(1, 1, {2}), dense(1, 1, {1}));
  REQUIRE(XQ.has_value());
  CHECK(*XQ == dense(1, 1, {1}, 2));
}

TEST_CASE("sparse paths agree with dense paths") {
  std::mt19937_64 rng(7);
  // Force the sparse branch by padding into a large zero frame.
  for (int iter = 0; iter < 5; ++iter) {
    SpMat small = random_mat(rng, 8, 8, -2, 2, 0.5);
    SpMat big(2000, 2000);
    for (const SpMat::Ent& e : small.ents) big.ents.push_back({e.r * 149, e.c * 139, e.v});
    // A scattering of unit entries elsewhere on fresh rows/cols.
    for (int i = 0; i < 300; ++i) big.ents.push_back({8 * 149 + i + 1, 8 * 139 + i + 1, 1});
    big.finish();
    SmithResult s_sparse = smith(big);
    // Dense reference on the same data.
    SpMat densified = big;
    densified.rows = big.rows;
    SmithResult s_small = smith(small);
    CHECK(s_sparse.rank() == s_small.rank() + 300);
    // Nontrivial invariants must coincide.
    std::vector<bigint> nt1, nt2;
    for (auto& d : s_sparse.invariants)
      if (d > 1) nt1.push_back(d);
    for (auto& d : s_small.invariants)
      if (d > 1) nt2.push_back(d);
    CHECK(nt1 == nt2);
    Ring F2 = Ring::prime_field(2);
    SpMat bigf = big, smallf = small;
    bigf.reduce(F2);
    smallf.reduce(F2);
    CHECK(rank(F2, bigf) == dense(0, 0, {}).rows + rank(F2, smallf) + 300);
  }
}

TEST_CASE("complement and express helpers") {
  Ring Q = Ring::rationals();
  SpMat S = dense(3, 1, {1, 1, 0});
  auto comp = complement_of_colspan(Q, 3, S);
  CHECK(comp.size() == 2);
  SpMat B = dense(3, 2, {0, 0, 1, 0, 0, 1});
  SpMat V = dense(3, 1, {2, 3, 4});  // = 2*S + 1*b0 + 4*b1
  auto X = express_mod(Q, S, B, V);
  REQUIRE(X.has_value());
  CHECK(*X == dense(2, 1, {1, 4}));
  CHECK(is_invertible(Ring::integers(), dense(2, 2, {1, 1, 0, -1})));
  CHECK(!is_invertible(Ring::integers(), dense(2, 2, {2, 0, 0, 1})));
  CHECK(is_invertible(Ring::prime_field(3), dense(2, 2, {2, 0, 0, 1})));
}
