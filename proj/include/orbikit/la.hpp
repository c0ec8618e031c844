#ifndef ORBIKIT_LA_HPP
#define ORBIKIT_LA_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orbikit/ring.hpp"

namespace orbikit {

using bigint = boost::multiprecision::cpp_int;

// Sparse matrix with exact entries.  The stored value of entry (r,c) is
// val/den; den is 1 except for rational matrices.  Triplets are kept sorted
// by (row, col) with no duplicates and no explicit zeros.
struct SpMat {
  struct Ent {
    int r = 0, c = 0;
    long long v = 0;
  };
  int rows = 0, cols = 0;
  long long den = 1;
  std::vector<Ent> ents;

  SpMat() = default;
  SpMat(int r, int c) : rows(r), cols(c) {}

  static SpMat zero(int r, int c) { return SpMat(r, c); }
  static SpMat identity(int n);

  std::size_t nnz() const { return ents.size(); }
  bool is_zero() const { return ents.empty(); }
  void set(int r, int c, long long v);  // build-time append (call finish() after)
  void finish();                        // sort, merge duplicates, drop zeros
  void normalize();                     // divide out gcd, den > 0
  long long at(int r, int c) const;     // numerator at entry (den applies)

  SpMat transpose() const;
  SpMat operator*(const SpMat& o) const;
  SpMat operator+(const SpMat& o) const;
  SpMat operator-(const SpMat& o) const;
  SpMat operator-() const;
  SpMat scaled(long long num, long long d = 1) const;
  bool operator==(const SpMat& o) const;  // exact equality of normalized values

  // Block operations.
  static SpMat hstack(const std::vector<SpMat>& parts);
  static SpMat vstack(const std::vector<SpMat>& parts);
  static SpMat diag_sum(const std::vector<SpMat>& parts);
  static SpMat from_blocks(const std::vector<std::vector<SpMat>>& blocks);
  SpMat kron(const SpMat& o) const;
  SpMat select_cols(const std::vector<int>& idx) const;
  SpMat select_rows(const std::vector<int>& idx) const;
  SpMat col(int j) const { return select_cols({j}); }

  // Reduce entries for the given ring (mod p for prime fields, den folded in).
  void reduce(const Ring& R);
  std::string to_string() const;
};

// Finitely generated abelian group Z^rank + sum Z/torsion[i]; over a field the
// torsion list is empty and rank is the dimension.
struct FGAbGroup {
  long long rank = 0;
  std::vector<bigint> torsion;  // each > 1, in divisibility order
  bool operator==(const FGAbGroup& o) const { return rank == o.rank && torsion == o.torsion; }
  bool operator!=(const FGAbGroup& o) const { return !(*this == o); }
  bool is_trivial() const { return rank == 0 && torsion.empty(); }
  std::string to_string() const;
};

struct SmithResult {
  std::vector<bigint> invariants;  // nonzero invariant factors, divisibility order
  int rank() const { return (int)invariants.size(); }
};

// Smith normal form invariant factors (sparse unit-pivot prepass + dense tail).
SmithResult smith(const SpMat& A);

// Rank over the given ring (Z and Q coincide).
int rank(const Ring& R, const SpMat& A);

// Basis of ker(A) as columns.  Over Z this is a lattice basis of the full
// integral kernel (saturated); over Q/F_p a vector-space basis.
SpMat kernel(const Ring& R, const SpMat& A);

// Solve A X = B over the ring (integral solution over Z); nullopt if none.
std::optional<SpMat> solve(const Ring& R, const SpMat& A, const SpMat& B);

// Z^{ambient} / column span of B (for fields: cokernel dimensions).
FGAbGroup cokernel_group(const Ring& R, int ambient, const SpMat& B);

// Homology at C_k of ... -> C_{k+1} --dk1--> C_k --dk--> C_{k-1} -> ...
FGAbGroup homology_group(const Ring& R, const SpMat& dk, const SpMat& dk1);

// Column-reduce S against itself and return indices of standard basis vectors
// of the ambient space extending colspan(S) to everything (field rings).
std::vector<int> complement_of_colspan(const Ring& R, int ambient, const SpMat& S);

// Reduce the columns of V modulo colspan(S) and express the result in terms of
// the columns of B, i.e. solve [S B] * [Y; X] = V and return X (field rings).
std::optional<SpMat> express_mod(const Ring& R, const SpMat& S, const SpMat& B, const SpMat& V);

// Pivot columns of A (greedy left-to-right rank-increasing set), field rings.
std::vector<int> pivot_columns(const Ring& R, const SpMat& A);

// True if A is square and invertible over R (det = +-1 over Z).
bool is_invertible(const Ring& R, const SpMat& A);

// Equality of matrices as maps over R (reduces both sides first).
bool la_equal(const Ring& R, const SpMat& A, const SpMat& B);

long long gcd_ll(long long a, long long b);
long long mod_pow(long long b, long long e, long long p);
long long mod_inv(long long a, long long p);

}  // namespace orbikit

#endif
