#ifndef ORBIKIT_COMPLEX_HPP
#define ORBIKIT_COMPLEX_HPP

#include <optional>
#include <string>
#include <vector>

#include "orbikit/module.hpp"

namespace orbikit {

// Non-negatively graded chain complex of RGamma-modules, stored objectwise.
// d[k][x]: terms[k](x) -> terms[k-1](x) for k >= 1; d[0] is empty.
// The optional augmentation is a natural surjection C_0 -> constant module,
// stored as one row per object; it is required by joins and sphere checks.
struct ChainComplex {
  const OrbitCat* cat = nullptr;
  Ring ring = Ring::integers();
  std::vector<RGammaModule> terms;
  std::vector<std::vector<SpMat>> d;
  std::optional<std::vector<SpMat>> aug;

  int top() const { return (int)terms.size() - 1; }
  int rank_at(int k, int x) const {
    return k >= 0 && k <= top() ? terms[k].rank[x] : 0;
  }
  // Differential leaving degree k at object x (zero-sized outside the range).
  SpMat diff(int k, int x) const;
};

ChainComplex zero_complex(const OrbitCat& C, const Ring& R);
// Single module placed in the given degree (zero modules below).
ChainComplex module_in_degree(const RGammaModule& M, int k);
// R[G/cls] --id--> R[G/cls] in degrees k+1, k.
ChainComplex elementary_complex(const OrbitCat& C, const Ring& R, int cls, int k);
ChainComplex direct_sum_complex(const std::vector<ChainComplex>& parts);

// All-ones augmentation rows; valid for complexes of free-type modules whose
// degree-0 action matrices are column-permutation matrices.
void add_standard_augmentation(ChainComplex& C);
// Verifies: functoriality of terms, naturality of d, d.d = 0, and (when an
// augmentation is present) naturality, aug . d_1 = 0 and surjectivity.
bool complex_check(const ChainComplex& C, std::string* why = nullptr);

// Homology at degree k of C(x).  With reduced = true the augmented complex is
// used: degree 0 gains the augmentation as outgoing differential, and k = -1
// computes the cokernel of the augmentation (nonzero only for empty C(x)).
FGAbGroup homology_at(const ChainComplex& C, int k, int x, bool reduced = false);
// homology[x][k] for k = 0..top.
std::vector<std::vector<FGAbGroup>> homology(const ChainComplex& C, bool reduced = false);
// Induced Aut(x)-action on H_k(C(x)) over a field; for Integers the action on
// the free part is computed over the rationals.
GroupModule homology_action(const ChainComplex& C, int k, int x, bool reduced = false);

// Dimension functions (one value per object, -1 for empty).
using DimFunction = std::vector<int>;
DimFunction dim_function(const ChainComplex& C);
DimFunction hdim_function(const ChainComplex& C, bool reduced = true);
// d(K) <= d(H) whenever (H) <= (K) (subconjugate).
bool is_monotone(const OrbitCat& C, const DimFunction& d);
bool is_strictly_monotone(const OrbitCat& C, const DimFunction& d);
// Reduced homology concentrated in degree n[x] at every object.
bool is_moore(const ChainComplex& C, const DimFunction& n, std::string* witness = nullptr);
// Moore + reduced H_{n[x]} isomorphic to R at every object (rank 1, no torsion).
bool is_homology_sphere(const ChainComplex& C, const DimFunction& n,
                        std::string* witness = nullptr);
// Homology sphere with trivial Weyl action on the top homology.
bool is_oriented_sphere(const ChainComplex& C, const DimFunction& n,
                        std::string* witness = nullptr);

// Join tensor: reduced complex of the join, Sigma(aug(C) tensor aug(D)).
// (C v D)_k = C_k + D_k + sum_{i+j=k-1} C_i tensor D_j.  Both inputs must be
// augmented; the output is augmented.
ChainComplex join_tensor(const ChainComplex& Cc, const ChainComplex& Dc);

// Finiteness obstruction sigma(C) = sum (-1)^i [C_i] in K0Free.  Terms with no
// recorded free class contribute their splitting ranks and clear `exact`.
struct EulerClass {
  K0Free vec;
  bool exact = true;
};
EulerClass euler_free(const ChainComplex& C);

// Degreewise chain maps f[k][x]: src.terms[k](x) -> dst.terms[k](x).
struct ChainMap {
  const ChainComplex* src = nullptr;
  const ChainComplex* dst = nullptr;
  std::vector<std::vector<SpMat>> f;
};
ChainMap identity_chain_map(const ChainComplex& C);
bool chain_map_check(const ChainMap& f, std::string* why = nullptr);
// cone(f)_k = dst_k + src_{k-1}, boundary (x, y) -> (dx + f(y), -dy).
ChainComplex mapping_cone(const ChainMap& f);
// (Sigma C)_k = C_{k-1} with negated differentials.
ChainComplex suspension(const ChainComplex& C);
// True when the cone of f has vanishing homology everywhere.
bool quasi_iso_check(const ChainMap& f);

}  // namespace orbikit

#endif
