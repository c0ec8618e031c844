#ifndef ORBIKIT_IO_HPP
#define ORBIKIT_IO_HPP

#include <memory>
#include <string>

#include "json.hpp"
#include "orbikit/complex.hpp"
#include "orbikit/simplicial.hpp"

namespace orbikit {
namespace io {

using nlohmann::json;

// Permutations travel as arrays of cycles on points 1..n, e.g. [[1,2],[3,4]].
json perm_to_json(const Perm& p);
Perm perm_from_json(int degree, const json& j);

// Group format: { "degree": n, "generators": [[cycle,...],...] }.
json group_to_json(const PermGroup& G);
std::shared_ptr<PermGroup> group_from_json(const json& j);

// A subgroup is a generator list in the same cycle format.
json subgroup_to_json(const Subgroup& H);
Subgroup subgroup_from_json(const PermGroup& G, const json& j);

// A family file is an array of subgroup generator lists (the seeds).
Family family_from_json(const PermGroup& G, const json& j);

// Group + family + built orbit category with stable ownership.
struct CatBundle {
  std::shared_ptr<PermGroup> G;
  std::shared_ptr<OrbitCat> cat;
};
CatBundle cat_from_json(const json& group_j, const json& family_j);

json ring_to_json(const Ring& R);  // "Z", "Q", or "F<p>"
Ring ring_from_json(const json& j);

// Matrices are row-major arrays of decimal strings ("3", "-1/2", ...), exact.
json mat_to_json(const SpMat& A);
SpMat mat_from_json(const json& j);

json fgab_to_json(const FGAbGroup& g);

json module_to_json(const RGammaModule& M);
RGammaModule module_from_json(const OrbitCat& cat, const json& j);

json complex_to_json(const ChainComplex& C);
ChainComplex complex_from_json(const OrbitCat& cat, const json& j);

// GSimplicialComplex: vertex count, one vertex image array per generator of
// the group, and the maximal simplices (closed downward on load).
json gcomplex_to_json(const GSimplicialComplex& X);
GSimplicialComplex gcomplex_from_json(const PermGroup& G, const json& j);

// FNV-1a 64-bit hex digest, used for the report's inputs field.
std::string digest(const std::string& s);

}  // namespace io
}  // namespace orbikit

#endif
