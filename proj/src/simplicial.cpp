#include "orbikit/simplicial.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

namespace orbikit {

namespace {

std::string simplex_string(const std::vector<int>& s) {
  std::string out = "{";
  for (size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  return out + "}";
}

bool size_lex_less(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

// Parity (+1/-1) of the permutation that sorts v.
int sort_sign(std::vector<int> v) {
  int sign = 1;
  for (size_t i = 0; i < v.size(); ++i)
    for (size_t j = i + 1; j < v.size(); ++j)
      if (v[i] > v[j]) {
        std::swap(v[i], v[j]);
        sign = -sign;
      }
  return sign;
}

}  // namespace

int GSimplicialComplex::dim() const {
  int d = -1;
  for (const auto& s : simplices) d = std::max(d, (int)s.size() - 1);
  return d;
}

int GSimplicialComplex::count_of_dim(int k) const {
  int n = 0;
  for (const auto& s : simplices)
    if ((int)s.size() == k + 1) ++n;
  return n;
}

std::vector<std::vector<int>> GSimplicialComplex::simplices_of_dim(int k) const {
  std::vector<std::vector<int>> out;
  for (const auto& s : simplices)
    if ((int)s.size() == k + 1) out.push_back(s);
  return out;
}

std::vector<int> GSimplicialComplex::image(int g, const std::vector<int>& s) const {
  std::vector<int> t(s.size());
  for (size_t i = 0; i < s.size(); ++i) t[i] = vertex_act[g][s[i]];
  std::sort(t.begin(), t.end());
  return t;
}

void GSimplicialComplex::rebuild_index() {
  std::sort(simplices.begin(), simplices.end(), size_lex_less);
  index.clear();
  for (int i = 0; i < (int)simplices.size(); ++i) index[simplices[i]] = i;
}

bool GSimplicialComplex::check(std::string* why) const {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  for (const auto& s : simplices) {
    if (s.empty()) return fail("empty simplex");
    if (!std::is_sorted(s.begin(), s.end()) ||
        std::adjacent_find(s.begin(), s.end()) != s.end())
      return fail("simplex not strictly sorted: " + simplex_string(s));
    for (int v : s)
      if (v < 0 || v >= num_vertices) return fail("vertex out of range");
    if (s.size() > 1)
      for (size_t i = 0; i < s.size(); ++i) {
        std::vector<int> f = s;
        f.erase(f.begin() + i);
        if (!index.count(f))
          return fail("missing face " + simplex_string(f) + " of " + simplex_string(s));
      }
  }
  if (G != nullptr) {
    if ((int)vertex_act.size() != (int)G->elems.size())
      return fail("action table size mismatch");
    for (int g = 0; g < (int)vertex_act.size(); ++g)
      for (const auto& s : simplices)
        if (!index.count(image(g, s)))
          return fail("element " + std::to_string(g) + " does not preserve " +
                      simplex_string(s));
  }
  return true;
}

bool GSimplicialComplex::is_admissible(std::string* witness) const {
  if (G == nullptr) return true;
  for (const auto& s : simplices)
    for (int g = 0; g < (int)vertex_act.size(); ++g)
      if (image(g, s) == s)
        for (int v : s)
          if (vertex_act[g][v] != v) {
            if (witness)
              *witness = "element " + std::to_string(g) + " stabilizes " +
                         simplex_string(s) + " but moves vertex " + std::to_string(v);
            return false;
          }
  return true;
}

GSimplicialComplex build_gcomplex(const PermGroup& G, int num_vertices,
                                  const std::vector<std::vector<int>>& gen_act,
                                  const std::vector<std::vector<int>>& maximal) {
  if (gen_act.size() != G.gens.size())
    throw std::invalid_argument("build_gcomplex: one vertex map per generator required");
  GSimplicialComplex X;
  X.G = &G;
  X.num_vertices = num_vertices;

  // Extend the generator actions to every element; collisions across BFS
  // paths would mean the generator images do not define a homomorphism.
  int n = (int)G.elems.size();
  X.vertex_act.assign(n, {});
  std::vector<int> id(num_vertices);
  for (int v = 0; v < num_vertices; ++v) id[v] = v;
  X.vertex_act[0] = id;
  std::vector<int> queue = {0};
  std::vector<int> gen_idx;
  for (const auto& p : G.gens) gen_idx.push_back(G.index_of(p));
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    int g = queue[qi];
    for (size_t k = 0; k < gen_idx.size(); ++k) {
      int h = G.mul(gen_idx[k], g);
      std::vector<int> img(num_vertices);
      for (int v = 0; v < num_vertices; ++v) img[v] = gen_act[k][X.vertex_act[g][v]];
      if (X.vertex_act[h].empty()) {
        X.vertex_act[h] = img;
        queue.push_back(h);
      } else if (X.vertex_act[h] != img) {
        throw std::invalid_argument(
            "build_gcomplex: generator actions do not define a homomorphism");
      }
    }
  }
  if ((int)queue.size() != n)
    throw std::invalid_argument("build_gcomplex: generators do not generate the group");

  // Close the maximal simplices under faces and the group action.
  std::set<std::vector<int>> all;
  std::vector<std::vector<int>> work;
  for (auto s : maximal) {
    std::sort(s.begin(), s.end());
    if (all.insert(s).second) work.push_back(s);
  }
  for (size_t wi = 0; wi < work.size(); ++wi) {
    std::vector<int> s = work[wi];
    for (int g = 0; g < n; ++g) {
      auto t = X.image(g, s);
      if (all.insert(t).second) work.push_back(t);
    }
    if (s.size() > 1)
      for (size_t i = 0; i < s.size(); ++i) {
        std::vector<int> f = s;
        f.erase(f.begin() + i);
        if (all.insert(f).second) work.push_back(f);
      }
  }
  X.simplices.assign(all.begin(), all.end());
  X.rebuild_index();
  return X;
}

GSimplicialComplex barycentric_subdivision(const GSimplicialComplex& X) {
  GSimplicialComplex B;
  B.G = X.G;
  B.num_vertices = (int)X.simplices.size();
  if (X.G != nullptr) {
    B.vertex_act.assign(X.vertex_act.size(), std::vector<int>(B.num_vertices));
    for (int g = 0; g < (int)X.vertex_act.size(); ++g)
      for (int v = 0; v < B.num_vertices; ++v)
        B.vertex_act[g][v] = X.index.at(X.image(g, X.simplices[v]));
  }
  // Simplices of the subdivision are chains of proper inclusions; X.simplices
  // is sorted by (size, lex), so a chain read off by increasing dimension is
  // already sorted in the new vertex order.
  std::vector<std::vector<int>> chains;
  std::vector<int> chain;
  auto is_face = [&](int small, int big) {
    const auto& a = X.simplices[small];
    const auto& b = X.simplices[big];
    return a.size() < b.size() && std::includes(b.begin(), b.end(), a.begin(), a.end());
  };
  // DFS extending chains upward; every nonempty chain is a simplex.
  std::function<void(int)> extend = [&](int top) {
    chain.push_back(top);
    chains.push_back(chain);
    for (int next = top + 1; next < B.num_vertices; ++next)
      if (is_face(top, next)) extend(next);
    chain.pop_back();
  };
  for (int v = 0; v < B.num_vertices; ++v) extend(v);
  B.simplices = std::move(chains);
  B.rebuild_index();
  return B;
}

GSimplicialComplex fixed_subcomplex(const GSimplicialComplex& X, const Subgroup& H) {
  if (X.G == nullptr)
    throw std::invalid_argument("fixed_subcomplex: complex has no group action");
  GSimplicialComplex F;
  F.num_vertices = X.num_vertices;
  for (const auto& s : X.simplices) {
    bool fixed = true;
    for (int h : H.elems)
      for (int v : s)
        if (X.vertex_act[h][v] != v) {
          fixed = false;
          break;
        }
    if (fixed) F.simplices.push_back(s);
  }
  F.rebuild_index();
  return F;
}

GSimplicialComplex simplicial_join(const GSimplicialComplex& X,
                                   const GSimplicialComplex& Y) {
  if (X.G != Y.G)
    throw std::invalid_argument("simplicial_join: the factors must share the group");
  GSimplicialComplex J;
  J.G = X.G;
  J.num_vertices = X.num_vertices + Y.num_vertices;
  if (J.G != nullptr) {
    J.vertex_act.assign(X.vertex_act.size(), std::vector<int>(J.num_vertices));
    for (int g = 0; g < (int)X.vertex_act.size(); ++g) {
      for (int v = 0; v < X.num_vertices; ++v) J.vertex_act[g][v] = X.vertex_act[g][v];
      for (int v = 0; v < Y.num_vertices; ++v)
        J.vertex_act[g][X.num_vertices + v] = X.num_vertices + Y.vertex_act[g][v];
    }
  }
  for (const auto& s : X.simplices) J.simplices.push_back(s);
  for (const auto& t : Y.simplices) {
    std::vector<int> ts;
    for (int v : t) ts.push_back(X.num_vertices + v);
    J.simplices.push_back(ts);
    for (const auto& s : X.simplices) {
      std::vector<int> u = s;
      u.insert(u.end(), ts.begin(), ts.end());
      J.simplices.push_back(u);
    }
  }
  J.rebuild_index();
  return J;
}

namespace {

// Boundary matrix from k-simplices to (k-1)-simplices of a plain list, with
// signs by position in the sorted vertex list.
SpMat plain_boundary(const std::vector<std::vector<int>>& lower,
                     const std::vector<std::vector<int>>& upper) {
  std::map<std::vector<int>, int> pos;
  for (int i = 0; i < (int)lower.size(); ++i) pos[lower[i]] = i;
  SpMat d((int)lower.size(), (int)upper.size());
  for (int j = 0; j < (int)upper.size(); ++j) {
    const auto& s = upper[j];
    for (size_t i = 0; i < s.size(); ++i) {
      std::vector<int> f = s;
      f.erase(f.begin() + i);
      d.set(pos.at(f), j, (i % 2 == 0) ? 1 : -1);
    }
  }
  d.finish();
  return d;
}

}  // namespace

std::vector<FGAbGroup> simplicial_homology(const GSimplicialComplex& X, const Ring& R,
                                           bool reduced) {
  int d = X.dim();
  std::vector<FGAbGroup> out;
  if (d < 0) return out;
  std::vector<std::vector<std::vector<int>>> by_dim(d + 1);
  for (int k = 0; k <= d; ++k) by_dim[k] = X.simplices_of_dim(k);
  std::vector<SpMat> diff(d + 1);  // diff[k]: C_k -> C_{k-1}
  if (reduced) {
    SpMat aug(1, (int)by_dim[0].size());
    for (int j = 0; j < aug.cols; ++j) aug.set(0, j, 1);
    aug.finish();
    diff[0] = aug;
  } else {
    diff[0] = SpMat::zero(0, (int)by_dim[0].size());
  }
  for (int k = 1; k <= d; ++k) diff[k] = plain_boundary(by_dim[k - 1], by_dim[k]);
  for (int k = 0; k <= d; ++k) {
    SpMat in = k < d ? diff[k + 1] : SpMat::zero((int)by_dim[k].size(), 0);
    out.push_back(homology_group(R, diff[k], in));
  }
  return out;
}

GcwComplex gcw_chain_complex(const GSimplicialComplex& X, const OrbitCat& cat,
                             const Ring& R, bool strict) {
  if (X.G != cat.G)
    throw std::invalid_argument("gcw_chain_complex: complex and category group differ");
  std::string why;
  if (!X.check(&why)) throw std::invalid_argument("gcw_chain_complex: " + why);
  if (!X.is_admissible(&why))
    throw std::invalid_argument("gcw_chain_complex: not admissible: " + why);
  const PermGroup& G = *X.G;
  int nobj = cat.num_objects();
  int dim = X.dim();

  GcwComplex out;
  out.C.cat = &cat;
  out.C.ring = R;
  out.orbits.resize(dim + 1);

  // Per degree and object: ordered basis of fixed simplices, each recorded by
  // its position in X.simplices, plus the orientation sign that transports
  // the orbit representative's orientation (sign of g on the rep's sorted
  // list).  Admissibility makes the sign independent of the coset chosen.
  struct BasisEntry {
    int simplex;  // index in X.simplices
    int sign;
  };
  std::vector<std::vector<std::vector<BasisEntry>>> basis(dim + 1);
  std::vector<std::vector<std::map<int, int>>> basis_pos(dim + 1);

  auto act_sign = [&](int g, const std::vector<int>& sorted) {
    std::vector<int> img(sorted.size());
    for (size_t i = 0; i < sorted.size(); ++i) img[i] = X.vertex_act[g][sorted[i]];
    return sort_sign(img);
  };

  for (int k = 0; k <= dim; ++k) {
    auto cells = X.simplices_of_dim(k);
    std::set<std::vector<int>> seen;
    for (const auto& s0 : cells) {
      if (seen.count(s0)) continue;
      std::vector<int> stab_elems;
      for (int g = 0; g < (int)G.elems.size(); ++g) {
        auto t = X.image(g, s0);
        seen.insert(t);
        if (t == s0) stab_elems.push_back(g);
      }
      Subgroup stab = subgroup_from_elements(G, stab_elems);
      int w = 0;
      Subgroup canon = canonical_conjugate(stab, &w);
      // stab(u.s0) = stab^{u^{-1}}, so acting by w^{-1} moves the stabilizer
      // to the canonical representative.
      std::vector<int> rep = X.image(G.inv(w), s0);
      GcwOrbit orbit;
      orbit.rep = rep;
      orbit.stab = canon;
      auto cls = cat.F.class_of(canon);
      if (cls) {
        orbit.cls = cls->first;
      } else if (strict) {
        throw std::invalid_argument(
            "gcw_chain_complex: stabilizer of simplex " + simplex_string(s0) +
            " (order " + std::to_string(canon.order()) + ") is not in the family");
      }
      out.orbits[k].push_back(orbit);
    }

    basis[k].resize(nobj);
    basis_pos[k].resize(nobj);
    for (int i = 0; i < nobj; ++i) {
      for (const auto& orbit : out.orbits[k]) {
        std::vector<int> coset_elems;
        if (orbit.cls >= 0) {
          coset_elems = cat.mor[i][orbit.cls];
        } else {
          for (int r : left_coset_reps(orbit.stab))
            if (is_subgroup_of(conjugate_subgroup(cat.obj(i), r), orbit.stab))
              coset_elems.push_back(r);
        }
        for (int g : coset_elems) {
          BasisEntry e;
          e.simplex = X.index.at(X.image(g, orbit.rep));
          e.sign = act_sign(g, orbit.rep);
          basis_pos[k][i][e.simplex] = (int)basis[k][i].size();
          basis[k][i].push_back(e);
        }
      }
    }
  }

  // Terms: structure map for f = gK: i -> j sends the fixed simplex basis of
  // value(j) to g-translates; in the transported orientations the matrix is a
  // plain 0/1 permutation-style matrix.
  for (int k = 0; k <= dim; ++k) {
    RGammaModule M;
    M.cat = &cat;
    M.ring = R;
    M.rank.resize(nobj);
    for (int i = 0; i < nobj; ++i) M.rank[i] = (int)basis[k][i].size();
    M.act.assign(nobj, std::vector<std::vector<SpMat>>(nobj));
    for (int i = 0; i < nobj; ++i)
      for (int j = 0; j < nobj; ++j) {
        M.act[i][j].resize(cat.mor_count(i, j));
        for (int m = 0; m < cat.mor_count(i, j); ++m) {
          int g = cat.mor[i][j][m];
          SpMat A(M.rank[i], M.rank[j]);
          for (int q = 0; q < M.rank[j]; ++q) {
            const auto& src = X.simplices[basis[k][j][q].simplex];
            std::vector<int> img = X.image(g, src);
            int p = basis_pos[k][i].at(X.index.at(img));
            // Transported orientations: sign(g on src) relative to the two
            // basis signs.
            int sg = basis[k][j][q].sign * act_sign(g, src) * basis[k][i][p].sign;
            A.set(p, q, sg);
          }
          A.finish();
          M.act[i][j][m] = A;
        }
      }
    bool all_free = true;
    for (const auto& orbit : out.orbits[k]) all_free = all_free && orbit.cls >= 0;
    if (all_free) {
      std::vector<int> classes;
      for (const auto& orbit : out.orbits[k]) classes.push_back(orbit.cls);
      M.free_blocks = classes;
      std::vector<long long> k0(nobj, 0);
      for (int c : classes) ++k0[c];
      M.k0 = k0;
    }
    out.C.terms.push_back(std::move(M));
  }

  // Signed boundaries in the transported-orientation bases.
  out.C.d.resize(dim + 1);
  for (int k = 1; k <= dim; ++k) {
    out.C.d[k].resize(nobj);
    for (int i = 0; i < nobj; ++i) {
      SpMat D((int)basis[k - 1][i].size(), (int)basis[k][i].size());
      for (int q = 0; q < (int)basis[k][i].size(); ++q) {
        const auto& e = basis[k][i][q];
        const auto& s = X.simplices[e.simplex];
        for (size_t f = 0; f < s.size(); ++f) {
          std::vector<int> face = s;
          face.erase(face.begin() + f);
          int p = basis_pos[k - 1][i].at(X.index.at(face));
          int sg = e.sign * ((f % 2 == 0) ? 1 : -1) * basis[k - 1][i][p].sign;
          D.set(p, q, sg);
        }
      }
      D.finish();
      out.C.d[k][i] = D;
    }
  }
  bool every_object_inhabited = true;
  if (dim >= 0)
    for (int i = 0; i < nobj; ++i)
      every_object_inhabited = every_object_inhabited && out.C.terms[0].rank[i] > 0;
  if (dim >= 0 && every_object_inhabited) add_standard_augmentation(out.C);
  return out;
}

OctahedronComplex octahedron_complex(const Ring& R) {
  OctahedronComplex oct;
  oct.group = std::make_shared<PermGroup>();
  // S_4 generated by the diagonal permutations of the 90-degree z-rotation
  // (the 4-cycle 0->3->1->2) and the 120-degree rotation about the diagonal
  // (1,1,1) (the 3-cycle 1->3->2), acting on the four cube diagonals.
  Perm a(std::vector<int>{3, 2, 0, 1});
  Perm b(std::vector<int>{0, 3, 1, 2});
  *oct.group = PermGroup::generated(4, {a, b});
  if (oct.group->order() != 24)
    throw std::logic_error("octahedron_complex: rotation generators broken");

  // Octahedron vertices 0..5 = +x,-x,+y,-y,+z,-z; the two generators act by
  // the recorded rotation tables.
  std::vector<std::vector<int>> gen_act = {{2, 3, 1, 0, 4, 5}, {2, 3, 4, 5, 0, 1}};
  std::vector<std::vector<int>> faces;
  for (int sx = 0; sx <= 1; ++sx)
    for (int sy = 0; sy <= 1; ++sy)
      for (int sz = 0; sz <= 1; ++sz) faces.push_back({sx, 2 + sy, 4 + sz});
  GSimplicialComplex octa = build_gcomplex(*oct.group, 6, gen_act, faces);
  oct.X = std::make_shared<GSimplicialComplex>(barycentric_subdivision(octa));

  // Family of cyclic 2-subgroups: the paper's tree has the four vertices
  // 1, C_2 (transpositions), C_2 (double transpositions), C_4.
  Subgroup c4 = subgroup_from_perms(*oct.group, {a});
  Subgroup c2t = subgroup_from_perms(*oct.group, {Perm(std::vector<int>{1, 0, 2, 3})});
  Family F = family_generate(*oct.group, {c4, c2t});
  oct.cat = std::make_shared<OrbitCat>(build_orbit_cat(F));
  oct.gcw = gcw_chain_complex(*oct.X, *oct.cat, R, /*strict=*/false);
  oct.gcw.C.cat = oct.cat.get();
  return oct;
}

}  // namespace orbikit
