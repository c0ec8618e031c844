#include "orbikit/orbit_cat.hpp"

#include <algorithm>
#include <stdexcept>

namespace orbikit {

int OrbitCat::find_mor(int i, int j, int g) const {
  int rep = coset_rep(obj(j), g);
  auto it = morpos[i][j].find(rep);
  if (it == morpos[i][j].end()) throw std::out_of_range("find_mor: not a morphism");
  return it->second;
}

int OrbitCat::compose(int i, int j, int k, int m1, int m2) const {
  int g = G->mul(mor[i][j][m1], mor[j][k][m2]);
  return find_mor(i, k, g);
}

int OrbitCat::aut_of_normalizer(int i, int n) const {
  return find_mor(i, i, G->inv(n));
}

int OrbitCat::max_length() const {
  int m = 0;
  for (int l : length) m = std::max(m, l);
  return m;
}

std::vector<int> OrbitCat::objects_by_decreasing_length() const {
  std::vector<int> idx(num_objects());
  for (int i = 0; i < num_objects(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return length[a] > length[b]; });
  return idx;
}

OrbitCat build_orbit_cat(const Family& F) {
  OrbitCat C;
  C.G = F.G;
  C.F = F;
  int n = C.num_objects();
  const PermGroup& G = *C.G;
  C.mor.assign(n, std::vector<std::vector<int>>(n));
  C.morpos.assign(n, std::vector<std::map<int, int>>(n));
  for (int j = 0; j < n; ++j) {
    const Subgroup& K = C.obj(j);
    std::vector<int> reps = left_coset_reps(K);
    for (int i = 0; i < n; ++i) {
      const Subgroup& H = C.obj(i);
      if (H.order() > K.order()) continue;
      for (int g : reps) {
        bool ok = true;
        for (int e : H.gens)
          if (!K.contains(G.conj(e, g))) {
            ok = false;
            break;
          }
        if (!ok) continue;
        C.morpos[i][j][g] = (int)C.mor[i][j].size();
        C.mor[i][j].push_back(g);
      }
    }
  }
  // Lengths: longest strictly increasing subconjugacy chain ending at x.
  C.length.assign(n, 0);
  for (int j = 0; j < n; ++j)  // objects sorted by |H|, so one forward pass works
    for (int i = 0; i < j + 1; ++i) {
      if (i == j || C.mor[i][j].empty()) continue;
      if (C.obj(i).order() == C.obj(j).order()) continue;  // same class impossible here
      C.length[j] = std::max(C.length[j], C.length[i] + 1);
    }
  C.weyl.reserve(n);
  for (int i = 0; i < n; ++i) C.weyl.push_back(weyl_group(C.obj(i)));
  return C;
}

MorOrbits mor_orbits_under_aut(const OrbitCat& C, int y, int x) {
  int m = C.mor_count(y, x);
  int a = C.mor_count(x, x);
  MorOrbits out;
  out.orbit_of.assign(m, -1);
  out.witness.assign(m, -1);
  for (int r = 0; r < m; ++r) {
    if (out.orbit_of[r] >= 0) continue;
    int orb = (int)out.reps.size();
    out.reps.push_back(r);
    for (int t = 0; t < a; ++t) {
      int im = C.compose(y, x, x, r, t);
      if (out.orbit_of[im] >= 0 && out.orbit_of[im] != orb)
        throw std::logic_error("mor_orbits: action not free");
      if (out.orbit_of[im] == orb && out.witness[im] != t && out.witness[im] >= 0)
        throw std::logic_error("mor_orbits: action not free");
      out.orbit_of[im] = orb;
      out.witness[im] = t;
    }
  }
  return out;
}

}  // namespace orbikit
