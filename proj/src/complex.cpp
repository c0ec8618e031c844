#include "orbikit/complex.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace orbikit {

namespace {

Ring field_view(const Ring& R) { return R.is_field() ? R : Ring::rationals(); }

// Differential leaving degree k, with the augmentation as d_0 when reduced.
SpMat out_diff(const ChainComplex& C, int k, int x, bool reduced) {
  if (k == 0 && reduced) {
    if (!C.aug) throw std::invalid_argument("reduced homology needs an augmentation");
    return (*C.aug)[x];
  }
  return C.diff(k, x);
}

}  // namespace

SpMat ChainComplex::diff(int k, int x) const {
  if (k >= 1 && k <= top()) return d[k][x];
  return SpMat(rank_at(k - 1, x), rank_at(k, x));
}

ChainComplex zero_complex(const OrbitCat& C, const Ring& R) {
  ChainComplex out;
  out.cat = &C;
  out.ring = R;
  out.terms.push_back(zero_module(C, R));
  out.d.emplace_back();
  return out;
}

ChainComplex module_in_degree(const RGammaModule& M, int k) {
  ChainComplex out;
  out.cat = M.cat;
  out.ring = M.ring;
  for (int i = 0; i < k; ++i) out.terms.push_back(zero_module(*M.cat, M.ring));
  out.terms.push_back(M);
  out.d.assign(out.terms.size(), {});
  for (int i = 1; i <= k; ++i)
    for (int x = 0; x < M.cat->num_objects(); ++x)
      out.d[i].push_back(SpMat(out.terms[i - 1].rank[x], out.terms[i].rank[x]));
  return out;
}

ChainComplex elementary_complex(const OrbitCat& C, const Ring& R, int cls, int k) {
  RGammaModule F = free_module(C, R, cls);
  ChainComplex out = module_in_degree(F, k + 1);
  out.terms[k] = F;
  out.d[k + 1].clear();
  for (int x = 0; x < C.num_objects(); ++x) out.d[k + 1].push_back(SpMat::identity(F.rank[x]));
  if (k >= 1) {
    out.d[k].clear();
    for (int x = 0; x < C.num_objects(); ++x)
      out.d[k].push_back(SpMat(out.terms[k - 1].rank[x], F.rank[x]));
  }
  return out;
}

ChainComplex direct_sum_complex(const std::vector<ChainComplex>& parts) {
  if (parts.empty()) throw std::invalid_argument("direct_sum_complex: empty");
  const OrbitCat& C = *parts[0].cat;
  int n = C.num_objects();
  int top = 0;
  for (const ChainComplex& p : parts) top = std::max(top, p.top());
  ChainComplex out;
  out.cat = &C;
  out.ring = parts[0].ring;
  for (int k = 0; k <= top; ++k) {
    std::vector<RGammaModule> mods;
    for (const ChainComplex& p : parts)
      mods.push_back(k <= p.top() ? p.terms[k] : zero_module(C, out.ring));
    out.terms.push_back(direct_sum(mods));
    out.d.emplace_back();
    if (k >= 1)
      for (int x = 0; x < n; ++x) {
        std::vector<SpMat> blocks;
        for (const ChainComplex& p : parts) blocks.push_back(p.diff(k, x));
        out.d[k].push_back(SpMat::diag_sum(blocks));
      }
  }
  bool all_aug = std::all_of(parts.begin(), parts.end(),
                             [](const ChainComplex& p) { return p.aug.has_value(); });
  if (all_aug) {
    std::vector<SpMat> rows;
    for (int x = 0; x < n; ++x) {
      std::vector<SpMat> pieces;
      for (const ChainComplex& p : parts) pieces.push_back((*p.aug)[x]);
      rows.push_back(SpMat::hstack(pieces));
    }
    out.aug = rows;
  }
  return out;
}

void add_standard_augmentation(ChainComplex& C) {
  std::vector<SpMat> rows;
  for (int x = 0; x < C.cat->num_objects(); ++x) {
    SpMat row(1, C.terms[0].rank[x]);
    for (int j = 0; j < C.terms[0].rank[x]; ++j) row.set(0, j, 1);
    row.finish();
    rows.push_back(row);
  }
  C.aug = rows;
  std::string why;
  if (!complex_check(C, &why)) throw std::logic_error("bad augmentation: " + why);
}

bool complex_check(const ChainComplex& C, std::string* why) {
  const OrbitCat& cat = *C.cat;
  int n = cat.num_objects();
  auto fail = [&](const std::string& s) {
    if (why) *why = s;
    return false;
  };
  for (int k = 0; k <= C.top(); ++k)
    if (!C.terms[k].check(100, 1)) return fail("term " + std::to_string(k) + " not functorial");
  for (int k = 1; k <= C.top(); ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int m = 0; m < cat.mor_count(i, j); ++m) {
          SpMat lhs = C.d[k][i] * C.terms[k].act[i][j][m];
          SpMat rhs = C.terms[k - 1].act[i][j][m] * C.d[k][j];
          if (!la_equal(C.ring, lhs, rhs))
            return fail("d_" + std::to_string(k) + " not natural");
        }
  for (int k = 2; k <= C.top(); ++k)
    for (int x = 0; x < n; ++x) {
      SpMat dd = C.d[k - 1][x] * C.d[k][x];
      if (!la_equal(C.ring, dd, SpMat(dd.rows, dd.cols)))
        return fail("d.d != 0 at degree " + std::to_string(k));
    }
  if (C.aug) {
    const std::vector<SpMat>& e = *C.aug;
    for (int i = 0; i < n; ++i) {
      if (e[i].rows != 1 || e[i].cols != C.terms[0].rank[i]) return fail("bad aug shape");
      for (int j = 0; j < n; ++j)
        for (int m = 0; m < cat.mor_count(i, j); ++m)
          if (!la_equal(C.ring, e[i] * C.terms[0].act[i][j][m], e[j]))
            return fail("augmentation not natural");
      if (C.top() >= 1) {
        SpMat z = e[i] * C.d[1][i];
        if (!la_equal(C.ring, z, SpMat(1, z.cols))) return fail("aug . d_1 != 0");
      }
      if (C.terms[0].rank[i] > 0) {
        FGAbGroup cok = cokernel_group(C.ring, 1, e[i]);
        if (!cok.is_trivial()) return fail("augmentation not surjective");
      }
    }
  }
  return true;
}

FGAbGroup homology_at(const ChainComplex& C, int k, int x, bool reduced) {
  if (k == -1) {
    if (!reduced) return FGAbGroup{};
    if (!C.aug) throw std::invalid_argument("reduced homology needs an augmentation");
    return homology_group(C.ring, SpMat(0, 1), (*C.aug)[x]);
  }
  return homology_group(C.ring, out_diff(C, k, x, reduced), C.diff(k + 1, x));
}

std::vector<std::vector<FGAbGroup>> homology(const ChainComplex& C, bool reduced) {
  std::vector<std::vector<FGAbGroup>> out(C.cat->num_objects());
  for (int x = 0; x < C.cat->num_objects(); ++x)
    for (int k = 0; k <= C.top(); ++k) out[x].push_back(homology_at(C, k, x, reduced));
  return out;
}

GroupModule homology_action(const ChainComplex& C, int k, int x, bool reduced) {
  const OrbitCat& cat = *C.cat;
  Ring R = field_view(C.ring);
  GroupModule H;
  H.cat = &cat;
  H.obj = x;
  H.ring = R;
  if (k == -1) {
    // The augmentation target is the trivial module R; the action is trivial.
    FGAbGroup g = homology_at(C, -1, x, reduced);
    H.rank = (int)g.rank;
    H.act.assign(cat.mor_count(x, x), SpMat::identity(H.rank));
    return H;
  }
  SpMat dk = out_diff(C, k, x, reduced);
  dk.reduce(R);
  SpMat K = kernel(R, dk);
  SpMat S = C.diff(k + 1, x);
  S.reduce(R);
  // Kernel columns independent modulo the image.
  SpMat SK = SpMat::hstack({S, K});
  std::vector<int> piv = pivot_columns(R, SK);
  std::vector<int> keep;
  for (int p : piv)
    if (p >= S.cols) keep.push_back(p - S.cols);
  SpMat B = K.select_cols(keep);
  H.rank = B.cols;
  for (int a = 0; a < cat.mor_count(x, x); ++a) {
    SpMat Ma = C.terms[k].act[x][x][a];
    Ma.reduce(R);
    auto X = express_mod(R, S, B, Ma * B);
    if (!X) throw std::logic_error("homology_action: action does not preserve cycles");
    H.act.push_back(*X);
  }
  return H;
}

DimFunction dim_function(const ChainComplex& C) {
  DimFunction out(C.cat->num_objects(), -1);
  for (int x = 0; x < C.cat->num_objects(); ++x)
    for (int k = 0; k <= C.top(); ++k)
      if (C.terms[k].rank[x] > 0) out[x] = k;
  return out;
}

DimFunction hdim_function(const ChainComplex& C, bool reduced) {
  DimFunction out(C.cat->num_objects(), reduced ? -2 : -1);
  for (int x = 0; x < C.cat->num_objects(); ++x)
    for (int k = reduced ? -1 : 0; k <= C.top(); ++k)
      if (!homology_at(C, k, x, reduced).is_trivial()) out[x] = k;
  return out;
}

bool is_monotone(const OrbitCat& C, const DimFunction& d) {
  for (int i = 0; i < C.num_objects(); ++i)
    for (int j = 0; j < C.num_objects(); ++j)
      if (C.leq(i, j) && d[j] > d[i]) return false;
  return true;
}

bool is_strictly_monotone(const OrbitCat& C, const DimFunction& d) {
  for (int i = 0; i < C.num_objects(); ++i)
    for (int j = 0; j < C.num_objects(); ++j)
      if (i != j && C.leq(i, j) && d[j] >= d[i]) return false;
  return true;
}

bool is_moore(const ChainComplex& C, const DimFunction& n, std::string* witness) {
  for (int x = 0; x < C.cat->num_objects(); ++x)
    for (int k = -1; k <= C.top(); ++k) {
      if (k == n[x]) continue;
      FGAbGroup g = homology_at(C, k, x, true);
      if (!g.is_trivial()) {
        if (witness)
          *witness = "object " + std::to_string(x) + ": reduced H_" + std::to_string(k) +
                     " = " + g.to_string();
        return false;
      }
    }
  return true;
}

bool is_homology_sphere(const ChainComplex& C, const DimFunction& n,
                        std::string* witness) {
  if (!is_moore(C, n, witness)) return false;
  for (int x = 0; x < C.cat->num_objects(); ++x) {
    FGAbGroup g = homology_at(C, n[x], x, true);
    if (g.rank != 1 || !g.torsion.empty()) {
      if (witness)
        *witness = "object " + std::to_string(x) + ": reduced H_" + std::to_string(n[x]) +
                   " = " + g.to_string() + ", expected R";
      return false;
    }
  }
  return true;
}

bool is_oriented_sphere(const ChainComplex& C, const DimFunction& n,
                        std::string* witness) {
  if (!is_homology_sphere(C, n, witness)) return false;
  for (int x = 0; x < C.cat->num_objects(); ++x) {
    if (n[x] < 0) continue;
    GroupModule H = homology_action(C, n[x], x, true);
    for (std::size_t a = 0; a < H.act.size(); ++a)
      if (!la_equal(H.ring, H.act[a], SpMat::identity(H.rank))) {
        if (witness)
          *witness = "object " + std::to_string(x) + ": nontrivial Weyl action on H_" +
                     std::to_string(n[x]);
        return false;
      }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Join tensor.

namespace {

struct Slot {
  int i, j;  // -1 marks the augmentation coordinate of that factor
};

}  // namespace

ChainComplex join_tensor(const ChainComplex& Cc, const ChainComplex& Dc) {
  if (!Cc.aug || !Dc.aug) throw std::invalid_argument("join_tensor: inputs must be augmented");
  const OrbitCat& cat = *Cc.cat;
  const Ring& R = Cc.ring;
  int n = cat.num_objects();
  int topC = Cc.top(), topD = Dc.top();
  int top = topC + topD + 1;
  std::vector<std::vector<Slot>> slots(top + 1);
  for (int k = 0; k <= top; ++k) {
    if (k <= topC) slots[k].push_back({k, -1});
    if (k <= topD) slots[k].push_back({-1, k});
    for (int i = 0; i <= k - 1; ++i)
      if (i <= topC && k - 1 - i <= topD) slots[k].push_back({i, k - 1 - i});
  }
  auto slot_index = [&](int k, int i, int j) {
    for (int s = 0; s < (int)slots[k].size(); ++s)
      if (slots[k][s].i == i && slots[k][s].j == j) return s;
    throw std::logic_error("join_tensor: missing slot");
  };
  ChainComplex out;
  out.cat = &cat;
  out.ring = R;
  std::vector<std::vector<RGammaModule>> slot_mods(top + 1);
  for (int k = 0; k <= top; ++k) {
    for (const Slot& s : slots[k]) {
      if (s.j == -1)
        slot_mods[k].push_back(Cc.terms[s.i]);
      else if (s.i == -1)
        slot_mods[k].push_back(Dc.terms[s.j]);
      else
        slot_mods[k].push_back(tensor_R(Cc.terms[s.i], Dc.terms[s.j]));
    }
    out.terms.push_back(direct_sum(slot_mods[k]));
  }
  out.d.assign(top + 1, {});
  for (int k = 1; k <= top; ++k) {
    for (int x = 0; x < n; ++x) {
      // Block grid: rows = slots[k-1], cols = slots[k].
      std::vector<std::vector<SpMat>> grid(slots[k - 1].size());
      for (std::size_t r = 0; r < slots[k - 1].size(); ++r)
        for (std::size_t c = 0; c < slots[k].size(); ++c)
          grid[r].push_back(
              SpMat(slot_mods[k - 1][r].rank[x], slot_mods[k][c].rank[x]));
      for (std::size_t c = 0; c < slots[k].size(); ++c) {
        const Slot& s = slots[k][c];
        if (s.j == -1) {
          if (k - 1 <= topC) grid[slot_index(k - 1, k - 1, -1)][c] = Cc.diff(k, x);
        } else if (s.i == -1) {
          if (k - 1 <= topD) grid[slot_index(k - 1, -1, k - 1)][c] = Dc.diff(k, x).scaled(-1);
        } else {
          int i = s.i, j = s.j;
          long long sign = i % 2 == 0 ? 1 : -1;
          SpMat Ic = SpMat::identity(Cc.terms[i].rank[x]);
          SpMat Id = SpMat::identity(Dc.terms[j].rank[x]);
          if (i >= 1)
            grid[slot_index(k - 1, i - 1, j)][c] = Cc.d[i][x].kron(Id);
          else
            grid[slot_index(k - 1, -1, j)][c] = (*Cc.aug)[x].kron(Id);
          if (j >= 1)
            grid[slot_index(k - 1, i, j - 1)][c] = Ic.kron(Dc.d[j][x]).scaled(sign);
          else
            grid[slot_index(k - 1, i, -1)][c] = Ic.kron((*Dc.aug)[x]).scaled(sign);
        }
      }
      out.d[k].push_back(SpMat::from_blocks(grid));
    }
  }
  std::vector<SpMat> aug;
  for (int x = 0; x < n; ++x)
    aug.push_back(SpMat::hstack({(*Cc.aug)[x], (*Dc.aug)[x].scaled(-1)}));
  out.aug = aug;
  return out;
}

// ---------------------------------------------------------------------------
// Finiteness obstruction.

EulerClass euler_free(const ChainComplex& C) {
  const OrbitCat& cat = *C.cat;
  EulerClass out;
  out.vec = k0_zero(cat);
  Ring R = field_view(C.ring);
  for (int k = 0; k <= C.top(); ++k) {
    long long sign = k % 2 == 0 ? 1 : -1;
    const RGammaModule& M = C.terms[k];
    if (M.k0) {
      for (int x = 0; x < cat.num_objects(); ++x) out.vec[x] += sign * (*M.k0)[x];
      continue;
    }
    // Coarse fallback: splitting ranks per class.
    out.exact = false;
    for (int x = 0; x < cat.num_objects(); ++x) {
      std::vector<SpMat> larger;
      for (int z = 0; z < cat.num_objects(); ++z) {
        if (z == x) continue;
        for (int m = 0; m < cat.mor_count(x, z); ++m) larger.push_back(M.act[x][z][m]);
      }
      SpMat span = larger.empty() ? SpMat(M.rank[x], 0) : SpMat::hstack(larger);
      span.reduce(R);
      out.vec[x] += sign * (M.rank[x] - rank(R, span));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cones and suspension.

ChainMap identity_chain_map(const ChainComplex& C) {
  ChainMap f;
  f.src = f.dst = &C;
  for (int k = 0; k <= C.top(); ++k) {
    f.f.emplace_back();
    for (int x = 0; x < C.cat->num_objects(); ++x)
      f.f[k].push_back(SpMat::identity(C.terms[k].rank[x]));
  }
  return f;
}

bool chain_map_check(const ChainMap& f, std::string* why) {
  const ChainComplex& A = *f.src;
  const ChainComplex& B = *f.dst;
  const OrbitCat& cat = *A.cat;
  auto fail = [&](const std::string& s) {
    if (why) *why = s;
    return false;
  };
  auto comp_at = [&](int k, int x) -> SpMat {
    if (k <= (int)f.f.size() - 1 && k >= 0 && !f.f[k].empty()) return f.f[k][x];
    return SpMat(B.rank_at(k, x), A.rank_at(k, x));
  };
  for (int k = 0; k <= std::max(A.top(), B.top()); ++k)
    for (int i = 0; i < cat.num_objects(); ++i) {
      SpMat fx = comp_at(k, i);
      if (fx.rows != B.rank_at(k, i) || fx.cols != A.rank_at(k, i))
        return fail("component shape mismatch at degree " + std::to_string(k));
      // Naturality in the category.
      if (k <= A.top() && k <= B.top())
        for (int j = 0; j < cat.num_objects(); ++j)
          for (int m = 0; m < cat.mor_count(i, j); ++m)
            if (!la_equal(A.ring, comp_at(k, i) * A.terms[k].act[i][j][m],
                          B.terms[k].act[i][j][m] * comp_at(k, j)))
              return fail("component not natural at degree " + std::to_string(k));
      // Commutes with the differential.
      if (k >= 1) {
        SpMat lhs = comp_at(k - 1, i) * A.diff(k, i);
        SpMat rhs = B.diff(k, i) * comp_at(k, i);
        if (!la_equal(A.ring, lhs, rhs))
          return fail("does not commute with d at degree " + std::to_string(k));
      }
    }
  return true;
}

ChainComplex mapping_cone(const ChainMap& f) {
  const ChainComplex& A = *f.src;
  const ChainComplex& B = *f.dst;
  const OrbitCat& cat = *A.cat;
  int n = cat.num_objects();
  int top = std::max(B.top(), A.top() + 1);
  auto comp_at = [&](int k, int x) -> SpMat {
    if (k >= 0 && k < (int)f.f.size() && !f.f[k].empty()) return f.f[k][x];
    return SpMat(B.rank_at(k, x), A.rank_at(k, x));
  };
  ChainComplex out;
  out.cat = &cat;
  out.ring = A.ring;
  for (int k = 0; k <= top; ++k) {
    RGammaModule bk = k <= B.top() ? B.terms[k] : zero_module(cat, A.ring);
    RGammaModule ak = k - 1 >= 0 && k - 1 <= A.top() ? A.terms[k - 1] : zero_module(cat, A.ring);
    out.terms.push_back(direct_sum({bk, ak}));
    out.d.emplace_back();
    if (k >= 1)
      for (int x = 0; x < n; ++x) {
        // (x, y) -> (d x + f(y), -d y)
        std::vector<std::vector<SpMat>> grid(2);
        grid[0] = {B.diff(k, x), comp_at(k - 1, x)};
        grid[1] = {SpMat(A.rank_at(k - 2, x), B.rank_at(k, x)), A.diff(k - 1, x).scaled(-1)};
        out.d[k].push_back(SpMat::from_blocks(grid));
      }
  }
  return out;
}

ChainComplex suspension(const ChainComplex& C) {
  const OrbitCat& cat = *C.cat;
  ChainComplex out;
  out.cat = &cat;
  out.ring = C.ring;
  out.terms.push_back(zero_module(cat, C.ring));
  out.d.emplace_back();
  for (int k = 0; k <= C.top(); ++k) {
    out.terms.push_back(C.terms[k]);
    out.d.emplace_back();
    for (int x = 0; x < cat.num_objects(); ++x)
      out.d[k + 1].push_back(C.diff(k, x).scaled(-1));
  }
  return out;
}

bool quasi_iso_check(const ChainMap& f) {
  ChainComplex cone = mapping_cone(f);
  for (int x = 0; x < cone.cat->num_objects(); ++x)
    for (int k = 0; k <= cone.top(); ++k)
      if (!homology_at(cone, k, x).is_trivial()) return false;
  return true;
}

}  // namespace orbikit
