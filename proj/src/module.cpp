#include "orbikit/module.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace orbikit {

namespace {

// Position of the inverse automorphism in Mor(x,x).
int inv_aut(const OrbitCat& C, int x, int a) {
  int id = C.identity_mor(x);
  for (int w = 0; w < C.mor_count(x, x); ++w)
    if (C.compose(x, x, x, a, w) == id && C.compose(x, x, x, w, a) == id) return w;
  throw std::logic_error("inv_aut: no inverse (EI violated)");
}

void alloc_act(RGammaModule& M) {
  int n = M.cat->num_objects();
  M.act.assign(n, std::vector<std::vector<SpMat>>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int rows = M.covariant ? M.rank[j] : M.rank[i];
      int cols = M.covariant ? M.rank[i] : M.rank[j];
      M.act[i][j].assign(M.cat->mor_count(i, j), SpMat(rows, cols));
    }
}

SpMat basis_selection(int ambient, const std::vector<int>& idx) {
  SpMat m(ambient, (int)idx.size());
  for (int j = 0; j < (int)idx.size(); ++j) m.set(idx[j], j, 1);
  m.finish();
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// Group modules.

bool GroupModule::check() const {
  const OrbitCat& C = *cat;
  int n = C.mor_count(obj, obj);
  if ((int)act.size() != n) return false;
  if (!la_equal(ring, act[C.identity_mor(obj)], SpMat::identity(rank))) return false;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      SpMat lhs = act[C.compose(obj, obj, obj, a, b)];
      if (!la_equal(ring, lhs, act[a] * act[b])) return false;
    }
  return true;
}

GroupModule gm_trivial(const OrbitCat& C, int x, const Ring& R) {
  GroupModule V;
  V.cat = &C;
  V.obj = x;
  V.ring = R;
  V.rank = 1;
  V.act.assign(C.mor_count(x, x), SpMat::identity(1));
  return V;
}

GroupModule gm_free(const OrbitCat& C, int x, const Ring& R, int copies) {
  int n = C.mor_count(x, x);
  GroupModule V;
  V.cat = &C;
  V.obj = x;
  V.ring = R;
  V.rank = copies * n;
  V.act.reserve(n);
  for (int a = 0; a < n; ++a) {
    SpMat P(V.rank, V.rank);
    for (int k = 0; k < copies; ++k)
      for (int c = 0; c < n; ++c) P.set(k * n + C.compose(x, x, x, a, c), k * n + c, 1);
    P.finish();
    V.act.push_back(P);
  }
  return V;
}

GroupModule gm_direct_sum(const std::vector<GroupModule>& parts) {
  if (parts.empty()) throw std::invalid_argument("gm_direct_sum: empty");
  GroupModule V = parts[0];
  V.rank = 0;
  for (const GroupModule& p : parts) V.rank += p.rank;
  int n = (int)parts[0].act.size();
  V.act.clear();
  for (int a = 0; a < n; ++a) {
    std::vector<SpMat> blocks;
    for (const GroupModule& p : parts) blocks.push_back(p.act[a]);
    V.act.push_back(SpMat::diag_sum(blocks));
  }
  return V;
}

GroupModule gm_from_action(const OrbitCat& C, int x, const Ring& R,
                           const std::vector<std::vector<int>>& point_images) {
  GroupModule V;
  V.cat = &C;
  V.obj = x;
  V.ring = R;
  V.rank = point_images.empty() ? 0 : (int)point_images[0].size();
  for (const auto& img : point_images) {
    SpMat P(V.rank, V.rank);
    for (int p = 0; p < V.rank; ++p) P.set(img[p], p, 1);
    P.finish();
    V.act.push_back(P);
  }
  return V;
}

std::optional<SpMat> gm_projective_witness(const GroupModule& V) {
  const OrbitCat& C = *V.cat;
  int x = V.obj;
  int n = C.mor_count(x, x);
  int r = V.rank;
  if (r == 0) return SpMat(0, 0);
  // Higman: find theta with sum_a P_a theta P_{a^{-1}} = id.
  SpMat T(r * r, r * r);
  std::vector<SpMat> blocks;
  for (int a = 0; a < n; ++a) {
    SpMat term = V.act[inv_aut(C, x, a)].transpose().kron(V.act[a]);
    T = a == 0 ? term : T + term;
  }
  SpMat idvec(r * r, 1);
  for (int i = 0; i < r; ++i) idvec.set(i * r + i, 0, 1);
  idvec.finish();
  T.reduce(V.ring);
  idvec.reduce(V.ring);
  auto z = solve(V.ring, T, idvec);
  if (!z) return std::nullopt;
  SpMat theta(r, r);
  theta.den = z->den;
  for (const SpMat::Ent& e : z->ents) theta.ents.push_back({e.r % r, e.r / r, e.v});
  theta.finish();
  // Verify.
  SpMat tr(r, r);
  for (int a = 0; a < n; ++a) {
    SpMat term = V.act[a] * theta * V.act[inv_aut(C, x, a)];
    tr = a == 0 ? term : tr + term;
  }
  if (!la_equal(V.ring, tr, SpMat::identity(r)))
    throw std::logic_error("gm_projective_witness: verification failed");
  return theta;
}

namespace {

// Equivariant hom space Hom_{R[Aut]}(A, B) as kernel of the commuting system.
std::vector<SpMat> gm_hom_space(const GroupModule& A, const GroupModule& B) {
  const OrbitCat& C = *A.cat;
  int x = A.obj;
  int n = C.mor_count(x, x);
  if (A.rank == 0 || B.rank == 0) return {};
  // X with X P^A_a = P^B_a X for all a; vec column-major.
  std::vector<SpMat> rows;
  SpMat Ib = SpMat::identity(B.rank), Ia = SpMat::identity(A.rank);
  for (int a = 0; a < n; ++a)
    rows.push_back(A.act[a].transpose().kron(Ib) - Ia.kron(B.act[a]));
  SpMat sys = SpMat::vstack(rows);
  sys.reduce(A.ring);
  SpMat K = kernel(A.ring, sys);
  std::vector<SpMat> out;
  for (int j = 0; j < K.cols; ++j) {
    SpMat X(B.rank, A.rank);
    X.den = K.den;
    for (const SpMat::Ent& e : K.ents)
      if (e.c == j) X.ents.push_back({e.r % B.rank, e.r / B.rank, e.v});
    X.finish();
    X.normalize();
    out.push_back(X);
  }
  return out;
}

}  // namespace

std::optional<SpMat> gm_find_isomorphism(const GroupModule& A, const GroupModule& B,
                                         unsigned seed) {
  if (A.rank != B.rank) return std::nullopt;
  if (A.rank == 0) return SpMat(0, 0);
  auto basis = gm_hom_space(A, B);
  for (const SpMat& X : basis)
    if (is_invertible(A.ring, X)) return X;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coef(-2, 2);
  for (int t = 0; t < 200; ++t) {
    SpMat X(B.rank, A.rank);
    bool any = false;
    for (const SpMat& b : basis) {
      int c = coef(rng);
      if (!c) continue;
      X = any ? X + b.scaled(c) : b.scaled(c);
      any = true;
    }
    if (any && is_invertible(A.ring, X)) return X;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// RGamma modules: basics.

int RGammaModule::total_rank() const {
  int t = 0;
  for (int r : rank) t += r;
  return t;
}

std::vector<int> RGammaModule::free_block_offsets(int obj) const {
  if (!free_blocks) throw std::logic_error("free_block_offsets: module not block-free");
  std::vector<int> off;
  int cur = 0;
  for (int cls : *free_blocks) {
    off.push_back(cur);
    cur += cat->mor_count(obj, cls);
  }
  off.push_back(cur);
  return off;
}

bool RGammaModule::check(int samples, unsigned seed) const {
  const OrbitCat& C = *cat;
  int n = C.num_objects();
  for (int i = 0; i < n; ++i)
    if (!la_equal(ring, act[i][i][C.identity_mor(i)], SpMat::identity(rank[i])))
      return false;
  std::mt19937_64 rng(seed);
  std::vector<std::array<int, 3>> triples;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (C.mor_count(i, j) && C.mor_count(j, k)) triples.push_back({i, j, k});
  for (int s = 0; s < samples && !triples.empty(); ++s) {
    auto [i, j, k] = triples[rng() % triples.size()];
    int m1 = (int)(rng() % C.mor_count(i, j));
    int m2 = (int)(rng() % C.mor_count(j, k));
    int c = C.compose(i, j, k, m1, m2);
    SpMat lhs = covariant ? act[j][k][m2] * act[i][j][m1] : act[i][j][m1] * act[j][k][m2];
    if (!la_equal(ring, act[i][k][c], lhs)) return false;
  }
  return true;
}

bool ModuleHom::check_natural() const {
  const OrbitCat& C = *src->cat;
  int n = C.num_objects();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < C.mor_count(i, j); ++m) {
        SpMat lhs = comp[i] * src->act[i][j][m];
        SpMat rhs = dst->act[i][j][m] * comp[j];
        if (!la_equal(src->ring, lhs, rhs)) return false;
      }
  return true;
}

bool ModuleHom::is_objectwise_iso() const {
  for (std::size_t i = 0; i < comp.size(); ++i)
    if (!is_invertible(src->ring, comp[i])) return false;
  return true;
}

bool ModuleHom::is_surjective() const {
  const Ring& R = src->ring;
  for (std::size_t i = 0; i < comp.size(); ++i) {
    if (R.is_field()) {
      if (rank(R, comp[i]) != dst->rank[i]) return false;
    } else {
      FGAbGroup cok = cokernel_group(R, dst->rank[i], comp[i]);
      if (!cok.is_trivial()) return false;
    }
  }
  return true;
}

bool ModuleHom::is_injective() const {
  const Ring& R = src->ring;
  for (std::size_t i = 0; i < comp.size(); ++i)
    if (rank(R, comp[i]) != src->rank[i]) return false;
  return true;
}

ModuleHom ModuleHom::then(const ModuleHom& next) const {
  ModuleHom out;
  out.src = src;
  out.dst = next.dst;
  for (std::size_t i = 0; i < comp.size(); ++i) out.comp.push_back(next.comp[i] * comp[i]);
  return out;
}

ModuleHom ModuleHom::operator+(const ModuleHom& o) const {
  ModuleHom out = *this;
  for (std::size_t i = 0; i < comp.size(); ++i) out.comp[i] = comp[i] + o.comp[i];
  return out;
}

ModuleHom ModuleHom::scaled(long long num, long long den) const {
  ModuleHom out = *this;
  for (SpMat& m : out.comp) m = m.scaled(num, den);
  return out;
}

ModuleHom identity_hom(const RGammaModule& M) {
  ModuleHom h;
  h.src = h.dst = &M;
  for (int r : M.rank) h.comp.push_back(SpMat::identity(r));
  return h;
}

ModuleHom zero_hom(const RGammaModule& src, const RGammaModule& dst) {
  ModuleHom h;
  h.src = &src;
  h.dst = &dst;
  for (std::size_t i = 0; i < src.rank.size(); ++i)
    h.comp.push_back(SpMat(dst.rank[i], src.rank[i]));
  return h;
}

// ---------------------------------------------------------------------------
// Constructors.

RGammaModule zero_module(const OrbitCat& C, const Ring& R) {
  RGammaModule M;
  M.cat = &C;
  M.ring = R;
  M.rank.assign(C.num_objects(), 0);
  alloc_act(M);
  M.free_blocks = std::vector<int>{};
  M.k0 = k0_zero(C);
  return M;
}

RGammaModule constant_module(const OrbitCat& C, const Ring& R) {
  RGammaModule M;
  M.cat = &C;
  M.ring = R;
  M.rank.assign(C.num_objects(), 1);
  alloc_act(M);
  for (int i = 0; i < C.num_objects(); ++i)
    for (int j = 0; j < C.num_objects(); ++j)
      for (int m = 0; m < C.mor_count(i, j); ++m) M.act[i][j][m] = SpMat::identity(1);
  return M;
}

RGammaModule free_module(const OrbitCat& C, const Ring& R, int cls) {
  return free_module_blocks(C, R, {cls});
}

RGammaModule free_module_blocks(const OrbitCat& C, const Ring& R,
                                const std::vector<int>& classes) {
  RGammaModule M;
  M.cat = &C;
  M.ring = R;
  int n = C.num_objects();
  M.rank.assign(n, 0);
  for (int y = 0; y < n; ++y)
    for (int cls : classes) M.rank[y] += C.mor_count(y, cls);
  alloc_act(M);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < C.mor_count(i, j); ++m) {
        SpMat& A = M.act[i][j][m];
        int roff = 0, coff = 0;
        for (int cls : classes) {
          for (int c = 0; c < C.mor_count(j, cls); ++c)
            A.set(roff + C.compose(i, j, cls, m, c), coff + c, 1);
          roff += C.mor_count(i, cls);
          coff += C.mor_count(j, cls);
        }
        A.finish();
      }
  M.free_blocks = classes;
  K0Free k = k0_zero(C);
  for (int cls : classes) k[cls] += 1;
  M.k0 = k;
  return M;
}

RGammaModule direct_sum(const std::vector<RGammaModule>& parts) {
  if (parts.empty()) throw std::invalid_argument("direct_sum: empty");
  RGammaModule M;
  const OrbitCat& C = *parts[0].cat;
  M.cat = &C;
  M.ring = parts[0].ring;
  M.covariant = parts[0].covariant;
  int n = C.num_objects();
  M.rank.assign(n, 0);
  for (const RGammaModule& p : parts)
    for (int i = 0; i < n; ++i) M.rank[i] += p.rank[i];
  M.act.assign(n, std::vector<std::vector<SpMat>>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < C.mor_count(i, j); ++m) {
        std::vector<SpMat> blocks;
        for (const RGammaModule& p : parts) blocks.push_back(p.act[i][j][m]);
        M.act[i][j].push_back(SpMat::diag_sum(blocks));
      }
  bool allfree = true, allk0 = true;
  std::vector<int> fb;
  K0Free k = k0_zero(C);
  for (const RGammaModule& p : parts) {
    if (p.free_blocks)
      fb.insert(fb.end(), p.free_blocks->begin(), p.free_blocks->end());
    else
      allfree = false;
    if (p.k0)
      for (int i = 0; i < n; ++i) k[i] += (*p.k0)[i];
    else
      allk0 = false;
  }
  if (allfree) M.free_blocks = fb;
  if (allk0) M.k0 = k;
  return M;
}

RGammaModule tensor_R(const RGammaModule& M, const RGammaModule& N) {
  const OrbitCat& C = *M.cat;
  RGammaModule T;
  T.cat = &C;
  T.ring = M.ring;
  T.covariant = M.covariant;
  int n = C.num_objects();
  T.rank.resize(n);
  for (int i = 0; i < n; ++i) T.rank[i] = M.rank[i] * N.rank[i];
  T.act.assign(n, std::vector<std::vector<SpMat>>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < C.mor_count(i, j); ++m)
        T.act[i][j].push_back(M.act[i][j][m].kron(N.act[i][j][m]));
  if (M.k0 && N.k0) T.k0 = k0_multiply(C, *M.k0, *N.k0);
  return T;
}

RGammaModule fixed_point_module(const OrbitCat& C, const Ring& R, const Subgroup& S) {
  const PermGroup& G = *C.G;
  RGammaModule M;
  M.cat = &C;
  M.ring = R;
  int n = C.num_objects();
  // Basis at object i: canonical cosets gS with (H_i)^g <= S.
  std::vector<std::vector<int>> basis(n);
  std::vector<std::map<int, int>> pos(n);
  std::vector<int> all_reps = left_coset_reps(S);
  for (int i = 0; i < n; ++i) {
    const Subgroup& H = C.obj(i);
    for (int g : all_reps) {
      bool ok = true;
      for (int e : H.gens)
        if (!S.contains(G.conj(e, g))) {
          ok = false;
          break;
        }
      if (!ok) continue;
      pos[i][g] = (int)basis[i].size();
      basis[i].push_back(g);
    }
  }
  M.rank.resize(n);
  for (int i = 0; i < n; ++i) M.rank[i] = (int)basis[i].size();
  alloc_act(M);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < C.mor_count(i, j); ++m) {
        int a = C.mor[i][j][m];
        SpMat& A = M.act[i][j][m];
        for (int c = 0; c < (int)basis[j].size(); ++c) {
          int target = coset_rep(S, G.mul(a, basis[j][c]));
          A.set(pos[i].at(target), c, 1);
        }
        A.finish();
      }
  // If S is in the family this is the free module on its class.
  if (auto cl = C.F.class_of(S)) {
    M.free_blocks = std::vector<int>{cl->first};
    M.k0 = k0_of_class(C, cl->first);
  }
  return M;
}

ModuleHom hom_from_free(const RGammaModule& F, const RGammaModule& M,
                        const std::vector<SpMat>& gen_images) {
  if (!F.free_blocks) throw std::invalid_argument("hom_from_free: source not free");
  const OrbitCat& C = *F.cat;
  const std::vector<int>& classes = *F.free_blocks;
  if (gen_images.size() != classes.size())
    throw std::invalid_argument("hom_from_free: generator count mismatch");
  ModuleHom h;
  h.src = &F;
  h.dst = &M;
  for (int y = 0; y < C.num_objects(); ++y) {
    std::vector<SpMat> cols;
    for (std::size_t b = 0; b < classes.size(); ++b) {
      int cb = classes[b];
      for (int m = 0; m < C.mor_count(y, cb); ++m)
        cols.push_back(M.act[y][cb][m] * gen_images[b]);
    }
    h.comp.push_back(cols.empty() ? SpMat(M.rank[y], 0) : SpMat::hstack(cols));
  }
  return h;
}

std::vector<ModuleHom> hom_module_space(const RGammaModule& M, const RGammaModule& N) {
  const OrbitCat& C = *M.cat;
  int n = C.num_objects();
  std::vector<ModuleHom> out;
  if (M.free_blocks) {
    // Yoneda: Hom(R[G/K], N) = N(K) via generator images.
    const std::vector<int>& classes = *M.free_blocks;
    for (std::size_t b = 0; b < classes.size(); ++b) {
      int cb = classes[b];
      for (int v = 0; v < N.rank[cb]; ++v) {
        std::vector<SpMat> gens;
        for (std::size_t b2 = 0; b2 < classes.size(); ++b2) {
          SpMat g(N.rank[classes[b2]], 1);
          if (b2 == b) g.set(v, 0, 1);
          g.finish();
          gens.push_back(g);
        }
        out.push_back(hom_from_free(M, N, gens));
      }
    }
    return out;
  }
  // Generic: kernel of the naturality system.
  std::vector<int> off(n + 1, 0);
  for (int x = 0; x < n; ++x) off[x + 1] = off[x] + N.rank[x] * M.rank[x];
  int vars = off[n];
  if (vars == 0) return {};
  std::vector<SpMat> rows;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < C.mor_count(i, j); ++m) {
        // comp_i * A^M - A^N * comp_j = 0, vec column-major.
        SpMat lhs = M.act[i][j][m].transpose().kron(SpMat::identity(N.rank[i]));
        SpMat rhs = SpMat::identity(M.rank[j]).kron(N.act[i][j][m]);
        // Place lhs at block i and -rhs at block j.
        SpMat big(lhs.rows, vars);
        long long L = std::lcm(lhs.den, rhs.den);
        big.den = L;
        for (const SpMat::Ent& e : lhs.ents)
          big.ents.push_back({e.r, e.c + off[i], e.v * (L / lhs.den)});
        for (const SpMat::Ent& e : rhs.ents)
          big.ents.push_back({e.r, e.c + off[j], -e.v * (L / rhs.den)});
        big.finish();
        rows.push_back(big);
      }
  SpMat sys = rows.empty() ? SpMat(0, vars) : SpMat::vstack(rows);
  sys.reduce(M.ring);
  SpMat K = kernel(M.ring, sys);
  for (int c = 0; c < K.cols; ++c) {
    ModuleHom h;
    h.src = &M;
    h.dst = &N;
    for (int x = 0; x < n; ++x) {
      SpMat cm(N.rank[x], M.rank[x]);
      cm.den = K.den;
      for (const SpMat::Ent& e : K.ents)
        if (e.c == c && e.r >= off[x] && e.r < off[x + 1]) {
          int loc = e.r - off[x];
          cm.ents.push_back({loc % N.rank[x], loc / N.rank[x], e.v});
        }
      cm.finish();
      cm.normalize();
      h.comp.push_back(cm);
    }
    out.push_back(h);
  }
  return out;
}

FGAbGroup tensor_over_cat(const RGammaModule& M, const RGammaModule& N) {
  if (M.covariant || !N.covariant)
    throw std::invalid_argument("tensor_over_cat: need contravariant (x) covariant");
  const OrbitCat& C = *M.cat;
  int n = C.num_objects();
  std::vector<int> off(n + 1, 0);
  for (int x = 0; x < n; ++x) off[x + 1] = off[x] + M.rank[x] * N.rank[x];
  int ambient = off[n];
  std::vector<SpMat> cols;
  int total_cols = 0;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int m = 0; m < C.mor_count(x, y); ++m)
        total_cols += M.rank[y] * N.rank[x];
  SpMat rel(ambient, total_cols);
  int coff = 0;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int m = 0; m < C.mor_count(x, y); ++m) {
        // Columns indexed by (a in M(y), b in N(x)): M(f)m (x) n  -  m (x) N(f)n.
        SpMat xblk = M.act[x][y][m].kron(SpMat::identity(N.rank[x]));
        SpMat yblk = SpMat::identity(M.rank[y]).kron(N.act[x][y][m]);
        long long L = std::lcm(xblk.den, yblk.den);
        for (const SpMat::Ent& e : xblk.ents)
          rel.ents.push_back({off[x] + e.r, coff + e.c, e.v * (L / xblk.den)});
        for (const SpMat::Ent& e : yblk.ents)
          rel.ents.push_back({off[y] + e.r, coff + e.c, -e.v * (L / yblk.den)});
        if (L != 1) throw std::logic_error("tensor_over_cat: unexpected denominators");
        coff += xblk.cols;
      }
  rel.finish();
  rel.reduce(M.ring);
  return cokernel_group(M.ring, ambient, rel);
}

RGammaModule co_free_module(const OrbitCat& C, const Ring& R, int cls) {
  RGammaModule M;
  M.cat = &C;
  M.ring = R;
  M.covariant = true;
  int n = C.num_objects();
  M.rank.resize(n);
  for (int y = 0; y < n; ++y) M.rank[y] = C.mor_count(cls, y);
  alloc_act(M);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < C.mor_count(i, j); ++m) {
        SpMat& A = M.act[i][j][m];  // value(i) -> value(j)
        for (int c = 0; c < C.mor_count(cls, i); ++c)
          A.set(C.compose(cls, i, j, c, m), c, 1);
        A.finish();
      }
  return M;
}

// ---------------------------------------------------------------------------
// The four functors.

GroupModule restriction_to_aut(const RGammaModule& M, int x) {
  GroupModule V;
  V.cat = M.cat;
  V.obj = x;
  V.ring = M.ring;
  V.rank = M.rank[x];
  V.act = M.act[x][x];
  return V;
}

RGammaModule extension_functor(const GroupModule& V) {
  const OrbitCat& C = *V.cat;
  int x = V.obj;
  int n = C.num_objects();
  RGammaModule M;
  M.cat = &C;
  M.ring = V.ring;
  std::vector<MorOrbits> orbs(n);
  M.rank.assign(n, 0);
  for (int y = 0; y < n; ++y) {
    if (!C.mor_count(y, x)) continue;
    orbs[y] = mor_orbits_under_aut(C, y, x);
    M.rank[y] = (int)orbs[y].reps.size() * V.rank;
  }
  alloc_act(M);
  for (int z = 0; z < n; ++z)
    for (int y = 0; y < n; ++y)
      for (int m = 0; m < C.mor_count(z, y); ++m) {
        if (!M.rank[y] || !M.rank[z]) continue;
        SpMat& A = M.act[z][y][m];
        long long L = 1;
        for (int ri = 0; ri < (int)orbs[y].reps.size(); ++ri) {
          int r = orbs[y].reps[ri];
          int mp = C.compose(z, y, x, m, r);
          int o = orbs[z].orbit_of[mp];
          int a = orbs[z].witness[mp];
          const SpMat& P = V.act[a];
          L = std::lcm(L, P.den);
        }
        A.den = L;
        for (int ri = 0; ri < (int)orbs[y].reps.size(); ++ri) {
          int r = orbs[y].reps[ri];
          int mp = C.compose(z, y, x, m, r);
          int o = orbs[z].orbit_of[mp];
          int a = orbs[z].witness[mp];
          const SpMat& P = V.act[a];
          for (const SpMat::Ent& e : P.ents)
            A.ents.push_back(
                {o * V.rank + e.r, ri * V.rank + e.c, e.v * (L / P.den)});
        }
        A.finish();
        A.normalize();
      }
  return M;
}

RGammaModule atomic_module(const GroupModule& V) {
  const OrbitCat& C = *V.cat;
  RGammaModule M;
  M.cat = &C;
  M.ring = V.ring;
  M.rank.assign(C.num_objects(), 0);
  M.rank[V.obj] = V.rank;
  alloc_act(M);
  M.act[V.obj][V.obj] = V.act;
  return M;
}

SplitData splitting_functor(const RGammaModule& M, int x) {
  const OrbitCat& C = *M.cat;
  if (!M.ring.is_field()) throw std::invalid_argument("splitting_functor: field rings only");
  std::vector<SpMat> larger;
  for (int z = 0; z < C.num_objects(); ++z) {
    if (z == x) continue;
    for (int m = 0; m < C.mor_count(x, z); ++m) larger.push_back(M.act[x][z][m]);
  }
  SplitData out;
  out.larger_span = larger.empty() ? SpMat(M.rank[x], 0) : SpMat::hstack(larger);
  out.larger_span.reduce(M.ring);
  out.basis_idx = complement_of_colspan(M.ring, M.rank[x], out.larger_span);
  GroupModule& V = out.V;
  V.cat = &C;
  V.obj = x;
  V.ring = M.ring;
  V.rank = (int)out.basis_idx.size();
  SpMat E = basis_selection(M.rank[x], out.basis_idx);
  for (int a = 0; a < C.mor_count(x, x); ++a) {
    auto X = express_mod(M.ring, out.larger_span, E, M.act[x][x][a] * E);
    if (!X) throw std::logic_error("splitting_functor: span not stable");
    V.act.push_back(*X);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Covers, projectivity, isomorphism search.

// Minimal generating subset of V (indices into its standard basis): greedy
// pass over the fixed basis order, then a prune pass.  An irredundant
// generating set of a module over an Artinian algebra is minimal (Nakayama),
// so greedy-plus-prune is exact, and the fixed order keeps it deterministic.
std::vector<int> gm_minimal_generators(const GroupModule& V) {
  auto translates = [&](const std::vector<int>& gens) {
    std::vector<SpMat> cols;
    for (int g : gens)
      for (const SpMat& P : V.act) cols.push_back(P.select_cols({g}));
    return cols.empty() ? SpMat(V.rank, 0) : SpMat::hstack(cols);
  };
  auto spans = [&](const std::vector<int>& gens) {
    return rank(V.ring, translates(gens)) == V.rank;
  };
  std::vector<int> sel;
  int cur = 0;
  for (int i = 0; i < V.rank && cur < V.rank; ++i) {
    std::vector<int> trial = sel;
    trial.push_back(i);
    int r = rank(V.ring, translates(trial));
    if (r > cur) {
      sel = trial;
      cur = r;
    }
  }
  for (int k = (int)sel.size() - 1; k >= 0; --k) {
    std::vector<int> trial;
    for (int i = 0; i < (int)sel.size(); ++i)
      if (i != k) trial.push_back(sel[i]);
    if (spans(trial)) sel = trial;
  }
  return sel;
}

FreeCover free_cover(const RGammaModule& M) {
  const OrbitCat& C = *M.cat;
  std::vector<int> classes;
  std::vector<SpMat> gens;
  for (int x = 0; x < C.num_objects(); ++x) {
    if (!M.rank[x]) continue;
    std::vector<int> idx;
    if (M.ring.is_field()) {
      SplitData sd = splitting_functor(M, x);
      for (int i : gm_minimal_generators(sd.V)) idx.push_back(sd.basis_idx[i]);
    } else {
      idx.resize(M.rank[x]);
      std::iota(idx.begin(), idx.end(), 0);
    }
    for (int i : idx) {
      classes.push_back(x);
      SpMat g(M.rank[x], 1);
      g.set(i, 0, 1);
      g.finish();
      gens.push_back(g);
    }
  }
  FreeCover out;
  out.F = std::make_shared<RGammaModule>(free_module_blocks(C, M.ring, classes));
  out.pi = hom_from_free(*out.F, M, gens);
  if (!out.pi.is_surjective()) throw std::logic_error("free_cover: cover not surjective");
  return out;
}

std::optional<ModuleHom> split_surjection(const ModuleHom& pi) {
  // Find s: M -> F with pi . s = id_M, s natural.
  const RGammaModule& F = *pi.src;
  const RGammaModule& M = *pi.dst;
  const OrbitCat& C = *M.cat;
  int n = C.num_objects();
  std::vector<int> off(n + 1, 0);
  for (int x = 0; x < n; ++x) off[x + 1] = off[x] + F.rank[x] * M.rank[x];
  int vars = off[n];
  std::vector<SpMat> rows, rhs;
  // Naturality rows: s_i A^M - A^F s_j = 0.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < C.mor_count(i, j); ++m) {
        SpMat lhs = M.act[i][j][m].transpose().kron(SpMat::identity(F.rank[i]));
        SpMat r2 = SpMat::identity(M.rank[j]).kron(F.act[i][j][m]);
        SpMat big(lhs.rows, vars);
        long long L = std::lcm(lhs.den, r2.den);
        big.den = L;
        for (const SpMat::Ent& e : lhs.ents)
          big.ents.push_back({e.r, e.c + off[i], e.v * (L / lhs.den)});
        for (const SpMat::Ent& e : r2.ents)
          big.ents.push_back({e.r, e.c + off[j], -e.v * (L / r2.den)});
        big.finish();
        rows.push_back(big);
        rhs.push_back(SpMat(big.rows, 1));
      }
  // Section rows: pi_x s_x = id.
  for (int x = 0; x < n; ++x) {
    SpMat lhs = SpMat::identity(M.rank[x]).kron(pi.comp[x]);
    SpMat big(lhs.rows, vars);
    big.den = lhs.den;
    for (const SpMat::Ent& e : lhs.ents) big.ents.push_back({e.r, e.c + off[x], e.v});
    big.finish();
    rows.push_back(big);
    SpMat b(big.rows, 1);
    for (int i = 0; i < M.rank[x]; ++i) b.set(i * M.rank[x] + i, 0, 1);
    b.finish();
    rhs.push_back(b);
  }
  SpMat sys = SpMat::vstack(rows);
  SpMat B = SpMat::vstack(rhs);
  sys.reduce(M.ring);
  B.reduce(M.ring);
  auto z = solve(M.ring, sys, B);
  if (!z) return std::nullopt;
  ModuleHom s;
  s.src = &M;
  s.dst = &F;
  for (int x = 0; x < n; ++x) {
    SpMat cm(F.rank[x], M.rank[x]);
    cm.den = z->den;
    for (const SpMat::Ent& e : z->ents)
      if (e.r >= off[x] && e.r < off[x + 1]) {
        int loc = e.r - off[x];
        cm.ents.push_back({loc % F.rank[x], loc / F.rank[x], e.v});
      }
    cm.finish();
    cm.normalize();
    s.comp.push_back(cm);
  }
  return s;
}

ProjectiveWitness is_projective(const RGammaModule& M) {
  const OrbitCat& C = *M.cat;
  ProjectiveWitness out;
  if (M.total_rank() == 0) {
    out.projective = true;
    return out;
  }
  if (!M.ring.is_field()) {
    FreeCover fc = free_cover(M);
    auto s = split_surjection(fc.pi);
    if (!s) {
      out.reason = "free cover does not split";
      return out;
    }
    out.projective = true;
    out.splitting = s;
    out.model = fc.F;
    return out;
  }
  // Field path: structure theorem with Higman witnesses.
  std::vector<RGammaModule> parts;
  std::vector<ModuleHom> maps;
  for (int x = 0; x < C.num_objects(); ++x) {
    if (!M.rank[x]) continue;
    SplitData sd = splitting_functor(M, x);
    if (sd.V.rank == 0) continue;
    auto theta = gm_projective_witness(sd.V);
    if (!theta) {
      out.reason = "S_x(M) not projective over the automorphism group at object " +
                   std::to_string(x);
      return out;
    }
    // Equivariant lift lambda = sum_a P_a . lift . theta . Q_{a^{-1}}.
    SpMat lift = basis_selection(M.rank[x], sd.basis_idx);
    SpMat lambda(M.rank[x], sd.V.rank);
    for (int a = 0; a < C.mor_count(x, x); ++a) {
      SpMat term = M.act[x][x][a] * lift * *theta * sd.V.act[inv_aut(C, x, a)];
      lambda = a == 0 ? term : lambda + term;
    }
    RGammaModule Ex = extension_functor(sd.V);
    // Adjunction: component at y has columns M(rep) * lambda(e_k).
    ModuleHom phi;
    phi.dst = &M;
    phi.comp.resize(C.num_objects());
    for (int y = 0; y < C.num_objects(); ++y) {
      if (!C.mor_count(y, x)) {
        phi.comp[y] = SpMat(M.rank[y], 0);
        continue;
      }
      MorOrbits o = mor_orbits_under_aut(C, y, x);
      std::vector<SpMat> cols;
      for (int r : o.reps) cols.push_back(M.act[y][x][r] * lambda);
      phi.comp[y] = SpMat::hstack(cols);
    }
    parts.push_back(std::move(Ex));
    maps.push_back(std::move(phi));
  }
  if (parts.empty()) {
    out.reason = "module has rank but no splitting residues";
    return out;
  }
  out.model = std::make_shared<RGammaModule>(direct_sum(parts));
  ModuleHom Phi;
  Phi.src = out.model.get();
  Phi.dst = &M;
  for (int y = 0; y < C.num_objects(); ++y) {
    std::vector<SpMat> blocks;
    for (auto& mp : maps) blocks.push_back(mp.comp[y]);
    Phi.comp.push_back(SpMat::hstack(blocks));
  }
  if (!Phi.check_natural())
    throw std::logic_error("is_projective: counit not natural");
  if (!Phi.is_objectwise_iso()) {
    out.reason = "counit from sum of E_x S_x M is not an isomorphism";
    return out;
  }
  out.projective = true;
  out.iso = Phi;
  return out;
}

std::optional<ModuleHom> find_isomorphism(const RGammaModule& M, const RGammaModule& N,
                                          unsigned seed, int tries) {
  if (M.rank != N.rank) return std::nullopt;
  auto basis = hom_module_space(M, N);
  for (const ModuleHom& h : basis)
    if (h.is_objectwise_iso()) return h;
  if (basis.empty()) return std::nullopt;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coef(-2, 2);
  for (int t = 0; t < tries; ++t) {
    ModuleHom h = zero_hom(M, N);
    for (const ModuleHom& b : basis) {
      int c = coef(rng);
      if (c) h = h + b.scaled(c);
    }
    if (h.is_objectwise_iso()) return h;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Sub/quotient machinery (fields).

SubmoduleResult kernel_module(const ModuleHom& phi) {
  const RGammaModule& M = *phi.src;
  const OrbitCat& C = *M.cat;
  if (!M.ring.is_field()) throw std::invalid_argument("kernel_module: field rings only");
  SubmoduleResult out;
  out.mod = std::make_shared<RGammaModule>();
  RGammaModule& K = *out.mod;
  K.cat = &C;
  K.ring = M.ring;
  int n = C.num_objects();
  std::vector<SpMat> bases(n);
  K.rank.resize(n);
  for (int x = 0; x < n; ++x) {
    bases[x] = kernel(M.ring, phi.comp[x]);
    K.rank[x] = bases[x].cols;
  }
  alloc_act(K);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < C.mor_count(i, j); ++m) {
        auto X = solve(M.ring, bases[i], M.act[i][j][m] * bases[j]);
        if (!X) throw std::logic_error("kernel_module: not action-stable");
        K.act[i][j][m] = *X;
      }
  out.incl.src = out.mod.get();
  out.incl.dst = &M;
  out.incl.comp = bases;
  return out;
}

SubmoduleResult image_module(const ModuleHom& phi) {
  const RGammaModule& N = *phi.dst;
  const OrbitCat& C = *N.cat;
  if (!N.ring.is_field()) throw std::invalid_argument("image_module: field rings only");
  SubmoduleResult out;
  out.mod = std::make_shared<RGammaModule>();
  RGammaModule& I = *out.mod;
  I.cat = &C;
  I.ring = N.ring;
  int n = C.num_objects();
  std::vector<SpMat> bases(n);
  I.rank.resize(n);
  for (int x = 0; x < n; ++x) {
    std::vector<int> piv = pivot_columns(N.ring, phi.comp[x]);
    bases[x] = phi.comp[x].select_cols(piv);
    I.rank[x] = bases[x].cols;
  }
  alloc_act(I);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < C.mor_count(i, j); ++m) {
        auto X = solve(N.ring, bases[i], N.act[i][j][m] * bases[j]);
        if (!X) throw std::logic_error("image_module: not action-stable");
        I.act[i][j][m] = *X;
      }
  out.incl.src = out.mod.get();
  out.incl.dst = &N;
  out.incl.comp = bases;
  return out;
}

QuotientResult quotient_module(const RGammaModule& N, const std::vector<SpMat>& span) {
  const OrbitCat& C = *N.cat;
  if (!N.ring.is_field()) throw std::invalid_argument("quotient_module: field rings only");
  QuotientResult out;
  out.mod = std::make_shared<RGammaModule>();
  RGammaModule& Q = *out.mod;
  Q.cat = &C;
  Q.ring = N.ring;
  int n = C.num_objects();
  std::vector<SpMat> embed(n), proj(n);
  Q.rank.resize(n);
  for (int x = 0; x < n; ++x) {
    SpMat S = span[x];
    S.reduce(N.ring);
    std::vector<int> comp = complement_of_colspan(N.ring, N.rank[x], S);
    Q.rank[x] = (int)comp.size();
    embed[x] = basis_selection(N.rank[x], comp);
    auto X = express_mod(N.ring, S, embed[x], SpMat::identity(N.rank[x]));
    if (!X) throw std::logic_error("quotient_module: projection failed");
    proj[x] = *X;
  }
  alloc_act(Q);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < C.mor_count(i, j); ++m)
        Q.act[i][j][m] = proj[i] * (N.act[i][j][m] * embed[j]);
  out.proj.src = &N;
  out.proj.dst = out.mod.get();
  out.proj.comp = proj;
  return out;
}

// ---------------------------------------------------------------------------
// Restriction / induction along H <= G.

SubgroupContext make_subgroup_context(const OrbitCat& catG, const Subgroup& H) {
  const PermGroup& G = *catG.G;
  SubgroupContext ctx;
  std::vector<Perm> hgens;
  for (int e : H.gens) hgens.push_back(G.elems[e]);
  ctx.Hgroup = std::make_shared<PermGroup>(PermGroup::generated(G.degree, hgens));
  const PermGroup& HG = *ctx.Hgroup;
  ctx.catG = &catG;
  ctx.H_in_G = H;
  ctx.to_G.resize(HG.elems.size());
  for (int i = 0; i < (int)HG.elems.size(); ++i) ctx.to_G[i] = G.index_of(HG.elems[i]);
  // Restricted family: members of F contained in H, up to H-conjugacy.
  std::set<std::vector<int>> seen;
  std::vector<Subgroup> reps;
  for (const Subgroup& R : catG.F.reps) {
    for (int g = 0; g < (int)G.elems.size(); ++g) {
      bool inside = true;
      for (int e : R.elems)
        if (!H.contains(G.conj(e, g))) {
          inside = false;
          break;
        }
      if (!inside) continue;
      std::vector<int> helems;
      for (int e : R.elems) helems.push_back(HG.index_of(G.elems[G.conj(e, g)]));
      Subgroup S = subgroup_from_elements(HG, helems);
      Subgroup can = canonical_conjugate(S);
      if (seen.insert(can.elems).second) reps.push_back(can);
    }
  }
  std::sort(reps.begin(), reps.end());
  Family FH;
  FH.G = ctx.Hgroup.get();
  FH.reps = std::move(reps);
  ctx.catH = build_orbit_cat(FH);
  for (int i = 0; i < ctx.catH.num_objects(); ++i) {
    std::vector<int> gelems;
    for (int e : ctx.catH.obj(i).elems) gelems.push_back(ctx.to_G[e]);
    Subgroup inG = subgroup_from_elements(G, gelems);
    auto cl = catG.F.class_of(inG);
    if (!cl) throw std::logic_error("restricted family member missing upstairs");
    ctx.obj_map.push_back(cl->first);
    ctx.obj_witness.push_back(cl->second);
  }
  return ctx;
}

namespace {

// Image in catG of the catH morphism (i -> j, position m).
int functor_mor(const SubgroupContext& ctx, int i, int j, int m) {
  const PermGroup& G = *ctx.catG->G;
  int h = ctx.catH.mor[i][j][m];
  int hg = ctx.to_G[h];
  int g = G.mul(G.mul(G.inv(ctx.obj_witness[i]), hg), ctx.obj_witness[j]);
  return ctx.catG->find_mor(ctx.obj_map[i], ctx.obj_map[j], g);
}

}  // namespace

RGammaModule restrict_module(const SubgroupContext& ctx, const RGammaModule& M) {
  const OrbitCat& CH = ctx.catH;
  RGammaModule out;
  out.cat = &CH;
  out.ring = M.ring;
  int n = CH.num_objects();
  out.rank.resize(n);
  for (int i = 0; i < n; ++i) out.rank[i] = M.rank[ctx.obj_map[i]];
  alloc_act(out);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < CH.mor_count(i, j); ++m)
        out.act[i][j][m] =
            M.act[ctx.obj_map[i]][ctx.obj_map[j]][functor_mor(ctx, i, j, m)];
  return out;
}

RGammaModule induce_module(const SubgroupContext& ctx, const RGammaModule& N) {
  const OrbitCat& CG = *ctx.catG;
  const OrbitCat& CH = ctx.catH;
  const PermGroup& G = *CG.G;
  struct Summand {
    int g;        // canonical coset rep, S^g <= H
    int obj;      // catH object for the class of S^g
    int witness;  // h in H (G index) with (S^g)^h = catH rep
  };
  int n = CG.num_objects();
  std::vector<std::vector<Summand>> summands(n);
  std::vector<std::map<int, int>> sumpos(n);
  std::vector<int> hcosets = left_coset_reps(ctx.H_in_G);
  for (int c = 0; c < n; ++c) {
    const Subgroup& S = CG.obj(c);
    for (int g : hcosets) {
      bool inside = true;
      for (int e : S.elems)
        if (!ctx.H_in_G.contains(G.conj(e, g))) {
          inside = false;
          break;
        }
      if (!inside) continue;
      std::vector<int> helems;
      for (int e : S.elems) helems.push_back(ctx.Hgroup->index_of(G.elems[G.conj(e, g)]));
      Subgroup Sg = subgroup_from_elements(*ctx.Hgroup, helems);
      auto cl = CH.F.class_of(Sg);
      if (!cl) throw std::logic_error("induce_module: class missing in restricted family");
      sumpos[c][g] = (int)summands[c].size();
      summands[c].push_back({g, cl->first, ctx.to_G[cl->second]});
    }
  }
  RGammaModule out;
  out.cat = &CG;
  out.ring = N.ring;
  out.rank.assign(n, 0);
  std::vector<std::vector<int>> offs(n);
  for (int c = 0; c < n; ++c) {
    for (const Summand& s : summands[c]) {
      offs[c].push_back(out.rank[c]);
      out.rank[c] += N.rank[s.obj];
    }
    offs[c].push_back(out.rank[c]);
  }
  alloc_act(out);
  for (int c = 0; c < n; ++c)
    for (int cp = 0; cp < n; ++cp)
      for (int m = 0; m < CG.mor_count(c, cp); ++m) {
        SpMat& A = out.act[c][cp][m];  // value(cp) -> value(c)
        int a = CG.mor[c][cp][m];
        long long L = 1;
        std::vector<std::tuple<int, int, const SpMat*>> blocks;
        for (int t = 0; t < (int)summands[cp].size(); ++t) {
          const Summand& col = summands[cp][t];
          int ag = G.mul(a, col.g);
          int grep = coset_rep(ctx.H_in_G, ag);
          auto it = sumpos[c].find(grep);
          if (it == sumpos[c].end())
            throw std::logic_error("induce_module: target summand missing");
          const Summand& row = summands[c][it->second];
          int eta = G.mul(G.inv(grep), ag);  // in H
          int e = G.mul(G.mul(G.inv(row.witness), eta), col.witness);
          int eH = ctx.Hgroup->index_of(G.elems[e]);
          int pos = CH.find_mor(row.obj, col.obj, eH);
          const SpMat& B = N.act[row.obj][col.obj][pos];
          L = std::lcm(L, B.den);
          blocks.push_back({it->second, t, &B});
        }
        A.den = L;
        for (auto& [ri, ti, B] : blocks)
          for (const SpMat::Ent& e : B->ents)
            A.ents.push_back({offs[c][ri] + e.r, offs[cp][ti] + e.c, e.v * (L / B->den)});
        A.finish();
        A.normalize();
      }
  return out;
}

// ---------------------------------------------------------------------------
// Fixed point decomposition.

std::vector<FixedPointSummand> fixed_point_decomposition(const Subgroup& H,
                                                         const Subgroup& K) {
  const PermGroup& G = *H.G;
  Subgroup N = normalizer(H);
  // K-conjugacy classes of subgroups H^g contained in K.
  std::vector<Subgroup> classes;
  std::vector<int> class_wit;  // g with H^g the class member found first
  for (int g = 0; g < (int)G.elems.size(); ++g) {
    bool inside = true;
    for (int e : H.gens)
      if (!K.contains(G.conj(e, g))) {
        inside = false;
        break;
      }
    if (!inside) continue;
    Subgroup Hg = conjugate_subgroup(H, g);
    bool found = false;
    for (const Subgroup& L : classes) {
      // K-conjugate?
      for (int k : K.elems)
        if (conjugate_subgroup(Hg, k) == L) {
          found = true;
          break;
        }
      if (found) break;
    }
    if (!found) {
      classes.push_back(Hg);
      class_wit.push_back(g);
    }
  }
  std::vector<FixedPointSummand> out;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    int g = class_wit[i];
    // gKg^{-1} = conjugate by g^{-1}.
    Subgroup gK = conjugate_subgroup(K, G.inv(g));
    FixedPointSummand s;
    s.rep_g = g;
    s.stab = intersect(N, gK);
    s.index = N.order() / s.stab.order();
    out.push_back(s);
  }
  return out;
}

std::vector<long long> fixed_point_orbit_sizes(const Subgroup& H, const Subgroup& K) {
  const PermGroup& G = *H.G;
  Subgroup N = normalizer(H);
  // Fixed cosets gK with H^g <= K, as canonical reps.
  std::set<int> fixed;
  for (int g : left_coset_reps(K)) {
    bool inside = true;
    for (int e : H.gens)
      if (!K.contains(G.conj(e, g))) {
        inside = false;
        break;
      }
    if (inside) fixed.insert(g);
  }
  std::vector<long long> sizes;
  std::set<int> seen;
  for (int g : fixed) {
    if (seen.count(g)) continue;
    long long sz = 0;
    for (int nelem : N.elems) {
      int t = coset_rep(K, G.mul(nelem, g));
      if (seen.insert(t).second) ++sz;
    }
    sizes.push_back(sz);
  }
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

// ---------------------------------------------------------------------------
// K_0 bookkeeping and random modules.

K0Free k0_zero(const OrbitCat& C) { return K0Free(C.num_objects(), 0); }

K0Free k0_of_class(const OrbitCat& C, int cls) {
  K0Free k = k0_zero(C);
  k[cls] = 1;
  return k;
}

K0Free k0_multiply(const OrbitCat& C, const K0Free& a, const K0Free& b) {
  const PermGroup& G = *C.G;
  K0Free out = k0_zero(C);
  for (int i = 0; i < C.num_objects(); ++i) {
    if (!a[i]) continue;
    for (int j = 0; j < C.num_objects(); ++j) {
      if (!b[j]) continue;
      const Subgroup& H = C.obj(i);
      const Subgroup& K = C.obj(j);
      for (const DoubleCoset& d : double_cosets(H, K)) {
        Subgroup L = intersect(H, conjugate_subgroup(K, G.inv(d.rep)));
        auto cl = C.F.class_of(L);
        if (!cl) throw std::logic_error("k0_multiply: family not intersection-closed");
        out[cl->first] += a[i] * b[j];
      }
    }
  }
  return out;
}

RGammaModule random_module(const OrbitCat& C, const Ring& R, std::mt19937_64& rng,
                           int max_blocks) {
  if (!R.is_field()) throw std::invalid_argument("random_module: field rings only");
  int n = C.num_objects();
  auto rand_classes = [&](int lo) {
    std::vector<int> cls;
    int k = lo + (int)(rng() % max_blocks);
    for (int i = 0; i < k; ++i) cls.push_back((int)(rng() % n));
    return cls;
  };
  RGammaModule F1 = free_module_blocks(C, R, rand_classes(1));
  RGammaModule F0 = free_module_blocks(C, R, rand_classes(1));
  std::vector<SpMat> gens;
  for (int cls : *F0.free_blocks) {
    SpMat g(F1.rank[cls], 1);
    for (int i = 0; i < F1.rank[cls]; ++i) {
      int v = (int)(rng() % 5) - 2;
      if (v) g.set(i, 0, v);
    }
    g.finish();
    gens.push_back(g);
  }
  ModuleHom psi = hom_from_free(F0, F1, gens);
  QuotientResult q = quotient_module(F1, psi.comp);
  return *q.mod;
}

}  // namespace orbikit
