#include "orbikit/resolve.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace orbikit {

int module_length(const RGammaModule& M) {
  const OrbitCat& C = *M.cat;
  int l = -1;
  for (int x = 0; x < C.num_objects(); ++x)
    if (M.rank[x]) l = std::max(l, C.length[x]);
  return l;
}

// Counit sum_x E_x Res_x M -> M: on the (orbit-rep r, v) basis of E_x Res_x M
// at y the map sends (r, v) to M(r)(v).
static std::pair<std::shared_ptr<RGammaModule>, ModuleHom> counit_cover(
    const RGammaModule& M) {
  const OrbitCat& C = *M.cat;
  int n = C.num_objects();
  std::vector<RGammaModule> parts;
  std::vector<int> part_obj;
  for (int x = 0; x < n; ++x) {
    if (!M.rank[x]) continue;
    parts.push_back(extension_functor(restriction_to_aut(M, x)));
    part_obj.push_back(x);
  }
  auto E = std::make_shared<RGammaModule>(direct_sum(parts));
  ModuleHom eps;
  eps.src = E.get();
  eps.dst = &M;
  for (int y = 0; y < n; ++y) {
    std::vector<SpMat> cols;
    for (int x : part_obj) {
      if (!C.mor_count(y, x)) continue;
      for (int r : mor_orbits_under_aut(C, y, x).reps)
        cols.push_back(M.act[y][x][r]);
    }
    eps.comp.push_back(cols.empty() ? SpMat(M.rank[y], 0) : SpMat::hstack(cols));
  }
  if (!eps.is_surjective()) throw std::logic_error("counit_cover: not surjective");
  return {E, eps};
}

EResolution e_resolution(const RGammaModule& M) {
  if (!M.ring.is_field())
    throw std::invalid_argument("e_resolution: field coefficients required");
  EResolution out;
  if (M.is_zero()) return out;
  int guard = module_length(M) + 2;
  const RGammaModule* cur = &M;
  ModuleHom into_prev;  // kernel inclusion into terms.back()
  for (int step = 0;; ++step) {
    if (step > guard) throw std::logic_error("e_resolution: failed to terminate");
    auto [E, eps] = counit_cover(*cur);
    out.terms.push_back(E);
    out.maps.push_back(step == 0 ? eps : eps.then(into_prev));
    SubmoduleResult K = kernel_module(eps);
    if (K.mod->is_zero()) break;
    out.owners.push_back(K.mod);
    cur = K.mod.get();
    into_prev = K.incl;
  }
  return out;
}

bool e_resolution_exact(const EResolution& E, const RGammaModule& M) {
  const Ring& R = M.ring;
  if (E.terms.empty()) return M.is_zero();
  int n = M.cat->num_objects();
  if (!E.maps[0].is_surjective() || !E.maps[0].check_natural()) return false;
  for (std::size_t k = 0; k + 1 < E.maps.size(); ++k) {
    if (!E.maps[k + 1].check_natural()) return false;
    for (int x = 0; x < n; ++x) {
      SpMat comp = E.maps[k].comp[x] * E.maps[k + 1].comp[x];
      comp.reduce(R);
      if (!comp.ents.empty()) return false;
      int nullity = E.terms[k]->rank[x] - rank(R, E.maps[k].comp[x]);
      if (rank(R, E.maps[k + 1].comp[x]) != nullity) return false;
    }
  }
  // Left end: the last map is injective.
  const ModuleHom& last = E.maps.back();
  for (int x = 0; x < n; ++x)
    if (rank(R, last.comp[x]) != E.terms.back()->rank[x]) return false;
  return true;
}

FreeResolution minimal_free_resolution(const RGammaModule& M, int length) {
  if (length < 0) throw std::invalid_argument("minimal_free_resolution: length < 0");
  if (!M.ring.is_field())
    throw std::invalid_argument("minimal_free_resolution: field coefficients required");
  FreeResolution out;
  const RGammaModule* cur = &M;
  ModuleHom incl_prev;
  std::vector<std::shared_ptr<RGammaModule>> kernels;
  for (int k = 0; k <= length; ++k) {
    FreeCover fc = free_cover(*cur);
    out.F.push_back(fc.F);
    if (k == 0)
      out.pi = fc.pi;
    else
      out.d.push_back(fc.pi.then(incl_prev));
    SubmoduleResult K = kernel_module(fc.pi);
    out.tail = K.mod;
    out.tail_incl = K.incl;
    if (K.mod->is_zero()) break;
    kernels.push_back(K.mod);
    cur = K.mod.get();
    incl_prev = K.incl;
  }
  return out;
}

std::vector<int> ext_groups(const RGammaModule& M, const RGammaModule& N,
                            int max_degree) {
  if (max_degree < 0) throw std::invalid_argument("ext_groups: max_degree < 0");
  const Ring& R = M.ring;
  if (!R.is_field()) throw std::invalid_argument("ext_groups: field coefficients required");
  FreeResolution res = minimal_free_resolution(M, max_degree + 1);
  const OrbitCat& C = *M.cat;
  // dim Hom(F_k, N) and the transposed-composition differentials in the
  // Yoneda (block, basis-vector) coordinates.
  auto hom_dim = [&](int k) {
    if (k > res.length()) return 0;
    int d = 0;
    for (int cls : *res.F[k]->free_blocks) d += N.rank[cls];
    return d;
  };
  std::vector<SpMat> delta(max_degree + 1);  // delta[k]: C^k -> C^{k+1}
  for (int k = 0; k <= max_degree; ++k) {
    int rows = hom_dim(k + 1), cols = hom_dim(k);
    if (!rows || !cols || k >= (int)res.d.size()) {
      delta[k] = SpMat(rows, cols);
      continue;
    }
    const ModuleHom& d = res.d[k];  // F_{k+1} -> F_k
    std::vector<ModuleHom> basis = hom_module_space(*res.F[k], N);
    const std::vector<int>& blocks1 = *res.F[k + 1]->free_blocks;
    std::vector<SpMat> colmats;
    for (const ModuleHom& phi : basis) {
      std::vector<SpMat> pieces;
      for (int b = 0; b < (int)blocks1.size(); ++b) {
        int cb = blocks1[b];
        int gen = res.F[k + 1]->free_block_offsets(cb)[b] + C.identity_mor(cb);
        pieces.push_back(phi.comp[cb] * d.comp[cb].select_cols({gen}));
      }
      colmats.push_back(SpMat::vstack(pieces));
    }
    delta[k] = SpMat::hstack(colmats);
    delta[k].reduce(R);
  }
  std::vector<int> out(max_degree + 1);
  int prev_rank = 0;
  for (int k = 0; k <= max_degree; ++k) {
    int rk = rank(R, delta[k]);
    out[k] = hom_dim(k) - rk - prev_rank;
    prev_rank = rk;
  }
  return out;
}

// --------------------------------------------------------------------------
// Group-algebra resolutions over R[Aut(x)], used as adjunction oracles.

GmFreeCover gm_free_cover(const GroupModule& V) {
  const OrbitCat& C = *V.cat;
  int nn = C.mor_count(V.obj, V.obj);
  std::vector<int> gens = gm_minimal_generators(V);
  GmFreeCover out;
  out.copies = (int)gens.size();
  out.F = gm_free(C, V.obj, V.ring, out.copies);
  SpMat pi(V.rank, out.copies * nn);
  std::vector<SpMat> cols;
  for (int k = 0; k < out.copies; ++k)
    for (int c = 0; c < nn; ++c) cols.push_back(V.act[c].select_cols({gens[k]}));
  out.pi = cols.empty() ? pi : SpMat::hstack(cols);
  if (rank(V.ring, out.pi) != V.rank)
    throw std::logic_error("gm_free_cover: not surjective");
  return out;
}

GmKernel gm_kernel(const GroupModule& V, const GroupModule& W, const SpMat& X) {
  GmKernel out;
  out.incl = kernel(V.ring, X);
  out.K.cat = V.cat;
  out.K.obj = V.obj;
  out.K.ring = V.ring;
  out.K.rank = out.incl.cols;
  (void)W;
  for (const SpMat& P : V.act) {
    auto A = solve(V.ring, out.incl, P * out.incl);
    if (!A) throw std::logic_error("gm_kernel: kernel not action-stable");
    out.K.act.push_back(*A);
  }
  return out;
}

std::vector<int> gm_ext_groups(const GroupModule& V, const GroupModule& N,
                               int max_degree) {
  const Ring& R = V.ring;
  if (!R.is_field()) throw std::invalid_argument("gm_ext_groups: field required");
  const OrbitCat& C = *V.cat;
  int nn = C.mor_count(V.obj, V.obj);
  int idpos = C.identity_mor(V.obj);
  // Resolution bookkeeping: copies per step and the boundary matrices
  // d_k: F_k -> F_{k-1}.
  std::vector<int> copies;
  std::vector<SpMat> d;
  GroupModule cur = V;
  SpMat incl_prev;
  for (int k = 0; k <= max_degree + 1; ++k) {
    if (cur.rank == 0) break;
    GmFreeCover fc = gm_free_cover(cur);
    copies.push_back(fc.copies);
    if (k > 0) d.push_back(incl_prev * fc.pi);
    GmKernel K = gm_kernel(fc.F, cur, fc.pi);
    cur = K.K;
    incl_prev = K.incl;
  }
  auto hom_dim = [&](int k) {
    return k < (int)copies.size() ? copies[k] * N.rank : 0;
  };
  std::vector<int> out(max_degree + 1);
  int prev_rank = 0;
  for (int k = 0; k <= max_degree; ++k) {
    int rows = hom_dim(k + 1), cols = hom_dim(k);
    SpMat delta(rows, cols);
    if (rows && cols) {
      // Block (k', k) of delta is sum_c d_{k+1}[(k,c), gen k'] * N.act[c].
      std::vector<std::vector<SpMat>> grid(copies[k + 1],
                                           std::vector<SpMat>(copies[k]));
      for (int kp = 0; kp < copies[k + 1]; ++kp)
        for (int kk = 0; kk < copies[k]; ++kk)
          grid[kp][kk] = SpMat(N.rank, N.rank);
      const SpMat& dk = d[k];
      for (int kp = 0; kp < copies[k + 1]; ++kp) {
        SpMat w = dk.select_cols({kp * nn + idpos});
        for (const SpMat::Ent& e : w.ents) {
          int kk = e.r / nn, c = e.r % nn;
          grid[kp][kk] = grid[kp][kk] + N.act[c].scaled(e.v, w.den);
        }
      }
      delta = SpMat::from_blocks(grid);
      delta.reduce(R);
    }
    int rk = rank(R, delta);
    out[k] = cols - rk - prev_rank;
    prev_rank = rk;
  }
  return out;
}

// --------------------------------------------------------------------------
// Coinduction D_Q and coresolutions.

static void alloc_act_like(RGammaModule& M) {
  const OrbitCat& C = *M.cat;
  int n = C.num_objects();
  M.act.assign(n, {});
  for (int i = 0; i < n; ++i) {
    M.act[i].resize(n);
    for (int j = 0; j < n; ++j)
      M.act[i][j].assign(C.mor_count(i, j), SpMat(M.rank[i], M.rank[j]));
  }
}

DQData dq_functor_data(const OrbitCat& C, int Q, const GroupModule& V) {
  if (V.cat != &C || V.obj != Q)
    throw std::invalid_argument("dq_functor: V is not a module over W(Q)");
  const Ring& R = V.ring;
  int n = C.num_objects();
  int na = C.mor_count(Q, Q);
  DQData out;
  out.Q = Q;
  out.basis.resize(n);
  auto D = std::make_shared<RGammaModule>();
  D->cat = &C;
  D->ring = R;
  D->rank.assign(n, 0);
  // Value at i: matrices Phi (V.rank x |Mor(Q,i)|) with Phi P_a = act[a] Phi,
  // where P_a is right translation x |-> compose(a, x) on Mor(Q, i).
  for (int i = 0; i < n; ++i) {
    int nx = C.mor_count(Q, i);
    if (!nx) {
      out.basis[i] = SpMat(0, 0);
      continue;
    }
    int vars = V.rank * nx;
    std::vector<SpMat> rows;
    for (int a = 0; a < na; ++a) {
      SpMat P(nx, nx);
      for (int x = 0; x < nx; ++x) P.set(C.compose(Q, Q, i, a, x), x, 1);
      P.finish();
      SpMat lhs = P.transpose().kron(SpMat::identity(V.rank));
      SpMat rhs = SpMat::identity(nx).kron(V.act[a]);
      rows.push_back(lhs - rhs);
    }
    SpMat sys = SpMat::vstack(rows);
    sys.reduce(R);
    out.basis[i] = kernel(R, sys);
    if (out.basis[i].cols == 0) out.basis[i] = SpMat(vars, 0);
    D->rank[i] = out.basis[i].cols;
  }
  alloc_act_like(*D);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < C.mor_count(i, j); ++m) {
        if (!D->rank[i] || !D->rank[j]) continue;
        int nxi = C.mor_count(Q, i), nxj = C.mor_count(Q, j);
        SpMat E(nxj, nxi);
        for (int x = 0; x < nxi; ++x) E.set(C.compose(Q, i, j, x, m), x, 1);
        E.finish();
        SpMat img = E.transpose().kron(SpMat::identity(V.rank)) * out.basis[j];
        auto A = solve(R, out.basis[i], img);
        if (!A) throw std::logic_error("dq_functor: structure map leaves the space");
        D->act[i][j][m] = *A;
      }
  out.D = D;
  return out;
}

RGammaModule dq_functor(const OrbitCat& C, int Q, const GroupModule& V) {
  return *dq_functor_data(C, Q, V).D;
}

// DN = sum over supported Q of D_Q(N(Q)), with the unit u |-> (x |-> N(x)u).
struct CoinductionStep {
  std::shared_ptr<RGammaModule> DN;
  ModuleHom j;
};
static CoinductionStep coinduction_unit(const RGammaModule& N) {
  const OrbitCat& C = *N.cat;
  int n = C.num_objects();
  std::vector<DQData> parts;
  for (int Q = 0; Q < n; ++Q)
    if (N.rank[Q]) parts.push_back(dq_functor_data(C, Q, restriction_to_aut(N, Q)));
  if (parts.empty()) {
    CoinductionStep out;
    out.DN = std::make_shared<RGammaModule>(zero_module(C, N.ring));
    out.j = zero_hom(N, *out.DN);
    out.j.src = &N;
    out.j.dst = out.DN.get();
    return out;
  }
  std::vector<RGammaModule> mods;
  for (const DQData& p : parts) mods.push_back(*p.D);
  CoinductionStep out;
  out.DN = std::make_shared<RGammaModule>(direct_sum(mods));
  out.j.src = &N;
  out.j.dst = out.DN.get();
  for (int i = 0; i < n; ++i) {
    std::vector<SpMat> stacked;
    for (const DQData& p : parts) {
      int Q = p.Q;
      int nx = C.mor_count(Q, i);
      if (!p.D->rank[i]) {
        stacked.push_back(SpMat(0, N.rank[i]));
        continue;
      }
      std::vector<SpMat> vecs;  // rows x*V.rank + r of vec(Phi_u), all u at once
      for (int x = 0; x < nx; ++x) vecs.push_back(N.act[Q][i][x]);
      SpMat target = SpMat::vstack(vecs);
      auto coords = solve(N.ring, p.basis[i], target);
      if (!coords) throw std::logic_error("coinduction_unit: unit misses D_Q");
      stacked.push_back(*coords);
    }
    out.j.comp.push_back(SpMat::vstack(stacked));
  }
  return out;
}

Coresolution coresolution(const RGammaModule& N) {
  if (!N.ring.is_field())
    throw std::invalid_argument("coresolution: field coefficients required");
  Coresolution out;
  if (N.is_zero()) return out;
  const RGammaModule* cur = &N;
  ModuleHom out_of_prev;  // projection D[k-1] -> C^k N
  int guard = N.cat->max_length() + 3;
  for (int step = 0;; ++step) {
    if (step > guard) throw std::logic_error("coresolution: failed to terminate");
    CoinductionStep st = coinduction_unit(*cur);
    out.D.push_back(st.DN);
    out.maps.push_back(step == 0 ? st.j : out_of_prev.then(st.j));
    QuotientResult Cq = quotient_module(*st.DN, st.j.comp);
    if (Cq.mod->is_zero()) break;
    out.owners.push_back(Cq.mod);
    cur = Cq.mod.get();
    out_of_prev = Cq.proj;
  }
  return out;
}

bool coresolution_exact(const Coresolution& co, const RGammaModule& N) {
  const Ring& R = N.ring;
  if (co.D.empty()) return N.is_zero();
  int n = N.cat->num_objects();
  // Injective at N.
  for (int x = 0; x < n; ++x)
    if (rank(R, co.maps[0].comp[x]) != N.rank[x]) return false;
  for (std::size_t k = 0; k < co.maps.size(); ++k)
    if (!co.maps[k].check_natural()) return false;
  for (std::size_t k = 0; k + 1 < co.maps.size(); ++k) {
    for (int x = 0; x < n; ++x) {
      SpMat comp = co.maps[k + 1].comp[x] * co.maps[k].comp[x];
      comp.reduce(R);
      if (!comp.ents.empty()) return false;
      int nullity = co.D[k]->rank[x] - rank(R, co.maps[k + 1].comp[x]);
      if (rank(R, co.maps[k].comp[x]) != nullity) return false;
    }
  }
  // Surjective at the right end.
  const ModuleHom& last = co.maps.back();
  for (int x = 0; x < n; ++x)
    if (rank(R, last.comp[x]) != co.D.back()->rank[x]) return false;
  return true;
}

ProjDimVerdict finite_projdim_obstruction(const RGammaModule& M, int extra) {
  if (!M.ring.is_field())
    throw std::invalid_argument("finite_projdim_obstruction: field required");
  const OrbitCat& C = *M.cat;
  int n = C.num_objects();
  ProjDimVerdict out;
  // Maximal-object criterion: a finite projective resolution evaluates at a
  // maximal object x to a finite projective resolution over R[Aut(x)], so
  // M(x) must be projective there.
  for (int x = 0; x < n; ++x) {
    bool maximal = true;
    for (int y = 0; y < n && maximal; ++y)
      if (y != x && C.leq(x, y)) maximal = false;
    if (!maximal || !M.rank[x]) continue;
    if (!gm_projective_witness(restriction_to_aut(M, x))) {
      out.obstructed = true;
      out.object = x;
      return out;
    }
  }
  if (is_projective(M).projective) {
    out.finite = true;
    out.projdim = 0;
    return out;
  }
  int bound = C.max_length() + extra;
  out.bound = bound;
  const RGammaModule* cur = &M;
  std::shared_ptr<RGammaModule> owner;
  for (int k = 0; k < bound; ++k) {
    FreeCover fc = free_cover(*cur);
    SubmoduleResult K = kernel_module(fc.pi);
    if (K.mod->is_zero()) {
      out.finite = true;
      out.projdim = k;
      return out;
    }
    if (is_projective(*K.mod).projective) {
      out.finite = true;
      out.projdim = k + 1;
      return out;
    }
    owner = K.mod;
    cur = owner.get();
  }
  return out;
}

}  // namespace orbikit
