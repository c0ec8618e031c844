#include "orbikit/surgery.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace orbikit {

namespace {

void field_only(const Ring& R, const char* what) {
  if (!R.is_field())
    throw std::invalid_argument(std::string(what) + ": field coefficients required");
}

SpMat unit_col(int rows, int r) {
  SpMat e(rows, 1);
  e.set(r, 0, 1);
  e.finish();
  return e;
}

std::vector<int> iota_range(int from, int count) {
  std::vector<int> v(count);
  std::iota(v.begin(), v.end(), from);
  return v;
}

SpMat comp_or_zero(const ChainMap& f, int k, int x) {
  if (k >= 0 && k < (int)f.f.size() && !f.f[k].empty()) return f.f[k][x];
  return SpMat(f.dst->rank_at(k, x), f.src->rank_at(k, x));
}

void require_complex(const ChainComplex& C, const char* what) {
  std::string why;
  if (!complex_check(C, &why))
    throw std::logic_error(std::string(what) + ": produced an invalid complex: " + why);
}

void require_chain_map(const ChainMap& g, const char* what) {
  std::string why;
  if (!chain_map_check(g, &why))
    throw std::logic_error(std::string(what) + ": produced an invalid chain map: " + why);
}

// Natural maps out of M are parameterized by the generator images of a
// block-free model: M itself when it carries free blocks, otherwise a split
// free cover (M must be projective).  test_col(b) is a column of M(cls[b])
// such that prescribing the image of test_col(b) for every block b determines
// the natural map.
struct FreeSrc {
  const RGammaModule* M = nullptr;
  std::shared_ptr<RGammaModule> Fown;
  const RGammaModule* F = nullptr;
  std::vector<SpMat> sigma;  // M(x) -> F(x); empty means F = M
  std::vector<SpMat> pi;     // F(x) -> M(x); empty means F = M
  std::vector<int> cls;      // block classes of F
  std::vector<int> off;      // generator position per block, at its class

  SpMat test_col(int b) const {
    if (pi.empty()) return unit_col(M->rank[cls[b]], off[b]);
    return pi[cls[b]].col(off[b]);
  }
  SpMat to_model(int x, const SpMat& v) const { return sigma.empty() ? v : sigma[x] * v; }
};

FreeSrc make_src(const RGammaModule& M, const std::string& what) {
  FreeSrc s;
  s.M = &M;
  if (M.free_blocks) {
    s.F = &M;
  } else {
    FreeCover fc = free_cover(M);
    auto sec = split_surjection(fc.pi);
    if (!sec)
      throw std::invalid_argument(what + ": term is not projective");
    s.Fown = fc.F;
    s.F = s.Fown.get();
    s.pi = fc.pi.comp;
    s.sigma = sec->comp;
  }
  const OrbitCat& cat = *M.cat;
  s.cls = *s.F->free_blocks;
  for (int b = 0; b < (int)s.cls.size(); ++b) {
    int c = s.cls[b];
    s.off.push_back(s.F->free_block_offsets(c)[b] + cat.identity_mor(c));
  }
  return s;
}

// Natural s: src.M -> A with post[x] . s[x] = target[x] at every object,
// found by solving for the generator images (post[x]: A(x) -> T(x),
// target[x]: T(x) x M(x)).  Throws `what` when some generator image has no
// preimage.
std::vector<SpMat> lift_through(const Ring& R, const FreeSrc& src, const RGammaModule& A,
                                const std::vector<SpMat>& post,
                                const std::vector<SpMat>& target, const std::string& what) {
  const OrbitCat& cat = *src.M->cat;
  int nb = (int)src.cls.size();
  std::vector<SpMat> imgs(nb);
  for (int x = 0; x < cat.num_objects(); ++x) {
    std::vector<int> bl;
    for (int b = 0; b < nb; ++b)
      if (src.cls[b] == x) bl.push_back(b);
    if (bl.empty()) continue;
    std::vector<SpMat> cols;
    for (int b : bl) cols.push_back(target[x] * src.test_col(b));
    auto X = solve(R, post[x], SpMat::hstack(cols));
    if (!X) throw std::runtime_error(what);
    for (int t = 0; t < (int)bl.size(); ++t) imgs[bl[t]] = X->col(t);
  }
  ModuleHom hh = hom_from_free(*src.F, A, imgs);
  if (src.sigma.empty()) return hh.comp;
  std::vector<SpMat> out;
  out.reserve(cat.num_objects());
  for (int x = 0; x < cat.num_objects(); ++x) out.push_back(hh.comp[x] * src.sigma[x]);
  return out;
}

// Inverse of suspension: shift one degree down and negate the differentials.
ChainComplex desuspend(const ChainComplex& C) {
  if (C.top() >= 0 && !C.terms[0].is_zero())
    throw std::logic_error("desuspend: nonzero degree-0 term");
  if (C.top() <= 0) return zero_complex(*C.cat, C.ring);
  const OrbitCat& cat = *C.cat;
  int n = cat.num_objects();
  ChainComplex out;
  out.cat = &cat;
  out.ring = C.ring;
  for (int k = 1; k <= C.top(); ++k) {
    out.terms.push_back(C.terms[k]);
    out.d.emplace_back();
    if (k >= 2)
      for (int x = 0; x < n; ++x) out.d[k - 1].push_back(C.d[k][x].scaled(-1));
  }
  return out;
}

}  // namespace

HomologyModule homology_module(const ChainComplex& C, int k) {
  field_only(C.ring, "homology_module");
  const OrbitCat& cat = *C.cat;
  const Ring& R = C.ring;
  int n = cat.num_objects();
  HomologyModule out;
  auto H = std::make_shared<RGammaModule>();
  H->cat = &cat;
  H->ring = R;
  H->covariant = false;
  for (int x = 0; x < n; ++x) {
    SpMat Z = kernel(R, C.diff(k, x));
    SpMat B = C.diff(k + 1, x);
    std::vector<int> reps;
    for (int p : pivot_columns(R, SpMat::hstack({B, Z})))
      if (p >= B.cols) reps.push_back(p - B.cols);
    out.cycles.push_back(Z.select_cols(reps));
    out.boundaries.push_back(B);
    H->rank.push_back((int)reps.size());
  }
  H->act.resize(n);
  for (int i = 0; i < n; ++i) {
    H->act[i].resize(n);
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < cat.mor_count(i, j); ++m) {
        SpMat V = C.terms[k].act[i][j][m] * out.cycles[j];
        auto X = express_mod(R, out.boundaries[i], out.cycles[i], V);
        if (!X) throw std::logic_error("homology_module: action does not preserve cycles");
        H->act[i][j].push_back(*X);
      }
  }
  out.H = H;
  return out;
}

SpMat homology_classes(const HomologyModule& Hk, int x, const SpMat& V) {
  auto X = express_mod(Hk.H->ring, Hk.boundaries[x], Hk.cycles[x], V);
  if (!X) throw std::invalid_argument("homology_classes: columns are not cycles");
  return *X;
}

// ---------------------------------------------------------------------------
// kill_top_free

namespace {

struct KillAttempt {
  bool ok = false;
  ChainComplex D;
};

// One attempt at dimension d; fails (ok = false) exactly when the cokernel of
// the top differential at obj is not free, which stabilization repairs.
KillAttempt kill_attempt(const ChainComplex& Cs, int obj, int d) {
  const OrbitCat& cat = *Cs.cat;
  const Ring& R = Cs.ring;
  int n = cat.num_objects();
  int nw = cat.mor_count(obj, obj);
  int idm = cat.identity_mor(obj);
  KillAttempt res;

  auto s_blocks = [&](int k) {
    std::vector<int> s;
    const std::vector<int>& cls = *Cs.terms[k].free_blocks;
    for (int b = 0; b < (int)cls.size(); ++b)
      if (cat.leq(obj, cls[b])) {
        if (cls[b] != obj)
          throw std::invalid_argument("kill_top_free: degree " + std::to_string(k) +
                                      " has a block of class " + std::to_string(cls[b]) +
                                      " above object " + std::to_string(obj));
        s.push_back(b);
      }
    return s;
  };
  std::vector<int> Sd = s_blocks(d), Sd1 = s_blocks(d - 1);
  int a = (int)Sd.size(), bs = (int)Sd1.size();
  int an = a * nw, bsn = bs * nw;
  const RGammaModule& Td = Cs.terms[d];
  const RGammaModule& Td1 = Cs.terms[d - 1];
  std::vector<int> offA = Td.free_block_offsets(obj);
  std::vector<int> offB = Td1.free_block_offsets(obj);
  SpMat theta = Cs.d[d][obj];  // bsn x an: only isotypic blocks survive at obj
  if (theta.rows != bsn || theta.cols != an)
    throw std::logic_error("kill_top_free: unexpected value layout at the killed object");
  if (a == 0) throw std::invalid_argument("kill_top_free: no top blocks at the object");

  // Equivariant retraction r with r . theta = id, parameterized by the images
  // u_k of the degree d-1 generators: r(e_{k,c}) = Pa_c u_k.  Imposing the
  // identity on the degree-d generators suffices by equivariance.
  std::vector<std::vector<SpMat>> grid;
  std::vector<SpMat> rhs_blocks;
  for (int j = 0; j < a; ++j) {
    SpMat v = theta.col(offA[Sd[j]] + idm);
    std::vector<SpMat> row(bs);
    for (int k = 0; k < bs; ++k) row[k] = SpMat(an, an);
    for (const auto& e : v.ents) {
      for (int k = 0; k < bs; ++k) {
        int lo = offB[Sd1[k]];
        if (e.r >= lo && e.r < lo + nw) {
          row[k] = row[k] + Td.act[obj][obj][e.r - lo].scaled(e.v, v.den);
          break;
        }
      }
    }
    grid.push_back(row);
    rhs_blocks.push_back(unit_col(an, offA[Sd[j]] + idm));
  }
  auto U = solve(R, SpMat::from_blocks(grid), SpMat::vstack(rhs_blocks));
  if (!U) return res;  // cokernel not free yet: stabilize

  // r as a matrix on values at obj, and the projection onto a complement of
  // the image of theta.
  std::vector<SpMat> rcols(bsn);
  for (int k = 0; k < bs; ++k) {
    SpMat uk = U->select_rows(iota_range(k * an, an));
    for (int c = 0; c < nw; ++c) rcols[offB[Sd1[k]] + c] = Td.act[obj][obj][c] * uk;
  }
  SpMat rmat = SpMat::hstack(rcols);
  SpMat pi_c = SpMat::identity(bsn) - theta * rmat;

  // Greedy equivariant basis of the complement: candidate generators are the
  // projections of the old generators; each accepted generator contributes the
  // full orbit T(q) of value columns.
  int m = bs - a;
  auto orbit_cols = [&](const SpMat& q) {
    std::vector<SpMat> tc(nw);
    for (int c = 0; c < nw; ++c) tc[c] = Td1.act[obj][obj][c] * q;
    return SpMat::hstack(tc);
  };
  SpMat accum = theta;
  int have = rank(R, accum);
  std::vector<SpMat> qs;
  for (int k = 0; k < bs && (int)qs.size() < m; ++k) {
    SpMat q = pi_c.col(offB[Sd1[k]] + idm);
    SpMat cand = SpMat::hstack({accum, orbit_cols(q)});
    int r2 = rank(R, cand);
    if (r2 == have + nw) {
      accum = cand;
      have = r2;
      qs.push_back(q);
    }
  }
  if ((int)qs.size() < m) return res;  // stabilize

  std::vector<SpMat> psi_parts{SpMat(bsn, 0)};
  for (const SpMat& q : qs) psi_parts.push_back(orbit_cols(q));
  SpMat psi_val = SpMat::hstack(psi_parts);            // bsn x m*nw
  SpMat full = SpMat::hstack({psi_val, theta});        // bsn x bsn
  if (!is_invertible(R, full)) return res;             // stabilize
  auto Sol = solve(R, full, SpMat::identity(bsn));
  if (!Sol) return res;
  SpMat rho_hat = Sol->select_rows(iota_range(0, m * nw));  // m*nw x bsn

  // Natural maps assembled from the value data at obj.
  std::vector<int> nclsd, nclsd1;
  std::vector<int> nidx_d, nidx_d1;
  {
    const std::vector<int>& cd = *Td.free_blocks;
    for (int b = 0; b < (int)cd.size(); ++b)
      if (!cat.leq(obj, cd[b])) {
        nclsd.push_back(cd[b]);
        nidx_d.push_back(b);
      }
    const std::vector<int>& cd1 = *Td1.free_blocks;
    for (int b = 0; b < (int)cd1.size(); ++b)
      if (!cat.leq(obj, cd1[b])) {
        nclsd1.push_back(cd1[b]);
        nidx_d1.push_back(b);
      }
  }
  RGammaModule FNd = free_module_blocks(cat, R, nclsd);
  RGammaModule FNd1 = free_module_blocks(cat, R, nclsd1);
  RGammaModule FS = free_module_blocks(cat, R, std::vector<int>(bs, obj));
  RGammaModule Fm = free_module_blocks(cat, R, std::vector<int>(m, obj));

  // Whole-block column selections (natural in both directions).
  auto block_cols = [&](const RGammaModule& T, const std::vector<int>& idx, int x) {
    std::vector<int> cols;
    std::vector<int> off = T.free_block_offsets(x);
    const std::vector<int>& cls = *T.free_blocks;
    for (int b : idx)
      for (int c = 0; c < cat.mor_count(x, cls[b]); ++c) cols.push_back(off[b] + c);
    return cols;
  };
  std::vector<SpMat> incl_n_d(n), proj_n_d(n), incl_n_d1(n), proj_n_d1(n), proj_s_d1(n);
  std::vector<int> sidx_d1(Sd1.begin(), Sd1.end());
  for (int x = 0; x < n; ++x) {
    SpMat sel = SpMat::identity(Td.rank[x]).select_cols(block_cols(Td, nidx_d, x));
    incl_n_d[x] = sel;
    proj_n_d[x] = sel.transpose();
    SpMat sel1 = SpMat::identity(Td1.rank[x]).select_cols(block_cols(Td1, nidx_d1, x));
    incl_n_d1[x] = sel1;
    proj_n_d1[x] = sel1.transpose();
    proj_s_d1[x] =
        SpMat::identity(Td1.rank[x]).select_cols(block_cols(Td1, sidx_d1, x)).transpose();
  }

  // rho: FS -> Fm from the rows of the inverse; Psi: Fm -> C_{d-1} from the
  // accepted generators.
  std::vector<SpMat> rho_imgs(bs), psi_imgs(m);
  for (int k = 0; k < bs; ++k) rho_imgs[k] = rho_hat.col(offB[Sd1[k]] + idm);
  for (int j = 0; j < m; ++j) psi_imgs[j] = qs[j];
  ModuleHom rho_map = hom_from_free(FS, Fm, rho_imgs);
  ModuleHom psi_map = hom_from_free(Fm, Td1, psi_imgs);
  // FS and the S-columns of C_{d-1} are literally the same free module data,
  // so rho extends to C_{d-1} through the block projection.
  std::vector<SpMat> rho_full(n);
  for (int x = 0; x < n; ++x) rho_full[x] = rho_map.comp[x] * proj_s_d1[x];

  // The reduced complex D and the homotopy equivalence g: Cs -> D.
  ChainComplex D;
  D.cat = &cat;
  D.ring = R;
  D.terms = Cs.terms;
  D.terms[d] = FNd;
  D.terms[d - 1] = direct_sum({Fm, FNd1});
  D.d = Cs.d;
  ChainMap g;
  g.f.resize(Cs.top() + 1);
  for (int k = 0; k <= Cs.top(); ++k)
    for (int x = 0; x < n; ++x) {
      if (k == d)
        g.f[k].push_back(proj_n_d[x]);
      else if (k == d - 1)
        g.f[k].push_back(SpMat::vstack({rho_full[x], proj_n_d1[x]}));
      else
        g.f[k].push_back(SpMat::identity(Cs.terms[k].rank[x]));
    }
  for (int x = 0; x < n; ++x) {
    if (d - 1 >= 1)
      D.d[d - 1][x] = Cs.d[d - 1][x] * SpMat::hstack({psi_map.comp[x], incl_n_d1[x]});
    D.d[d][x] = g.f[d - 1][x] * Cs.d[d][x] * incl_n_d[x];
    if (d + 1 <= Cs.top()) D.d[d + 1][x] = proj_n_d[x] * Cs.d[d + 1][x];
  }
  if (Cs.aug && d - 1 >= 1) D.aug = Cs.aug;

  res.D = std::move(D);
  require_complex(res.D, "kill_top_free");
  g.src = &Cs;
  g.dst = &res.D;
  require_chain_map(g, "kill_top_free");
  if (!quasi_iso_check(g))
    throw std::logic_error("kill_top_free: reduction is not a quasi-isomorphism");
  res.ok = true;
  return res;
}

}  // namespace

KillResult kill_top_free(const ChainComplex& C, int obj) {
  const OrbitCat& cat = *C.cat;
  int n = cat.num_objects();
  for (int k = 0; k <= C.top(); ++k)
    if (!C.terms[k].free_blocks)
      throw std::invalid_argument("kill_top_free: terms must carry free blocks");

  DimFunction dim = dim_function(C);
  int d = dim[obj];
  if (d < 1) throw std::invalid_argument("kill_top_free: dimension at the object is below 1");
  int hd = -1;
  for (int k = C.top(); k >= 0; --k)
    if (!homology_at(C, k, obj).is_trivial()) {
      hd = k;
      break;
    }
  if (hd >= d)
    throw std::invalid_argument("kill_top_free: homology dimension " + std::to_string(hd) +
                                " at object " + std::to_string(obj) +
                                " is not below the dimension " + std::to_string(d));
  for (int K = 0; K < n; ++K)
    if (K != obj && cat.leq(obj, K) && dim[K] > d - 2)
      throw std::invalid_argument("kill_top_free: object " + std::to_string(K) +
                                  " above " + std::to_string(obj) + " has dimension " +
                                  std::to_string(dim[K]) + " > " + std::to_string(d - 2));

  ChainComplex Cs = C;
  int rounds = cat.max_length() + 3;
  for (int s = 0; s < rounds; ++s) {
    KillAttempt att = kill_attempt(Cs, obj, d);
    if (att.ok) return {std::move(att.D), s};
    if (d < 2)
      throw std::runtime_error("kill_top_free: stabilization needs dimension >= 2");
    Cs = direct_sum_complex({Cs, elementary_complex(cat, C.ring, obj, d - 2)});
  }
  throw std::runtime_error("kill_top_free: stabilization bound exceeded");
}

// ---------------------------------------------------------------------------
// modify_homology

namespace {

// Mapping cone over a lifted resolution of ker(phi): kills ker(phi) inside
// H_k while every other homology module is untouched.
ChainComplex cone_kill_kernel(const ChainComplex& C, const HomologyModule& Hk, int k,
                              const ModuleHom& phi) {
  const OrbitCat& cat = *C.cat;
  const Ring& R = C.ring;
  int n = cat.num_objects();
  SubmoduleResult kap = kernel_module(phi);
  if (kap.mod->is_zero()) return C;

  EResolution E = e_resolution(*kap.mod);
  for (const auto& term : E.terms) {
    ProjectiveWitness w = is_projective(*term);
    if (!w.projective)
      throw std::runtime_error(
          "modify_homology: resolution not found within length bound (" + w.reason + ")");
  }
  int ell = E.length();
  for (int j = 1; j < ell; ++j)
    for (int x = 0; x < n; ++x)
      if (!homology_at(C, k + j, x).is_trivial())
        throw std::runtime_error("modify_homology: gap too small (H_" +
                                 std::to_string(k + j) + " nonzero at object " +
                                 std::to_string(x) + ")");

  // The resolution as a complex P placed in degrees k..k+ell.
  ChainComplex P;
  P.cat = &cat;
  P.ring = R;
  for (int j = 0; j < k; ++j) {
    P.terms.push_back(zero_module(cat, R));
    P.d.emplace_back();
    if (j >= 1)
      for (int x = 0; x < n; ++x) P.d[j].push_back(SpMat(0, 0));
  }
  for (int t = 0; t <= ell; ++t) {
    P.terms.push_back(*E.terms[t]);
    P.d.emplace_back();
    if (k + t >= 1)
      for (int x = 0; x < n; ++x) {
        if (t == 0)
          P.d[k].push_back(SpMat(P.rank_at(k - 1, x), E.terms[0]->rank[x]));
        else
          P.d[k + t].push_back(E.maps[t].comp[x]);
      }
  }

  // f_0: bottom term -> cycles, realizing incl . eps on homology.
  ChainMap f;
  f.src = &P;
  f.dst = &C;
  f.f.resize(P.top() + 1);
  for (int j = 0; j < k; ++j)
    for (int x = 0; x < n; ++x) f.f[j].push_back(SpMat(C.rank_at(j, x), 0));
  {
    FreeSrc s0 = make_src(*E.terms[0], "modify_homology");
    std::vector<SpMat> imgs(s0.cls.size());
    for (int b = 0; b < (int)s0.cls.size(); ++b) {
      int y = s0.cls[b];
      SpMat hcol = kap.incl.comp[y] * (E.maps[0].comp[y] * s0.test_col(b));
      imgs[b] = Hk.cycles[y] * hcol;
    }
    ModuleHom f0 = hom_from_free(*s0.F, C.terms[k], imgs);
    for (int x = 0; x < n; ++x)
      f.f[k].push_back(s0.sigma.empty() ? f0.comp[x] : f0.comp[x] * s0.sigma[x]);
  }
  for (int t = 1; t <= ell; ++t) {
    std::vector<SpMat> post(n), target(n);
    for (int x = 0; x < n; ++x) {
      post[x] = C.diff(k + t, x);
      target[x] = f.f[k + t - 1][x] * E.maps[t].comp[x];
    }
    f.f[k + t] = lift_through(R, make_src(*E.terms[t], "modify_homology"), C.terms[k + t],
                              post, target, "modify_homology: gap too small");
  }
  require_chain_map(f, "modify_homology");
  return mapping_cone(f);
}

// psi: H_k(CA) -> T induced by phi through the chosen representatives, using
// that CA agrees with C in degrees k and below so its cycles are C-cycles.
ModuleHom induced_on_quotient(const HomologyModule& Hk, const ModuleHom& phi,
                              const HomologyModule& HA) {
  ModuleHom psi;
  psi.src = HA.H.get();
  psi.dst = phi.dst;
  int n = (int)HA.H->rank.size();
  for (int x = 0; x < n; ++x)
    psi.comp.push_back(phi.comp[x] * homology_classes(Hk, x, HA.cycles[x]));
  return psi;
}

}  // namespace

ChainComplex modify_homology(const ChainComplex& C, int k, const HomologyModule& Hk,
                             const ModuleHom& phi) {
  field_only(C.ring, "modify_homology");
  if (phi.src != Hk.H.get())
    throw std::invalid_argument("modify_homology: phi must start at the given homology");
  const OrbitCat& cat = *C.cat;
  const Ring& R = C.ring;
  int n = cat.num_objects();
  const RGammaModule& T = *phi.dst;

  ChainComplex CA = cone_kill_kernel(C, Hk, k, phi);
  HomologyModule HA = homology_module(CA, k);
  ModuleHom psi = induced_on_quotient(Hk, phi, HA);
  if (psi.is_objectwise_iso()) return CA;

  // Injective stage: stabilize degree k by a projective cover of coker(psi),
  // then kill the kernel of the extended (now surjective) map.
  QuotientResult co = quotient_module(T, psi.comp);
  EResolution E2 = e_resolution(*co.mod);
  {
    ProjectiveWitness w = is_projective(*E2.terms[0]);
    if (!w.projective)
      throw std::runtime_error(
          "modify_homology: resolution not found within length bound (" + w.reason + ")");
  }
  std::vector<SpMat> sigma0 =
      lift_through(R, make_src(*E2.terms[0], "modify_homology"), T, co.proj.comp,
                   E2.maps[0].comp, "modify_homology: cover does not lift");

  ChainComplex Chat = direct_sum_complex({CA, module_in_degree(*E2.terms[0], k)});
  HomologyModule Hhat = homology_module(Chat, k);
  ModuleHom phihat;
  phihat.src = Hhat.H.get();
  phihat.dst = phi.dst;
  for (int x = 0; x < n; ++x) {
    int ca = CA.rank_at(k, x);
    int pr = E2.terms[0]->rank[x];
    SpMat zpart = Hhat.cycles[x].select_rows(iota_range(0, ca));
    SpMat ppart = Hhat.cycles[x].select_rows(iota_range(ca, pr));
    phihat.comp.push_back(psi.comp[x] * homology_classes(HA, x, zpart) +
                          sigma0[x] * ppart);
  }

  ChainComplex CB = cone_kill_kernel(Chat, Hhat, k, phihat);
  HomologyModule HB = homology_module(CB, k);
  ModuleHom check = induced_on_quotient(Hhat, phihat, HB);
  if (!check.is_objectwise_iso())
    throw std::logic_error("modify_homology: result homology does not match the target");
  return CB;
}

// ---------------------------------------------------------------------------
// pushout

PushoutResult pushout_complexes(const ChainMap& f, const ChainMap& g) {
  if (f.src != g.src)
    throw std::invalid_argument("pushout_complexes: maps must share a source");
  field_only(f.src->ring, "pushout_complexes");
  std::string why;
  if (!chain_map_check(f, &why) || !chain_map_check(g, &why))
    throw std::invalid_argument("pushout_complexes: non-chain-map input: " + why);
  const ChainComplex& B = *f.dst;
  const ChainComplex& Cc = *g.dst;
  const OrbitCat& cat = *B.cat;
  const Ring& R = B.ring;
  int n = cat.num_objects();
  int topP = std::max(B.top(), Cc.top());

  PushoutResult out;
  out.P = std::make_shared<ChainComplex>();
  ChainComplex& P = *out.P;
  P.cat = &cat;
  P.ring = R;
  std::vector<std::vector<SpMat>> proj(topP + 1);
  for (int k = 0; k <= topP; ++k) {
    RGammaModule sum =
        direct_sum({k <= B.top() ? B.terms[k] : zero_module(cat, R),
                    k <= Cc.top() ? Cc.terms[k] : zero_module(cat, R)});
    std::vector<SpMat> span(n);
    for (int x = 0; x < n; ++x)
      span[x] = SpMat::vstack({comp_or_zero(f, k, x), comp_or_zero(g, k, x).scaled(-1)});
    QuotientResult q = quotient_module(sum, span);
    P.terms.push_back(*q.mod);
    proj[k] = q.proj.comp;
  }
  P.d.resize(topP + 1);
  for (int k = 1; k <= topP; ++k)
    for (int x = 0; x < n; ++x) {
      SpMat dsum = SpMat::diag_sum({B.diff(k, x), Cc.diff(k, x)});
      SpMat rhs = proj[k - 1][x] * dsum;
      auto Xt = solve(R, proj[k][x].transpose(), rhs.transpose());
      if (!Xt) throw std::logic_error("pushout_complexes: span is not a subcomplex");
      P.d[k].push_back(Xt->transpose());
    }
  require_complex(P, "pushout_complexes");

  out.from_b.src = &B;
  out.from_b.dst = out.P.get();
  out.from_c.src = &Cc;
  out.from_c.dst = out.P.get();
  out.from_b.f.resize(topP + 1);
  out.from_c.f.resize(topP + 1);
  for (int k = 0; k <= topP; ++k)
    for (int x = 0; x < n; ++x) {
      int rb = B.rank_at(k, x), rc = Cc.rank_at(k, x);
      out.from_b.f[k].push_back(
          proj[k][x] * SpMat::vstack({SpMat::identity(rb), SpMat(rc, rb)}));
      out.from_c.f[k].push_back(
          proj[k][x] * SpMat::vstack({SpMat(rb, rc), SpMat::identity(rc)}));
    }
  require_chain_map(out.from_b, "pushout_complexes");
  require_chain_map(out.from_c, "pushout_complexes");
  return out;
}

std::optional<ChainMap> pushout_factor(const PushoutResult& po, const ChainMap& u,
                                       const ChainMap& v) {
  if (u.src != po.from_b.src || v.src != po.from_c.src || u.dst != v.dst)
    throw std::invalid_argument("pushout_factor: cocone endpoints do not match");
  const ChainComplex& P = *po.P;
  const Ring& R = P.ring;
  int n = P.cat->num_objects();
  ChainMap w;
  w.src = po.P.get();
  w.dst = u.dst;
  w.f.resize(P.top() + 1);
  for (int k = 0; k <= P.top(); ++k)
    for (int x = 0; x < n; ++x) {
      // Solve w . from_sum = [u | v] through the projection: the pushout term
      // basis is a quotient basis, so w is determined by the stacked cocone.
      SpMat t = SpMat::hstack({comp_or_zero(u, k, x), comp_or_zero(v, k, x)});
      SpMat fromsum = SpMat::hstack(
          {po.from_b.f[k][x], po.from_c.f[k][x]});
      auto Xt = solve(R, fromsum.transpose(), t.transpose());
      if (!Xt) return std::nullopt;
      w.f[k].push_back(Xt->transpose());
    }
  std::string why;
  if (!chain_map_check(w, &why)) return std::nullopt;
  return w;
}

// ---------------------------------------------------------------------------
// postnikov tower

PostnikovTower postnikov_tower(const ChainComplex& C, int window) {
  field_only(C.ring, "postnikov_tower");
  const OrbitCat& cat = *C.cat;
  const Ring& R = C.ring;
  int n = cat.num_objects();
  int W = window < 0 ? C.top() : window;
  const char* msg = "postnikov: lifting system inconsistent";

  PostnikovTower tw;
  tw.window = W;
  tw.base = std::make_shared<ChainComplex>(C);
  const ChainComplex& base = *tw.base;

  auto S = std::make_shared<ChainComplex>(zero_complex(cat, R));
  tw.owners.push_back(S);
  ChainMap fprev;
  fprev.src = tw.base.get();
  fprev.dst = S.get();
  fprev.f.resize(base.top() + 1);
  for (int k = 0; k <= base.top(); ++k)
    for (int x = 0; x < n; ++x) fprev.f[k].push_back(SpMat(S->rank_at(k, x), base.rank_at(k, x)));

  for (int i = 0; i <= W; ++i) {
    HomologyModule Hi = homology_module(base, i);
    if (Hi.H->is_zero()) {
      tw.sections.push_back(S);
      tw.targets.push_back(nullptr);
      tw.alphas.emplace_back();
      tw.to_section.push_back(fprev);
      continue;
    }
    const RGammaModule& H = *Hi.H;

    // Truncated minimal resolution, long enough that the truncation artifact
    // sits above both the current complexes and the window.
    int topX = std::max(S->top(), base.top() + 1);
    int L = std::max(topX, W + 2) - (i + 1);
    FreeResolution res = minimal_free_resolution(H, L);

    // Y = the resolution placed in degrees i+1 .. i+1+len.
    auto Y = std::make_shared<ChainComplex>();
    Y->cat = &cat;
    Y->ring = R;
    for (int j = 0; j <= i; ++j) {
      Y->terms.push_back(zero_module(cat, R));
      Y->d.emplace_back();
      if (j >= 1)
        for (int x = 0; x < n; ++x) Y->d[j].push_back(SpMat(0, 0));
    }
    for (int t = 0; t <= res.length(); ++t) {
      Y->terms.push_back(*res.F[t]);
      Y->d.emplace_back();
      for (int x = 0; x < n; ++x) {
        if (t == 0)
          Y->d[i + 1].push_back(SpMat(0, res.F[0]->rank[x]));
        else
          Y->d[i + 1 + t].push_back(res.d[t - 1].comp[x]);
      }
    }
    tw.owners.push_back(Y);

    // X = cone(fprev); H_j(X) = 0 for j <= i, so a comparison X -> Y exists.
    ChainComplex X = mapping_cone(fprev);

    // The anchor q: X_{i+1} -> H_i(C), solved for generator images at once:
    // (a) q kills the image of the degree i+2 differential, hence all
    //     boundaries; (b) q sends a chosen cycle lift of every homology basis
    //     class to that class.
    FreeSrc sx1 = make_src(X.terms[i + 1], "postnikov");
    int nb = (int)sx1.cls.size();
    std::vector<int> uoff(nb + 1, 0);
    for (int b = 0; b < nb; ++b) uoff[b + 1] = uoff[b] + H.rank[sx1.cls[b]];
    auto coeff_row = [&](int y, const SpMat& w) {
      // q[y] . w as blocks in the unknowns u_b, from the free-model coords.
      SpMat v = sx1.to_model(y, w);
      std::vector<SpMat> row(nb);
      std::vector<int> off = sx1.F->free_block_offsets(y);
      for (int b = 0; b < nb; ++b) row[b] = SpMat(H.rank[y], H.rank[sx1.cls[b]]);
      for (const auto& e : v.ents) {
        for (int b = 0; b < nb; ++b) {
          int width = cat.mor_count(y, sx1.cls[b]);
          if (e.r >= off[b] && e.r < off[b] + width) {
            row[b] = row[b] + H.act[y][sx1.cls[b]][e.r - off[b]].scaled(e.v, v.den);
            break;
          }
        }
      }
      return row;
    };
    std::vector<std::vector<SpMat>> grid;
    std::vector<SpMat> rhs;
    if (i + 2 <= X.top()) {
      FreeSrc sx2 = make_src(X.terms[i + 2], "postnikov");
      for (int g = 0; g < (int)sx2.cls.size(); ++g) {
        int y = sx2.cls[g];
        grid.push_back(coeff_row(y, X.diff(i + 2, y) * sx2.test_col(g)));
        rhs.push_back(SpMat(H.rank[y], 1));
      }
    }
    for (int x = 0; x < n; ++x) {
      if (H.rank[x] == 0) continue;
      SpMat z = Hi.cycles[x];
      auto s = solve(R, S->diff(i + 1, x), (fprev.f[i][x] * z).scaled(-1));
      if (!s) throw std::logic_error(msg);
      SpMat reps = SpMat::vstack({*s, z});
      for (int t = 0; t < H.rank[x]; ++t) {
        grid.push_back(coeff_row(x, reps.col(t)));
        rhs.push_back(unit_col(H.rank[x], t));
      }
    }
    auto Usol = solve(R, SpMat::from_blocks(grid), SpMat::vstack(rhs));
    if (!Usol) throw std::runtime_error(msg);
    std::vector<SpMat> qimgs(nb);
    for (int b = 0; b < nb; ++b)
      qimgs[b] = Usol->select_rows(iota_range(uoff[b], uoff[b + 1] - uoff[b]));
    ModuleHom qhat = hom_from_free(*sx1.F, H, qimgs);
    std::vector<SpMat> q(n);
    for (int x = 0; x < n; ++x)
      q[x] = sx1.sigma.empty() ? qhat.comp[x] : qhat.comp[x] * sx1.sigma[x];

    // Comparison Phi: X -> Y, anchored at eps . Phi_{i+1} = q, then lifted
    // degree by degree through the resolution.
    std::vector<std::vector<SpMat>> Phi(X.top() + 1);
    Phi[i + 1] = lift_through(R, sx1, *res.F[0], res.pi.comp, q, msg);
    for (int m = i + 2; m <= X.top(); ++m) {
      int t = m - (i + 1);
      if (t > res.length()) {
        for (int x = 0; x < n; ++x) Phi[m].push_back(SpMat(0, X.rank_at(m, x)));
        continue;
      }
      std::vector<SpMat> target(n);
      for (int x = 0; x < n; ++x) target[x] = Phi[m - 1][x] * X.diff(m, x);
      Phi[m] = lift_through(R, make_src(X.terms[m], "postnikov"), *res.F[t],
                            res.d[t - 1].comp, target, msg);
    }

    // k-invariant alpha = Phi restricted to the S-columns of the cone.
    ChainMap alpha;
    alpha.src = S.get();
    alpha.dst = Y.get();
    int atop = std::max(S->top(), Y->top());
    alpha.f.resize(atop + 1);
    for (int m = 0; m <= atop; ++m)
      for (int x = 0; x < n; ++x) {
        if (m <= X.top() && !Phi[m].empty())
          alpha.f[m].push_back(Phi[m][x].select_cols(iota_range(0, S->rank_at(m, x))));
        else
          alpha.f[m].push_back(SpMat(Y->rank_at(m, x), S->rank_at(m, x)));
      }
    require_chain_map(alpha, "postnikov");

    auto Snew = std::make_shared<ChainComplex>(desuspend(mapping_cone(alpha)));
    tw.owners.push_back(Snew);

    // f_i: C -> C(i) = (Y_{j+1} + S_j), with the C-columns of Phi as the
    // degree-raising component.
    ChainMap fi;
    fi.src = tw.base.get();
    fi.dst = Snew.get();
    fi.f.resize(base.top() + 1);
    for (int j = 0; j <= base.top(); ++j)
      for (int x = 0; x < n; ++x) {
        SpMat h(Y->rank_at(j + 1, x), base.rank_at(j, x));
        if (j + 1 <= X.top() && !Phi[j + 1].empty()) {
          int s0 = S->rank_at(j + 1, x);
          h = Phi[j + 1][x].select_cols(iota_range(s0, base.rank_at(j, x))).scaled(-1);
        }
        fi.f[j].push_back(SpMat::vstack({h, comp_or_zero(fprev, j, x)}));
      }
    require_chain_map(fi, "postnikov");

    tw.sections.push_back(Snew);
    tw.targets.push_back(Y);
    tw.alphas.push_back(alpha);
    tw.to_section.push_back(fi);
    S = Snew;
    fprev = fi;
  }
  return tw;
}

}  // namespace orbikit
