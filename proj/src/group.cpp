#include "orbikit/group.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>

namespace orbikit {

namespace {

long long max_group_order() {
  if (const char* s = std::getenv("ORBIKIT_MAX_GROUP_ORDER")) return std::atoll(s);
  return 1000000;
}

}  // namespace

PermGroup PermGroup::generated(int degree, const std::vector<Perm>& gens) {
  PermGroup G;
  G.degree = degree;
  G.gens = gens;
  long long cap = max_group_order();
  std::set<std::vector<int>> seen;
  std::deque<Perm> queue;
  Perm id(degree);
  seen.insert(id.img);
  queue.push_back(id);
  while (!queue.empty()) {
    Perm p = queue.front();
    queue.pop_front();
    for (const Perm& g : gens) {
      if ((int)g.img.size() != degree) throw std::invalid_argument("generator degree mismatch");
      Perm q = p * g;
      if (seen.insert(q.img).second) {
        if ((long long)seen.size() > cap)
          throw std::runtime_error("group order exceeds ORBIKIT_MAX_GROUP_ORDER cap");
        queue.push_back(q);
      }
    }
  }
  G.elems.reserve(seen.size());
  for (const auto& v : seen) G.elems.push_back(Perm(v));
  std::sort(G.elems.begin(), G.elems.end());
  for (int i = 0; i < (int)G.elems.size(); ++i) G.idx[G.elems[i].img] = i;
  return G;
}

PermGroup PermGroup::symmetric(int n) {
  std::vector<Perm> gens;
  if (n >= 2) {
    Perm t(n);
    std::swap(t.img[0], t.img[1]);
    gens.push_back(t);
    Perm c(n);
    for (int i = 0; i < n; ++i) c.img[i] = (i + 1) % n;
    gens.push_back(c);
  }
  return generated(n, gens);
}

PermGroup PermGroup::cyclic(int n) {
  Perm c(n);
  for (int i = 0; i < n; ++i) c.img[i] = (i + 1) % n;
  return generated(n, {c});
}

int PermGroup::index_of(const Perm& p) const {
  auto it = idx.find(p.img);
  if (it == idx.end()) throw std::out_of_range("element not in group");
  return it->second;
}

bool Subgroup::contains(int e) const {
  return std::binary_search(elems.begin(), elems.end(), e);
}

std::string Subgroup::gens_string() const {
  std::ostringstream os;
  os << "<";
  if (gens.empty()) os << "()";
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (i) os << ", ";
    os << G->elems[gens[i]].cycle_string();
  }
  os << ">";
  return os.str();
}

Subgroup subgroup_generated(const PermGroup& G, const std::vector<int>& gen_idx) {
  std::set<int> seen{0};
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int a = queue.front();
    queue.pop_front();
    for (int g : gen_idx) {
      int b = G.mul(a, g);
      if (seen.insert(b).second) queue.push_back(b);
    }
  }
  Subgroup H;
  H.G = &G;
  H.elems.assign(seen.begin(), seen.end());
  H.gens = gen_idx;
  return H;
}

Subgroup subgroup_from_perms(const PermGroup& G, const std::vector<Perm>& gens) {
  std::vector<int> idx;
  idx.reserve(gens.size());
  for (const Perm& p : gens) idx.push_back(G.index_of(p));
  return subgroup_generated(G, idx);
}

Subgroup trivial_subgroup(const PermGroup& G) { return subgroup_generated(G, {}); }

Subgroup full_subgroup(const PermGroup& G) {
  Subgroup H;
  H.G = &G;
  H.elems.resize(G.elems.size());
  for (int i = 0; i < (int)G.elems.size(); ++i) H.elems[i] = i;
  for (const Perm& p : G.gens) H.gens.push_back(G.index_of(p));
  return H;
}

Subgroup subgroup_from_elements(const PermGroup& G, std::vector<int> elems) {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  Subgroup H;
  H.G = &G;
  H.elems = std::move(elems);
  // Record a generating set (greedy).
  Subgroup cur = trivial_subgroup(G);
  for (int e : H.elems) {
    if (!cur.contains(e)) {
      std::vector<int> g = cur.gens;
      g.push_back(e);
      cur = subgroup_generated(G, g);
    }
  }
  if (cur.elems != H.elems) throw std::invalid_argument("element set is not a subgroup");
  H.gens = cur.gens;
  return H;
}

Subgroup conjugate_subgroup(const Subgroup& H, int g) {
  const PermGroup& G = *H.G;
  std::vector<int> elems;
  elems.reserve(H.elems.size());
  for (int e : H.elems) elems.push_back(G.conj(e, g));
  std::sort(elems.begin(), elems.end());
  Subgroup K;
  K.G = &G;
  K.elems = std::move(elems);
  for (int e : H.gens) K.gens.push_back(G.conj(e, g));
  return K;
}

bool is_subgroup_of(const Subgroup& A, const Subgroup& B) {
  return std::includes(B.elems.begin(), B.elems.end(), A.elems.begin(), A.elems.end());
}

Subgroup intersect(const Subgroup& A, const Subgroup& B) {
  std::vector<int> out;
  std::set_intersection(A.elems.begin(), A.elems.end(), B.elems.begin(), B.elems.end(),
                        std::back_inserter(out));
  return subgroup_from_elements(*A.G, out);
}

Subgroup normalizer(const Subgroup& H) {
  const PermGroup& G = *H.G;
  std::vector<int> out;
  for (int g = 0; g < (int)G.elems.size(); ++g) {
    bool ok = true;
    for (int e : H.gens)
      if (!H.contains(G.conj(e, g))) {
        ok = false;
        break;
      }
    if (ok && H.gens.empty()) ok = true;
    if (ok) {
      // Generators inside implies H^g <= H, which forces equality by finiteness.
      out.push_back(g);
    }
  }
  return subgroup_from_elements(G, out);
}

Subgroup centralizer(const Subgroup& H) {
  const PermGroup& G = *H.G;
  std::vector<int> out;
  for (int g = 0; g < (int)G.elems.size(); ++g) {
    bool ok = true;
    for (int e : H.gens)
      if (G.conj(e, g) != e) {
        ok = false;
        break;
      }
    if (ok) out.push_back(g);
  }
  return subgroup_from_elements(G, out);
}

std::optional<int> conjugating_element(const Subgroup& A, const Subgroup& B) {
  if (A.order() != B.order()) return std::nullopt;
  const PermGroup& G = *A.G;
  for (int g = 0; g < (int)G.elems.size(); ++g) {
    bool ok = true;
    for (int e : A.gens)
      if (!B.contains(G.conj(e, g))) {
        ok = false;
        break;
      }
    if (ok && A.gens.empty()) ok = true;
    if (ok) return g;
  }
  return std::nullopt;
}

int coset_rep(const Subgroup& H, int g) {
  const PermGroup& G = *H.G;
  int best = -1;
  for (int h : H.elems) {
    int x = G.mul(g, h);
    if (best < 0 || x < best) best = x;
  }
  return best;
}

std::vector<int> left_coset_reps(const Subgroup& H) {
  const PermGroup& G = *H.G;
  std::vector<bool> seen(G.elems.size(), false);
  std::vector<int> reps;
  for (int g = 0; g < (int)G.elems.size(); ++g) {
    if (seen[g]) continue;
    reps.push_back(g);
    for (int h : H.elems) seen[G.mul(g, h)] = true;
  }
  return reps;
}

std::vector<DoubleCoset> double_cosets(const Subgroup& H, const Subgroup& K) {
  const PermGroup& G = *H.G;
  std::vector<bool> seen(G.elems.size(), false);
  std::vector<DoubleCoset> out;
  for (int g = 0; g < (int)G.elems.size(); ++g) {
    if (seen[g]) continue;
    long long size = 0;
    for (int h : H.elems)
      for (int k : K.elems) {
        int x = G.mul(G.mul(h, g), k);
        if (!seen[x]) {
          seen[x] = true;
          ++size;
        }
      }
    out.push_back({g, size});
  }
  return out;
}

std::vector<Subgroup> all_subgroups(const Subgroup& H) {
  const PermGroup& G = *H.G;
  std::set<std::vector<int>> seen;
  std::vector<Subgroup> out;
  std::deque<Subgroup> queue;
  Subgroup triv = trivial_subgroup(G);
  seen.insert(triv.elems);
  queue.push_back(triv);
  out.push_back(triv);
  while (!queue.empty()) {
    Subgroup S = queue.front();
    queue.pop_front();
    for (int e : H.elems) {
      if (S.contains(e)) continue;
      std::vector<int> g = S.gens;
      g.push_back(e);
      Subgroup T = subgroup_generated(G, g);
      if (seen.insert(T.elems).second) {
        queue.push_back(T);
        out.push_back(T);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

int WeylGroup::coset_index(int g) const {
  int rep = coset_rep(H, g);
  auto it = std::lower_bound(coset_reps.begin(), coset_reps.end(), rep);
  if (it == coset_reps.end() || *it != rep)
    throw std::out_of_range("weyl coset lookup: element not in normalizer");
  return (int)(it - coset_reps.begin());
}

int WeylGroup::image_of(int n) const {
  const PermGroup& G = *N.G;
  Perm p((int)coset_reps.size());
  for (int i = 0; i < (int)coset_reps.size(); ++i)
    p.img[i] = coset_index(G.mul(n, coset_reps[i]));
  return W.index_of(p);
}

WeylGroup weyl_group(const Subgroup& H) {
  const PermGroup& G = *H.G;
  WeylGroup wg;
  wg.H = H;
  wg.N = normalizer(H);
  // Cosets of H in N (H is normal in N): canonical reps, sorted.
  std::vector<bool> seen(G.elems.size(), false);
  for (int n : wg.N.elems) {
    if (seen[n]) continue;
    int rep = coset_rep(H, n);
    wg.coset_reps.push_back(rep);
    for (int h : H.elems) seen[G.mul(n, h)] = true;
  }
  std::sort(wg.coset_reps.begin(), wg.coset_reps.end());
  int m = (int)wg.coset_reps.size();
  // Index lookup for cosets by canonical rep.
  auto coset_index = [&](int g) {
    int rep = coset_rep(H, g);
    auto it = std::lower_bound(wg.coset_reps.begin(), wg.coset_reps.end(), rep);
    return (int)(it - wg.coset_reps.begin());
  };
  std::map<std::vector<int>, int> perm_seen;
  std::vector<Perm> wperms;
  std::vector<int> nreps;
  for (int n : wg.N.elems) {
    Perm p(m);
    for (int i = 0; i < m; ++i) p.img[i] = coset_index(G.mul(n, wg.coset_reps[i]));
    if (perm_seen.emplace(p.img, (int)wperms.size()).second) {
      wperms.push_back(p);
      nreps.push_back(n);
    }
  }
  // Assemble W as a PermGroup with sorted elements; remap nreps accordingly.
  PermGroup W;
  W.degree = m;
  W.elems = wperms;
  std::vector<int> order(wperms.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = (int)i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return wperms[a] < wperms[b]; });
  W.elems.clear();
  wg.nreps.clear();
  for (int i : order) {
    W.idx[wperms[i].img] = (int)W.elems.size();
    W.elems.push_back(wperms[i]);
    wg.nreps.push_back(nreps[i]);
  }
  for (const Perm& p : W.elems) W.gens.push_back(p);  // full list as generators
  wg.W = std::move(W);
  return wg;
}

Subgroup sylow_subgroup(const PermGroup& G, long long p) {
  auto is_p_power = [&](long long n) {
    while (n % p == 0) n /= p;
    return n == 1;
  };
  Subgroup P = trivial_subgroup(G);
  bool grew = true;
  while (grew) {
    grew = false;
    Subgroup N = normalizer(P);
    for (int n : N.elems) {
      if (P.contains(n)) continue;
      if (!is_p_power(G.elems[n].order())) continue;
      std::vector<int> g = P.gens;
      g.push_back(n);
      Subgroup Q = subgroup_generated(G, g);
      if (is_p_power(Q.order())) {
        P = Q;
        grew = true;
        break;
      }
    }
  }
  return P;
}

Subgroup canonical_conjugate(const Subgroup& S, int* witness) {
  const PermGroup& G = *S.G;
  Subgroup best = S;
  int bw = 0;
  for (int g = 0; g < (int)G.elems.size(); ++g) {
    Subgroup T = conjugate_subgroup(S, g);
    if (T.elems < best.elems) {
      best = T;
      bw = g;
    }
  }
  if (witness) *witness = bw;
  return best;
}

std::optional<std::pair<int, int>> Family::class_of(const Subgroup& S) const {
  int w = 0;
  Subgroup can = canonical_conjugate(S, &w);
  for (int i = 0; i < (int)reps.size(); ++i)
    if (reps[i].elems == can.elems) return std::make_pair(i, w);
  return std::nullopt;
}

bool Family::closed_check() const {
  for (const Subgroup& R : reps) {
    for (const Subgroup& S : all_subgroups(R))
      if (!class_of(S)) return false;
  }
  return true;
}

Family family_generate(const PermGroup& G, const std::vector<Subgroup>& seeds) {
  std::set<std::vector<int>> canon;
  std::vector<Subgroup> reps;
  for (const Subgroup& seed : seeds) {
    if (seed.G != &G) throw std::invalid_argument("family_generate: seed has wrong parent");
    for (const Subgroup& S : all_subgroups(seed)) {
      Subgroup can = canonical_conjugate(S);
      if (canon.insert(can.elems).second) reps.push_back(can);
    }
  }
  std::sort(reps.begin(), reps.end());
  Family F;
  F.G = &G;
  F.reps = std::move(reps);
  return F;
}

}  // namespace orbikit
