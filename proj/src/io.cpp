#include "orbikit/io.hpp"

#include <numeric>
#include <sstream>

namespace orbikit {
namespace io {

namespace {

long long parse_ll(const std::string& s) {
  std::size_t pos = 0;
  long long v = std::stoll(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("bad integer literal: " + s);
  return v;
}

}  // namespace

json perm_to_json(const Perm& p) {
  json cycles = json::array();
  std::vector<bool> seen(p.degree(), false);
  for (int i = 0; i < p.degree(); ++i) {
    if (seen[i] || p(i) == i) continue;
    json cyc = json::array();
    int j = i;
    do {
      cyc.push_back(j + 1);
      seen[j] = true;
      j = p(j);
    } while (j != i);
    cycles.push_back(cyc);
  }
  return cycles;
}

Perm perm_from_json(int degree, const json& j) {
  Perm p(degree);
  for (const json& cyc : j) {
    std::vector<int> c;
    for (const json& v : cyc) {
      int x = v.get<int>();
      if (x < 1 || x > degree) throw std::invalid_argument("cycle point out of range");
      c.push_back(x - 1);
    }
    for (std::size_t k = 0; k < c.size(); ++k) p.img[c[k]] = c[(k + 1) % c.size()];
  }
  return p;
}

json group_to_json(const PermGroup& G) {
  json gens = json::array();
  for (const Perm& g : G.gens) gens.push_back(perm_to_json(g));
  return json{{"degree", G.degree}, {"generators", gens}};
}

std::shared_ptr<PermGroup> group_from_json(const json& j) {
  int deg = j.at("degree").get<int>();
  std::vector<Perm> gens;
  for (const json& g : j.at("generators")) gens.push_back(perm_from_json(deg, g));
  return std::make_shared<PermGroup>(PermGroup::generated(deg, gens));
}

json subgroup_to_json(const Subgroup& H) {
  // Emit the full element list as cycles; small at desk scale and unambiguous.
  json gens = json::array();
  for (int e : H.elems)
    if (e != 0) gens.push_back(perm_to_json(H.G->elems[e]));
  return gens;
}

Subgroup subgroup_from_json(const PermGroup& G, const json& j) {
  int deg = G.degree;
  std::vector<Perm> gens;
  for (const json& g : j) gens.push_back(perm_from_json(deg, g));
  return subgroup_from_perms(G, gens);
}

Family family_from_json(const PermGroup& G, const json& j) {
  std::vector<Subgroup> seeds;
  for (const json& s : j) seeds.push_back(subgroup_from_json(G, s));
  return family_generate(G, seeds);
}

CatBundle cat_from_json(const json& group_j, const json& family_j) {
  CatBundle b;
  b.G = group_from_json(group_j);
  b.cat = std::make_shared<OrbitCat>(build_orbit_cat(family_from_json(*b.G, family_j)));
  return b;
}

json ring_to_json(const Ring& R) { return R.name(); }

Ring ring_from_json(const json& j) {
  std::string s = j.get<std::string>();
  if (s == "Z") return Ring::integers();
  if (s == "Q") return Ring::rationals();
  if (s.size() > 1 && s[0] == 'F') return Ring::prime_field(parse_ll(s.substr(1)));
  throw std::invalid_argument("unknown ring tag: " + s);
}

json mat_to_json(const SpMat& A) {
  std::vector<std::string> data((std::size_t)A.rows * A.cols, "0");
  for (const SpMat::Ent& e : A.ents) {
    long long g = std::gcd(e.v < 0 ? -e.v : e.v, A.den);
    long long num = e.v / g, den = A.den / g;
    std::string s = std::to_string(num);
    if (den != 1) s += "/" + std::to_string(den);
    data[(std::size_t)e.r * A.cols + e.c] = s;
  }
  return json{{"rows", A.rows}, {"cols", A.cols}, {"data", data}};
}

SpMat mat_from_json(const json& j) {
  int rows = j.at("rows").get<int>(), cols = j.at("cols").get<int>();
  const json& data = j.at("data");
  if ((int)data.size() != rows * cols) throw std::invalid_argument("matrix data size mismatch");
  std::vector<long long> num(data.size()), den(data.size(), 1);
  long long L = 1;
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::string s = data[i].get<std::string>();
    std::size_t slash = s.find('/');
    if (slash == std::string::npos) {
      num[i] = parse_ll(s);
    } else {
      num[i] = parse_ll(s.substr(0, slash));
      den[i] = parse_ll(s.substr(slash + 1));
      if (den[i] <= 0) throw std::invalid_argument("bad denominator in " + s);
    }
    L = std::lcm(L, den[i]);
  }
  SpMat A(rows, cols);
  A.den = L;
  for (std::size_t i = 0; i < data.size(); ++i)
    if (num[i] != 0) A.set((int)(i / cols), (int)(i % cols), num[i] * (L / den[i]));
  A.finish();
  return A;
}

json fgab_to_json(const FGAbGroup& g) {
  json tor = json::array();
  for (const bigint& t : g.torsion) tor.push_back(t.str());
  return json{{"rank", g.rank}, {"torsion", tor}};
}

json module_to_json(const RGammaModule& M) {
  int n = (int)M.rank.size();
  json act = json::array();
  for (int i = 0; i < n; ++i) {
    json row = json::array();
    for (int j2 = 0; j2 < n; ++j2) {
      json ms = json::array();
      for (const SpMat& A : M.act[i][j2]) ms.push_back(mat_to_json(A));
      row.push_back(ms);
    }
    act.push_back(row);
  }
  json out{{"ring", ring_to_json(M.ring)},
           {"covariant", M.covariant},
           {"rank", M.rank},
           {"act", act}};
  if (M.free_blocks) out["free_blocks"] = *M.free_blocks;
  return out;
}

RGammaModule module_from_json(const OrbitCat& cat, const json& j) {
  RGammaModule M;
  M.cat = &cat;
  M.ring = ring_from_json(j.at("ring"));
  M.covariant = j.value("covariant", false);
  M.rank = j.at("rank").get<std::vector<int>>();
  int n = cat.num_objects();
  if ((int)M.rank.size() != n) throw std::invalid_argument("module rank length mismatch");
  const json& act = j.at("act");
  M.act.resize(n);
  for (int i = 0; i < n; ++i) {
    M.act[i].resize(n);
    for (int j2 = 0; j2 < n; ++j2) {
      const json& ms = act.at(i).at(j2);
      if ((int)ms.size() != cat.mor_count(i, j2))
        throw std::invalid_argument("module action count mismatch");
      for (const json& m : ms) M.act[i][j2].push_back(mat_from_json(m));
    }
  }
  if (j.contains("free_blocks")) M.free_blocks = j.at("free_blocks").get<std::vector<int>>();
  if (!M.check())
    throw std::invalid_argument("module file is not functorial");
  return M;
}

json complex_to_json(const ChainComplex& C) {
  json terms = json::array(), d = json::array();
  for (const RGammaModule& t : C.terms) terms.push_back(module_to_json(t));
  for (int k = 1; k <= C.top(); ++k) {
    json row = json::array();
    for (const SpMat& A : C.d[k]) row.push_back(mat_to_json(A));
    d.push_back(row);
  }
  json out{{"ring", ring_to_json(C.ring)}, {"terms", terms}, {"d", d}};
  if (C.aug) {
    json aug = json::array();
    for (const SpMat& A : *C.aug) aug.push_back(mat_to_json(A));
    out["aug"] = aug;
  }
  return out;
}

ChainComplex complex_from_json(const OrbitCat& cat, const json& j) {
  ChainComplex C;
  C.cat = &cat;
  C.ring = ring_from_json(j.at("ring"));
  for (const json& t : j.at("terms")) C.terms.push_back(module_from_json(cat, t));
  C.d.resize(C.terms.size());
  const json& d = j.at("d");
  if ((int)d.size() != std::max(0, C.top()))
    throw std::invalid_argument("complex differential count mismatch");
  for (int k = 1; k <= C.top(); ++k)
    for (const json& m : d.at(k - 1)) C.d[k].push_back(mat_from_json(m));
  if (j.contains("aug")) {
    std::vector<SpMat> aug;
    for (const json& m : j.at("aug")) aug.push_back(mat_from_json(m));
    C.aug = std::move(aug);
  }
  std::string why;
  if (!complex_check(C, &why)) throw std::invalid_argument("complex file invalid: " + why);
  return C;
}

json gcomplex_to_json(const GSimplicialComplex& X) {
  json gen_act = json::array();
  if (X.G)
    for (const Perm& g : X.G->gens) gen_act.push_back(X.vertex_act[X.G->index_of(g)]);
  json maximal = json::array();
  // Emit the simplices that are not a face of any other (the load closes down).
  for (const std::vector<int>& s : X.simplices) {
    bool maximal_s = true;
    for (const std::vector<int>& t : X.simplices) {
      if (t.size() <= s.size()) continue;
      if (std::includes(t.begin(), t.end(), s.begin(), s.end())) {
        maximal_s = false;
        break;
      }
    }
    if (maximal_s) maximal.push_back(s);
  }
  return json{{"vertices", X.num_vertices}, {"gen_act", gen_act}, {"maximal", maximal}};
}

GSimplicialComplex gcomplex_from_json(const PermGroup& G, const json& j) {
  return build_gcomplex(G, j.at("vertices").get<int>(),
                        j.at("gen_act").get<std::vector<std::vector<int>>>(),
                        j.at("maximal").get<std::vector<std::vector<int>>>());
}

std::string digest(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

}  // namespace io
}  // namespace orbikit
