// orbikit command line front end: every command reads JSON files, prints a
// single JSON report on stdout and exits 0 on success, 1 on a domain error
// (with a machine-readable error object), 2 on a usage error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "orbikit/io.hpp"
#include "orbikit/resolve.hpp"
#include "orbikit/surgery.hpp"

using namespace orbikit;
using io::json;

namespace {

std::string g_inputs;  // concatenated file contents, digested into the report

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  g_inputs += ss.str();
  return json::parse(ss.str());
}

// A self-describing file: {"group":..., "family":..., <payload keys>}.
struct Loaded {
  io::CatBundle cb;
  json j;
};
Loaded load_bundle(const std::string& path) {
  Loaded L;
  L.j = read_json_file(path);
  L.cb = io::cat_from_json(L.j.at("group"), L.j.at("family"));
  return L;
}

json bundle_json(const io::CatBundle& cb) {
  json family = json::array();
  for (const Subgroup& H : cb.cat->F.reps) family.push_back(io::subgroup_to_json(H));
  return json{{"group", io::group_to_json(*cb.G)}, {"family", family}};
}

json homology_table(const ChainComplex& C, bool reduced) {
  json out = json::array();
  for (int x = 0; x < C.cat->num_objects(); ++x) {
    json row = json::array();
    for (int k = reduced ? -1 : 0; k <= C.top(); ++k)
      row.push_back(io::fgab_to_json(homology_at(C, k, x, reduced)));
    out.push_back(row);
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
  return out;
}

// Shared by the verify suites: one named comparison per line of the report.
struct Checks {
  json list = json::array();
  bool all_ok = true;
  template <class A, class B>
  void eq(const std::string& name, const A& measured, const B& expected) {
    bool ok = json(measured) == json(expected);
    list.push_back(json{{"check", name},
                        {"expected", json(expected)},
                        {"measured", json(measured)},
                        {"pass", ok}});
    all_ok = all_ok && ok;
  }
  void is_true(const std::string& name, bool ok) { eq(name, ok, true); }
};

json verify_paper_s5_p2() {
  Checks ck;
  OctahedronComplex oct = octahedron_complex(Ring::prime_field(2));
  const GSimplicialComplex& X = *oct.X;
  ck.eq("octahedron vertex count", X.count_of_dim(0), 26);
  ck.eq("octahedron edge count", X.count_of_dim(1), 72);
  ck.eq("octahedron triangle count", X.count_of_dim(2), 48);
  const ChainComplex& C = oct.gcw.C;
  // C_2 = 2 R[H/1], C_1 = 3 R[H/1], C_0 = R[H/C_4] + R[H/C_2^B] + R[H/C_3].
  ck.eq("C_2 rank at 1", C.terms[2].rank[0], 48);
  ck.eq("C_1 rank at 1", C.terms[1].rank[0], 72);
  std::vector<long long> stabs;
  for (const GcwOrbit& o : oct.gcw.orbits[0]) stabs.push_back(o.stab.order());
  std::sort(stabs.begin(), stabs.end());
  ck.eq("degree-0 orbit stabilizer orders", stabs, std::vector<long long>{2, 3, 4});
  ChainComplex J = join_tensor(C, C);
  DimFunction nbar = hdim_function(J);
  ck.eq("join homology dimension function", nbar, DimFunction{5, 1, 1, 1});
  std::string why;
  ck.is_true("join is an oriented homology sphere", is_oriented_sphere(J, nbar, &why));
  json out{{"checks", ck.list}, {"pass", ck.all_ok}};
  out["nbar"] = nbar;
  return out;
}

json verify_lemma_fixed_points() {
  Checks ck;
  static PermGroup S4 = PermGroup::symmetric(4);
  static PermGroup S5 = PermGroup::symmetric(5);
  Family f4 = family_generate(S4, {sylow_subgroup(S4, 2)});
  Family f5 = family_generate(
      S5, {subgroup_from_perms(S5, {Perm::from_cycles(5, "(1 2 3 4)")}),
           subgroup_from_perms(S5, {Perm::from_cycles(5, "(1 2)")}),
           subgroup_from_perms(S5, {Perm::from_cycles(5, "(1 2 3)")})});
  for (const Family* F : {&f4, &f5})
    for (const Subgroup& H : F->reps)
      for (const Subgroup& K : F->reps) {
        std::vector<long long> formula;
        for (const FixedPointSummand& s : fixed_point_decomposition(H, K))
          formula.push_back(s.index);
        std::sort(formula.begin(), formula.end());
        std::string name = "(G deg " + std::to_string(F->G->degree) + ") |H|=" +
                           std::to_string(H.order()) + " |K|=" + std::to_string(K.order());
        ck.eq(name, formula, fixed_point_orbit_sizes(H, K));
      }
  return json{{"checks", ck.list}, {"pass", ck.all_ok}};
}

json verify_example_restriction() {
  Checks ck;
  static PermGroup S5 = PermGroup::symmetric(5);
  Subgroup KxC3 = subgroup_from_perms(
      S5, {Perm::from_cycles(5, "(1 2)"), Perm::from_cycles(5, "(3 4 5)")});
  OrbitCat catG = build_orbit_cat(family_generate(S5, {KxC3}));
  Subgroup S4 = subgroup_from_perms(
      S5, {Perm::from_cycles(5, "(1 2)"), Perm::from_cycles(5, "(1 2 3 4)")});
  SubgroupContext ctx = make_subgroup_context(catG, S4);
  auto kcl = catG.F.class_of(KxC3);
  RGammaModule res = restrict_module(ctx, free_module(catG, Ring::integers(), kcl->first));
  // Expected: R[H/C_2] + R[H/<(123)>] inside S_4.
  auto class_in_H = [&](std::initializer_list<const char*> gens) {
    std::vector<Perm> ps;
    for (const char* g : gens) ps.push_back(Perm::from_cycles(5, g));
    Subgroup S = subgroup_from_perms(S5, ps);
    std::vector<int> helems;
    for (int e : S.elems) helems.push_back(ctx.Hgroup->index_of(S5.elems[e]));
    return ctx.catH.F.class_of(subgroup_from_elements(*ctx.Hgroup, helems))->first;
  };
  std::vector<int> blocks = {class_in_H({"(1 2)"}), class_in_H({"(1 2 3)"})};
  std::sort(blocks.begin(), blocks.end());
  RGammaModule F = free_module_blocks(ctx.catH, Ring::integers(), blocks);
  ck.eq("restricted dimension vector", res.rank, F.rank);
  auto iso = find_isomorphism(F, res, 17);
  ck.is_true("explicit isomorphism with R[H/C_2] + R[H/C_3]", iso.has_value());
  return json{{"checks", ck.list}, {"pass", ck.all_ok}};
}

// Random augmentable free complex: free degree-0 part plus elementary cells.
ChainComplex random_free_complex(const OrbitCat& C, const Ring& R, std::mt19937_64& rng) {
  std::vector<ChainComplex> parts;
  std::vector<int> blocks;
  int nb = 1 + (int)(rng() % 2);
  for (int i = 0; i < nb; ++i) blocks.push_back((int)(rng() % C.num_objects()));
  parts.push_back(module_in_degree(free_module_blocks(C, R, blocks), 0));
  int ne = (int)(rng() % 3);
  for (int i = 0; i < ne; ++i)
    parts.push_back(
        elementary_complex(C, R, (int)(rng() % C.num_objects()), 1 + (int)(rng() % 3)));
  ChainComplex out = direct_sum_complex(parts);
  add_standard_augmentation(out);
  return out;
}

json verify_join_euler(unsigned seed) {
  Checks ck;
  static PermGroup S4 = PermGroup::symmetric(4);
  OrbitCat cat = build_orbit_cat(family_generate(S4, {sylow_subgroup(S4, 2)}));
  Ring Z = Ring::integers();
  std::mt19937_64 rng(seed);
  int failures = 0;
  for (int t = 0; t < 50; ++t) {
    ChainComplex A = random_free_complex(cat, Z, rng);
    ChainComplex B = random_free_complex(cat, Z, rng);
    EulerClass sa = euler_free(A), sb = euler_free(B);
    EulerClass sj = euler_free(join_tensor(A, B));
    K0Free want = k0_multiply(cat, sa.vec, sb.vec);
    for (std::size_t i = 0; i < want.size(); ++i) want[i] = sa.vec[i] + sb.vec[i] - want[i];
    if (!(sa.exact && sb.exact && sj.exact && sj.vec == want)) ++failures;
  }
  ck.eq("sigma(C v D) = sigma(C)+sigma(D)-sigma(C).sigma(D), 50 random pairs, failures",
        failures, 0);
  return json{{"checks", ck.list}, {"pass", ck.all_ok}};
}

int run(int argc, char** argv) {
  CLI::App app{"orbikit: equivariant homological algebra over orbit categories"};
  app.require_subcommand(1);
  unsigned seed = 1;
  app.add_option("--seed", seed, "seed for randomized suites")->capture_default_str();

  std::string group_path, family_path, print_mode = "lengths";
  auto* cat_cmd = app.add_subcommand("cat", "build and print an orbit category");
  cat_cmd->add_option("--group", group_path)->required();
  cat_cmd->add_option("--family", family_path)->required();
  cat_cmd->add_option("--print", print_mode, "morphisms|lengths|aut");

  auto* mod_cmd = app.add_subcommand("module", "module constructions");
  std::string mod_op, mod_path, sub_path, blocks_str, k0_a, k0_b;
  int cls = 0, object = 0, hclass = 0;
  mod_cmd->add_option("op", mod_op, "free|restrict|induce|ex|sx|isproj|k0")->required();
  mod_cmd->add_option("--group", group_path);
  mod_cmd->add_option("--family", family_path);
  mod_cmd->add_option("--module", mod_path);
  mod_cmd->add_option("--subgroup", sub_path);
  mod_cmd->add_option("--class", cls);
  mod_cmd->add_option("--hclass", hclass);
  mod_cmd->add_option("--blocks", blocks_str);
  mod_cmd->add_option("--object", object);
  mod_cmd->add_option("--a", k0_a);
  mod_cmd->add_option("--b", k0_b);
  std::string ring_tag = "Z";
  mod_cmd->add_option("--ring", ring_tag);

  std::string cx_path, cx2_path, dimfn_str, map_path, data_path;
  bool reduced = false, oriented = false;
  auto* hom_cmd = app.add_subcommand("homology", "objectwise homology of a complex");
  hom_cmd->add_option("--complex", cx_path)->required();
  hom_cmd->add_flag("--reduced", reduced);

  auto* join_cmd = app.add_subcommand("join", "join tensor of two augmented complexes");
  join_cmd->add_option("--a", cx_path)->required();
  join_cmd->add_option("--b", cx2_path)->required();

  auto* euler_cmd = app.add_subcommand("euler", "finiteness obstruction sigma(C)");
  euler_cmd->add_option("--complex", cx_path)->required();

  auto* sphere_cmd = app.add_subcommand("check-sphere", "Moore/sphere/orientation checks");
  sphere_cmd->add_option("--complex", cx_path)->required();
  sphere_cmd->add_option("--dimfn", dimfn_str)->required();
  sphere_cmd->add_flag("--oriented", oriented);

  int length = 4, max_degree = 4, degree = 0, kill_object = 0, window = -1;
  auto* resolve_cmd = app.add_subcommand("resolve", "minimal free resolution");
  resolve_cmd->add_option("--module", mod_path)->required();
  resolve_cmd->add_option("--length", length);

  auto* ext_cmd = app.add_subcommand("ext", "Ext dimensions");
  ext_cmd->add_option("--m", mod_path)->required();
  ext_cmd->add_option("--n", cx2_path)->required();
  ext_cmd->add_option("--max-degree", max_degree);

  auto* cores_cmd = app.add_subcommand("coresolve", "exact coresolution");
  cores_cmd->add_option("--module", mod_path)->required();

  auto* octa_cmd = app.add_subcommand("octahedron", "the S_4 octahedron complex");
  octa_cmd->add_option("--ring", ring_tag);

  auto* gcw_cmd = app.add_subcommand("gcw", "Bredon chain complex of a G-complex");
  gcw_cmd->add_option("--complex", cx_path)->required();
  gcw_cmd->add_option("--family", family_path)->required();
  gcw_cmd->add_option("--ring", ring_tag);

  auto* joinspace_cmd = app.add_subcommand("joinspace", "simplicial join");
  joinspace_cmd->add_option("--a", cx_path)->required();
  joinspace_cmd->add_option("--b", cx2_path)->required();

  auto* kill_cmd = app.add_subcommand("kill", "kill the top free part at an object");
  kill_cmd->add_option("--complex", cx_path)->required();
  kill_cmd->add_option("--object", kill_object)->required();

  auto* modify_cmd = app.add_subcommand("modify", "modify homology in one degree");
  modify_cmd->add_option("--complex", cx_path)->required();
  modify_cmd->add_option("--degree", degree)->required();
  modify_cmd->add_option("--map", map_path)->required();

  auto* post_cmd = app.add_subcommand("postnikov", "algebraic Postnikov tower");
  post_cmd->add_option("--complex", cx_path)->required();
  post_cmd->add_option("--window", window);

  auto* push_cmd = app.add_subcommand("pushout", "pushout of two chain maps");
  push_cmd->add_option("--data", data_path)->required();

  auto* verify_cmd = app.add_subcommand("verify", "named reproduction suites");
  std::string suite;
  verify_cmd->add_option("suite", suite,
                         "paper-s5-p2|lemma-fixed-points|example-restriction|join-euler")
      ->required();
  verify_cmd->add_option("--seed", seed, "seed for randomized suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  auto t0 = std::chrono::steady_clock::now();
  json results;
  int code = 0;

  if (*cat_cmd) {
    io::CatBundle cb =
        io::cat_from_json(read_json_file(group_path), read_json_file(family_path));
    const OrbitCat& cat = *cb.cat;
    int n = cat.num_objects();
    if (print_mode == "lengths") {
      json lengths = json::array();
      for (int i = 0; i < n; ++i)
        lengths.push_back(json{{"object", i},
                               {"subgroup_order", cat.obj(i).order()},
                               {"length", cat.length[i]}});
      results = json{{"objects", lengths}, {"l_gamma", cat.max_length()}};
    } else if (print_mode == "morphisms") {
      json table;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (cat.mor_count(i, j) > 0)
            table[std::to_string(i) + "->" + std::to_string(j)] = cat.mor_count(i, j);
      results = json{{"morphisms", table}};
    } else if (print_mode == "aut") {
      json table = json::array();
      for (int i = 0; i < n; ++i)
        table.push_back(json{{"object", i}, {"aut_order", cat.mor_count(i, i)}});
      results = json{{"aut", table}};
    } else {
      throw std::invalid_argument("unknown --print mode: " + print_mode);
    }
  } else if (*mod_cmd) {
    if (mod_op == "free") {
      io::CatBundle cb =
          io::cat_from_json(read_json_file(group_path), read_json_file(family_path));
      Ring R = io::ring_from_json(json(ring_tag));
      RGammaModule M = blocks_str.empty()
                           ? free_module(*cb.cat, R, cls)
                           : free_module_blocks(*cb.cat, R, parse_int_list(blocks_str));
      results = bundle_json(cb);
      results["module"] = io::module_to_json(M);
    } else if (mod_op == "restrict") {
      Loaded L = load_bundle(mod_path);
      RGammaModule M = io::module_from_json(*L.cb.cat, L.j.at("module"));
      Subgroup H = io::subgroup_from_json(*L.cb.G, read_json_file(sub_path));
      SubgroupContext ctx = make_subgroup_context(*L.cb.cat, H);
      RGammaModule res = restrict_module(ctx, M);
      json family = json::array();
      for (const Subgroup& S : ctx.catH.F.reps) family.push_back(io::subgroup_to_json(S));
      results = json{{"group", io::group_to_json(*ctx.Hgroup)},
                     {"family", family},
                     {"module", io::module_to_json(res)}};
    } else if (mod_op == "induce") {
      io::CatBundle cb =
          io::cat_from_json(read_json_file(group_path), read_json_file(family_path));
      Subgroup H = io::subgroup_from_json(*cb.G, read_json_file(sub_path));
      SubgroupContext ctx = make_subgroup_context(*cb.cat, H);
      Ring R = io::ring_from_json(json(ring_tag));
      RGammaModule I = induce_module(ctx, free_module(ctx.catH, R, hclass));
      results = bundle_json(cb);
      results["module"] = io::module_to_json(I);
    } else if (mod_op == "ex" || mod_op == "sx" || mod_op == "isproj") {
      Loaded L = load_bundle(mod_path);
      RGammaModule M = io::module_from_json(*L.cb.cat, L.j.at("module"));
      if (mod_op == "ex") {
        RGammaModule E = extension_functor(restriction_to_aut(M, object));
        results = bundle_json(L.cb);
        results["module"] = io::module_to_json(E);
      } else if (mod_op == "sx") {
        SplitData S = splitting_functor(M, object);
        results = json{{"object", object},
                       {"rank", S.V.rank},
                       {"basis_idx", S.basis_idx}};
      } else {
        ProjectiveWitness w = is_projective(M);
        results = json{{"projective", w.projective}, {"reason", w.reason}};
        code = w.projective ? 0 : code;
      }
    } else if (mod_op == "k0") {
      io::CatBundle cb =
          io::cat_from_json(read_json_file(group_path), read_json_file(family_path));
      K0Free a(parse_int_list(k0_a).begin(), parse_int_list(k0_a).end());
      K0Free b(parse_int_list(k0_b).begin(), parse_int_list(k0_b).end());
      results = json{{"product", k0_multiply(*cb.cat, a, b)}};
    } else {
      throw std::invalid_argument("unknown module op: " + mod_op);
    }
  } else if (*hom_cmd) {
    Loaded L = load_bundle(cx_path);
    ChainComplex C = io::complex_from_json(*L.cb.cat, L.j.at("complex"));
    results = json{{"reduced", reduced}, {"homology", homology_table(C, reduced)}};
  } else if (*join_cmd) {
    Loaded L = load_bundle(cx_path);
    json jb = read_json_file(cx2_path);
    if (jb.at("group") != L.j.at("group") || jb.at("family") != L.j.at("family"))
      throw std::invalid_argument("join: the two complexes use different categories");
    ChainComplex A = io::complex_from_json(*L.cb.cat, L.j.at("complex"));
    ChainComplex B = io::complex_from_json(*L.cb.cat, jb.at("complex"));
    results = bundle_json(L.cb);
    results["complex"] = io::complex_to_json(join_tensor(A, B));
  } else if (*euler_cmd) {
    Loaded L = load_bundle(cx_path);
    ChainComplex C = io::complex_from_json(*L.cb.cat, L.j.at("complex"));
    EulerClass e = euler_free(C);
    results = json{{"vec", e.vec}, {"exact", e.exact}};
  } else if (*sphere_cmd) {
    Loaded L = load_bundle(cx_path);
    ChainComplex C = io::complex_from_json(*L.cb.cat, L.j.at("complex"));
    DimFunction n(parse_int_list(dimfn_str).begin(), parse_int_list(dimfn_str).end());
    std::string why;
    bool moore = is_moore(C, n, &why);
    bool sphere = moore && is_homology_sphere(C, n, &why);
    bool orient = sphere && is_oriented_sphere(C, n, &why);
    results = json{{"moore", moore}, {"sphere", sphere}, {"oriented", orient}};
    if (!(oriented ? orient : sphere)) {
      results["witness"] = why;
      code = 1;
    }
  } else if (*resolve_cmd) {
    Loaded L = load_bundle(mod_path);
    RGammaModule M = io::module_from_json(*L.cb.cat, L.j.at("module"));
    FreeResolution F = minimal_free_resolution(M, length);
    json terms = json::array();
    for (const auto& Fk : F.F) {
      json t{{"rank", Fk->rank}};
      if (Fk->free_blocks) t["blocks"] = *Fk->free_blocks;
      terms.push_back(t);
    }
    results = json{{"length", F.length()},
                   {"terms", terms},
                   {"tail_rank", F.tail->rank},
                   {"tail_zero", F.tail->is_zero()}};
  } else if (*ext_cmd) {
    Loaded L = load_bundle(mod_path);
    json jn = read_json_file(cx2_path);
    if (jn.at("group") != L.j.at("group") || jn.at("family") != L.j.at("family"))
      throw std::invalid_argument("ext: the two modules use different categories");
    RGammaModule M = io::module_from_json(*L.cb.cat, L.j.at("module"));
    RGammaModule N = io::module_from_json(*L.cb.cat, jn.at("module"));
    results = json{{"dims", ext_groups(M, N, max_degree)}};
  } else if (*cores_cmd) {
    Loaded L = load_bundle(mod_path);
    RGammaModule N = io::module_from_json(*L.cb.cat, L.j.at("module"));
    Coresolution co = coresolution(N);
    json ranks = json::array();
    for (const auto& D : co.D) ranks.push_back(D->rank);
    results = json{{"length", co.length()},
                   {"ranks", ranks},
                   {"exact", coresolution_exact(co, N)}};
  } else if (*octa_cmd) {
    OctahedronComplex oct = octahedron_complex(io::ring_from_json(json(ring_tag)));
    io::CatBundle cb{oct.group, oct.cat};
    results = bundle_json(cb);
    results["gcomplex"] = io::gcomplex_to_json(*oct.X);
    results["complex"] = io::complex_to_json(oct.gcw.C);
    results["homology"] = homology_table(oct.gcw.C, false);
  } else if (*gcw_cmd) {
    json jx = read_json_file(cx_path);
    io::CatBundle cb = io::cat_from_json(jx.at("group"), read_json_file(family_path));
    GSimplicialComplex X = io::gcomplex_from_json(*cb.G, jx.at("gcomplex"));
    GcwComplex g = gcw_chain_complex(X, *cb.cat, io::ring_from_json(json(ring_tag)));
    results = bundle_json(cb);
    results["complex"] = io::complex_to_json(g.C);
  } else if (*joinspace_cmd) {
    json ja = read_json_file(cx_path), jb = read_json_file(cx2_path);
    if (ja.at("group") != jb.at("group"))
      throw std::invalid_argument("joinspace: the two complexes use different groups");
    auto G = io::group_from_json(ja.at("group"));
    GSimplicialComplex J = simplicial_join(io::gcomplex_from_json(*G, ja.at("gcomplex")),
                                           io::gcomplex_from_json(*G, jb.at("gcomplex")));
    results = json{{"group", io::group_to_json(*G)}, {"gcomplex", io::gcomplex_to_json(J)}};
  } else if (*kill_cmd) {
    Loaded L = load_bundle(cx_path);
    ChainComplex C = io::complex_from_json(*L.cb.cat, L.j.at("complex"));
    KillResult r = kill_top_free(C, kill_object);
    results = bundle_json(L.cb);
    results["stabilizations"] = r.stabilizations;
    results["complex"] = io::complex_to_json(r.D);
  } else if (*modify_cmd) {
    Loaded L = load_bundle(cx_path);
    ChainComplex C = io::complex_from_json(*L.cb.cat, L.j.at("complex"));
    json jm = read_json_file(map_path);
    RGammaModule target = io::module_from_json(*L.cb.cat, jm.at("target"));
    HomologyModule Hk = homology_module(C, degree);
    ModuleHom phi;
    phi.src = Hk.H.get();
    phi.dst = &target;
    for (const json& m : jm.at("comp")) phi.comp.push_back(io::mat_from_json(m));
    ChainComplex D = modify_homology(C, degree, Hk, phi);
    results = bundle_json(L.cb);
    results["complex"] = io::complex_to_json(D);
  } else if (*post_cmd) {
    Loaded L = load_bundle(cx_path);
    ChainComplex C = io::complex_from_json(*L.cb.cat, L.j.at("complex"));
    PostnikovTower tw = postnikov_tower(C, window);
    json stages = json::array();
    for (int i = 0; i <= tw.window; ++i) {
      json st{{"i", i}, {"skipped", tw.targets[i] == nullptr}};
      st["homology"] = homology_table(*tw.sections[i], false);
      stages.push_back(st);
    }
    results = json{{"window", tw.window}, {"stages", stages}};
  } else if (*push_cmd) {
    Loaded L = load_bundle(data_path);
    ChainComplex A = io::complex_from_json(*L.cb.cat, L.j.at("a"));
    ChainComplex B = io::complex_from_json(*L.cb.cat, L.j.at("b"));
    ChainComplex Cc = io::complex_from_json(*L.cb.cat, L.j.at("c"));
    ChainMap f, g;
    f.src = &A;
    f.dst = &B;
    g.src = &A;
    g.dst = &Cc;
    for (const json& row : L.j.at("f")) {
      f.f.emplace_back();
      for (const json& m : row) f.f.back().push_back(io::mat_from_json(m));
    }
    for (const json& row : L.j.at("g")) {
      g.f.emplace_back();
      for (const json& m : row) g.f.back().push_back(io::mat_from_json(m));
    }
    PushoutResult p = pushout_complexes(f, g);
    results = bundle_json(L.cb);
    results["complex"] = io::complex_to_json(*p.P);
  } else if (*verify_cmd) {
    if (suite == "paper-s5-p2") results = verify_paper_s5_p2();
    else if (suite == "lemma-fixed-points") results = verify_lemma_fixed_points();
    else if (suite == "example-restriction") results = verify_example_restriction();
    else if (suite == "join-euler") results = verify_join_euler(seed);
    else throw std::invalid_argument("unknown suite: " + suite);
    if (!results.at("pass").get<bool>()) code = 1;
  }

  auto t1 = std::chrono::steady_clock::now();
  json report{
      {"command", app.get_subcommands().empty() ? "" : app.get_subcommands()[0]->get_name()},
      {"inputs", io::digest(g_inputs)},
      {"results", results},
      {"timing_ms",
       std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count()},
      {"seed", seed}};
  std::cout << report.dump(2) << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cout << json{{"error", e.what()}}.dump(2) << "\n";
    return 1;
  }
}
