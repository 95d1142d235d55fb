#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "troptrack/jsonio.hpp"
#include "troptrack/moves.hpp"
#include "troptrack/potential.hpp"
#include "troptrack/stability.hpp"

using namespace troptrack;

namespace {

std::string fmt10(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string sign_str(int s) { return s > 0 ? "+" : (s < 0 ? "-" : "0"); }

Json signs_to_json(const std::vector<int>& signs) {
  Json a = Json::array();
  for (int s : signs) a.push_back(sign_str(s));
  return a;
}

Json corner_to_json(const Corner& c) {
  return Json{{"corner", c.pos}, {"tri", c.tri}};
}

Json tuple_to_json(const Triangulation& tri, const std::vector<Corner>& tuple) {
  Json o = Json::object();
  for (std::size_t i = 0; i < tuple.size() && i < tri.surface.punctures.size(); ++i)
    o[tri.surface.punctures[i]] = corner_to_json(tuple[i]);
  return o;
}

Json cons_to_json(const std::vector<LinCon>& cons) {
  Json a = Json::array();
  for (const auto& c : cons)
    a.push_back(Json{{"coeffs", vec_to_json(c.coeffs)},
                     {"op", c.eq ? "==" : ">="},
                     {"rhs", rat_pq(c.rhs)}});
  return a;
}

Json graph_to_json(const TrackGraph& g) {
  Json nodes = Json::array();
  for (const auto& n : g.nodes) {
    Json ports = Json::array();
    int limit = n.is_switch ? 3 : 2;
    for (int s = 0; s < limit; ++s) ports.push_back(g.names[n.ports[s]]);
    nodes.push_back(Json{{"ports", std::move(ports)}, {"switch", n.is_switch}});
  }
  return Json{{"branches", g.names}, {"nodes", std::move(nodes)}};
}

Json rho_to_json(const SpectralRadius& r) {
  Json o{{"dominant_real", r.dominant_real}, {"value", fmt10(r.value)}};
  if (r.dominant_real)
    o["enclosure"] = Json::array({rat_pq(r.lo), rat_pq(r.hi)});
  return o;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Content-addressed cache: identical requests reproduce identical bytes.
std::string with_cache(const Json& request, const std::function<std::string()>& compute) {
  const char* dir = std::getenv("TROPTRACK_CACHE_DIR");
  if (!dir || !*dir) return compute();
  std::ostringstream key;
  key << std::hex << fnv1a(canonical_dump(request));
  std::filesystem::path path = std::filesystem::path(dir) / (key.str() + ".out");
  if (std::ifstream in(path, std::ios::binary); in) {
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  std::string out = compute();
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  std::ofstream(path, std::ios::binary) << out;
  return out;
}

std::vector<int> parse_int_list(const std::string& s, const char* what) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (...) {
      throw ParseError(std::string("bad ") + what + " entry '" + item + "'");
    }
  }
  if (out.empty()) throw ParseError(std::string("empty ") + what + " list");
  return out;
}

std::vector<std::string> parse_str_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

Triangulation load_tri(const std::string& path, Json* raw) {
  Json j = load_json_file(path);
  if (raw) *raw = j;
  return triangulation_from_json(j);
}

struct Cli {
  std::string tri_path, track_path, point_path, loop_path;
  std::string name, punctures, arcs, kind, branch, format = "json";
  std::vector<std::string> triangles;
  int genus = 0;
  int arc = 0;
  int iterates = 1;
  int samples = 5;
  int max_power = 6;
  bool complete = false;
  std::string output;
};

void run_surface_build(Cli& c) {
  SurfaceData surface;
  surface.genus = c.genus;
  surface.punctures = parse_str_list(c.punctures);
  std::vector<ArcId> arcs;
  for (int a : parse_int_list(c.arcs, "arc")) arcs.push_back(a);
  std::map<ArcId, int> seen;
  std::vector<TriangleSides> tris;
  for (const std::string& t : c.triangles) {
    std::vector<int> sides = parse_int_list(t, "triangle side");
    if (sides.size() != 3) throw ParseError("each triangle needs three sides");
    TriangleSides ts;
    for (int i = 0; i < 3; ++i) {
      ts[i].arc = sides[i];
      ts[i].flip = seen[sides[i]]++ > 0;
    }
    tris.push_back(ts);
  }
  Json request{{"command", "surface build"},
               {"genus", c.genus},
               {"punctures", c.punctures},
               {"arcs", c.arcs},
               {"triangles", c.triangles},
               {"name", c.name}};
  c.output = with_cache(request, [&] {
    Triangulation tri = build_triangulation(surface, arcs, tris, c.name);
    return canonical_dump(triangulation_to_json(tri));
  });
}

void run_flip(Cli& c) {
  Json raw;
  Triangulation tri = load_tri(c.tri_path, &raw);
  Json request{{"command", "flip"}, {"tri", raw}, {"arc", c.arc}};
  c.output = with_cache(request, [&] {
    return canonical_dump(triangulation_to_json(flip(tri, c.arc)));
  });
}

void run_bmatrix(Cli& c) {
  Json raw;
  Triangulation tri = load_tri(c.tri_path, &raw);
  Json request{{"command", "bmatrix"}, {"tri", raw}};
  c.output = with_cache(request, [&] {
    return canonical_dump(Json{{"arcs", tri.arcs}, {"b", imat_to_json(exchange_matrix(tri))}});
  });
}

void run_potential_eval(Cli& c) {
  Json raw, praw;
  Triangulation tri = load_tri(c.tri_path, &raw);
  praw = load_json_file(c.point_path);
  TropicalPoint p = point_from_json(praw, tri);
  Json request{{"command", "potential eval"}, {"tri", raw}, {"point", praw}};
  c.output = with_cache(request, [&] {
    if (p.kind != PKind::A) fail("PointInvalid", "potential needs an A-point");
    PotentialValue pv = tropical_potential(tri, p.coords);
    Json w = Json::object(), argmin = Json::object();
    for (std::size_t i = 0; i < tri.surface.punctures.size(); ++i) {
      const std::string& id = tri.surface.punctures[i];
      w[id] = rat_pq(pv.w[i]);
      Json corners = Json::array();
      for (const Corner& cr : pv.argmin[i]) corners.push_back(corner_to_json(cr));
      argmin[id] = std::move(corners);
    }
    return canonical_dump(Json{{"argmin", std::move(argmin)}, {"w", std::move(w)}});
  });
}

void run_potential_domains(Cli& c) {
  Json raw;
  Triangulation tri = load_tri(c.tri_path, &raw);
  Json request{{"command", "potential domains"}, {"tri", raw}};
  c.output = with_cache(request, [&] {
    std::vector<LinearityDomain> doms = enumerate_domains(tri);
    Json arr = Json::array();
    for (const auto& d : doms) {
      Json facets = Json::array();
      for (const Vec& f : d.facets) facets.push_back(vec_to_json(f));
      arr.push_back(Json{{"facets", std::move(facets)},
                         {"interior_point", vec_to_json(d.interior_point)},
                         {"tuple", tuple_to_json(tri, d.tuple)}});
    }
    return canonical_dump(
        Json{{"count", doms.size()}, {"domains", std::move(arr)}});
  });
}

void run_tracks_enumerate(Cli& c) {
  Json raw;
  Triangulation tri = load_tri(c.tri_path, &raw);
  Json request{{"command", "tracks enumerate"}, {"tri", raw}, {"complete", c.complete}};
  c.output = with_cache(request, [&] {
    Json arr = Json::array();
    if (c.complete) {
      for (const CompleteTrack& ct : enumerate_complete_tracks(tri))
        arr.push_back(Json{{"track", track_to_json(ct.track)},
                           {"tuple", tuple_to_json(tri, ct.tuple)}});
    } else {
      for (const TrainTrack& t : enumerate_suited_tracks(tri))
        arr.push_back(track_to_json(t));
    }
    return canonical_dump(Json{{"count", arr.size()}, {"tracks", std::move(arr)}});
  });
}

void run_tracks_cone(Cli& c) {
  Json raw, traw;
  Triangulation tri = load_tri(c.tri_path, &raw);
  traw = load_json_file(c.track_path);
  TrainTrack track = track_from_json(traw, tri);
  Json request{{"command", "tracks cone"}, {"tri", raw}, {"track", traw}};
  c.output = with_cache(request, [&] {
    MeasureCone mc = cone(tri, track);
    Json btau = Json::array();
    for (std::size_t b : mc.btau) btau.push_back(mc.branches[b]);
    Json rays = Json::array(), lin = Json::array();
    for (const Vec& r : mc.rays.rays) rays.push_back(vec_to_json(r));
    for (const Vec& l : mc.rays.lineality) lin.push_back(vec_to_json(l));
    return canonical_dump(Json{{"branches", mc.branches},
                               {"btau", std::move(btau)},
                               {"constraints", cons_to_json(mc.constraints)},
                               {"dim", mc.dim},
                               {"lineality", std::move(lin)},
                               {"rays", std::move(rays)}});
  });
}

void run_tracks_move(Cli& c) {
  Json raw, traw;
  Triangulation tri = load_tri(c.tri_path, &raw);
  traw = load_json_file(c.track_path);
  TrainTrack track = track_from_json(traw, tri);
  static const std::map<std::string, MoveKind> kinds = {
      {"left-split", MoveKind::LeftSplit},
      {"right-split", MoveKind::RightSplit},
      {"central-split", MoveKind::CentralSplit},
      {"shift", MoveKind::Shift},
      {"fold", MoveKind::Fold}};
  auto kit = kinds.find(c.kind);
  if (kit == kinds.end()) throw ParseError("unknown move kind '" + c.kind + "'");
  Json request{{"command", "tracks move"},
               {"tri", raw},
               {"track", traw},
               {"kind", c.kind},
               {"branch", c.branch}};
  c.output = with_cache(request, [&] {
    TrackGraph g = derive_graph(tri, track);
    int branch = -1;
    for (std::size_t i = 0; i < g.names.size(); ++i)
      if (g.names[i] == c.branch) branch = static_cast<int>(i);
    if (branch < 0) throw ParseError("unknown branch '" + c.branch + "'");
    MoveResult res = apply_move(g, kit->second, branch);
    return canonical_dump(Json{{"branch", c.branch},
                               {"carried", res.move.carried},
                               {"carrier", res.move.carrier},
                               {"graph", graph_to_json(res.graph)},
                               {"kind", move_kind_name(res.move.kind)},
                               {"matrix", mat_to_json(res.move.matrix)}});
  });
}

void run_tracks_lambda(Cli& c) {
  Json raw, traw;
  Triangulation tri = load_tri(c.tri_path, &raw);
  traw = load_json_file(c.track_path);
  TrainTrack track = track_from_json(traw, tri);
  Json request{{"command", "tracks lambda"}, {"tri", raw}, {"track", traw}, {"arc", c.arc}};
  c.output = with_cache(request, [&] {
    std::vector<LambdaSuccessor> succs = lambda_relation(tri, track, c.arc);
    Triangulation tri2 = flip(tri, c.arc);
    Json arr = Json::array();
    for (const auto& s : succs) {
      Mat t = lambda_transition(tri, track, c.arc, tri2, s.track);
      arr.push_back(Json{{"track", track_to_json(s.track)},
                         {"transition", mat_to_json(t)}});
    }
    return canonical_dump(Json{{"arc", c.arc},
                               {"case", chain_case_name(succs.front().tag)},
                               {"moves", succs.front().moves},
                               {"successors", std::move(arr)}});
  });
}

void run_loop_check(Cli& c) {
  Json raw, lraw;
  Triangulation tri = load_tri(c.tri_path, &raw);
  lraw = load_json_file(c.loop_path);
  LoopSpec spec = loop_from_json(lraw);
  Json request{{"command", "loop check"}, {"tri", raw}, {"loop", lraw}};
  c.output = with_cache(request, [&] {
    return canonical_dump(Json{{"is_loop", is_loop(spec.word, tri)}});
  });
}

void run_loop_signs(Cli& c) {
  Json raw, lraw, praw;
  Triangulation tri = load_tri(c.tri_path, &raw);
  lraw = load_json_file(c.loop_path);
  praw = load_json_file(c.point_path);
  LoopSpec spec = loop_from_json(lraw);
  TropicalPoint p = point_from_json(praw, tri);
  Json request{{"command", "loop signs"},
               {"tri", raw},
               {"loop", lraw},
               {"point", praw},
               {"iterates", c.iterates}};
  c.output = with_cache(request, [&] {
    if (p.kind != PKind::X) fail("PointInvalid", "path signs need an X-point");
    if (c.iterates > 1 && !is_loop(spec.word, tri))
      fail("LoopInvalid", "iterating signs requires a loop");
    Json arr = Json::array();
    XState st{p.coords, exchange_matrix(tri)};
    for (int m = 0; m < c.iterates; ++m) {
      arr.push_back(signs_to_json(sign_of_path(spec.word, st.x, st.b, tri.arcs)));
      for (const auto& step : spec.word) st = apply_step_x(st, step, tri.arcs);
    }
    return canonical_dump(Json{{"signs", std::move(arr)}});
  });
}

void run_loop_stability(Cli& c) {
  Json raw, lraw;
  Triangulation tri = load_tri(c.tri_path, &raw);
  lraw = load_json_file(c.loop_path);
  LoopSpec spec = loop_from_json(lraw);
  Json request{{"command", "loop stability"},
               {"tri", raw},
               {"loop", lraw},
               {"samples", c.samples}};
  c.output = with_cache(request, [&] {
    SignStabilityReport rep = detect_sign_stability(tri, spec.word, c.samples);
    return canonical_dump(Json{{"cone", cons_to_json(rep.cone)},
                               {"n0", rep.n0},
                               {"n0_per_sample", rep.n0_per_sample},
                               {"note", rep.note},
                               {"samples", rep.samples},
                               {"stable_sign", signs_to_json(rep.stable_sign)},
                               {"verdict", verdict_name(rep.verdict)}});
  });
}

void run_loop_entropy(Cli& c) {
  Json raw, lraw;
  Triangulation tri = load_tri(c.tri_path, &raw);
  lraw = load_json_file(c.loop_path);
  LoopSpec spec = loop_from_json(lraw);
  Json request{{"command", "loop entropy"},
               {"tri", raw},
               {"loop", lraw},
               {"max_power", c.max_power}};
  c.output = with_cache(request, [&] {
    int declared = spec.power > 1 ? spec.power : 0;
    EntropyResult er = entropy(tri, spec.word, declared, c.max_power);
    return canonical_dump(Json{{"charpoly", vec_to_json(er.cp)},
                               {"entropy", fmt10(er.value)},
                               {"power", er.power},
                               {"rho", rho_to_json(er.rho)},
                               {"signs", signs_to_json(er.signs)}});
  });
}

void run_loop_invariant_track(Cli& c) {
  Json raw, lraw;
  Triangulation tri = load_tri(c.tri_path, &raw);
  lraw = load_json_file(c.loop_path);
  LoopSpec spec = loop_from_json(lraw);
  Json request{{"command", "loop invariant-track"}, {"tri", raw}, {"loop", lraw}};
  c.output = with_cache(request, [&] {
    std::optional<InvariantTrack> inv = find_invariant_track(tri, spec.word);
    if (!inv) return canonical_dump(Json{{"found", false}});
    return canonical_dump(
        Json{{"charpoly", vec_to_json(inv->cp)},
             {"found", true},
             {"matrix", mat_to_json(inv->matrix)},
             {"probe", inv->probe_ran ? (inv->probe_passed ? "passed" : "failed")
                                      : "not-run"},
             {"restriction", mat_to_json(inv->restriction)},
             {"rho", rho_to_json(inv->rho)},
             {"rho_matches_presentation", inv->rho_matches_presentation},
             {"track", track_to_json(inv->track)}});
  });
}

void run_fan_export(Cli& c) {
  Json raw;
  Triangulation tri = load_tri(c.tri_path, &raw);
  if (c.format != "json" && c.format != "dot")
    throw ParseError("format must be json or dot");
  Json request{{"command", "fan export"}, {"tri", raw}, {"format", c.format}};
  c.output = with_cache(request, [&] {
    std::vector<CompleteTrack> comps = enumerate_complete_tracks(tri);
    std::size_t n = tri.arcs.size();
    std::vector<std::pair<std::size_t, std::size_t>> adj;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      for (std::size_t j = i + 1; j < comps.size(); ++j) {
        std::vector<LinCon> both;
        for (const Vec& f : comps[i].domain.facets) both.push_back(con_ge(f, Rat(0)));
        for (const Vec& f : comps[j].domain.facets) both.push_back(con_ge(f, Rat(0)));
        if (affine_dimension(both, n) == static_cast<int>(n) - 1) adj.push_back({i, j});
      }
    }
    if (c.format == "dot") {
      std::ostringstream os;
      os << "graph fan {\n";
      for (std::size_t i = 0; i < comps.size(); ++i)
        os << "  c" << i << " [label=\"cone " << i << "\"];\n";
      for (const auto& [i, j] : adj) os << "  c" << i << " -- c" << j << ";\n";
      os << "}\n";
      return os.str();
    }
    Json cones = Json::array();
    for (std::size_t i = 0; i < comps.size(); ++i) {
      Json facets = Json::array();
      for (const Vec& f : comps[i].domain.facets) facets.push_back(vec_to_json(f));
      cones.push_back(Json{{"facets", std::move(facets)},
                           {"index", i},
                           {"interior_point", vec_to_json(comps[i].domain.interior_point)},
                           {"track", track_to_json(comps[i].track)},
                           {"tuple", tuple_to_json(tri, comps[i].tuple)}});
    }
    Json edges = Json::array();
    for (const auto& [i, j] : adj) edges.push_back(Json::array({i, j}));
    return canonical_dump(Json{{"adjacency", std::move(edges)},
                               {"chart", tri.name},
                               {"cones", std::move(cones)}});
  });
}

}  // namespace

int main(int argc, char** argv) {
  Cli c;
  CLI::App app{"train tracks as linearity domains of tropical cluster potentials"};
  app.require_subcommand(1);

  auto* surface = app.add_subcommand("surface", "surface and triangulation setup");
  surface->require_subcommand(1);
  auto* build = surface->add_subcommand("build", "validate and emit a triangulation");
  build->add_option("--genus", c.genus)->required();
  build->add_option("--punctures", c.punctures, "comma-separated ids")->required();
  build->add_option("--arcs", c.arcs, "comma-separated arc ids")->required();
  build->add_option("--triangle", c.triangles, "a,b,c sides counterclockwise")
      ->required();
  build->add_option("--name", c.name);
  build->callback([&] { run_surface_build(c); });

  auto* flip_cmd = app.add_subcommand("flip", "flip an arc");
  flip_cmd->add_option("--tri", c.tri_path)->required();
  flip_cmd->add_option("--arc", c.arc)->required();
  flip_cmd->callback([&] { run_flip(c); });

  auto* bm = app.add_subcommand("bmatrix", "exchange matrix of a triangulation");
  bm->add_option("--tri", c.tri_path)->required();
  bm->callback([&] { run_bmatrix(c); });

  auto* potential = app.add_subcommand("potential", "tropicalized potential");
  potential->require_subcommand(1);
  auto* peval = potential->add_subcommand("eval", "evaluate w at an A-point");
  peval->add_option("--tri", c.tri_path)->required();
  peval->add_option("--point", c.point_path)->required();
  peval->callback([&] { run_potential_eval(c); });
  auto* pdom = potential->add_subcommand("domains", "maximal linearity domains");
  pdom->add_option("--tri", c.tri_path)->required();
  pdom->callback([&] { run_potential_domains(c); });

  auto* tracks = app.add_subcommand("tracks", "train tracks suited to a triangulation");
  tracks->require_subcommand(1);
  auto* tenum = tracks->add_subcommand("enumerate", "list suited tracks");
  tenum->add_option("--tri", c.tri_path)->required();
  tenum->add_flag("--complete", c.complete, "only complete tracks, with tuples");
  tenum->callback([&] { run_tracks_enumerate(c); });
  auto* tcone = tracks->add_subcommand("cone", "measure cone of a track");
  tcone->add_option("--tri", c.tri_path)->required();
  tcone->add_option("--track", c.track_path)->required();
  tcone->callback([&] { run_tracks_cone(c); });
  auto* tmove = tracks->add_subcommand("move", "apply an elementary move");
  tmove->add_option("--tri", c.tri_path)->required();
  tmove->add_option("--track", c.track_path)->required();
  tmove->add_option("--kind", c.kind,
                    "left-split|right-split|central-split|shift|fold")
      ->required();
  tmove->add_option("--branch", c.branch)->required();
  tmove->callback([&] { run_tracks_move(c); });
  auto* tlambda = tracks->add_subcommand("lambda", "flip successors of a track");
  tlambda->add_option("--tri", c.tri_path)->required();
  tlambda->add_option("--track", c.track_path)->required();
  tlambda->add_option("--arc", c.arc)->required();
  tlambda->callback([&] { run_tracks_lambda(c); });

  auto* loop = app.add_subcommand("loop", "mutation loops");
  loop->require_subcommand(1);
  auto* lcheck = loop->add_subcommand("check", "test the loop condition");
  lcheck->add_option("--tri", c.tri_path)->required();
  lcheck->add_option("--loop", c.loop_path)->required();
  lcheck->callback([&] { run_loop_check(c); });
  auto* lsigns = loop->add_subcommand("signs", "sign sequence at an X-point");
  lsigns->add_option("--tri", c.tri_path)->required();
  lsigns->add_option("--loop", c.loop_path)->required();
  lsigns->add_option("--point", c.point_path)->required();
  lsigns->add_option("--iterates", c.iterates);
  lsigns->callback([&] { run_loop_signs(c); });
  auto* lstab = loop->add_subcommand("stability", "sign-stability report");
  lstab->add_option("--tri", c.tri_path)->required();
  lstab->add_option("--loop", c.loop_path)->required();
  lstab->add_option("--samples", c.samples);
  lstab->callback([&] { run_loop_stability(c); });
  auto* lent = loop->add_subcommand("entropy", "algebraic entropy of a stable loop");
  lent->add_option("--tri", c.tri_path)->required();
  lent->add_option("--loop", c.loop_path)->required();
  lent->add_option("--max-power", c.max_power);
  lent->callback([&] { run_loop_entropy(c); });
  auto* linv = loop->add_subcommand("invariant-track", "carried-invariant track");
  linv->add_option("--tri", c.tri_path)->required();
  linv->add_option("--loop", c.loop_path)->required();
  linv->callback([&] { run_loop_invariant_track(c); });

  auto* fan = app.add_subcommand("fan", "cone fan of complete tracks");
  fan->require_subcommand(1);
  auto* fexport = fan->add_subcommand("export", "fan with wall adjacency");
  fexport->add_option("--tri", c.tri_path)->required();
  fexport->add_option("--format", c.format, "json or dot");
  fexport->callback([&] { run_fan_export(c); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    Json err{{"error", {{"code", "UsageError"}, {"message", e.what()}}}};
    std::cout << canonical_dump(err);
    return 2;
  } catch (const ParseError& e) {
    Json err{{"error", {{"code", "ParseError"}, {"message", e.what()}}}};
    std::cout << canonical_dump(err);
    return 2;
  } catch (const Error& e) {
    Json err{{"error", {{"code", e.code}, {"message", e.what()}}}};
    std::cout << canonical_dump(err);
    return 1;
  } catch (const std::exception& e) {
    Json err{{"error", {{"code", "Internal"}, {"message", e.what()}}}};
    std::cout << canonical_dump(err);
    return 1;
  }
  std::cout << c.output;
  return 0;
}
