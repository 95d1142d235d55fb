#include "troptrack/tracks.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace troptrack {

namespace {

int next3(int i) { return (i + 1) % 3; }
int prev3(int i) { return (i + 2) % 3; }

struct DSU {
  std::vector<int> parent;
  explicit DSU(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Candidate faces of the freeway arrangement: per triangle the central
// trigon piece and one piece per corner. Regions of a subtrack are unions
// of these across the removed branches and the arc gluings.
int central_face(int t) { return 4 * t; }
int corner_face(int t, int c) { return 4 * t + 1 + c; }

bool vertex_has_long(const Triangulation& tri, const TrackPresence& p, int t, int i) {
  return p.long_present[tri.arc_index(tri.tris[t][i].arc)];
}

int vertex_degree(const Triangulation& tri, const TrackPresence& p, int t, int i) {
  int d = 0;
  if (vertex_has_long(tri, p, t, i)) ++d;
  if (p.short_present[t][i]) ++d;
  if (p.short_present[t][prev3(i)]) ++d;
  return d;
}

std::string chart_key(const Triangulation& tri) {
  std::ostringstream os;
  os << tri.surface.genus;
  for (const auto& p : tri.surface.punctures) os << '|' << p;
  for (ArcId a : tri.arcs) os << ',' << a;
  for (const auto& tr : tri.tris)
    for (const auto& s : tr) os << ';' << s.arc << (s.flip ? '-' : '+');
  return os.str();
}

Vec removed_corner_form(const Triangulation& tri, const TrainTrack& track,
                        std::size_t pidx) {
  const PunctureId& p = tri.surface.punctures[pidx];
  std::optional<Vec> form;
  for (std::size_t t = 0; t < tri.tris.size(); ++t) {
    for (int c : track.config[t].absent) {
      if (tri.puncture_of({static_cast<int>(t), c}) != p) continue;
      Vec f = corner_form(tri, {static_cast<int>(t), c});
      if (!form) {
        form = f;
      } else {
        TT_CHECK(*form == f, "removed corners at one puncture must share a form");
      }
    }
  }
  if (!form)
    fail("TrackInvalid", "no removed corner at puncture " + p);
  return *form;
}

}  // namespace

TrackPresence cascade(const Triangulation& tri, const TrainTrack& track) {
  TT_CHECK(track.config.size() == tri.tris.size(), "config size mismatch");
  TrackPresence p;
  p.short_present.assign(tri.tris.size(), {true, true, true});
  p.long_present.assign(tri.arcs.size(), true);
  for (std::size_t t = 0; t < track.config.size(); ++t) {
    const auto& cfg = track.config[t];
    TT_CHECK(cfg.absent.size() == 3 - static_cast<std::size_t>(cfg.type),
             "absent count must match triangle type");
    for (int c : cfg.absent) {
      TT_CHECK(c >= 0 && c < 3, "corner out of range");
      p.short_present[t][c] = false;
    }
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t ai = 0; ai < tri.arcs.size(); ++ai) {
      if (!p.long_present[ai]) continue;
      for (const Corner& occ : tri.occurrences.at(tri.arcs[ai])) {
        int t = occ.tri, i = occ.pos;
        if (!p.short_present[t][i] && !p.short_present[t][prev3(i)]) {
          p.long_present[ai] = false;
          changed = true;
          break;
        }
      }
    }
    for (std::size_t t = 0; t < tri.tris.size(); ++t) {
      for (int c = 0; c < 3; ++c) {
        if (!p.short_present[t][c]) continue;
        // Ends of the short at corner c sit at trigon vertices c and c+1.
        for (int v : {c, next3(c)}) {
          int other = (v == c) ? prev3(c) : next3(c);
          if (!vertex_has_long(tri, p, static_cast<int>(t), v) &&
              !p.short_present[t][other]) {
            p.short_present[t][c] = false;
            changed = true;
            break;
          }
        }
      }
    }
  }
  return p;
}

TrackAnalysis analyze_track(const Triangulation& tri, const TrainTrack& track) {
  TrackAnalysis out;
  out.presence = cascade(tri, track);
  const TrackPresence& p = out.presence;
  const int T = static_cast<int>(tri.tris.size());

  out.nonempty = false;
  for (bool b : p.long_present) out.nonempty = out.nonempty || b;
  for (const auto& sp : p.short_present)
    for (bool b : sp) out.nonempty = out.nonempty || b;

  DSU dsu(4 * T);
  for (int t = 0; t < T; ++t)
    for (int c = 0; c < 3; ++c)
      if (!p.short_present[t][c]) dsu.unite(central_face(t), corner_face(t, c));
  for (std::size_t ai = 0; ai < tri.arcs.size(); ++ai) {
    const auto& occ = tri.occurrences.at(tri.arcs[ai]);
    int t = occ[0].tri, i = occ[0].pos, t2 = occ[1].tri, i2 = occ[1].pos;
    if (!p.long_present[ai]) {
      dsu.unite(corner_face(t, prev3(i)), corner_face(t, i));
      dsu.unite(corner_face(t2, prev3(i2)), corner_face(t2, i2));
    }
    // The two endpoints of the arc glue corner pieces across it regardless
    // of the track: side i runs corner (t,i-1) -> (t,i), reversed on the
    // other side.
    dsu.unite(corner_face(t, prev3(i)), corner_face(t2, i2));
    dsu.unite(corner_face(t, i), corner_face(t2, prev3(i2)));
  }

  std::map<int, RegionInfo> regions;
  auto reg = [&](int face) -> RegionInfo& {
    return regions.try_emplace(dsu.find(face), RegionInfo{0, 0, 0, 0, RegionShape::Other})
        .first->second;
  };

  for (int t = 0; t < T; ++t) {
    reg(central_face(t)).chi_open += 1;
    for (int c = 0; c < 3; ++c) reg(corner_face(t, c)).chi_open += 1;
  }
  for (int t = 0; t < T; ++t)
    for (int c = 0; c < 3; ++c)
      if (!p.short_present[t][c]) reg(central_face(t)).chi_open -= 1;
  for (std::size_t ai = 0; ai < tri.arcs.size(); ++ai) {
    const auto& occ = tri.occurrences.at(tri.arcs[ai]);
    int t = occ[0].tri, i = occ[0].pos;
    reg(corner_face(t, prev3(i))).chi_open -= 1;
    reg(corner_face(t, i)).chi_open -= 1;
    if (!p.long_present[ai]) {
      // Both stub pieces and their crossing point fall into one region.
      int r0 = dsu.find(corner_face(t, prev3(i)));
      TT_CHECK(r0 == dsu.find(corner_face(t, i)), "absent long region mismatch");
      regions.at(r0).chi_open -= 1;
    }
  }
  for (int t = 0; t < T; ++t)
    for (int i = 0; i < 3; ++i)
      if (vertex_degree(tri, p, t, i) == 0) reg(central_face(t)).chi_open += 1;

  for (std::size_t pi = 0; pi < tri.surface.punctures.size(); ++pi) {
    const auto& corners = tri.corners_at.at(tri.surface.punctures[pi]);
    TT_CHECK(!corners.empty(), "puncture without corners");
    int r = dsu.find(corner_face(corners[0].tri, corners[0].pos));
    for (const Corner& c : corners)
      TT_CHECK(dsu.find(corner_face(c.tri, c.pos)) == r,
               "puncture corners split across regions");
    regions.at(r).punctures += 1;
  }

  out.switchless_component = false;
  {
    BranchTable tb;
    TrackGraph g = derive_graph(tri, track, &tb);
    int n = static_cast<int>(g.names.size());
    if (n > 0) {
      DSU comp(n);
      std::vector<bool> touches_switch(n, false);
      for (const auto& node : g.nodes) {
        int first = -1;
        int limit = node.is_switch ? 3 : 2;
        for (int s = 0; s < limit; ++s) {
          int b = node.ports[s];
          if (b < 0) continue;
          if (first < 0) first = b;
          comp.unite(first, b);
        }
      }
      for (const auto& node : g.nodes) {
        if (!node.is_switch) continue;
        for (int s = 0; s < 3; ++s) touches_switch[comp.find(node.ports[s])] = true;
      }
      // Re-root flags after all unions.
      std::vector<bool> root_ok(n, false);
      for (int b = 0; b < n; ++b)
        if (touches_switch[b]) root_ok[comp.find(b)] = true;
      for (int b = 0; b < n; ++b)
        if (!root_ok[comp.find(b)]) out.switchless_component = true;
      for (int t = 0; t < T; ++t)
        for (int i = 0; i < 3; ++i)
          if (vertex_degree(tri, p, t, i) == 3)
            regions.at(dsu.find(central_face(t))).cusps += 1;
    }
  }

  int total_doubled = 0;
  for (auto& [root, r] : regions) {
    r.chi_doubled = 2 * r.chi_open - r.cusps;
    total_doubled += r.chi_doubled;
    if (r.punctures == 0 && r.cusps == 3 && r.chi_open == 1)
      r.shape = RegionShape::Trigon;
    else if (r.punctures == 1 && r.cusps == 1 && r.chi_open == 0)
      r.shape = RegionShape::PuncturedMonogon;
    else if (r.punctures == 1 && r.cusps == 2 && r.chi_open == 0)
      r.shape = RegionShape::PuncturedBigon;
    else
      r.shape = RegionShape::Other;
    out.regions.push_back(r);
  }
  int g2 = tri.surface.genus;
  int h = static_cast<int>(tri.surface.punctures.size());
  TT_CHECK(total_doubled == 2 * (2 - 2 * g2 - h),
           "doubled Euler characteristics must sum to that of the doubled surface");

  out.legal = out.nonempty && !out.switchless_component;
  for (const auto& r : out.regions)
    if (r.chi_doubled >= 0) out.legal = false;
  return out;
}

TrackGraph derive_graph(const Triangulation& tri, const TrainTrack& track,
                        BranchTable* table) {
  TrackPresence p = cascade(tri, track);
  BranchTable tb;
  tb.long_of.assign(tri.arcs.size(), -1);
  tb.short_of.assign(tri.tris.size(), {-1, -1, -1});
  for (std::size_t ai = 0; ai < tri.arcs.size(); ++ai) {
    if (!p.long_present[ai]) continue;
    tb.long_of[ai] = static_cast<int>(tb.names.size());
    tb.names.push_back("L" + std::to_string(tri.arcs[ai]));
  }
  for (std::size_t t = 0; t < tri.tris.size(); ++t) {
    for (int c = 0; c < 3; ++c) {
      if (!p.short_present[t][c]) continue;
      tb.short_of[t][c] = static_cast<int>(tb.names.size());
      tb.names.push_back("s" + std::to_string(t) + "." + std::to_string(c));
    }
  }

  TrackGraph g;
  g.names = tb.names;
  for (std::size_t t = 0; t < tri.tris.size(); ++t) {
    for (int i = 0; i < 3; ++i) {
      int ti = static_cast<int>(t);
      int deg = vertex_degree(tri, p, ti, i);
      if (deg == 0) continue;
      TT_CHECK(deg >= 2, "dangling branch end survived the cascade");
      int lng = vertex_has_long(tri, p, ti, i)
                    ? tb.long_of[tri.arc_index(tri.tris[t][i].arc)]
                    : -1;
      int s1 = p.short_present[t][i] ? tb.short_of[t][i] : -1;
      int s2 = p.short_present[t][prev3(i)] ? tb.short_of[t][prev3(i)] : -1;
      TrackNode node;
      if (deg == 3) {
        node.is_switch = true;
        node.ports = {lng, s1, s2};
      } else {
        node.is_switch = false;
        std::vector<int> present;
        for (int b : {lng, s1, s2})
          if (b >= 0) present.push_back(b);
        node.ports = {present[0], present[1], -1};
      }
      g.nodes.push_back(node);
    }
  }
  g.validate();
  if (table) *table = std::move(tb);
  return g;
}

std::vector<LinCon> graph_constraints(const TrackGraph& g) {
  std::size_t n = g.names.size();
  std::vector<LinCon> cons;
  for (std::size_t b = 0; b < n; ++b) {
    Vec v(n, Rat(0));
    v[b] = 1;
    cons.push_back(con_ge(std::move(v), Rat(0)));
  }
  for (const auto& node : g.nodes) {
    Vec v(n, Rat(0));
    if (node.is_switch) {
      v[node.ports[0]] += 1;
      v[node.ports[1]] -= 1;
      v[node.ports[2]] -= 1;
    } else {
      v[node.ports[0]] += 1;
      v[node.ports[1]] -= 1;
    }
    bool zero = true;
    for (const Rat& x : v) zero = zero && x == 0;
    if (!zero) cons.push_back(con_eq(std::move(v), Rat(0)));
  }
  return cons;
}

bool is_recurrent(const Triangulation& tri, const TrainTrack& track) {
  TrackGraph g = derive_graph(tri, track);
  if (g.names.empty()) return false;
  return lp_strictly_feasible(graph_constraints(g), g.names.size());
}

bool is_suited(const Triangulation& tri, const TrainTrack& track) {
  TrackAnalysis an = analyze_track(tri, track);
  if (!an.legal) return false;
  bool bigon_ok = tri.surface.genus == 1 && tri.surface.punctures.size() == 1;
  for (const auto& r : an.regions) {
    switch (r.shape) {
      case RegionShape::Trigon:
      case RegionShape::PuncturedMonogon:
        break;
      case RegionShape::PuncturedBigon:
        if (!bigon_ok) return false;
        break;
      case RegionShape::Other:
        return false;
    }
  }
  return is_recurrent(tri, track);
}

bool is_complete(const Triangulation& tri, const TrainTrack& track) {
  if (!is_suited(tri, track)) return false;
  TrackGraph g = derive_graph(tri, track);
  int full = 6 * tri.surface.genus - 6 +
             2 * static_cast<int>(tri.surface.punctures.size());
  return affine_dimension(graph_constraints(g), g.names.size()) == full;
}

std::vector<TrainTrack> enumerate_suited_tracks(const Triangulation& tri) {
  static const std::vector<TriangleConfig> kConfigs = {
      {TriangleType::III, {}},   {TriangleType::II, {0}},
      {TriangleType::II, {1}},   {TriangleType::II, {2}},
      {TriangleType::I, {0, 1}}, {TriangleType::I, {0, 2}},
      {TriangleType::I, {1, 2}},
  };
  std::size_t T = tri.tris.size();
  std::vector<TrainTrack> out;
  std::vector<std::size_t> odo(T, 0);
  while (true) {
    TrainTrack cand;
    cand.base = tri.name;
    for (std::size_t t = 0; t < T; ++t) cand.config.push_back(kConfigs[odo[t]]);
    if (is_suited(tri, cand)) out.push_back(std::move(cand));
    std::size_t d = 0;
    while (d < T && ++odo[d] == kConfigs.size()) odo[d++] = 0;
    if (d == T) break;
  }
  return out;
}

std::vector<CompleteTrack> enumerate_complete_tracks(const Triangulation& tri) {
  static std::map<std::string, std::vector<CompleteTrack>> cache;
  std::string key = chart_key(tri);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  std::vector<CompleteTrack> out;
  for (const LinearityDomain& dom : enumerate_domains(tri)) {
    TrainTrack track;
    track.base = tri.name;
    std::vector<std::set<int>> absent(tri.tris.size());
    for (const auto& per_puncture : dom.argmin)
      for (const Corner& c : per_puncture) absent[c.tri].insert(c.pos);
    for (std::size_t t = 0; t < tri.tris.size(); ++t) {
      TriangleConfig cfg;
      TT_CHECK(absent[t].size() <= 2, "a triangle kept no short");
      cfg.absent.assign(absent[t].begin(), absent[t].end());
      cfg.type = static_cast<TriangleType>(3 - absent[t].size());
      track.config.push_back(std::move(cfg));
    }
    TT_CHECK(is_complete(tri, track),
             "maximal linearity domain must yield a complete track");
    out.push_back(CompleteTrack{std::move(track), dom.tuple, dom});
  }
  cache.emplace(std::move(key), out);
  return out;
}

namespace {

std::vector<std::size_t> compute_btau(const std::vector<LinCon>& cons, std::size_t n) {
  Mat eqs;
  for (const auto& c : cons)
    if (c.eq) eqs.push_back(c.coeffs);
  Mat kernel;
  if (eqs.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      Vec e(n, Rat(0));
      e[i] = 1;
      kernel.push_back(std::move(e));
    }
  } else {
    kernel = kernel_basis(eqs);
  }
  std::size_t d = kernel.size();
  std::vector<std::size_t> picked;
  std::size_t rank = 0;
  for (std::size_t b = 0; b < n && rank < d; ++b) {
    Mat sub;
    for (const Vec& kr : kernel) {
      Vec row;
      for (std::size_t c : picked) row.push_back(kr[c]);
      row.push_back(kr[b]);
      sub.push_back(std::move(row));
    }
    std::size_t r = mat_rank(sub);
    if (r > rank) {
      rank = r;
      picked.push_back(b);
    }
  }
  TT_CHECK(rank == d, "spanning subset must reach the kernel dimension");
  return picked;
}

}  // namespace

MeasureCone cone(const Triangulation& tri, const TrainTrack& track) {
  BranchTable tb;
  TrackGraph g = derive_graph(tri, track, &tb);
  MeasureCone mc;
  mc.branches = g.names;
  mc.constraints = graph_constraints(g);
  std::size_t n = g.names.size();
  std::vector<Vec> ineqs, eqs;
  for (const auto& c : mc.constraints)
    (c.eq ? eqs : ineqs).push_back(c.coeffs);
  mc.rays = extreme_rays(ineqs, eqs, n);
  mc.btau = compute_btau(mc.constraints, n);
  mc.dim = n == 0 ? -1 : affine_dimension(mc.constraints, n);
  return mc;
}

ChartDictionary chart_dictionary(const Triangulation& tri, const TrainTrack& track) {
  BranchTable tb;
  TrackGraph g = derive_graph(tri, track, &tb);
  std::size_t nI = tri.arcs.size();
  std::size_t h = tri.surface.punctures.size();

  ChartDictionary d;
  d.branches = g.names;
  d.wforms.reserve(h);
  for (std::size_t pi = 0; pi < h; ++pi)
    d.wforms.push_back(removed_corner_form(tri, track, pi));

  auto windex = [&](const PunctureId& p) {
    for (std::size_t pi = 0; pi < h; ++pi)
      if (tri.surface.punctures[pi] == p) return pi;
    fail("TrackInvalid", "unknown puncture " + p);
  };

  d.forms.assign(g.names.size(), Vec(nI, Rat(0)));
  for (std::size_t ai = 0; ai < nI; ++ai) {
    int b = tb.long_of[ai];
    if (b < 0) continue;
    const auto& occ = tri.occurrences.at(tri.arcs[ai]);
    int t = occ[0].tri, i = occ[0].pos;
    const PunctureId& p = tri.puncture_of({t, prev3(i)});
    const PunctureId& q = tri.puncture_of({t, i});
    Vec row(nI, Rat(0));
    row[ai] = -2;
    const Vec& wp = d.wforms[windex(p)];
    const Vec& wq = d.wforms[windex(q)];
    for (std::size_t j = 0; j < nI; ++j) row[j] -= wp[j] + wq[j];
    d.forms[b] = std::move(row);
  }
  for (std::size_t t = 0; t < tri.tris.size(); ++t) {
    for (int c = 0; c < 3; ++c) {
      int b = tb.short_of[t][c];
      if (b < 0) continue;
      Corner corner{static_cast<int>(t), c};
      Vec row = corner_form(tri, corner);
      const Vec& wp = d.wforms[windex(tri.puncture_of(corner))];
      for (std::size_t j = 0; j < nI; ++j) row[j] -= wp[j];
      d.forms[b] = std::move(row);
    }
  }

  int expected = 6 * tri.surface.genus - 6 + 2 * static_cast<int>(h);
  TT_CHECK(static_cast<int>(mat_rank(d.forms)) == expected,
           "branch form rank must equal the track chart dimension");
  return d;
}

std::vector<LinCon> domain_system(const Triangulation& tri, const TrainTrack& track) {
  std::size_t nI = tri.arcs.size();
  std::vector<LinCon> cons;
  std::set<Vec> seen;
  for (std::size_t pi = 0; pi < tri.surface.punctures.size(); ++pi) {
    Vec fp = removed_corner_form(tri, track, pi);
    for (const Corner& c : tri.corners_at.at(tri.surface.punctures[pi])) {
      Vec diff = corner_form(tri, c);
      bool zero = true;
      for (std::size_t j = 0; j < nI; ++j) {
        diff[j] -= fp[j];
        zero = zero && diff[j] == 0;
      }
      if (zero || !seen.insert(diff).second) continue;
      cons.push_back(con_ge(std::move(diff), Rat(0)));
    }
  }
  return cons;
}

ChartMap chart_map(const Triangulation& tri, const TrainTrack& track) {
  ChartDictionary d = chart_dictionary(tri, track);
  BranchTable tb;
  TrackGraph g = derive_graph(tri, track, &tb);
  std::vector<std::size_t> btau = compute_btau(graph_constraints(g), g.names.size());

  ChartMap m;
  for (std::size_t b : btau) {
    m.rows.push_back(d.branches[b]);
    m.to_chart.push_back(d.forms[b]);
  }
  for (std::size_t pi = 0; pi < tri.surface.punctures.size(); ++pi) {
    m.rows.push_back("w_" + tri.surface.punctures[pi]);
    m.to_chart.push_back(d.wforms[pi]);
  }
  TT_CHECK(m.to_chart.size() == tri.arcs.size(),
           "chart map must be square over the arc index set");
  auto inv = mat_inverse(m.to_chart);
  TT_CHECK(inv.has_value(), "track chart map must be invertible");
  m.from_chart = std::move(*inv);
  return m;
}

std::string chain_case_name(ChainCase c) {
  switch (c) {
    case ChainCase::OneOne: return "1:1";
    case ChainCase::TwoOne: return "2:1";
    case ChainCase::OneTwo: return "1:2";
  }
  fail("Internal", "bad chain case");
}

std::pair<int, int> lambda_cell(const Triangulation& tri, const TrainTrack& track,
                                ArcId k) {
  const auto& occ = tri.occurrences.at(k);
  int t1 = occ[0].tri, i1 = occ[0].pos, t2 = occ[1].tri, i2 = occ[1].pos;
  TT_CHECK(t1 != t2, "flip quad must have two distinct triangles");
  auto cell_of = [&](int t, int i, bool second) {
    const TriangleConfig& cfg = track.config[t];
    if (cfg.type == TriangleType::III) return -1;
    TT_CHECK(cfg.type == TriangleType::II, "flanking triangle of type I");
    int r = (cfg.absent[0] - i + 3) % 3;
    // Quad positions: first triangle reads p1, p2, p3 from the diagonal
    // corner; the second reads p3, p4, p1.
    static const int first_map[3] = {0, 1, 2};
    static const int second_map[3] = {2, 3, 0};
    return second ? second_map[r] : first_map[r];
  };
  return {cell_of(t1, i1, false), cell_of(t2, i2, true)};
}

namespace {

struct CellEntry {
  const char* moves;
  ChainCase tag;
};

// Rows are the first triangle's absent-corner quad position (p1, p2, p3 or
// none), columns the second's (p1, p3, p4 or none). The two diagonal cells
// never occur for complete tracks.
std::optional<CellEntry> cell_table(int row, int col) {
  auto e = [](const char* m, ChainCase t) { return CellEntry{m, t}; };
  if (row == 0 && col == 0) return std::nullopt;
  if (row == 0 && col == 2) return e("fold", ChainCase::TwoOne);
  if (row == 0 && col == 3) return e("shift", ChainCase::OneOne);
  if (row == 0 && col == -1) return e("shift,fold", ChainCase::TwoOne);
  if (row == 1 && col == 0) return e("shift", ChainCase::OneOne);
  if (row == 1 && col == 2) return e("shift", ChainCase::OneOne);
  if (row == 1 && col == 3) return e("split", ChainCase::OneTwo);
  if (row == 1 && col == -1) return e("split,shift", ChainCase::OneTwo);
  if (row == 2 && col == 0) return e("fold", ChainCase::TwoOne);
  if (row == 2 && col == 2) return std::nullopt;
  if (row == 2 && col == 3) return e("shift", ChainCase::OneOne);
  if (row == 2 && col == -1) return e("shift,fold", ChainCase::TwoOne);
  if (row == -1 && col == 0) return e("shift,fold", ChainCase::TwoOne);
  if (row == -1 && col == 2) return e("shift,fold", ChainCase::TwoOne);
  if (row == -1 && col == 3) return e("split,shift", ChainCase::OneTwo);
  if (row == -1 && col == -1) return e("split,shift,fold", ChainCase::OneOne);
  fail("Internal", "quad cell out of range");
}

Mat piece_matrix(const IMat& b, std::size_t k, int sign) {
  std::size_t n = b.size();
  Mat m = mat_identity(n);
  m[k][k] = -1;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == k) continue;
    int v = sign > 0 ? b[k][j] : -b[k][j];
    m[k][j] = v > 0 ? v : 0;
  }
  return m;
}

Vec piece_normal(const IMat& b, std::size_t k, int sign) {
  // Piece + is active where sum [b_kj]+ a_j <= sum [-b_kj]+ a_j.
  std::size_t n = b.size();
  Vec v(n, Rat(0));
  for (std::size_t j = 0; j < n; ++j) {
    if (j == k) continue;
    v[j] = Rat(sign > 0 ? std::max(-b[k][j], 0) - std::max(b[k][j], 0)
                        : std::max(b[k][j], 0) - std::max(-b[k][j], 0));
  }
  return v;
}

Vec pull_back(const Vec& f, const Mat& m) {
  std::size_t n = m.size();
  Vec out(n, Rat(0));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) out[j] += f[i] * m[i][j];
  return out;
}

bool piece_trivial(const Vec& pn) {
  for (const Rat& x : pn)
    if (x != 0) return false;
  return true;
}

// Open-cell test: does the interior of the source domain meet the piece
// interior and the preimage of the target domain's interior?
bool piece_links(const std::vector<LinCon>& src, const Vec& pn, const Mat& ms,
                 const std::vector<Vec>& target_facets, std::size_t n) {
  std::vector<LinCon> cons = src;
  if (!piece_trivial(pn)) cons.push_back(con_ge(pn, Rat(0)));
  for (const Vec& f : target_facets) cons.push_back(con_ge(pull_back(f, ms), Rat(0)));
  return lp_strictly_feasible(cons, n);
}

std::vector<LinCon> image_system(const std::vector<LinCon>& src, const Vec& pn,
                                 const Mat& ms) {
  // The piece map is an involution, so the image of {src, piece} under it
  // is cut out by the pulled-back constraints.
  std::vector<LinCon> out;
  for (const auto& c : src) out.push_back(con_ge(pull_back(c.coeffs, ms), c.rhs));
  if (!piece_trivial(pn)) out.push_back(con_ge(pull_back(pn, ms), Rat(0)));
  return out;
}

bool system_inside(const std::vector<LinCon>& inner, const std::vector<LinCon>& outer,
                   std::size_t n) {
  for (const auto& c : outer)
    if (!lp_implies(inner, n, c.coeffs, c.rhs)) return false;
  return true;
}

}  // namespace

std::vector<LambdaSuccessor> lambda_relation(const Triangulation& tri,
                                             const TrainTrack& track, ArcId k) {
  if (!is_complete(tri, track)) fail("TrackInvalid", "track is not complete");
  Triangulation tri2 = flip(tri, k);
  std::size_t n = tri.arcs.size();
  std::size_t kidx = tri.arc_index(k);
  IMat b = exchange_matrix(tri);

  std::vector<LinCon> src = domain_system(tri, track);
  std::vector<CompleteTrack> targets = enumerate_complete_tracks(tri2);

  struct Hit {
    std::size_t target;
    int sign;
  };
  std::vector<Hit> hits;
  for (std::size_t ti = 0; ti < targets.size(); ++ti) {
    bool plus = piece_links(src, piece_normal(b, kidx, +1), piece_matrix(b, kidx, +1),
                            targets[ti].domain.facets, n);
    bool minus = false;
    if (!piece_trivial(piece_normal(b, kidx, +1)))
      minus = piece_links(src, piece_normal(b, kidx, -1), piece_matrix(b, kidx, -1),
                          targets[ti].domain.facets, n);
    TT_CHECK(!(plus && minus), "successor must come from a single linear piece");
    if (plus || minus) hits.push_back({ti, plus ? +1 : -1});
  }
  TT_CHECK(!hits.empty(), "flip must produce at least one successor");
  TT_CHECK(hits.size() <= 2, "flip cannot produce more than two successors");

  ChainCase tag;
  if (hits.size() == 2) {
    tag = ChainCase::OneTwo;
  } else {
    const Hit& only = hits[0];
    Vec pn = piece_normal(b, kidx, only.sign);
    Mat ms = piece_matrix(b, kidx, only.sign);
    std::vector<LinCon> img = image_system(src, pn, ms);
    std::vector<LinCon> tgt;
    for (const Vec& f : targets[only.target].domain.facets)
      tgt.push_back(con_ge(f, Rat(0)));
    TT_CHECK(system_inside(img, tgt, n), "image must land inside the successor domain");
    tag = system_inside(tgt, img, n) ? ChainCase::OneOne : ChainCase::TwoOne;
  }

  auto [row, col] = lambda_cell(tri, track, k);
  auto entry = cell_table(row, col);
  TT_CHECK(entry.has_value(), "complete track hit an excluded quad cell");
  // The table tag is the generic chain case; a fold or split cell may
  // collapse to a 1:1 chain when the other partner fails completeness
  // (its measure cone has no interior). The collapse is the only allowed
  // deviation.
  TT_CHECK(entry->tag == tag || tag == ChainCase::OneOne,
           "realized chain case must be the table case or its collapse");

  std::vector<LambdaSuccessor> out;
  for (const Hit& hit : hits)
    out.push_back(LambdaSuccessor{targets[hit.target].track, tag, entry->moves});
  return out;
}

Mat lambda_transition(const Triangulation& tri, const TrainTrack& tau, ArcId k,
                      const Triangulation& tri2, const TrainTrack& tau2) {
  std::size_t n = tri.arcs.size();
  std::size_t kidx = tri.arc_index(k);
  IMat b = exchange_matrix(tri);
  std::vector<LinCon> src = domain_system(tri, tau);
  std::vector<Vec> tgt_facets;
  for (const auto& c : domain_system(tri2, tau2)) tgt_facets.push_back(c.coeffs);

  int sign = 0;
  for (int s : {+1, -1}) {
    if (s < 0 && piece_trivial(piece_normal(b, kidx, +1))) break;
    if (piece_links(src, piece_normal(b, kidx, s), piece_matrix(b, kidx, s),
                    tgt_facets, n)) {
      TT_CHECK(sign == 0, "transition piece must be unique");
      sign = s;
    }
  }
  if (sign == 0) fail("TrackInvalid", "tracks are not related by this flip");

  Mat ms = piece_matrix(b, kidx, sign);
  Mat d = chart_dictionary(tri, tau).forms;
  Mat d2t = mat_transpose(chart_dictionary(tri2, tau2).forms);
  Mat rhs = mat_mul(d, ms);
  Mat t;
  for (const Vec& row : rhs) {
    auto sol = solve_general(d2t, row);
    TT_CHECK(sol.has_value(), "carried measures must lie in the successor span");
    t.push_back(std::move(*sol));
  }
  return t;
}

std::vector<CarryResult> carrying_matrix(const Triangulation& tri,
                                         const TrainTrack& track,
                                         const FlipWord& word,
                                         const Vec* reference) {
  struct State {
    Triangulation tri;
    TrainTrack track;
    Mat t;
    std::optional<Vec> ref;
    bool tie = false;
  };

  State start{tri, track, mat_identity(derive_graph(tri, track).names.size()),
              std::nullopt, false};
  if (reference) {
    TT_CHECK(reference->size() == tri.arcs.size(), "reference dimension mismatch");
    std::vector<LinCon> src = domain_system(tri, track);
    for (const auto& c : src) {
      Rat v(0);
      for (std::size_t j = 0; j < c.coeffs.size(); ++j)
        v += c.coeffs[j] * (*reference)[j];
      if (v < c.rhs) fail("NotCarried", "reference point is outside the track domain");
    }
    start.ref = *reference;
  }

  std::vector<State> frontier{std::move(start)};
  for (const LoopStep& step : word) {
    std::vector<State> next;
    for (State& st : frontier) {
      if (!step.is_flip) {
        auto sigma = perm_indices(st.tri.arcs, step.perm);
        Triangulation tri2 = permute_arcs(st.tri, step.perm);
        BranchTable tb_old, tb_new;
        derive_graph(st.tri, st.track, &tb_old);
        derive_graph(tri2, st.track, &tb_new);
        std::size_t n_old = tb_old.names.size();
        Mat perm_m = mat_zero(n_old, tb_new.names.size());
        for (std::size_t ai = 0; ai < st.tri.arcs.size(); ++ai) {
          int bo = tb_old.long_of[ai];
          if (bo < 0) continue;
          int bn = tb_new.long_of[tri2.arc_index(step.perm[ai])];
          TT_CHECK(bn >= 0, "relabeled long branch must survive");
          perm_m[bo][bn] = 1;
        }
        for (std::size_t t = 0; t < st.tri.tris.size(); ++t)
          for (int c = 0; c < 3; ++c)
            if (tb_old.short_of[t][c] >= 0)
              perm_m[tb_old.short_of[t][c]][tb_new.short_of[t][c]] = 1;
        State st2;
        st2.tri = std::move(tri2);
        st2.track = st.track;
        st2.t = mat_mul(st.t, perm_m);
        if (st.ref) st2.ref = permute_vec(*st.ref, sigma);
        st2.tie = st.tie;
        next.push_back(std::move(st2));
        continue;
      }

      ArcId k = step.flip_arc;
      std::vector<LambdaSuccessor> succs = lambda_relation(st.tri, st.track, k);
      Triangulation tri2 = flip(st.tri, k);
      IMat b = exchange_matrix(st.tri);
      std::optional<Vec> ref2;
      std::vector<std::size_t> follow;
      bool tie_here = false;
      if (st.ref) {
        ref2 = tropical_a_mutate(*st.ref, b, st.tri.arc_index(k));
        std::vector<std::size_t> strict, closed;
        for (std::size_t si = 0; si < succs.size(); ++si) {
          bool all_strict = true, all_closed = true;
          for (const auto& c : domain_system(tri2, succs[si].track)) {
            Rat v(0);
            for (std::size_t j = 0; j < c.coeffs.size(); ++j)
              v += c.coeffs[j] * (*ref2)[j];
            if (v <= 0) all_strict = false;
            if (v < 0) all_closed = false;
          }
          if (all_strict) strict.push_back(si);
          if (all_closed) closed.push_back(si);
        }
        if (strict.size() == 1) {
          follow = strict;
        } else if (!closed.empty()) {
          follow = closed;
          tie_here = true;
        } else {
          fail("NotCarried", "image point left every successor domain");
        }
      } else {
        follow.resize(succs.size());
        std::iota(follow.begin(), follow.end(), 0);
      }
      for (std::size_t si : follow) {
        State st2;
        st2.tri = tri2;
        st2.track = succs[si].track;
        st2.t = mat_mul(st.t, lambda_transition(st.tri, st.track, k, tri2,
                                                succs[si].track));
        st2.ref = ref2;
        st2.tie = st.tie || tie_here;
        next.push_back(std::move(st2));
      }
    }
    frontier = std::move(next);
  }

  std::vector<CarryResult> out;
  for (State& st : frontier)
    out.push_back(CarryResult{std::move(st.t), std::move(st.tri),
                              std::move(st.track), st.tie});
  return out;
}

Mat restrict_to_span(const Triangulation& tri, const TrainTrack& track,
                     const Mat& m) {
  TrackGraph g = derive_graph(tri, track);
  std::size_t n = g.names.size();
  TT_CHECK(m.size() == n, "matrix must act on the branch space");
  Mat eqs;
  for (const auto& c : graph_constraints(g))
    if (c.eq) eqs.push_back(c.coeffs);
  Mat kernel;
  if (eqs.empty()) {
    kernel = mat_identity(n);
  } else {
    kernel = kernel_basis(eqs);
  }
  std::size_t d = kernel.size();
  Mat kmat = mat_zero(n, d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < n; ++i) kmat[i][j] = kernel[j][i];
  Mat r = mat_zero(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    Vec mk(n, Rat(0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) mk[i] += m[i][l] * kernel[j][l];
    auto x = solve_general(kmat, mk);
    TT_CHECK(x.has_value(), "carrying map must preserve the measure span");
    for (std::size_t i = 0; i < d; ++i) r[i][j] = (*x)[i];
  }
  return r;
}

}  // namespace troptrack
