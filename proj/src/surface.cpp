#include "troptrack/surface.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <sstream>

namespace troptrack {

std::size_t Triangulation::arc_index(ArcId a) const {
  for (std::size_t i = 0; i < arcs.size(); ++i)
    if (arcs[i] == a) return i;
  fail("GluingInvalid", "unknown arc id " + std::to_string(a));
}

namespace {

// Rebuilds occurrences and corners_at from sides + corner_puncture.
void derive_tables(Triangulation& tri) {
  tri.occurrences.clear();
  tri.corners_at.clear();
  std::map<ArcId, std::vector<Corner>> occ;
  for (int t = 0; t < int(tri.tris.size()); ++t)
    for (int i = 0; i < 3; ++i) occ[tri.tris[t][i].arc].push_back({t, i});
  for (auto& [a, v] : occ) {
    if (v.size() != 2)
      fail("GluingInvalid", "arc " + std::to_string(a) + " used " +
                                std::to_string(v.size()) + " times");
    tri.occurrences[a] = {v[0], v[1]};
  }
  for (int t = 0; t < int(tri.tris.size()); ++t)
    for (int i = 0; i < 3; ++i)
      tri.corners_at[tri.surface.punctures[tri.corner_puncture[t][i]]].push_back(
          {t, i});
}

// Rotating around the puncture at corner (t,i): cross the arc of side i+1 to
// its other occurrence (t',j); the same vertex is corner (t',j) there.
Corner corner_step(const Triangulation& tri, Corner c) {
  int side = (c.pos + 1) % 3;
  ArcId a = tri.tris[c.tri][side].arc;
  const auto& occ = tri.occurrences.at(a);
  Corner other = (occ[0].tri == c.tri && occ[0].pos == side) ? occ[1] : occ[0];
  return other;
}

}  // namespace

Triangulation build_triangulation(const SurfaceData& surface,
                                  const std::vector<ArcId>& arcs,
                                  const std::vector<TriangleSides>& tris,
                                  const std::string& name) {
  int g = surface.genus;
  int h = int(surface.punctures.size());
  if (h == 0 || 2 * g - 2 + h <= 0 || (g == 0 && h <= 3))
    fail("SurfaceExcluded", "genus " + std::to_string(g) + " with " +
                                std::to_string(h) + " punctures");
  int expected_arcs = 6 * g - 6 + 3 * h;
  if (int(arcs.size()) != expected_arcs)
    fail("ArcCountMismatch", std::to_string(arcs.size()) + " arcs given, 6g-6+3h = " +
                                 std::to_string(expected_arcs));
  {
    std::set<ArcId> seen(arcs.begin(), arcs.end());
    if (seen.size() != arcs.size()) fail("GluingInvalid", "duplicate arc id");
    std::set<PunctureId> pseen(surface.punctures.begin(), surface.punctures.end());
    if (pseen.size() != surface.punctures.size())
      fail("GluingInvalid", "duplicate puncture id");
    for (const auto& t : tris)
      for (const auto& s : t)
        if (!seen.count(s.arc))
          fail("GluingInvalid", "unknown arc id " + std::to_string(s.arc));
  }
  for (const auto& t : tris)
    if (t[0].arc == t[1].arc || t[1].arc == t[2].arc || t[0].arc == t[2].arc)
      fail("SelfFolded", "triangle repeats arc");

  Triangulation tri;
  tri.surface = surface;
  tri.arcs = arcs;
  tri.tris = tris;
  tri.name = name;

  std::map<ArcId, std::vector<Corner>> occ;
  for (int t = 0; t < int(tris.size()); ++t)
    for (int i = 0; i < 3; ++i) occ[tris[t][i].arc].push_back({t, i});
  for (ArcId a : arcs) {
    auto it = occ.find(a);
    if (it == occ.end() || it->second.size() != 2)
      fail("GluingInvalid",
           "arc " + std::to_string(a) + " not used exactly twice");
    const auto& v = it->second;
    if (tris[v[0].tri][v[0].pos].flip == tris[v[1].tri][v[1].pos].flip)
      fail("GluingInvalid",
           "arc " + std::to_string(a) + " glued without reversing orientation");
    tri.occurrences[a] = {v[0], v[1]};
  }

  // Connectivity of the triangle adjacency graph.
  if (!tris.empty()) {
    std::vector<bool> reach(tris.size(), false);
    std::vector<int> stack{0};
    reach[0] = true;
    while (!stack.empty()) {
      int t = stack.back();
      stack.pop_back();
      for (int i = 0; i < 3; ++i) {
        const auto& o = tri.occurrences.at(tris[t][i].arc);
        for (const auto& c : o)
          if (!reach[c.tri]) {
            reach[c.tri] = true;
            stack.push_back(c.tri);
          }
      }
    }
    for (bool r : reach)
      if (!r) fail("GluingInvalid", "triangulation is disconnected");
  }

  // Corner orbits = punctures; declared ids attach in first-appearance order.
  tri.corner_puncture.assign(tris.size(), {-1, -1, -1});
  int next = 0;
  for (int t = 0; t < int(tris.size()); ++t)
    for (int i = 0; i < 3; ++i) {
      if (tri.corner_puncture[t][i] != -1) continue;
      if (next == h)
        fail("GluingInvalid", "more corner orbits than declared punctures");
      Corner c{t, i};
      while (tri.corner_puncture[c.tri][c.pos] == -1) {
        tri.corner_puncture[c.tri][c.pos] = next;
        c = corner_step(tri, c);
      }
      ++next;
    }
  if (next != h)
    fail("GluingInvalid", "fewer corner orbits than declared punctures");

  derive_tables(tri);
  return tri;
}

Triangulation flip(const Triangulation& tri, ArcId k) {
  auto occ_it = tri.occurrences.find(k);
  if (occ_it == tri.occurrences.end())
    fail("GluingInvalid", "unknown arc id " + std::to_string(k));
  const auto& occ = occ_it->second;
  auto [t1, p1] = occ[0];
  auto [t2, p2] = occ[1];
  assert(t1 != t2);

  auto side = [&](int t, int p, int j) -> const Side& {
    return tri.tris[t][(p + j) % 3];
  };
  Side a = side(t1, p1, 1), b = side(t1, p1, 2);
  Side c = side(t2, p2, 1), d = side(t2, p2, 2);
  if (b.arc == c.arc || d.arc == a.arc)
    fail("FlipBlocked", "flip of arc " + std::to_string(k) +
                            " would create a self-folded triangle");

  Triangulation out = tri;
  out.tris[t1] = {b, c, Side{k, false}};
  out.tris[t2] = {d, a, Side{k, true}};

  // Quad vertices: X between k,a; Y between a,b; Z between b,k = k,c;
  // W between c,d. New corners: (b,c,k) reads (Z,W,Y), (d,a,k) reads (X,Y,W).
  auto lab = [&](int t, int p, int j) { return tri.corner_puncture[t][(p + j) % 3]; };
  int X = lab(t1, p1, 0), Y = lab(t1, p1, 1), Z = lab(t1, p1, 2);
  int W = lab(t2, p2, 1);
  assert(Z == lab(t2, p2, 0) && X == lab(t2, p2, 2));
  out.corner_puncture[t1] = {Z, W, Y};
  out.corner_puncture[t2] = {X, Y, W};
  derive_tables(out);
  return out;
}

IMat exchange_matrix(const Triangulation& tri) {
  std::size_t n = tri.arcs.size();
  IMat b(n, std::vector<int>(n, 0));
  for (const auto& t : tri.tris)
    for (int r = 0; r < 3; ++r) {
      std::size_t i = tri.arc_index(t[r].arc);
      std::size_t j = tri.arc_index(t[(r + 1) % 3].arc);
      b[i][j] += 1;
      b[j][i] -= 1;
    }
  return b;
}

Triangulation permute_arcs(const Triangulation& tri, const std::vector<ArcId>& perm) {
  if (perm.size() != tri.arcs.size())
    fail("LoopInvalid", "permutation length mismatch");
  std::map<ArcId, ArcId> to;
  for (std::size_t i = 0; i < perm.size(); ++i) to[tri.arcs[i]] = perm[i];
  {
    std::set<ArcId> image(perm.begin(), perm.end());
    std::set<ArcId> domain(tri.arcs.begin(), tri.arcs.end());
    if (image != domain) fail("LoopInvalid", "not a permutation of the arc set");
  }
  Triangulation out = tri;
  for (auto& t : out.tris)
    for (auto& s : t) s.arc = to[s.arc];
  derive_tables(out);
  return out;
}

Triangulation apply_word(const Triangulation& tri, const FlipWord& word) {
  Triangulation cur = tri;
  for (const auto& step : word)
    cur = step.is_flip ? flip(cur, step.flip_arc) : permute_arcs(cur, step.perm);
  return cur;
}

bool is_loop(const FlipWord& word, const Triangulation& tri) {
  return exchange_matrix(apply_word(tri, word)) == exchange_matrix(tri);
}

std::vector<std::array<ArcId, 3>> canonical_triangles(const Triangulation& tri) {
  std::vector<std::array<ArcId, 3>> out;
  for (const auto& t : tri.tris) {
    int r = 0;
    for (int j = 1; j < 3; ++j)
      if (t[j].arc < t[r].arc) r = j;
    out.push_back({t[r].arc, t[(r + 1) % 3].arc, t[(r + 2) % 3].arc});
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool same_triangulation(const Triangulation& lhs, const Triangulation& rhs) {
  return lhs.arcs.size() == rhs.arcs.size() &&
         std::set<ArcId>(lhs.arcs.begin(), lhs.arcs.end()) ==
             std::set<ArcId>(rhs.arcs.begin(), rhs.arcs.end()) &&
         canonical_triangles(lhs) == canonical_triangles(rhs);
}

namespace {
std::vector<std::pair<std::array<ArcId, 3>, int>> keyed_triangles(
    const Triangulation& tri) {
  std::vector<std::pair<std::array<ArcId, 3>, int>> v;
  for (int t = 0; t < int(tri.tris.size()); ++t) {
    const auto& s = tri.tris[t];
    int r = 0;
    for (int j = 1; j < 3; ++j)
      if (s[j].arc < s[r].arc) r = j;
    v.push_back({{s[r].arc, s[(r + 1) % 3].arc, s[(r + 2) % 3].arc}, t});
  }
  std::sort(v.begin(), v.end());
  return v;
}
}  // namespace

std::vector<int> match_triangles(const Triangulation& lhs, const Triangulation& rhs) {
  if (!same_triangulation(lhs, rhs)) return {};
  auto kl = keyed_triangles(lhs), kr = keyed_triangles(rhs);
  std::vector<int> m(lhs.tris.size(), -1);
  for (std::size_t i = 0; i < kl.size(); ++i) m[kl[i].second] = kr[i].second;
  return m;
}

}  // namespace troptrack
