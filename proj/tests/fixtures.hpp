#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "troptrack/tracks.hpp"

namespace fixtures {

using namespace troptrack;

// Sides get orientation flags by occurrence order: an arc's first side is
// positive, its second negative. Both triangles are counterclockwise, so
// the gluing is already determined by the occurrence pairs.
inline Triangulation make(int genus, std::vector<std::string> punctures,
                          std::vector<ArcId> arcs,
                          std::vector<std::array<int, 3>> tris,
                          std::string name) {
  SurfaceData surface;
  surface.genus = genus;
  surface.punctures = std::move(punctures);
  std::map<int, int> seen;
  std::vector<TriangleSides> sides;
  for (const auto& t : tris) {
    TriangleSides row;
    for (int i = 0; i < 3; ++i) {
      row[i].arc = t[i];
      row[i].flip = seen[t[i]]++ > 0;
    }
    sides.push_back(row);
  }
  return build_triangulation(surface, arcs, sides, std::move(name));
}

// Four-punctured sphere: middle arc 1 between the top and bottom punctures,
// square 2,3,4,5 around it, outer arc 6 closing the back.
inline Triangulation sphere4() {
  return make(0, {"pA", "pB", "pC", "pD"}, {1, 2, 3, 4, 5, 6},
              {{1, 2, 3}, {1, 4, 5}, {2, 6, 3}, {5, 4, 6}}, "sphere4");
}

// Once-punctured torus: two triangles over the same three arcs.
inline Triangulation torus() {
  return make(1, {"p"}, {1, 2, 3}, {{1, 2, 3}, {1, 2, 3}}, "torus");
}

// Five-punctured sphere: fan of arcs 1..4 from the top puncture, chain
// 5,6,7 along the bottom, arcs 8,9 cutting off the outer ends.
inline Triangulation sphere5() {
  return make(0, {"p1", "p2", "p3", "p4", "p5"}, {1, 2, 3, 4, 5, 6, 7, 8, 9},
              {{6, 8, 9}, {1, 8, 5}, {1, 5, 2}, {2, 6, 3}, {3, 7, 4}, {4, 7, 9}},
              "sphere5");
}

// Twice-punctured torus: every pair of triangles shares exactly one arc.
inline Triangulation genus1x2() {
  return make(1, {"p", "q"}, {1, 2, 3, 4, 5, 6},
              {{1, 2, 3}, {1, 5, 4}, {2, 6, 5}, {3, 4, 6}}, "genus1x2");
}

// Four-punctured sphere whose arc 1 bounds a self-folded quadrilateral:
// triangles A and B share both arcs 1 and 2, so flipping 1 is blocked.
inline Triangulation blocked() {
  return make(0, {"q1", "q2", "q3", "q4"}, {1, 2, 3, 4, 5, 6},
              {{1, 2, 3}, {1, 4, 2}, {3, 5, 6}, {4, 6, 5}}, "blocked");
}

inline std::vector<Triangulation> all_fixtures() {
  return {sphere4(), torus(), sphere5(), genus1x2()};
}

inline LoopStep flip_step(int arc) {
  LoopStep s;
  s.is_flip = true;
  s.flip_arc = arc;
  return s;
}

inline LoopStep perm_step(std::vector<ArcId> perm) {
  LoopStep s;
  s.is_flip = false;
  s.perm = std::move(perm);
  return s;
}

// LR mapping class on the torus: flip 1, flip 2, relabel 1->2->3->1.
inline FlipWord lr_word() {
  return {flip_step(1), flip_step(2), perm_step({2, 3, 1})};
}

// Same flips closed by the other 3-cycle; finite order, entropy zero.
inline FlipWord lr_finite_word() {
  return {flip_step(1), flip_step(2), perm_step({3, 1, 2})};
}

inline TrainTrack track_of(const Triangulation& tri,
                           std::vector<std::vector<int>> absents) {
  TrainTrack t;
  t.base = tri.name;
  t.config.resize(tri.tris.size());
  for (std::size_t i = 0; i < absents.size() && i < t.config.size(); ++i) {
    std::sort(absents[i].begin(), absents[i].end());
    t.config[i].absent = absents[i];
    t.config[i].type = static_cast<TriangleType>(3 - absents[i].size());
  }
  return t;
}

// Complete track of the all-quadrants domain v>=0, u>=0 on sphere4().
inline TrainTrack sphere4_d1_track(const Triangulation& tri) {
  return track_of(tri, {{0}, {0}, {2}, {0}});
}

// The three complete tracks on the torus: drop the same corner twice.
inline TrainTrack torus_track(const Triangulation& tri, int corner) {
  return track_of(tri, {{corner}, {corner}});
}

inline Vec vec(std::vector<long> entries) {
  Vec v;
  for (long e : entries) v.push_back(Rat(e));
  return v;
}

}  // namespace fixtures
