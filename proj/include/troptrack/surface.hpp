#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "troptrack/error.hpp"

namespace troptrack {

using ArcId = int;
using PunctureId = std::string;

struct SurfaceData {
  int genus = 0;
  std::vector<PunctureId> punctures;
};

// One side of a triangle: the arc it is glued to, plus the orientation flag of
// the gluing. A valid gluing uses every arc exactly twice with opposite flags.
struct Side {
  ArcId arc = 0;
  bool flip = false;

  friend bool operator==(const Side&, const Side&) = default;
};

using TriangleSides = std::array<Side, 3>;

// Corner i of a triangle sits at the end of side i = start of side i+1,
// reading the sides counterclockwise.
struct Corner {
  int tri = -1;
  int pos = -1;

  friend auto operator<=>(const Corner&, const Corner&) = default;
};

using IMat = std::vector<std::vector<int>>;

struct Triangulation {
  SurfaceData surface;
  std::vector<ArcId> arcs;  // fixes the index order of I
  std::vector<TriangleSides> tris;
  std::string name;

  // Derived on build:
  std::map<ArcId, std::array<Corner, 2>> occurrences;       // per arc, in scan order
  std::vector<std::array<int, 3>> corner_puncture;          // puncture index per corner
  std::map<PunctureId, std::vector<Corner>> corners_at;     // with corner multiplicity

  std::size_t arc_index(ArcId a) const;
  ArcId arc_at(std::size_t idx) const { return arcs[idx]; }
  const PunctureId& puncture_of(Corner c) const {
    return surface.punctures[corner_puncture[c.tri][c.pos]];
  }
};

// Validates the gluing and computes the corner-to-puncture map by walking
// corner orbits. Orbits are matched to the declared puncture ids in order of
// first appearance while scanning triangles, then corners.
Triangulation build_triangulation(const SurfaceData& surface,
                                  const std::vector<ArcId>& arcs,
                                  const std::vector<TriangleSides>& tris,
                                  const std::string& name = "");

// Replaces arc k, the diagonal of the quadrilateral formed by its two incident
// triangles, with the other diagonal. FlipBlocked when the result would be
// self-folded.
Triangulation flip(const Triangulation& tri, ArcId k);

// b_ij counts corners where arc j immediately follows arc i counterclockwise
// minus those where it follows clockwise; indexed by position in arcs.
IMat exchange_matrix(const Triangulation& tri);

struct LoopStep {
  bool is_flip = true;
  ArcId flip_arc = 0;
  std::vector<ArcId> perm;  // image of arcs[i], in arc-list order
};

using FlipWord = std::vector<LoopStep>;

// Applies a permutation of the arc labels: every side with arc arcs[i] is
// relabeled to perm[i]; the arc list itself is unchanged as a set.
Triangulation permute_arcs(const Triangulation& tri, const std::vector<ArcId>& perm);

Triangulation apply_word(const Triangulation& tri, const FlipWord& word);

// True iff the word returns the exchange matrix to itself.
bool is_loop(const FlipWord& word, const Triangulation& tri);

// Triangles as rotation-canonicalized arc triples, sorted; two triangulations
// are combinatorially equal with labels fixed iff these coincide.
std::vector<std::array<ArcId, 3>> canonical_triangles(const Triangulation& tri);
bool same_triangulation(const Triangulation& lhs, const Triangulation& rhs);

// For two equal triangulations, the triangle correspondence induced by the
// canonical ordering (ties broken by scan order), as indices rhs_tri[i] of the
// triangle in rhs matching triangle i of lhs; empty if not equal.
std::vector<int> match_triangles(const Triangulation& lhs, const Triangulation& rhs);

}  // namespace troptrack
