#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "troptrack/dd.hpp"
#include "troptrack/lp.hpp"
#include "troptrack/moves.hpp"
#include "troptrack/potential.hpp"
#include "troptrack/surface.hpp"

namespace troptrack {

// A track suited to a triangulation is a subtrack of its freeway: per
// triangle the central trigon keeps all three corner shorts (type III),
// exactly two (type II), or one (type I). `absent` lists the corner
// positions whose shorts are removed.
enum class TriangleType { I = 1, II = 2, III = 3 };

struct TriangleConfig {
  TriangleType type = TriangleType::III;
  std::vector<int> absent;  // sorted corner positions, size 3 - type

  bool operator==(const TriangleConfig&) const = default;
};

struct TrainTrack {
  std::string base;
  std::vector<TriangleConfig> config;  // aligned with Triangulation::tris

  bool operator==(const TrainTrack&) const = default;
};

// Branch presence after retracting dangling pieces: a long branch needs at
// least one short at each of its two trigon vertices; a short with a free
// end (no long, no companion short at some vertex) retracts in turn.
struct TrackPresence {
  std::vector<std::array<bool, 3>> short_present;  // [triangle][corner]
  std::vector<bool> long_present;                  // by arc index
};

TrackPresence cascade(const Triangulation& tri, const TrainTrack& track);

enum class RegionShape { Trigon, PuncturedMonogon, PuncturedBigon, Other };

// One complementary region of the track in the punctured surface.
// chi_open is the Euler characteristic of the open region (punctures
// removed); the doubled characteristic 2*chi_open - cusps must be negative
// for every region of a genuine train track.
struct RegionInfo {
  int chi_open;
  int punctures;
  int cusps;
  int chi_doubled;
  RegionShape shape;
};

struct TrackAnalysis {
  TrackPresence presence;
  bool nonempty;
  bool switchless_component;
  std::vector<RegionInfo> regions;
  bool legal;
};

TrackAnalysis analyze_track(const Triangulation& tri, const TrainTrack& track);

// Branch indexing of the derived graph: longs over crossed arcs in arc
// order, then present shorts in (triangle, corner) order.
struct BranchTable {
  std::vector<std::string> names;
  std::vector<int> long_of;                   // arc index -> branch or -1
  std::vector<std::array<int, 3>> short_of;   // [triangle][corner] -> branch or -1
};

TrackGraph derive_graph(const Triangulation& tri, const TrainTrack& track,
                        BranchTable* table = nullptr);

// Measure cone of an abstract graph: nonnegativity plus one equality per
// switch (lone = p1 + p2) and per joint (equal measure both sides).
std::vector<LinCon> graph_constraints(const TrackGraph& g);

bool is_recurrent(const Triangulation& tri, const TrainTrack& track);

// Suited: recurrent, and every complementary region is a trigon or a
// once-punctured monogon (once-punctured bigons allowed only on the
// once-punctured torus). Complete: suited with a measure cone of the full
// dimension 6g - 6 + 2h.
bool is_suited(const Triangulation& tri, const TrainTrack& track);
bool is_complete(const Triangulation& tri, const TrainTrack& track);

std::vector<TrainTrack> enumerate_suited_tracks(const Triangulation& tri);

struct CompleteTrack {
  TrainTrack track;
  std::vector<Corner> tuple;  // argmin corner per puncture, declaration order
  LinearityDomain domain;
};

std::vector<CompleteTrack> enumerate_complete_tracks(const Triangulation& tri);

struct MeasureCone {
  std::vector<std::string> branches;
  std::vector<LinCon> constraints;
  ConeRays rays;
  std::vector<std::size_t> btau;  // spanning subset, indices into branches
  int dim;                        // affine dimension of the cone
};

MeasureCone cone(const Triangulation& tri, const TrainTrack& track);

// Linear forms over the A-chart attached to the track's domain: each branch
// measure as a row vector against a-coordinates, and the per-puncture
// potential values w_p (rows of wforms). On the domain of the track,
// nu(short at corner c) = cornerform(c) - w_p and nu(long over arc) =
// -2 a_arc - w_p - w_q for the arc's endpoint punctures.
struct ChartDictionary {
  std::vector<std::string> branches;
  Mat forms;   // |B| x |I|
  Mat wforms;  // h x |I|
};

ChartDictionary chart_dictionary(const Triangulation& tri, const TrainTrack& track);

// Inequality system of the track's linearity domain in a-coordinates.
std::vector<LinCon> domain_system(const Triangulation& tri, const TrainTrack& track);

// Invertible base change between a-coordinates and the decorated track
// chart (nu restricted to btau, then one w per puncture).
struct ChartMap {
  std::vector<std::string> rows;
  Mat to_chart;    // |I| x |I|, a |-> (nu_btau; w)
  Mat from_chart;  // inverse
};

ChartMap chart_map(const Triangulation& tri, const TrainTrack& track);

enum class ChainCase { OneOne, TwoOne, OneTwo };

std::string chain_case_name(ChainCase c);

struct LambdaSuccessor {
  TrainTrack track;   // complete track on flip(tri, k)
  ChainCase tag;
  std::string moves;  // table cell's move word
};

// Quad cell of the two triangles flanking arc k: absent-short position of
// each, as 0 (p1), 1 (p2), 2 (p3), 3 (p4) or -1 (type III).
std::pair<int, int> lambda_cell(const Triangulation& tri, const TrainTrack& track,
                                ArcId k);

std::vector<LambdaSuccessor> lambda_relation(const Triangulation& tri,
                                             const TrainTrack& track, ArcId k);

// Transition matrix T with nu_tau = T nu_tau2 for the flip relating the two
// tracks, computed through the chart dictionaries on the active linear
// piece of the tropical A-flip. T is canonical as a map on span V(tau2).
Mat lambda_transition(const Triangulation& tri, const TrainTrack& tau, ArcId k,
                      const Triangulation& tri2, const TrainTrack& tau2);

struct CarryResult {
  Mat matrix;  // |B(start)| x |B(final)|, nu_start = matrix nu_final
  Triangulation final_tri;
  TrainTrack final_track;
  bool tie = false;  // some step's reference sat on a cone boundary
};

// Follows the track through the word, composing per-flip transitions and
// branch relabelings for permutation steps. The reference point steers 1:2
// steps; without one every successor path is followed.
std::vector<CarryResult> carrying_matrix(const Triangulation& tri,
                                         const TrainTrack& track,
                                         const FlipWord& word,
                                         const Vec* reference = nullptr);

// Restriction of a branch-space endomorphism to span V(track), in the
// kernel basis of the switch equalities. Spectral data of a carrying map
// lives here: the matrix itself is only canonical on that span.
Mat restrict_to_span(const Triangulation& tri, const TrainTrack& track,
                     const Mat& m);

}  // namespace troptrack
