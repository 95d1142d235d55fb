#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fixtures.hpp"
#include "troptrack/tracks.hpp"

using namespace troptrack;

namespace {

Rat dot(const Vec& f, const Vec& a) {
  REQUIRE(f.size() == a.size());
  Rat s(0);
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * a[i];
  return s;
}

bool closed_in(const std::vector<Vec>& facets, const Vec& a) {
  for (const Vec& f : facets)
    if (dot(f, a) < Rat(0)) return false;
  return true;
}

bool strict_in(const std::vector<Vec>& facets, const Vec& a) {
  for (const Vec& f : facets)
    if (dot(f, a) <= Rat(0)) return false;
  return true;
}

// Scales the stored interior point far enough from every facet that a unit
// jitter cannot leave the open cone.
Vec interior_sample(const LinearityDomain& d, std::mt19937& rng) {
  Rat m(0);
  bool first = true;
  for (const Vec& f : d.facets) {
    Rat v = dot(f, d.interior_point);
    REQUIRE(v > Rat(0));
    if (first || v < m) m = v;
    first = false;
  }
  Rat s = first ? Rat(1) : Rat(13) / m;
  std::uniform_int_distribution<int> jitter(-1, 1);
  Vec a(d.interior_point.size(), Rat(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    a[i] = s * d.interior_point[i] + Rat(jitter(rng));
  REQUIRE(strict_in(d.facets, a));
  return a;
}

bool flippable(const Triangulation& tri, ArcId k) {
  try {
    flip(tri, k);
    return true;
  } catch (const Error& e) {
    REQUIRE(e.code == "FlipBlocked");
    return false;
  }
}

const CompleteTrack* find_track(const std::vector<CompleteTrack>& all,
                                const TrainTrack& t) {
  for (const auto& ct : all)
    if (ct.track == t) return &ct;
  return nullptr;
}

std::string track_key(const TrainTrack& t) {
  std::ostringstream os;
  for (const auto& c : t.config) {
    os << '[';
    for (int a : c.absent) os << a;
    os << ']';
  }
  return os.str();
}

// Generic chain case of a quad cell: row p2 splits toward p4 or a type III
// partner, fold cells pair p1 with p3 or a type III partner, the rest are
// one-to-one.
ChainCase generic_case(int row, int col) {
  if (row == 1) return (col == 3 || col == -1) ? ChainCase::OneTwo : ChainCase::OneOne;
  if (row == -1 && col == 3) return ChainCase::OneTwo;
  if (row == -1 && col == -1) return ChainCase::OneOne;
  if (col == 3) return ChainCase::OneOne;
  return ChainCase::TwoOne;
}

}  // namespace

TEST_CASE("four-punctured sphere flip merges the fold pair and collapses the splits") {
  Triangulation tri = fixtures::sphere4();
  Triangulation tri2 = flip(tri, 1);

  TrainTrack d1 = fixtures::track_of(tri, {{0}, {0}, {2}, {0}});
  TrainTrack d2 = fixtures::track_of(tri, {{2}, {2}, {2}, {0}});
  TrainTrack d3 = fixtures::track_of(tri, {{1}, {1}, {1}, {2}});
  TrainTrack d4 = fixtures::track_of(tri, {{1}, {1}, {0}, {1}});
  for (const TrainTrack& t : {d1, d2, d3, d4}) CHECK(is_complete(tri, t));

  CHECK(lambda_cell(tri, d1, 1) == std::pair<int, int>(0, 2));
  CHECK(lambda_cell(tri, d2, 1) == std::pair<int, int>(2, 0));
  CHECK(lambda_cell(tri, d3, 1) == std::pair<int, int>(1, 3));
  CHECK(lambda_cell(tri, d4, 1) == std::pair<int, int>(1, 3));

  TrainTrack s1 = fixtures::track_of(tri2, {{0}, {0}, {2}, {0}});
  TrainTrack s2 = fixtures::track_of(tri2, {{1}, {1}, {0}, {1}});
  TrainTrack s3 = fixtures::track_of(tri2, {{2}, {2}, {1}, {2}});

  auto r1 = lambda_relation(tri, d1, 1);
  REQUIRE(r1.size() == 1);
  CHECK(r1[0].tag == ChainCase::TwoOne);
  CHECK(r1[0].moves == "fold");
  CHECK(r1[0].track == s1);

  auto r2 = lambda_relation(tri, d2, 1);
  REQUIRE(r2.size() == 1);
  CHECK(r2[0].tag == ChainCase::TwoOne);
  CHECK(r2[0].moves == "fold");
  CHECK(r2[0].track == s1);

  // Both split cells collapse: the other split outcome has no strictly
  // positive measure, so the realized chain is one-to-one.
  auto r3 = lambda_relation(tri, d3, 1);
  REQUIRE(r3.size() == 1);
  CHECK(r3[0].tag == ChainCase::OneOne);
  CHECK(r3[0].moves == "split");
  CHECK(r3[0].track == s3);

  auto r4 = lambda_relation(tri, d4, 1);
  REQUIRE(r4.size() == 1);
  CHECK(r4[0].tag == ChainCase::OneOne);
  CHECK(r4[0].moves == "split");
  CHECK(r4[0].track == s2);

  CHECK(enumerate_complete_tracks(tri2).size() == 3);
}

TEST_CASE("flipping back splits the merged track into the original pair") {
  Triangulation tri = fixtures::sphere4();
  Triangulation tri2 = flip(tri, 1);
  TrainTrack s1 = fixtures::track_of(tri2, {{0}, {0}, {2}, {0}});
  TrainTrack s2 = fixtures::track_of(tri2, {{1}, {1}, {0}, {1}});
  TrainTrack s3 = fixtures::track_of(tri2, {{2}, {2}, {1}, {2}});

  CHECK(lambda_cell(tri2, s1, 1) == std::pair<int, int>(1, 3));
  CHECK(lambda_cell(tri2, s2, 1) == std::pair<int, int>(2, 0));
  CHECK(lambda_cell(tri2, s3, 1) == std::pair<int, int>(0, 2));

  auto r1 = lambda_relation(tri2, s1, 1);
  REQUIRE(r1.size() == 2);
  CHECK(r1[0].tag == ChainCase::OneTwo);
  CHECK(r1[1].tag == ChainCase::OneTwo);
  CHECK(r1[0].moves == "split");
  CHECK(!(r1[0].track == r1[1].track));

  // The two fold targets of the forward direction come back one-to-one.
  auto r2 = lambda_relation(tri2, s2, 1);
  REQUIRE(r2.size() == 1);
  CHECK(r2[0].tag == ChainCase::OneOne);
  CHECK(r2[0].moves == "fold");
  auto r3 = lambda_relation(tri2, s3, 1);
  REQUIRE(r3.size() == 1);
  CHECK(r3[0].tag == ChainCase::OneOne);
  CHECK(r3[0].moves == "fold");
  CHECK(!(r2[0].track == r3[0].track));
}

TEST_CASE("torus flips realize a genuine split and a merging fold pair") {
  Triangulation tri = fixtures::torus();
  TrainTrack t0 = fixtures::torus_track(tri, 0);
  TrainTrack t1 = fixtures::torus_track(tri, 1);
  TrainTrack t2 = fixtures::torus_track(tri, 2);

  CHECK(lambda_cell(tri, t0, 1) == std::pair<int, int>(0, 2));
  CHECK(lambda_cell(tri, t1, 1) == std::pair<int, int>(1, 3));
  CHECK(lambda_cell(tri, t2, 1) == std::pair<int, int>(2, 0));

  auto r1 = lambda_relation(tri, t1, 1);
  REQUIRE(r1.size() == 2);
  CHECK(r1[0].tag == ChainCase::OneTwo);
  CHECK(r1[0].moves == "split");
  CHECK(!(r1[0].track == r1[1].track));

  auto r0 = lambda_relation(tri, t0, 1);
  auto r2 = lambda_relation(tri, t2, 1);
  REQUIRE(r0.size() == 1);
  REQUIRE(r2.size() == 1);
  CHECK(r0[0].tag == ChainCase::TwoOne);
  CHECK(r2[0].tag == ChainCase::TwoOne);
  CHECK(r0[0].moves == "fold");
  CHECK(r0[0].track == r2[0].track);
  CHECK(!(r0[0].track == r1[0].track));
  CHECK(!(r0[0].track == r1[1].track));
}

TEST_CASE("rejected inputs: blocked arcs, incomplete tracks, unrelated targets") {
  Triangulation tri = fixtures::sphere4();
  TrainTrack d1 = fixtures::sphere4_d1_track(tri);

  try {
    lambda_relation(tri, d1, 2);
    FAIL("blocked flip accepted");
  } catch (const Error& e) {
    CHECK(e.code == "FlipBlocked");
  }

  Triangulation torus = fixtures::torus();
  try {
    lambda_relation(torus, fixtures::track_of(torus, {{}, {}}), 1);
    FAIL("incomplete track accepted");
  } catch (const Error& e) {
    CHECK(e.code == "TrackInvalid");
  }

  Triangulation tri2 = flip(tri, 1);
  TrainTrack s2 = fixtures::track_of(tri2, {{1}, {1}, {0}, {1}});
  try {
    lambda_transition(tri, d1, 1, tri2, s2);
    FAIL("unrelated target accepted");
  } catch (const Error& e) {
    CHECK(e.code == "TrackInvalid");
  }
}

TEST_CASE("chain structure, preimage counts, and measure transport across fixtures") {
  std::mt19937 rng(20260816u);
  std::vector<std::pair<std::string, Triangulation>> bases;
  bases.emplace_back("sphere4", fixtures::sphere4());
  bases.emplace_back("torus", fixtures::torus());
  bases.emplace_back("genus1x2", fixtures::genus1x2());
  bases.emplace_back("sphere4-flip1", flip(fixtures::sphere4(), 1));

  for (const auto& [label, tri] : bases) {
    CAPTURE(label);
    auto tracks = enumerate_complete_tracks(tri);
    REQUIRE(!tracks.empty());
    IMat b = exchange_matrix(tri);
    for (ArcId k : tri.arcs) {
      CAPTURE(k);
      if (!flippable(tri, k)) continue;
      Triangulation tri2 = flip(tri, k);
      auto targets = enumerate_complete_tracks(tri2);
      IMat b2 = exchange_matrix(tri2);
      std::size_t kidx = tri.arc_index(k);
      std::size_t kidx2 = tri2.arc_index(k);

      std::map<std::string, std::vector<ChainCase>> preimages;
      for (const auto& ct : tracks) {
        CAPTURE(track_key(ct.track));
        auto succs = lambda_relation(tri, ct.track, k);
        REQUIRE(!succs.empty());
        REQUIRE(succs.size() <= 2);

        auto [row, col] = lambda_cell(tri, ct.track, k);
        CHECK(!(row == 0 && col == 0));
        CHECK(!(row == 2 && col == 2));
        ChainCase generic = generic_case(row, col);
        ChainCase tag = succs[0].tag;
        CHECK((tag == generic || tag == ChainCase::OneOne));
        CHECK((succs.size() == 2) == (tag == ChainCase::OneTwo));
        if (tag == ChainCase::OneTwo)
          CHECK(succs[0].moves.find("split") != std::string::npos);
        if (tag == ChainCase::TwoOne)
          CHECK(succs[0].moves.find("fold") != std::string::npos);
        if (succs.size() == 2) {
          CHECK(succs[1].tag == tag);
          CHECK(succs[1].moves == succs[0].moves);
          CHECK(!(succs[0].track == succs[1].track));
        }

        for (const auto& s : succs) {
          CHECK(is_complete(tri2, s.track));
          const CompleteTrack* tgt = find_track(targets, s.track);
          REQUIRE(tgt != nullptr);
          preimages[track_key(s.track)].push_back(tag);

          Mat t = lambda_transition(tri, ct.track, k, tri2, s.track);
          Mat d1 = chart_dictionary(tri, ct.track).forms;
          Mat d2 = chart_dictionary(tri2, s.track).forms;
          REQUIRE(t.size() == d1.size());
          for (int rep = 0; rep < 3; ++rep) {
            Vec a, a2;
            if (tag == ChainCase::TwoOne) {
              a = interior_sample(ct.domain, rng);
              a2 = tropical_a_mutate(a, b, kidx);
              CHECK(strict_in(tgt->domain.facets, a2));
            } else {
              a2 = interior_sample(tgt->domain, rng);
              a = tropical_a_mutate(a2, b2, kidx2);
              CHECK(strict_in(ct.domain.facets, a));
            }
            Vec n1 = mat_vec(d1, a);
            Vec n2 = mat_vec(d2, a2);
            CHECK(mat_vec(t, n2) == n1);
          }
        }
      }

      // Images of the source domains tile the flipped chart: every target is
      // reached, split targets once, fold targets by exactly two sources.
      CHECK(preimages.size() == targets.size());
      for (const auto& [key, tags] : preimages) {
        if (tags[0] == ChainCase::TwoOne) {
          REQUIRE(tags.size() == 2);
          CHECK(tags[1] == ChainCase::TwoOne);
        } else {
          CHECK(tags.size() == 1);
        }
      }
    }
  }
}

TEST_CASE("five-punctured sphere spot check") {
  Triangulation tri = fixtures::sphere5();
  ArcId k = 0;
  for (ArcId a : tri.arcs)
    if (flippable(tri, a)) {
      k = a;
      break;
    }
  REQUIRE(k != 0);
  Triangulation tri2 = flip(tri, k);
  auto targets = enumerate_complete_tracks(tri2);
  for (const auto& ct : enumerate_complete_tracks(tri)) {
    auto succs = lambda_relation(tri, ct.track, k);
    REQUIRE(!succs.empty());
    REQUIRE(succs.size() <= 2);
    CHECK((succs.size() == 2) == (succs[0].tag == ChainCase::OneTwo));
    for (const auto& s : succs) CHECK(find_track(targets, s.track) != nullptr);
  }
}

TEST_CASE("both type three triangles at the flipped arc run the full move word") {
  Triangulation tri = fixtures::genus1x2();
  bool found = false;
  for (const auto& ct : enumerate_complete_tracks(tri)) {
    for (ArcId k : tri.arcs) {
      if (!flippable(tri, k)) continue;
      if (lambda_cell(tri, ct.track, k) != std::pair<int, int>(-1, -1)) continue;
      found = true;
      auto succs = lambda_relation(tri, ct.track, k);
      REQUIRE(succs.size() == 1);
      CHECK(succs[0].tag == ChainCase::OneOne);
      CHECK(succs[0].moves == "split,shift,fold");
    }
  }
  CHECK(found);
}

TEST_CASE("carrying composes transitions along a word") {
  Triangulation tri = fixtures::torus();
  TrainTrack t0 = fixtures::torus_track(tri, 0);
  std::size_t nb = derive_graph(tri, t0).names.size();
  REQUIRE(nb == 7);

  auto empty = carrying_matrix(tri, t0, {});
  REQUIRE(empty.size() == 1);
  CHECK(empty[0].matrix == mat_identity(nb));
  CHECK(empty[0].final_track == t0);
  CHECK(same_triangulation(empty[0].final_tri, tri));
  CHECK(!empty[0].tie);

  // Unsteered carrying follows every successor path.
  FlipWord w = {fixtures::flip_step(1), fixtures::flip_step(2)};
  auto paths = carrying_matrix(tri, t0, w);
  REQUIRE(!paths.empty());
  for (const auto& r : paths) {
    CHECK(r.matrix.size() == nb);
    CHECK(is_complete(r.final_tri, r.final_track));
  }

  // A reference point steers to a single path and transports its measure.
  const CompleteTrack* start = nullptr;
  for (const auto& ct : enumerate_complete_tracks(tri))
    if (ct.track == t0) start = &ct;
  REQUIRE(start != nullptr);
  std::mt19937 rng(7u);
  Vec ref = interior_sample(start->domain, rng);
  auto steered = carrying_matrix(tri, t0, w, &ref);
  REQUIRE(steered.size() == 1);
  const CarryResult& res = steered[0];

  Vec a = ref;
  Triangulation cur = tri;
  for (const auto& step : w) {
    a = tropical_a_mutate(a, exchange_matrix(cur), cur.arc_index(step.flip_arc));
    cur = flip(cur, step.flip_arc);
  }
  Vec nu_start = mat_vec(chart_dictionary(tri, t0).forms, ref);
  Vec nu_final = mat_vec(chart_dictionary(res.final_tri, res.final_track).forms, a);
  CHECK(mat_vec(res.matrix, nu_final) == nu_start);

  auto back = carrying_matrix(tri, t0, {fixtures::flip_step(1), fixtures::flip_step(1)});
  REQUIRE(!back.empty());
  for (const auto& r : back) CHECK(same_triangulation(r.final_tri, tri));
}

TEST_CASE("carrying through a permutation step relabels branches") {
  Triangulation tri = fixtures::torus();
  TrainTrack t0 = fixtures::torus_track(tri, 0);
  auto res = carrying_matrix(tri, t0, {fixtures::perm_step({2, 3, 1})});
  REQUIRE(res.size() == 1);
  CHECK(res[0].final_track == t0);
  CHECK(same_triangulation(res[0].final_tri, permute_arcs(tri, {2, 3, 1})));
  const Mat& m = res[0].matrix;
  REQUIRE(m.size() == 7);
  for (const Vec& row : m) {
    int ones = 0;
    for (const Rat& v : row) {
      CHECK((v == Rat(0) || v == Rat(1)));
      if (v == Rat(1)) ++ones;
    }
    CHECK(ones == 1);
  }
}

TEST_CASE("carrying rejects outside references and blocked flips") {
  Triangulation tri = fixtures::sphere4();
  TrainTrack d1 = fixtures::sphere4_d1_track(tri);
  Vec outside = fixtures::vec({0, -1, 1, -1, 1, 0});  // strictly violates a facet
  try {
    carrying_matrix(tri, d1, {fixtures::flip_step(1)}, &outside);
    FAIL("outside reference accepted");
  } catch (const Error& e) {
    CHECK(e.code == "NotCarried");
  }
  try {
    carrying_matrix(tri, d1, {fixtures::flip_step(2)});
    FAIL("blocked flip accepted");
  } catch (const Error& e) {
    CHECK(e.code == "FlipBlocked");
  }
}
