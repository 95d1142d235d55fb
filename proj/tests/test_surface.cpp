#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <functional>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "troptrack/tropical.hpp"

using namespace troptrack;

namespace {

std::string code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code;
  }
  return "";
}

std::set<Corner> corner_set(const Triangulation& tri, const PunctureId& p) {
  const auto& cs = tri.corners_at.at(p);
  return {cs.begin(), cs.end()};
}

}  // namespace

TEST_CASE("four-punctured sphere gluing data") {
  Triangulation tri = fixtures::sphere4();
  CHECK(tri.arcs.size() == 6);
  CHECK(tri.tris.size() == 4);

  CHECK(tri.occurrences.at(1) == std::array<Corner, 2>{Corner{0, 0}, Corner{1, 0}});
  CHECK(tri.occurrences.at(2) == std::array<Corner, 2>{Corner{0, 1}, Corner{2, 0}});
  CHECK(tri.occurrences.at(3) == std::array<Corner, 2>{Corner{0, 2}, Corner{2, 2}});
  CHECK(tri.occurrences.at(4) == std::array<Corner, 2>{Corner{1, 1}, Corner{3, 1}});
  CHECK(tri.occurrences.at(5) == std::array<Corner, 2>{Corner{1, 2}, Corner{3, 0}});
  CHECK(tri.occurrences.at(6) == std::array<Corner, 2>{Corner{2, 1}, Corner{3, 2}});

  CHECK(corner_set(tri, "pA") ==
        std::set<Corner>{{0, 0}, {2, 0}, {3, 2}, {1, 2}});
  CHECK(corner_set(tri, "pB") == std::set<Corner>{{0, 1}, {2, 2}});
  CHECK(corner_set(tri, "pC") ==
        std::set<Corner>{{0, 2}, {1, 0}, {3, 1}, {2, 1}});
  CHECK(corner_set(tri, "pD") == std::set<Corner>{{1, 1}, {3, 0}});

  CHECK(tri.puncture_of({0, 0}) == "pA");
  CHECK(tri.puncture_of({1, 1}) == "pD");
  CHECK(tri.puncture_of({3, 1}) == "pC");
  for (ArcId a : tri.arcs) CHECK(tri.arc_at(tri.arc_index(a)) == a);
}

TEST_CASE("torus and larger fixtures have the right corner orbits") {
  Triangulation torus = fixtures::torus();
  CHECK(torus.corners_at.at("p").size() == 6);

  Triangulation s5 = fixtures::sphere5();
  // Orbits walked by hand from the arc slots: p1 = {(0,0),(1,1),(2,1),(3,0)},
  // p2 = {(0,1),(1,0),(2,2),(3,2),(4,2),(5,2)}, p3 = {(0,2),(3,1),(4,0),(5,1)},
  // p4 = {(1,2),(2,0)}, p5 = {(4,1),(5,0)}.
  CHECK(s5.corners_at.at("p1").size() == 4);
  CHECK(s5.corners_at.at("p2").size() == 6);
  CHECK(s5.corners_at.at("p3").size() == 4);
  CHECK(s5.corners_at.at("p4").size() == 2);
  CHECK(s5.corners_at.at("p5").size() == 2);
  CHECK(corner_set(s5, "p4") == std::set<Corner>{{1, 2}, {2, 0}});
  CHECK(corner_set(s5, "p5") == std::set<Corner>{{4, 1}, {5, 0}});

  Triangulation g12 = fixtures::genus1x2();
  CHECK(g12.corners_at.at("p").size() == 9);
  CHECK(corner_set(g12, "q") == std::set<Corner>{{1, 1}, {3, 1}, {2, 1}});
}

TEST_CASE("invalid builds fail with specific codes") {
  using fixtures::make;
  CHECK(code_of([] {
          make(0, {"a", "b", "c"}, {1, 2, 3}, {{1, 2, 3}, {1, 2, 3}}, "");
        }) == "SurfaceExcluded");
  CHECK(code_of([] { make(1, {}, {1, 2, 3}, {{1, 2, 3}, {1, 2, 3}}, ""); }) ==
        "SurfaceExcluded");
  CHECK(code_of([] {
          make(0, {"a", "b", "c", "d"}, {1, 2, 3, 4, 5},
               {{1, 2, 3}, {1, 4, 5}, {2, 5, 3}, {4, 2, 3}}, "");
        }) == "ArcCountMismatch");
  CHECK(code_of([] {
          make(0, {"a", "b", "c", "d"}, {1, 2, 3, 4, 5, 6},
               {{1, 1, 2}, {3, 4, 5}, {6, 2, 3}, {4, 5, 6}}, "");
        }) == "SelfFolded");
  CHECK(code_of([] {
          make(0, {"a", "b", "c", "d"}, {1, 2, 3, 4, 5, 6},
               {{1, 2, 3}, {1, 2, 3}, {1, 2, 3}, {4, 5, 6}}, "");
        }) == "GluingInvalid");
  // Two disjoint tori declared as one twice-punctured surface.
  CHECK(code_of([] {
          make(1, {"p", "q"}, {1, 2, 3, 4, 5, 6},
               {{1, 2, 3}, {1, 2, 3}, {4, 5, 6}, {4, 5, 6}}, "");
        }) == "GluingInvalid");
}

TEST_CASE("exchange matrices of the pinned fixtures") {
  IMat bt = exchange_matrix(fixtures::torus());
  CHECK(bt == IMat{{0, 2, -2}, {-2, 0, 2}, {2, -2, 0}});

  IMat bs = exchange_matrix(fixtures::sphere4());
  CHECK(bs[0] == std::vector<int>{0, 1, -1, 1, -1, 0});
  for (std::size_t i = 0; i < bs.size(); ++i)
    for (std::size_t j = 0; j < bs.size(); ++j) CHECK(bs[i][j] == -bs[j][i]);
}

TEST_CASE("flip replaces the diagonal of the quadrilateral") {
  Triangulation tri = fixtures::sphere4();
  Triangulation f = flip(tri, 1);
  CHECK(f.arcs == tri.arcs);
  CHECK(f.tris[0][0].arc == 3);
  CHECK(f.tris[0][1].arc == 4);
  CHECK(f.tris[0][2].arc == 1);
  CHECK(f.tris[1][0].arc == 5);
  CHECK(f.tris[1][1].arc == 2);
  CHECK(f.tris[1][2].arc == 1);
  CHECK(f.tris[2] == tri.tris[2]);
  CHECK(f.tris[3] == tri.tris[3]);

  // Puncture labels ride along: the new diagonal joins pB and pD.
  CHECK(f.puncture_of({0, 0}) == "pC");
  CHECK(f.puncture_of({0, 1}) == "pD");
  CHECK(f.puncture_of({0, 2}) == "pB");
  CHECK(f.puncture_of({1, 0}) == "pA");
  CHECK(f.puncture_of({1, 1}) == "pB");
  CHECK(f.puncture_of({1, 2}) == "pD");
}

TEST_CASE("flip matches matrix mutation and is an involution") {
  for (const Triangulation& tri : fixtures::all_fixtures()) {
    IMat b = exchange_matrix(tri);
    for (ArcId k : tri.arcs) {
      Triangulation f;
      try {
        f = flip(tri, k);
      } catch (const Error& e) {
        CHECK(e.code == "FlipBlocked");
        continue;
      }
      CHECK(exchange_matrix(f) == mutate_exchange(b, tri.arc_index(k)));
      Triangulation ff = flip(f, k);
      CHECK(same_triangulation(ff, tri));
    }
  }
}

TEST_CASE("flip is blocked when the quadrilateral degenerates") {
  Triangulation tri = fixtures::blocked();
  CHECK(code_of([&] { flip(tri, 1); }) == "FlipBlocked");
  // The other arcs of that fixture still flip.
  CHECK(code_of([&] { flip(tri, 3); }) == "");
  CHECK(code_of([&] { flip(tri, 99); }) != "");
}

TEST_CASE("arc relabeling transports the exchange matrix") {
  Triangulation tri = fixtures::sphere4();
  Triangulation p = permute_arcs(tri, {1, 3, 2, 4, 5, 6});
  CHECK(p.arcs == tri.arcs);
  IMat b = exchange_matrix(tri), bp = exchange_matrix(p);
  // Row of arc 1 with the entries at arcs 2 and 3 swapped.
  CHECK(bp[0] == std::vector<int>{0, -1, 1, 1, -1, 0});
  std::vector<std::size_t> sigma = {0, 2, 1, 3, 4, 5};
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) CHECK(bp[sigma[i]][sigma[j]] == b[i][j]);
}

TEST_CASE("loop recognition on the torus") {
  Triangulation torus = fixtures::torus();
  CHECK(is_loop(fixtures::lr_word(), torus));
  CHECK(is_loop(fixtures::lr_finite_word(), torus));
  CHECK(!is_loop({fixtures::flip_step(1)}, torus));
  CHECK(is_loop({fixtures::flip_step(1), fixtures::flip_step(1)}, torus));

  Triangulation end = apply_word(torus, fixtures::lr_word());
  CHECK(same_triangulation(end, torus));
  CHECK(exchange_matrix(end) == exchange_matrix(torus));
}

TEST_CASE("triangle matching finds the relabeling") {
  Triangulation tri = fixtures::sphere4();
  std::vector<int> id = match_triangles(tri, tri);
  CHECK(id == std::vector<int>{0, 1, 2, 3});
  Triangulation other = fixtures::torus();
  CHECK(match_triangles(tri, other).empty());
}
