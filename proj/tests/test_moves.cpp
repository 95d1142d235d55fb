#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"

using namespace troptrack;

namespace {

std::vector<TrackGraph> fixture_graphs() {
  std::vector<TrackGraph> out;
  for (const Triangulation& tri : fixtures::all_fixtures())
    for (const CompleteTrack& ct : enumerate_complete_tracks(tri))
      out.push_back(derive_graph(tri, ct.track));
  return out;
}

int col_of(const ElementaryMove& m, const std::string& name) {
  for (std::size_t j = 0; j < m.carried.size(); ++j)
    if (m.carried[j] == name) return static_cast<int>(j);
  return -1;
}

// The moved branch is the one whose name does not survive the move.
int moved_row(const ElementaryMove& m) {
  for (std::size_t i = 0; i < m.carrier.size(); ++i)
    if (col_of(m, m.carrier[i]) < 0) return static_cast<int>(i);
  return -1;
}

void check_identity_elsewhere(const ElementaryMove& m) {
  int mr = moved_row(m);
  REQUIRE(mr >= 0);
  for (std::size_t i = 0; i < m.carrier.size(); ++i) {
    if (static_cast<int>(i) == mr) continue;
    int j = col_of(m, m.carrier[i]);
    REQUIRE(j >= 0);
    for (std::size_t jj = 0; jj < m.carried.size(); ++jj)
      CHECK(m.matrix[i][jj] == (static_cast<int>(jj) == j ? 1 : 0));
  }
}

std::set<int> row_support(const ElementaryMove& m, int row) {
  std::set<int> s;
  for (std::size_t j = 0; j < m.carried.size(); ++j) {
    CHECK(m.matrix[row][j] >= 0);
    CHECK(m.matrix[row][j] <= 1);
    if (m.matrix[row][j] == 1) s.insert(static_cast<int>(j));
  }
  return s;
}

// Cone of an abstract graph in its own branch coordinates.
ConeRays graph_cone(const TrackGraph& g) {
  std::vector<Vec> ineqs, eqs;
  for (const LinCon& c : graph_constraints(g))
    (c.eq ? eqs : ineqs).push_back(c.coeffs);
  return extreme_rays(ineqs, eqs, g.branch_count());
}

void check_cone_transport(const TrackGraph& pre, const MoveResult& res,
                          bool carrier_is_pre) {
  const TrackGraph& carried_g = carrier_is_pre ? res.graph : pre;
  const TrackGraph& carrier_g = carrier_is_pre ? pre : res.graph;
  ConeRays rays = graph_cone(carried_g);
  std::vector<LinCon> target = graph_constraints(carrier_g);
  auto check_point = [&](const Vec& v, bool lineality) {
    Vec img = mat_vec(res.move.matrix, v);
    for (const LinCon& c : target) {
      Rat lhs = 0;
      for (std::size_t i = 0; i < img.size(); ++i) lhs += c.coeffs[i] * img[i];
      if (c.eq || lineality)
        CHECK(lhs == 0);
      else
        CHECK(lhs >= 0);
    }
  };
  for (const Vec& r : rays.rays) check_point(r, false);
  for (const Vec& l : rays.lineality) check_point(l, true);
}

}  // namespace

TEST_CASE("split rows follow the port structure") {
  for (const TrackGraph& g : fixture_graphs()) {
    for (int b : applicable_branches(g, MoveKind::LeftSplit)) {
      auto es = g.ends(b);
      REQUIRE(es.size() == 2);
      REQUIRE(es[0].second == 0);  // lone at both switches
      REQUIRE(es[1].second == 0);
      int a1 = g.nodes[es[0].first].ports[1];
      int b1 = g.nodes[es[0].first].ports[2];
      int a2 = g.nodes[es[1].first].ports[1];
      int b2 = g.nodes[es[1].first].ports[2];

      MoveResult left = apply_move(g, MoveKind::LeftSplit, b);
      left.graph.validate();
      CHECK(left.move.kind == MoveKind::LeftSplit);
      check_identity_elsewhere(left.move);
      int lr = moved_row(left.move);
      std::set<int> expect_left = {col_of(left.move, g.names[a1]),
                                   col_of(left.move, g.names[b] + "'"),
                                   col_of(left.move, g.names[a2])};
      CHECK(row_support(left.move, lr) == expect_left);
      check_cone_transport(g, left, true);

      MoveResult right = apply_move(g, MoveKind::RightSplit, b);
      check_identity_elsewhere(right.move);
      std::set<int> expect_right = {col_of(right.move, g.names[b1]),
                                    col_of(right.move, g.names[b] + "'"),
                                    col_of(right.move, g.names[b2])};
      CHECK(row_support(right.move, moved_row(right.move)) == expect_right);
      check_cone_transport(g, right, true);

      MoveResult central = apply_move(g, MoveKind::CentralSplit, b);
      check_identity_elsewhere(central.move);
      CHECK(central.graph.branch_count() + 1 == g.branch_count());
      std::set<int> got = row_support(central.move, moved_row(central.move));
      std::set<int> end1 = {col_of(central.move, g.names[a1]),
                            col_of(central.move, g.names[b1])};
      std::set<int> end2 = {col_of(central.move, g.names[a2]),
                            col_of(central.move, g.names[b2])};
      CHECK((got == end1 || got == end2));
      check_cone_transport(g, central, true);
    }
  }
}

TEST_CASE("shift rows sum the two branches at the lone switch") {
  int exercised = 0;
  for (const TrackGraph& g : fixture_graphs()) {
    // Pristine freeway subtracks have no shiftable branch; splits create them.
    std::vector<TrackGraph> stage = {g};
    for (int b : applicable_branches(g, MoveKind::LeftSplit)) {
      stage.push_back(apply_move(g, MoveKind::LeftSplit, b).graph);
      stage.push_back(apply_move(g, MoveKind::RightSplit, b).graph);
    }
    for (const TrackGraph& h : stage) {
      for (int b : applicable_branches(h, MoveKind::Shift)) {
        ++exercised;
        auto es = h.ends(b);
        REQUIRE(es.size() == 2);
        int lone_end = -1;
        for (const auto& [node, slot] : es)
          if (slot == 0 && h.nodes[node].is_switch) lone_end = node;
        REQUIRE(lone_end >= 0);
        MoveResult res = apply_move(h, MoveKind::Shift, b);
        res.graph.validate();
        check_identity_elsewhere(res.move);
        std::set<int> expect = {
            col_of(res.move, h.names[h.nodes[lone_end].ports[1]]),
            col_of(res.move, h.names[h.nodes[lone_end].ports[2]])};
        CHECK(row_support(res.move, moved_row(res.move)) == expect);
        CHECK(expect.count(-1) == 0);
        check_cone_transport(h, res, true);

        // Shifting the renamed branch back is the inverse on measures.
        int renamed = -1;
        for (std::size_t i = 0; i < res.graph.names.size(); ++i)
          if (res.graph.names[i] == h.names[b] + "'") renamed = static_cast<int>(i);
        REQUIRE(renamed >= 0);
        MoveResult back = apply_move(res.graph, MoveKind::Shift, renamed);
        Mat prod = mat_mul(res.move.matrix, back.move.matrix);
        CHECK(mat_eq(prod, mat_identity(h.branch_count())));
      }
    }
  }
  CHECK(exercised > 0);
}

TEST_CASE("folds invert splits") {
  for (const TrackGraph& g : fixture_graphs()) {
    for (int b : applicable_branches(g, MoveKind::LeftSplit)) {
      MoveResult split = apply_move(g, MoveKind::LeftSplit, b);
      int renamed = -1;
      for (std::size_t i = 0; i < split.graph.names.size(); ++i)
        if (split.graph.names[i] == g.names[b] + "'") renamed = static_cast<int>(i);
      REQUIRE(renamed >= 0);
      REQUIRE(fold_applicable(split.graph, renamed));
      MoveResult fold = apply_move(split.graph, MoveKind::Fold, renamed);
      fold.graph.validate();
      CHECK(fold.graph.branch_count() == g.branch_count());
      check_identity_elsewhere(fold.move);
      // Fold rows live on the folded graph: same carrying relation as the split.
      CHECK(fold.move.matrix == split.move.matrix);
      check_cone_transport(split.graph, fold, false);
    }
  }
}

TEST_CASE("inapplicable moves are rejected") {
  Triangulation torus = fixtures::torus();
  TrackGraph g = derive_graph(torus, fixtures::torus_track(torus, 0));
  std::vector<int> split_ok = applicable_branches(g, MoveKind::LeftSplit);
  CHECK(split_ok.size() == 1);
  for (int b = 0; b < static_cast<int>(g.branch_count()); ++b) {
    if (std::count(split_ok.begin(), split_ok.end(), b)) continue;
    try {
      apply_move(g, MoveKind::LeftSplit, b);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code == "MoveNotApplicable");
    }
  }
  CHECK(applicable_branches(g, MoveKind::Shift).empty());
}
