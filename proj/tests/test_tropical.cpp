#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "troptrack/tropical.hpp"

using namespace troptrack;
using fixtures::vec;

namespace {

Vec random_vec(std::mt19937& rng, std::size_t n) {
  std::uniform_int_distribution<int> d(-9, 9);
  Vec v(n);
  for (auto& e : v) e = Rat(d(rng));
  return v;
}

}  // namespace

TEST_CASE("matrix mutation on the torus negates the matrix") {
  IMat b = exchange_matrix(fixtures::torus());
  for (std::size_t k = 0; k < 3; ++k) {
    IMat m = mutate_exchange(b, k);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) CHECK(m[i][j] == -b[i][j]);
    CHECK(mutate_exchange(m, k) == b);
  }
}

TEST_CASE("matrix mutation is an involution and keeps skew-symmetry") {
  std::mt19937 rng(3);
  for (const Triangulation& tri : fixtures::all_fixtures()) {
    IMat b = exchange_matrix(tri);
    for (std::size_t k = 0; k < b.size(); ++k) {
      IMat m = mutate_exchange(b, k);
      CHECK(mutate_exchange(m, k) == b);
      for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) CHECK(m[i][j] == -m[j][i]);
    }
    (void)rng;
  }
}

TEST_CASE("tropical a-mutation on pinned points") {
  IMat b = exchange_matrix(fixtures::torus());
  Vec a = vec({1, 0, 0});
  Vec m = tropical_a_mutate(a, b, 0);
  CHECK(m == vec({-1, 0, 0}));
  // a'_k = min(sum of positive-row entries, of negative ones) - a_k.
  Vec a2 = vec({2, 3, -1});
  Vec m2 = tropical_a_mutate(a2, b, 0);
  CHECK(m2[0] == std::min(Rat(2) * 3, Rat(2) * -1) - 2);
  CHECK(m2[1] == 3);
  CHECK(m2[2] == -1);
}

TEST_CASE("tropical mutations are involutions") {
  std::mt19937 rng(5);
  for (const Triangulation& tri : fixtures::all_fixtures()) {
    IMat b = exchange_matrix(tri);
    for (int trial = 0; trial < 25; ++trial) {
      Vec a = random_vec(rng, b.size());
      for (std::size_t k = 0; k < b.size(); ++k) {
        IMat bk = mutate_exchange(b, k);
        CHECK(tropical_a_mutate(tropical_a_mutate(a, b, k), bk, k) == a);
        CHECK(tropical_x_mutate(tropical_x_mutate(a, b, k), bk, k) == a);
      }
    }
  }
}

TEST_CASE("ensemble map on the torus") {
  IMat b = exchange_matrix(fixtures::torus());
  CHECK(ensemble_map(vec({1, 0, 0}), b) == vec({0, -2, 2}));
  CHECK(ensemble_map(vec({0, 0, 0}), b) == vec({0, 0, 0}));
}

TEST_CASE("ensemble map intertwines a- and x-mutations") {
  std::mt19937 rng(9);
  for (const Triangulation& tri : fixtures::all_fixtures()) {
    IMat b = exchange_matrix(tri);
    for (int trial = 0; trial < 25; ++trial) {
      Vec a = random_vec(rng, b.size());
      for (std::size_t k = 0; k < b.size(); ++k) {
        Vec lhs = ensemble_map(tropical_a_mutate(a, b, k), mutate_exchange(b, k));
        Vec rhs = tropical_x_mutate(ensemble_map(a, b), b, k);
        CHECK(lhs == rhs);
      }
    }
  }
}

TEST_CASE("tropical maps commute with positive scaling") {
  std::mt19937 rng(21);
  IMat b = exchange_matrix(fixtures::sphere4());
  for (int trial = 0; trial < 20; ++trial) {
    Vec a = random_vec(rng, 6);
    Rat lambda(3, 2);
    for (std::size_t k = 0; k < 6; ++k) {
      Vec scaled = a;
      for (auto& e : scaled) e *= lambda;
      Vec m = tropical_a_mutate(a, b, k);
      for (auto& e : m) e *= lambda;
      CHECK(tropical_a_mutate(scaled, b, k) == m);
    }
  }
}

TEST_CASE("arc permutations relabel coordinates") {
  Triangulation torus = fixtures::torus();
  std::vector<std::size_t> sigma = perm_indices(torus.arcs, {2, 3, 1});
  CHECK(sigma == std::vector<std::size_t>{1, 2, 0});
  Vec x = vec({10, 20, 30});
  Vec px = permute_vec(x, sigma);
  // x'_{sigma(i)} = x_i.
  CHECK(px == vec({30, 10, 20}));
  IMat b = exchange_matrix(torus);
  IMat pb = permute_mat(b, sigma);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(pb[sigma[i]][sigma[j]] == b[i][j]);
}

TEST_CASE("x-trajectory of the LR loop at the pinned point") {
  Triangulation torus = fixtures::torus();
  IMat b = exchange_matrix(torus);
  Vec w = vec({1, 1, -1});

  std::vector<int> s1 = sign_of_path(fixtures::lr_word(), w, b, torus.arcs);
  CHECK(s1 == std::vector<int>{1, 1});

  XState st{w, b};
  for (const LoopStep& step : fixtures::lr_word())
    st = apply_step_x(st, step, torus.arcs);
  CHECK(st.x == vec({3, -1, -1}));
  CHECK(st.b == b);

  std::vector<int> s2 = sign_of_path(fixtures::lr_word(), st.x, st.b, torus.arcs);
  CHECK(s2 == std::vector<int>{1, -1});
  for (const LoopStep& step : fixtures::lr_word())
    st = apply_step_x(st, step, torus.arcs);
  CHECK(st.x == vec({5, -5, 1}));
}

TEST_CASE("a-trajectory stays consistent with the x-trajectory") {
  Triangulation torus = fixtures::torus();
  IMat b = exchange_matrix(torus);
  std::mt19937 rng(33);
  for (int trial = 0; trial < 10; ++trial) {
    Vec a = random_vec(rng, 3);
    AState as{a, b};
    XState xs{ensemble_map(a, b), b};
    for (const LoopStep& step : fixtures::lr_word()) {
      as = apply_step_a(as, step, torus.arcs);
      xs = apply_step_x(xs, step, torus.arcs);
      CHECK(ensemble_map(as.a, as.b) == xs.x);
      CHECK(as.b == xs.b);
    }
  }
}
