#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "troptrack/rational.hpp"
#include "troptrack/surface.hpp"

namespace troptrack {

enum class PKind { A, X };

struct TropicalPoint {
  std::string chart;
  PKind kind = PKind::A;
  Vec coords;  // indexed by position in the chart's arc list
};

// Matrix mutation in direction k; involutive, preserves skew-symmetry.
IMat mutate_exchange(const IMat& b, std::size_t k);

// a'_k = min{ sum_j [b_kj]+ a_j , sum_j [-b_kj]+ a_j } - a_k.
Vec tropical_a_mutate(const Vec& a, const IMat& b, std::size_t k);

// x'_k = -x_k, x'_i = x_i + [sgn(x_k) b_ik]+ x_k; computed both as the signed
// form and the min-form x_i - b_ik min{0, -sgn(b_ik) x_k}, which must agree.
Vec tropical_x_mutate(const Vec& x, const IMat& b, std::size_t k);

// x_i = sum_j b_ij a_j, the tropical ensemble map in the same chart.
Vec ensemble_map(const Vec& a, const IMat& b);

// sigma as index map: entry i is the index that arcs[i] is sent to.
std::vector<std::size_t> perm_indices(const std::vector<ArcId>& arcs,
                                      const std::vector<ArcId>& perm);

// v'_{sigma(i)} = v_i.
Vec permute_vec(const Vec& v, const std::vector<std::size_t>& sigma);
IMat permute_mat(const IMat& b, const std::vector<std::size_t>& sigma);

// State threaded along a flip word at the matrix level.
struct XState {
  Vec x;
  IMat b;
};

// Applies one word step to an X-point (mutation at the arc's index, or the
// coordinate permutation).
XState apply_step_x(const XState& s, const LoopStep& step,
                    const std::vector<ArcId>& arcs);

struct AState {
  Vec a;
  IMat b;
};

AState apply_step_a(const AState& s, const LoopStep& step,
                    const std::vector<ArcId>& arcs);

// Sign of the active coordinate before each mutation step; permutation steps
// contribute nothing. Entries in {-1, 0, +1}.
std::vector<int> sign_of_path(const FlipWord& word, const Vec& x, const IMat& b,
                              const std::vector<ArcId>& arcs);

}  // namespace troptrack
