#include "troptrack/tropical.hpp"

#include <algorithm>
#include <cassert>

namespace troptrack {

IMat mutate_exchange(const IMat& b, std::size_t k) {
  std::size_t n = b.size();
  IMat out(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == k || j == k)
        out[i][j] = -b[i][j];
      else
        out[i][j] = b[i][j] + (std::abs(b[i][k]) * b[k][j] + b[i][k] * std::abs(b[k][j])) / 2;
    }
  return out;
}

Vec tropical_a_mutate(const Vec& a, const IMat& b, std::size_t k) {
  Rat pos = 0, neg = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (b[k][j] > 0) pos += b[k][j] * a[j];
    if (b[k][j] < 0) neg += -b[k][j] * a[j];
  }
  Vec out = a;
  out[k] = std::min(pos, neg) - a[k];
  return out;
}

Vec tropical_x_mutate(const Vec& x, const IMat& b, std::size_t k) {
  int s = sgn(x[k]);
  Vec out = x;
  out[k] = -x[k];
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i == k) continue;
    int br = s * b[i][k];
    if (br > 0) out[i] = x[i] + br * x[k];
    // min-form cross-check: x_i - b_ik min{0, -sgn(b_ik) x_k}
    Rat alt = x[i];
    if (b[i][k] != 0) {
      Rat inner = -sgn(b[i][k]) * x[k];
      if (inner < 0) alt -= b[i][k] * inner;
    }
    TT_CHECK(alt == out[i], "x-mutation forms disagree");
  }
  return out;
}

Vec ensemble_map(const Vec& a, const IMat& b) {
  std::size_t n = a.size();
  Vec x(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (b[i][j] != 0) x[i] += b[i][j] * a[j];
  return x;
}

std::vector<std::size_t> perm_indices(const std::vector<ArcId>& arcs,
                                      const std::vector<ArcId>& perm) {
  auto index_of = [&](ArcId a) {
    for (std::size_t i = 0; i < arcs.size(); ++i)
      if (arcs[i] == a) return i;
    fail("LoopInvalid", "permutation uses unknown arc id " + std::to_string(a));
  };
  std::vector<std::size_t> sigma(arcs.size());
  std::vector<bool> hit(arcs.size(), false);
  if (perm.size() != arcs.size()) fail("LoopInvalid", "permutation length mismatch");
  for (std::size_t i = 0; i < perm.size(); ++i) {
    sigma[i] = index_of(perm[i]);
    if (hit[sigma[i]]) fail("LoopInvalid", "permutation repeats an arc id");
    hit[sigma[i]] = true;
  }
  return sigma;
}

Vec permute_vec(const Vec& v, const std::vector<std::size_t>& sigma) {
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[sigma[i]] = v[i];
  return out;
}

IMat permute_mat(const IMat& b, const std::vector<std::size_t>& sigma) {
  std::size_t n = b.size();
  IMat out(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[sigma[i]][sigma[j]] = b[i][j];
  return out;
}

XState apply_step_x(const XState& s, const LoopStep& step,
                    const std::vector<ArcId>& arcs) {
  if (step.is_flip) {
    std::size_t k = 0;
    while (k < arcs.size() && arcs[k] != step.flip_arc) ++k;
    if (k == arcs.size())
      fail("LoopInvalid", "flip at unknown arc id " + std::to_string(step.flip_arc));
    return {tropical_x_mutate(s.x, s.b, k), mutate_exchange(s.b, k)};
  }
  auto sigma = perm_indices(arcs, step.perm);
  return {permute_vec(s.x, sigma), permute_mat(s.b, sigma)};
}

AState apply_step_a(const AState& s, const LoopStep& step,
                    const std::vector<ArcId>& arcs) {
  if (step.is_flip) {
    std::size_t k = 0;
    while (k < arcs.size() && arcs[k] != step.flip_arc) ++k;
    if (k == arcs.size())
      fail("LoopInvalid", "flip at unknown arc id " + std::to_string(step.flip_arc));
    return {tropical_a_mutate(s.a, s.b, k), mutate_exchange(s.b, k)};
  }
  auto sigma = perm_indices(arcs, step.perm);
  return {permute_vec(s.a, sigma), permute_mat(s.b, sigma)};
}

std::vector<int> sign_of_path(const FlipWord& word, const Vec& x, const IMat& b,
                              const std::vector<ArcId>& arcs) {
  std::vector<int> signs;
  XState s{x, b};
  for (const auto& step : word) {
    if (step.is_flip) {
      std::size_t k = 0;
      while (k < arcs.size() && arcs[k] != step.flip_arc) ++k;
      if (k == arcs.size())
        fail("LoopInvalid", "flip at unknown arc id " + std::to_string(step.flip_arc));
      signs.push_back(sgn(s.x[k]));
    }
    s = apply_step_x(s, step, arcs);
  }
  return signs;
}

}  // namespace troptrack
