#include "troptrack/stability.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace troptrack {

namespace {

std::size_t flip_count(const FlipWord& word) {
  std::size_t f = 0;
  for (const auto& s : word) f += s.is_flip ? 1 : 0;
  return f;
}

// Linear piece of the X-mutation at k once the sign of x_k is frozen:
// x'_k = -x_k, x'_i = x_i + [sign * b_ik]+ x_k.
Mat frozen_step(const IMat& b, std::size_t k, int sign) {
  std::size_t n = b.size();
  Mat m = mat_identity(n);
  m[k][k] = -1;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == k) continue;
    int v = sign * b[i][k];
    m[i][k] = Rat(v > 0 ? v : 0);
  }
  return m;
}

Mat perm_matrix(const std::vector<std::size_t>& sigma) {
  Mat p = mat_zero(sigma.size(), sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) p[sigma[i]][i] = 1;
  return p;
}

Vec apply_mat(const Mat& m, const Vec& v) { return mat_vec(m, v); }

void require_loop(const Triangulation& tri, const FlipWord& word) {
  if (!is_loop(word, tri)) fail("LoopInvalid", "word does not return the exchange matrix");
}

FlipWord repeat_word(const FlipWord& word, int r) {
  FlipWord out;
  for (int i = 0; i < r; ++i) out.insert(out.end(), word.begin(), word.end());
  return out;
}

}  // namespace

std::vector<Vec> iterate_loop(const Triangulation& tri, const FlipWord& word,
                              const Vec& x, int n) {
  require_loop(tri, word);
  TT_CHECK(x.size() == tri.arcs.size(), "X-point dimension mismatch");
  std::vector<Vec> out{x};
  XState st{x, exchange_matrix(tri)};
  for (int i = 0; i < n; ++i) {
    for (const auto& step : word) st = apply_step_x(st, step, tri.arcs);
    out.push_back(st.x);
  }
  return out;
}

std::string verdict_name(StabilityVerdict v) {
  switch (v) {
    case StabilityVerdict::Stable: return "stable";
    case StabilityVerdict::UnstableEvidence: return "unstable-evidence";
    case StabilityVerdict::Inconclusive: return "inconclusive";
  }
  fail("Internal", "bad verdict");
}

SignStabilityReport detect_sign_stability(const Triangulation& tri,
                                          const FlipWord& word, int k_samples,
                                          const std::vector<Vec>& extra) {
  require_loop(tri, word);
  SignStabilityReport rep;
  std::size_t n = tri.arcs.size();
  if (flip_count(word) == 0) {
    rep.note = "no horizontal edges";
    return rep;
  }

  std::vector<Vec> samples;
  for (std::size_t i = 0; i < n; ++i) {
    Vec e(n, Rat(0));
    e[i] = 1;
    samples.push_back(e);
    e[i] = -1;
    samples.push_back(e);
  }
  for (const Vec& v : extra) {
    TT_CHECK(v.size() == n, "sample dimension mismatch");
    samples.push_back(v);
  }
  std::mt19937 gen(20240816);
  std::uniform_int_distribution<int> coord(-9, 9);
  while (static_cast<int>(samples.size()) < 2 * static_cast<int>(n) +
                                                static_cast<int>(extra.size()) +
                                                k_samples) {
    Vec v(n, Rat(0));
    bool zero = true;
    for (auto& c : v) {
      int r = coord(gen);
      c = r;
      zero = zero && r == 0;
    }
    if (!zero) samples.push_back(std::move(v));
  }
  rep.samples = static_cast<int>(samples.size());

  const int horizon = 64;
  IMat b0 = exchange_matrix(tri);
  std::vector<int> common;
  bool have_common = false;
  for (const Vec& s : samples) {
    XState st{s, b0};
    std::vector<std::vector<int>> history;
    for (int m = 0; m <= horizon; ++m) {
      history.push_back(sign_of_path(word, st.x, st.b, tri.arcs));
      for (const auto& step : word) st = apply_step_x(st, step, tri.arcs);
    }
    int last_change = 0;
    for (int m = 1; m <= horizon; ++m)
      if (history[m] != history[m - 1]) last_change = m;
    if (last_change > horizon - 4) {
      rep.verdict = StabilityVerdict::UnstableEvidence;
      rep.note = "sign sequence keeps changing along a sampled orbit";
      return rep;
    }
    const std::vector<int>& eventual = history[horizon];
    for (int e : eventual) {
      if (e == 0) {
        rep.note = "orbit hit a zero sign";
        return rep;
      }
    }
    if (!have_common) {
      common = eventual;
      have_common = true;
    } else if (common != eventual) {
      rep.verdict = StabilityVerdict::UnstableEvidence;
      rep.note = "two orbits stabilize to different signs";
      return rep;
    }
    rep.n0_per_sample.push_back(last_change);
  }

  rep.stable_sign = common;
  rep.n0 = *std::max_element(rep.n0_per_sample.begin(), rep.n0_per_sample.end());

  // C^eps: the cone of points whose single traversal shows the sign eps,
  // carved out by the frozen-sign linear prefixes.
  Mat acc = mat_identity(n);
  IMat b = b0;
  std::size_t si = 0;
  for (const auto& step : word) {
    if (step.is_flip) {
      std::size_t k = tri.arc_index(step.flip_arc);
      Vec row(n, Rat(0));
      for (std::size_t j = 0; j < n; ++j) row[j] = Rat(common[si]) * acc[k][j];
      rep.cone.push_back(con_ge(std::move(row), Rat(0)));
      acc = mat_mul(frozen_step(b, k, common[si]), acc);
      b = mutate_exchange(b, k);
      ++si;
    } else {
      auto sigma = perm_indices(tri.arcs, step.perm);
      acc = mat_mul(perm_matrix(sigma), acc);
      b = permute_mat(b, sigma);
    }
  }

  if (!lp_strictly_feasible(rep.cone, n)) {
    rep.note = "sign cone is not full-dimensional";
    return rep;
  }
  for (const auto& c : rep.cone) {
    Vec pulled(n, Rat(0));
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) pulled[j] += c.coeffs[i] * acc[i][j];
    if (!lp_implies(rep.cone, n, pulled, Rat(0))) {
      rep.note = "sign cone is not invariant under the frozen map";
      return rep;
    }
  }
  rep.verdict = StabilityVerdict::Stable;
  rep.note = "cone invariant; all sampled orbits stabilize";
  return rep;
}

Mat presentation_matrix(const Triangulation& tri, const FlipWord& word,
                        const std::vector<int>& signs) {
  std::size_t n = tri.arcs.size();
  TT_CHECK(signs.size() == flip_count(word), "one sign per flip step");
  Mat e = mat_identity(n);
  IMat b = exchange_matrix(tri);
  std::size_t si = 0;
  for (const auto& step : word) {
    if (step.is_flip) {
      int sg = signs[si++];
      TT_CHECK(sg == 1 || sg == -1, "signs must be strict");
      std::size_t k = tri.arc_index(step.flip_arc);
      e = mat_mul(frozen_step(b, k, sg), e);
      b = mutate_exchange(b, k);
    } else {
      auto sigma = perm_indices(tri.arcs, step.perm);
      e = mat_mul(perm_matrix(sigma), e);
      b = permute_mat(b, sigma);
    }
  }
  return e;
}

EntropyResult entropy(const Triangulation& tri, const FlipWord& word,
                      int declared_power, int max_power) {
  require_loop(tri, word);
  auto analyze = [&](const FlipWord& w, int r) -> std::optional<EntropyResult> {
    SignStabilityReport rep = detect_sign_stability(tri, w);
    if (rep.verdict != StabilityVerdict::Stable) return std::nullopt;
    EntropyResult out;
    out.power = r;
    out.signs = rep.stable_sign;
    Mat e = presentation_matrix(tri, w, rep.stable_sign);
    out.rho = spectral_radius(e);
    out.cp = charpoly(e);
    out.value = std::log(out.rho.value) / r;
    return out;
  };
  if (declared_power >= 1) {
    auto out = analyze(word, declared_power);
    if (out) return *out;
    fail("NotStable", "declared power is not sign-stable");
  }
  for (int r = 1; r <= max_power; ++r) {
    auto out = analyze(repeat_word(word, r), r);
    if (out) return *out;
  }
  fail("NotStable", "no repeat count up to " + std::to_string(max_power) +
                        " certifies sign stability");
}

BoundedStabilityResult check_bounded_stability(const Triangulation& tri,
                                               const FlipWord& word, int n_max) {
  SignStabilityReport rep = detect_sign_stability(tri, word);
  if (rep.stable_sign.empty())
    fail("NotStable", "no common sample sign to bound");
  std::size_t n = tri.arcs.size();
  Mat e = presentation_matrix(tri, word, rep.stable_sign);

  BoundedStabilityResult out;
  out.cone = rep.cone;
  if (n_max <= 0) {
    out.unknown = true;
    return out;
  }
  Mat power = e;
  for (int step = 1; step <= n_max; ++step) {
    bool grew = false;
    for (const auto& c : rep.cone) {
      Vec pulled(n, Rat(0));
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) pulled[j] += c.coeffs[i] * power[i][j];
      if (!lp_implies(out.cone, n, pulled, Rat(0))) {
        out.cone.push_back(con_ge(std::move(pulled), Rat(0)));
        grew = true;
      }
    }
    out.steps = step;
    if (!grew) {
      out.stationary = true;
      return out;
    }
    power = mat_mul(e, power);
  }
  out.unknown = true;
  return out;
}

namespace {

// Rotation r with rotate(sides, r)[j] = sides[(j + r) % 3] matching base
// exactly, including gluing flags; -1 if none.
int rotation_matching(const TriangleSides& sides, const TriangleSides& base) {
  for (int r = 0; r < 3; ++r) {
    bool ok = true;
    for (int j = 0; j < 3; ++j) ok = ok && sides[(j + r) % 3] == base[j];
    if (ok) return r;
  }
  return -1;
}

}  // namespace

std::optional<InvariantTrack> find_invariant_track(const Triangulation& tri,
                                                   const FlipWord& word) {
  require_loop(tri, word);
  std::optional<EntropyResult> er;
  try {
    er = entropy(tri, word);
  } catch (const Error&) {
    er.reset();
  }
  SignStabilityReport rep = detect_sign_stability(tri, word);

  for (const CompleteTrack& comp : enumerate_complete_tracks(tri)) {
    std::vector<CarryResult> results;
    try {
      results = carrying_matrix(tri, comp.track, word);
    } catch (const Error&) {
      continue;
    }
    for (const CarryResult& res : results) {
      std::vector<int> mt = match_triangles(res.final_tri, tri);
      if (mt.empty()) continue;

      std::vector<int> rot(tri.tris.size(), -1);
      bool ok = true;
      for (std::size_t ft = 0; ft < tri.tris.size() && ok; ++ft) {
        rot[ft] = rotation_matching(res.final_tri.tris[ft], tri.tris[mt[ft]]);
        ok = rot[ft] >= 0;
      }
      if (!ok) continue;
      for (std::size_t ft = 0; ft < tri.tris.size() && ok; ++ft) {
        const TriangleConfig& fc = res.final_track.config[ft];
        const TriangleConfig& bc = comp.track.config[mt[ft]];
        if (fc.type != bc.type) {
          ok = false;
          break;
        }
        std::vector<int> mapped;
        for (int c : fc.absent) mapped.push_back((c - rot[ft] + 3) % 3);
        std::sort(mapped.begin(), mapped.end());
        ok = mapped == bc.absent;
      }
      if (!ok) continue;

      BranchTable tb_f, tb_b;
      derive_graph(res.final_tri, res.final_track, &tb_f);
      derive_graph(tri, comp.track, &tb_b);
      if (tb_f.names.size() != tb_b.names.size()) continue;
      Mat phi = mat_zero(tb_f.names.size(), tb_b.names.size());
      bool mapped_ok = true;
      for (std::size_t ai = 0; ai < tri.arcs.size(); ++ai) {
        int bf = tb_f.long_of[ai], bb = tb_b.long_of[ai];
        if ((bf < 0) != (bb < 0)) {
          mapped_ok = false;
          break;
        }
        if (bf >= 0) phi[bf][bb] = 1;
      }
      for (std::size_t ft = 0; mapped_ok && ft < tri.tris.size(); ++ft) {
        for (int c = 0; c < 3; ++c) {
          int bf = tb_f.short_of[ft][c];
          int bb = tb_b.short_of[mt[ft]][(c - rot[ft] + 3) % 3];
          if ((bf < 0) != (bb < 0)) {
            mapped_ok = false;
            break;
          }
          if (bf >= 0) phi[bf][bb] = 1;
        }
      }
      if (!mapped_ok) continue;

      InvariantTrack inv;
      inv.track = comp.track;
      inv.matrix = mat_mul(res.matrix, phi);
      inv.restriction = restrict_to_span(tri, comp.track, inv.matrix);
      inv.rho = spectral_radius(inv.restriction);
      inv.cp = charpoly(inv.restriction);
      if (er) {
        if (er->power == 1) {
          inv.rho_matches_presentation = dominant_roots_equal(inv.cp, er->cp);
        } else {
          inv.rho_matches_presentation =
              std::abs(std::log(inv.rho.value) - er->value) < 1e-9;
        }
      }
      if (!rep.cone.empty() && !rep.stable_sign.empty()) {
        inv.probe_ran = true;
        inv.probe_passed = true;
        MeasureCone mc = cone(tri, comp.track);
        ChartMap cm = chart_map(tri, comp.track);
        IMat b0 = exchange_matrix(tri);
        std::size_t h = tri.surface.punctures.size();
        auto test_gen = [&](const Vec& nu) {
          Vec chart;
          for (std::size_t bi : mc.btau) chart.push_back(nu[bi]);
          for (std::size_t i = 0; i < h; ++i) chart.push_back(Rat(0));
          Vec a = apply_mat(cm.from_chart, chart);
          Vec x = ensemble_map(a, b0);
          for (const auto& c : rep.cone) {
            Rat v(0);
            for (std::size_t j = 0; j < x.size(); ++j) v += c.coeffs[j] * x[j];
            if (v < 0) return false;
          }
          return true;
        };
        for (const Vec& ray : mc.rays.rays)
          inv.probe_passed = inv.probe_passed && test_gen(ray);
        for (Vec lin : mc.rays.lineality) {
          inv.probe_passed = inv.probe_passed && test_gen(lin);
          for (auto& c : lin) c = -c;
          inv.probe_passed = inv.probe_passed && test_gen(lin);
        }
      }
      return inv;
    }
  }
  return std::nullopt;
}

}  // namespace troptrack
