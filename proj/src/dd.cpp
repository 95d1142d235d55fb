#include "troptrack/dd.hpp"

#include <algorithm>
#include <cassert>
#include <cstdint>

namespace troptrack {

namespace {

Rat dot(const Vec& a, const Vec& b) {
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

using Bits = std::vector<std::uint64_t>;

Bits bits_make(std::size_t m) { return Bits((m + 63) / 64, 0); }
void bits_set(Bits& b, std::size_t i) { b[i / 64] |= (std::uint64_t(1) << (i % 64)); }
bool bits_subset(const Bits& a, const Bits& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] & ~b[i]) return false;
  return true;
}
Bits bits_and(const Bits& a, const Bits& b) {
  Bits c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] & b[i];
  return c;
}

// Extreme rays of the pointed cone {z : rows.z >= 0}; rows spans full rank.
std::vector<Vec> dd_pointed(const std::vector<Vec>& rows, std::size_t d) {
  if (d == 0) return {};
  // Initial simplicial subcone from d independent rows.
  std::vector<std::size_t> base;
  Mat sel;
  for (std::size_t i = 0; i < rows.size() && base.size() < d; ++i) {
    sel.push_back(rows[i]);
    if (mat_rank(sel) == base.size() + 1)
      base.push_back(i);
    else
      sel.pop_back();
  }
  assert(base.size() == d);
  Mat dinv = *mat_inverse(sel);
  struct Ray {
    Vec v;
    Bits tight;
  };
  std::vector<Ray> rays;
  std::size_t m = rows.size();
  std::vector<bool> processed(m, false);
  for (auto i : base) processed[i] = true;
  for (std::size_t j = 0; j < d; ++j) {
    Ray r;
    r.v.resize(d);
    for (std::size_t i = 0; i < d; ++i) r.v[i] = dinv[i][j];
    r.tight = bits_make(m);
    for (std::size_t i = 0; i < m; ++i)
      if (processed[i] && dot(rows[i], r.v) == 0) bits_set(r.tight, i);
    rays.push_back(std::move(r));
  }
  for (std::size_t a = 0; a < m; ++a) {
    if (processed[a]) continue;
    processed[a] = true;
    std::vector<Rat> val(rays.size());
    bool any_neg = false;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      val[i] = dot(rows[a], rays[i].v);
      if (val[i] < 0) any_neg = true;
    }
    if (!any_neg) {
      for (std::size_t i = 0; i < rays.size(); ++i)
        if (val[i] == 0) bits_set(rays[i].tight, a);
      continue;
    }
    std::vector<Ray> next;
    for (std::size_t i = 0; i < rays.size(); ++i)
      if (val[i] >= 0) {
        Ray r = rays[i];
        if (val[i] == 0) bits_set(r.tight, a);
        next.push_back(std::move(r));
      }
    for (std::size_t p = 0; p < rays.size(); ++p) {
      if (val[p] <= 0) continue;
      for (std::size_t q = 0; q < rays.size(); ++q) {
        if (val[q] >= 0) continue;
        Bits common = bits_and(rays[p].tight, rays[q].tight);
        bool adjacent = true;
        for (std::size_t r3 = 0; r3 < rays.size(); ++r3) {
          if (r3 == p || r3 == q) continue;
          if (bits_subset(common, rays[r3].tight)) {
            adjacent = false;
            break;
          }
        }
        if (!adjacent) continue;
        Ray nr;
        nr.v.resize(d);
        for (std::size_t i = 0; i < d; ++i)
          nr.v[i] = val[p] * rays[q].v[i] - val[q] * rays[p].v[i];
        nr.v = primitive(nr.v);
        nr.tight = bits_make(m);
        for (std::size_t i = 0; i < m; ++i)
          if (processed[i] && dot(rows[i], nr.v) == 0) bits_set(nr.tight, i);
        next.push_back(std::move(nr));
      }
    }
    rays = std::move(next);
  }
  std::vector<Vec> out;
  out.reserve(rays.size());
  for (auto& r : rays) out.push_back(primitive(r.v));
  return out;
}

// Deterministic basis of a subspace: reduced row echelon rows, primitive.
std::vector<Vec> canonical_basis(std::vector<Vec> gens) {
  if (gens.empty()) return gens;
  Mat m = std::move(gens);
  std::size_t rows = m.size(), cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[r], m[p]);
    Rat lead = m[r][c];
    for (auto& x : m[r]) x /= lead;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rat f = m[i][c];
      for (std::size_t j = 0; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  m.resize(r);
  for (auto& row : m) row = primitive(row);
  return m;
}

}  // namespace

ConeRays extreme_rays(const std::vector<Vec>& ineqs, const std::vector<Vec>& eqs,
                      std::size_t n) {
  // Parameterize the equality subspace: x = K y.
  std::vector<Vec> kbasis;
  if (eqs.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      Vec e(n, 0);
      e[i] = 1;
      kbasis.push_back(std::move(e));
    }
  } else {
    kbasis = kernel_basis(eqs);
  }
  std::size_t d = kbasis.size();
  ConeRays out;
  if (d == 0) return out;

  std::vector<Vec> m;  // inequalities in y coordinates
  for (const auto& q : ineqs) {
    Vec row(d);
    for (std::size_t k = 0; k < d; ++k) row[k] = dot(q, kbasis[k]);
    m.push_back(std::move(row));
  }

  // Lineality in y, then a coordinate complement spanned by non-pivot axes.
  std::vector<Vec> lin = m.empty() ? std::vector<Vec>() : kernel_basis(m);
  if (m.empty()) {
    for (std::size_t i = 0; i < d; ++i) {
      Vec e(d, 0);
      e[i] = 1;
      lin.push_back(std::move(e));
    }
  }
  std::vector<bool> pivot(d, false);
  {
    Mat lm = lin;
    std::size_t rows = lm.size(), r = 0;
    for (std::size_t c = 0; c < d && r < rows; ++c) {
      std::size_t p = r;
      while (p < rows && lm[p][c] == 0) ++p;
      if (p == rows) continue;
      std::swap(lm[r], lm[p]);
      Rat lead = lm[r][c];
      for (auto& x : lm[r]) x /= lead;
      for (std::size_t i = 0; i < rows; ++i) {
        if (i == r || lm[i][c] == 0) continue;
        Rat f = lm[i][c];
        for (std::size_t j = 0; j < d; ++j) lm[i][j] -= f * lm[r][j];
      }
      pivot[c] = true;
      ++r;
    }
  }
  std::vector<std::size_t> comp;
  for (std::size_t i = 0; i < d; ++i)
    if (!pivot[i]) comp.push_back(i);

  std::vector<Vec> mq;  // inequalities restricted to the complement
  for (const auto& row : m) {
    Vec r(comp.size());
    for (std::size_t k = 0; k < comp.size(); ++k) r[k] = row[comp[k]];
    mq.push_back(std::move(r));
  }
  auto zrays = dd_pointed(mq, comp.size());

  auto lift = [&](const Vec& y) {
    Vec x(n, 0);
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t i = 0; i < n; ++i) x[i] += y[k] * kbasis[k][i];
    return x;
  };
  for (const auto& l : lin) out.lineality.push_back(lift(l));
  out.lineality = canonical_basis(std::move(out.lineality));
  for (const auto& z : zrays) {
    Vec y(d, 0);
    for (std::size_t k = 0; k < comp.size(); ++k) y[comp[k]] = z[k];
    out.rays.push_back(primitive(lift(y)));
  }
  std::sort(out.rays.begin(), out.rays.end());
  return out;
}

}  // namespace troptrack
