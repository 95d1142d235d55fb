#include "troptrack/lp.hpp"

#include <cassert>

namespace troptrack {

namespace {

// Dense two-phase simplex on the standard form
//   maximize c.v  s.t.  T v = b, v >= 0
// built from free variables (split into +/- parts) plus one surplus variable
// per inequality. Bland's rule throughout, so no cycling.
struct Tableau {
  std::size_t rows, cols;          // cols excludes the rhs column
  std::vector<Vec> t;              // rows x (cols + 1), last entry = rhs
  std::vector<std::size_t> basis;  // basic column per row

  void pivot(std::size_t r, std::size_t c) {
    Rat p = t[r][c];
    for (auto& x : t[r]) x /= p;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || t[i][c] == 0) continue;
      Rat f = t[i][c];
      for (std::size_t j = 0; j <= cols; ++j) t[i][j] -= f * t[r][j];
    }
    basis[r] = c;
  }

  // Maximizes obj (length cols) over the current feasible basis.
  // Returns false on unboundedness; on true, obj value is in objval.
  bool run(const Vec& obj, Rat& objval, Vec& reduced) {
    // reduced costs z_j - c_j relative to the basis
    reduced.assign(cols + 1, 0);
    for (std::size_t j = 0; j <= cols; ++j) {
      Rat z = 0;
      for (std::size_t i = 0; i < rows; ++i) z += obj[basis[i]] * t[i][j];
      reduced[j] = z - (j < cols ? obj[j] : Rat(0));
    }
    for (;;) {
      std::size_t enter = cols;
      for (std::size_t j = 0; j < cols; ++j)
        if (reduced[j] < 0) { enter = j; break; }
      if (enter == cols) break;
      std::size_t leave = rows;
      Rat best = 0;
      for (std::size_t i = 0; i < rows; ++i) {
        if (t[i][enter] <= 0) continue;
        Rat ratio = t[i][cols] / t[i][enter];
        if (leave == rows || ratio < best ||
            (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == rows) return false;
      Rat f = reduced[enter];
      pivot(leave, enter);
      for (std::size_t j = 0; j <= cols; ++j) reduced[j] -= f * t[leave][j];
      reduced[enter] = 0;
    }
    objval = reduced[cols];
    return true;
  }
};

struct Standardized {
  Tableau tab;
  std::size_t nfree;   // original free variable count
  std::size_t nslack;  // surplus variables
  bool infeasible = false;

  Vec recover() const {
    Vec x(nfree, 0);
    for (std::size_t i = 0; i < tab.rows; ++i) {
      std::size_t c = tab.basis[i];
      if (c < 2 * nfree) {
        if (c % 2 == 0)
          x[c / 2] += tab.t[i][tab.cols];
        else
          x[c / 2] -= tab.t[i][tab.cols];
      }
    }
    return x;
  }
};

// Phase 1: build a feasible basis or report infeasibility.
Standardized standardize(const std::vector<LinCon>& cons, std::size_t n) {
  Standardized s;
  s.nfree = n;
  s.nslack = 0;
  for (const auto& c : cons)
    if (!c.eq) ++s.nslack;

  std::size_t m = cons.size();
  std::size_t realcols = 2 * n + s.nslack;
  std::size_t cols = realcols + m;  // artificials at the end
  Tableau& tb = s.tab;
  tb.rows = m;
  tb.cols = cols;
  tb.t.assign(m, Vec(cols + 1, 0));
  tb.basis.assign(m, 0);

  std::size_t slack = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& c = cons[i];
    assert(c.coeffs.size() == n);
    Vec& row = tb.t[i];
    for (std::size_t j = 0; j < n; ++j) {
      row[2 * j] = c.coeffs[j];
      row[2 * j + 1] = -c.coeffs[j];
    }
    if (!c.eq) row[2 * n + slack++] = -1;
    row[cols] = c.rhs;
    if (row[cols] < 0)
      for (auto& x : row) x = -x;
    row[realcols + i] = 1;
    tb.basis[i] = realcols + i;
  }

  Vec phase1(cols, 0);
  for (std::size_t i = 0; i < m; ++i) phase1[realcols + i] = -1;
  Rat val;
  Vec reduced;
  bool ok = tb.run(phase1, val, reduced);
  assert(ok);
  (void)ok;
  if (val != 0) {
    s.infeasible = true;
    return s;
  }
  // Pivot artificials out of the basis; rows that cannot pivot are redundant.
  for (std::size_t i = 0; i < tb.rows;) {
    if (tb.basis[i] < realcols) { ++i; continue; }
    std::size_t c = realcols;
    for (std::size_t j = 0; j < realcols; ++j)
      if (tb.t[i][j] != 0) { c = j; break; }
    if (c < realcols) {
      tb.pivot(i, c);
      ++i;
    } else {
      tb.t.erase(tb.t.begin() + i);
      tb.basis.erase(tb.basis.begin() + i);
      --tb.rows;
    }
  }
  // Drop artificial columns.
  for (auto& row : tb.t) {
    row.erase(row.begin() + realcols, row.begin() + cols);
    row.shrink_to_fit();
  }
  tb.cols = realcols;
  return s;
}

}  // namespace

LPResult lp_maximize(const Vec& obj, const std::vector<LinCon>& cons, std::size_t n) {
  assert(obj.size() == n);
  Standardized s = standardize(cons, n);
  if (s.infeasible) return {LPStatus::Infeasible, 0, {}};
  Vec full(s.tab.cols, 0);
  for (std::size_t j = 0; j < n; ++j) {
    full[2 * j] = obj[j];
    full[2 * j + 1] = -obj[j];
  }
  Rat val;
  Vec reduced;
  if (!s.tab.run(full, val, reduced)) return {LPStatus::Unbounded, 0, {}};
  return {LPStatus::Optimal, val, s.recover()};
}

bool lp_feasible(const std::vector<LinCon>& cons, std::size_t n) {
  return !standardize(cons, n).infeasible;
}

namespace {
// Appends variable t (index n), turning each inequality into coeffs.x - t >= rhs,
// and bounding t <= 1.
std::vector<LinCon> epsilon_program(const std::vector<LinCon>& cons, std::size_t n) {
  std::vector<LinCon> ext;
  ext.reserve(cons.size() + 1);
  for (const auto& c : cons) {
    LinCon e = c;
    e.coeffs.resize(n + 1, 0);
    if (!c.eq) e.coeffs[n] = -1;
    ext.push_back(std::move(e));
  }
  Vec cap(n + 1, 0);
  cap[n] = -1;
  ext.push_back(con_ge(std::move(cap), -1));  // -t >= -1
  return ext;
}
}  // namespace

bool lp_strictly_feasible(const std::vector<LinCon>& cons, std::size_t n) {
  auto ext = epsilon_program(cons, n);
  Vec obj(n + 1, 0);
  obj[n] = 1;
  auto r = lp_maximize(obj, ext, n + 1);
  return r.status == LPStatus::Optimal && r.value > 0;
}

std::optional<Vec> lp_interior_point(const std::vector<LinCon>& cons, std::size_t n) {
  auto ext = epsilon_program(cons, n);
  Vec obj(n + 1, 0);
  obj[n] = 1;
  auto r = lp_maximize(obj, ext, n + 1);
  if (r.status != LPStatus::Optimal || r.value <= 0) return std::nullopt;
  r.point.resize(n);
  return r.point;
}

int affine_dimension(const std::vector<LinCon>& cons, std::size_t n) {
  if (!lp_feasible(cons, n)) return -1;
  Mat eqs;
  for (std::size_t i = 0; i < cons.size(); ++i) {
    if (cons[i].eq) {
      eqs.push_back(cons[i].coeffs);
      continue;
    }
    // Cap the slack at rhs + 1 so the LP is bounded, then see if any
    // feasible point makes the inequality strict.
    auto capped = cons;
    LinCon cap = cons[i];
    for (auto& x : cap.coeffs) x = -x;
    cap.rhs = -(cons[i].rhs + 1);
    capped.push_back(std::move(cap));
    auto r = lp_maximize(cons[i].coeffs, capped, n);
    assert(r.status == LPStatus::Optimal);
    if (r.value == cons[i].rhs) eqs.push_back(cons[i].coeffs);
  }
  return int(n) - int(eqs.empty() ? 0 : mat_rank(eqs));
}

bool lp_implies(const std::vector<LinCon>& cons, std::size_t n, const Vec& f, const Rat& c) {
  // min f.x over the set; contained iff min >= c. Bound below by c - 1 to
  // keep the LP finite: if the bounded min dips under c, containment fails.
  auto capped = cons;
  capped.push_back(con_ge(f, c - 1));
  Vec negf(n);
  for (std::size_t j = 0; j < n; ++j) negf[j] = -f[j];
  auto r = lp_maximize(negf, capped, n);
  if (r.status == LPStatus::Infeasible) return true;  // empty set
  assert(r.status == LPStatus::Optimal);
  return -r.value >= c;
}

}  // namespace troptrack
