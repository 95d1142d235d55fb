#include "troptrack/potential.hpp"

#include <algorithm>
#include <map>

namespace troptrack {

Vec corner_form(const Triangulation& tri, Corner c) {
  Vec f(tri.arcs.size(), 0);
  const auto& t = tri.tris[c.tri];
  f[tri.arc_index(t[(c.pos + 2) % 3].arc)] += 1;
  f[tri.arc_index(t[c.pos].arc)] -= 1;
  f[tri.arc_index(t[(c.pos + 1) % 3].arc)] -= 1;
  return f;
}

Rat corner_value(const Triangulation& tri, Corner c, const Vec& a) {
  const auto& t = tri.tris[c.tri];
  return a[tri.arc_index(t[(c.pos + 2) % 3].arc)] -
         a[tri.arc_index(t[c.pos].arc)] - a[tri.arc_index(t[(c.pos + 1) % 3].arc)];
}

PotentialValue tropical_potential(const Triangulation& tri, const Vec& a) {
  PotentialValue out;
  for (const auto& p : tri.surface.punctures) {
    const auto& corners = tri.corners_at.at(p);
    Rat best = corner_value(tri, corners[0], a);
    for (const auto& c : corners) best = std::min(best, corner_value(tri, c, a));
    std::vector<Corner> arg;
    for (const auto& c : corners)
      if (corner_value(tri, c, a) == best) arg.push_back(c);
    out.w.push_back(best);
    out.argmin.push_back(std::move(arg));
  }
  return out;
}

bool is_in_V(const Triangulation& tri, const Vec& a) {
  for (const auto& w : tropical_potential(tri, a).w)
    if (w != 0) return false;
  return true;
}

DomainDescriptor linearity_domain(const Triangulation& tri, const Vec& a) {
  DomainDescriptor out;
  auto pv = tropical_potential(tri, a);
  out.argmin = pv.argmin;
  out.interior = true;
  for (const auto& arg : pv.argmin) {
    Vec f0 = corner_form(tri, arg[0]);
    bool unique_form = true;
    for (const auto& c : arg)
      if (corner_form(tri, c) != f0) unique_form = false;
    if (!unique_form) out.interior = false;
    out.tuple.push_back(arg[0]);
  }
  if (!out.interior) out.tuple.clear();
  return out;
}

namespace {

// Corners at each puncture grouped by identical linear form; one
// representative per form.
std::vector<std::vector<std::vector<Corner>>> form_groups(const Triangulation& tri) {
  std::vector<std::vector<std::vector<Corner>>> out;
  for (const auto& p : tri.surface.punctures) {
    std::vector<std::vector<Corner>> groups;
    std::vector<Vec> forms;
    for (const auto& c : tri.corners_at.at(p)) {
      Vec f = corner_form(tri, c);
      bool placed = false;
      for (std::size_t g = 0; g < forms.size(); ++g)
        if (forms[g] == f) {
          groups[g].push_back(c);
          placed = true;
          break;
        }
      if (!placed) {
        forms.push_back(std::move(f));
        groups.push_back({c});
      }
    }
    out.push_back(std::move(groups));
  }
  return out;
}

}  // namespace

std::vector<LinearityDomain> enumerate_domains(const Triangulation& tri) {
  std::size_t n = tri.arcs.size();
  auto groups = form_groups(tri);
  std::size_t np = groups.size();

  std::vector<LinearityDomain> out;
  std::vector<std::size_t> pick(np, 0);
  for (;;) {
    // Strict system: the picked form beats every other form at its puncture.
    std::vector<LinCon> strict;
    for (std::size_t p = 0; p < np; ++p) {
      Vec fp = corner_form(tri, groups[p][pick[p]][0]);
      for (std::size_t g = 0; g < groups[p].size(); ++g) {
        if (g == pick[p]) continue;
        Vec diff = corner_form(tri, groups[p][g][0]);
        for (std::size_t i = 0; i < n; ++i) diff[i] -= fp[i];
        strict.push_back(con_ge(std::move(diff), 0));
      }
    }
    if (auto ip = lp_interior_point(strict, n)) {
      LinearityDomain d;
      for (std::size_t p = 0; p < np; ++p) {
        d.tuple.push_back(groups[p][pick[p]][0]);
        d.argmin.push_back(groups[p][pick[p]]);
      }
      // Reported witness: an interior point on the w = 0 slice, where the
      // measure dictionary lives.
      std::vector<LinCon> sliced = strict;
      for (std::size_t p = 0; p < np; ++p)
        sliced.push_back(con_eq(corner_form(tri, groups[p][pick[p]][0]), 0));
      auto vp = lp_interior_point(sliced, n);
      TT_CHECK(vp.has_value(), "maximal domain must meet the zero slice");
      ip = vp;
      // Irredundant facet normals of the closed domain.
      std::vector<Vec> normals;
      for (const auto& con : strict) {
        Vec f = primitive(con.coeffs);
        if (std::find(normals.begin(), normals.end(), f) == normals.end())
          normals.push_back(std::move(f));
      }
      for (std::size_t i = 0; i < normals.size();) {
        std::vector<LinCon> rest;
        for (std::size_t j = 0; j < normals.size(); ++j)
          if (j != i) rest.push_back(con_ge(normals[j], 0));
        if (lp_implies(rest, n, normals[i], 0))
          normals.erase(normals.begin() + i);
        else
          ++i;
      }
      std::sort(normals.begin(), normals.end());
      d.facets = std::move(normals);
      d.interior_point = *ip;
      out.push_back(std::move(d));
    }
    // next tuple
    std::size_t p = 0;
    while (p < np && ++pick[p] == groups[p].size()) pick[p++] = 0;
    if (p == np) break;
  }
  std::sort(out.begin(), out.end(), [](const LinearityDomain& a, const LinearityDomain& b) {
    return a.facets < b.facets;
  });
  return out;
}

bool potential_chart_invariance(const Triangulation& tri, ArcId k, const Vec& a) {
  IMat b = exchange_matrix(tri);
  Triangulation flipped = flip(tri, k);
  Vec a2 = tropical_a_mutate(a, b, tri.arc_index(k));
  return tropical_potential(tri, a).w == tropical_potential(flipped, a2).w;
}

}  // namespace troptrack
