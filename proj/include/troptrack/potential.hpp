#pragma once

#include <vector>

#include "troptrack/lp.hpp"
#include "troptrack/surface.hpp"
#include "troptrack/tropical.hpp"

namespace troptrack {

// Linear form of a corner: a_{opposite side} - a_{side i} - a_{side i+1},
// as coefficients over the arc index set.
Vec corner_form(const Triangulation& tri, Corner c);
Rat corner_value(const Triangulation& tri, Corner c, const Vec& a);

struct PotentialValue {
  Vec w;                                     // per puncture, in declared order
  std::vector<std::vector<Corner>> argmin;   // corners achieving each minimum
};

PotentialValue tropical_potential(const Triangulation& tri, const Vec& a);

// True iff w_p = 0 at every puncture.
bool is_in_V(const Triangulation& tri, const Vec& a);

struct DomainDescriptor {
  bool interior = false;                     // unique minimal form per puncture
  std::vector<std::vector<Corner>> argmin;   // per puncture
  std::vector<Corner> tuple;                 // representative t_p when interior
};

// The linearity domain containing the point: the argmin tuple when every
// puncture's minimum is achieved by a single linear form, else the tie data
// with interior = false. Corners whose forms coincide as linear forms count
// as one.
DomainDescriptor linearity_domain(const Triangulation& tri, const Vec& a);

struct LinearityDomain {
  std::vector<Corner> tuple;                 // one argmin representative per puncture
  std::vector<std::vector<Corner>> argmin;   // all corners of the minimal form
  std::vector<Vec> facets;                   // irredundant primitive normals, sorted
  Vec interior_point;
};

// All maximal (full-dimensional) linearity domains of the potential, in
// canonical facet order.
std::vector<LinearityDomain> enumerate_domains(const Triangulation& tri);

// Compares per-puncture potential values across the flip at arc k.
bool potential_chart_invariance(const Triangulation& tri, ArcId k, const Vec& a);

}  // namespace troptrack
