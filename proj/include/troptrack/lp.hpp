#pragma once

#include <cstddef>
#include <vector>

#include "troptrack/linalg.hpp"

namespace troptrack {

// Linear constraint over free variables x in R^n:
//   coeffs . x >= rhs   (eq = false)
//   coeffs . x == rhs   (eq = true)
struct LinCon {
  Vec coeffs;
  Rat rhs;
  bool eq = false;
};

inline LinCon con_ge(Vec c, Rat rhs) { return {std::move(c), std::move(rhs), false}; }
inline LinCon con_eq(Vec c, Rat rhs) { return {std::move(c), std::move(rhs), true}; }

enum class LPStatus { Infeasible, Unbounded, Optimal };

struct LPResult {
  LPStatus status;
  Rat value;   // objective at optimum (Optimal only)
  Vec point;   // a maximizer (Optimal only)
};

// Maximize obj . x subject to cons. Exact rational simplex, Bland's rule.
LPResult lp_maximize(const Vec& obj, const std::vector<LinCon>& cons, std::size_t n);

bool lp_feasible(const std::vector<LinCon>& cons, std::size_t n);

// True iff some x satisfies every inequality strictly (equalities exactly).
// Decided by maximizing t in {coeffs.x - t >= rhs, t <= 1}; strict iff max t > 0.
bool lp_strictly_feasible(const std::vector<LinCon>& cons, std::size_t n);

// A point with every inequality strict, if one exists.
std::optional<Vec> lp_interior_point(const std::vector<LinCon>& cons, std::size_t n);

// Dimension of the affine hull of the solution set; -1 if infeasible.
// Inequalities that hold with equality on the whole set are detected by
// maximizing their slack.
int affine_dimension(const std::vector<LinCon>& cons, std::size_t n);

// True iff the solution set of cons lies inside {f . x >= c}. For cones
// (homogeneous cons, c = 0) this is the facet-containment test.
bool lp_implies(const std::vector<LinCon>& cons, std::size_t n, const Vec& f, const Rat& c);

}  // namespace troptrack
