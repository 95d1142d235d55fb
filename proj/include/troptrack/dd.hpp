#pragma once

#include <cstddef>
#include <vector>

#include "troptrack/linalg.hpp"

namespace troptrack {

// Generators of the cone {x in R^n : ineqs.x >= 0, eqs.x = 0}:
// a canonical basis of its lineality space plus the extreme rays of the
// pointed quotient, all primitive integer vectors in deterministic order.
struct ConeRays {
  std::vector<Vec> lineality;
  std::vector<Vec> rays;
};

ConeRays extreme_rays(const std::vector<Vec>& ineqs, const std::vector<Vec>& eqs,
                      std::size_t n);

}  // namespace troptrack
