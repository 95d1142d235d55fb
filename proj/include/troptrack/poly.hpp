#pragma once

#include "troptrack/linalg.hpp"

namespace troptrack {

// Polynomials are coefficient vectors, low degree first, no trailing zeros
// (except the zero polynomial, which is {}).
using Poly = std::vector<Rat>;

Poly poly_trim(Poly p);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_derivative(const Poly& p);
Rat poly_eval(const Poly& p, const Rat& x);
// Remainder of a divided by b (b nonzero).
Poly poly_mod(Poly a, const Poly& b);
// Monic gcd.
Poly poly_gcd(Poly a, Poly b);
// Divide a by b exactly; nullopt if not divisible.
std::optional<Poly> poly_div_exact(Poly a, const Poly& b);

// Characteristic polynomial det(tI - m), exact (Faddeev-LeVerrier).
Poly charpoly(const Mat& m);

// Number of distinct real roots in (lo, hi] by Sturm's theorem.
int sturm_count(const Poly& p, const Rat& lo, const Rat& hi);

// All real roots isolated into disjoint intervals (lo, hi], each containing
// exactly one root of the squarefree part, sorted increasingly.
struct RootInterval {
  Rat lo, hi;
};
std::vector<RootInterval> isolate_real_roots(const Poly& p);

// Shrink an isolating interval of p below the given width by bisection.
RootInterval refine_root(const Poly& p, RootInterval iv, const Rat& width);

// Strict upper bound on the modulus of every complex root (Cauchy bound).
Rat cauchy_bound(const Poly& p);

// Spectral radius of an exact integer/rational matrix: the maximum modulus of
// the roots of its characteristic polynomial. Returns a double approximation
// plus, when the dominant-modulus root is real, an exact rational enclosure of
// width < 1e-13 (certified by Sturm counts).
struct SpectralRadius {
  double value = 0.0;
  bool dominant_real = false;
  Rat lo, hi;  // enclosure when dominant_real
};
SpectralRadius spectral_radius(const Mat& m);

// True iff the dominant real roots of p and q are exactly equal (both
// polynomials must have a real root of maximal modulus; certified via a
// common isolating interval and their gcd).
bool dominant_roots_equal(const Poly& p, const Poly& q);

}  // namespace troptrack
