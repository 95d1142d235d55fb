#include "troptrack/poly.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace troptrack {

Poly poly_trim(Poly p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return poly_trim(c);
}

Poly poly_derivative(const Poly& p) {
  Poly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * int(i));
  return poly_trim(d);
}

Rat poly_eval(const Poly& p, const Rat& x) {
  Rat v = 0;
  for (std::size_t i = p.size(); i-- > 0;) v = v * x + p[i];
  return v;
}

Poly poly_mod(Poly a, const Poly& b) {
  a = poly_trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    Rat f = a.back() / b.back();
    std::size_t off = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[off + i] -= f * b[i];
    a = poly_trim(a);
  }
  return a;
}

Poly poly_gcd(Poly a, Poly b) {
  a = poly_trim(a);
  b = poly_trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    Rat lead = a.back();
    for (auto& c : a) c /= lead;
  }
  return a;
}

std::optional<Poly> poly_div_exact(Poly a, const Poly& b) {
  a = poly_trim(a);
  if (a.empty()) return Poly{};
  if (a.size() < b.size()) return std::nullopt;
  Poly q(a.size() - b.size() + 1, 0);
  while (a.size() >= b.size() && !a.empty()) {
    Rat f = a.back() / b.back();
    q[a.size() - b.size()] = f;
    std::size_t off = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[off + i] -= f * b[i];
    a = poly_trim(a);
  }
  if (!a.empty()) return std::nullopt;
  return q;
}

Poly charpoly(const Mat& a) {
  std::size_t n = a.size();
  Poly c(n + 1, 0);
  c[n] = 1;
  Mat m = mat_zero(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::size_t i = 0; i < n; ++i) m[i][i] += c[n - k + 1];
    m = mat_mul(a, m);
    Rat tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += m[i][i];
    c[n - k] = -tr / int(k);
  }
  return c;
}

namespace {
std::vector<Poly> sturm_chain(const Poly& p) {
  Poly sf = p;
  Poly g = poly_gcd(p, poly_derivative(p));
  if (g.size() > 1) sf = *poly_div_exact(p, g);
  std::vector<Poly> chain{poly_trim(sf), poly_derivative(sf)};
  while (!chain.back().empty() && chain.back().size() > 1) {
    Poly r = poly_mod(chain[chain.size() - 2], chain.back());
    for (auto& c : r) c = -c;
    chain.push_back(poly_trim(r));
  }
  if (chain.back().empty()) chain.pop_back();
  return chain;
}

int sign_changes(const std::vector<Poly>& chain, const Rat& x) {
  int changes = 0, prev = 0;
  for (const auto& q : chain) {
    int s = sgn(poly_eval(q, x));
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++changes;
    prev = s;
  }
  return changes;
}
}  // namespace

int sturm_count(const Poly& p, const Rat& lo, const Rat& hi) {
  auto chain = sturm_chain(p);
  return sign_changes(chain, lo) - sign_changes(chain, hi);
}

Rat cauchy_bound(const Poly& p) {
  Rat b = 0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i)
    b = std::max(b, Rat(abs(p[i] / p.back())));
  return b + 1;
}

std::vector<RootInterval> isolate_real_roots(const Poly& p) {
  std::vector<RootInterval> out;
  Poly q = poly_trim(p);
  if (q.size() <= 1) return out;
  auto chain = sturm_chain(q);
  Rat bound = cauchy_bound(q);
  std::vector<RootInterval> work{{-bound, bound}};
  while (!work.empty()) {
    auto [lo, hi] = work.back();
    work.pop_back();
    int n = sign_changes(chain, lo) - sign_changes(chain, hi);
    if (n == 0) continue;
    if (n == 1) {
      out.push_back({lo, hi});
      continue;
    }
    Rat mid = (lo + hi) / 2;
    work.push_back({lo, mid});
    work.push_back({mid, hi});
  }
  std::sort(out.begin(), out.end(), [](const RootInterval& a, const RootInterval& b) { return a.lo < b.lo; });
  return out;
}

RootInterval refine_root(const Poly& p, RootInterval iv, const Rat& width) {
  auto chain = sturm_chain(p);
  while (iv.hi - iv.lo > width) {
    Rat mid = (iv.lo + iv.hi) / 2;
    if (sign_changes(chain, iv.lo) - sign_changes(chain, mid) == 1)
      iv.hi = mid;
    else
      iv.lo = mid;
  }
  return iv;
}

namespace {
// Aberth-Ehrlich simultaneous root finding; plenty for degree <= ~30.
std::vector<std::complex<long double>> aberth(const Poly& p) {
  std::size_t n = p.size() - 1;
  std::vector<std::complex<long double>> coef(p.size());
  long double lead = (long double)rat_double(p.back());
  for (std::size_t i = 0; i < p.size(); ++i)
    coef[i] = (long double)rat_double(p[i]) / lead;
  auto eval = [&](std::complex<long double> z, std::complex<long double>& dz) {
    std::complex<long double> v = 0, d = 0;
    for (std::size_t i = p.size(); i-- > 0;) {
      d = d * z + v;
      v = v * z + coef[i];
    }
    dz = d;
    return v;
  };
  long double r = (long double)rat_double(cauchy_bound(p));
  std::vector<std::complex<long double>> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    long double th = 2.0L * 3.14159265358979323846L * (long double)i / (long double)n + 0.4L;
    z[i] = std::polar(r * 0.7L, th);
  }
  for (int iter = 0; iter < 500; ++iter) {
    long double worst = 0;
    for (std::size_t i = 0; i < n; ++i) {
      std::complex<long double> d;
      auto v = eval(z[i], d);
      if (std::abs(v) == 0) continue;
      auto w = (std::abs(d) == 0) ? v : v / d;
      std::complex<long double> s = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) s += 1.0L / (z[i] - z[j]);
      auto corr = w / (1.0L - w * s);
      z[i] -= corr;
      worst = std::max(worst, std::abs(corr));
    }
    if (worst < 1e-24L) break;
  }
  return z;
}
}  // namespace

SpectralRadius spectral_radius(const Mat& m) {
  SpectralRadius out;
  Poly p = charpoly(m);
  auto roots = aberth(p);
  long double best = 0;
  std::complex<long double> dom = 0;
  for (auto& z : roots)
    if (std::abs(z) > best) { best = std::abs(z); dom = z; }
  out.value = (double)best;
  if (best == 0) { out.dominant_real = true; out.lo = out.hi = 0; return out; }
  if (std::abs(dom.imag()) < 1e-10L * best) {
    // Certify with the exact real-root isolation.
    auto ivs = isolate_real_roots(p);
    Rat width(1, Int(10000000000000LL));  // 1e-13
    Rat bestmag = -1;
    RootInterval pick{0, 0};
    for (auto iv : ivs) {
      auto r = refine_root(p, iv, width);
      Rat mag = std::max(Rat(abs(r.lo)), Rat(abs(r.hi)));
      if (mag > bestmag) { bestmag = mag; pick = r; }
    }
    // The numerically dominant root is real, so the largest-|.|-real root is it.
    out.dominant_real = true;
    out.lo = pick.lo;
    out.hi = pick.hi;
    double mid = rat_double((pick.lo + pick.hi) / 2);
    out.value = std::abs(mid);
  }
  return out;
}

namespace {
// Tightest interval around the real root of largest absolute value, or nullopt
// if the polynomial has no real root.
std::optional<RootInterval> dominant_real_interval(const Poly& p, const Rat& width) {
  auto ivs = isolate_real_roots(p);
  if (ivs.empty()) return std::nullopt;
  Rat bestmag = -1;
  RootInterval pick{0, 0};
  for (auto iv : ivs) {
    auto r = refine_root(p, iv, width);
    Rat mag = std::max(Rat(abs(r.lo)), Rat(abs(r.hi)));
    if (mag > bestmag) { bestmag = mag; pick = r; }
  }
  return pick;
}
}  // namespace

bool dominant_roots_equal(const Poly& p, const Poly& q) {
  Poly g = poly_gcd(p, q);
  if (g.size() <= 1) return false;
  Rat width(1, 1000000000);
  for (int round = 0; round < 6; ++round) {
    auto ip = dominant_real_interval(p, width);
    auto iq = dominant_real_interval(q, width);
    if (!ip || !iq) return false;
    if (ip->hi < iq->lo || iq->hi < ip->lo) return false;
    Rat lo = std::min(ip->lo, iq->lo), hi = std::max(ip->hi, iq->hi);
    if (sturm_count(p, lo, hi) == 1 && sturm_count(q, lo, hi) == 1 &&
        sturm_count(g, lo, hi) >= 1)
      return true;
    width /= 1000000;
  }
  return false;
}

}  // namespace troptrack
