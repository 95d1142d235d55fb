#include "troptrack/linalg.hpp"

#include <algorithm>
#include <sstream>

namespace troptrack {

std::string rat_str(const Rat& r) {
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << "/" << denominator(r);
  return os.str();
}

std::optional<Rat> parse_rat(const std::string& s) {
  if (s.empty()) return std::nullopt;
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(s));
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    if (den == 0) return std::nullopt;
    return Rat(num, den);
  } catch (...) {
    return std::nullopt;
  }
}

double rat_double(const Rat& r) { return r.convert_to<double>(); }

Mat mat_identity(std::size_t n) {
  Mat m(n, Vec(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

Mat mat_zero(std::size_t rows, std::size_t cols) { return Mat(rows, Vec(cols, 0)); }

Mat mat_mul(const Mat& a, const Mat& b) {
  std::size_t n = a.size(), k = b.size(), m = k ? b[0].size() : 0;
  Mat c(n, Vec(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < k; ++t) {
      if (a[i][t] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][t] * b[t][j];
    }
  return c;
}

Vec mat_vec(const Mat& a, const Vec& v) {
  Vec r(a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j)
      if (a[i][j] != 0) r[i] += a[i][j] * v[j];
  return r;
}

Mat mat_transpose(const Mat& a) {
  std::size_t n = a.size(), m = n ? a[0].size() : 0;
  Mat t(m, Vec(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) t[j][i] = a[i][j];
  return t;
}

bool mat_eq(const Mat& a, const Mat& b) { return a == b; }

namespace {
// Row echelon form in place; returns pivot columns.
std::vector<std::size_t> echelon(Mat& a) {
  std::vector<std::size_t> pivots;
  std::size_t rows = a.size(), cols = rows ? a[0].size() : 0, r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    Rat inv = a[r][c];
    for (std::size_t j = c; j < cols; ++j) a[r][j] /= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      Rat f = a[i][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}
}  // namespace

std::size_t mat_rank(Mat a) { return echelon(a).size(); }

std::vector<Vec> kernel_basis(Mat a) {
  std::size_t cols = a.empty() ? 0 : a[0].size();
  auto pivots = echelon(a);
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<Vec> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    Vec v(cols, 0);
    v[f] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a[r][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<Vec> solve_square(Mat a, Vec b) {
  std::size_t n = a.size();
  if (n == 0) return Vec{};
  for (std::size_t i = 0; i < n; ++i) a[i].push_back(b[i]);
  auto pivots = echelon(a);
  if (pivots.size() != n || pivots.back() != n - 1) return std::nullopt;
  Vec x(n, 0);
  for (std::size_t i = 0; i < n; ++i) x[i] = a[i][n];
  return x;
}

std::optional<Vec> solve_general(Mat a, Vec b) {
  std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  for (std::size_t i = 0; i < rows; ++i) a[i].push_back(b[i]);
  auto pivots = echelon(a);
  if (!pivots.empty() && pivots.back() == cols) return std::nullopt;
  Vec x(cols, 0);
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = a[r][cols];
  return x;
}

std::optional<Mat> mat_inverse(const Mat& a) {
  std::size_t n = a.size();
  Mat aug(n, Vec(2 * n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = a[i][j];
    aug[i][n + i] = 1;
  }
  auto pivots = echelon(aug);
  if (pivots.size() != n || pivots.back() != n - 1) return std::nullopt;
  Mat inv(n, Vec(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  return inv;
}

Rat mat_det(Mat a) {
  std::size_t n = a.size();
  Rat det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) { std::swap(a[p], a[c]); det = -det; }
    det *= a[c][c];
    Rat inv = a[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a[i][c] == 0) continue;
      Rat f = a[i][c] / inv;
      for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  return det;
}

Vec primitive(const Vec& v) {
  Int lcm = 1;
  for (const auto& x : v) lcm = boost::multiprecision::lcm(lcm, denominator(x));
  Int content = 0;
  for (const auto& x : v) content = boost::multiprecision::gcd(content, Int(numerator(x) * (lcm / denominator(x))));
  if (content == 0) return Vec(v.size(), 0);
  Vec out(v.size());
  Rat scale = Rat(lcm, content);
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] * scale;
  return out;
}

}  // namespace troptrack
