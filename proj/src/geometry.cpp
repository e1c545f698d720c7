#include "sahr/geometry.hpp"

#include <map>

#include "sahr/error.hpp"

namespace sahr {

std::vector<PointConfig> PointConfig::parts() const {
  if (labels.empty()) return {*this};
  std::vector<PointConfig> out;
  std::map<std::string, std::size_t> slot;
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto [it, inserted] = slot.try_emplace(labels[i], out.size());
    if (inserted) {
      out.emplace_back();
      out.back().dim = dim;
    }
    out[it->second].points.push_back(points[i]);
  }
  return out;
}

PointConfig make_config(std::vector<Point> points) {
  PointConfig c;
  c.dim = points.empty() ? 0 : points.front().size();
  for (const auto& p : points)
    if (p.size() != c.dim) fail(ErrorKind::InvalidSpec, "points of mixed dimension");
  c.points = std::move(points);
  return c;
}

int side(const LiftedHyperplane& h, std::span<const Rational> x) { return sign(h.value(x)); }

bool crosses(const LiftedHyperplane& h, const Simplex& s) {
  bool pos = false, neg = false;
  for (const auto& v : s.vertices) {
    int sg = side(h, v);
    pos |= sg > 0;
    neg |= sg < 0;
    if (pos && neg) return true;
  }
  return false;
}

Rational determinant(std::vector<std::vector<Rational>> a) {
  const std::size_t n = a.size();
  Rational det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) return Rational(0);
    if (piv != col) {
      std::swap(a[piv], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a[r][col] == 0) continue;
      Rational f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  return det;
}

int orientation(std::span<const Point* const> tuple) {
  const std::size_t n = tuple.size();
  if (n == 0) fail(ErrorKind::InvalidSpec, "orientation of an empty tuple");
  const std::size_t d = n - 1;
  for (const Point* p : tuple)
    if (p->size() != d) fail(ErrorKind::InvalidSpec, "orientation needs d+1 points of R^d");
  if (d == 1) return sign((*tuple[1])[0] - (*tuple[0])[0]);
  if (d == 2) {
    const Point &a = *tuple[0], &b = *tuple[1], &c = *tuple[2];
    Rational v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
    return sign(v);
  }
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n));
  for (std::size_t j = 0; j < n; ++j) {
    m[0][j] = 1;
    for (std::size_t r = 0; r < d; ++r) m[r + 1][j] = (*tuple[j])[r];
  }
  return sign(determinant(std::move(m)));
}

int orientation(std::span<const Point> tuple) {
  std::vector<const Point*> ptrs;
  for (const auto& p : tuple) ptrs.push_back(&p);
  return orientation(std::span<const Point* const>(ptrs));
}

std::vector<std::vector<std::size_t>> increasing_subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  if (k > n) return out;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    out.push_back(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

SignVector order_type(std::span<const Point* const> tuple) {
  if (tuple.empty()) return {};
  const std::size_t d = tuple.front()->size();
  if (tuple.size() < d + 1) fail(ErrorKind::InvalidSpec, "order type needs at least d+1 points");
  SignVector out;
  std::vector<const Point*> sub(d + 1);
  for (const auto& s : increasing_subsets(tuple.size(), d + 1)) {
    for (std::size_t i = 0; i <= d; ++i) sub[i] = tuple[s[i]];
    out.push_back(static_cast<std::int8_t>(orientation(std::span<const Point* const>(sub))));
  }
  return out;
}

SignVector order_type(std::span<const Point> tuple) {
  std::vector<const Point*> ptrs;
  for (const auto& p : tuple) ptrs.push_back(&p);
  return order_type(std::span<const Point* const>(ptrs));
}

bool in_general_position(std::span<const Point> points) {
  if (points.empty()) return true;
  const std::size_t d = points.front().size();
  if (points.size() <= d) return true;
  std::vector<const Point*> sub(d + 1);
  for (const auto& s : increasing_subsets(points.size(), d + 1)) {
    for (std::size_t i = 0; i <= d; ++i) sub[i] = &points[s[i]];
    if (orientation(std::span<const Point* const>(sub)) == 0) return false;
  }
  return true;
}

bool simplex_contains(std::span<const Point> vertices, const Point& q) {
  const std::size_t n = vertices.size();
  std::vector<const Point*> tuple;
  for (const auto& v : vertices) tuple.push_back(&v);
  const int whole = orientation(std::span<const Point* const>(tuple));
  if (whole == 0) fail(ErrorKind::DegenerateInput, "simplex vertices are affinely dependent");
  for (std::size_t j = 0; j < n; ++j) {
    const Point* saved = tuple[j];
    tuple[j] = &q;
    int o = orientation(std::span<const Point* const>(tuple));
    tuple[j] = saved;
    if (o != 0 && o != whole) return false;
  }
  return true;
}

std::vector<Rational> barycentric(std::span<const Point> vertices, std::span<const Rational> y) {
  const std::size_t n = vertices.size();
  const std::size_t m = y.size();
  if (n != m + 1) fail(ErrorKind::InvalidSpec, "barycentric coordinates need m+1 vertices");
  // Rows: the m coordinates, then the affine row of ones. Last column is the right-hand side.
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n + 1));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t r = 0; r < m; ++r) a[r][j] = vertices[j][r];
    a[m][j] = 1;
  }
  for (std::size_t r = 0; r < m; ++r) a[r][n] = y[r];
  a[m][n] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) fail(ErrorKind::DegenerateInput, "simplex vertices are affinely dependent");
    std::swap(a[piv], a[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      Rational f = a[r][col] / a[col][col];
      for (std::size_t c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::vector<Rational> lambda(n);
  for (std::size_t i = 0; i < n; ++i) lambda[i] = a[i][n] / a[i][i];
  return lambda;
}

std::optional<std::vector<Rational>> affine_coordinates(std::span<const Point> vertices, std::span<const Rational> y) {
  const std::size_t l = vertices.size(), m = y.size();
  if (l == 0 || l > m + 1) fail(ErrorKind::InvalidSpec, "affine coordinates need between 1 and m+1 vertices");
  const std::size_t rows = m + 1;
  std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(l + 1));
  for (std::size_t j = 0; j < l; ++j) {
    if (vertices[j].size() != m) fail(ErrorKind::InvalidSpec, "vertex dimension mismatch");
    for (std::size_t r = 0; r < m; ++r) a[r][j] = vertices[j][r];
    a[m][j] = 1;
  }
  for (std::size_t r = 0; r < m; ++r) a[r][l] = y[r];
  a[m][l] = 1;
  for (std::size_t col = 0; col < l; ++col) {
    std::size_t piv = col;
    while (piv < rows && a[piv][col] == 0) ++piv;
    if (piv == rows) fail(ErrorKind::DegenerateInput, "simplex vertices are affinely dependent");
    std::swap(a[piv], a[col]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == col || a[r][col] == 0) continue;
      Rational f = a[r][col] / a[col][col];
      for (std::size_t c = col; c <= l; ++c) a[r][c] -= f * a[col][c];
    }
  }
  for (std::size_t r = l; r < rows; ++r)
    if (a[r][l] != 0) return std::nullopt;
  std::vector<Rational> beta(l);
  for (std::size_t i = 0; i < l; ++i) beta[i] = a[i][l] / a[i][i];
  return beta;
}

bool relative_interior_contains(std::span<const Point> vertices, std::span<const Rational> y) {
  auto beta = affine_coordinates(vertices, y);
  if (!beta) return false;
  for (const auto& b : *beta)
    if (b <= 0) return false;
  return true;
}

}  // namespace sahr
