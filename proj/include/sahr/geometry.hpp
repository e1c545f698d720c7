#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sahr/algebra.hpp"
#include "sahr/rational.hpp"

namespace sahr {

/// A finite point set with a fixed enumeration and optional part labels.
struct PointConfig {
  std::size_t dim = 0;
  std::vector<Point> points;
  std::vector<std::string> labels;  // empty, or one label per point

  std::size_t size() const { return points.size(); }
  /// Splits by label in order of first appearance. Unlabeled input is one part.
  std::vector<PointConfig> parts() const;
};

PointConfig make_config(std::vector<Point> points);

struct Simplex {
  std::size_t m = 0;
  std::vector<Point> vertices;
  bool open = false;
};

/// Entries in {-1, 0, +1}, one per increasing (d+1)-subset in lexicographic order.
using SignVector = std::vector<std::int8_t>;

int side(const LiftedHyperplane& h, std::span<const Rational> x);

/// Closed half-space vertex criterion: true iff some vertex is strictly
/// positive and some vertex strictly negative.
bool crosses(const LiftedHyperplane& h, const Simplex& s);

Rational determinant(std::vector<std::vector<Rational>> a);

/// Sign of det [[1 ... 1], [x_1 ... x_{d+1}]].
int orientation(std::span<const Point* const> tuple);
int orientation(std::span<const Point> tuple);

SignVector order_type(std::span<const Point* const> tuple);
SignVector order_type(std::span<const Point> tuple);

bool in_general_position(std::span<const Point> points);

/// Closed containment of q in the simplex spanned by d+1 points of R^d.
/// Throws DegenerateInput when the vertices are affinely dependent.
bool simplex_contains(std::span<const Point> vertices, const Point& q);

/// Barycentric coordinates of y with respect to m+1 affinely independent
/// vertices in R^m. Throws DegenerateInput on dependent vertices.
std::vector<Rational> barycentric(std::span<const Point> vertices, std::span<const Rational> y);

/// Affine coordinates of y with respect to l <= m+1 affinely independent
/// vertices in R^m (they sum to one). Empty when y is off their affine hull.
/// Throws DegenerateInput on dependent vertices.
std::optional<std::vector<Rational>> affine_coordinates(std::span<const Point> vertices, std::span<const Rational> y);

/// y lies in the relative interior: on the affine hull with all coordinates > 0.
bool relative_interior_contains(std::span<const Point> vertices, std::span<const Rational> y);

/// All increasing k-subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<std::size_t>> increasing_subsets(std::size_t n, std::size_t k);

}  // namespace sahr
