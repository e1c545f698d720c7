#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sahr/algebra.hpp"
#include "sahr/geometry.hpp"

namespace sahr {

enum class CuttingMode { Sampled, Exact };

std::string_view to_string(CuttingMode mode);
CuttingMode parse_cutting_mode(std::string_view text);

struct Box {
  Point lo, hi;
  std::size_t m() const { return lo.size(); }
  bool contains(std::span<const Rational> x) const;
};

/// Smallest axis-aligned box around the points, inflated by `margin` per side.
/// An empty point set gives [-margin, margin]^m.
Box bounding_box(std::span<const Point> points, std::size_t m, const Rational& margin = 1);

class CellIndex;

struct Cutting {
  std::size_t m = 0;
  Box box;
  std::vector<Simplex> cells;
  std::vector<std::vector<std::size_t>> crossing;  // sorted hyperplane indices per cell
  std::size_t n = 0;
  std::size_t r = 0;
  std::uint64_t seed = 0;
  CuttingMode mode = CuttingMode::Sampled;
  std::shared_ptr<const CellIndex> index;

  std::size_t cap() const { return n == 0 ? 0 : (n + r - 1) / r; }
};

/// 2^{10 m log2(m+1)} r^m, i.e. (m+1)^{10m} r^m.
Integer cell_count_bound(std::size_t m, std::size_t r);

/// Subdivides the box into simplices, each crossed by at most ceil(n/r) of hs.
/// r is clamped to [2, max(2, n)]. Only m in {1, 2} is supported.
Cutting build_cutting(std::span<const LiftedHyperplane> hs, std::size_t r, const Box& box, std::uint64_t seed,
                      CuttingMode mode = CuttingMode::Sampled);

bool closure_contains(const Simplex& s, std::span<const Rational> y);
bool interior_contains(const Simplex& s, std::span<const Rational> y);

/// Lowest-index cell whose closure contains x. Throws OutOfBox.
std::size_t locate(const Cutting& c, std::span<const Rational> x);

/// Cells whose closure may contain x (a superset of the true answer).
std::vector<std::size_t> candidate_cells(const Cutting& c, std::span<const Rational> x);

/// Rebuilds the point-location index, e.g. after editing cells by hand.
void reindex(Cutting& c);

struct CuttingReport {
  bool pass = true;
  std::size_t cells = 0;
  std::size_t max_crossing = 0;
  std::size_t cap = 0;
  Integer count_bound;
  std::size_t probes = 0;
  std::vector<std::string> failures;
};

/// Recomputes every crossing list from scratch and checks the bound, the cell
/// count and unique location of each probe.
CuttingReport verify_cutting(const Cutting& c, std::span<const LiftedHyperplane> hs, std::span<const Point> probes);

}  // namespace sahr
