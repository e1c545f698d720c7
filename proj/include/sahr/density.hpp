#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sahr/algebra.hpp"
#include "sahr/cutting.hpp"
#include "sahr/geometry.hpp"

namespace sahr {

/// A semi-algebraic subset of R^d: Boolean combination of sign conditions
/// "p_j(x) >= 0", optionally complemented.
struct CellPredicate {
  std::size_t dim = 0;
  std::vector<Polynomial> polys;
  BooleanFormula formula = BooleanFormula::all_of({});
  bool complement = false;

  std::size_t kappa() const { return polys.size(); }
  bool contains(const Point& x) const;
  /// Indices i of points with contains(points[i]).
  std::vector<std::size_t> select(std::span<const Point> points) const;
};

/// The whole space.
CellPredicate full_predicate(std::size_t dim);

/// {x : phi(x) in the relative interior of delta}, written in x.
CellPredicate lifted_simplex_predicate(const Simplex& delta, std::size_t d, unsigned D);

enum class Polarity { Complete, Empty };
std::string_view to_string(Polarity p);

struct HomogeneousWitness {
  std::vector<std::vector<std::size_t>> parts;  // indices into the input parts
  Simplex cell;
  Polarity polarity = Polarity::Complete;
  std::vector<std::size_t> sizes;
  std::vector<Rational> guarantee;  // theorem fractions
  std::vector<std::size_t> required;  // max(1, ceil(guarantee_i |P_i|))
  std::vector<CellPredicate> predicates;  // part i = input part i cut by predicates[i]
  std::vector<Complexity> reduced;  // complexity of each reduced relation, outermost first
  Rational density;  // measured |E| / prod |P_i|
};

struct DensityOptions {
  CuttingMode mode = CuttingMode::Sampled;
  std::size_t cap_product = 1'000'000;
};

/// Guaranteed fractions: k=2 gives (eps/8, eps^{m+1} / (t^m 2^{14 m log2(m+1)})),
/// k >= 3 gives eps^{m+1} / C^k with C = 2^{20 m log2(m+1)} t^{m/k} in every slot.
std::vector<Rational> theorem_bound(std::size_t k, std::size_t d, std::size_t t, unsigned D, const Rational& eps);

/// Exhaustive count of edges over the product of the parts.
std::uint64_t count_edges(const RelationSpec& rel, std::span<const std::vector<const Point*>> parts);

HomogeneousWitness find_biclique(const PointConfig& P, const PointConfig& Q, const RelationSpec& rel,
                                 const Rational& eps, std::uint64_t seed, const DensityOptions& opt = {});

/// E_1 = E_2 and E_3: E_2 fixes the last block to `anchor`; E_3 asks every
/// lifted hyperplane f_i*(x, .) to be >= 0 on all vertices of the cell or < 0
/// on all of them. The result has arity k-1 and t(1 + l) polynomials.
RelationSpec derive_reduced_relation(const RelationSpec& rel, const Simplex& cell, const Point& anchor);

HomogeneousWitness find_complete_product(std::span<const PointConfig> parts, const RelationSpec& rel,
                                         const Rational& eps, std::uint64_t seed, const DensityOptions& opt = {});

/// Checks that every transversal of the chosen subsets is an edge.
bool product_is_complete(const RelationSpec& rel, std::span<const PointConfig> parts,
                         const std::vector<std::vector<std::size_t>>& subsets, bool want_edges = true);

}  // namespace sahr
