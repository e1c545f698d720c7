#pragma once

// Brute-force reference implementations. Nothing here calls into the
// density, regularity, applications or testing code.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sahr/algebra.hpp"
#include "sahr/geometry.hpp"
#include "sahr/pattern.hpp"

namespace sahr::oracle {

struct OracleReport {
  std::string check;
  bool pass = true;
  std::optional<std::string> counterexample;
  std::map<std::string, std::string> values;
};

/// Membership of a sorted k-tuple of vertex indices.
using EdgeFn = std::function<bool(std::span<const std::size_t>)>;

/// All k-subsets of the points evaluated once; n^k entries at most 2^28.
class TupleTable {
 public:
  TupleTable(const PointConfig& P, const RelationSpec& rel);
  std::size_t size() const { return n_; }
  std::size_t arity() const { return k_; }
  bool operator()(std::span<const std::size_t> sorted) const;
  EdgeFn fn() const;

 private:
  std::size_t n_, k_;
  std::vector<std::uint8_t> bits_;
};

/// Bad mass over increasing distinct-class k-tuples, divided by n^k.
Rational brute_homogeneity_mass(const PointConfig& P, const RelationSpec& rel,
                                const std::vector<std::vector<std::size_t>>& classes);

struct ProductWitness {
  std::vector<std::vector<std::size_t>> subsets;  // empty when no complete product exists
  std::vector<std::size_t> sizes;
  std::uint64_t product = 0;
};

ProductWitness max_complete_product(std::span<const PointConfig> parts, const RelationSpec& rel);

std::map<SignVector, std::uint64_t> order_type_census(std::span<const PointConfig> parts);

/// Sorted-index check that image is an (induced) copy of H.
bool is_embedding(const EdgeFn& edge, const Pattern& H, bool induced, std::span<const std::size_t> image);

std::optional<std::vector<std::size_t>> contains_forbidden(std::size_t n, const EdgeFn& edge, const Pattern& H,
                                                           bool induced);

struct Farness {
  Rational fraction;        // edits / C(n, k)
  std::uint64_t edits = 0;  // exact minimum, or packing size
  bool exact = true;
};

/// Exact minimum edit count for n <= 8; otherwise a greedy packing of
/// forbidden copies that pairwise share no editable tuple.
Farness farness_oracle(std::size_t n, std::size_t k, const EdgeFn& edge, std::span<const Pattern> forbidden,
                       bool induced);

std::uint64_t rainbow_containment_count(std::span<const PointConfig> parts, const Point& q);

Rational leibniz_determinant(const std::vector<std::vector<Rational>>& a);

}  // namespace sahr::oracle
