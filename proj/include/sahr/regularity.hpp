#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sahr/density.hpp"

namespace sahr {

enum class Homogeneity { Complete, Empty, Mixed };
std::string_view to_string(Homogeneity h);

struct PartitionReport {
  std::size_t arity = 0;
  std::vector<std::vector<std::size_t>> classes;
  /// One entry per increasing k-tuple of distinct classes, in the order of
  /// increasing_subsets(K, k).
  std::vector<Homogeneity> homogeneity;
  Rational bad_mass;  // sum over mixed tuples of prod |P_j|, divided by |P|^k
  std::size_t K = 0;
  bool equitable = false;
  std::size_t rounds = 0;          // refinement rounds
  std::size_t predicates = 0;      // cell predicates collected during refinement
  std::size_t max_kappa = 0;       // largest predicate size among them
  Rational product_bad_mass;       // mass of mixed products when refinement stopped
};

struct RegularityOptions {
  DensityOptions density;
  std::size_t max_rounds = 10'000;
};

/// Exhaustive classification of the product of the given index sets of P.
Homogeneity classify_product(const RelationSpec& rel, const PointConfig& P,
                             std::span<const std::vector<std::size_t>> sides);

/// Fills homogeneity, K and bad_mass from the classes by exhaustive enumeration.
void classify_classes(const RelationSpec& rel, const PointConfig& P, PartitionReport& rep);

/// A complete product for rel when its density is at least 1/2, otherwise an
/// empty one (a complete product for the negated relation).
HomogeneousWitness homogeneous_box(std::span<const PointConfig> parts, const RelationSpec& rel, std::uint64_t seed,
                                   const DensityOptions& opt = {});

PartitionReport partition_product(const PointConfig& P, const RelationSpec& rel, const Rational& eps,
                                  std::uint64_t seed, const RegularityOptions& opt = {});

PartitionReport equitable_partition(const PointConfig& P, const RelationSpec& rel, const Rational& eps,
                                    std::uint64_t seed, const RegularityOptions& opt = {});

struct PartiteSubsets {
  std::vector<std::vector<std::size_t>> subsets;  // indices into P, equal sizes
  Polarity polarity = Polarity::Complete;
  Rational epsilon;  // regularity parameter that produced them
};

/// h disjoint equal-size subsets whose cross pairs are all edges or all non-edges.
PartiteSubsets complete_partite_subsets(const PointConfig& P, const RelationSpec& rel, std::size_t h,
                                        std::uint64_t seed, const RegularityOptions& opt = {});

struct StrongPartition {
  PartitionReport partition;
  std::vector<std::vector<std::size_t>> q_sets;  // Q_i inside class i
  std::vector<Rational> q_fraction;              // |Q_i| / |P|
  std::vector<Rational> q_density;               // graph case: internal edge density of Q_i
  Rational delta;                                // min q_fraction
  Rational refine_epsilon;                       // epsilon' of the second refinement
};

StrongPartition strong_partition_graph(const PointConfig& P, const RelationSpec& rel, const Rational& eps,
                                       const Rational& alpha, std::uint64_t seed, const RegularityOptions& opt = {});

StrongPartition strong_partition_hypergraph(const PointConfig& P, const RelationSpec& rel, const Rational& eps,
                                            std::uint64_t seed, const RegularityOptions& opt = {});

/// Edges among unordered pairs of distinct members, over C(|S|, 2); 0 below two members.
Rational internal_density(const RelationSpec& rel, const PointConfig& P, const std::vector<std::size_t>& S);

}  // namespace sahr
