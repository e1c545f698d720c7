#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sahr/density.hpp"

namespace sahr {

struct OrderTypeCensus {
  SignVector type;
  Rational fraction;        // share of transversals realizing `type`
  std::uint64_t count = 0;  // transversals realizing it
  std::uint64_t total = 0;  // transversals examined
  std::size_t distinct = 0;  // distinct types observed
  bool exact = true;         // false when estimated from a sample
};

struct SameTypeWitness {
  std::vector<std::vector<std::size_t>> subsets;
  SignVector order_type;
  Rational coverage_fraction;
  HomogeneousWitness density;
};

struct TverbergWitness {
  Point q;
  std::vector<std::vector<std::size_t>> subsets;
  std::uint64_t containment_count = 0;
  std::uint64_t required_count = 0;  // ceil(n^{d+1} / (d+1)!)
  std::size_t candidates = 0;        // q candidates evaluated
  HomogeneousWitness density;
};

struct ApplicationOptions {
  DensityOptions density;
  std::uint64_t exact_cap = 10'000'000;  // transversals enumerated exactly
  std::uint64_t samples = 100'000;       // sampled transversals above the cap
};

/// Most frequent order type over all transversals (exact below the cap, sampled above it).
OrderTypeCensus dominant_order_type(std::span<const PointConfig> parts, std::uint64_t seed = 0,
                                    const ApplicationOptions& opt = {});

/// The k-ary relation "the transversal has order type `type`", one orientation
/// polynomial per increasing (d+1)-subset of the k blocks.
RelationSpec order_type_relation(std::size_t k, std::size_t d, const SignVector& type);

SameTypeWitness same_type_subsets(std::span<const PointConfig> parts, std::uint64_t seed,
                                  const ApplicationOptions& opt = {});

/// The (d+1)-ary relation "q lies in the closed simplex of the transversal".
RelationSpec containment_relation(const Point& q);

TverbergWitness tverberg_point(std::span<const PointConfig> parts, std::uint64_t seed,
                               const ApplicationOptions& opt = {});

}  // namespace sahr
