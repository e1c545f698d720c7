#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sahr/algebra.hpp"
#include "sahr/geometry.hpp"
#include "sahr/pattern.hpp"

namespace sahr {

/// A semi-algebraic k-uniform hypergraph: {i_1 < ... < i_k} is an edge iff
/// rel(p_{i_1}, ..., p_{i_k}) holds.
class Instance {
 public:
  Instance(PointConfig points, RelationSpec rel);
  std::size_t size() const { return points_.points.size(); }
  std::size_t arity() const { return rel_.arity; }
  const PointConfig& points() const { return points_; }
  const RelationSpec& relation() const { return rel_; }
  /// `tuple` holds increasing vertex indices.
  bool edge(std::span<const std::size_t> tuple) const;

 private:
  PointConfig points_;
  RelationSpec rel_;
  std::vector<std::uint8_t> adj_;  // full adjacency for graphs
};

/// Explicit k-uniform hypergraph on vertices 0..n-1 (dense storage).
class Hypergraph {
 public:
  Hypergraph(std::size_t n, std::size_t k);
  std::size_t size() const { return n_; }
  std::size_t arity() const { return k_; }
  bool edge(std::span<const std::size_t> sorted) const { return bits_[index(sorted)]; }
  void set_edge(std::span<const std::size_t> sorted, bool on) { bits_[index(sorted)] = on; }
  /// Neighbours of v (graphs only).
  const std::vector<std::size_t>& neighbours(std::size_t v) const { return nbr_[v]; }
  void finish();

 private:
  std::size_t index(std::span<const std::size_t> sorted) const;
  std::size_t n_, k_;
  std::vector<std::uint8_t> bits_;
  std::vector<std::vector<std::size_t>> nbr_;
};

/// Induced sub-hypergraph on `vertices` (vertex i of the result is vertices[i]).
Hypergraph induced_subhypergraph(const Instance& inst, const std::vector<std::size_t>& vertices);

/// An injective map from pattern vertices to host vertices.
struct Embedding {
  std::size_t pattern = 0;          // index into the plugin's forbidden family
  std::vector<std::size_t> image;   // host vertex of each pattern vertex
};

/// Finds a (induced, if asked) copy of p in g by backtracking.
std::optional<std::vector<std::size_t>> find_copy(const Hypergraph& g, const Pattern& p, bool induced);

enum class PluginKind { Monotone, HereditaryGraph, HereditaryHypergraph };
std::string_view to_string(PluginKind k);

class PropertyPlugin {
 public:
  PropertyPlugin(std::string name, PluginKind kind, std::vector<Pattern> forbidden);
  const std::string& name() const { return name_; }
  PluginKind kind() const { return kind_; }
  bool induced() const { return kind_ != PluginKind::Monotone; }
  std::size_t arity() const { return forbidden_.front().k; }
  const std::vector<Pattern>& forbidden() const { return forbidden_; }
  std::optional<Embedding> find_forbidden(const Hypergraph& g) const;
  bool satisfies(const Hypergraph& g) const { return !find_forbidden(g); }
  /// Psi_1 / Psi_2 / Psi_3 per kind: exact for r up to exact_limit(), then
  /// the bound max |V(H)| (never below the last exact value).
  std::size_t psi(std::size_t r) const;
  std::size_t exact_limit() const;

 private:
  std::size_t exact_psi(std::size_t r) const;
  std::string name_;
  PluginKind kind_;
  std::vector<Pattern> forbidden_;
  mutable std::vector<std::size_t> memo_;  // memo_[r] for r <= exact_limit()
};

/// Known plugins: triangle-free, k4-free, induced-p3-free, induced-edge-free,
/// induced-two-edge-free.
PropertyPlugin make_plugin(std::string_view name);
std::vector<std::string> plugin_names();

struct TesterConfig {
  Rational epsilon{1, 10};
  unsigned c = 2;                  // r = ceil((1/eps)^c)
  unsigned C = 2;                  // exponent in the hereditary sample sizes
  std::optional<std::size_t> r;    // overrides the formula for r
  bool clamp = true;               // clamp v to |P| instead of failing
};

struct TesterOutcome {
  bool accept = true;
  std::vector<std::size_t> sample;
  std::optional<Embedding> witness;  // host indices refer to the instance
  std::size_t r = 0;
  std::size_t psi = 0;
  std::uint64_t v_formula = 0;  // sample size the formula asks for
  std::size_t v = 0;            // sample size used
  bool clamped = false;
};

std::vector<std::size_t> sample_vertices(std::size_t n, std::size_t v, std::uint64_t seed);
std::vector<std::size_t> sample_vertices(const PointConfig& P, std::size_t v, std::uint64_t seed);

std::size_t tester_r(const TesterConfig& cfg);
/// v from the formula of the plugin's kind, saturating at UINT64_MAX.
std::uint64_t tester_sample_size(const PropertyPlugin& plugin, const TesterConfig& cfg);

TesterOutcome monotone_tester(const Instance& inst, const PropertyPlugin& plugin, const TesterConfig& cfg,
                              std::uint64_t seed);
TesterOutcome hereditary_graph_tester(const Instance& inst, const PropertyPlugin& plugin, const TesterConfig& cfg,
                                      std::uint64_t seed);
TesterOutcome hereditary_hypergraph_tester(const Instance& inst, const PropertyPlugin& plugin,
                                           const TesterConfig& cfg, std::uint64_t seed);
/// Dispatches on plugin.kind().
TesterOutcome run_tester(const Instance& inst, const PropertyPlugin& plugin, const TesterConfig& cfg,
                         std::uint64_t seed);

struct AcceptanceEstimate {
  std::size_t trials = 0;
  std::size_t accepted = 0;
  Rational rate;
  Rational half_width;  // 95% Wilson interval half-width
  Rational low, high;   // the interval itself
  std::uint64_t v = 0;  // sample size per trial
};

/// Seed of trial t; every trial is deterministic given (seed, t).
std::uint64_t trial_seed(std::uint64_t seed, std::size_t t);

/// When `outcomes` is given, it receives every trial's outcome in order.
AcceptanceEstimate estimate_acceptance(const Instance& inst, const PropertyPlugin& plugin, const TesterConfig& cfg,
                                       std::size_t trials, std::uint64_t seed,
                                       std::vector<TesterOutcome>* outcomes = nullptr);

}  // namespace sahr
