#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace sahr {

/// A small k-uniform hypergraph on vertices 0..vertices-1; edges are sorted k-sets.
struct Pattern {
  std::string name;
  std::size_t k = 2;
  std::size_t vertices = 0;
  std::vector<std::vector<std::size_t>> edges;
};

}  // namespace sahr
