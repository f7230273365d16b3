#pragma once

#include <vector>

#include "gsp/graph.hpp"

namespace gsp {

// Component id per node. Ids are numbered in order of each component's
// smallest node index.
std::vector<int> strongly_connected_components(const Graph& g);

bool is_strongly_connected(const Graph& g);

struct SubgraphResult {
  Graph graph;
  std::vector<int> original_index;  // new index -> old index, ascending
};

// Ties go to the component holding the smallest node index.
SubgraphResult largest_scc(const Graph& g);

}  // namespace gsp
