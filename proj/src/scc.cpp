#include "gsp/scc.hpp"

#include <algorithm>
#include <utility>
#include <vector>

namespace gsp {

std::vector<int> strongly_connected_components(const Graph& g) {
  // Iterative Tarjan over the out-edges of W.
  const int n = g.num_nodes();
  const SpMat& w = g.weights();
  const int* outer = w.outerIndexPtr();
  const int* inner = w.innerIndexPtr();

  std::vector<int> index(n, -1), low(n, 0), comp(n, -1), stack, call;
  std::vector<int> next_edge(n, 0);
  std::vector<char> on_stack(n, 0);
  int counter = 0, ncomp = 0;

  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    call.push_back(root);
    while (!call.empty()) {
      const int v = call.back();
      if (index[v] == -1) {
        index[v] = low[v] = counter++;
        next_edge[v] = outer[v];
        stack.push_back(v);
        on_stack[v] = 1;
      }
      bool descended = false;
      while (next_edge[v] < outer[v + 1]) {
        const int t = inner[next_edge[v]++];
        if (index[t] == -1) {
          call.push_back(t);
          descended = true;
          break;
        }
        if (on_stack[t]) low[v] = std::min(low[v], index[t]);
      }
      if (descended) continue;
      if (low[v] == index[v]) {
        int t;
        do {
          t = stack.back();
          stack.pop_back();
          on_stack[t] = 0;
          comp[t] = ncomp;
        } while (t != v);
        ++ncomp;
      }
      call.pop_back();
      if (!call.empty()) {
        const int parent = call.back();
        low[parent] = std::min(low[parent], low[v]);
      }
    }
  }

  // Renumber by first appearance in node order.
  std::vector<int> relabel(ncomp, -1);
  int next = 0;
  for (int v = 0; v < n; ++v) {
    if (relabel[comp[v]] == -1) relabel[comp[v]] = next++;
    comp[v] = relabel[comp[v]];
  }
  return comp;
}

bool is_strongly_connected(const Graph& g) {
  if (g.num_nodes() == 0) return false;
  const auto comp = strongly_connected_components(g);
  return *std::max_element(comp.begin(), comp.end()) == 0;
}

SubgraphResult largest_scc(const Graph& g) {
  if (g.num_nodes() == 0) return {g, {}};
  const auto comp = strongly_connected_components(g);
  const int ncomp = *std::max_element(comp.begin(), comp.end()) + 1;
  std::vector<int> size(ncomp, 0);
  for (int c : comp) ++size[c];
  // Ids follow smallest member, so the first maximum wins ties.
  const int best = static_cast<int>(std::max_element(size.begin(), size.end()) - size.begin());
  std::vector<int> nodes;
  for (int v = 0; v < g.num_nodes(); ++v) {
    if (comp[v] == best) nodes.push_back(v);
  }
  return {induced_subgraph(g, nodes), nodes};
}

}  // namespace gsp
