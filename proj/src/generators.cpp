#include "gsp/generators.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "gsp/errors.hpp"
#include "gsp/random.hpp"

namespace gsp {

Graph erdos_renyi(int n, double p, std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("erdos_renyi: n must be >= 2");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("erdos_renyi: p must lie in [0, 1]");
  Rng rng(mix_seed(seed));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (u(rng) < p) edges.push_back({i, j, 1.0});
    }
  }
  return Graph::from_edges(n, edges, false);
}

Graph small_world(int n, int degree, double beta, std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("small_world: n must be >= 2");
  if (degree < 0 || degree % 2 != 0 || degree >= n) {
    throw InvalidArgument("small_world: degree must be even and < n");
  }
  if (!(beta >= 0.0 && beta <= 1.0)) throw InvalidArgument("small_world: beta must lie in [0, 1]");
  Rng rng(mix_seed(seed));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, n - 1);

  std::vector<std::set<int>> adj(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 1; j <= degree / 2; ++j) {
      const int t = (i + j) % n;
      adj[i].insert(t);
      adj[t].insert(i);
    }
  }
  // Visit ring edges (i, i + j) by lap j, as in the usual construction.
  for (int j = 1; j <= degree / 2; ++j) {
    for (int i = 0; i < n; ++i) {
      const int t = (i + j) % n;
      if (u(rng) >= beta) continue;
      if (!adj[i].count(t)) continue;  // already rewired away
      if (static_cast<int>(adj[i].size()) >= n - 1) continue;  // no free target
      int w = pick(rng);
      while (w == i || adj[i].count(w)) w = pick(rng);
      adj[i].erase(t);
      adj[t].erase(i);
      adj[i].insert(w);
      adj[w].insert(i);
    }
  }
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int t : adj[i]) {
      if (t > i) edges.push_back({i, t, 1.0});
    }
  }
  return Graph::from_edges(n, edges, false);
}

Graph barabasi_albert(int n, int m0, int m, std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("barabasi_albert: n must be >= 2");
  if (!(m >= 2 && m <= m0 && m0 < n)) {
    throw InvalidArgument("barabasi_albert: need 2 <= m <= m0 < n");
  }
  Rng rng(mix_seed(seed));
  std::vector<Edge> edges;
  // Each node appears once per incident edge end, so a uniform draw from
  // `ends` is a degree-proportional draw.
  std::vector<int> ends;
  for (int i = 0; i < m0; ++i) {
    for (int j = i + 1; j < m0; ++j) {
      edges.push_back({i, j, 1.0});
      ends.push_back(i);
      ends.push_back(j);
    }
  }
  std::vector<int> chosen;
  for (int v = m0; v < n; ++v) {
    chosen.clear();
    // Sequential draws, rejecting repeats: weighted sampling without
    // replacement.
    while (static_cast<int>(chosen.size()) < m) {
      std::uniform_int_distribution<size_t> pick(0, ends.size() - 1);
      const int t = ends[pick(rng)];
      if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) chosen.push_back(t);
    }
    for (int t : chosen) {
      edges.push_back({t, v, 1.0});
      ends.push_back(t);
      ends.push_back(v);
    }
  }
  return Graph::from_edges(n, edges, false);
}

Graph generate_graph(const GraphModel& model, std::uint64_t seed) {
  return std::visit(
      [seed](const auto& m) -> Graph {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ErdosRenyi>) {
          return erdos_renyi(m.n, m.p, seed);
        } else if constexpr (std::is_same_v<T, SmallWorld>) {
          return small_world(m.n, m.degree, m.beta, seed);
        } else {
          return barabasi_albert(m.n, m.m0, m.m, seed);
        }
      },
      model);
}

}  // namespace gsp
