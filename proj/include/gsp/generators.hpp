#pragma once

#include <cstdint>
#include <variant>

#include "gsp/graph.hpp"

namespace gsp {

struct ErdosRenyi {
  int n = 0;
  double p = 0.0;
};

// Watts-Strogatz ring lattice with per-edge rewiring probability beta.
struct SmallWorld {
  int n = 0;
  int degree = 0;
  double beta = 0.0;
};

// Preferential attachment grown from a complete graph on m0 nodes.
struct BarabasiAlbert {
  int n = 0;
  int m0 = 0;
  int m = 0;
};

using GraphModel = std::variant<ErdosRenyi, SmallWorld, BarabasiAlbert>;

// Undirected, unit weights, deterministic in (model, seed).
Graph generate_graph(const GraphModel& model, std::uint64_t seed);

Graph erdos_renyi(int n, double p, std::uint64_t seed);
Graph small_world(int n, int degree, double beta, std::uint64_t seed);
Graph barabasi_albert(int n, int m0, int m, std::uint64_t seed);

}  // namespace gsp
