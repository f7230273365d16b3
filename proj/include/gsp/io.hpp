#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "gsp/graph.hpp"

namespace gsp {

// Matrix Market coordinate real files. "symmetric" maps to an undirected
// graph stored as its lower triangle, "general" to a directed graph.
Graph load_graph(const std::string& path);
void save_graph(const Graph& g, const std::string& path);

Graph read_matrix_market(std::istream& in);
void write_matrix_market(const Graph& g, std::ostream& out);

// Comma separated reals, one point per row, no header.
FeatureMatrix load_features(const std::string& path);
FeatureMatrix read_features(std::istream& in);

// One integer per line; a trailing comma separated column is accepted, so
// "node,label" files work too.
std::vector<int> load_labels(const std::string& path);

// node,value rows with a header line.
void save_signal(const Eigen::VectorXd& f, const std::string& path);
Eigen::VectorXd load_signal(const std::string& path);

}  // namespace gsp
