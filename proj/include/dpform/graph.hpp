// Copyright 2026 The dpform Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPFORM_GRAPH_HPP
#define DPFORM_GRAPH_HPP

#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace dpform {

// Undirected communication topology, restricted to trees. Agents are
// 0-indexed internally; the JSON config uses 1-based ids and converts at
// the boundary. Edges are stored canonically as (a, b) with a < b, labelled
// in lexicographic order. Row k of the incidence matrix carries +1 at the
// lower endpoint of edge k and -1 at the higher one, so the edge error of
// edge (a, b) reads x_a - x_b - d_ab.
//
// Immutable after construction; safe for concurrent reads.
class Graph {
 public:
  struct Edge {
    int a, b;  // a < b
  };

  // An empty placeholder; only graphs returned by build() satisfy the
  // invariants.
  Graph() = default;

  // Validates, canonicalizes and builds adjacency/incidence.
  // Throws InvalidEdge (self-loop, out-of-range, duplicate) or NotATree.
  static Graph build(int n_agents,
                     const std::vector<std::pair<int, int>>& edges);

  int n_agents() const { return n_agents_; }
  int n_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Eigen::MatrixXi& adjacency() const { return adjacency_; }
  const Eigen::MatrixXi& incidence() const { return incidence_; }
  const std::vector<int>& neighbors(int agent) const {
    return neighbors_[agent];
  }
  int degree(int agent) const {
    return static_cast<int>(neighbors_[agent].size());
  }
  // Canonical label of the edge between u and v; throws InvalidEdge when
  // they are not adjacent.
  int edge_index(int u, int v) const;

 private:
  int n_agents_ = 0;
  std::vector<Edge> edges_;
  Eigen::MatrixXi adjacency_;
  Eigen::MatrixXi incidence_;
  Eigen::MatrixXi edge_index_;
  std::vector<std::vector<int>> neighbors_;
};

// True iff the edge list is connected and has exactly n_agents - 1 edges.
// Pure predicate: malformed edges simply yield false for tree-ness checks
// done before validation elsewhere; indices must be in range.
bool is_tree(int n_agents, const std::vector<std::pair<int, int>>& edges);

// Numerical rank of the incidence matrix, SVD with relative tolerance 1e-10.
int incidence_rank(const Graph& graph);

}  // namespace dpform

#endif  // DPFORM_GRAPH_HPP
