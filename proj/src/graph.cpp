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

#include "dpform/graph.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "dpform/errors.hpp"

namespace dpform {

namespace {

std::vector<Graph::Edge> canonicalize(
    int n_agents, const std::vector<std::pair<int, int>>& edges) {
  std::vector<Graph::Edge> out;
  out.reserve(edges.size());
  std::set<std::pair<int, int>> seen;
  for (const auto& [i, j] : edges) {
    if (i < 0 || j < 0 || i >= n_agents || j >= n_agents) {
      throw InvalidEdge("edge (" + std::to_string(i + 1) + "," +
                        std::to_string(j + 1) + ") has an out-of-range node");
    }
    if (i == j) {
      throw InvalidEdge("self-loop at node " + std::to_string(i + 1));
    }
    const auto key = std::minmax(i, j);
    if (!seen.insert(key).second) {
      throw InvalidEdge("duplicate edge (" + std::to_string(key.first + 1) +
                        "," + std::to_string(key.second + 1) + ")");
    }
    out.push_back({key.first, key.second});
  }
  std::sort(out.begin(), out.end(), [](const auto& lhs, const auto& rhs) {
    return std::pair(lhs.a, lhs.b) < std::pair(rhs.a, rhs.b);
  });
  return out;
}

bool connected(int n_agents, const std::vector<Graph::Edge>& edges) {
  if (n_agents <= 1) return true;
  std::vector<std::vector<int>> adj(n_agents);
  for (const auto& e : edges) {
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  std::vector<char> visited(n_agents, 0);
  std::vector<int> stack = {0};
  visited[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w : adj[v]) {
      if (!visited[w]) {
        visited[w] = 1;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count == n_agents;
}

}  // namespace

Graph Graph::build(int n_agents,
                   const std::vector<std::pair<int, int>>& edges) {
  if (n_agents < 1) {
    throw InvalidEdge("n_agents must be positive");
  }
  Graph g;
  g.n_agents_ = n_agents;
  g.edges_ = canonicalize(n_agents, edges);
  if (static_cast<int>(g.edges_.size()) != n_agents - 1 ||
      !connected(n_agents, g.edges_)) {
    throw NotATree("graph with " + std::to_string(n_agents) + " nodes and " +
                   std::to_string(g.edges_.size()) +
                   " edges is not a spanning tree");
  }
  g.adjacency_ = Eigen::MatrixXi::Zero(n_agents, n_agents);
  g.incidence_ = Eigen::MatrixXi::Zero(g.n_edges(), n_agents);
  g.edge_index_ = Eigen::MatrixXi::Constant(n_agents, n_agents, -1);
  g.neighbors_.assign(n_agents, {});
  for (int k = 0; k < g.n_edges(); ++k) {
    const auto& e = g.edges_[k];
    g.adjacency_(e.a, e.b) = 1;
    g.adjacency_(e.b, e.a) = 1;
    g.incidence_(k, e.a) = 1;
    g.incidence_(k, e.b) = -1;
    g.edge_index_(e.a, e.b) = k;
    g.edge_index_(e.b, e.a) = k;
    g.neighbors_[e.a].push_back(e.b);
    g.neighbors_[e.b].push_back(e.a);
  }
  for (auto& list : g.neighbors_) std::sort(list.begin(), list.end());
  return g;
}

int Graph::edge_index(int u, int v) const {
  if (u < 0 || v < 0 || u >= n_agents_ || v >= n_agents_ ||
      edge_index_(u, v) < 0) {
    throw InvalidEdge("nodes " + std::to_string(u + 1) + " and " +
                      std::to_string(v + 1) + " are not adjacent");
  }
  return edge_index_(u, v);
}

bool is_tree(int n_agents, const std::vector<std::pair<int, int>>& edges) {
  if (n_agents < 1) return false;
  std::vector<Graph::Edge> canonical;
  try {
    canonical = canonicalize(n_agents, edges);
  } catch (const InvalidEdge&) {
    return false;
  }
  return static_cast<int>(canonical.size()) == n_agents - 1 &&
         connected(n_agents, canonical);
}

int incidence_rank(const Graph& graph) {
  if (graph.n_edges() == 0) return 0;
  const Eigen::MatrixXd b = graph.incidence().cast<double>();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b);
  const auto& sv = svd.singularValues();
  const double tol = 1e-10 * sv(0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol) ++rank;
  }
  return rank;
}

}  // namespace dpform
