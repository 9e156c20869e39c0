#pragma once

#include "linalg.hpp"

#include <json.hpp>

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace blinks {

using VertexId = std::string;

inline std::pair<VertexId, VertexId> norm_edge(const VertexId& a, const VertexId& b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

// Tree (or forest) of smooth rational curves: vertices carry integer
// self-intersections, edges are single transverse crossings.
struct WeightedGraph {
  std::vector<VertexId> order;  // insertion order, kept for reproducible output
  std::map<VertexId, long long> self;
  std::set<std::pair<VertexId, VertexId>> edge_set;

  bool has_vertex(const VertexId& v) const { return self.count(v) != 0; }

  void add_vertex(const VertexId& v, long long s) {
    if (v.empty()) throw std::invalid_argument("empty vertex id");
    if (has_vertex(v)) throw std::invalid_argument("duplicate vertex id: " + v);
    order.push_back(v);
    self[v] = s;
  }

  long long self_int(const VertexId& v) const {
    auto it = self.find(v);
    if (it == self.end()) throw std::invalid_argument("unknown vertex id: " + v);
    return it->second;
  }

  void set_self(const VertexId& v, long long s) {
    if (!has_vertex(v)) throw std::invalid_argument("unknown vertex id: " + v);
    self[v] = s;
  }

  bool has_edge(const VertexId& a, const VertexId& b) const {
    return edge_set.count(norm_edge(a, b)) != 0;
  }

  void add_edge(const VertexId& a, const VertexId& b) {
    if (!has_vertex(a) || !has_vertex(b))
      throw std::invalid_argument("edge endpoint unknown: " + a + "-" + b);
    if (a == b) throw std::invalid_argument("self-loop rejected: " + a);
    edge_set.insert(norm_edge(a, b));
  }

  void remove_edge(const VertexId& a, const VertexId& b) {
    if (edge_set.erase(norm_edge(a, b)) == 0)
      throw std::invalid_argument("edge absent: " + a + "-" + b);
  }

  void remove_vertex(const VertexId& v) {
    if (!has_vertex(v)) throw std::invalid_argument("unknown vertex id: " + v);
    self.erase(v);
    order.erase(std::find(order.begin(), order.end(), v));
    for (auto it = edge_set.begin(); it != edge_set.end();)
      it = (it->first == v || it->second == v) ? edge_set.erase(it) : std::next(it);
  }

  std::vector<VertexId> neighbors(const VertexId& v) const {
    if (!has_vertex(v)) throw std::invalid_argument("unknown vertex id: " + v);
    std::vector<VertexId> out;
    for (const auto& u : order)
      if (u != v && has_edge(u, v)) out.push_back(u);
    return out;
  }

  std::size_t degree(const VertexId& v) const { return neighbors(v).size(); }
  std::size_t size() const { return order.size(); }

  bool operator==(const WeightedGraph& g) const {
    return self == g.self && edge_set == g.edge_set;
  }
};

inline bool is_connected(const WeightedGraph& g) {
  if (g.order.empty()) return true;
  std::set<VertexId> seen{g.order.front()};
  std::deque<VertexId> todo{g.order.front()};
  while (!todo.empty()) {
    const VertexId v = todo.front();
    todo.pop_front();
    for (const auto& u : g.neighbors(v))
      if (seen.insert(u).second) todo.push_back(u);
  }
  return seen.size() == g.size();
}

inline bool is_tree(const WeightedGraph& g) {
  return is_connected(g) && g.edge_set.size() + 1 == g.size() + (g.order.empty() ? 1 : 0);
}

// Unique path between two vertices of a tree, endpoints included.
inline std::vector<VertexId> tree_path(const WeightedGraph& g, const VertexId& from,
                                       const VertexId& to) {
  if (!g.has_vertex(from) || !g.has_vertex(to))
    throw std::invalid_argument("tree_path: unknown endpoint");
  std::map<VertexId, VertexId> parent;
  std::deque<VertexId> todo{from};
  parent[from] = from;
  while (!todo.empty()) {
    const VertexId v = todo.front();
    todo.pop_front();
    if (v == to) break;
    for (const auto& u : g.neighbors(v))
      if (!parent.count(u)) {
        parent[u] = v;
        todo.push_back(u);
      }
  }
  if (!parent.count(to)) throw std::invalid_argument("tree_path: endpoints disconnected");
  std::vector<VertexId> path{to};
  while (path.back() != from) path.push_back(parent[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

// Vertices reachable from `start` when the edge (cut_a, cut_b) is removed.
inline std::set<VertexId> component_without_edge(const WeightedGraph& g, const VertexId& start,
                                                 const VertexId& cut_a, const VertexId& cut_b) {
  if (!g.has_edge(cut_a, cut_b)) throw std::invalid_argument("component_without_edge: edge absent");
  const auto cut = norm_edge(cut_a, cut_b);
  std::set<VertexId> seen{start};
  std::deque<VertexId> todo{start};
  while (!todo.empty()) {
    const VertexId v = todo.front();
    todo.pop_front();
    for (const auto& u : g.neighbors(v)) {
      if (norm_edge(u, v) == cut) continue;
      if (seen.insert(u).second) todo.push_back(u);
    }
  }
  return seen;
}

// BFS distances from a root, over the subgraph induced by `allowed`.
inline std::map<VertexId, std::size_t> induced_distances(const WeightedGraph& g,
                                                         const VertexId& root,
                                                         const std::set<VertexId>& allowed) {
  std::map<VertexId, std::size_t> dist{{root, 0}};
  std::deque<VertexId> todo{root};
  while (!todo.empty()) {
    const VertexId v = todo.front();
    todo.pop_front();
    for (const auto& u : g.neighbors(v)) {
      if (!allowed.count(u) || dist.count(u)) continue;
      dist[u] = dist[v] + 1;
      todo.push_back(u);
    }
  }
  return dist;
}

// Blows down a (-1)-vertex: every neighbor gains +1 and, when several
// neighbors survive, they become pairwise adjacent.
inline void smooth_contract(WeightedGraph& g, const VertexId& v) {
  if (g.self_int(v) != -1)
    throw std::logic_error("smooth_contract: vertex is not a (-1)-curve: " + v);
  const auto nbs = g.neighbors(v);
  for (const auto& u : nbs) g.set_self(u, g.self_int(u) + 1);
  for (std::size_t i = 0; i < nbs.size(); ++i)
    for (std::size_t j = i + 1; j < nbs.size(); ++j)
      if (!g.has_edge(nbs[i], nbs[j])) g.add_edge(nbs[i], nbs[j]);
  g.remove_vertex(v);
}

inline Mat intersection_matrix(const WeightedGraph& g, const std::vector<VertexId>& subset) {
  const std::size_t n = subset.size();
  Mat m(n, Vec(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    m[i][i] = Rational(g.self_int(subset[i]));
    for (std::size_t j = i + 1; j < n; ++j)
      if (g.has_edge(subset[i], subset[j])) m[i][j] = m[j][i] = 1;
  }
  return m;
}

inline nlohmann::json graph_to_json(const WeightedGraph& g) {
  nlohmann::json vs = nlohmann::json::array();
  for (const auto& v : g.order) vs.push_back({{"id", v}, {"self", g.self_int(v)}});
  nlohmann::json es = nlohmann::json::array();
  for (const auto& [a, b] : g.edge_set) es.push_back({a, b});
  return {{"vertices", vs}, {"edges", es}};
}

inline WeightedGraph graph_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array())
    throw std::invalid_argument("graph json: missing vertex list");
  WeightedGraph g;
  for (const auto& v : j["vertices"]) {
    if (!v.is_object() || !v.contains("id") || !v.contains("self") ||
        !v["id"].is_string() || !v["self"].is_number_integer())
      throw std::invalid_argument("graph json: malformed vertex entry");
    g.add_vertex(v["id"].get<std::string>(), v["self"].get<long long>());
  }
  if (j.contains("edges")) {
    if (!j["edges"].is_array()) throw std::invalid_argument("graph json: malformed edge list");
    for (const auto& e : j["edges"]) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
        throw std::invalid_argument("graph json: malformed edge entry");
      g.add_edge(e[0].get<std::string>(), e[1].get<std::string>());
    }
  }
  return g;
}

}  // namespace blinks
