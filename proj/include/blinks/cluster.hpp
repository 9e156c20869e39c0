#pragma once

#include "graph.hpp"

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace blinks {

// A center to blow up: in the interior of the surface (no incident curve),
// on one curve, or at the node of two crossing curves; plus the multiplicity
// that each registered auxiliary curve has at the center.
struct PointSpec {
  std::vector<VertexId> on;
  std::map<std::string, long long> aux;
};

struct ClusterState {
  WeightedGraph graph;
  std::set<VertexId> exceptional;  // vertices produced by blow-ups
  std::vector<std::string> aux_names;
  // aux curve -> exceptional vertex -> total-transform coefficient
  std::map<std::string, std::map<VertexId, long long>> coeffs;
};

inline ClusterState make_cluster(WeightedGraph initial, std::vector<std::string> aux_names) {
  ClusterState st;
  st.graph = std::move(initial);
  st.aux_names = std::move(aux_names);
  for (const auto& h : st.aux_names) st.coeffs[h];
  return st;
}

inline ClusterState blow_up(ClusterState st, const PointSpec& p, const VertexId& id) {
  if (st.graph.has_vertex(id)) throw std::invalid_argument("blow_up: id already used: " + id);
  if (p.on.size() > 2) throw std::invalid_argument("blow_up: center on more than two curves");
  for (const auto& c : p.on)
    if (!st.graph.has_vertex(c)) throw std::invalid_argument("blow_up: unknown curve: " + c);
  if (p.on.size() == 2) {
    if (p.on[0] == p.on[1]) throw std::invalid_argument("blow_up: repeated incident curve");
    if (!st.graph.has_edge(p.on[0], p.on[1]))
      throw std::invalid_argument("blow_up: curves do not currently intersect: " + p.on[0] +
                                  "-" + p.on[1]);
  }
  for (const auto& [h, m] : p.aux) {
    if (!st.coeffs.count(h)) throw std::invalid_argument("blow_up: unregistered aux curve: " + h);
    if (m < 0) throw std::invalid_argument("blow_up: negative multiplicity for " + h);
  }

  st.graph.add_vertex(id, -1);
  for (const auto& c : p.on) st.graph.set_self(c, st.graph.self_int(c) - 1);
  if (p.on.size() == 2) st.graph.remove_edge(p.on[0], p.on[1]);
  for (const auto& c : p.on) st.graph.add_edge(id, c);

  for (const auto& h : st.aux_names) {
    long long coeff = 0;
    if (auto it = p.aux.find(h); it != p.aux.end()) coeff = it->second;
    for (const auto& c : p.on)
      if (st.exceptional.count(c)) coeff += st.coeffs[h][c];
    st.coeffs[h][id] = coeff;
  }
  st.exceptional.insert(id);
  return st;
}

inline std::map<VertexId, long long> total_transform_coeffs(const ClusterState& st,
                                                            const std::string& aux) {
  auto it = st.coeffs.find(aux);
  if (it == st.coeffs.end()) throw std::invalid_argument("unknown aux curve: " + aux);
  return it->second;
}

// Script format:
//   {"initial": <graph>, "aux": ["H", ...],
//    "steps": [{"new": "C1", "on": ["D"], "aux": {"H": 2}}, ...]}
inline ClusterState run_cluster_script(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("initial") || !j.contains("steps"))
    throw std::invalid_argument("cluster script: missing initial graph or steps");
  std::vector<std::string> aux;
  if (j.contains("aux")) {
    if (!j["aux"].is_array()) throw std::invalid_argument("cluster script: malformed aux list");
    for (const auto& a : j["aux"]) {
      if (!a.is_string()) throw std::invalid_argument("cluster script: malformed aux name");
      aux.push_back(a.get<std::string>());
    }
  }
  ClusterState st = make_cluster(graph_from_json(j["initial"]), aux);
  if (!j["steps"].is_array()) throw std::invalid_argument("cluster script: malformed steps");
  for (const auto& s : j["steps"]) {
    if (!s.is_object() || !s.contains("new") || !s["new"].is_string())
      throw std::invalid_argument("cluster script: step without new id");
    PointSpec p;
    if (s.contains("on")) {
      if (!s["on"].is_array()) throw std::invalid_argument("cluster script: malformed 'on'");
      for (const auto& c : s["on"]) {
        if (!c.is_string()) throw std::invalid_argument("cluster script: malformed 'on' entry");
        p.on.push_back(c.get<std::string>());
      }
    }
    if (s.contains("aux")) {
      if (!s["aux"].is_object()) throw std::invalid_argument("cluster script: malformed step aux");
      for (const auto& [h, m] : s["aux"].items()) {
        if (!m.is_number_integer())
          throw std::invalid_argument("cluster script: malformed multiplicity for " + h);
        p.aux[h] = m.get<long long>();
      }
    }
    st = blow_up(std::move(st), p, s["new"].get<std::string>());
  }
  return st;
}

}  // namespace blinks
