#pragma once

#include "graph.hpp"
#include "hj.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace blinks {

using Chain = std::vector<VertexId>;

// A one-boundary completion, carried as its minimal resolution: the boundary
// strict transform plus the resolution chains of its singular points, each
// chain attached to the boundary at its first element.
struct Completion {
  WeightedGraph resolution;
  VertexId boundary;
  std::vector<Chain> chains;
};

struct ValidationIssue {
  std::string code;
  std::string detail;
};
using ValidationReport = std::vector<ValidationIssue>;

inline ChainWeights chain_weights(const WeightedGraph& g, const Chain& ch) {
  ChainWeights w;
  w.reserve(ch.size());
  for (const auto& v : ch) w.push_back(-g.self_int(v));
  return w;
}

inline ValidationReport validate_dlt(const Completion& c) {
  ValidationReport report;
  const auto& g = c.resolution;
  if (!g.has_vertex(c.boundary)) {
    report.push_back({"unknown-boundary", "boundary vertex missing: " + c.boundary});
    return report;
  }
  if (!is_tree(g)) report.push_back({"not-a-tree", "resolution graph must be a connected tree"});

  std::set<VertexId> seen{c.boundary};
  for (const auto& ch : c.chains) {
    if (ch.empty()) {
      report.push_back({"empty-chain", "chain without vertices"});
      continue;
    }
    for (const auto& v : ch) {
      if (!g.has_vertex(v)) {
        report.push_back({"unknown-chain-vertex", v});
        continue;
      }
      if (!seen.insert(v).second) report.push_back({"chain-overlap", v});
      if (g.self_int(v) > -2)
        report.push_back({"chain-not-minimal", v + " has self-intersection > -2"});
    }
    for (std::size_t i = 0; i < ch.size(); ++i) {
      const bool meets_boundary = g.has_vertex(ch[i]) && g.has_edge(ch[i], c.boundary);
      if (i == 0 && !meets_boundary)
        report.push_back({"chain-attachment", ch[i] + " does not meet the boundary"});
      if (i > 0 && meets_boundary)
        report.push_back({"chain-attachment", ch[i] + " meets the boundary in the middle"});
      if (i + 1 < ch.size() && g.has_vertex(ch[i]) && g.has_vertex(ch[i + 1]) &&
          !g.has_edge(ch[i], ch[i + 1]))
        report.push_back({"chain-broken", ch[i] + " and " + ch[i + 1] + " are not adjacent"});
    }
  }
  for (const auto& v : g.order)
    if (!seen.count(v)) report.push_back({"stray-vertex", v});
  if (c.chains.size() > 2)
    report.push_back({"extra-chains", "more than two singular points on the boundary"});
  return report;
}

// -2 + sum(1 - 1/m_i) + n for a boundary curve with n boundary neighbors and
// singular points of the listed orders on it.
inline Rational adjunction_degree(long long neighbors, const std::vector<long long>& orders) {
  if (neighbors < 0) throw std::invalid_argument("adjunction_degree: negative neighbor count");
  Rational deg = Rational(-2 + neighbors);
  for (long long m : orders) {
    if (m < 2) throw std::invalid_argument("adjunction_degree: singularity order below 2");
    deg += Rational(m - 1, m);
  }
  return deg;
}

// Boundary state midway through a run of divisorial contractions: `graph`
// keeps every curve not yet blown down; `boundary` lists the curves still on
// the boundary; curves contracted to singular points are recorded as chains
// hanging off the boundary curve that absorbed them.
struct Intermediate {
  WeightedGraph graph;
  std::set<VertexId> boundary;
  std::map<VertexId, std::vector<Chain>> chains;
};

inline std::vector<VertexId> boundary_neighbors(const Intermediate& it, const VertexId& v) {
  std::vector<VertexId> out;
  for (const auto& u : it.graph.neighbors(v))
    if (it.boundary.count(u)) out.push_back(u);
  return out;
}

inline std::vector<Chain> chains_of(const Intermediate& it, const VertexId& v) {
  auto found = it.chains.find(v);
  return found == it.chains.end() ? std::vector<Chain>{} : found->second;
}

inline std::vector<long long> singularity_orders(const Intermediate& it, const VertexId& v) {
  std::vector<long long> orders;
  for (const auto& ch : chains_of(it, v))
    orders.push_back(hj_contract(chain_weights(it.graph, ch)).n);
  return orders;
}

inline bool is_boundary_extremity(const Intermediate& it, const VertexId& v) {
  if (!it.boundary.count(v)) throw std::invalid_argument("not a boundary vertex: " + v);
  return boundary_neighbors(it, v).size() <= 1;
}

inline bool is_negative_extremal_boundary(const Intermediate& it, const VertexId& v) {
  if (!it.boundary.count(v)) throw std::invalid_argument("not a boundary vertex: " + v);
  const auto nbs = boundary_neighbors(it, v);
  return adjunction_degree(static_cast<long long>(nbs.size()), singularity_orders(it, v)) < 0;
}

inline Intermediate as_intermediate(const Completion& c) {
  Intermediate it;
  it.graph = c.resolution;
  it.boundary = {c.boundary};
  if (!c.chains.empty()) it.chains[c.boundary] = c.chains;
  return it;
}

inline bool is_negative_extremal_boundary(const Completion& c, const VertexId& v) {
  return is_negative_extremal_boundary(as_intermediate(c), v);
}

// Contracts an extremal boundary extremity: a chain-free (-1)-curve blows
// down on the surface, anything else drops to a singular point recorded on
// its unique boundary neighbor.
inline void contract_extremity(Intermediate& it, const VertexId& v) {
  if (!is_boundary_extremity(it, v))
    throw std::invalid_argument("contract_extremity: interior boundary vertex: " + v);
  if (!is_negative_extremal_boundary(it, v))
    throw std::logic_error("contract_extremity: extremity is not extremal: " + v);

  const auto own = chains_of(it, v);
  if (it.graph.self_int(v) == -1 && own.empty()) {
    smooth_contract(it.graph, v);
    it.boundary.erase(v);
    return;
  }
  const auto nbs = boundary_neighbors(it, v);
  if (nbs.size() != 1)
    throw std::logic_error("contract_extremity: no boundary neighbor to absorb " + v);
  Chain record{v};
  for (const auto& ch : own) record.insert(record.end(), ch.begin(), ch.end());
  it.chains[nbs.front()].push_back(std::move(record));
  it.chains.erase(v);
  it.boundary.erase(v);
}

// Log-discrepancy coefficients of the exceptional curves against a boundary:
// exact solve of the adjunction system over the exceptional intersection
// matrix, which must be negative definite.
inline std::map<VertexId, Rational> log_discrepancies(const WeightedGraph& g,
                                                      const std::set<VertexId>& boundary,
                                                      const std::set<VertexId>& exceptional) {
  std::vector<VertexId> exc;
  for (const auto& v : g.order)
    if (exceptional.count(v)) exc.push_back(v);
  if (exc.size() != exceptional.size())
    throw std::invalid_argument("log_discrepancies: unknown exceptional vertex");
  for (const auto& v : boundary)
    if (!g.has_vertex(v)) throw std::invalid_argument("log_discrepancies: unknown boundary vertex");

  const Mat m = intersection_matrix(g, exc);
  if (!is_negative_definite(m))
    throw std::domain_error("log_discrepancies: exceptional lattice is not negative definite");

  Vec rhs(exc.size());
  for (std::size_t j = 0; j < exc.size(); ++j) {
    const VertexId& v = exc[j];
    long long bn = 0;
    for (const auto& u : g.neighbors(v))
      if (boundary.count(u)) ++bn;
    rhs[j] = boundary.count(v) ? Rational(-2 + bn) : Rational(-2 - g.self_int(v) + bn);
  }
  const Vec x = solve_linear(m, std::move(rhs));
  std::map<VertexId, Rational> out;
  for (std::size_t j = 0; j < exc.size(); ++j) out[exc[j]] = x[j];
  return out;
}

// 1 for a smooth completion, the weight of the curve meeting the boundary for
// one singular point; ambiguous (and refused) beyond that.
inline long long completion_index(const Completion& c) {
  if (c.chains.empty()) return 1;
  if (c.chains.size() > 1)
    throw std::domain_error("completion_index: several singular points");
  return boundary_index(chain_weights(c.resolution, c.chains.front()), ChainEnd::First);
}

// Isomorphy-type fingerprint: boundary self-intersection plus the sorted
// multiset of singularity chain weights.
struct CompletionSignature {
  long long boundary_self = 0;
  std::vector<ChainWeights> chains;
  bool operator==(const CompletionSignature&) const = default;
};

inline CompletionSignature completion_signature(const Completion& c) {
  CompletionSignature s;
  s.boundary_self = c.resolution.self_int(c.boundary);
  for (const auto& ch : c.chains) s.chains.push_back(chain_weights(c.resolution, ch));
  std::sort(s.chains.begin(), s.chains.end());
  return s;
}

// Literal equality: same curves with the same self-intersections and the same
// singular chains (chain order immaterial).
inline bool completions_equal(const Completion& a, const Completion& b) {
  if (!(a.resolution == b.resolution) || a.boundary != b.boundary) return false;
  auto ca = a.chains, cb = b.chains;
  std::sort(ca.begin(), ca.end());
  std::sort(cb.begin(), cb.end());
  return ca == cb;
}

inline nlohmann::json completion_to_json(const Completion& c) {
  nlohmann::json j = graph_to_json(c.resolution);
  j["boundary"] = c.boundary;
  j["chains"] = c.chains;
  return j;
}

inline Completion completion_from_json(const nlohmann::json& j) {
  Completion c;
  c.resolution = graph_from_json(j);
  if (!j.contains("boundary") || !j["boundary"].is_string())
    throw std::invalid_argument("completion json: missing boundary");
  c.boundary = j["boundary"].get<std::string>();
  if (j.contains("chains")) {
    if (!j["chains"].is_array()) throw std::invalid_argument("completion json: malformed chains");
    for (const auto& ch : j["chains"]) {
      if (!ch.is_array()) throw std::invalid_argument("completion json: malformed chain");
      Chain chain;
      for (const auto& v : ch) {
        if (!v.is_string()) throw std::invalid_argument("completion json: malformed chain entry");
        chain.push_back(v.get<std::string>());
      }
      c.chains.push_back(std::move(chain));
    }
  }
  return c;
}

}  // namespace blinks
