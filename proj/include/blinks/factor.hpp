#pragma once

#include "pairs.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace blinks {

// Resolution of a birational map between one-boundary completions: the dual
// tree of the total boundary upstairs, with the strict transforms of the two
// boundaries marked.  Everything except e0 is exceptional over the source,
// everything except e0p over the target.
struct MapResolution {
  WeightedGraph graph;
  VertexId e0;
  VertexId e0p;
};

inline std::set<VertexId> exc_source(const MapResolution& r) {
  std::set<VertexId> out(r.graph.order.begin(), r.graph.order.end());
  out.erase(r.e0);
  return out;
}

inline std::set<VertexId> exc_target(const MapResolution& r) {
  std::set<VertexId> out(r.graph.order.begin(), r.graph.order.end());
  out.erase(r.e0p);
  return out;
}

inline ValidationReport validate_map_constraints(const MapResolution& r) {
  ValidationReport report;
  for (const auto* m : {&r.e0, &r.e0p})
    if (!r.graph.has_vertex(*m)) report.push_back({"unknown-marker", *m});
  if (!report.empty()) return report;
  if (r.e0 == r.e0p)
    report.push_back({"markers-coincide", "map is an isomorphism"});
  if (!is_tree(r.graph))
    report.push_back({"not-a-tree", "resolution graph must be a connected tree"});
  for (const auto& v : r.graph.order) {
    const bool marker = (v == r.e0 || v == r.e0p);
    if (!marker && r.graph.self_int(v) >= 0)
      report.push_back({"nonnegative-curve", v + " would dominate both boundaries"});
    if (!marker && r.graph.self_int(v) == -1)
      report.push_back({"contractible-both-sides", v + " is exceptional on both sides"});
  }
  if (r.graph.degree(r.e0) > 2)
    report.push_back({"marker-degree", r.e0 + " meets more than two curves"});
  if (r.graph.degree(r.e0p) > 2)
    report.push_back({"marker-degree", r.e0p + " meets more than two curves"});
  return report;
}

// The tree path from the source boundary to the target boundary; the map
// factors through one link per edge of this path.
inline std::vector<VertexId> boundary_chain(const MapResolution& r) {
  if (!r.graph.has_vertex(r.e0) || !r.graph.has_vertex(r.e0p))
    throw std::invalid_argument("boundary_chain: unknown marker");
  if (r.e0 == r.e0p) throw std::domain_error("boundary_chain: map is an isomorphism");
  return tree_path(r.graph, r.e0, r.e0p);
}

struct Link {
  VertexId extracted;   // divisor pulled out of the completion on the left
  VertexId contracted;  // divisor blown down into the completion on the right
  Intermediate middle;  // two-boundary surface the link passes through
  Completion left;
  Completion right;
};

struct Factorization {
  bool isomorphism = false;
  std::vector<Link> links;
  std::vector<Completion> completions;  // source, every intermediate, target
};

namespace detail {

// Blow down every (-1)-curve strictly beyond the cut edge (keep, far); the
// cut edge only selects the side, contractions see the whole graph.
inline void contract_far_side(WeightedGraph& g, const VertexId& keep, const VertexId& far) {
  std::set<VertexId> side;
  for (const auto& v : component_without_edge(g, far, keep, far)) side.insert(v);
  if (side.count(keep)) throw std::logic_error("contract_far_side: cut edge does not separate");

  std::map<VertexId, long long> near_before;
  for (const auto& v : g.order)
    if (!side.count(v) && v != keep) near_before[v] = g.self_int(v);

  for (;;) {
    std::optional<VertexId> pick;
    for (const auto& v : g.order)
      if (side.count(v) && g.self_int(v) == -1) { pick = v; break; }
    if (!pick) break;
    smooth_contract(g, *pick);
    side.erase(*pick);
  }
  for (const auto& v : side)
    if (g.self_int(v) > -2)
      throw std::logic_error("contract_far_side: remnant " + v + " is not minimal");
  for (const auto& [v, s] : near_before)
    if (!g.has_vertex(v) || g.self_int(v) != s)
      throw std::logic_error("contract_far_side: near side changed at " + v);
}

// Tie-break policy for picking the next extremity; the outcome is the same
// either way (exercised by tests), the knob only exists to prove that.
enum class ContractionOrder { NearFirst, FarFirst };

// Runs boundary contractions until only the two markers remain on the
// boundary.  Deterministic pick: induced distance to `left`, then vertex id.
inline Intermediate run_contractions(WeightedGraph graph, const VertexId& left,
                                     const VertexId& right,
                                     ContractionOrder order = ContractionOrder::NearFirst) {
  Intermediate it;
  it.boundary.insert(graph.order.begin(), graph.order.end());
  it.graph = std::move(graph);
  for (;;) {
    std::set<VertexId> allowed = it.boundary;
    const auto dist = induced_distances(it.graph, left, allowed);
    std::optional<VertexId> pick;
    std::size_t pick_dist = 0;
    for (const auto& v : it.graph.order) {
      if (!it.boundary.count(v) || v == left || v == right) continue;
      if (!is_boundary_extremity(it, v)) continue;
      auto found = dist.find(v);
      const std::size_t d =
          found == dist.end() ? std::numeric_limits<std::size_t>::max() - 1 : found->second;
      const bool better =
          order == ContractionOrder::NearFirst
              ? (!pick || d < pick_dist || (d == pick_dist && v < *pick))
              : (!pick || d > pick_dist || (d == pick_dist && v > *pick));
      if (better) {
        pick = v;
        pick_dist = d;
      }
    }
    if (!pick) break;
    if (!is_negative_extremal_boundary(it, *pick))
      throw std::logic_error("run_contractions: extremity " + *pick + " is not extremal");
    contract_extremity(it, *pick);
  }
  if (it.boundary != std::set<VertexId>{left, right})
    throw std::logic_error("run_contractions: boundary did not shrink to the markers");
  for (const auto& [v, chs] : it.chains)
    if (chs.size() > 1)
      throw std::logic_error("run_contractions: boundary " + v +
                             " supports more than one singular point");
  return it;
}

// Blows down every non-marker (-1)-curve until none remain.
inline void reduce_graph(WeightedGraph& g, const VertexId& e0, const VertexId& e0p) {
  for (;;) {
    std::optional<VertexId> pick;
    for (const auto& v : g.order)
      if (v != e0 && v != e0p && g.self_int(v) == -1) { pick = v; break; }
    if (!pick) break;
    smooth_contract(g, *pick);
  }
}

}  // namespace detail

// Contracts the marker m (with its singular chain, if any) out of a
// two-boundary intermediate, yielding the completion of the other boundary.
inline Completion contract_marker(const Intermediate& z, const VertexId& m) {
  if (z.boundary.size() != 2 || !z.boundary.count(m))
    throw std::invalid_argument("contract_marker: need a two-boundary intermediate containing " + m);
  VertexId survivor;
  for (const auto& v : z.boundary)
    if (v != m) survivor = v;

  WeightedGraph g = z.graph;
  std::set<VertexId> k{m};
  for (const auto& ch : chains_of(z, m)) k.insert(ch.begin(), ch.end());
  for (;;) {
    std::optional<VertexId> pick;
    for (const auto& v : g.order)
      if (k.count(v) && g.self_int(v) == -1) { pick = v; break; }
    if (!pick) break;
    smooth_contract(g, *pick);
    k.erase(*pick);
  }

  Completion c;
  c.boundary = survivor;
  c.chains = chains_of(z, survivor);
  if (!k.empty()) {
    Chain leftover;
    std::optional<VertexId> start;
    for (const auto& v : k) {
      if (g.self_int(v) > -2)
        throw std::logic_error("contract_marker: leftover " + v + " is not minimal");
      if (g.has_edge(v, survivor)) {
        if (start) throw std::logic_error("contract_marker: leftover meets the boundary twice");
        start = v;
      }
    }
    if (!start) throw std::logic_error("contract_marker: leftover misses the boundary");
    std::set<VertexId> todo = k;
    VertexId cur = *start;
    for (;;) {
      leftover.push_back(cur);
      todo.erase(cur);
      std::optional<VertexId> next;
      for (const auto& u : g.neighbors(cur))
        if (todo.count(u)) {
          if (next) throw std::logic_error("contract_marker: leftover is not a chain");
          next = u;
        }
      if (!next) break;
      cur = *next;
    }
    if (!todo.empty()) throw std::logic_error("contract_marker: leftover is disconnected");
    c.chains.push_back(std::move(leftover));
  }

  std::set<VertexId> keep{survivor};
  for (const auto& ch : c.chains) keep.insert(ch.begin(), ch.end());
  WeightedGraph res;
  for (const auto& v : g.order)
    if (keep.count(v)) res.add_vertex(v, g.self_int(v));
  for (const auto& [a, b] : g.edge_set)
    if (keep.count(a) && keep.count(b)) res.add_edge(a, b);
  c.resolution = std::move(res);

  const auto issues = validate_dlt(c);
  if (!issues.empty())
    throw std::logic_error("contract_marker: completion invalid: " + issues.front().code);
  return c;
}

// Decomposes the map into elementary links, one per edge of the boundary
// chain.  Each step blows down the far side of the current first chain edge,
// contracts the boundary onto the two markers, and reads both completions off
// the resulting two-boundary surface.
inline Factorization factorize(const MapResolution& input,
                               detail::ContractionOrder order =
                                   detail::ContractionOrder::NearFirst) {
  if (input.graph.has_vertex(input.e0) && input.e0 == input.e0p) {
    Factorization out;
    out.isomorphism = true;
    return out;
  }
  {
    const auto report = validate_map_constraints(input);
    if (!report.empty())
      throw std::invalid_argument("factorize: " + report.front().code + ": " +
                                  report.front().detail);
  }
  const std::size_t total = boundary_chain(input).size() - 1;

  Factorization out;
  MapResolution cur = input;
  for (;;) {
    const auto chain = tree_path(cur.graph, cur.e0, cur.e0p);
    const VertexId left = chain[0];
    const VertexId right = chain[1];

    WeightedGraph y = cur.graph;
    if (chain.size() > 2) detail::contract_far_side(y, right, chain[2]);

    Intermediate z = detail::run_contractions(std::move(y), left, right, order);
    Link link;
    link.contracted = left;
    link.extracted = right;
    link.left = contract_marker(z, right);
    link.right = contract_marker(z, left);
    link.middle = std::move(z);

    if (out.links.empty()) {
      out.completions.push_back(link.left);
    } else if (!completions_equal(link.left, out.links.back().right)) {
      throw std::logic_error("factorize: adjacent links disagree on the shared completion");
    }
    out.completions.push_back(link.right);
    out.links.push_back(std::move(link));

    if (chain.size() == 2) break;
    cur.e0 = right;
    detail::reduce_graph(cur.graph, cur.e0, cur.e0p);
    const auto advanced = tree_path(cur.graph, cur.e0, cur.e0p);
    if (advanced != std::vector<VertexId>(chain.begin() + 1, chain.end()))
      throw std::logic_error("factorize: boundary chain drifted after reduction");
  }

  if (out.links.size() != total)
    throw std::logic_error("factorize: link count does not match the boundary chain");
  if (out.completions.front().boundary != input.e0 ||
      out.completions.back().boundary != input.e0p)
    throw std::logic_error("factorize: end completions lost the boundary markers");
  for (const auto& c : out.completions)
    if (c.chains.size() > 2)
      throw std::logic_error("factorize: completion with more than two singular points");
  return out;
}

// A factorization is triangular when every interior completion is singular.
inline bool is_triangular(const Factorization& f) {
  if (f.isomorphism) return false;
  for (std::size_t i = 1; i + 1 < f.completions.size(); ++i)
    if (f.completions[i].chains.empty()) return false;
  return true;
}

inline std::vector<long long> link_indices(const Factorization& f) {
  if (f.isomorphism) return {1};
  if (f.completions.empty()) throw std::invalid_argument("link_indices: empty factorization");
  if (!f.completions.front().chains.empty())
    throw std::invalid_argument("link_indices: source completion is not smooth");
  const long long d = f.completions.front().resolution.self_int(f.completions.front().boundary);
  std::vector<long long> idx;
  idx.reserve(f.completions.size());
  for (const auto& c : f.completions) idx.push_back(completion_index(c));
  if (d <= 0)
    for (long long m : idx)
      if (m != 1)
        throw std::domain_error("link_indices: nonpositive boundary degree with singular steps");
  return idx;
}

enum class Choice { AtSingularPoint, Elsewhere };

// Walks the index automaton: from a smooth state both choices climb to 2;
// above that, blowing up the singular point climbs one step and any other
// base point starts a forced descent back to 1.
inline std::vector<long long> simulate_indices(long long d, const std::vector<Choice>& choices) {
  if (d < 1) throw std::invalid_argument("simulate_indices: boundary degree must be positive");
  std::vector<long long> states{1};
  bool descending = false;
  for (const Choice c : choices) {
    const long long m = states.back();
    long long next;
    if (m == 1) {
      next = 2;
      descending = false;
    } else if (c == Choice::AtSingularPoint) {
      if (descending)
        throw std::invalid_argument("simulate_indices: ascent after the descent started");
      next = m + 1;
    } else {
      next = m - 1;
      descending = next >= 2;
    }
    states.push_back(next);
  }
  return states;
}

// Minimal resolution of the index-k triangular self-map of the degree-d
// completion: two (-1)-sections joined by a chain of 2k-3 (-2)-curves, with
// the (-k)-curve and its (d-1) trailing (-2)-curves hanging off the center.
inline MapResolution build_triangular_resolution(long long d, long long k,
                                                 const std::string& prefix = "") {
  if (d < 1) throw std::invalid_argument("build_triangular_resolution: degree must be positive");
  if (k < 2) throw std::invalid_argument("build_triangular_resolution: index must be at least 2");
  MapResolution r;
  auto id = [&prefix](const std::string& base) { return prefix + base; };
  r.e0 = id("E0");
  r.e0p = id("E0p");
  r.graph.add_vertex(r.e0, -1);
  VertexId prev = r.e0;
  for (long long i = 1; i <= k - 2; ++i) {
    const VertexId a = id("A" + std::to_string(i));
    r.graph.add_vertex(a, -2);
    r.graph.add_edge(prev, a);
    prev = a;
  }
  const VertexId center = id("M");
  r.graph.add_vertex(center, -2);
  r.graph.add_edge(prev, center);
  prev = center;
  for (long long i = k - 2; i >= 1; --i) {
    const VertexId b = id("B" + std::to_string(i));
    r.graph.add_vertex(b, -2);
    r.graph.add_edge(prev, b);
    prev = b;
  }
  r.graph.add_vertex(r.e0p, -1);
  r.graph.add_edge(prev, r.e0p);

  r.graph.add_vertex(id("C"), -k);
  r.graph.add_edge(center, id("C"));
  prev = id("C");
  for (long long i = 1; i <= d - 1; ++i) {
    const VertexId dd = id("D" + std::to_string(i));
    r.graph.add_vertex(dd, -2);
    r.graph.add_edge(prev, dd);
    prev = dd;
  }
  return r;
}

// Glues two resolutions end to start, identifying g's source boundary with
// f's target boundary; the identified curve carries both self-intersections
// corrected by the boundary degree.
inline MapResolution glue_resolutions(const MapResolution& f, const MapResolution& g,
                                      long long d) {
  MapResolution out;
  out.graph = f.graph;
  out.e0 = f.e0;
  out.e0p = g.e0p;
  const VertexId middle = f.e0p;
  out.graph.set_self(middle, f.graph.self_int(f.e0p) + g.graph.self_int(g.e0) - d);
  for (const auto& v : g.graph.order) {
    if (v == g.e0) continue;
    if (out.graph.has_vertex(v))
      throw std::invalid_argument("glue_resolutions: vertex id collision: " + v);
    out.graph.add_vertex(v, g.graph.self_int(v));
  }
  for (const auto& [a, b] : g.graph.edge_set) {
    const VertexId aa = (a == g.e0) ? middle : a;
    const VertexId bb = (b == g.e0) ? middle : b;
    out.graph.add_edge(aa, bb);
  }
  return out;
}

// Blows down every non-marker (-1)-curve of a glued resolution, restoring
// minimality.
inline MapResolution reduce_resolution(MapResolution r) {
  if (!r.graph.has_vertex(r.e0) || !r.graph.has_vertex(r.e0p))
    throw std::invalid_argument("reduce_resolution: unknown marker");
  detail::reduce_graph(r.graph, r.e0, r.e0p);
  return r;
}

// Chains triangular resolutions with the given index peaks into one map
// resolution over the degree-d completion.
inline MapResolution build_peaks_resolution(long long d, const std::vector<long long>& peaks) {
  if (peaks.empty()) throw std::invalid_argument("build_peaks_resolution: no peaks");
  MapResolution r = build_triangular_resolution(d, peaks[0], "P1_");
  for (std::size_t i = 1; i < peaks.size(); ++i) {
    const std::string prefix = "P" + std::to_string(i + 1) + "_";
    r = glue_resolutions(r, build_triangular_resolution(d, peaks[i], prefix), d);
  }
  return r;
}

inline std::vector<Choice> choices_from_peaks(const std::vector<long long>& peaks) {
  std::vector<Choice> out;
  for (long long k : peaks) {
    for (long long i = 1; i < k; ++i) out.push_back(Choice::AtSingularPoint);
    for (long long i = 1; i < k; ++i) out.push_back(Choice::Elsewhere);
  }
  return out;
}

struct LambdaResult {
  std::map<VertexId, Rational> lambda;
  Rational max;
  std::set<VertexId> argmax;
};

// lambda_i = m_i / a_i from total-transform multiplicities and positive log
// discrepancies.
inline LambdaResult sarkisov_lambda(const std::map<VertexId, Rational>& discrepancies,
                                    const std::map<VertexId, long long>& multiplicities) {
  if (discrepancies.empty())
    throw std::invalid_argument("sarkisov_lambda: no exceptional curves");
  LambdaResult out;
  bool first = true;
  for (const auto& [v, a] : discrepancies) {
    auto found = multiplicities.find(v);
    if (found == multiplicities.end())
      throw std::invalid_argument("sarkisov_lambda: missing multiplicity for " + v);
    if (a <= 0) throw std::invalid_argument("sarkisov_lambda: nonpositive discrepancy at " + v);
    const Rational l = Rational(found->second) / a;
    out.lambda[v] = l;
    if (first || l > out.max) {
      out.max = l;
      first = false;
    }
  }
  if (multiplicities.size() != discrepancies.size())
    throw std::invalid_argument("sarkisov_lambda: multiplicity for unknown curve");
  for (const auto& [v, l] : out.lambda)
    if (l == out.max) out.argmax.insert(v);
  return out;
}

// The first link must extract a divisor attaining the maximal lambda.
inline bool check_maximal_extraction(const Factorization& f, const LambdaResult& lambda) {
  if (f.isomorphism || f.links.empty())
    throw std::invalid_argument("check_maximal_extraction: no links");
  const VertexId& e1 = f.links.front().extracted;
  if (!lambda.lambda.count(e1))
    throw std::invalid_argument("check_maximal_extraction: no lambda for " + e1);
  return lambda.argmax.count(e1) > 0;
}

enum class ConcatVerdict { Concatenates, MustReduce };

// Two factorizations concatenate cleanly iff the middle base point is smooth
// and in general position; either way the middle completions must agree.
inline ConcatVerdict concat_check(const MapResolution& f, const MapResolution& g,
                                  bool smooth_middle_point, bool general_position) {
  const Factorization ff = factorize(f);
  const Factorization fg = factorize(g);
  if (ff.isomorphism || fg.isomorphism)
    throw std::invalid_argument("concat_check: isomorphism factor");
  if (!(completion_signature(ff.completions.back()) ==
        completion_signature(fg.completions.front())))
    throw std::invalid_argument("concat_check: middle completions disagree");
  return (smooth_middle_point && general_position) ? ConcatVerdict::Concatenates
                                                   : ConcatVerdict::MustReduce;
}

inline nlohmann::json resolution_to_json(const MapResolution& r) {
  nlohmann::json j = graph_to_json(r.graph);
  j["e0"] = r.e0;
  j["e0p"] = r.e0p;
  return j;
}

inline MapResolution resolution_from_json(const nlohmann::json& j) {
  MapResolution r;
  r.graph = graph_from_json(j);
  for (const char* key : {"e0", "e0p"})
    if (!j.contains(key) || !j[key].is_string())
      throw std::invalid_argument("resolution json: missing marker " + std::string(key));
  r.e0 = j["e0"].get<std::string>();
  r.e0p = j["e0p"].get<std::string>();
  return r;
}

inline nlohmann::json factorization_to_json(const Factorization& f) {
  nlohmann::json j;
  j["isomorphism"] = f.isomorphism;
  j["links"] = nlohmann::json::array();
  for (const auto& l : f.links) {
    nlohmann::json lj;
    lj["extracted"] = l.extracted;
    lj["contracted"] = l.contracted;
    j["links"].push_back(std::move(lj));
  }
  j["completions"] = nlohmann::json::array();
  for (const auto& c : f.completions) j["completions"].push_back(completion_to_json(c));
  if (f.isomorphism || (!f.completions.empty() && f.completions.front().chains.empty()))
    j["indices"] = link_indices(f);
  return j;
}

}  // namespace blinks
