#include <catch2/catch_amalgamated.hpp>

#include <blinks/pairs.hpp>

#include <random>

#include "fixtures.hpp"

using namespace blinks;

namespace {

Completion two_two_completion() {
  // boundary with one A-type point resolved by two (-2)-curves
  Completion c;
  c.resolution.add_vertex("B", 0);
  c.resolution.add_vertex("P", -2);
  c.resolution.add_vertex("Q", -2);
  c.resolution.add_edge("B", "P");
  c.resolution.add_edge("P", "Q");
  c.boundary = "B";
  c.chains = {{"P", "Q"}};
  return c;
}

}  // namespace

TEST_CASE("adjunction degree closed forms") {
  CHECK(adjunction_degree(0, {}) == Rational(-2));
  CHECK(adjunction_degree(1, {}) == Rational(-1));
  CHECK(adjunction_degree(2, {}) == Rational(0));
  CHECK(adjunction_degree(1, {2, 2}) == Rational(0));
  for (long long n = 2; n <= 9; ++n)
    CHECK(adjunction_degree(1, {n}) == Rational(-1, n));
  CHECK_THROWS_AS(adjunction_degree(-1, {}), std::invalid_argument);
  CHECK_THROWS_AS(adjunction_degree(1, {1}), std::invalid_argument);
}

TEST_CASE("dlt validation accepts the reference completion") {
  CHECK(validate_dlt(two_two_completion()).empty());
}

TEST_CASE("dlt validation flags structural defects") {
  auto has = [](const ValidationReport& r, const std::string& code) {
    for (const auto& i : r)
      if (i.code == code) return true;
    return false;
  };

  Completion c = two_two_completion();
  c.boundary = "Z";
  CHECK(has(validate_dlt(c), "unknown-boundary"));

  c = two_two_completion();
  c.chains = {{"Q", "P"}};  // detached head, middle touches boundary? no: Q not adjacent to B
  CHECK(has(validate_dlt(c), "chain-attachment"));

  c = two_two_completion();
  c.resolution.set_self("P", -1);
  CHECK(has(validate_dlt(c), "chain-not-minimal"));

  c = two_two_completion();
  c.chains = {{"P"}};
  CHECK(has(validate_dlt(c), "stray-vertex"));

  c = two_two_completion();
  c.chains = {{"P", "Q"}, {"P"}};
  CHECK(has(validate_dlt(c), "chain-overlap"));

  c = two_two_completion();
  c.resolution.add_vertex("R", -3);
  c.resolution.add_edge("B", "R");
  c.resolution.add_vertex("S", -3);
  c.resolution.add_edge("B", "S");
  c.resolution.add_vertex("T", -3);
  c.resolution.add_edge("B", "T");
  c.chains = {{"P", "Q"}, {"R"}, {"S"}, {"T"}};
  CHECK(has(validate_dlt(c), "extra-chains"));

  c = two_two_completion();
  c.resolution.add_edge("Q", "B");  // chain closes up on the boundary
  auto rep = validate_dlt(c);
  CHECK((has(rep, "chain-attachment") || has(rep, "not-a-tree")));
}

TEST_CASE("log discrepancies match the tridiagonal chain solve") {
  std::mt19937 rng(4155);
  std::uniform_int_distribution<int> len_dist(1, 7);
  std::uniform_int_distribution<long long> w_dist(2, 6);
  for (int iter = 0; iter < 200; ++iter) {
    const int len = len_dist(rng);
    ChainWeights w;
    WeightedGraph g;
    std::vector<VertexId> ids;
    for (int i = 0; i < len; ++i) {
      w.push_back(w_dist(rng));
      ids.push_back("V" + std::to_string(i));
      g.add_vertex(ids.back(), -w.back());
      if (i > 0) g.add_edge(ids[i - 1], ids[i]);
    }
    const auto direct = chain_discrepancies(w);
    const auto solved =
        log_discrepancies(g, {}, std::set<VertexId>(ids.begin(), ids.end()));
    for (int i = 0; i < len; ++i) CHECK(solved.at(ids[i]) == direct[i]);
  }
}

TEST_CASE("log discrepancies of the quadratic shift configuration") {
  const auto st = quadratic_shift_cluster();
  const auto& g = st.graph;
  std::set<VertexId> boundary(g.order.begin(), g.order.end());
  const std::set<VertexId> exceptional{"C1", "C2", "C3", "C4"};
  const auto a = log_discrepancies(g, boundary, exceptional);
  CHECK(a.at("C1") == Rational(1));
  CHECK(a.at("C2") == Rational(1));
  CHECK(a.at("C3") == Rational(1));
  CHECK(a.at("C4") == Rational(2));
}

TEST_CASE("log discrepancies reject indefinite lattices") {
  WeightedGraph g;
  g.add_vertex("A", 0);
  CHECK_THROWS_AS(log_discrepancies(g, {}, {"A"}), std::domain_error);
  WeightedGraph h;
  h.add_vertex("A", -2);
  h.add_vertex("B", -1);
  h.add_vertex("C", -2);
  h.add_edge("A", "B");
  h.add_edge("B", "C");
  CHECK_THROWS_AS(log_discrepancies(h, {}, {"A", "B", "C"}), std::domain_error);
  CHECK_THROWS_AS(log_discrepancies(h, {}, {"A", "Z"}), std::invalid_argument);
  CHECK_THROWS_AS(log_discrepancies(h, {"Z"}, {"A"}), std::invalid_argument);
}

TEST_CASE("boundary extremities and extremality") {
  Intermediate it;
  it.graph.add_vertex("L", -1);
  it.graph.add_vertex("V", -2);
  it.graph.add_vertex("R", -1);
  it.graph.add_vertex("X", -2);
  it.graph.add_edge("L", "V");
  it.graph.add_edge("V", "R");
  it.graph.add_edge("V", "X");
  it.boundary = {"L", "V", "R"};
  it.chains["V"] = {{"X"}};

  CHECK(is_boundary_extremity(it, "L"));
  CHECK_FALSE(is_boundary_extremity(it, "V"));
  CHECK(is_negative_extremal_boundary(it, "L"));
  // two boundary neighbors and a singular point push the degree to 1/2
  CHECK_FALSE(is_negative_extremal_boundary(it, "V"));
  CHECK_THROWS_AS(is_boundary_extremity(it, "X"), std::invalid_argument);

  const Completion c = two_two_completion();
  CHECK(is_negative_extremal_boundary(c, "B"));
}

TEST_CASE("contracting a bare (-1)-extremity blows it down") {
  Intermediate it;
  it.graph.add_vertex("A", -1);
  it.graph.add_vertex("B", -3);
  it.graph.add_edge("A", "B");
  it.boundary = {"A", "B"};
  contract_extremity(it, "A");
  CHECK(it.boundary == std::set<VertexId>{"B"});
  CHECK_FALSE(it.graph.has_vertex("A"));
  CHECK(it.graph.self_int("B") == -2);
  CHECK(it.chains.empty());
}

TEST_CASE("contracting a minimal extremity records a singular chain") {
  Intermediate it;
  it.graph.add_vertex("A", -3);
  it.graph.add_vertex("B", -1);
  it.graph.add_vertex("X", -2);
  it.graph.add_edge("A", "B");
  it.graph.add_edge("A", "X");
  it.boundary = {"A", "B"};
  it.chains["A"] = {{"X"}};
  contract_extremity(it, "A");
  CHECK(it.boundary == std::set<VertexId>{"B"});
  CHECK(it.graph.has_vertex("A"));  // stays on the resolution
  REQUIRE(it.chains.count("B") == 1);
  REQUIRE(it.chains["B"].size() == 1);
  CHECK(it.chains["B"][0] == Chain{"A", "X"});
}

TEST_CASE("contract_extremity rejects interior and non-extremal vertices") {
  Intermediate it;
  it.graph.add_vertex("L", -1);
  it.graph.add_vertex("V", -2);
  it.graph.add_vertex("R", -1);
  it.graph.add_edge("L", "V");
  it.graph.add_edge("V", "R");
  it.boundary = {"L", "V", "R"};
  CHECK_THROWS_AS(contract_extremity(it, "V"), std::invalid_argument);

  Intermediate bad;
  bad.graph.add_vertex("A", -2);
  bad.graph.add_vertex("B", -2);
  bad.graph.add_vertex("X", -2);
  bad.graph.add_vertex("Y", -2);
  bad.graph.add_edge("A", "B");
  bad.graph.add_edge("A", "X");
  bad.graph.add_edge("A", "Y");
  bad.boundary = {"A", "B"};
  bad.chains["A"] = {{"X"}, {"Y"}};  // adjunction degree 0: not extremal
  CHECK_THROWS_AS(contract_extremity(bad, "A"), std::logic_error);
}

TEST_CASE("completion index") {
  Completion smooth;
  smooth.resolution.add_vertex("B", 2);
  smooth.boundary = "B";
  CHECK(completion_index(smooth) == 1);

  CHECK(completion_index(two_two_completion()) == 2);

  Completion two = two_two_completion();
  two.resolution.add_vertex("R", -3);
  two.resolution.add_edge("B", "R");
  two.chains.push_back({"R"});
  CHECK_THROWS_AS(completion_index(two), std::domain_error);
}

TEST_CASE("completion signatures ignore chain order") {
  Completion a = two_two_completion();
  a.resolution.add_vertex("R", -3);
  a.resolution.add_edge("B", "R");
  a.chains.push_back({"R"});
  Completion b = a;
  std::swap(b.chains[0], b.chains[1]);
  CHECK(completion_signature(a) == completion_signature(b));
  CHECK(completions_equal(a, b));

  Completion c = a;
  c.resolution.set_self("B", -1);
  CHECK_FALSE(completion_signature(a) == completion_signature(c));
}

TEST_CASE("completion json round trip") {
  const Completion c = two_two_completion();
  const auto j = completion_to_json(c);
  const Completion back = completion_from_json(j);
  CHECK(completions_equal(c, back));

  auto bad = j;
  bad.erase("boundary");
  CHECK_THROWS_AS(completion_from_json(bad), std::invalid_argument);
  bad = j;
  bad["chains"] = "nope";
  CHECK_THROWS_AS(completion_from_json(bad), std::invalid_argument);
}
