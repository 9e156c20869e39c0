#include <blinks/cluster.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "fixtures.hpp"

using namespace blinks;

TEST_CASE("single blow-up on the interior of one curve") {
  WeightedGraph g;
  g.add_vertex("A", 2);
  auto st = make_cluster(g, {"H"});
  st = blow_up(st, PointSpec{{"A"}, {{"H", 2}}}, "E");

  CHECK(st.graph.self_int("A") == 1);
  CHECK(st.graph.self_int("E") == -1);
  CHECK(st.graph.has_edge("A", "E"));
  CHECK(st.graph.edge_set.size() == 1);
  CHECK(total_transform_coeffs(st, "H").at("E") == 2);
}

TEST_CASE("blow-up at a node separates the strict transforms") {
  WeightedGraph g;
  g.add_vertex("A", -1);
  g.add_vertex("B", -1);
  g.add_edge("A", "B");
  auto st = make_cluster(g, {});
  st = blow_up(st, PointSpec{{"A", "B"}, {}}, "E");

  CHECK(st.graph.self_int("A") == -2);
  CHECK(st.graph.self_int("B") == -2);
  CHECK(st.graph.self_int("E") == -1);
  CHECK_FALSE(st.graph.has_edge("A", "B"));
  CHECK(st.graph.has_edge("E", "A"));
  CHECK(st.graph.has_edge("E", "B"));
}

TEST_CASE("coefficient recursion accumulates along infinitely near centers") {
  WeightedGraph g;
  g.add_vertex("A", 0);
  auto st = make_cluster(g, {"H"});
  st = blow_up(st, PointSpec{{"A"}, {{"H", 3}}}, "E1");
  // Center on E1 only, where H no longer passes: coefficient is inherited.
  st = blow_up(st, PointSpec{{"E1"}, {}}, "E2");
  CHECK(total_transform_coeffs(st, "H").at("E2") == 3);
  // Center at the node of the two exceptionals: both contribute.
  st = blow_up(st, PointSpec{{"E1", "E2"}, {{"H", 1}}}, "E3");
  CHECK(total_transform_coeffs(st, "H").at("E3") == 3 + 3 + 1);
}

TEST_CASE("quadratic-shift cluster reproduces the frozen chart derivation") {
  const auto st = quadratic_shift_cluster();

  CHECK(st.graph.self_int("D") == -1);
  CHECK(st.graph.self_int("C1") == -2);
  CHECK(st.graph.self_int("C2") == -2);
  CHECK(st.graph.self_int("C3") == -2);
  CHECK(st.graph.self_int("C4") == -1);

  CHECK(st.graph.edge_set ==
        std::set<std::pair<VertexId, VertexId>>{
            {"C1", "C2"}, {"C2", "C3"}, {"C3", "C4"}, {"C3", "D"}});
  CHECK(is_tree(st.graph));

  const auto m = total_transform_coeffs(st, "H");
  CHECK(m.at("C1") == 2);
  CHECK(m.at("C2") == 4);
  CHECK(m.at("C3") == 6);
  CHECK(m.at("C4") == 8);
}

TEST_CASE("intersection matrices on pinned configurations") {
  WeightedGraph chain;
  chain.add_vertex("A", -2);
  chain.add_vertex("B", -2);
  chain.add_edge("A", "B");
  CHECK(intersection_matrix(chain, {"A", "B"}) == Mat{{-2, 1}, {1, -2}});

  WeightedGraph one;
  one.add_vertex("E", -1);
  CHECK(intersection_matrix(one, {"E"}) == Mat{{-1}});

  WeightedGraph star;
  star.add_vertex("Z", -2);
  for (const char* leaf : {"L1", "L2", "L3"}) {
    star.add_vertex(leaf, -1);
    star.add_edge("Z", leaf);
  }
  const auto m = intersection_matrix(star, {"Z", "L1", "L2", "L3"});
  CHECK(m[0] == Vec{-2, 1, 1, 1});
  CHECK(m[1] == Vec{1, -1, 0, 0});
  CHECK(m[2][3] == 0);
}

TEST_CASE("random blow-up scripts preserve the bookkeeping invariants") {
  std::mt19937 rng(907);
  for (int iter = 0; iter < 60; ++iter) {
    WeightedGraph g;
    g.add_vertex("B0", 1);
    auto st = make_cluster(g, {"H"});
    std::uniform_int_distribution<int> mult_d(0, 3);
    for (int step = 0; step < 8; ++step) {
      // Candidate centers: on any single curve, or at any current node.
      std::vector<PointSpec> centers;
      for (const auto& v : st.graph.order) centers.push_back(PointSpec{{v}, {}});
      for (const auto& [a, b] : st.graph.edge_set) centers.push_back(PointSpec{{a, b}, {}});
      std::uniform_int_distribution<std::size_t> pick(0, centers.size() - 1);
      PointSpec p = centers[pick(rng)];
      p.aux["H"] = mult_d(rng);

      const auto before = st;
      const Rational det_before =
          determinant(intersection_matrix(before.graph, before.graph.order));
      const std::string id = "E" + std::to_string(iter) + "_" + std::to_string(step);
      st = blow_up(st, p, id);

      // Picard rank bookkeeping and tree preservation.
      CHECK(st.graph.size() == before.graph.size() + 1);
      for (const auto& c : p.on)
        CHECK(st.graph.self_int(c) == before.graph.self_int(c) - 1);
      CHECK(is_tree(st.graph));

      // The configuration lattice gains one exceptional class: exact sign flip.
      const Rational det_after = determinant(intersection_matrix(st.graph, st.graph.order));
      CHECK(det_after == -det_before);

      // Total-transform coefficients never decrease down the cluster.
      for (const auto& c : p.on)
        if (before.exceptional.count(c))
          CHECK(st.coeffs.at("H").at(id) >= before.coeffs.at("H").at(c));
    }
  }
}

TEST_CASE("blow-up input validation") {
  WeightedGraph g;
  g.add_vertex("A", 0);
  g.add_vertex("B", 0);
  auto st = make_cluster(g, {"H"});

  CHECK_THROWS_AS(blow_up(st, PointSpec{{"A", "B"}, {}}, "E"), std::invalid_argument);
  CHECK_THROWS_AS(blow_up(st, PointSpec{{"X"}, {}}, "E"), std::invalid_argument);
  CHECK_THROWS_AS(blow_up(st, PointSpec{{"A"}, {}}, "A"), std::invalid_argument);
  CHECK_THROWS_AS(blow_up(st, PointSpec{{"A"}, {{"K", 1}}}, "E"), std::invalid_argument);
  CHECK_THROWS_AS(blow_up(st, PointSpec{{"A"}, {{"H", -1}}}, "E"), std::invalid_argument);
  CHECK_THROWS_AS(blow_up(st, PointSpec{{"A", "B", "A"}, {}}, "E"), std::invalid_argument);
  CHECK_THROWS_AS(total_transform_coeffs(st, "K"), std::invalid_argument);
}

TEST_CASE("graph json roundtrip and script execution") {
  const auto st = quadratic_shift_cluster();
  const auto j = graph_to_json(st.graph);
  CHECK(graph_from_json(j) == st.graph);

  const nlohmann::json script = {
      {"initial", {{"vertices", {{{"id", "D"}, {"self", 2}}}}, {"edges", nlohmann::json::array()}}},
      {"aux", {"H"}},
      {"steps",
       {{{"new", "C1"}, {"on", {"D"}}, {"aux", {{"H", 2}}}},
        {{"new", "C2"}, {"on", {"C1", "D"}}, {"aux", {{"H", 2}}}},
        {{"new", "C3"}, {"on", {"C2", "D"}}, {"aux", {{"H", 2}}}},
        {{"new", "C4"}, {"on", {"C3"}}, {"aux", {{"H", 2}}}}}}};
  const auto from_script = run_cluster_script(script);
  CHECK(from_script.graph == st.graph);
  CHECK(from_script.coeffs == st.coeffs);

  CHECK_THROWS_AS(graph_from_json(nlohmann::json{{"edges", 3}}), std::invalid_argument);
  CHECK_THROWS_AS(run_cluster_script(nlohmann::json{{"steps", 1}}), std::invalid_argument);
}
