#pragma once

#include <blinks/cluster.hpp>

// Resolution cluster of the quadratic shift self-map of the quadric minus its
// diagonal: four blow-ups over the node of the pencil member H (bidegree
// (3,3), double at every center). Adjacency frozen from the chart-level
// derivation in tests/oracle/quadratic_shift_cluster.py.
inline blinks::ClusterState quadratic_shift_cluster() {
  using namespace blinks;
  WeightedGraph g;
  g.add_vertex("D", 2);
  ClusterState st = make_cluster(g, {"H"});
  st = blow_up(st, PointSpec{{"D"}, {{"H", 2}}}, "C1");
  st = blow_up(st, PointSpec{{"C1", "D"}, {{"H", 2}}}, "C2");
  st = blow_up(st, PointSpec{{"C2", "D"}, {{"H", 2}}}, "C3");
  st = blow_up(st, PointSpec{{"C3"}, {{"H", 2}}}, "C4");
  return st;
}
