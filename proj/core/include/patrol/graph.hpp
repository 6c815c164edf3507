#pragma once

#include <string>
#include <vector>

#include "patrol/errors.hpp"

namespace patrol {

struct Edge {
  int u = 0;
  int v = 0;
  double weight = 0.0;
};

// Weighted undirected graph together with its metric closure.
//
// Vertices are referred to by index everywhere; `names` keeps the user-facing
// labels.  `dist` holds exact all-pairs shortest-path distances and is
// immutable after construction, so the graph can be shared across threads.
struct PatrolGraph {
  std::vector<std::string> names;
  std::vector<Edge> edges;
  std::vector<std::vector<double>> dist;

  int size() const { return static_cast<int>(names.size()); }

  // Index of a vertex label, -1 when absent.
  int index_of(const std::string& name) const;
};

// Builds the metric closure of the given graph.  Throws ValidationError on
// non-positive weights, bad endpoints, duplicate names or a disconnected
// graph (the error names an unreachable pair).
PatrolGraph metric_closure(std::vector<std::string> vertices, std::vector<Edge> edges);

// Cyclic visiting order over a vertex subset.  `phases[k]` is the travel
// distance from the tour start to `order[k]` along the cycle; `length`
// includes the closing edge.
struct Tour {
  std::vector<int> order;
  double length = 0.0;
  std::vector<double> phases;
};

enum class TspMode { Exact, Heuristic };

// Exact mode uses dynamic programming over subsets; memory use doubles per
// vertex, hence the hard cap.
inline constexpr int kExactTspCap = 13;

// Shortest (exact) or 2-opt-optimal (heuristic) Hamiltonian cycle on the
// closure.  Exact mode throws SizeCapError above kExactTspCap vertices.
Tour tsp_tour(const PatrolGraph& g, TspMode mode);

// Assembles a Tour (length and phases) from a visiting order.
Tour build_tour(const PatrolGraph& g, std::vector<int> order);

// 2-opt local search started from the given order; first-improvement scans
// repeat until no move shortens the cycle.
Tour two_opt(const PatrolGraph& g, std::vector<int> order);

// Visit timing of a tour at a given speed.
struct TourTiming {
  double period = 0.0;           // time to complete one cycle
  std::vector<double> offsets;   // per order position: phases / speed
};

TourTiming tour_period(const Tour& t, double speed);

}  // namespace patrol
