#include "patrol/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

namespace patrol {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_order(const PatrolGraph& g, const std::vector<int>& order) {
  if (order.empty()) throw ValidationError("tour order must not be empty");
  std::unordered_set<int> seen;
  for (int v : order) {
    if (v < 0 || v >= g.size()) throw ValidationError("tour order references unknown vertex");
    if (!seen.insert(v).second)
      throw ValidationError("tour order visits vertex " + g.names[v] + " twice");
  }
}

std::vector<int> nearest_neighbor_order(const PatrolGraph& g) {
  const int n = g.size();
  std::vector<int> order{0};
  std::vector<char> visited(n, 0);
  visited[0] = 1;
  for (int step = 1; step < n; ++step) {
    const int from = order.back();
    int best = -1;
    double best_d = kInf;
    for (int v = 0; v < n; ++v) {
      // strict < keeps the lowest-id vertex on ties
      if (!visited[v] && g.dist[from][v] < best_d) {
        best = v;
        best_d = g.dist[from][v];
      }
    }
    visited[best] = 1;
    order.push_back(best);
  }
  return order;
}

Tour held_karp(const PatrolGraph& g) {
  const int n = g.size();
  if (n > kExactTspCap)
    throw SizeCapError("exact TSP is capped at " + std::to_string(kExactTspCap) +
                       " vertices (got " + std::to_string(n) + "); use heuristic mode");
  if (n == 1) return build_tour(g, {0});

  const int full = 1 << n;
  // dp[mask][j]: cheapest path that starts at 0, covers `mask`, ends at j
  std::vector<std::vector<double>> dp(full, std::vector<double>(n, kInf));
  std::vector<std::vector<int>> parent(full, std::vector<int>(n, -1));
  dp[1][0] = 0.0;
  for (int mask = 1; mask < full; ++mask) {
    if (!(mask & 1)) continue;
    for (int j = 0; j < n; ++j) {
      if (!(mask >> j & 1) || dp[mask][j] == kInf) continue;
      for (int k = 1; k < n; ++k) {
        if (mask >> k & 1) continue;
        const int next = mask | 1 << k;
        const double cand = dp[mask][j] + g.dist[j][k];
        if (cand < dp[next][k]) {
          dp[next][k] = cand;
          parent[next][k] = j;
        }
      }
    }
  }

  double best = kInf;
  int last = -1;
  for (int j = 1; j < n; ++j) {
    const double cand = dp[full - 1][j] + g.dist[j][0];
    if (cand < best) {
      best = cand;
      last = j;
    }
  }

  std::vector<int> order;
  int mask = full - 1;
  while (last != -1) {
    order.push_back(last);
    const int prev = parent[mask][last];
    mask ^= 1 << last;
    last = prev;
  }
  std::reverse(order.begin(), order.end());
  return build_tour(g, order);
}

}  // namespace

int PatrolGraph::index_of(const std::string& name) const {
  for (int i = 0; i < size(); ++i)
    if (names[i] == name) return i;
  return -1;
}

PatrolGraph metric_closure(std::vector<std::string> vertices, std::vector<Edge> edges) {
  const int n = static_cast<int>(vertices.size());
  if (n == 0) throw ValidationError("graph needs at least one vertex");
  {
    std::unordered_set<std::string> seen;
    for (const auto& name : vertices)
      if (!seen.insert(name).second)
        throw ValidationError("duplicate vertex name: " + name);
  }
  for (const Edge& e : edges) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
      throw ValidationError("edge endpoint out of range");
    if (e.u == e.v) throw ValidationError("self-loop on vertex " + vertices[e.u]);
    if (!(e.weight > 0.0) || !std::isfinite(e.weight))
      throw ValidationError("edge " + vertices[e.u] + "-" + vertices[e.v] +
                            " must have a positive finite weight");
  }

  std::vector<std::vector<double>> dist(n, std::vector<double>(n, kInf));
  for (int i = 0; i < n; ++i) dist[i][i] = 0.0;
  for (const Edge& e : edges) {
    dist[e.u][e.v] = std::min(dist[e.u][e.v], e.weight);
    dist[e.v][e.u] = dist[e.u][e.v];
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) {
      if (dist[i][k] == kInf) continue;
      for (int j = 0; j < n; ++j) {
        const double through = dist[i][k] + dist[k][j];
        if (through < dist[i][j]) dist[i][j] = through;
      }
    }

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!std::isfinite(dist[i][j]))
        throw ValidationError("graph is disconnected: no path between " + vertices[i] +
                              " and " + vertices[j]);

  return PatrolGraph{std::move(vertices), std::move(edges), std::move(dist)};
}

Tour build_tour(const PatrolGraph& g, std::vector<int> order) {
  validate_order(g, order);
  const int m = static_cast<int>(order.size());
  std::vector<double> phases(m, 0.0);
  double acc = 0.0;
  for (int k = 0; k + 1 < m; ++k) {
    acc += g.dist[order[k]][order[k + 1]];
    phases[k + 1] = acc;
  }
  const double length = m > 1 ? acc + g.dist[order[m - 1]][order[0]] : 0.0;
  return Tour{std::move(order), length, std::move(phases)};
}

Tour two_opt(const PatrolGraph& g, std::vector<int> order) {
  validate_order(g, order);
  const int n = static_cast<int>(order.size());
  if (n >= 4) {
    double scale = 0.0;
    for (const auto& row : g.dist)
      for (double d : row) scale = std::max(scale, d);
    const double eps = 1e-12 * std::max(1.0, scale);
    bool improved = true;
    while (improved) {
      improved = false;
      for (int i = 0; i < n - 1; ++i) {
        for (int j = i + 1; j < n; ++j) {
          if (i == 0 && j == n - 1) continue;  // would reverse the whole cycle
          const int a = order[(i + n - 1) % n];
          const int b = order[i];
          const int c = order[j];
          const int d = order[(j + 1) % n];
          const double delta =
              g.dist[a][c] + g.dist[b][d] - g.dist[a][b] - g.dist[c][d];
          if (delta < -eps) {
            std::reverse(order.begin() + i, order.begin() + j + 1);
            improved = true;
          }
        }
      }
    }
  }
  return build_tour(g, order);
}

Tour tsp_tour(const PatrolGraph& g, TspMode mode) {
  if (mode == TspMode::Exact) return held_karp(g);
  return two_opt(g, nearest_neighbor_order(g));
}

TourTiming tour_period(const Tour& t, double speed) {
  if (!(speed > 0.0) || !std::isfinite(speed))
    throw ValidationError("speed must be positive");
  if (t.order.empty()) throw ValidationError("tour is empty");
  TourTiming timing;
  timing.period = t.length / speed;
  timing.offsets.reserve(t.phases.size());
  for (double p : t.phases) timing.offsets.push_back(p / speed);
  return timing;
}

}  // namespace patrol
