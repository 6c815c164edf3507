#pragma once

#include <optional>
#include <vector>

#include "patrol/graph.hpp"
#include "patrol/sim.hpp"

namespace patrol {

struct TimeWindow {
  double early = 0.0;
  double late = 0.0;
};

// Absolute slack on window-boundary comparisons; avoids spurious
// infeasibility when a confirmation lands exactly on t_f.
inline constexpr double kTimeSlack = 1e-9;

// Deterministic variant: all events are known up front.
struct OfflineInstance {
  PatrolGraph graph;
  double T = 0.0;
  std::vector<Event> events;
  double speed = 1.0;
  std::optional<int> start_vertex;  // nullopt: solver may start anywhere
};

// Decision version of the traveling salesman problem with time windows.
struct TsptwInstance {
  PatrolGraph graph;
  std::vector<TimeWindow> windows;  // one per vertex
};

// Detection window [t_s, t_f - T] (absent for false events) and, when the
// detection time is supplied, confirmation window [t_det + T, t_f].
struct EventWindows {
  std::optional<TimeWindow> detection;
  std::optional<TimeWindow> confirmation;
};

EventWindows event_windows(const Event& e, double T,
                           std::optional<double> t_det = std::nullopt);

enum class ActionKind { Transit, Detect, Confirm };

struct Visit {
  double time = 0.0;
  int vertex = 0;
  ActionKind action = ActionKind::Transit;
  int event_id = -1;  // -1 for transits
};

struct Schedule {
  std::vector<Visit> visits;
};

inline constexpr int kOfflineEventCap = 12;
inline constexpr int kTsptwVertexCap = 10;

// Depth-first branch-and-bound over interleavings of detect/confirm actions;
// waiting is allowed, branches die once any outstanding deadline becomes
// unreachable by direct travel.  Returns a witness schedule, or nullopt after
// exhausting the search.  Throws SizeCapError above kOfflineEventCap true
// events.
std::optional<Schedule> offline_feasible(const OfflineInstance& inst);

// Maps a TSPTW instance to an offline instance on the same graph with
//   T = sum_{i,j} dist[i][j] + max_i l_i - min_i e_i
// and one event (i, e_i, l_i + T) per vertex, so each detection window
// collapses to [e_i, l_i].
OfflineInstance reduce_tsptw(const TsptwInstance& t);

struct TsptwResult {
  bool feasible = false;
  std::vector<int> order;  // witness visiting order when feasible
};

// Exhaustive permutation search with earliest-arrival scheduling: the robot
// starts at any vertex at time min_i e_i, waits out early arrivals, fails
// past l_i.  Open path, each vertex exactly once.  Throws SizeCapError above
// kTsptwVertexCap vertices.
TsptwResult tsptw_feasible(const TsptwInstance& t);

}  // namespace patrol
