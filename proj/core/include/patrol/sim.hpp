#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "patrol/analytic.hpp"
#include "patrol/graph.hpp"
#include "patrol/rng.hpp"

namespace patrol {

// One event: arrives at `vertex` at t_s, stays active until t_f.  True iff
// t_f - t_s >= T.  Events at the same vertex have disjoint active intervals.
struct Event {
  int id = 0;
  int vertex = 0;
  double t_s = 0.0;
  double t_f = 0.0;
};

// Robots sharing one tour at a common speed.  `lags` are time offsets behind
// the first robot: strictly increasing, lags[0] == 0, all below the period.
// Robots hold steady-state positions from t = 0.
struct RobotFleet {
  Tour tour;
  double speed = 1.0;
  std::vector<double> lags{0.0};
};

struct SimStats {
  long long true_events = 0;
  long long confirmed_true = 0;
  double estimate = 0.0;       // confirmed_true / true_events (0 when empty)
  double ci_halfwidth = 0.0;   // 95% normal-approximation half-width
  std::uint64_t seed = 0;
};

// Per-event outcome for callers that need more than aggregate counts.
struct EventOutcome {
  std::optional<double> t_det;   // first time a robot stored the event
  std::optional<double> t_conf;  // confirmation time, when confirmed
};

// Alternating-renewal event generation: per vertex, the next arrival follows
// the previous departure by Exponential(lambda), activity lasts
// Exponential(mu).  Events that would straddle the horizon are dropped along
// with everything after them.  Vertex v draws from rng.derive(v).
std::vector<Event> generate_events(const std::vector<VertexParams>& params,
                                   double horizon, const RngStream& rng);

// Deterministic patrol over a fixed event list.  At each vertex visit the
// shared database is updated: empty vertex deletes the record, an unseen
// event is stored with the current time stamp, and a previously stored event
// is confirmed once now - first_seen >= T.  Confirming an event shorter than
// T throws std::logic_error (no false positives, ever).
SimStats simulate_patrol(const PatrolGraph& g, const RobotFleet& fleet,
                         const std::vector<Event>& events, double T,
                         std::vector<EventOutcome>* outcomes = nullptr);

// Specialized fleets: the given robots only detect; confirmation is performed
// by virtual robots replaying each detection path with a lag of exactly T, so
// an event detected at t_det is confirmed iff t_f >= t_det + T.
SimStats simulate_specialized(const RobotFleet& detection_fleet, double T,
                              const std::vector<Event>& events,
                              std::vector<EventOutcome>* outcomes = nullptr);

struct ConditionedSample {
  double arrival = 0.0;
  double departure = 0.0;
  bool confirmed = false;
};

// Idealized single-vertex cycle matching the closed-form analysis: arrival
// uniform on (0, tau], activity T + Exponential(mu) (conditioned true via
// memorylessness), visits on the grid {k*tau + lag_j}.  Detection happens at
// the first visit at or after arrival, confirmation at the first visit at or
// after detection + T; the event must still be active then.  Returns the
// confirmed fraction; `trace` (optional) records every sample.
double simulate_conditioned_cycle(double tau, double mu, double T,
                                  const std::vector<double>& lags,
                                  long long samples, RngStream rng,
                                  std::vector<ConditionedSample>* trace = nullptr);

// Everything one replication needs.
struct PatrolRun {
  PatrolGraph graph;
  RobotFleet fleet;
  std::vector<VertexParams> params;
  double T = 0.0;
  double horizon = 0.0;
};

// Pools `replications` independent runs; replication r is seeded with
// base_seed + r, so the result does not depend on execution order.
SimStats estimate_confirm_prob(const PatrolRun& run, long long replications,
                               std::uint64_t base_seed);

}  // namespace patrol
