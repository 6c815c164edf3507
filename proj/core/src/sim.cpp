#include "patrol/sim.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace patrol {

namespace {

void require_positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw ValidationError(std::string(name) + " must be positive and finite");
}

double confirm_slack(double T) { return 1e-9 * std::max(1.0, T); }

// Periodic visit grid for one vertex: sorted offsets within [0, period).
struct VisitSequence {
  double period = 0.0;
  std::vector<double> offsets;

  double at(long long k) const {
    const long long m = static_cast<long long>(offsets.size());
    return static_cast<double>(k / m) * period + offsets[k % m];
  }

  // Index of the first visit at time >= t (t >= 0).
  long long first_at_or_after(double t) const {
    if (t <= offsets.front()) return 0;
    const long long m = static_cast<long long>(offsets.size());
    const long long cycle = static_cast<long long>(std::floor(t / period));
    long long k = std::max(0LL, (cycle - 1) * m);
    while (at(k) < t) ++k;
    return k;
  }
};

double fleet_period(const RobotFleet& fleet) {
  require_positive(fleet.speed, "fleet speed");
  if (fleet.tour.order.empty()) throw ValidationError("fleet tour is empty");
  if (!(fleet.tour.length > 0.0))
    throw ValidationError("fleet tour must have positive length");
  return fleet.tour.length / fleet.speed;
}

void validate_lags(const std::vector<double>& lags, double tau) {
  if (lags.empty()) throw ValidationError("fleet needs at least one robot");
  if (lags.front() != 0.0) throw ValidationError("first robot lag must be 0");
  for (std::size_t i = 0; i < lags.size(); ++i) {
    if (!(lags[i] >= 0.0) || !(lags[i] < tau))
      throw ValidationError("robot lags must lie in [0, period)");
    if (i > 0 && !(lags[i] > lags[i - 1]))
      throw ValidationError("robot lags must be strictly increasing");
  }
}

// Steady-state visit offsets of the whole fleet at one vertex.
VisitSequence vertex_visits(const RobotFleet& fleet, double tau, int order_pos) {
  const double base = fleet.tour.phases[order_pos] / fleet.speed;
  std::vector<double> offs;
  offs.reserve(fleet.lags.size());
  for (double lag : fleet.lags) {
    double o = std::fmod(base + lag, tau);
    if (o >= tau) o -= tau;
    offs.push_back(o);
  }
  std::sort(offs.begin(), offs.end());
  offs.erase(std::unique(offs.begin(), offs.end()), offs.end());
  return VisitSequence{tau, std::move(offs)};
}

void validate_events(const PatrolGraph& g, const std::vector<Event>& events) {
  for (const Event& e : events) {
    if (e.vertex < 0 || e.vertex >= g.size())
      throw ValidationError("event references unknown vertex");
    if (!(e.t_f > e.t_s)) throw ValidationError("event must have t_f > t_s");
  }
}

// Event indices grouped by vertex and sorted by arrival; rejects overlapping
// active intervals at a vertex.
std::map<int, std::vector<int>> group_by_vertex(const std::vector<Event>& events) {
  std::map<int, std::vector<int>> by_vertex;
  for (int i = 0; i < static_cast<int>(events.size()); ++i)
    by_vertex[events[i].vertex].push_back(i);
  for (auto& [v, idxs] : by_vertex) {
    std::sort(idxs.begin(), idxs.end(), [&](int a, int b) {
      return events[a].t_s < events[b].t_s;
    });
    for (std::size_t i = 1; i < idxs.size(); ++i)
      if (events[idxs[i]].t_s < events[idxs[i - 1]].t_f)
        throw ValidationError("events at a vertex must have disjoint active intervals");
  }
  return by_vertex;
}

SimStats finish_stats(long long true_events, long long confirmed) {
  SimStats s;
  s.true_events = true_events;
  s.confirmed_true = confirmed;
  s.estimate = true_events > 0 ? static_cast<double>(confirmed) / static_cast<double>(true_events) : 0.0;
  if (true_events > 0) {
    const double p = s.estimate;
    s.ci_halfwidth = 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(true_events));
  }
  return s;
}

// Shared patrol walk.  When `can_confirm` is false the robots only maintain
// the database (detection duty); detections are reported through `outcomes`.
SimStats run_patrol(const PatrolGraph& g, const RobotFleet& fleet,
                    const std::vector<Event>& events, double T, bool can_confirm,
                    std::vector<EventOutcome>& outcomes) {
  require_positive(T, "T");
  const double tau = fleet_period(fleet);
  validate_lags(fleet.lags, tau);
  validate_events(g, events);

  std::map<int, int> order_pos;
  for (int k = 0; k < static_cast<int>(fleet.tour.order.size()); ++k)
    order_pos[fleet.tour.order[k]] = k;

  auto by_vertex = group_by_vertex(events);
  for (const auto& [v, idxs] : by_vertex)
    if (!order_pos.count(v))
      throw ValidationError("vertex " + g.names[v] + " has events but is not on the tour");

  outcomes.assign(events.size(), EventOutcome{});
  long long confirmed = 0;
  const double slack = confirm_slack(T);

  for (const auto& [v, idxs] : by_vertex) {
    const VisitSequence seq = vertex_visits(fleet, tau, order_pos.at(v));
    double stop = 0.0;
    for (int i : idxs) stop = std::max(stop, events[i].t_f);

    std::size_t ptr = 0;          // next event whose departure we have not passed
    int record = -1;              // event index currently in the database
    double first_seen = 0.0;
    for (long long k = 0;; ++k) {
      const double t = seq.at(k);
      if (t > stop) break;
      while (ptr < idxs.size() && events[idxs[ptr]].t_f < t) ++ptr;
      const bool active = ptr < idxs.size() && events[idxs[ptr]].t_s <= t;
      if (!active) {
        record = -1;  // vertex empty: drop the stale record
        continue;
      }
      const int e = idxs[ptr];
      if (record != e) {
        record = e;  // new event: store with the current time stamp
        first_seen = t;
        if (!outcomes[e].t_det) outcomes[e].t_det = t;
      } else if (can_confirm && !outcomes[e].t_conf && t - first_seen >= T - slack) {
        if (events[e].t_f - events[e].t_s < T)
          throw std::logic_error("false positive: confirmed an event shorter than T");
        outcomes[e].t_conf = t;
        ++confirmed;
      }
    }
  }

  long long true_events = 0;
  for (const Event& e : events)
    if (e.t_f - e.t_s >= T) ++true_events;
  return finish_stats(true_events, confirmed);
}

}  // namespace

std::vector<Event> generate_events(const std::vector<VertexParams>& params,
                                   double horizon, const RngStream& rng) {
  require_positive(horizon, "horizon");
  std::vector<Event> out;
  for (int v = 0; v < static_cast<int>(params.size()); ++v) {
    const auto& vp = params[v];
    if (!(vp.lambda >= 0.0) || !std::isfinite(vp.lambda))
      throw ValidationError("lambda must be non-negative and finite");
    if (vp.lambda == 0.0) continue;
    require_positive(vp.mu, "mu");
    RngStream stream = rng.derive(static_cast<std::uint64_t>(v));
    double t = 0.0;
    while (true) {
      const double arrival = t + stream.exponential(vp.lambda);
      const double departure = arrival + stream.exponential(vp.mu);
      // an event straddling the horizon is dropped, and nothing after it can
      // start before the horizon either
      if (arrival > horizon || departure > horizon) break;
      out.push_back(Event{0, v, arrival, departure});
      t = departure;
    }
  }
  std::sort(out.begin(), out.end(), [](const Event& a, const Event& b) {
    return a.t_s < b.t_s || (a.t_s == b.t_s && a.vertex < b.vertex);
  });
  for (int i = 0; i < static_cast<int>(out.size()); ++i) out[i].id = i;
  return out;
}

SimStats simulate_patrol(const PatrolGraph& g, const RobotFleet& fleet,
                         const std::vector<Event>& events, double T,
                         std::vector<EventOutcome>* outcomes) {
  std::vector<EventOutcome> local;
  std::vector<EventOutcome>& out = outcomes ? *outcomes : local;
  return run_patrol(g, fleet, events, T, /*can_confirm=*/true, out);
}

SimStats simulate_specialized(const RobotFleet& detection_fleet, double T,
                              const std::vector<Event>& events,
                              std::vector<EventOutcome>* outcomes) {
  // The detection pass needs a graph only for validation; rebuild the vertex
  // universe from the tour itself.
  int max_vertex = -1;
  for (int v : detection_fleet.tour.order) max_vertex = std::max(max_vertex, v);
  for (const Event& e : events) max_vertex = std::max(max_vertex, e.vertex);
  PatrolGraph shim;
  for (int v = 0; v <= max_vertex; ++v) shim.names.push_back(std::to_string(v));

  std::vector<EventOutcome> local;
  std::vector<EventOutcome>& out = outcomes ? *outcomes : local;
  run_patrol(shim, detection_fleet, events, T, /*can_confirm=*/false, out);

  // Lemma-style replay: a virtual confirmation robot trails every detection
  // path by exactly T, so it reaches the event's vertex at t_det + T.
  long long true_events = 0;
  long long confirmed = 0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (events[i].t_f - events[i].t_s >= T) ++true_events;
    if (out[i].t_det && events[i].t_f >= *out[i].t_det + T) {
      if (events[i].t_f - events[i].t_s < T)
        throw std::logic_error("false positive: confirmed an event shorter than T");
      out[i].t_conf = *out[i].t_det + T;
      ++confirmed;
    }
  }
  return finish_stats(true_events, confirmed);
}

double simulate_conditioned_cycle(double tau, double mu, double T,
                                  const std::vector<double>& lags,
                                  long long samples, RngStream rng,
                                  std::vector<ConditionedSample>* trace) {
  require_positive(tau, "tau");
  require_positive(mu, "mu");
  require_positive(T, "T");
  if (samples < 1) throw ValidationError("samples must be at least 1");
  if (lags.empty()) throw ValidationError("at least one robot lag is required");
  std::vector<double> offs = lags;
  std::sort(offs.begin(), offs.end());
  for (std::size_t i = 0; i < offs.size(); ++i) {
    if (!(offs[i] >= 0.0) || !(offs[i] < tau))
      throw ValidationError("lags must lie in [0, tau)");
    if (i > 0 && offs[i] == offs[i - 1])
      throw ValidationError("lags must be distinct");
  }
  const VisitSequence seq{tau, std::move(offs)};
  if (trace) trace->reserve(trace->size() + static_cast<std::size_t>(samples));

  long long hits = 0;
  for (long long s = 0; s < samples; ++s) {
    const double arrival = rng.uniform_open_closed(tau);
    const double departure = arrival + T + rng.exponential(mu);
    const double t_det = seq.at(seq.first_at_or_after(arrival));
    const double t_conf = seq.at(seq.first_at_or_after(t_det + T));
    const bool ok = departure >= t_conf;
    hits += ok ? 1 : 0;
    if (trace) trace->push_back({arrival, departure, ok});
  }
  return static_cast<double>(hits) / static_cast<double>(samples);
}

SimStats estimate_confirm_prob(const PatrolRun& run, long long replications,
                               std::uint64_t base_seed) {
  if (replications < 1) throw ValidationError("replications must be at least 1");
  long long true_events = 0;
  long long confirmed = 0;
  for (long long r = 0; r < replications; ++r) {
    const RngStream rng(base_seed + static_cast<std::uint64_t>(r));
    const auto events = generate_events(run.params, run.horizon, rng);
    const SimStats stats = simulate_patrol(run.graph, run.fleet, events, run.T);
    true_events += stats.true_events;
    confirmed += stats.confirmed_true;
  }
  SimStats pooled = finish_stats(true_events, confirmed);
  pooled.seed = base_seed;
  return pooled;
}

}  // namespace patrol
