#include "patrol/offline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace patrol {

namespace {

void validate_instance(const OfflineInstance& inst) {
  if (!(inst.T > 0.0) || !std::isfinite(inst.T))
    throw ValidationError("T must be positive and finite");
  if (!(inst.speed > 0.0) || !std::isfinite(inst.speed))
    throw ValidationError("speed must be positive and finite");
  if (inst.start_vertex && (*inst.start_vertex < 0 || *inst.start_vertex >= inst.graph.size()))
    throw ValidationError("start vertex out of range");
  for (const Event& e : inst.events) {
    if (e.vertex < 0 || e.vertex >= inst.graph.size())
      throw ValidationError("event references unknown vertex");
    if (!(e.t_f > e.t_s)) throw ValidationError("event must have t_f > t_s");
  }
  // per-vertex active intervals must be disjoint
  std::vector<std::pair<double, double>> by_vertex;
  for (int v = 0; v < inst.graph.size(); ++v) {
    by_vertex.clear();
    for (const Event& e : inst.events)
      if (e.vertex == v) by_vertex.emplace_back(e.t_s, e.t_f);
    std::sort(by_vertex.begin(), by_vertex.end());
    for (std::size_t i = 1; i < by_vertex.size(); ++i)
      if (by_vertex[i].first < by_vertex[i - 1].second)
        throw ValidationError("events at vertex " + inst.graph.names[v] +
                              " have overlapping active intervals");
  }
}

struct PendingEvent {
  int vertex = 0;
  double t_s = 0.0;
  double t_f = 0.0;
  int event_id = 0;
};

class OfflineSolver {
 public:
  OfflineSolver(const OfflineInstance& inst, std::vector<PendingEvent> events)
      : inst_(inst), events_(std::move(events)) {
    const std::size_t n = events_.size();
    t_det_.assign(n, 0.0);
    detected_.assign(n, 0);
    confirmed_.assign(n, 0);
    remaining_ = 2 * static_cast<int>(n);
  }

  bool solve(int start, double t0, std::vector<Visit>& trail) {
    trail_.clear();
    trail_.push_back(Visit{t0, start, ActionKind::Transit, -1});
    std::fill(detected_.begin(), detected_.end(), 0);
    std::fill(confirmed_.begin(), confirmed_.end(), 0);
    remaining_ = 2 * static_cast<int>(events_.size());
    if (dfs(start, t0)) {
      trail = trail_;
      return true;
    }
    return false;
  }

 private:
  double travel(int a, int b) const { return inst_.graph.dist[a][b] / inst_.speed; }

  bool dfs(int loc, double now) {
    if (remaining_ == 0) return true;

    // dead once some outstanding deadline is unreachable even by direct travel
    for (std::size_t i = 0; i < events_.size(); ++i) {
      if (confirmed_[i]) continue;
      const double deadline = detected_[i] ? events_[i].t_f : events_[i].t_f - inst_.T;
      if (now + travel(loc, events_[i].vertex) > deadline + kTimeSlack) return false;
    }

    struct Candidate {
      double deadline = 0.0;
      double arrival = 0.0;
      int index = 0;
      bool confirm = false;
    };
    std::vector<Candidate> cands;
    for (std::size_t i = 0; i < events_.size(); ++i) {
      if (confirmed_[i]) continue;
      const PendingEvent& e = events_[i];
      if (!detected_[i]) {
        const double arrival = std::max(now + travel(loc, e.vertex), e.t_s);
        cands.push_back({e.t_f - inst_.T, arrival, static_cast<int>(i), false});
      } else {
        const double arrival = std::max(now + travel(loc, e.vertex), t_det_[i] + inst_.T);
        cands.push_back({e.t_f, arrival, static_cast<int>(i), true});
      }
    }
    // tightest deadline first; affects speed, not correctness
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
      if (a.deadline != b.deadline) return a.deadline < b.deadline;
      if (a.confirm != b.confirm) return !a.confirm;
      return a.index < b.index;
    });

    for (const Candidate& c : cands) {
      if (c.arrival > c.deadline + kTimeSlack) continue;
      const PendingEvent& e = events_[c.index];
      if (c.confirm) {
        confirmed_[c.index] = 1;
        trail_.push_back(Visit{c.arrival, e.vertex, ActionKind::Confirm, e.event_id});
      } else {
        detected_[c.index] = 1;
        t_det_[c.index] = c.arrival;
        trail_.push_back(Visit{c.arrival, e.vertex, ActionKind::Detect, e.event_id});
      }
      --remaining_;
      if (dfs(e.vertex, c.arrival)) return true;
      ++remaining_;
      trail_.pop_back();
      if (c.confirm)
        confirmed_[c.index] = 0;
      else
        detected_[c.index] = 0;
    }
    return false;
  }

  const OfflineInstance& inst_;
  std::vector<PendingEvent> events_;
  std::vector<double> t_det_;
  std::vector<char> detected_, confirmed_;
  int remaining_ = 0;
  std::vector<Visit> trail_;
};

}  // namespace

EventWindows event_windows(const Event& e, double T, std::optional<double> t_det) {
  if (!(e.t_f > e.t_s)) throw ValidationError("event must have t_f > t_s");
  if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("T must be positive and finite");
  EventWindows w;
  if (e.t_f - e.t_s >= T) w.detection = TimeWindow{e.t_s, e.t_f - T};
  if (t_det) {
    if (!w.detection || *t_det < w.detection->early - kTimeSlack ||
        *t_det > w.detection->late + kTimeSlack)
      throw ValidationError("t_det lies outside the detection window");
    w.confirmation = TimeWindow{*t_det + T, e.t_f};
  }
  return w;
}

std::optional<Schedule> offline_feasible(const OfflineInstance& inst) {
  validate_instance(inst);

  std::vector<PendingEvent> pending;
  for (const Event& e : inst.events)
    if (e.t_f - e.t_s >= inst.T)  // false events can be ignored
      pending.push_back({e.vertex, e.t_s, e.t_f, e.id});
  if (static_cast<int>(pending.size()) > kOfflineEventCap)
    throw SizeCapError("offline solver is capped at " + std::to_string(kOfflineEventCap) +
                       " true events (got " + std::to_string(pending.size()) + ")");
  if (pending.empty()) return Schedule{};

  double t0 = pending.front().t_s;
  for (const Event& e : inst.events) t0 = std::min(t0, e.t_s);

  std::vector<int> starts;
  if (inst.start_vertex)
    starts.push_back(*inst.start_vertex);
  else
    for (int v = 0; v < inst.graph.size(); ++v) starts.push_back(v);

  OfflineSolver solver(inst, pending);
  std::vector<Visit> trail;
  for (int start : starts)
    if (solver.solve(start, t0, trail)) return Schedule{std::move(trail)};
  return std::nullopt;
}

OfflineInstance reduce_tsptw(const TsptwInstance& t) {
  const int n = t.graph.size();
  if (static_cast<int>(t.windows.size()) != n)
    throw ValidationError("one time window per vertex is required");
  double early_min = t.windows[0].early;
  double late_max = t.windows[0].late;
  for (const TimeWindow& w : t.windows) {
    if (!std::isfinite(w.early) || !std::isfinite(w.late) || w.early > w.late)
      throw ValidationError("time window must satisfy early <= late");
    early_min = std::min(early_min, w.early);
    late_max = std::max(late_max, w.late);
  }

  double weight_sum = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) weight_sum += t.graph.dist[i][j];

  double T = weight_sum + late_max - early_min;
  if (!(T > 0.0)) T = 1.0;  // degenerate single-vertex instance

  OfflineInstance inst;
  inst.graph = t.graph;
  inst.T = T;
  inst.speed = 1.0;
  inst.start_vertex = std::nullopt;
  for (int i = 0; i < n; ++i)
    inst.events.push_back(Event{i, i, t.windows[i].early, t.windows[i].late + T});
  return inst;
}

TsptwResult tsptw_feasible(const TsptwInstance& t) {
  const int n = t.graph.size();
  if (static_cast<int>(t.windows.size()) != n)
    throw ValidationError("one time window per vertex is required");
  if (n > kTsptwVertexCap)
    throw SizeCapError("TSPTW search is capped at " + std::to_string(kTsptwVertexCap) +
                       " vertices (got " + std::to_string(n) + ")");
  for (const TimeWindow& w : t.windows)
    if (!std::isfinite(w.early) || !std::isfinite(w.late) || w.early > w.late)
      throw ValidationError("time window must satisfy early <= late");

  double t0 = t.windows[0].early;
  for (const TimeWindow& w : t.windows) t0 = std::min(t0, w.early);

  std::vector<int> order;
  std::vector<char> visited(n, 0);

  // nested search keeps the witness order on the way out
  auto dfs = [&](auto&& self, int loc, double now) -> bool {
    if (static_cast<int>(order.size()) == n) return true;
    for (int v = 0; v < n; ++v) {
      if (visited[v]) continue;
      double arrival = loc < 0 ? t0 : now + t.graph.dist[loc][v];
      arrival = std::max(arrival, t.windows[v].early);
      if (arrival > t.windows[v].late + kTimeSlack) continue;
      visited[v] = 1;
      order.push_back(v);
      if (self(self, v, arrival)) return true;
      order.pop_back();
      visited[v] = 0;
    }
    return false;
  };

  if (dfs(dfs, -1, t0)) return TsptwResult{true, order};
  return TsptwResult{false, {}};
}

}  // namespace patrol
