#include "patrol/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

namespace patrol::io {

namespace {

struct RawFile {
  std::vector<std::string> vertices;
  std::vector<std::tuple<std::string, std::string, double>> edges;
  std::vector<std::tuple<std::string, double, double>> events;
  std::vector<std::tuple<std::string, double, double>> windows;
  std::optional<double> T;
  std::optional<double> speed;
  std::optional<std::string> start;
};

[[noreturn]] void fail(const std::string& context, int line, const std::string& msg) {
  throw ValidationError(context + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& tok, const std::string& context, int line) {
  double value = 0.0;
  const char* begin = tok.data();
  const char* end = begin + tok.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) fail(context, line, "not a number: '" + tok + "'");
  return value;
}

RawFile read_raw(std::istream& in, const std::string& context) {
  RawFile raw;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    const std::string& kind = tok[0];
    if (kind == "vertex" && tok.size() == 2) {
      raw.vertices.push_back(tok[1]);
    } else if (kind == "edge" && tok.size() == 4) {
      raw.edges.emplace_back(tok[1], tok[2], parse_double(tok[3], context, lineno));
    } else if (kind == "event" && tok.size() == 4) {
      raw.events.emplace_back(tok[1], parse_double(tok[2], context, lineno),
                              parse_double(tok[3], context, lineno));
    } else if (kind == "window" && tok.size() == 4) {
      raw.windows.emplace_back(tok[1], parse_double(tok[2], context, lineno),
                               parse_double(tok[3], context, lineno));
    } else if (kind == "T" && tok.size() == 2) {
      raw.T = parse_double(tok[1], context, lineno);
    } else if (kind == "speed" && tok.size() == 2) {
      raw.speed = parse_double(tok[1], context, lineno);
    } else if (kind == "start" && tok.size() == 2) {
      raw.start = tok[1];
    } else {
      fail(context, lineno, "unrecognized line starting with '" + kind + "'");
    }
  }
  return raw;
}

PatrolGraph graph_from_raw(const RawFile& raw, const std::string& context) {
  std::map<std::string, int> index;
  for (int i = 0; i < static_cast<int>(raw.vertices.size()); ++i)
    index.emplace(raw.vertices[i], i);
  std::vector<Edge> edges;
  for (const auto& [u, v, w] : raw.edges) {
    auto iu = index.find(u);
    auto iv = index.find(v);
    if (iu == index.end() || iv == index.end())
      throw ValidationError(context + ": edge references undeclared vertex '" +
                            (iu == index.end() ? u : v) + "'");
    edges.push_back(Edge{iu->second, iv->second, w});
  }
  return metric_closure(raw.vertices, std::move(edges));
}

int vertex_index(const PatrolGraph& g, const std::string& name, const std::string& context) {
  const int idx = g.index_of(name);
  if (idx < 0) throw ValidationError(context + ": unknown vertex '" + name + "'");
  return idx;
}

template <typename T>
T load_file(const std::string& path, T (*parse)(std::istream&, const std::string&)) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  return parse(in, path);
}

}  // namespace

std::string format_number(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  (void)ec;
  return std::string(buf, ptr);
}

PatrolGraph parse_graph(std::istream& in, const std::string& context) {
  const RawFile raw = read_raw(in, context);
  if (!raw.events.empty() || !raw.windows.empty() || raw.T || raw.speed || raw.start)
    throw ValidationError(context + ": graph files may only contain vertex and edge lines");
  return graph_from_raw(raw, context);
}

PatrolGraph load_graph(const std::string& path) { return load_file(path, parse_graph); }

OfflineInstance parse_offline_instance(std::istream& in, const std::string& context) {
  const RawFile raw = read_raw(in, context);
  if (!raw.windows.empty())
    throw ValidationError(context + ": 'window' lines belong to tsptw files");
  if (!raw.T) throw ValidationError(context + ": missing 'T <value>' line");
  OfflineInstance inst;
  inst.graph = graph_from_raw(raw, context);
  inst.T = *raw.T;
  inst.speed = raw.speed.value_or(1.0);
  if (raw.start && *raw.start != "free")
    inst.start_vertex = vertex_index(inst.graph, *raw.start, context);
  int id = 0;
  for (const auto& [v, ts, tf] : raw.events)
    inst.events.push_back(Event{id++, vertex_index(inst.graph, v, context), ts, tf});
  return inst;
}

OfflineInstance load_offline_instance(const std::string& path) {
  return load_file(path, parse_offline_instance);
}

void write_offline_instance(std::ostream& out, const OfflineInstance& inst) {
  for (const auto& name : inst.graph.names) out << "vertex " << name << "\n";
  for (const Edge& e : inst.graph.edges)
    out << "edge " << inst.graph.names[e.u] << " " << inst.graph.names[e.v] << " "
        << format_number(e.weight) << "\n";
  out << "T " << format_number(inst.T) << "\n";
  out << "speed " << format_number(inst.speed) << "\n";
  out << "start " << (inst.start_vertex ? inst.graph.names[*inst.start_vertex] : "free")
      << "\n";
  for (const Event& e : inst.events)
    out << "event " << inst.graph.names[e.vertex] << " " << format_number(e.t_s) << " "
        << format_number(e.t_f) << "\n";
}

TsptwInstance parse_tsptw_instance(std::istream& in, const std::string& context) {
  const RawFile raw = read_raw(in, context);
  if (!raw.events.empty() || raw.T || raw.speed || raw.start)
    throw ValidationError(context + ": tsptw files contain only vertex/edge/window lines");
  TsptwInstance t;
  t.graph = graph_from_raw(raw, context);
  t.windows.assign(t.graph.size(), TimeWindow{});
  std::vector<char> seen(t.graph.size(), 0);
  for (const auto& [v, e, l] : raw.windows) {
    const int idx = vertex_index(t.graph, v, context);
    if (seen[idx]) throw ValidationError(context + ": duplicate window for vertex '" + v + "'");
    seen[idx] = 1;
    t.windows[idx] = TimeWindow{e, l};
  }
  for (int i = 0; i < t.graph.size(); ++i)
    if (!seen[i])
      throw ValidationError(context + ": missing window for vertex '" + t.graph.names[i] + "'");
  return t;
}

TsptwInstance load_tsptw_instance(const std::string& path) {
  return load_file(path, parse_tsptw_instance);
}

void write_schedule(std::ostream& out, const Schedule& s, const PatrolGraph& g) {
  for (const Visit& v : s.visits) {
    out << format_number(v.time) << " " << g.names[v.vertex] << " ";
    switch (v.action) {
      case ActionKind::Transit:
        out << "transit";
        break;
      case ActionKind::Detect:
        out << "detect " << v.event_id;
        break;
      case ActionKind::Confirm:
        out << "confirm " << v.event_id;
        break;
    }
    out << "\n";
  }
}

}  // namespace patrol::io
