#pragma once

#include <iosfwd>
#include <string>

#include "patrol/graph.hpp"
#include "patrol/offline.hpp"

namespace patrol::io {

// Shortest round-trip decimal representation of a double.
std::string format_number(double x);

// Graph files: `vertex <name>` and `edge <u> <v> <weight>` lines, `#` starts
// a comment.  `context` names the source in error messages.
PatrolGraph parse_graph(std::istream& in, const std::string& context = "graph");
PatrolGraph load_graph(const std::string& path);

// Offline instance files add `T <value>`, optional `speed <value>` (default
// 1), optional `start <vertex>|free`, and `event <vertex> <t_s> <t_f>` lines.
OfflineInstance parse_offline_instance(std::istream& in,
                                       const std::string& context = "instance");
OfflineInstance load_offline_instance(const std::string& path);
void write_offline_instance(std::ostream& out, const OfflineInstance& inst);

// TSPTW files: graph lines plus `window <vertex> <early> <late>`, one per
// vertex.
TsptwInstance parse_tsptw_instance(std::istream& in,
                                   const std::string& context = "tsptw");
TsptwInstance load_tsptw_instance(const std::string& path);

// One `<time> <vertex> <action> [event]` line per visit.
void write_schedule(std::ostream& out, const Schedule& s, const PatrolGraph& g);

}  // namespace patrol::io
