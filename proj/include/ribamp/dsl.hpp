#pragma once

// Line-oriented text format for ribbon graphs:
//
//   graph <name>
//   vertex <vid>: <dart> <dart> ...    # counterclockwise cyclic order
//   edge <dart> <dart>                 # internal edge
//   ext <legnum> <dart>                # external leg
//
// '#' starts a comment; blank lines are ignored.  Every dart token must
// appear exactly once across vertex lines and exactly once across edge/ext
// lines.  Parse errors carry line/column positions.

#include <string>

#include "ribamp/ribbon.hpp"

namespace ribamp {

GraphDescription parse_graph_description(const std::string& text);

// parse + validate in one step
RibbonGraph parse_graph_dsl(const std::string& text);

RibbonGraph load_graph_file(const std::string& path);

std::string serialize_graph_dsl(const RibbonGraph& g);

}  // namespace ribamp
