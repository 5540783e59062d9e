#include "ribamp/dsl.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace ribamp {

namespace {

struct Token {
  std::string text;
  int col = 0;  // 1-based
};

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) &&
           line[j] != '#')
      ++j;
    out.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
    i = j;
  }
  return out;
}

[[noreturn]] void syntax_error(int line, int col, const std::string& what) {
  throw ParseError("SyntaxError", "line " + std::to_string(line) + ", col " +
                                      std::to_string(col) + ": " + what);
}

}  // namespace

GraphDescription parse_graph_description(const std::string& text) {
  GraphDescription gd;
  bool have_graph = false;
  // dart -> line of its rotation appearance / its edge-or-ext appearance
  std::unordered_map<std::string, int> rot_line, use_line;

  auto note_rotation = [&](const std::string& name, int line, int col) {
    auto [it, fresh] = rot_line.emplace(name, line);
    if (!fresh)
      syntax_error(line, col,
                   "DuplicateDart: dart '" + name + "' already listed at line " +
                       std::to_string(it->second));
  };
  auto note_use = [&](const std::string& name, int line, int col) {
    auto [it, fresh] = use_line.emplace(name, line);
    if (!fresh)
      syntax_error(line, col,
                   "DuplicateDart: dart '" + name + "' already used at line " +
                       std::to_string(it->second));
  };

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::vector<Token> tok = tokenize(raw);
    if (tok.empty()) continue;
    const std::string& kw = tok[0].text;

    if (kw == "graph") {
      if (have_graph) syntax_error(lineno, tok[0].col, "duplicate 'graph' line");
      if (tok.size() != 2) syntax_error(lineno, tok[0].col, "'graph' takes one name");
      gd.name = tok[1].text;
      have_graph = true;
      continue;
    }
    if (!have_graph)
      syntax_error(lineno, tok[0].col, "file must start with a 'graph <name>' line");

    if (kw == "vertex") {
      // re-split on the colon: "vertex <vid>: <dart> ..."
      std::string::size_type hash = raw.find('#');
      std::string body = hash == std::string::npos ? raw : raw.substr(0, hash);
      std::string::size_type colon = body.find(':');
      if (colon == std::string::npos)
        syntax_error(lineno, tok[0].col, "'vertex' line needs '<vid>: <darts...>'");
      std::vector<Token> head = tokenize(body.substr(0, colon));
      if (head.size() != 2)
        syntax_error(lineno, tok[0].col, "'vertex' takes one vertex id before ':'");
      std::string tail = body.substr(colon + 1);
      std::vector<Token> dtok = tokenize(tail);
      std::vector<std::string> darts;
      darts.reserve(dtok.size());
      for (const Token& t : dtok) {
        note_rotation(t.text, lineno, static_cast<int>(colon) + 1 + t.col);
        darts.push_back(t.text);
      }
      gd.vertices.emplace_back(head[1].text, std::move(darts));
      continue;
    }
    if (kw == "edge") {
      if (tok.size() != 3) syntax_error(lineno, tok[0].col, "'edge' takes two darts");
      note_use(tok[1].text, lineno, tok[1].col);
      if (tok[2].text == tok[1].text)
        syntax_error(lineno, tok[2].col,
                     "SelfPairedDart: edge pairs dart '" + tok[1].text + "' with itself");
      note_use(tok[2].text, lineno, tok[2].col);
      gd.edge_pairs.emplace_back(tok[1].text, tok[2].text);
      continue;
    }
    if (kw == "ext") {
      if (tok.size() != 3)
        syntax_error(lineno, tok[0].col, "'ext' takes a leg number and a dart");
      int num = 0;
      try {
        std::size_t used = 0;
        num = std::stoi(tok[1].text, &used);
        if (used != tok[1].text.size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        syntax_error(lineno, tok[1].col, "leg number must be an integer");
      }
      note_use(tok[2].text, lineno, tok[2].col);
      gd.legs.emplace_back(num, tok[2].text);
      continue;
    }
    syntax_error(lineno, tok[0].col, "unknown keyword '" + kw + "'");
  }
  if (!have_graph) syntax_error(1, 1, "empty graph file");
  return gd;
}

RibbonGraph parse_graph_dsl(const std::string& text) {
  return build_graph(parse_graph_description(text));
}

RibbonGraph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("FileNotFound", "cannot open graph file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_graph_dsl(ss.str());
}

std::string serialize_graph_dsl(const RibbonGraph& g) {
  std::ostringstream out;
  out << "graph " << (g.name.empty() ? "unnamed" : g.name) << "\n";
  for (int v = 0; v < g.vertex_count(); ++v) {
    out << "vertex " << g.vertex_names[v] << ":";
    for (int d : g.rotations[v]) out << " " << g.dart_names[d];
    out << "\n";
  }
  for (const auto& e : g.edges)
    out << "edge " << g.dart_names[e[0]] << " " << g.dart_names[e[1]] << "\n";
  for (int k = 0; k < g.leg_count(); ++k)
    out << "ext " << (k + 1) << " " << g.dart_names[g.legs[k]] << "\n";
  return out.str();
}

}  // namespace ribamp
