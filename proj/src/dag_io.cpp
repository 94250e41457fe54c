#include "nwdag/dag_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "nwdag/error.hpp"

namespace nwdag {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_dag(std::ostream& out, const NonlinearDag& dag) {
  out << "nwdag v1 N=" << dag.node_count() << " d=" << dag.input_dim() << '\n';
  for (const Edge& e : dag.edges()) {
    out << e.dst << ' ' << e.src << ' ' << to_string(e.kind);
    if (e.weight) out << ' ' << format_double(*e.weight);
    out << '\n';
  }
}

std::string format_dag(const NonlinearDag& dag) {
  std::ostringstream out;
  write_dag(out, dag);
  return out.str();
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

std::size_t parse_index(std::string_view tok, std::size_t line, const char* what) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError(line, std::string("expected a non-negative integer for ") + what + ", got '" + std::string(tok) + "'");
  }
  return value;
}

double parse_weight(std::string_view tok, std::size_t line) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError(line, "malformed weight '" + std::string(tok) + "'");
  }
  return value;
}

std::size_t parse_header_field(std::string_view tok, std::string_view key, std::size_t line) {
  if (tok.substr(0, key.size()) != key) throw ParseError(line, "header field '" + std::string(tok) + "' should start with " + std::string(key));
  return parse_index(tok.substr(key.size()), line, "header field");
}

}  // namespace

NonlinearDag read_dag(std::istream& in) {
  std::string raw;
  std::size_t line = 0;
  bool have_header = false;
  std::size_t n = 0, d = 0;
  std::vector<Edge> edges;

  while (std::getline(in, raw)) {
    ++line;
    auto tokens = split_ws(raw);
    if (tokens.empty() || tokens.front().front() == '#') continue;

    if (!have_header) {
      if (tokens.size() != 4 || tokens[0] != "nwdag" || tokens[1] != "v1") {
        throw ParseError(line, "expected header 'nwdag v1 N=<N> d=<d>'");
      }
      n = parse_header_field(tokens[2], "N=", line);
      d = parse_header_field(tokens[3], "d=", line);
      have_header = true;
      continue;
    }

    if (tokens.size() < 3) throw ParseError(line, "truncated edge line, expected 'dst src kind [weight]'");
    Edge e;
    e.dst = parse_index(tokens[0], line, "dst");
    e.src = parse_index(tokens[1], line, "src");
    if (tokens[2] == "param") {
      e.kind = EdgeKind::Param;
    } else if (tokens[2] == "fixed") {
      e.kind = EdgeKind::Fixed;
    } else if (tokens[2] == "nonlinear") {
      e.kind = EdgeKind::Nonlinear;
    } else {
      throw ParseError(line, "unknown edge kind '" + std::string(tokens[2]) + "'");
    }
    const bool weighted = e.kind != EdgeKind::Nonlinear;
    if (weighted && tokens.size() != 4) throw ParseError(line, std::string(to_string(e.kind)) + " edge needs exactly one weight");
    if (!weighted && tokens.size() != 3) throw ParseError(line, "nonlinear edge takes no weight");
    if (weighted) e.weight = parse_weight(tokens[3], line);
    edges.push_back(e);
  }
  if (!have_header) throw ParseError(line + 1, "missing header 'nwdag v1 N=<N> d=<d>'");
  return NonlinearDag(n, d, std::move(edges));
}

NonlinearDag parse_dag(const std::string& text) {
  std::istringstream in(text);
  return read_dag(in);
}

void save_dag(const std::filesystem::path& path, const NonlinearDag& dag) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  write_dag(out, dag);
  if (!out) throw Error("write to '" + path.string() + "' failed");
}

NonlinearDag load_dag(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return read_dag(in);
}

}  // namespace nwdag
