#pragma once

// Edge-list text format:
//
//   n m
//   u v        (m lines, 0 <= u < v < n)
//
// ASCII decimal, one record per newline-terminated line.

#include <charconv>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rgis/error.hpp"
#include "rgis/graph.hpp"

namespace rgis {

namespace detail {

inline bool parse_two(std::string_view line, std::size_t& a, std::size_t& b) {
  const char* p = line.data();
  const char* end = p + line.size();
  while (end > p && (end[-1] == '\r')) --end;
  auto r1 = std::from_chars(p, end, a);
  if (r1.ec != std::errc{} || r1.ptr == end || *r1.ptr != ' ') return false;
  p = r1.ptr + 1;
  auto r2 = std::from_chars(p, end, b);
  return r2.ec == std::errc{} && r2.ptr == end;
}

}  // namespace detail

inline Graph from_edge_list(std::string_view text) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  auto next_line = [&](std::string_view& out) {
    if (pos >= text.size()) return false;
    const std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      out = text.substr(pos);
      pos = text.size();
    } else {
      out = text.substr(pos, nl - pos);
      pos = nl + 1;
    }
    ++line_no;
    return true;
  };

  std::string_view line;
  if (!next_line(line)) throw ParseError(1, "missing header line \"n m\"");
  std::size_t n = 0, m = 0;
  if (!detail::parse_two(line, n, m)) throw ParseError(line_no, "malformed header, expected \"n m\"");
  if (n > 0xFFFF'FFFFull) throw ParseError(line_no, "vertex count too large");

  GraphBuilder b(n);
  std::size_t read = 0;
  while (next_line(line)) {
    if (line.empty() && pos >= text.size()) break;
    std::size_t u = 0, v = 0;
    if (!detail::parse_two(line, u, v)) throw ParseError(line_no, "malformed edge line, expected \"u v\"");
    if (u >= n || v >= n) throw ParseError(line_no, "vertex id out of range (n = " + std::to_string(n) + ")");
    if (u == v) throw ParseError(line_no, "self-loop at vertex " + std::to_string(u));
    if (u > v) throw ParseError(line_no, "endpoints must satisfy u < v");
    if (!b.add_edge(static_cast<Vertex>(u), static_cast<Vertex>(v)))
      throw ParseError(line_no, "duplicate edge " + std::to_string(u) + " " + std::to_string(v));
    ++read;
  }
  if (read != m)
    throw ParseError(line_no, "header declares " + std::to_string(m) + " edges, found " + std::to_string(read));
  return std::move(b).build();
}

inline std::string to_edge_list(const Graph& g) {
  std::string out;
  out.reserve(16 + g.edge_count() * 12);
  out += std::to_string(g.size()) + ' ' + std::to_string(g.edge_count()) + '\n';
  for (Vertex u = 0; u < g.size(); ++u)
    bits::for_each(g.row(u), [&](Vertex v) {
      if (v > u) {
        out += std::to_string(u);
        out += ' ';
        out += std::to_string(v);
        out += '\n';
      }
    });
  return out;
}

inline Graph read_edge_list_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_edge_list(ss.str());
}

inline void write_edge_list_file(const Graph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << to_edge_list(g);
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace rgis
