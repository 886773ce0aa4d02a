#include "repnet/matrix_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace repnet {

namespace {

void append_value(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

std::string rep_to_text(const LinearRep& rep) {
  std::string out;
  out += "semantics ";
  out += to_string(rep.semantics);
  out += "\nblock_dim " + std::to_string(rep.block_dim) + "\n";
  for (const auto& [name, map] : rep.maps) {
    out += "matrix " + name + " " + std::to_string(map.m.rows) + " " +
           std::to_string(map.m.cols) + "\n";
    for (std::size_t r = 0; r < map.m.rows; ++r) {
      for (std::size_t c = 0; c < map.m.cols; ++c) {
        if (c) out += ' ';
        append_value(out, map.m.at(r, c));
      }
      out += '\n';
    }
    if (!map.offset.empty()) {
      out += "offset " + name + " " + std::to_string(map.offset.size()) + "\n";
      for (std::size_t c = 0; c < map.offset.size(); ++c) {
        if (c) out += ' ';
        append_value(out, map.offset[c]);
      }
      out += '\n';
    }
  }
  return out;
}

LinearRep rep_from_text(const std::string& text) {
  LinearRep rep;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;

  auto next_line = [&](std::string& out) {
    while (std::getline(in, line)) {
      ++line_no;
      const std::size_t hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      std::size_t i = 0;
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      if (i < line.size()) {
        out = line;
        return true;
      }
    }
    return false;
  };

  auto fail = [&](const std::string& msg) -> void {
    throw std::runtime_error("matrix file line " + std::to_string(line_no) + ": " + msg);
  };

  std::string cur;
  while (next_line(cur)) {
    std::istringstream ls(cur);
    std::string kw;
    ls >> kw;
    if (kw == "semantics") {
      std::string s;
      ls >> s;
      if (s == "concat") rep.semantics = ProductSemantics::concat;
      else if (s == "tensor") rep.semantics = ProductSemantics::tensor;
      else fail("unknown semantics " + s);
    } else if (kw == "block_dim") {
      if (!(ls >> rep.block_dim)) fail("expected block dimension");
    } else if (kw == "matrix") {
      std::string name;
      std::size_t rows = 0, cols = 0;
      if (!(ls >> name >> rows >> cols)) fail("expected: matrix <name> <rows> <cols>");
      Tensor2 m(rows, cols);
      for (std::size_t r = 0; r < rows; ++r) {
        std::string row_line;
        if (!next_line(row_line)) fail("unexpected end of file in matrix " + name);
        std::istringstream rs(row_line);
        for (std::size_t c = 0; c < cols; ++c)
          if (!(rs >> m.at(r, c))) fail("bad value in matrix " + name);
      }
      rep.maps[name].m = std::move(m);
    } else if (kw == "offset") {
      std::string name;
      std::size_t len = 0;
      if (!(ls >> name >> len)) fail("expected: offset <name> <len>");
      if (!rep.maps.count(name)) fail("offset before matrix for " + name);
      std::string row_line;
      if (!next_line(row_line)) fail("unexpected end of file in offset " + name);
      std::istringstream rs(row_line);
      std::vector<double> off(len);
      for (std::size_t c = 0; c < len; ++c)
        if (!(rs >> off[c])) fail("bad value in offset " + name);
      rep.maps[name].offset = std::move(off);
    } else {
      fail("unknown directive " + kw);
    }
  }
  if (rep.maps.empty()) throw std::runtime_error("matrix file contains no matrices");
  return rep;
}

void write_rep(const std::string& path, const LinearRep& rep) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << rep_to_text(rep);
}

LinearRep read_rep(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return rep_from_text(ss.str());
}

}  // namespace repnet
