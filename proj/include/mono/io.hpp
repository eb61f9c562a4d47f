#pragma once

#include <cctype>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mono/chart.hpp"
#include "mono/classifier.hpp"
#include "mono/errors.hpp"
#include "mono/factorization.hpp"
#include "mono/sl2z.hpp"

namespace mono {

// All formats are plain UTF-8 text. '#' starts a comment, line endings are
// normalized to LF on read.

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  std::string out;
  out.reserve(text.size());
  for (char ch : text)
    if (ch != '\r') out.push_back(ch);
  return out;
}

inline void write_text_file(const std::filesystem::path& path,
                            const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

namespace io_detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

inline std::string strip_comment(std::string_view line) {
  const auto pos = line.find('#');
  if (pos != std::string_view::npos) line = line.substr(0, pos);
  return std::string(trim(line));
}

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

inline bool parse_int(std::string_view s, long long& out) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  long long v = 0;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    v = v * 10 + (s[i] - '0');
  }
  out = s[0] == '-' ? -v : v;
  return true;
}

struct MatrixScanner {
  std::string_view s;
  std::size_t pos = 0;
  long line = 0;

  void skip_ws() {
    while (pos < s.size() &&
           std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  }
  void expect(char ch) {
    skip_ws();
    if (pos >= s.size() || s[pos] != ch)
      throw ParseError(std::string("expected '") + ch + "' in matrix", line);
    ++pos;
  }
  BigInt integer() {
    skip_ws();
    std::size_t start = pos;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
      ++pos;
    if (pos == start || (pos == start + 1 && !std::isdigit(static_cast<unsigned char>(s[start]))))
      throw ParseError("expected an integer in matrix", line);
    return BigInt(std::string(s.substr(start, pos - start)));
  }
};

}  // namespace io_detail

// ---------------------------------------------------------------------------
// Matrices and words

inline std::string format_matrix(const Sl2z& m) {
  return "[[" + m.a.get_str() + "," + m.b.get_str() + "],[" + m.c.get_str() +
         "," + m.d.get_str() + "]]";
}

// Accepts [[a,b],[c,d]] with optional interior whitespace.
inline Sl2z parse_matrix(std::string_view text, long line = 0) {
  io_detail::MatrixScanner sc{text, 0, line};
  sc.expect('[');
  sc.expect('[');
  BigInt a = sc.integer();
  sc.expect(',');
  BigInt b = sc.integer();
  sc.expect(']');
  sc.expect(',');
  sc.expect('[');
  BigInt c = sc.integer();
  sc.expect(',');
  BigInt d = sc.integer();
  sc.expect(']');
  sc.expect(']');
  sc.skip_ws();
  if (sc.pos != text.size())
    throw ParseError("trailing characters after matrix", line);
  Sl2z m{std::move(a), std::move(b), std::move(c), std::move(d)};
  if (m.det() != 1)
    throw ParseError("matrix determinant is not 1", line);
  return m;
}

inline std::string to_token(Gen g) {
  switch (g) {
    case Gen::S1: return "s1";
    case Gen::S1Inv: return "s1^-1";
    case Gen::S2: return "s2";
    case Gen::S2Inv: return "s2^-1";
  }
  throw Error("bad generator");
}

inline std::string format_word(const GeneratorWord& w) {
  std::string s;
  for (Gen g : w) {
    if (!s.empty()) s += ' ';
    s += to_token(g);
  }
  return s;
}

inline GeneratorWord parse_word(std::string_view text) {
  GeneratorWord w;
  for (const std::string& tok : io_detail::split_ws(text)) {
    if (tok == "s1")
      w.push_back(Gen::S1);
    else if (tok == "s1^-1")
      w.push_back(Gen::S1Inv);
    else if (tok == "s2")
      w.push_back(Gen::S2);
    else if (tok == "s2^-1")
      w.push_back(Gen::S2Inv);
    else
      throw ParseError("unknown word token '" + tok + "'");
  }
  return w;
}

// ---------------------------------------------------------------------------
// Factorization files: one matrix per line, in factorization order

inline Factorization parse_factorization(const std::string& text) {
  std::vector<Sl2z> entries;
  std::istringstream in(text);
  std::string raw;
  long line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string body = io_detail::strip_comment(raw);
    if (body.empty()) continue;
    Sl2z m = parse_matrix(body, line);
    if (!is_positive_twist(m))
      throw ParseError("entry " + format_matrix(m) + " is not a conjugate of s1",
                       line);
    entries.push_back(std::move(m));
  }
  return Factorization(std::move(entries));
}

inline std::string serialize_factorization(const Factorization& f) {
  std::string out;
  for (const Sl2z& m : f.entries()) {
    out += format_matrix(m);
    out += '\n';
  }
  return out;
}

inline Factorization load_factorization(const std::filesystem::path& path) {
  return parse_factorization(read_text_file(path));
}

// ---------------------------------------------------------------------------
// Chart files
//
//   vertex <id> <black|boundary|deg6|deg12-|deg12+>
//   edge <id> <label> <from-vertex> <from-slot> <to-vertex> <to-slot>
//   boundary <id> [<id> ...]
//   hoop <id> <label> [parent <hoop-id>]
//
// Slot numbers are the rotation order: the edge ends at a vertex are listed
// counterclockwise as slots 0..deg-1.

inline std::string to_token(VertexKind k) {
  switch (k) {
    case VertexKind::Black: return "black";
    case VertexKind::Boundary: return "boundary";
    case VertexKind::Deg6: return "deg6";
    case VertexKind::Deg12Negative: return "deg12-";
    case VertexKind::Deg12Positive: return "deg12+";
  }
  throw Error("bad vertex kind");
}

inline VertexKind parse_vertex_kind(const std::string& tok, long line) {
  if (tok == "black") return VertexKind::Black;
  if (tok == "boundary") return VertexKind::Boundary;
  if (tok == "deg6") return VertexKind::Deg6;
  if (tok == "deg12-") return VertexKind::Deg12Negative;
  if (tok == "deg12+") return VertexKind::Deg12Positive;
  throw ParseError("unknown vertex kind '" + tok + "'", line);
}

inline Chart parse_chart(const std::string& text) {
  Chart c;
  std::istringstream in(text);
  std::string raw;
  long line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string body = io_detail::strip_comment(raw);
    if (body.empty()) continue;
    const auto tok = io_detail::split_ws(body);
    if (tok[0] == "vertex") {
      if (tok.size() != 3)
        throw ParseError("vertex needs: vertex <id> <kind>", line);
      c.vertices.push_back({tok[1], parse_vertex_kind(tok[2], line)});
    } else if (tok[0] == "edge") {
      if (tok.size() != 7)
        throw ParseError(
            "edge needs: edge <id> <label> <from> <from-slot> <to> <to-slot>",
            line);
      long long label, sfrom, sto;
      if (!io_detail::parse_int(tok[2], label) ||
          !io_detail::parse_int(tok[4], sfrom) ||
          !io_detail::parse_int(tok[6], sto))
        throw ParseError("edge label and slots must be integers", line);
      c.edges.push_back({tok[1],
                         static_cast<int>(label),
                         {tok[3], static_cast<int>(sfrom)},
                         {tok[5], static_cast<int>(sto)}});
    } else if (tok[0] == "boundary") {
      for (std::size_t i = 1; i < tok.size(); ++i)
        c.boundary_order.push_back(tok[i]);
    } else if (tok[0] == "hoop") {
      if (tok.size() != 3 && !(tok.size() == 5 && tok[3] == "parent"))
        throw ParseError("hoop needs: hoop <id> <label> [parent <id>]", line);
      long long label;
      if (!io_detail::parse_int(tok[2], label))
        throw ParseError("hoop label must be an integer", line);
      Hoop h{tok[1], static_cast<int>(label), ""};
      if (tok.size() == 5) h.parent = tok[4];
      c.hoops.push_back(std::move(h));
    } else {
      throw ParseError("unknown chart directive '" + tok[0] + "'", line);
    }
  }
  return c;
}

inline std::string serialize_chart(const Chart& c) {
  std::string out;
  for (const ChartVertex& v : c.vertices)
    out += "vertex " + v.id + " " + to_token(v.kind) + "\n";
  for (const ChartEdge& e : c.edges)
    out += "edge " + e.id + " " + std::to_string(e.label) + " " +
           e.from.vertex + " " + std::to_string(e.from.slot) + " " +
           e.to.vertex + " " + std::to_string(e.to.slot) + "\n";
  if (!c.boundary_order.empty()) {
    out += "boundary";
    for (const std::string& id : c.boundary_order) out += " " + id;
    out += '\n';
  }
  for (const Hoop& h : c.hoops) {
    out += "hoop " + h.id + " " + std::to_string(h.label);
    if (!h.parent.empty()) out += " parent " + h.parent;
    out += '\n';
  }
  return out;
}

inline Chart load_chart(const std::filesystem::path& path) {
  return parse_chart(read_text_file(path));
}

// Crossing files for intersection words: one "<edge-id> <+1|-1>" per line.
inline CrossingSequence parse_crossings(const std::string& text) {
  CrossingSequence path;
  std::istringstream in(text);
  std::string raw;
  long line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string body = io_detail::strip_comment(raw);
    if (body.empty()) continue;
    const auto tok = io_detail::split_ws(body);
    if (tok.size() != 2)
      throw ParseError("crossing needs: <edge-id> <+1|-1>", line);
    long long sign;
    if (!io_detail::parse_int(tok[1], sign) || (sign != 1 && sign != -1))
      throw ParseError("crossing sign must be +1 or -1", line);
    path.push_back({tok[0], static_cast<int>(sign)});
  }
  return path;
}

// DOT export; vertex kinds are shape-coded, edge labels printed.
inline std::string to_dot(const Chart& c) {
  auto shape = [](VertexKind k) {
    switch (k) {
      case VertexKind::Black: return "point";
      case VertexKind::Boundary: return "square";
      case VertexKind::Deg6: return "hexagon";
      case VertexKind::Deg12Negative:
      case VertexKind::Deg12Positive: return "doublecircle";
    }
    return "ellipse";
  };
  std::string out = "digraph chart {\n";
  for (const ChartVertex& v : c.vertices) {
    out += "  \"" + v.id + "\" [shape=" + shape(v.kind);
    if (v.kind == VertexKind::Deg12Negative) out += ", label=\"-\"";
    if (v.kind == VertexKind::Deg12Positive) out += ", label=\"+\"";
    if (v.kind == VertexKind::Black) out += ", label=\"\"";
    out += "];\n";
  }
  for (const ChartEdge& e : c.edges)
    out += "  \"" + e.from.vertex + "\" -> \"" + e.to.vertex + "\" [label=\"" +
           std::to_string(e.label) + "\"];\n";
  for (const Hoop& h : c.hoops)
    out += "  \"" + h.id + "\" [shape=circle, label=\"hoop " +
           std::to_string(h.label) + "\"];\n";
  out += "}\n";
  return out;
}

// ---------------------------------------------------------------------------
// Descriptor files: key = value lines
//
//   round = yes | no
//   factorization = <path> | inline matrices "[[..]]; [[..]]" | empty
//   twist = id | twisted
//   m = <integer>
//   lower = torus r=<int> | pao n=<int> parity=<even|odd>

inline SblfDescriptor parse_descriptor(const std::string& text,
                                       const std::filesystem::path& base_dir) {
  SblfDescriptor d;
  bool saw_round = false, saw_lower = false;
  std::istringstream in(text);
  std::string raw;
  long line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string body = io_detail::strip_comment(raw);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected key = value", line);
    const std::string key(io_detail::trim(std::string_view(body).substr(0, eq)));
    const std::string value(
        io_detail::trim(std::string_view(body).substr(eq + 1)));
    if (key == "round") {
      if (value != "yes" && value != "no")
        throw ParseError("round must be yes or no", line);
      d.has_round = value == "yes";
      saw_round = true;
    } else if (key == "factorization") {
      if (value.empty()) {
        d.higher_factorization = Factorization{};
      } else if (value.front() == '[') {
        std::vector<Sl2z> entries;
        std::size_t start = 0;
        while (start < value.size()) {
          auto end = value.find(';', start);
          if (end == std::string::npos) end = value.size();
          const auto piece =
              io_detail::trim(std::string_view(value).substr(start, end - start));
          if (!piece.empty()) {
            Sl2z m = parse_matrix(piece, line);
            if (!is_positive_twist(m))
              throw ParseError(
                  "entry " + format_matrix(m) + " is not a conjugate of s1",
                  line);
            entries.push_back(std::move(m));
          }
          start = end + 1;
        }
        d.higher_factorization = Factorization(std::move(entries));
      } else {
        d.higher_factorization = load_factorization(base_dir / value);
      }
    } else if (key == "twist") {
      if (value != "id" && value != "twisted")
        throw ParseError("twist must be id or twisted", line);
      d.higher_gluing_twist = value == "twisted";
    } else if (key == "m") {
      long long m;
      if (!io_detail::parse_int(value, m))
        throw ParseError("m must be an integer", line);
      d.section_framing = m;
    } else if (key == "lower") {
      const auto tok = io_detail::split_ws(value);
      if (tok.empty()) throw ParseError("lower gluing missing", line);
      auto field = [&](const std::string& t,
                       const std::string& name) -> std::string {
        if (t.rfind(name + "=", 0) != 0)
          throw ParseError("expected " + name + "=<value> in lower gluing",
                           line);
        return t.substr(name.size() + 1);
      };
      if (tok[0] == "torus") {
        if (tok.size() != 2) throw ParseError("lower = torus r=<int>", line);
        long long r;
        if (!io_detail::parse_int(field(tok[1], "r"), r) || r < 0)
          throw ParseError("torus gluing needs r >= 0", line);
        d.lower_gluing = TorusGluing{r};
      } else if (tok[0] == "pao") {
        if (tok.size() != 3)
          throw ParseError("lower = pao n=<int> parity=<even|odd>", line);
        long long n;
        if (!io_detail::parse_int(field(tok[1], "n"), n) || n < 0)
          throw ParseError("pao gluing needs n >= 0", line);
        const std::string parity = field(tok[2], "parity");
        if (parity != "even" && parity != "odd")
          throw ParseError("parity must be even or odd", line);
        d.lower_gluing =
            PaoGluing{n, parity == "even" ? Parity::Even : Parity::Odd};
      } else {
        throw ParseError("lower gluing must be torus or pao", line);
      }
      saw_lower = true;
    } else {
      throw ParseError("unknown descriptor key '" + key + "'", line);
    }
  }
  if (!saw_round) throw ParseError("descriptor is missing 'round ='");
  if (d.has_round && !saw_lower)
    throw ParseError("a round descriptor needs 'lower = pao ...'");
  if (d.has_round && !std::holds_alternative<PaoGluing>(d.lower_gluing))
    throw ParseError("a round descriptor needs a pao gluing");
  return d;
}

inline std::string serialize_descriptor(const SblfDescriptor& d) {
  std::string out;
  out += std::string("round = ") + (d.has_round ? "yes" : "no") + "\n";
  out += "factorization =";
  bool first = true;
  for (const Sl2z& m : d.higher_factorization.entries()) {
    out += first ? " " : "; ";
    out += format_matrix(m);
    first = false;
  }
  out += '\n';
  out += std::string("twist = ") + (d.higher_gluing_twist ? "twisted" : "id") +
         "\n";
  out += "m = " + std::to_string(d.section_framing) + "\n";
  if (const auto* torus = std::get_if<TorusGluing>(&d.lower_gluing))
    out += "lower = torus r=" + std::to_string(torus->r) + "\n";
  else if (const auto* pao = std::get_if<PaoGluing>(&d.lower_gluing))
    out += "lower = pao n=" + std::to_string(pao->n) + " parity=" +
           (pao->parity == Parity::Even ? "even" : "odd") + "\n";
  return out;
}

inline SblfDescriptor load_descriptor(const std::filesystem::path& path) {
  return parse_descriptor(read_text_file(path), path.parent_path());
}

}  // namespace mono
