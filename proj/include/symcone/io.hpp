#pragma once

// Plain-text cone files and run reports.
//
//   * comment
//   H-representation            (or V-representation)
//   begin
//    m n+1 integer              (or rational)
//    0 a_1 ... a_n              one row per inequality a.x >= 0 (or ray)
//   end
//   symmetry                    optional
//   begin
//    k n                        k generators acting on n coordinates
//    (1 2)(3 4)                 1-based cycles, or the n images 2 1 4 3
//   end
//   known_rays                  optional, same layout as the main block
//   begin
//    ...
//   end
//
// Only cones are accepted: the leading column must be 0.

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "symcone/cone.hpp"
#include "symcone/group.hpp"
#include "symcone/linalg.hpp"
#include "symcone/methods.hpp"

namespace symcone {

class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

enum class Representation { H, V };

struct ConeFile {
  Representation kind = Representation::H;
  std::size_t dim = 0;
  std::vector<QVector> rows;
  std::optional<PermGroup> symmetry;
  std::optional<std::vector<QVector>> known_rays;

  ConeHRep hrep() const { return ConeHRep(dim, rows); }
  ConeVRep vrep() const { return ConeVRep(dim, rows); }
  PermGroup group() const { return symmetry ? *symmetry : PermGroup::trivial(dim); }
};

namespace detail {

struct Line {
  std::size_t number;
  std::vector<std::string> tokens;
  std::string text;
};

class LineReader {
 public:
  LineReader(std::istream& in, std::string source) : source_(std::move(source)) {
    std::string raw;
    std::size_t no = 0;
    while (std::getline(in, raw)) {
      ++no;
      if (!raw.empty() && raw.back() == '\r') raw.pop_back();
      const auto first = raw.find_first_not_of(" \t");
      if (first == std::string::npos || raw[first] == '*' || raw[first] == '#') continue;
      Line l{no, {}, raw.substr(first)};
      std::istringstream is(raw);
      std::string t;
      while (is >> t) l.tokens.push_back(t);
      lines_.push_back(std::move(l));
    }
    last_line_ = no;
  }

  bool done() const { return pos_ >= lines_.size(); }
  const Line& peek() const { return lines_.at(pos_); }
  const Line& next() {
    if (done()) fail(last_line_, "unexpected end of file");
    return lines_[pos_++];
  }
  [[noreturn]] void fail(std::size_t line, const std::string& what) const { throw ParseError(source_, line, what); }
  const std::string& source() const { return source_; }

 private:
  std::string source_;
  std::vector<Line> lines_;
  std::size_t pos_ = 0;
  std::size_t last_line_ = 0;
};

inline Rational parse_number(const std::string& tok, const LineReader& r, std::size_t line) {
  static const std::regex pattern(R"([+-]?[0-9]+(/[0-9]+)?)");
  if (!std::regex_match(tok, pattern)) r.fail(line, "'" + tok + "' is not an integer or a fraction p/q");
  std::string t = tok[0] == '+' ? tok.substr(1) : tok;
  const auto slash = t.find('/');
  if (slash != std::string::npos && mpz_class(t.substr(slash + 1)) == 0) r.fail(line, "zero denominator in '" + tok + "'");
  Rational q(t);
  q.canonicalize();
  return q;
}

inline void expect_keyword(LineReader& r, const std::string& kw) {
  const auto& l = r.next();
  if (l.tokens.size() != 1 || l.tokens[0] != kw) r.fail(l.number, "expected '" + kw + "', found '" + l.text + "'");
}

/// Reads "begin / m n+1 type / rows / end"; returns the rows without the leading column.
inline std::vector<QVector> read_matrix(LineReader& r, std::optional<std::size_t>& dim, const std::string& what) {
  expect_keyword(r, "begin");
  const auto& h = r.next();
  if (h.tokens.size() != 3) r.fail(h.number, "expected 'rows columns integer|rational' header for " + what);
  std::size_t m = 0, cols = 0;
  try {
    m = std::stoul(h.tokens[0]);
    cols = std::stoul(h.tokens[1]);
  } catch (const std::exception&) {
    r.fail(h.number, "malformed size header '" + h.text + "'");
  }
  const std::string type = h.tokens[2];
  if (type != "integer" && type != "rational") r.fail(h.number, "number type must be integer or rational, got '" + type + "'");
  if (cols < 2) r.fail(h.number, "need at least 2 columns");
  if (dim && *dim != cols - 1)
    r.fail(h.number, what + " has dimension " + std::to_string(cols - 1) + ", expected " + std::to_string(*dim));
  dim = cols - 1;
  std::vector<QVector> rows;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& l = r.next();
    if (l.tokens.size() == 1 && l.tokens[0] == "end")
      r.fail(l.number, what + " declares " + std::to_string(m) + " rows but has " + std::to_string(i));
    if (l.tokens.size() != cols)
      r.fail(l.number, "row has " + std::to_string(l.tokens.size()) + " entries, expected " + std::to_string(cols));
    QVector row;
    for (std::size_t c = 0; c < cols; ++c) {
      Rational x = parse_number(l.tokens[c], r, l.number);
      if (type == "integer" && x.get_den() != 1) r.fail(l.number, "fraction '" + l.tokens[c] + "' in an integer matrix");
      if (c == 0) {
        if (x != 0) r.fail(l.number, "leading column must be 0 (only cones are supported)");
        continue;
      }
      row.push_back(std::move(x));
    }
    rows.push_back(std::move(row));
  }
  const auto& e = r.next();
  if (e.tokens.size() != 1 || e.tokens[0] != "end") r.fail(e.number, "expected 'end' after " + std::to_string(m) + " rows");
  return rows;
}

inline Permutation parse_permutation(const Line& l, std::size_t degree, const LineReader& r) {
  std::string text = l.text;
  for (auto& c : text)
    if (c == ',') c = ' ';
  auto to_point = [&](const std::string& tok) -> Point {
    static const std::regex digits("[0-9]+");
    if (!std::regex_match(tok, digits)) r.fail(l.number, "bad point '" + tok + "' in permutation");
    const unsigned long p = std::stoul(tok);
    if (p < 1 || p > degree) r.fail(l.number, "point " + tok + " outside 1.." + std::to_string(degree));
    return static_cast<Point>(p - 1);
  };
  try {
    if (text.find('(') != std::string::npos) {
      std::vector<std::vector<Point>> cycles;
      std::size_t pos = 0;
      while ((pos = text.find('(', pos)) != std::string::npos) {
        const auto close = text.find(')', pos);
        if (close == std::string::npos) r.fail(l.number, "unbalanced parenthesis in permutation");
        std::istringstream is(text.substr(pos + 1, close - pos - 1));
        std::vector<Point> cyc;
        std::string tok;
        while (is >> tok) cyc.push_back(to_point(tok));
        if (!cyc.empty()) cycles.push_back(std::move(cyc));
        pos = close + 1;
      }
      return Permutation::from_cycles(degree, cycles);
    }
    std::vector<Point> images;
    for (const auto& tok : l.tokens) images.push_back(to_point(tok));
    if (images.size() != degree)
      r.fail(l.number, "permutation has " + std::to_string(images.size()) + " images, expected " + std::to_string(degree));
    return Permutation(std::move(images));
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    r.fail(l.number, std::string("invalid permutation: ") + e.what());
  }
}

inline PermGroup read_symmetry(LineReader& r, std::size_t dim) {
  expect_keyword(r, "begin");
  const auto& h = r.next();
  if (h.tokens.size() != 2) r.fail(h.number, "expected 'generators degree' header for symmetry");
  std::size_t k = 0, degree = 0;
  try {
    k = std::stoul(h.tokens[0]);
    degree = std::stoul(h.tokens[1]);
  } catch (const std::exception&) {
    r.fail(h.number, "malformed symmetry header '" + h.text + "'");
  }
  if (degree != dim) r.fail(h.number, "symmetry degree " + std::to_string(degree) + " differs from dimension " + std::to_string(dim));
  std::vector<Permutation> gens;
  for (std::size_t i = 0; i < k; ++i) gens.push_back(parse_permutation(r.next(), degree, r));
  expect_keyword(r, "end");
  return PermGroup(degree, std::move(gens));
}

}  // namespace detail

inline ConeFile parse_cone_file(std::istream& in, const std::string& source = "<input>") {
  detail::LineReader r(in, source);
  ConeFile f;
  std::optional<std::size_t> dim;
  bool have_main = false, kind_set = false;
  while (!r.done()) {
    const auto& l = r.peek();
    const std::string kw = l.tokens.size() == 1 ? l.tokens[0] : std::string();
    if (kw == "H-representation" || kw == "V-representation") {
      if (kind_set || have_main) r.fail(l.number, "representation declared twice or after the matrix");
      f.kind = kw[0] == 'H' ? Representation::H : Representation::V;
      kind_set = true;
      r.next();
    } else if (kw == "begin") {
      if (have_main) r.fail(l.number, "second matrix block");
      f.rows = detail::read_matrix(r, dim, "matrix");
      have_main = true;
    } else if (kw == "symmetry") {
      if (!have_main) r.fail(l.number, "symmetry block before the matrix");
      if (f.symmetry) r.fail(l.number, "second symmetry block");
      r.next();
      f.symmetry = detail::read_symmetry(r, *dim);
    } else if (kw == "known_rays") {
      if (!have_main) r.fail(l.number, "known_rays block before the matrix");
      if (f.known_rays) r.fail(l.number, "second known_rays block");
      r.next();
      f.known_rays = detail::read_matrix(r, dim, "known_rays");
    } else if (!l.tokens.empty() && l.tokens[0] == "linearity") {
      r.fail(l.number, "linearity sections are not supported");
    } else {
      r.fail(l.number, "unexpected '" + l.text + "'");
    }
  }
  if (!have_main) throw ParseError(source, 0, "no matrix block found");
  f.dim = *dim;
  return f;
}

inline ConeFile read_cone_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return parse_cone_file(in, path);
}

namespace detail {

inline void print_matrix(std::ostream& os, std::size_t dim, const std::vector<std::vector<QVector>>& groups,
                         const std::vector<std::string>& labels) {
  std::size_t m = 0;
  for (const auto& g : groups) m += g.size();
  os << "begin\n " << m << ' ' << dim + 1 << " integer\n";
  for (std::size_t k = 0; k < groups.size(); ++k) {
    if (!labels.empty()) os << "* " << labels[k] << '\n';
    for (const auto& row : groups[k]) {
      os << " 0";
      for (const auto& x : row) os << ' ' << x;
      os << '\n';
    }
  }
  os << "end\n";
}

}  // namespace detail

/**
 * Canonical text: rows are primitive integer vectors in lexicographic order,
 * grouped by orbit (orbits by canonical representative) when the group is
 * nontrivial.
 */
inline std::string print_cone_file(const ConeFile& f) {
  std::ostringstream os;
  os << (f.kind == Representation::H ? "H-representation" : "V-representation") << '\n';
  const auto rows = canonical_rows(f.rows);
  std::vector<std::vector<QVector>> groups;
  std::vector<std::string> labels;
  if (f.symmetry && !f.symmetry->is_trivial() && !rows.empty()) {
    const auto part = orbit_partition(rows, *f.symmetry);
    for (std::size_t k = 0; k < part.orbits.size(); ++k) {
      std::vector<QVector> g;
      for (auto i : part.members[k]) g.push_back(rows[i]);
      std::sort(g.begin(), g.end());
      labels.push_back("orbit " + std::to_string(k) + " size " + std::to_string(g.size()));
      groups.push_back(std::move(g));
    }
  } else {
    groups.push_back(rows);
  }
  detail::print_matrix(os, f.dim, groups, labels);
  if (f.symmetry) {
    const auto& gens = f.symmetry->generators();
    os << "symmetry\nbegin\n " << gens.size() << ' ' << f.dim << '\n';
    for (const auto& g : gens) os << ' ' << g.to_cycle_string() << '\n';
    os << "end\n";
  }
  if (f.known_rays) {
    os << "known_rays\n";
    detail::print_matrix(os, f.dim, {canonical_rows(*f.known_rays)}, {});
  }
  return os.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("error writing " + path);
}

// ---------------------------------------------------------------------------
// Run reports

struct ReportOrbit {
  QVector representative;
  std::uint64_t size = 0;
  std::uint64_t stabilizer_order = 0;
  std::optional<std::size_t> incidence;
  std::string status = "TREATED";
};

/**
 * Result of one command. machine() is line-oriented key=value text without
 * timing, so identical runs give identical bytes; text() is for people.
 */
struct RunReport {
  std::string method;
  Verdict verdict = Verdict::Complete;
  std::uint64_t group_order = 1;
  std::vector<ReportOrbit> orbits;
  std::vector<std::pair<std::string, std::string>> fields;  // extra key=value lines, in order
  std::vector<std::string> notes;
  double seconds = 0;

  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (const auto& o : orbits) t += o.size;
    return t;
  }

  void add(const std::string& key, const std::string& value) { fields.emplace_back(key, value); }
  void add(const std::string& key, std::uint64_t value) { fields.emplace_back(key, std::to_string(value)); }

  std::string machine() const {
    std::ostringstream os;
    os << "method=" << method << '\n';
    os << "verdict=" << to_string(verdict) << '\n';
    os << "group_order=" << group_order << '\n';
    os << "orbit_count=" << orbits.size() << '\n';
    os << "total=" << total() << '\n';
    for (std::size_t i = 0; i < orbits.size(); ++i) {
      const auto& o = orbits[i];
      const std::string p = "orbit." + std::to_string(i) + ".";
      os << p << "representative=" << to_string(o.representative) << '\n';
      os << p << "size=" << o.size << '\n';
      os << p << "stabilizer_order=" << o.stabilizer_order << '\n';
      if (o.incidence) os << p << "incidence=" << *o.incidence << '\n';
      os << p << "status=" << o.status << '\n';
    }
    for (const auto& [k, v] : fields) os << k << '=' << v << '\n';
    for (std::size_t i = 0; i < notes.size(); ++i) os << "note." << i << '=' << notes[i] << '\n';
    return os.str();
  }

  std::string text() const {
    std::ostringstream os;
    os << method << ": " << to_string(verdict) << ", " << orbits.size() << (orbits.size() == 1 ? " orbit" : " orbits")
       << ", " << total() << " elements, group order " << group_order << '\n';
    for (std::size_t i = 0; i < orbits.size(); ++i) {
      const auto& o = orbits[i];
      os << "  O" << i << "  size " << o.size << "  stab " << o.stabilizer_order;
      if (o.incidence) os << "  inc " << *o.incidence;
      os << "  " << o.status << "  [" << to_string(o.representative) << "]\n";
    }
    for (const auto& [k, v] : fields) os << "  " << k << ": " << v << '\n';
    for (const auto& n : notes) os << "  note: " << n << '\n';
    std::ostringstream t;
    t.precision(3);
    t << std::fixed << seconds;
    os << "  time: " << t.str() << " s\n";
    return os.str();
  }
};

inline std::vector<ReportOrbit> report_orbits(const std::vector<Orbit>& orbits) {
  std::vector<ReportOrbit> out;
  for (const auto& o : orbits) out.push_back(ReportOrbit{o.representative, o.size, o.stabilizer_order, std::nullopt, "TREATED"});
  return out;
}

}  // namespace symcone
