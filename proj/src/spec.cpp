#include "recurdim/spec.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "recurdim/error.hpp"

namespace recurdim {

AffineMap derive_affine_map(const Interval& domain, const Interval& image, Orientation orientation) {
  const Rational ratio = image.length() / domain.length();
  if (orientation == Orientation::increasing) {
    return {ratio, image.lo - ratio * domain.lo};
  }
  return {-ratio, image.hi + ratio * domain.lo};
}

RfifSpec::RfifSpec(std::vector<Node> nodes, std::vector<MapSpec> maps) : nodes_(std::move(nodes)) {
  const int N = static_cast<int>(nodes_.size()) - 1;
  if (N < 2) throw SpecError("at least three nodes (N >= 2) are required");
  for (int i = 1; i <= N; ++i) {
    if (!(nodes_[i - 1].x < nodes_[i].x)) {
      throw SpecError("x values must be strictly increasing (x_" + std::to_string(i) + ")");
    }
  }
  if (static_cast<int>(maps.size()) != N) {
    throw SpecError("map count " + std::to_string(maps.size()) + " != N = " + std::to_string(N));
  }
  maps_.resize(static_cast<std::size_t>(N));
  std::vector<bool> seen(static_cast<std::size_t>(N) + 1, false);
  for (auto& m : maps) {
    if (m.n < 1 || m.n > N) throw SpecError("map index " + std::to_string(m.n) + " out of range");
    if (seen[m.n]) throw SpecError("duplicate map index " + std::to_string(m.n));
    seen[m.n] = true;
    if (m.ell < 0 || m.r > N || !(m.ell < m.r)) {
      throw SpecError("map " + std::to_string(m.n) + ": need 0 <= ell < r <= N");
    }
    m.L = derive_affine_map({nodes_[m.ell].x, nodes_[m.r].x}, {nodes_[m.n - 1].x, nodes_[m.n].x},
                            m.orientation);
    maps_[m.n - 1] = std::move(m);
  }
}

double RfifSpec::contraction_bound() const {
  double beta = 0.0;
  for (const auto& m : maps_) beta = std::max(beta, poly_abs_range(m.S, domain_of(m.n)).max);
  return beta;
}

// ---------------------------------------------------------------------------
// Config parsing

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

struct Value {
  std::string text;
  int line = 0;
  int column = 0;
};

struct Section {
  enum class Kind { data, map } kind;
  int line = 0;
  std::map<std::string, Value> entries;
};

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

std::vector<Section> tokenize(std::string_view text) {
  std::vector<Section> sections;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = strip_comment(raw);
    auto body = trim(line);
    if (body.empty()) continue;
    const int indent = static_cast<int>(line.find_first_not_of(" \t")) + 1;

    if (body == "[data]") {
      sections.push_back({Section::Kind::data, lineno, {}});
      continue;
    }
    if (body == "[[map]]") {
      sections.push_back({Section::Kind::map, lineno, {}});
      continue;
    }
    if (body.front() == '[') throw SpecError("unknown section header '" + std::string(body) + "'", lineno, indent);

    auto eq = body.find('=');
    if (eq == std::string_view::npos) throw SpecError("expected 'key = value'", lineno, indent);
    if (sections.empty()) throw SpecError("key outside of any section", lineno, indent);
    std::string key(trim(body.substr(0, eq)));
    auto rest = body.substr(eq + 1);
    const auto lead = rest.find_first_not_of(" \t");
    const int value_col = indent + static_cast<int>(eq) + 1 +
                          static_cast<int>(lead == std::string_view::npos ? 0 : lead);
    std::string value(trim(rest));
    const int value_line = lineno;
    // Arrays may continue over several lines until the closing bracket.
    if (!value.empty() && value.front() == '[') {
      while (value.find(']') == std::string::npos) {
        if (!std::getline(in, raw)) throw SpecError("unterminated array", value_line, value_col);
        ++lineno;
        value += " " + std::string(trim(strip_comment(raw)));
      }
    }
    if (key.empty()) throw SpecError("empty key", lineno, indent);
    auto& entries = sections.back().entries;
    if (entries.count(key)) throw SpecError("duplicate key '" + key + "'", value_line, indent);
    entries[key] = Value{value, value_line, value_col};
  }
  return sections;
}

const Value& require(const Section& s, const std::string& key) {
  auto it = s.entries.find(key);
  if (it == s.entries.end()) {
    throw SpecError("missing key '" + key + "' in section", s.line, 1);
  }
  return it->second;
}

std::vector<std::string> split_array(const Value& v) {
  std::string_view t = trim(v.text);
  if (t.size() < 2 || t.front() != '[' || t.back() != ']') {
    throw SpecError("expected an array '[...]'", v.line, v.column);
  }
  t = trim(t.substr(1, t.size() - 2));
  std::vector<std::string> items;
  if (t.empty()) return items;
  std::size_t start = 0;
  while (true) {
    auto comma = t.find(',', start);
    auto item = trim(t.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (item.empty()) throw SpecError("empty array element", v.line, v.column);
    items.emplace_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return items;
}

Rational to_rational(const std::string& item, const Value& v) {
  try {
    return parse_rational(item);
  } catch (const std::invalid_argument& e) {
    throw SpecError(std::string("bad rational literal '") + item + "': " + e.what(), v.line, v.column);
  }
}

double to_real(const std::string& item, const Value& v) {
  if (item.find('/') != std::string::npos) return to_double(to_rational(item, v));
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), out);
  if (ec != std::errc{} || ptr != item.data() + item.size()) {
    throw SpecError("bad numeric literal '" + item + "'", v.line, v.column);
  }
  return out;
}

int to_int(const Value& v) {
  int out = 0;
  auto t = trim(v.text);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc{} || ptr != t.data() + t.size()) {
    throw SpecError("expected an integer, got '" + v.text + "'", v.line, v.column);
  }
  return out;
}

Polynomial to_poly(const Value& v) {
  std::vector<double> c;
  for (const auto& item : split_array(v)) c.push_back(to_real(item, v));
  Polynomial p(std::move(c));
  if (p.degree() > kDefaultDegreeCap) {
    throw SpecError("polynomial degree exceeds cap " + std::to_string(kDefaultDegreeCap), v.line, v.column);
  }
  return p;
}

void check_keys(const Section& s, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : s.entries) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw SpecError("unknown key '" + key + "'", value.line, 1);
    }
  }
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

RfifSpec parse_spec(std::string_view text) {
  const auto sections = tokenize(text);
  const Section* data = nullptr;
  for (const auto& s : sections) {
    if (s.kind != Section::Kind::data) continue;
    if (data) throw SpecError("duplicate [data] section", s.line, 1);
    data = &s;
  }
  if (!data) throw SpecError("missing [data] section");
  check_keys(*data, {"x", "y"});

  const auto& xv = require(*data, "x");
  const auto& yv = require(*data, "y");
  const auto xs = split_array(xv);
  const auto ys = split_array(yv);
  if (xs.size() != ys.size()) {
    throw SpecError("node count mismatch: " + std::to_string(xs.size()) + " x values, " +
                        std::to_string(ys.size()) + " y values",
                    yv.line, yv.column);
  }
  std::vector<Node> nodes;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    nodes.push_back({to_rational(xs[i], xv), to_real(ys[i], yv)});
    if (i > 0 && !(nodes[i - 1].x < nodes[i].x)) {
      throw SpecError("non-monotone x values at index " + std::to_string(i), xv.line, xv.column);
    }
  }
  const int N = static_cast<int>(nodes.size()) - 1;

  const auto map_sections = std::count_if(sections.begin(), sections.end(), [](const Section& s) {
    return s.kind == Section::Kind::map;
  });
  if (map_sections != N) {
    throw SpecError("map count " + std::to_string(map_sections) + " ≠ N = " + std::to_string(N));
  }

  std::vector<MapSpec> maps;
  std::vector<int> seen;
  for (const auto& s : sections) {
    if (s.kind != Section::Kind::map) continue;
    check_keys(s, {"n", "ell", "r", "orientation", "S", "q"});
    MapSpec m;
    const auto& nv = require(s, "n");
    m.n = to_int(nv);
    if (std::find(seen.begin(), seen.end(), m.n) != seen.end()) {
      throw SpecError("duplicate map index " + std::to_string(m.n), nv.line, nv.column);
    }
    seen.push_back(m.n);
    if (m.n < 1 || m.n > N) throw SpecError("map index out of range 1..N", nv.line, nv.column);
    const auto& ev = require(s, "ell");
    const auto& rv = require(s, "r");
    m.ell = to_int(ev);
    m.r = to_int(rv);
    if (m.ell < 0 || m.r > N || m.ell >= m.r) {
      throw SpecError("need 0 <= ell < r <= N", ev.line, ev.column);
    }
    const auto& ov = require(s, "orientation");
    const auto o = trim(ov.text);
    if (o == "\"+\"") {
      m.orientation = Orientation::increasing;
    } else if (o == "\"-\"") {
      m.orientation = Orientation::decreasing;
    } else {
      throw SpecError("orientation must be \"+\" or \"-\"", ov.line, ov.column);
    }
    m.S = to_poly(require(s, "S"));
    m.q = to_poly(require(s, "q"));
    maps.push_back(std::move(m));
  }
  return RfifSpec(std::move(nodes), std::move(maps));
}

RfifSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_spec(buf.str());
}

std::string serialize_spec(const RfifSpec& spec) {
  std::ostringstream out;
  out << "[data]\nx = [";
  for (std::size_t i = 0; i < spec.nodes().size(); ++i) {
    out << (i ? ", " : "") << to_string(spec.nodes()[i].x);
  }
  out << "]\ny = [";
  for (std::size_t i = 0; i < spec.nodes().size(); ++i) {
    out << (i ? ", " : "") << format_real(spec.nodes()[i].y);
  }
  out << "]\n";
  auto poly = [](const Polynomial& p) {
    std::string s = "[";
    if (p.is_zero()) return std::string("[0]");
    for (std::size_t i = 0; i < p.coefficients().size(); ++i) {
      s += (i ? ", " : "") + format_real(p.coefficients()[i]);
    }
    return s + "]";
  };
  for (const auto& m : spec.maps()) {
    out << "\n[[map]]\nn = " << m.n << "\nell = " << m.ell << "\nr = " << m.r
        << "\norientation = \"" << (m.orientation == Orientation::increasing ? '+' : '-')
        << "\"\nS = " << poly(m.S) << "\nq = " << poly(m.q) << "\n";
  }
  return out.str();
}

std::string ValidationReport::to_text() const {
  std::string out;
  for (const auto& v : violations) {
    out += v.code + "\tmap=" + std::to_string(v.map) + "\t" + v.message + "\n";
  }
  return out;
}

}  // namespace recurdim
