#include "monotone/field_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "monotone/error.hpp"
#include "monotone/format.hpp"

namespace monotone {

using nlohmann::json;

namespace {

json header_for(const CartesianGrid& g, int m, const FieldMeta& meta) {
  json axes = json::array();
  for (int d = 0; d < g.dim(); ++d) {
    axes.push_back({{"lo", g.axis(d).lo}, {"hi", g.axis(d).hi}, {"count", g.axis(d).count}});
  }
  return {{"format", "monotone-field"},
          {"n", g.dim()},
          {"m", m},
          {"axes", axes},
          {"provenance", provenance_name(meta.provenance)},
          {"model", meta.model},
          {"source", meta.source},
          {"solver_residual", meta.solver_residual}};
}

std::string column_header(int n, int m, bool with_t) {
  std::string s = with_t ? "t," : "";
  for (int d = 0; d < n; ++d) s += "x" + std::to_string(d + 1) + ",";
  for (int c = 0; c < m; ++c) s += "u" + std::to_string(c + 1) + (c + 1 < m ? "," : "");
  return s;
}

void write_rows(const Field& f, std::ostream& os, const std::string& t_prefix) {
  const CartesianGrid& g = f.grid();
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const Point p = g.node(i);
    std::string row = t_prefix;
    for (int d = 0; d < g.dim(); ++d) row += format_double(p[d]) + ",";
    for (int c = 0; c < f.components(); ++c) row += format_double(f.at(i, c)) + (c + 1 < f.components() ? "," : "");
    os << row << '\n';
  }
}

struct Header {
  CartesianGrid grid;
  int m = 1;
  FieldMeta meta;
  bool spacetime = false;
  double t1 = 0.0, t2 = 0.0;
  int slices = 0;
};

Header parse_header(std::istream& is, const std::string& origin) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError(origin + ": empty file");
  json h;
  try {
    h = json::parse(line);
  } catch (const json::exception& e) {
    throw ParseError(origin + ":1: header is not valid JSON (" + std::string(e.what()) + ")");
  }
  try {
    if (h.value("format", "") != "monotone-field") throw ParseError(origin + ":1: not a monotone-field header");
    Header out;
    std::vector<Axis> axes;
    for (const auto& a : h.at("axes")) axes.push_back({a.at("lo").get<double>(), a.at("hi").get<double>(), a.at("count").get<int>()});
    if (static_cast<int>(axes.size()) != h.at("n").get<int>()) throw ParseError(origin + ":1: axis count differs from n");
    out.grid = CartesianGrid(axes);
    out.m = h.at("m").get<int>();
    out.meta.provenance = provenance_from_name(h.value("provenance", "loaded"));
    out.meta.model = h.value("model", "");
    out.meta.source = h.value("source", "");
    out.meta.solver_residual = h.value("solver_residual", 0.0);
    if (h.contains("slices")) {
      out.spacetime = true;
      out.t1 = h.at("t1").get<double>();
      out.t2 = h.at("t2").get<double>();
      out.slices = h.at("slices").get<int>();
    }
    return out;
  } catch (const json::exception& e) {
    throw ParseError(origin + ":1: " + e.what());
  } catch (const ArgumentError& e) {
    throw ParseError(origin + ":1: " + e.what());
  }
}

std::vector<double> parse_row(const std::string& line, std::size_t expected, const std::string& origin, std::size_t lineno) {
  const auto cells = split(line, ',');
  if (cells.size() != expected) {
    throw ParseError(origin + ":" + std::to_string(lineno) + ": expected " + std::to_string(expected) + " columns, found " +
                     std::to_string(cells.size()));
  }
  std::vector<double> v(cells.size());
  for (std::size_t k = 0; k < cells.size(); ++k) {
    v[k] = parse_double(cells[k], origin + ":" + std::to_string(lineno) + " column " + std::to_string(k + 1));
  }
  return v;
}

void check_coordinate(double got, double want, double h, const std::string& where) {
  if (std::abs(got - want) > 1e-9 * std::max(h, 1e-300) + 1e-12 * std::abs(want)) {
    throw ParseError(where + ": coordinate " + format_double(got) + " does not match grid node " + format_double(want));
  }
}

void read_slice(std::istream& is, Field& f, const Header& h, double t, std::size_t& lineno, const std::string& origin) {
  const CartesianGrid& g = f.grid();
  const int n = g.dim();
  const std::size_t cols = (h.spacetime ? 1 : 0) + n + f.components();
  std::string line;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    if (!std::getline(is, line)) throw ParseError(origin + ": file ends after " + std::to_string(lineno) + " lines");
    ++lineno;
    const auto v = parse_row(line, cols, origin, lineno);
    const std::string where = origin + ":" + std::to_string(lineno);
    std::size_t k = 0;
    if (h.spacetime) {
      check_coordinate(v[k++], t, h.slices > 1 ? (h.t2 - h.t1) / (h.slices - 1) : 1.0, where);
    }
    const Point p = g.node(i);
    for (int d = 0; d < n; ++d) check_coordinate(v[k++], p[d], g.spacing(d), where);
    for (int c = 0; c < f.components(); ++c) f.at(i, c) = v[k++];
  }
}

}  // namespace

void write_field(const Field& f, std::ostream& os) {
  os << header_for(f.grid(), f.components(), f.meta()).dump() << '\n';
  os << column_header(f.dim(), f.components(), false) << '\n';
  write_rows(f, os, "");
}

Field read_field(std::istream& is, const std::string& origin) {
  const Header h = parse_header(is, origin);
  if (h.spacetime) throw ParseError(origin + ": file holds a space-time field");
  std::string line;
  std::getline(is, line);
  if (trim(line) != column_header(h.grid.dim(), h.m, false)) throw ParseError(origin + ":2: unexpected column header");
  Field f(h.grid, h.m, h.meta);
  std::size_t lineno = 2;
  read_slice(is, f, h, 0.0, lineno, origin);
  f.require_finite();
  return f;
}

void write_spacetime_field(const SpaceTimeField& f, std::ostream& os) {
  json h = header_for(f.space(), f.components(), f.meta());
  h["t1"] = f.grid().t1();
  h["t2"] = f.grid().t2();
  h["slices"] = f.slices();
  os << h.dump() << '\n';
  os << column_header(f.dim(), f.components(), true) << '\n';
  for (int k = 0; k < f.slices(); ++k) write_rows(f.slice(k), os, format_double(f.time(k)) + ",");
}

SpaceTimeField read_spacetime_field(std::istream& is, const std::string& origin) {
  const Header h = parse_header(is, origin);
  if (!h.spacetime) throw ParseError(origin + ": file holds a spatial field");
  std::string line;
  std::getline(is, line);
  if (trim(line) != column_header(h.grid.dim(), h.m, true)) throw ParseError(origin + ":2: unexpected column header");
  SpaceTimeField f(SpaceTimeGrid(h.grid, h.t1, h.t2, h.slices), h.m, h.meta);
  std::size_t lineno = 2;
  for (int k = 0; k < h.slices; ++k) {
    read_slice(is, f.slice(k), h, f.time(k), lineno, origin);
    f.slice(k).meta() = h.meta;
  }
  f.require_finite();
  return f;
}

void write_field_csv(const Field& f, std::ostream& os) {
  os << column_header(f.dim(), f.components(), false) << '\n';
  write_rows(f, os, "");
}

Field read_field_csv(std::istream& is, const std::string& origin) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError(origin + ": empty file");
  const auto names = split(trim(line), ',');
  int n = 0, m = 0;
  for (const auto& nm : names) {
    const std::string t = trim(nm);
    if (t.size() > 1 && t[0] == 'x' && m == 0) ++n;
    else if (t.size() > 1 && t[0] == 'u') ++m;
    else throw ParseError(origin + ":1: unexpected column '" + t + "'");
  }
  if (n < 1 || n > kMaxDim || m < 1) throw ParseError(origin + ":1: need columns x1..xn then u1..um");
  if (trim(line) != column_header(n, m, false)) throw ParseError(origin + ":1: columns must read " + column_header(n, m, false));
  std::vector<std::vector<double>> rows;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    rows.push_back(parse_row(line, static_cast<std::size_t>(n + m), origin, lineno));
  }
  std::vector<Axis> axes;
  std::vector<std::vector<double>> coords(n);
  for (int d = 0; d < n; ++d) {
    std::vector<double> c;
    for (const auto& r : rows) c.push_back(r[d]);
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    if (c.size() < 3) throw ParseError(origin + ": axis x" + std::to_string(d + 1) + " has fewer than 3 distinct values");
    const double h = (c.back() - c.front()) / (c.size() - 1);
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (std::abs(c[k] - (c.front() + k * h)) > 1e-9 * h) {
        throw ParseError(origin + ": axis x" + std::to_string(d + 1) + " is not uniformly spaced near " + format_double(c[k]));
      }
    }
    axes.push_back({c.front(), c.back(), static_cast<int>(c.size())});
    coords[d] = std::move(c);
  }
  CartesianGrid g(axes);
  if (rows.size() != g.node_count()) {
    throw ParseError(origin + ": " + std::to_string(rows.size()) + " rows for a grid of " + std::to_string(g.node_count()) +
                     " nodes");
  }
  FieldMeta meta;
  meta.provenance = Provenance::Loaded;
  meta.source = origin;
  Field f(g, m, meta);
  std::vector<std::uint8_t> seen(g.node_count(), 0);
  for (const auto& r : rows) {
    std::array<int, kMaxDim> ijk{};
    for (int d = 0; d < n; ++d) {
      const double h = g.spacing(d);
      ijk[d] = static_cast<int>(std::lround((r[d] - axes[d].lo) / h));
    }
    const std::size_t node = g.index(ijk);
    if (seen[node]) throw ParseError(origin + ": duplicate row for node " + std::to_string(node));
    seen[node] = 1;
    for (int c = 0; c < m; ++c) f.at(node, c) = r[n + c];
  }
  f.require_finite();
  return f;
}

void save_field(const Field& f, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ArgumentError("cannot write " + path);
  write_field(f, os);
}

Field load_field(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ArgumentError("cannot read " + path);
  return read_field(is, path);
}

void save_spacetime_field(const SpaceTimeField& f, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ArgumentError("cannot write " + path);
  write_spacetime_field(f, os);
}

SpaceTimeField load_spacetime_field(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ArgumentError("cannot read " + path);
  return read_spacetime_field(is, path);
}

std::string convert_field_file(const std::string& in, const std::string& out, const std::string& to) {
  std::ifstream is(in);
  if (!is) throw ArgumentError("cannot read " + in);
  Field f;
  if (to == "csv") {
    f = read_field(is, in);
    std::ofstream os(out);
    if (!os) throw ArgumentError("cannot write " + out);
    write_field_csv(f, os);
  } else if (to == "field") {
    f = read_field_csv(is, in);
    save_field(f, out);
  } else {
    throw ArgumentError("unknown target format '" + to + "' (csv | field)");
  }
  std::ostringstream os;
  os << "validated " << f.dim() << "-d grid, " << f.node_count() << " nodes, " << f.components() << " component(s)";
  return os.str();
}

}  // namespace monotone
