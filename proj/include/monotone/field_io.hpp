#pragma once

#include <iosfwd>
#include <string>

#include "monotone/field.hpp"

namespace monotone {

// Field file: one JSON header line describing the grid and metadata, a CSV
// column header, then one row per node (first axis varying fastest):
//   {"format":"monotone-field","n":2,"m":1,"axes":[...],"provenance":"exact",...}
//   x1,x2,u1
//   -1,-1,0.25
// Space-time files add "t1","t2","slices" to the header and a leading t column.

void write_field(const Field& f, std::ostream& os);
Field read_field(std::istream& is, const std::string& origin = "field");
void write_spacetime_field(const SpaceTimeField& f, std::ostream& os);
SpaceTimeField read_spacetime_field(std::istream& is, const std::string& origin = "field");

/// Plain CSV (column header x1..xn,u1..um and rows in any order); the grid is
/// inferred and checked to be a complete, uniformly spaced tensor grid.
void write_field_csv(const Field& f, std::ostream& os);
Field read_field_csv(std::istream& is, const std::string& origin = "csv");

void save_field(const Field& f, const std::string& path);
Field load_field(const std::string& path);
void save_spacetime_field(const SpaceTimeField& f, const std::string& path);
SpaceTimeField load_spacetime_field(const std::string& path);

/// Converts between the Field format and plain CSV; `to` is "csv" or "field".
/// Returns a one-line summary of the validated grid.
std::string convert_field_file(const std::string& in, const std::string& out, const std::string& to);

}  // namespace monotone
