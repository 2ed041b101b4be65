#pragma once

// ldg-field v1 text format:
//   # ldg-field v1 n_rho=<int> n_z=<int> a=<float> mu=<float>
//   rho z u1 u2 u3        (one row per disk node, z-major, %.17g)

#include <iosfwd>
#include <string>

#include "ldg/grid.hpp"

namespace ldg {

struct FieldFile {
  int n = 0;
  double a = 0.0;
  double mu = 0.0;
  OrderField field;
};

void write_field(std::ostream& os, const OrderField& field, const Grid& grid, double a, double mu);
void write_field_file(const std::string& path, const OrderField& field, const Grid& grid, double a, double mu);

/// Nodes outside the disk are filled with the boundary extension for the
/// stored a. FormatVersion on a foreign header, ParseError on malformed rows.
FieldFile read_field(std::istream& is);
FieldFile read_field_file(const std::string& path);

}  // namespace ldg
