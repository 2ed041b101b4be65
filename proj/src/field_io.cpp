#include "ldg/field_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ldg/errors.hpp"

namespace ldg {

namespace {

constexpr const char* kMagic = "# ldg-field v1";

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw Error(ErrorCode::ParseError, "bad value for " + what + ": '" + s + "'");
  return v;
}

int parse_int(const std::string& s, const std::string& what) {
  int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw Error(ErrorCode::ParseError, "bad value for " + what + ": '" + s + "'");
  return v;
}

}  // namespace

void write_field(std::ostream& os, const OrderField& field, const Grid& grid, double a, double mu) {
  check_shape(field, grid);
  os << kMagic << " n_rho=" << grid.n_rho() << " n_z=" << grid.n_z() << " a=" << fmt17(a) << " mu=" << fmt17(mu)
     << '\n';
  char buf[160];
  for (int j = 0; j <= grid.n(); ++j) {
    for (int i = 0; i <= grid.row_end(j); ++i) {
      const UVec& v = field.at(i, j);
      std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g %.17g\n", grid.rho(i), grid.z(j), v.u1, v.u2, v.u3);
      os << buf;
    }
  }
}

void write_field_file(const std::string& path, const OrderField& field, const Grid& grid, double a, double mu) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  write_field(os, field, grid, a, mu);
  if (!os) throw Error(ErrorCode::IoError, "write failed for " + path);
}

FieldFile read_field(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw Error(ErrorCode::ParseError, "empty field file");
  if (header.rfind("# ldg-field", 0) != 0) throw Error(ErrorCode::ParseError, "missing ldg-field header");
  if (header.rfind(kMagic, 0) != 0 || (header.size() > 14 && header[14] != ' '))
    throw Error(ErrorCode::FormatVersion, "unsupported field format: " + header);

  std::istringstream hs(header.substr(std::string(kMagic).size()));
  int n_rho = -1, n_z = -1;
  double a = NAN, mu = NAN;
  std::string tok;
  while (hs >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::ParseError, "bad header token " + tok);
    const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    if (key == "n_rho") n_rho = parse_int(val, key);
    else if (key == "n_z") n_z = parse_int(val, key);
    else if (key == "a") a = parse_double(val, key);
    else if (key == "mu") mu = parse_double(val, key);
  }
  if (n_rho < 17 || n_z != n_rho || !std::isfinite(a) || !std::isfinite(mu))
    throw Error(ErrorCode::ParseError, "incomplete or inconsistent header: " + header);

  FieldFile out;
  out.n = n_rho - 1;
  out.a = a;
  out.mu = mu;
  const Grid grid(out.n);
  out.field = OrderField(grid);

  std::string line;
  for (int j = 0; j <= grid.n(); ++j) {
    for (int i = 0; i <= grid.row_end(j); ++i) {
      if (!std::getline(is, line)) throw Error(ErrorCode::ParseError, "truncated field file");
      std::istringstream ls(line);
      std::string c[5];
      for (auto& s : c)
        if (!(ls >> s)) throw Error(ErrorCode::ParseError, "short row: " + line);
      const double r = parse_double(c[0], "rho"), z = parse_double(c[1], "z");
      if (std::abs(r - grid.rho(i)) > 1e-9 || std::abs(z - grid.z(j)) > 1e-9)
        throw Error(ErrorCode::ParseError, "node coordinates out of order: " + line);
      out.field.at(i, j) = {parse_double(c[2], "u1"), parse_double(c[3], "u2"), parse_double(c[4], "u3")};
    }
  }
  // Outside-disk extension only depends on H_a, so any admissible obstacle will do.
  const Params p(a, mu);
  for (int j = 0; j <= grid.n(); ++j)
    for (int i = grid.row_end(j) + 1; i <= grid.n(); ++i) {
      const double phi = std::atan2(grid.rho(i), grid.z(j));
      out.field.at(i, j) = boundary_value(phi, p);
      if (j == 0) out.field.at(i, j).u3 = 0.0;
    }
  return out;
}

FieldFile read_field_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::IoError, "cannot open " + path);
  return read_field(is);
}

}  // namespace ldg
