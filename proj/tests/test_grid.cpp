#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "ldg/errors.hpp"
#include "ldg/field_io.hpp"
#include "ldg/grid.hpp"

using namespace ldg;

namespace {

constexpr double kBall = 4.0 * std::numbers::pi / 3.0;

double volume(int n) {
  const Grid g(n);
  return integrate(std::vector<double>(g.size(), 1.0), g);
}

template <class F>
OrderField make_field(const Grid& g, F f) {
  OrderField u(g);
  for (int j = 0; j <= g.n(); ++j)
    for (int i = 0; i <= g.n(); ++i) u.at(i, j) = f(g.rho(i), g.z(j));
  return u;
}

}  // namespace

TEST_CASE("grid construction and tags") {
  CHECK_THROWS_AS(build_grid(15), Error);
  const Grid g(64);
  CHECK(g.n_rho() == 65);
  CHECK(g.h() == doctest::Approx(1.0 / 64));
  std::size_t eq = 0;
  for (int j = 0; j <= g.n(); ++j)
    for (int i = 0; i <= g.n(); ++i) {
      if (!g.in_domain(i, j)) continue;
      const double r2 = g.rho(i) * g.rho(i) + g.z(j) * g.z(j);
      CHECK(r2 <= 1.0 + 1e-15);
      if (g.is_arc(i, j)) CHECK(std::abs(std::sqrt(r2) - 1.0) <= g.h());
      if (g.is_axis(i, j)) CHECK(g.rho(i) == 0.0);
      if (g.is_equator(i, j)) ++eq;
      CHECK(g.weight(i, j) > 0.0);
    }
  CHECK(eq == g.equator_count());
  CHECK(g.is_arc(64, 0));
  CHECK(g.is_equator(64, 0));
  CHECK(g.is_arc(0, 64));
}

TEST_CASE("quadrature volume") {
  CHECK(std::abs(volume(16) - kBall) < 0.1 * kBall);
  CHECK(std::abs(volume(256) - kBall) < 0.01 * kBall);
  const double e1 = std::abs(volume(32) - kBall), e2 = std::abs(volume(64) - kBall), e3 = std::abs(volume(128) - kBall);
  CHECK(std::log2(e1 / e2) >= 0.9);
  CHECK(std::log2(e2 / e3) >= 0.9);
}

TEST_CASE("integrate z^2 and zero") {
  const Grid g(128);
  std::vector<double> d(g.size(), 0.0);
  CHECK(integrate(d, g) == 0.0);
  for (int j = 0; j <= g.n(); ++j)
    for (int i = 0; i <= g.n(); ++i) d[g.index(i, j)] = g.z(j) * g.z(j);
  CHECK(integrate(d, g) == doctest::Approx(4 * std::numbers::pi / 15).epsilon(2.0 / 128));
  CHECK_THROWS_AS(integrate(std::vector<double>(3), g), Error);
}

TEST_CASE("gradient of smooth fields") {
  const Grid g(64);
  auto u = make_field(g, [](double, double) { return UVec{0.0, 0.7, 0.0}; });
  for (const auto& d : gradient(u, g))
    for (const auto& c : d) {
      CHECK(c[0] == 0.0);
      CHECK(c[1] == 0.0);
    }

  // u3 = z: odd ghost across T gives d/dz u3 = 1 at z = 0
  u = make_field(g, [](double, double z) { return UVec{0.0, 0.0, z}; });
  auto du = gradient(u, g);
  for (int i = 0; i < g.row_end(0); ++i) CHECK(du[g.index(i, 0)][2][1] == doctest::Approx(1.0));

  OrderField bad;
  CHECK_THROWS_AS(gradient(bad, g), Error);
}

TEST_CASE("gradient second-order convergence") {
  auto field = [](double r, double z) { return UVec{r * r * std::cos(z), std::cos(2 * r) + z * z, r * std::sin(z)}; };
  auto exact = [](double r, double z) {
    return NodeGradient{{{2 * r * std::cos(z), -r * r * std::sin(z)},
                         {-2 * std::sin(2 * r), 2 * z},
                         {std::sin(z), r * std::cos(z)}}};
  };
  double errs[3];
  int k = 0;
  for (int n : {32, 64, 128}) {
    const Grid g(n);
    const auto du = gradient(make_field(g, field), g);
    double e = 0;
    for (int j = 1; j <= g.n(); ++j)
      for (int i = 1; i <= g.n(); ++i) {
        if (!g.in_domain(i, j) || !g.in_domain(i + 1, j) || !g.in_domain(i, j + 1)) continue;
        const auto ex = exact(g.rho(i), g.z(j));
        for (int c = 0; c < 3; ++c)
          for (int d = 0; d < 2; ++d) e = std::max(e, std::abs(du[g.index(i, j)][c][d] - ex[c][d]));
      }
    errs[k++] = e;
  }
  CHECK(std::log2(errs[0] / errs[1]) >= 1.8);
  CHECK(std::log2(errs[1] / errs[2]) >= 1.8);
}

TEST_CASE("even component has zero z-derivative on T") {
  const Grid g(64);
  auto u = make_field(g, [](double r, double z) { return UVec{r * r, std::cos(z) + r, 0.0}; });
  const auto du = gradient(u, g);
  for (int i = 0; i <= g.row_end(0); ++i) {
    CHECK(du[g.index(i, 0)][0][1] == 0.0);
    CHECK(du[g.index(i, 0)][1][1] == 0.0);
  }
}

TEST_CASE("restrict_to_T and boundary extension") {
  const Grid g(64);
  const Params p(3.0, 1.0);
  OrderField u(g);
  apply_boundary(u, g, p);
  const auto t = restrict_to_T(u, g);
  CHECK(t.size() == g.equator_count());
  const UVec end = t.back().u, bv = boundary_value(std::numbers::pi / 2, p);
  CHECK(end.u1 == doctest::Approx(bv.u1));
  CHECK(end.u2 == doctest::Approx(bv.u2));
  for (const auto& s : t) CHECK(s.u.u3 == 0.0);
  for (std::size_t k = 1; k < t.size(); ++k) CHECK(t[k].rho > t[k - 1].rho);
}

TEST_CASE("interpolation reproduces bilinear data and reflections") {
  const Grid g(32);
  auto u = make_field(g, [](double r, double z) { return UVec{1 + r + 2 * z, 3 * r * z, z + 0.5 * r}; });
  const UVec v = interpolate(u, g, 0.31, 0.27);
  CHECK(v.u1 == doctest::Approx(1 + 0.31 + 0.54));
  CHECK(v.u3 == doctest::Approx(0.27 + 0.155));
  const UVec m = interpolate(u, g, 0.31, -0.27);
  CHECK(m.u1 == doctest::Approx(v.u1));
  CHECK(m.u3 == doctest::Approx(-v.u3));
  CHECK_THROWS_AS(interpolate(u, g, 0.9, 0.9), Error);
}

TEST_CASE("field file round trip is bit exact") {
  const Grid g(24);
  auto u = make_field(g, [](double r, double z) { return UVec{std::sin(r) / 3, std::exp(z) * 0.1, r * z / 7}; });
  const Params p(3.0, 7.5);
  apply_boundary(u, g, p);
  std::stringstream ss;
  write_field(ss, u, g, 3.0, 7.5);
  const FieldFile f = read_field(ss);
  CHECK(f.n == 24);
  CHECK(f.a == 3.0);
  CHECK(f.mu == 7.5);
  for (int j = 0; j <= g.n(); ++j)
    for (int i = 0; i <= g.n(); ++i) CHECK(f.field.at(i, j) == u.at(i, j));
}

TEST_CASE("field file errors") {
  std::stringstream bad_version("# ldg-field v2 n_rho=17 n_z=17 a=1 mu=1\n");
  try {
    read_field(bad_version);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::FormatVersion);
  }
  const Grid g(16);
  OrderField u(g);
  std::stringstream ss;
  write_field(ss, u, g, 1.0, 1.0);
  std::string s = ss.str();
  s.resize(s.size() / 2);
  std::stringstream trunc(s);
  try {
    read_field(trunc);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
  }
}
