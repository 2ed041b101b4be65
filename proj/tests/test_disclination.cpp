#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ldg/disclination.hpp"
#include "ldg/errors.hpp"

using namespace ldg;

namespace {

constexpr double kPi = std::numbers::pi;

template <class F>
OrderField make_field(const Grid& g, F f) {
  OrderField u(g);
  for (int j = 0; j <= g.n(); ++j)
    for (int i = 0; i <= g.n(); ++i) u.at(i, j) = f(g.rho(i), g.z(j));
  return u;
}

// Linear model of a ring at rho_a: g = rho - rho_a, u3 = 2 z, so kappa = 1/2.
OrderField ring_model(const Grid& g, double rho_a, double dz = 2.0) {
  return make_field(g, [&](double rho, double z) { return UVec{0.0, -(rho - rho_a) / std::sqrt(3.0), dz * z}; });
}

// Linear model of an axis zero at z_c: u = s (0, z - z_c, rho).
OrderField core_model(const Grid& g, double z_c, double s = 1.0) {
  return make_field(g, [&](double rho, double z) { return UVec{0.0, s * (z - z_c), s * rho}; });
}

}  // namespace

TEST_CASE("axis zeros and parity") {
  const Grid g(64);
  auto two = make_field(g, [](double, double z) { return UVec{0.0, (z - 0.3) * (z - 0.7), 0.0}; });
  const AxisZeros z2 = find_axis_zeros(two, g);
  REQUIRE(z2.z.size() == 2);
  CHECK(z2.z[0] == doctest::Approx(0.3).epsilon(1e-3));
  CHECK(z2.z[1] == doctest::Approx(0.7).epsilon(1e-3));
  CHECK(std::string(z2.parity()) == "even");

  auto one = make_field(g, [](double, double z) { return UVec{0.0, z - 0.251, 0.0}; });
  const AxisZeros z1 = find_axis_zeros(one, g);
  REQUIRE(z1.z.size() == 1);
  CHECK(z1.z[0] == doctest::Approx(0.251).epsilon(1e-12));
  CHECK(z1.odd());

  auto none = make_field(g, [](double, double) { return UVec{0.0, 1.0, 0.0}; });
  CHECK(find_axis_zeros(none, g).z.empty());

  // a node sitting exactly on the zero is not double counted
  auto exact = make_field(g, [](double, double z) { return UVec{0.0, z - 0.25, 0.0}; });
  const AxisZeros ze = find_axis_zeros(exact, g, 1e-14);
  REQUIRE(ze.z.size() == 1);
  CHECK(ze.z[0] == doctest::Approx(0.25));
}

TEST_CASE("ring location, kappa and winding") {
  const Grid g(64);
  const OrderField u = ring_model(g, 0.4);
  const auto ring = find_ring(u, g);
  REQUIRE(ring);
  CHECK(ring->rho == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(ring->kappa == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(ring->g_origin < 0.0);
  CHECK(ring->g_end > 0.0);

  const Winding w = director_winding(u, g, 0.4, 0.0, 0.1);
  CHECK(w.angle == doctest::Approx(kPi).epsilon(0.02));
  CHECK(std::abs(w.start[2]) > 0.99);
  CHECK(std::abs(w.end[2]) > 0.99);
  CHECK(ring_tangent_limit(u, g, 0.4, 0.5, 0.1) < 1e-10);
  CHECK(ring_tangent_limit(u, g, 0.4, 2.0, 0.1) > 0.1);

  // a loop that does not enclose the ring
  CHECK(std::abs(director_winding(u, g, 0.7, 0.3, 0.1).angle) < 0.05);
  CHECK_THROWS_AS(director_winding(u, g, 0.4, 0.0, 0.1, 32), Error);

  try {
    find_ring(ring_model(g, 0.4, -2.0), g);
    FAIL("expected DegenerateRing");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateRing);
  }
  CHECK_FALSE(find_ring(make_field(g, [](double, double) { return UVec{0.0, 1.0, 0.0}; }), g));
}

TEST_CASE("ring limit director") {
  for (double k : {0.3, 1.0, 4.0}) {
    const Vec3 a = ring_limit_director(k, 0.0);
    CHECK(a[0] == doctest::Approx(1.0));
    CHECK(std::abs(ring_limit_director(k, kPi - 1e-9)[2]) == doctest::Approx(1.0));
    CHECK(std::abs(ring_limit_director(k, -kPi + 1e-9)[2]) == doctest::Approx(1.0));
  }
}

TEST_CASE("core tangent fit and non-degeneracy") {
  const Grid g(64);
  const OrderField u = core_model(g, 0.5);
  const CoreFit fit = core_tangent_limit(u, g, 0.5, 0.2);
  CHECK(fit.plus);
  CHECK(fit.deviation < 1e-12);
  CHECK(fit.deviation_minus > 1.0);
  CHECK(fit.director_deviation < 1e-10);

  const OrderField m = make_field(g, [](double rho, double z) { return UVec{0.0, 0.5 - z, rho}; });
  const CoreFit fm = core_tangent_limit(m, g, 0.5, 0.2);
  CHECK_FALSE(fm.plus);
  CHECK(fm.deviation < 1e-12);

  CHECK_THROWS_AS(core_tangent_limit(u, g, 0.1, 0.2), Error);
  const OrderField zero = make_field(g, [](double, double) { return UVec{}; });
  try {
    core_tangent_limit(zero, g, 0.5, 0.2);
    FAIL("expected CoreTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CoreTooLarge);
  }

  const Params p(16.0, 40.0);
  const OrderField s = core_model(g, 0.5, 3.0);
  CHECK(nondegeneracy_check(s, g, p, 0.5, 1.0) == doctest::Approx(3.0 / 4.0).epsilon(1e-12));
  try {
    nondegeneracy_check(s, g, p, 0.5, 0.4);
    FAIL("expected CoreUnderResolved");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CoreUnderResolved);
  }
}

TEST_CASE("dumbbell geometry") {
  // z_a = 0.5, r = 0.2, eps = 0.05: caps above |z| = 0.35, neck half-width sqrt(0.04 - 0.0225)
  CHECK(in_dumbbell(0.0, 0.0, 0.5, 0.2, 0.05));
  CHECK(in_dumbbell(0.1, 0.0, 0.5, 0.2, 0.05));
  CHECK_FALSE(in_dumbbell(0.15, 0.0, 0.5, 0.2, 0.05));
  CHECK(in_dumbbell(0.15, 0.5, 0.5, 0.2, 0.05));
  CHECK(in_dumbbell(0.15, -0.5, 0.5, 0.2, 0.05));
  CHECK_FALSE(in_dumbbell(0.15, 0.33, 0.5, 0.2, 0.05));
  CHECK_FALSE(in_dumbbell(0.0, 0.71, 0.5, 0.2, 0.05));
}

TEST_CASE("split-core classification on a model field") {
  const Grid g(128);
  const Params p(20.0, 50.0);
  const OrderField u = core_model(g, 0.5);
  const FieldClassification c = classify_field(u, g, p);
  REQUIRE(c.has_segment);
  CHECK(c.z_plus == doctest::Approx(0.5));
  CHECK(c.segment_nodes > 0);
  CHECK(c.segment_negative == c.segment_nodes);
  CHECK(c.flank_nodes > 0);
  CHECK(c.flank_positive == c.flank_nodes);
  CHECK(c.dumbbell_nodes > 0);
  CHECK(c.dumbbell_biaxial_ordered == c.dumbbell_nodes);
  CHECK(c.segment_director_deviation < 0.1);
  CHECK(c.axis_negative + c.axis_positive + c.axis_isotropic == c.axis_nodes);
}

TEST_CASE("report text") {
  const Grid g(64);
  const Params p(20.0, 50.0);
  ReportOptions opt;
  opt.windings.push_back({0.7, 0.3, 0.1});
  const std::string text = format_report(analyze(ring_model(g, 0.4), g, p, opt), g);
  CHECK(text.find("[ring]\npresent = true\nrho = 0.4") != std::string::npos);
  CHECK(text.find("parity = even") != std::string::npos);
  CHECK(text.find("[winding 0]") != std::string::npos);
  const std::string split = format_report(analyze(core_model(g, 0.5), g, p), g);
  CHECK(split.find("parity = odd") != std::string::npos);
  CHECK(split.find("fit = lambda_plus") != std::string::npos);
}
