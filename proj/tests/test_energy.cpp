#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ldg/energy.hpp"
#include "ldg/errors.hpp"
#include "ldg/signorini_solver.hpp"

using namespace ldg;

namespace {

constexpr double kPi = std::numbers::pi;

OrderField constant_field(const Grid& g, UVec u) {
  OrderField f(g);
  for (auto& v : f.values) v = u;
  return f;
}

// Random field that respects the axis / T constraints, with boundary values on the arc.
OrderField random_field(const Grid& g, const Params& p, std::mt19937& rng) {
  std::uniform_real_distribution<double> U(-0.8, 0.8);
  OrderField f(g);
  for (int j = 0; j <= g.n(); ++j)
    for (int i = 0; i <= g.n(); ++i) f.at(i, j) = {U(rng), U(rng), U(rng)};
  project_in_place(f, g, p);
  return f;
}

}  // namespace

TEST_CASE("energy of the zero field") {
  const Grid g(64);
  const Params p(3.0, 1.0);
  const OrderField zero = constant_field(g, {});
  const EnergyBreakdown e = energy(zero, g, p);
  CHECK(e.dirichlet == 0.0);
  CHECK(e.axis_penalty == 0.0);
  const double vol = integrate(std::vector<double>(g.size(), 1.0), g);
  CHECK(e.bulk == doctest::Approx((2.5 + 1.5) * vol).epsilon(1e-12));
  // 16 pi / 3 up to the O(h) quadrature error
  CHECK(std::abs(e.bulk - 16.0 * kPi / 3.0) < 4.0 * 4.0 * kPi / 3.0 / 64.0);
  CHECK(e.total == doctest::Approx(e.dirichlet + e.axis_penalty + e.bulk).epsilon(1e-12));

  const Params q(10.0, 7.0);
  CHECK(energy(zero, g, q).bulk == doctest::Approx(7.0 * (q.d_a() + 5.0) * vol).epsilon(1e-12));

  // scaling any field by 0 gives the same numbers
  std::mt19937 rng(3);
  OrderField r = random_field(g, p, rng);
  for (auto& v : r.values) v = 0.0 * v;
  CHECK(energy(r, g, p).total == e.total);
}

TEST_CASE("energy rejects non-finite fields") {
  const Grid g(16);
  const Params p(3.0, 1.0);
  OrderField f = constant_field(g, {});
  f.at(3, 3).u2 = NAN;
  CHECK_THROWS_AS(energy(f, g, p), Error);
  try {
    energy(f, g, p);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFiniteField);
  }
}

TEST_CASE("gradient matches central finite differences of the energy") {
  const Grid g(24);
  const Params p(5.0, 3.0);
  std::mt19937 rng(11);
  std::normal_distribution<double> N(0.0, 1.0);
  const auto mask = fixed_mask(g);
  for (int trial = 0; trial < 20; ++trial) {
    const OrderField u = random_field(g, p, rng);
    OrderField d(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
      d.values[k] = {mask[k] & 1 ? 0.0 : N(rng), mask[k] & 2 ? 0.0 : N(rng), mask[k] & 4 ? 0.0 : N(rng)};
    }
    const auto grad = energy_gradient(u, g, p);
    double analytic = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) analytic += g.weights()[k] * dot(grad[k], d.values[k]);

    const double t = 1e-6;
    OrderField up = u, dn = u;
    for (std::size_t k = 0; k < g.size(); ++k) {
      up.values[k] = up.values[k] + t * d.values[k];
      dn.values[k] = dn.values[k] - t * d.values[k];
    }
    const double fd = (energy(up, g, p).total - energy(dn, g, p).total) / (2.0 * t);
    CHECK(std::abs(fd - analytic) <= 1e-5 * std::abs(analytic));
  }
}

TEST_CASE("bulk gradient on constant axial fields") {
  const Grid g(32);
  const Params p(20.0, 4.0);
  const double H = p.h_a();
  // (0, H_a, 0) sits at the minimum of the radial potential: the gradient vanishes
  {
    const auto grad = energy_gradient(constant_field(g, {0.0, H, 0.0}), g, p);
    const double formula = -p.mu() * (3.0 / std::sqrt(2.0) * H * H - p.a() * (H * H - 1.0) * H);
    CHECK(std::abs(grad[g.index(5, 7)].u2) < 1e-9);
    CHECK(std::abs(grad[g.index(5, 7)].u2 - 2.0 * formula) < 1e-9);
  }
  // away from the minimum: dE/du2 per unit weight = 2 x the reduced EL bulk term
  {
    const double v = 0.5;
    const auto grad = energy_gradient(constant_field(g, {0.0, v, 0.0}), g, p);
    const double formula = -p.mu() * (3.0 / std::sqrt(2.0) * v * v - p.a() * (v * v - 1.0) * v);
    for (auto [i, j] : {std::pair{5, 7}, std::pair{10, 3}, std::pair{0, 9}, std::pair{8, 0}})
      CHECK(grad[g.index(i, j)].u2 == doctest::Approx(2.0 * formula).epsilon(1e-10));
  }
}

TEST_CASE("bulk integrand is nonnegative inside the H_a ball") {
  std::mt19937 rng(5);
  std::normal_distribution<double> N(0.0, 1.0);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (double a : {3.0, 20.0, 100.0}) {
    const double H = compute_h_a(a), D = compute_d_a(a);
    double mn = INFINITY;
    for (int k = 0; k < 100000; ++k) {
      UVec u{N(rng), N(rng), N(rng)};
      u = (H * std::cbrt(U(rng)) / u.norm()) * u;
      const double n2 = u.norm2();
      mn = std::min(mn, D - 3.0 * std::sqrt(2.0) * p_invariant(u) + 0.5 * a * (n2 - 1.0) * (n2 - 1.0));
    }
    CHECK(mn >= -1e-10);
  }
}

TEST_CASE("limit energy") {
  const Grid g(32);
  CHECK(limit_energy(constant_field(g, {0.0, 1.0, 0.0}), g, 5.0) == doctest::Approx(0.0).scale(1.0));
  try {
    limit_energy(constant_field(g, {1.0, 0.0, 0.0}), g, 5.0);
    FAIL("expected AxisConstraintViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AxisConstraintViolation);
  }
  try {
    limit_energy(constant_field(g, {0.0, 0.9, 0.0}), g, 5.0);
    FAIL("expected NotSphereValued");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotSphereValued);
  }
  // 1 - 3 P >= 0 on the unit sphere
  std::mt19937 rng(9);
  std::normal_distribution<double> N(0.0, 1.0);
  for (int k = 0; k < 100000; ++k) {
    UVec u{N(rng), N(rng), N(rng)};
    u = (1.0 / u.norm()) * u;
    REQUIRE(1.0 - 3.0 * p_invariant(u) >= -1e-14);
  }
}

TEST_CASE("node energies and localized energy") {
  const Grid g(48);
  const Params p(10.0, 25.0);
  const OrderField u = initialize(Seed{}, g, p);
  const auto ne = node_energies(u, g, p);
  double sum = 0.0;
  for (double x : ne) sum += x;
  const double total = energy(u, g, p).total;
  CHECK(sum == doctest::Approx(total).epsilon(1e-12));
  // r -> 1 about the origin recovers the total energy
  const double r_all = 1.0 + 2.0 * g.h();
  CHECK(localized_energy(ne, g, 0.0, 0.0, r_all) == doctest::Approx(total / r_all).epsilon(1e-12));
  CHECK(localized_energy(u, g, p, 0.0, 0.0, 0.5) == doctest::Approx(localized_energy(ne, g, 0.0, 0.0, 0.5)));
  try {
    localized_energy(u, g, p, 0.3, 0.2, 0.1);
    FAIL("expected UnsupportedCenter");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedCenter);
  }
}

TEST_CASE("potential integral") {
  const Grid g(32);
  const double vol = integrate(std::vector<double>(g.size(), 1.0), g);
  CHECK(potential_integral(constant_field(g, {}), g, 4.0) == doctest::Approx(4.0 * vol));
  CHECK(potential_integral(constant_field(g, {0.0, 1.0, 0.0}), g, 4.0) == 0.0);
}
