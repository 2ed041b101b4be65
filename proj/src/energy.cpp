#include "ldg/energy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ldg/errors.hpp"

namespace ldg {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

struct LdgBulk {
  double mu, a, d_a;
  double value(const UVec& u) const {
    const double q = u.norm2() - 1.0;
    return mu * (d_a - 3.0 * kSqrt2 * p_invariant(u) + 0.5 * a * q * q);
  }
  UVec derivative(const UVec& u) const {
    const double q = u.norm2() - 1.0;
    const UVec gp = p_gradient(u);
    return (-3.0 * kSqrt2 * mu) * gp + (2.0 * a * mu * q) * u;
  }
};

struct LimitBulk {
  double mu;
  double value(const UVec& u) const { return kSqrt2 * mu * (1.0 - 3.0 * p_invariant(u)); }
  UVec derivative(const UVec& u) const { return (-3.0 * kSqrt2 * mu) * p_gradient(u); }
};

// long double so that totals of nearby fields round consistently
struct RowSums {
  long double dirichlet = 0.0, axis = 0.0, bulk = 0.0;
};

// Shared kernel. deriv and node_e are optional outputs.
template <class Bulk>
EnergyBreakdown evaluate(const OrderField& f, const Grid& g, const Bulk& bulk, std::vector<UVec>* deriv,
                         std::vector<double>* node_e) {
  check_shape(f, g);
  const int n = g.n();
  const double h = g.h();
  if (deriv) deriv->assign(g.size(), UVec{});
  if (node_e) node_e->assign(g.size(), 0.0);
  std::vector<RowSums> rows(n + 1);

  auto c_rho = [&](int i, int j) { return kFourPi * (i + 0.5) * h * g.cell_z_width(j) / h; };
  auto c_z = [&](int i) { return kFourPi * g.cell_rho_moment(i) / h; };

#pragma omp parallel for schedule(static)
  for (int j = 0; j <= n; ++j) {
    RowSums acc;
    for (int i = 0; i <= g.row_end(j); ++i) {
      const std::size_t k = g.index(i, j);
      const UVec& u = f.at(i, j);
      const double w = g.weight(i, j);
      double e_node = 0.0;
      UVec d{};

      // Edges to the right and up are owned by this node; left and down only
      // contribute to the derivative and the node share.
      if (g.in_domain(i + 1, j)) {
        const double c = c_rho(i, j);
        const UVec du = f.at(i + 1, j) - u;
        const double e = c * du.norm2();
        acc.dirichlet += e;
        e_node += 0.5 * e;
        d = d - (2.0 * c) * du;
      }
      if (i > 0) {
        const double c = c_rho(i - 1, j);
        const UVec du = u - f.at(i - 1, j);
        e_node += 0.5 * c * du.norm2();
        d = d + (2.0 * c) * du;
      }
      if (g.in_domain(i, j + 1)) {
        const double c = c_z(i);
        const UVec du = f.at(i, j + 1) - u;
        const double e = c * du.norm2();
        acc.dirichlet += e;
        e_node += 0.5 * e;
        d = d - (2.0 * c) * du;
      }
      if (j > 0) {
        const double c = c_z(i);
        const UVec du = u - f.at(i, j - 1);
        e_node += 0.5 * c * du.norm2();
        d = d + (2.0 * c) * du;
      }

      // (4 u1^2 + u3^2) / rho^2. On the axis the quotient is replaced by the
      // difference quotient at the first off-axis node; the corner (0, 0) is dropped.
      if (i > 0) {
        const double inv = 1.0 / (g.rho(i) * g.rho(i));
        const double e = w * (4.0 * u.u1 * u.u1 + u.u3 * u.u3) * inv;
        acc.axis += e;
        e_node += e;
        d.u1 += w * 8.0 * u.u1 * inv;
        d.u3 += w * 2.0 * u.u3 * inv;
        if (i == 1 && j > 0) {
          const double w0 = g.weight(0, j) / (h * h);
          d.u1 += w0 * 8.0 * u.u1;
          d.u3 += w0 * 2.0 * u.u3;
        }
      } else if (j > 0 && g.in_domain(1, j)) {
        const UVec& v = f.at(1, j);
        const double e = g.weight(0, j) * (4.0 * v.u1 * v.u1 + v.u3 * v.u3) / (h * h);
        acc.axis += e;
        e_node += e;
      }

      const double eb = w * bulk.value(u);
      acc.bulk += eb;
      e_node += eb;
      if (deriv) (*deriv)[k] = d + w * bulk.derivative(u);
      if (node_e) (*node_e)[k] = e_node;
    }
    rows[j] = acc;
  }

  RowSums sum;
  for (const auto& r : rows) {
    sum.dirichlet += r.dirichlet;
    sum.axis += r.axis;
    sum.bulk += r.bulk;
  }
  EnergyBreakdown out;
  out.dirichlet = static_cast<double>(sum.dirichlet);
  out.axis_penalty = static_cast<double>(sum.axis);
  out.bulk = static_cast<double>(sum.bulk);
  out.total = static_cast<double>(sum.dirichlet + sum.axis + sum.bulk);
  if (!std::isfinite(out.total)) throw Error(ErrorCode::NonFiniteField, "energy is not finite");
  return out;
}

LdgBulk ldg_bulk(const Params& p) { return {p.mu(), p.a(), p.d_a()}; }

// Smoothed ball indicator: 1 inside r - h/2, 0 beyond r + h/2.
double ramp(double dist, double r, double h) { return std::clamp((r - dist) / h + 0.5, 0.0, 1.0); }

}  // namespace

std::vector<unsigned char> fixed_mask(const Grid& grid) {
  std::vector<unsigned char> mask(grid.size(), 7);
  for (int j = 0; j <= grid.n(); ++j)
    for (int i = 0; i <= grid.row_end(j); ++i) {
      unsigned char m = 0;
      if (grid.is_arc(i, j)) m = 7;
      else {
        if (grid.is_axis(i, j)) m |= 1 | 4;
        if (grid.is_equator(i, j)) m |= 4;
      }
      mask[grid.index(i, j)] = m;
    }
  return mask;
}

void check_symmetry_constraints(const OrderField& field, const Grid& grid, double tol) {
  check_shape(field, grid);
  for (int j = 0; j <= grid.n(); ++j) {
    const UVec& v = field.at(0, j);
    if (std::abs(v.u1) > tol || std::abs(v.u3) > tol)
      throw Error(ErrorCode::AxisConstraintViolation, "u1 or u3 nonzero on the axis at z=" + std::to_string(grid.z(j)));
  }
  for (int i = 0; i <= grid.row_end(0); ++i)
    if (std::abs(field.at(i, 0).u3) > tol)
      throw Error(ErrorCode::AxisConstraintViolation, "u3 nonzero on T at rho=" + std::to_string(grid.rho(i)));
}

EnergyBreakdown energy(const OrderField& field, const Grid& grid, const Params& params) {
  check_finite(field, grid);
  return evaluate(field, grid, ldg_bulk(params), nullptr, nullptr);
}

EnergyBreakdown energy_and_derivative(const OrderField& field, const Grid& grid, const Params& params,
                                      std::vector<UVec>& derivative, std::vector<double>* node_energy) {
  return evaluate(field, grid, ldg_bulk(params), &derivative, node_energy);
}

std::vector<UVec> energy_gradient(const OrderField& field, const Grid& grid, const Params& params) {
  check_finite(field, grid);
  std::vector<UVec> d;
  evaluate(field, grid, ldg_bulk(params), &d, nullptr);
  const auto mask = fixed_mask(grid);
  for (int j = 0; j <= grid.n(); ++j)
    for (int i = 0; i <= grid.n(); ++i) {
      const std::size_t k = grid.index(i, j);
      UVec& v = d[k];
      if (!grid.in_domain(i, j)) {
        v = {};
        continue;
      }
      v = (1.0 / grid.weight(i, j)) * v;
      if (mask[k] & 1) v.u1 = 0.0;
      if (mask[k] & 2) v.u2 = 0.0;
      if (mask[k] & 4) v.u3 = 0.0;
    }
  return d;
}

std::vector<double> node_energies(const OrderField& field, const Grid& grid, const Params& params) {
  check_finite(field, grid);
  std::vector<double> e;
  evaluate(field, grid, ldg_bulk(params), nullptr, &e);
  return e;
}

double limit_energy(const OrderField& field, const Grid& grid, double mu) {
  check_finite(field, grid);
  for (int j = 0; j <= grid.n(); ++j)
    for (int i = 0; i <= grid.row_end(j); ++i)
      if (std::abs(field.at(i, j).norm() - 1.0) > 1e-8)
        throw Error(ErrorCode::NotSphereValued, "|u| != 1 at node (" + std::to_string(i) + ", " + std::to_string(j) + ")");
  check_symmetry_constraints(field, grid, 1e-12);
  return evaluate(field, grid, LimitBulk{mu}, nullptr, nullptr).total;
}

double potential_integral(const OrderField& field, const Grid& grid, double a) {
  check_finite(field, grid);
  double total = 0.0;
  for (int j = 0; j <= grid.n(); ++j)
    for (int i = 0; i <= grid.row_end(j); ++i) {
      const double q = field.at(i, j).norm2() - 1.0;
      total += grid.weight(i, j) * a * q * q;
    }
  return total;
}

double localized_energy(const std::vector<double>& node_energy, const Grid& grid, double rho_c, double z_c, double r) {
  if (node_energy.size() != grid.size()) throw Error(ErrorCode::ShapeError, "node energy size does not match grid");
  if (rho_c != 0.0) throw Error(ErrorCode::UnsupportedCenter, "only centres on the symmetry axis are supported");
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidConfig, "radius must be positive");
  const double h = grid.h();
  double total = 0.0;
  for (int j = 0; j <= grid.n(); ++j)
    for (int i = 0; i <= grid.row_end(j); ++i) {
      const double rho = grid.rho(i), z = grid.z(j);
      // Each node stands for the pair (rho, z), (rho, -z).
      const double up = ramp(std::hypot(rho, z - z_c), r, h);
      const double down = ramp(std::hypot(rho, z + z_c), r, h);
      total += 0.5 * (up + down) * node_energy[grid.index(i, j)];
    }
  return total / r;
}

double localized_energy(const OrderField& field, const Grid& grid, const Params& params, double rho_c, double z_c,
                        double r) {
  if (rho_c != 0.0) throw Error(ErrorCode::UnsupportedCenter, "only centres on the symmetry axis are supported");
  return localized_energy(node_energies(field, grid, params), grid, rho_c, z_c, r);
}

}  // namespace ldg
