#pragma once

// Discrete reduced energy
//   E = 4 pi int_{D+} [ |Du|^2 + (4 u1^2 + u3^2) / rho^2
//                       + mu (D_a - 3 sqrt2 P[u] + a/2 (|u|^2 - 1)^2) ] rho drho dz
// Dirichlet part: one term per grid edge. Axis part and bulk part: one term
// per node, weighted by the grid quadrature.

#include <vector>

#include "ldg/grid.hpp"

namespace ldg {

struct EnergyBreakdown {
  double dirichlet = 0.0;
  double axis_penalty = 0.0;
  double bulk = 0.0;
  double total = 0.0;
};

/// Per-node bitmask of components held fixed: bit c set means u_{c+1} is pinned.
/// Arc nodes pin everything, axis nodes pin u1 and u3, equator nodes pin u3.
std::vector<unsigned char> fixed_mask(const Grid& grid);

/// Throws AxisConstraintViolation when u1 or u3 is nonzero on the axis or u3 on T.
void check_symmetry_constraints(const OrderField& field, const Grid& grid, double tol = 0.0);

EnergyBreakdown energy(const OrderField& field, const Grid& grid, const Params& params);

/// Energy plus dE/du per node (Euclidean, not divided by weights; fixed
/// components are not zeroed). Used by the solver, which also asks for the
/// node energies to difference nearby fields accurately.
EnergyBreakdown energy_and_derivative(const OrderField& field, const Grid& grid, const Params& params,
                                      std::vector<UVec>& derivative, std::vector<double>* node_energy = nullptr);

/// L2(weights) gradient (dE/du divided by the node weight), zero on pinned components.
std::vector<UVec> energy_gradient(const OrderField& field, const Grid& grid, const Params& params);

/// Energy attributed to each node. Edge energies are split evenly between
/// their end points, so the entries sum to energy().total.
std::vector<double> node_energies(const OrderField& field, const Grid& grid, const Params& params);

/// Limit functional with bulk sqrt2 mu (1 - 3 P[u]); needs |u| = 1 at every
/// domain node (NotSphereValued) and the axis constraints.
double limit_energy(const OrderField& field, const Grid& grid, double mu);

/// int a (|u|^2 - 1)^2 over B_1.
double potential_integral(const OrderField& field, const Grid& grid, double a);

/// r^{-1} times the energy in the 3-D ball of radius r around (rho_c, z_c).
/// Only axis centres are supported (UnsupportedCenter otherwise); the pole
/// (0, 1) gives the boundary version. The ball indicator is smoothed over
/// one grid spacing.
double localized_energy(const OrderField& field, const Grid& grid, const Params& params, double rho_c, double z_c,
                        double r);
/// Same, reusing precomputed node energies.
double localized_energy(const std::vector<double>& node_energy, const Grid& grid, double rho_c, double z_c, double r);

}  // namespace ldg
