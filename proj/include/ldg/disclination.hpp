#pragma once

// Structural analysis of a converged field: axis zeros, the equatorial ring,
// director winding, split-core segment and dumbbell classification, tangent
// maps at defects, and core non-degeneracy.

#include <optional>
#include <string>
#include <vector>

#include "ldg/grid.hpp"

namespace ldg {

struct AxisZeros {
  std::vector<double> z;  // ascending, all in (0, 1)
  bool odd() const { return z.size() % 2 == 1; }
  const char* parity() const { return odd() ? "odd" : "even"; }
};

/// Sign changes of u2 along the axis, located by linear interpolation. Nodes
/// with |u2| <= threshold count as zero and are skipped when looking for a
/// sign change.
AxisZeros find_axis_zeros(const OrderField& field, const Grid& grid, double threshold = 0.0);

struct Ring {
  double rho = 0.0;    // rho_a
  double kappa = 0.0;  // (d_rho u1 - sqrt3 d_rho u2) / d_z u3 at (rho_a, 0)
  double dz_u3 = 0.0;
  double g_origin = 0.0;  // u1 - sqrt3 u2 at the origin
  double g_end = 0.0;     // ... at the outer end of T
};

/// First upward sign change of g = u1 - sqrt3 u2 along T. Empty if none.
/// DegenerateRing when d_z u3 <= 0 at the crossing.
std::optional<Ring> find_ring(const OrderField& field, const Grid& grid);

/// Director at an arbitrary point of the disk (reflections for z < 0).
Vec3 director_at(const OrderField& field, const Grid& grid, double rho, double z);

struct Winding {
  double angle = 0.0;  // end minus start, line-field unwrapped
  Vec3 start{};
  Vec3 end{};
};

/// Director angle change along the circle of radius r about (rho0, z0),
/// counter-clockwise from the point (rho0 - r, z0), approached from below.
/// Samples sit at phi' = -pi + 2 pi (k + 1/2) / samples. samples >= 64.
Winding director_winding(const OrderField& field, const Grid& grid, double rho0, double z0, double r,
                         int samples = 256);

/// Limit director about the ring for slope ratio kappa, phi' in [-pi, pi].
Vec3 ring_limit_director(double kappa, double phi_prime);

/// Sup over samples (excluding 0.1-neighbourhoods of phi' = -pi, 0, pi) of
/// |kappa[u] - ring_limit_director| on the circle of radius r about (rho_a, 0).
double ring_tangent_limit(const OrderField& field, const Grid& grid, double rho_a, double kappa, double r,
                          int samples = 256);

struct CoreFit {
  bool plus = true;          // Lambda_+ fits better
  double deviation = 0.0;    // sup |u/|u| - (0, +-cos psi, sin psi)| for the better sign
  double deviation_plus = 0.0;
  double deviation_minus = 0.0;
  double director_deviation = 0.0;  // sup |kappa[u] - kappa^{+-}| for the better sign
  double min_norm = 0.0;
};

/// Tangent-map fit on the half circle (r sin psi, z_core + r cos psi), psi in [0, pi].
/// CoreTooLarge if |u| < 1e-12 on the circle; InvalidConfig if the circle leaves (0, 1).
CoreFit core_tangent_limit(const OrderField& field, const Grid& grid, double z_core, double r, int samples = 128);

/// min over grid nodes with 0 < |x - z| <= R a^{-1/2} of |u| / (sqrt(a) |x - z|).
/// CoreUnderResolved if R a^{-1/2} < 8 h.
double nondegeneracy_check(const OrderField& field, const Grid& grid, const Params& params, double z_core,
                           double R);

/// Dumbbell D_{r, eps}(z+, z-) in the (rho, z) half plane (rho >= 0).
bool in_dumbbell(double rho, double z, double z_a, double r, double eps);

/// 3 / sqrt(a mu).
double core_radius_estimate(const Params& params);

struct FieldClassification {
  std::vector<Phase> phase;  // per node, Isotropic outside the disk
  std::size_t count[4] = {0, 0, 0, 0};

  // axis
  std::size_t axis_nodes = 0, axis_positive = 0, axis_negative = 0, axis_isotropic = 0;

  // split-core summary (present when there is at least one axis zero)
  bool has_segment = false;
  double z_plus = 0.0;
  std::size_t segment_nodes = 0, segment_negative = 0;
  std::size_t flank_nodes = 0, flank_positive = 0;
  double dumbbell_r = 0.0, dumbbell_eps = 0.0;
  std::size_t dumbbell_nodes = 0, dumbbell_biaxial_ordered = 0;
  double segment_director_deviation = 0.0;  // max |kappa - e_rho| at rho = h, z <= z_plus / 2

  // boundary
  std::size_t arc_nodes = 0, arc_positive_radial = 0;
};

/// tol <= 0 selects the per-node default 1e-6 max(1, |u|).
FieldClassification classify_field(const OrderField& field, const Grid& grid, const Params& params,
                                   double tol = 0.0);

struct DisclinationReport {
  AxisZeros zeros;
  std::optional<Ring> ring;
  std::string ring_error;
  std::optional<EigenData> ring_eigen;
  std::optional<Winding> ring_winding;
  FieldClassification classification;
  std::optional<CoreFit> core;
  std::vector<Winding> extra_windings;
  std::vector<std::array<double, 3>> extra_winding_circles;
};

struct ReportOptions {
  bool ring = true;
  bool cores = true;
  std::vector<std::array<double, 3>> windings;  // (rho, z, r)
  double tol = 0.0;
};

DisclinationReport analyze(const OrderField& field, const Grid& grid, const Params& params,
                           const ReportOptions& options = {});

/// Machine-parseable "key = value" lines, one [section] per analysis.
std::string format_report(const DisclinationReport& report, const Grid& grid);

}  // namespace ldg
