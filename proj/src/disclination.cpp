#include "ldg/disclination.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ldg/errors.hpp"

namespace ldg {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt3 = std::sqrt(3.0);

// Distance between two directors as lines.
double line_distance(const Vec3& a, const Vec3& b) {
  double dm = 0.0, dp = 0.0;
  for (int k = 0; k < 3; ++k) {
    dm += (a[k] - b[k]) * (a[k] - b[k]);
    dp += (a[k] + b[k]) * (a[k] + b[k]);
  }
  return std::sqrt(std::min(dm, dp));
}

double planar_angle(const Vec3& d) { return std::atan2(d[2], d[0]); }

// Representative of angle + m pi closest to ref.
double nearest_branch(double angle, double ref) { return angle + kPi * std::round((ref - angle) / kPi); }

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

}  // namespace

AxisZeros find_axis_zeros(const OrderField& field, const Grid& grid, double threshold) {
  check_shape(field, grid);
  AxisZeros out;
  const int n = grid.n();
  int prev = -1;  // last node with |u2| > threshold
  for (int j = 0; j <= n; ++j) {
    const double v = field.at(0, j).u2;
    if (std::abs(v) <= threshold) continue;
    if (prev >= 0) {
      const double p = field.at(0, prev).u2;
      if ((p > 0.0) != (v > 0.0)) {
        double z;
        if (prev == j - 1) {
          z = grid.z(prev) + grid.h() * p / (p - v);
        } else {
          z = 0.5 * (grid.z(prev + 1) + grid.z(j - 1));  // run of near-zero nodes
        }
        if (z > 0.0 && z < 1.0) out.z.push_back(z);
      }
    }
    prev = j;
  }
  return out;
}

std::optional<Ring> find_ring(const OrderField& field, const Grid& grid) {
  check_shape(field, grid);
  const int end = grid.row_end(0);
  auto g = [&](int i) { return field.at(i, 0).u1 - kSqrt3 * field.at(i, 0).u2; };
  for (int i = 0; i < end; ++i) {
    const double g0 = g(i), g1 = g(i + 1);
    if (!(g0 < 0.0 && g1 >= 0.0)) continue;
    const double t = g0 / (g0 - g1);
    Ring ring;
    ring.rho = grid.rho(i) + t * grid.h();
    ring.g_origin = g(0);
    ring.g_end = g(end);
    // u3 is odd in z, so u3(rho, h) / h is second order.
    const double dz0 = field.at(i, 1).u3 / grid.h();
    const double dz1 = field.at(i + 1, 1).u3 / grid.h();
    ring.dz_u3 = (1.0 - t) * dz0 + t * dz1;
    if (!(ring.dz_u3 > 0.0)) {
      std::ostringstream os;
      os << "d_z u3 = " << ring.dz_u3 << " at rho_a = " << ring.rho;
      throw Error(ErrorCode::DegenerateRing, os.str());
    }
    ring.kappa = (g1 - g0) / grid.h() / ring.dz_u3;
    return ring;
  }
  return std::nullopt;
}

Vec3 director_at(const OrderField& field, const Grid& grid, double rho, double z) {
  UVec u = interpolate(field, grid, rho, z);
  return director(u);
}

Winding director_winding(const OrderField& field, const Grid& grid, double rho0, double z0, double r,
                         int samples) {
  check_shape(field, grid);
  if (samples < 64) throw Error(ErrorCode::InvalidConfig, "winding needs at least 64 samples");
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidConfig, "winding radius must be positive");
  Winding w;
  double first = 0.0, cur = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double phi = -kPi + 2.0 * kPi * (k + 0.5) / samples;
    Vec3 d;
    try {
      d = director_at(field, grid, rho0 + r * std::cos(phi), z0 + r * std::sin(phi));
    } catch (const Error& e) {
      std::ostringstream os;
      os << "sample " << k << " of " << samples << ": " << e.what();
      throw Error(e.code(), os.str());
    }
    const double ang = planar_angle(d);
    if (k == 0) {
      first = cur = ang;
      w.start = d;
    } else {
      cur = nearest_branch(ang, cur);
    }
    w.end = d;
  }
  w.angle = cur - first;
  return w;
}

Vec3 ring_limit_director(double kappa, double phi_prime) {
  const double chi = 0.5 * std::atan2(2.0 * std::sin(phi_prime), kappa * std::cos(phi_prime));
  return {std::cos(chi), 0.0, std::sin(chi)};
}

double ring_tangent_limit(const OrderField& field, const Grid& grid, double rho_a, double kappa, double r,
                          int samples) {
  check_shape(field, grid);
  if (samples < 8) throw Error(ErrorCode::InvalidConfig, "too few samples");
  double mx = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double phi = -kPi + 2.0 * kPi * (k + 0.5) / samples;
    if (std::abs(phi) < 0.1 || kPi - std::abs(phi) < 0.1) continue;
    const Vec3 d = director_at(field, grid, rho_a + r * std::cos(phi), r * std::sin(phi));
    mx = std::max(mx, line_distance(d, ring_limit_director(kappa, phi)));
  }
  return mx;
}

CoreFit core_tangent_limit(const OrderField& field, const Grid& grid, double z_core, double r, int samples) {
  check_shape(field, grid);
  if (samples < 8) throw Error(ErrorCode::InvalidConfig, "too few samples");
  if (!(r > 0.0) || z_core - r <= 0.0 || z_core + r >= 1.0)
    throw Error(ErrorCode::InvalidConfig, "core circle must stay inside the upper half of the axis");
  CoreFit fit;
  fit.min_norm = INFINITY;
  double dir_plus = 0.0, dir_minus = 0.0;
  for (int k = 0; k <= samples; ++k) {
    const double psi = kPi * k / samples;
    const UVec u = interpolate(field, grid, r * std::sin(psi), z_core + r * std::cos(psi));
    const double nu = u.norm();
    fit.min_norm = std::min(fit.min_norm, nu);
    if (nu < 1e-12) throw Error(ErrorCode::CoreTooLarge, "field vanishes on the sampling circle");
    const UVec w = (1.0 / nu) * u;
    const UVec tp{0.0, std::cos(psi), std::sin(psi)};
    const UVec tm{0.0, -std::cos(psi), std::sin(psi)};
    fit.deviation_plus = std::max(fit.deviation_plus, (w - tp).norm());
    fit.deviation_minus = std::max(fit.deviation_minus, (w - tm).norm());
    if (k == 0 || k == samples) continue;
    try {
      const Vec3 d = director(u);
      dir_plus = std::max(dir_plus, line_distance(d, kappa_tangent(true, psi)));
      dir_minus = std::max(dir_minus, line_distance(d, kappa_tangent(false, psi)));
    } catch (const Error&) {
      // uniaxial-negative sample: no director to compare
    }
  }
  fit.plus = fit.deviation_plus <= fit.deviation_minus;
  fit.deviation = fit.plus ? fit.deviation_plus : fit.deviation_minus;
  fit.director_deviation = fit.plus ? dir_plus : dir_minus;
  return fit;
}

double nondegeneracy_check(const OrderField& field, const Grid& grid, const Params& params, double z_core,
                           double R) {
  check_shape(field, grid);
  if (!(R > 0.0)) throw Error(ErrorCode::InvalidConfig, "R must be positive");
  const double sa = std::sqrt(params.a());
  const double radius = R / sa;
  if (radius < 8.0 * grid.h()) {
    std::ostringstream os;
    os << "R a^{-1/2} = " << radius << " is below 8 h = " << 8.0 * grid.h();
    throw Error(ErrorCode::CoreUnderResolved, os.str());
  }
  double mn = INFINITY;
  const int n = grid.n();
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= grid.row_end(j); ++i) {
      const double rho = grid.rho(i);
      // the node also stands for its mirror image below T
      for (double z : {grid.z(j), -grid.z(j)}) {
        const double d = std::hypot(rho, z - z_core);
        if (d < 1e-12 || d > radius) continue;
        mn = std::min(mn, field.at(i, j).norm() / (sa * d));
      }
    }
  }
  if (!std::isfinite(mn)) throw Error(ErrorCode::CoreUnderResolved, "no nodes around the core");
  return mn;
}

bool in_dumbbell(double rho, double z, double z_a, double r, double eps) {
  const double az = std::abs(z);
  const double chord = z_a - r + eps;  // height of the neck end
  const double neck = std::sqrt(std::max(0.0, r * r - (r - eps) * (r - eps)));
  if (rho <= neck && az <= chord) return true;
  return az >= chord && std::hypot(rho, az - z_a) <= r;
}

double core_radius_estimate(const Params& params) { return 3.0 / std::sqrt(params.a() * params.mu()); }

FieldClassification classify_field(const OrderField& field, const Grid& grid, const Params& params, double tol) {
  check_shape(field, grid);
  FieldClassification c;
  const int n = grid.n();
  c.phase.assign(grid.size(), Phase::Isotropic);
  auto node_tol = [&](const UVec& u) { return tol > 0.0 ? tol : default_phase_tol(u); };

  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= grid.row_end(j); ++i) {
      const UVec& u = field.at(i, j);
      const EigenData e = eigenvalues(u, node_tol(u));
      c.phase[grid.index(i, j)] = e.phase;
      ++c.count[static_cast<int>(e.phase)];
      if (i == 0) {
        ++c.axis_nodes;
        if (e.phase == Phase::PositiveUniaxial) ++c.axis_positive;
        if (e.phase == Phase::NegativeUniaxial) ++c.axis_negative;
        if (e.phase == Phase::Isotropic) ++c.axis_isotropic;
      }
      if (grid.is_arc(i, j)) {
        ++c.arc_nodes;
        const double r = std::hypot(grid.rho(i), grid.z(j));
        const Vec3 er{grid.rho(i) / r, 0.0, grid.z(j) / r};
        if (e.phase == Phase::PositiveUniaxial && e.director && line_distance(*e.director, er) < 1e-6)
          ++c.arc_positive_radial;
      }
    }
  }

  const AxisZeros zeros = find_axis_zeros(field, grid);
  if (zeros.z.empty()) return c;
  c.has_segment = true;
  c.z_plus = zeros.z.front();
  const double h = grid.h();
  const double core = core_radius_estimate(params);
  const double next_zero = zeros.z.size() > 1 ? zeros.z[1] : 1.0;

  for (int j = 0; j <= n; ++j) {
    const double z = grid.z(j);
    const Phase p = c.phase[grid.index(0, j)];
    if (z < c.z_plus - h) {
      ++c.segment_nodes;
      if (p == Phase::NegativeUniaxial) ++c.segment_negative;
    }
    // at rho = h the deviation grows like h / (z_plus - z); use the middle half
    if (z <= 0.5 * c.z_plus) {
      try {
        const Vec3 d = director(field.at(1, j));
        c.segment_director_deviation = std::max(c.segment_director_deviation, line_distance(d, {1.0, 0.0, 0.0}));
      } catch (const Error&) {
        c.segment_director_deviation = std::max(c.segment_director_deviation, 1.0);
      }
    }
    if (z > c.z_plus + h && z < std::min(c.z_plus + 3.0 * core, next_zero - h)) {
      ++c.flank_nodes;
      if (p == Phase::PositiveUniaxial) ++c.flank_positive;
    }
  }

  c.dumbbell_r = 3.0 * core;
  c.dumbbell_eps = core;
  for (int j = 0; j <= n; ++j) {
    for (int i = 1; i <= grid.row_end(j); ++i) {
      if (!in_dumbbell(grid.rho(i), grid.z(j), c.z_plus, c.dumbbell_r, c.dumbbell_eps)) continue;
      ++c.dumbbell_nodes;
      const UVec& u = field.at(i, j);
      const EigenData e = eigenvalues(u, node_tol(u));
      const auto& f = e.formula;
      if (e.phase == Phase::Biaxial && f[1] < f[0] && f[0] < f[2]) ++c.dumbbell_biaxial_ordered;
    }
  }
  return c;
}

DisclinationReport analyze(const OrderField& field, const Grid& grid, const Params& params,
                           const ReportOptions& options) {
  DisclinationReport rep;
  rep.zeros = find_axis_zeros(field, grid);
  rep.classification = classify_field(field, grid, params, options.tol);
  if (options.ring) {
    try {
      rep.ring = find_ring(field, grid);
    } catch (const Error& e) {
      rep.ring_error = e.what();
    }
    if (rep.ring) {
      rep.ring_eigen = eigenvalues(interpolate(field, grid, rep.ring->rho, 0.0));
      const double r = std::min({0.5 * rep.ring->rho, 0.5 * (1.0 - rep.ring->rho), 0.1});
      if (r > 2.0 * grid.h()) {
        try {
          rep.ring_winding = director_winding(field, grid, rep.ring->rho, 0.0, r);
        } catch (const Error& e) {
          rep.ring_error = e.what();
        }
      }
    }
  }
  if (options.cores && !rep.zeros.z.empty()) {
    const double z = rep.zeros.z.front();
    const double r = std::min({0.5 * z, 0.5 * (1.0 - z), 0.1});
    if (r > 2.0 * grid.h()) {
      try {
        rep.core = core_tangent_limit(field, grid, z, r);
      } catch (const Error&) {
      }
    }
  }
  for (const auto& c : options.windings) {
    rep.extra_winding_circles.push_back(c);
    rep.extra_windings.push_back(director_winding(field, grid, c[0], c[1], c[2]));
  }
  return rep;
}

std::string format_report(const DisclinationReport& rep, const Grid& grid) {
  std::ostringstream os;
  os << "[axis]\n";
  os << "zeros = " << rep.zeros.z.size() << "\n";
  os << "parity = " << rep.zeros.parity() << "\n";
  os << "zero_z =";
  for (double z : rep.zeros.z) os << " " << fmt(z);
  os << "\n";
  const auto& c = rep.classification;
  os << "axis_nodes = " << c.axis_nodes << "\n";
  os << "axis_positive = " << c.axis_positive << "\n";
  os << "axis_negative = " << c.axis_negative << "\n";
  os << "axis_isotropic = " << c.axis_isotropic << "\n";

  os << "[phases]\n";
  for (int p = 0; p < 4; ++p) os << to_string(static_cast<Phase>(p)) << " = " << c.count[p] << "\n";
  os << "arc_nodes = " << c.arc_nodes << "\n";
  os << "arc_positive_radial = " << c.arc_positive_radial << "\n";

  os << "[ring]\n";
  os << "present = " << (rep.ring ? "true" : "false") << "\n";
  if (!rep.ring_error.empty()) os << "error = " << rep.ring_error << "\n";
  if (rep.ring) {
    os << "rho = " << fmt(rep.ring->rho) << "\n";
    os << "kappa = " << fmt(rep.ring->kappa) << "\n";
    os << "dz_u3 = " << fmt(rep.ring->dz_u3) << "\n";
    os << "g_origin = " << fmt(rep.ring->g_origin) << "\n";
    os << "g_end = " << fmt(rep.ring->g_end) << "\n";
    if (rep.ring_eigen) os << "phase = " << to_string(rep.ring_eigen->phase) << "\n";
    if (rep.ring_winding) os << "winding = " << fmt(rep.ring_winding->angle) << "\n";
  }

  if (c.has_segment) {
    os << "[segment]\n";
    os << "z_plus = " << fmt(c.z_plus) << "\n";
    os << "segment_nodes = " << c.segment_nodes << "\n";
    os << "segment_negative = " << c.segment_negative << "\n";
    os << "flank_nodes = " << c.flank_nodes << "\n";
    os << "flank_positive = " << c.flank_positive << "\n";
    os << "director_deviation = " << fmt(c.segment_director_deviation) << "\n";
    os << "dumbbell_r = " << fmt(c.dumbbell_r) << "\n";
    os << "dumbbell_eps = " << fmt(c.dumbbell_eps) << "\n";
    os << "dumbbell_nodes = " << c.dumbbell_nodes << "\n";
    os << "dumbbell_biaxial_ordered = " << c.dumbbell_biaxial_ordered << "\n";
  }
  if (rep.core) {
    os << "[core]\n";
    os << "fit = " << (rep.core->plus ? "lambda_plus" : "lambda_minus") << "\n";
    os << "deviation = " << fmt(rep.core->deviation) << "\n";
    os << "director_deviation = " << fmt(rep.core->director_deviation) << "\n";
  }
  for (std::size_t k = 0; k < rep.extra_windings.size(); ++k) {
    const auto& circ = rep.extra_winding_circles[k];
    os << "[winding " << k << "]\n";
    os << "center = " << fmt(circ[0]) << " " << fmt(circ[1]) << "\n";
    os << "radius = " << fmt(circ[2]) << "\n";
    os << "angle = " << fmt(rep.extra_windings[k].angle) << "\n";
  }
  os << "[grid]\n";
  os << "n = " << grid.n() << "\n";
  return os.str();
}

}  // namespace ldg
