#include "ldg/tensor_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ldg/errors.hpp"

namespace ldg {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kSqrt3 = std::numbers::sqrt3;

// Director angle in the (e_rho, e_z) plane for the top formula eigenvalue.
// atan2 keeps this well conditioned when g -> -inf relative to u3.
double director_angle(double g, double u3) {
  if (u3 == 0.0) u3 = 0.0;  // fold -0 so the tie goes to +e_z
  return 0.5 * std::atan2(2.0 * u3, g);
}

}  // namespace

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::DegenerateDirector: return "DegenerateDirector";
    case ErrorCode::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorCode::ShapeError: return "ShapeError";
    case ErrorCode::NonFiniteField: return "NonFiniteField";
    case ErrorCode::AxisConstraintViolation: return "AxisConstraintViolation";
    case ErrorCode::NotSphereValued: return "NotSphereValued";
    case ErrorCode::UnsupportedCenter: return "UnsupportedCenter";
    case ErrorCode::NoDescent: return "NoDescent";
    case ErrorCode::DegenerateRing: return "DegenerateRing";
    case ErrorCode::CoreTooLarge: return "CoreTooLarge";
    case ErrorCode::CoreUnderResolved: return "CoreUnderResolved";
    case ErrorCode::ShootingBracketError: return "ShootingBracketError";
    case ErrorCode::OutOfTable: return "OutOfTable";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::FormatVersion: return "FormatVersion";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

double UVec::norm() const { return std::sqrt(norm2()); }

double compute_h_a(double a) { return (3.0 + std::sqrt(9.0 + 8.0 * a * a)) / (2.0 * kSqrt2 * a); }

double compute_d_a(double a) {
  const double t = 1.0 + 8.0 * a * a / 9.0;
  return 27.0 / (16.0 * a * a * a) * (1.0 + 4.0 * a * a / 3.0 + t * std::sqrt(t));
}

Params::Params(double a, double mu, Obstacle obstacle) : a_(a), mu_(mu), obstacle_(obstacle) {
  if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorCode::InvalidConfig, "a must be positive");
  if (!(mu > 0.0) || !std::isfinite(mu)) throw Error(ErrorCode::InvalidConfig, "mu must be positive");
  const double lv = obstacle.level;
  if (obstacle.family == Family::Plus) {
    if (!(lv > -1.0 && lv <= -0.5)) {
      std::ostringstream os;
      os << "plus family level b=" << lv << " outside (-1, -1/2]";
      throw Error(ErrorCode::InvalidConfig, os.str());
    }
  } else if (!(lv > 0.0 && lv < 1.0)) {
    std::ostringstream os;
    os << "minus family level c=" << lv << " outside (0, 1)";
    throw Error(ErrorCode::InvalidConfig, os.str());
  }
  h_a_ = compute_h_a(a);
  d_a_ = compute_d_a(a);
}

double radial_potential(double a, double h) {
  const double q = h * h - 1.0;
  return 2.0 * compute_d_a(a) - 2.0 * kSqrt2 * h * h * h + a * q * q;
}

Vec5 lift(const UVec& u, double theta) {
  return {u.u1 * std::cos(2.0 * theta), u.u1 * std::sin(2.0 * theta), u.u2, u.u3 * std::cos(theta),
          u.u3 * std::sin(theta)};
}

const std::array<Eigen::Matrix3d, 5>& basis_matrices() {
  static const std::array<Eigen::Matrix3d, 5> basis = [] {
    std::array<Eigen::Matrix3d, 5> b;
    for (auto& m : b) m.setZero();
    b[0](0, 2) = b[0](2, 0) = 1.0 / kSqrt2;
    b[1](0, 1) = b[1](1, 0) = 1.0 / kSqrt2;
    b[2](1, 2) = b[2](2, 1) = 1.0 / kSqrt2;
    const double s6 = std::sqrt(6.0);
    b[3].diagonal() << -1.0 / s6, -1.0 / s6, 2.0 / s6;
    b[4].diagonal() << 1.0 / kSqrt2, -1.0 / kSqrt2, 0.0;
    return b;
  }();
  return basis;
}

Eigen::Matrix3d assemble_q(const UVec& u, double theta, double a) {
  const auto& L = basis_matrices();
  Eigen::Matrix3d q = u.u1 * (std::cos(2.0 * theta) * L[4] + std::sin(2.0 * theta) * L[1]) + u.u2 * L[3] +
                      u.u3 * (std::cos(theta) * L[0] + std::sin(theta) * L[2]);
  return (a / kSqrt2) * q;
}

double s_invariant(const Vec5& w) {
  const auto [w1, w2, w3, w4, w5] = w;
  return -w3 * (w1 * w1 + w2 * w2) + kSqrt3 * w2 * w4 * w5 + 0.5 * w3 * (w4 * w4 + w5 * w5) + w3 * w3 * w3 / 3.0 +
         0.5 * kSqrt3 * w1 * (w4 * w4 - w5 * w5);
}

double p_invariant(const UVec& u) {
  const auto [u1, u2, u3] = u;
  return -u1 * u1 * u2 + 0.5 * kSqrt3 * u1 * u3 * u3 + u2 * u2 * u2 / 3.0 + 0.5 * u2 * u3 * u3;
}

UVec p_gradient(const UVec& u) {
  const auto [u1, u2, u3] = u;
  return {-2.0 * u1 * u2 + 0.5 * kSqrt3 * u3 * u3, -u1 * u1 + u2 * u2 + 0.5 * u3 * u3, kSqrt3 * u1 * u3 + u2 * u3};
}

const char* to_string(Phase phase) {
  switch (phase) {
    case Phase::Isotropic: return "isotropic";
    case Phase::PositiveUniaxial: return "positive_uniaxial";
    case Phase::NegativeUniaxial: return "negative_uniaxial";
    case Phase::Biaxial: return "biaxial";
  }
  return "unknown";
}

std::array<double, 3> formula_eigenvalues(const UVec& u) {
  const double s = u.u1 + u.u2 / kSqrt3;
  const double g = u.u1 - kSqrt3 * u.u2;
  const double root = std::hypot(g, 2.0 * u.u3);
  return {-0.5 * s, 0.25 * s - 0.25 * root, 0.25 * s + 0.25 * root};
}

double default_phase_tol(const UVec& u) { return 1e-6 * std::max(1.0, u.norm()); }

Phase classify(const std::array<double, 3>& sorted, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidConfig, "classification tolerance must be positive");
  const double mx = std::max({std::abs(sorted[0]), std::abs(sorted[1]), std::abs(sorted[2])});
  if (mx < tol) return Phase::Isotropic;
  const bool low_gap = sorted[1] - sorted[0] >= tol;
  const bool high_gap = sorted[2] - sorted[1] >= tol;
  if (low_gap && high_gap) return Phase::Biaxial;
  if (low_gap) return Phase::NegativeUniaxial;
  if (high_gap) return Phase::PositiveUniaxial;
  // Both gaps tiny but not isotropic cannot happen for trace-free triples;
  // fall back to the nearer uniaxial class.
  return sorted[1] - sorted[0] > sorted[2] - sorted[1] ? Phase::NegativeUniaxial : Phase::PositiveUniaxial;
}

EigenData eigenvalues(const UVec& u) { return eigenvalues(u, default_phase_tol(u)); }

EigenData eigenvalues(const UVec& u, double tol) {
  EigenData out;
  out.formula = formula_eigenvalues(u);
  out.sorted = out.formula;
  std::sort(out.sorted.begin(), out.sorted.end());
  out.phase = classify(out.sorted, tol);
  if (out.phase == Phase::PositiveUniaxial || out.phase == Phase::Biaxial) {
    if (out.formula[2] >= out.formula[0]) {
      const double chi = director_angle(u.u1 - kSqrt3 * u.u2, u.u3);
      out.director = Vec3{std::cos(chi), 0.0, std::sin(chi)};
    } else {
      out.director = Vec3{0.0, 1.0, 0.0};
    }
  }
  return out;
}

Vec3 director(const UVec& u) {
  const double g = u.u1 - kSqrt3 * u.u2;
  if (g == 0.0 && u.u3 == 0.0) throw Error(ErrorCode::DegenerateDirector, "lambda_2 = lambda_3");
  const double chi = director_angle(g, u.u3);
  return {std::cos(chi), 0.0, std::sin(chi)};
}

Vec5 lambda_tangent(bool plus, double phi, double theta) {
  return lift(UVec{0.0, (plus ? 1.0 : -1.0) * std::cos(phi), std::sin(phi)}, theta);
}

Vec3 kappa_tangent(bool plus, double phi) {
  if (plus) {
    if (phi == 0.0) return {0.0, 0.0, 1.0};
    const double chi = 0.5 * std::atan2(2.0 * std::sin(phi), -kSqrt3 * std::cos(phi));
    return {std::cos(chi), 0.0, std::sin(chi)};
  }
  if (phi == std::numbers::pi) return {0.0, 0.0, -1.0};
  const double chi = -0.5 * std::atan2(2.0 * std::sin(phi), kSqrt3 * std::cos(phi));
  return {std::cos(chi), 0.0, std::sin(chi)};
}

std::vector<double> tangent_map_eval(TangentKind kind, double phi, double theta) {
  if (!(phi >= 0.0 && phi <= std::numbers::pi)) throw Error(ErrorCode::OutOfDomain, "polar angle outside [0, pi]");
  switch (kind) {
    case TangentKind::LambdaPlus:
    case TangentKind::LambdaMinus: {
      const Vec5 v = lambda_tangent(kind == TangentKind::LambdaPlus, phi, theta);
      return {v.begin(), v.end()};
    }
    case TangentKind::KappaPlus:
    case TangentKind::KappaMinus: {
      const Vec3 v = kappa_tangent(kind == TangentKind::KappaPlus, phi);
      return {v.begin(), v.end()};
    }
  }
  return {};
}

UVec boundary_value(double phi, const Params& params) {
  const double s = std::sin(phi), c = std::cos(phi);
  const double h = params.h_a();
  return {h * 0.5 * kSqrt3 * s * s, h * 1.5 * (c * c - 1.0 / 3.0), h * kSqrt3 * s * c};
}

}  // namespace ldg
