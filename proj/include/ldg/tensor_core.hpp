#pragma once

// Pointwise Q-tensor algebra for the axially symmetric ansatz.
//
// A reduced order parameter u = (u1, u2, u3) on the (rho, z) half plane is
// lifted to the 5-vector w = L[u](theta) and to the traceless tensor
//   Q = (a / sqrt 2) { u1 (cos2t L5 + sin2t L2) + u2 L4 + u3 (cos t L1 + sin t L3) }.
// Directors are reported in the orthonormal frame (e_rho, e_theta, e_z).

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Core>

namespace ldg {

using Vec3 = std::array<double, 3>;
using Vec5 = std::array<double, 5>;

struct UVec {
  double u1 = 0.0;
  double u2 = 0.0;
  double u3 = 0.0;

  double norm2() const { return u1 * u1 + u2 * u2 + u3 * u3; }
  double norm() const;

  friend UVec operator+(UVec a, const UVec& b) { return {a.u1 + b.u1, a.u2 + b.u2, a.u3 + b.u3}; }
  friend UVec operator-(UVec a, const UVec& b) { return {a.u1 - b.u1, a.u2 - b.u2, a.u3 - b.u3}; }
  friend UVec operator*(double s, const UVec& a) { return {s * a.u1, s * a.u2, s * a.u3}; }
  friend double dot(const UVec& a, const UVec& b) { return a.u1 * b.u1 + a.u2 * b.u2 + a.u3 * b.u3; }
  friend bool operator==(const UVec&, const UVec&) = default;
};

enum class Family { Plus, Minus };

/// Signorini obstacle on the equatorial disk: u2 >= b H_a (Plus) or u2 <= c H_a (Minus).
struct Obstacle {
  Family family = Family::Plus;
  double level = -0.95;

  static Obstacle plus(double b) { return {Family::Plus, b}; }
  static Obstacle minus(double c) { return {Family::Minus, c}; }
};

/// H_a = (3 + sqrt(9 + 8 a^2)) / (2 sqrt2 a).
double compute_h_a(double a);
/// D_a = 27 / (16 a^3) [1 + 4 a^2 / 3 + (1 + 8 a^2 / 9)^{3/2}].
double compute_d_a(double a);

/// Physical parameters. Construction validates ranges and caches H_a, D_a.
class Params {
 public:
  Params(double a, double mu, Obstacle obstacle = Obstacle::plus(-0.95));

  double a() const { return a_; }
  double mu() const { return mu_; }
  const Obstacle& obstacle() const { return obstacle_; }
  double h_a() const { return h_a_; }
  double d_a() const { return d_a_; }
  /// The obstacle value on T in u2 units (level * H_a).
  double obstacle_value() const { return obstacle_.level * h_a_; }

  Params with_a(double a) const { return Params(a, mu_, obstacle_); }

 private:
  double a_;
  double mu_;
  Obstacle obstacle_;
  double h_a_;
  double d_a_;
};

/// 2 D_a - 2 sqrt2 h^3 + a (h^2 - 1)^2; vanishes with zero slope at h = H_a.
double radial_potential(double a, double h);

Vec5 lift(const UVec& u, double theta);

/// Q(u, theta) for reduced temperature a.
Eigen::Matrix3d assemble_q(const UVec& u, double theta, double a);

/// Basis matrices L1..L5 (index 0..4).
const std::array<Eigen::Matrix3d, 5>& basis_matrices();

double s_invariant(const Vec5& w);
double p_invariant(const UVec& u);
/// Gradient of P with respect to u.
UVec p_gradient(const UVec& u);

enum class Phase { Isotropic, PositiveUniaxial, NegativeUniaxial, Biaxial };

const char* to_string(Phase phase);

struct EigenData {
  /// Eigenvalues of a^{-1} Q in closed-form labelling (lambda_2 <= lambda_3 always,
  /// lambda_1 may sit anywhere).
  std::array<double, 3> formula{};
  /// Same values in ascending order.
  std::array<double, 3> sorted{};
  Phase phase = Phase::Isotropic;
  /// Eigenvector of the largest eigenvalue, (e_rho, e_theta, e_z) frame.
  /// Present only for positive uniaxial or biaxial points.
  std::optional<Vec3> director;
};

std::array<double, 3> formula_eigenvalues(const UVec& u);

/// Default classification tolerance 1e-6 max(1, |u|).
double default_phase_tol(const UVec& u);

EigenData eigenvalues(const UVec& u);
EigenData eigenvalues(const UVec& u, double tol);

/// Phase from ascending eigenvalues; throws InvalidConfig for tol <= 0.
Phase classify(const std::array<double, 3>& sorted, double tol);

/// Unit eigenvector of the formula-labelled lambda_3 with nonnegative e_rho
/// component (e_rho = 0 ties resolved towards +e_z). Throws DegenerateDirector
/// when lambda_2 = lambda_3.
Vec3 director(const UVec& u);

enum class TangentKind { LambdaPlus, LambdaMinus, KappaPlus, KappaMinus };

/// Lambda_{+/-}(phi, theta) as a unit 5-vector.
Vec5 lambda_tangent(bool plus, double phi, double theta);
/// kappa^{+/-}(phi) in the (e_rho, e_theta, e_z) frame.
Vec3 kappa_tangent(bool plus, double phi);
/// Uniform entry point: 5 entries for Lambda kinds, 3 for kappa kinds.
std::vector<double> tangent_map_eval(TangentKind kind, double phi, double theta);

/// Strong-anchoring value H_a U*(phi) at polar angle phi.
UVec boundary_value(double phi, const Params& params);

}  // namespace ldg
