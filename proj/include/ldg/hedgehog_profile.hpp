#pragma once

// Radial hedgehog profile: f'' + (2/r) f' - (2/r^2) f + f (1 - f^2) = 0,
// f(0) = 0, f(inf) = 1, found by overshoot / collapse bisection.

#include <vector>

namespace ldg {

struct ProfileSample {
  double r;
  double f;
  double df;
};

struct RadialProfile {
  double r_max = 0.0;
  double dr = 0.0;
  double alpha = 0.0;  // f'(0)
  std::vector<ProfileSample> samples;  // uniform in r, samples[0].r == 0

  /// Linear interpolation of f; OutOfTable beyond r_max.
  double f_at(double r) const;
};

/// Far-field expansion 1 - r^-2 - 3/2 r^-4 - 23/2 r^-6 - 1573/8 r^-8.
double profile_far_field(double r);

/// r_max >= 20. The returned profile matches the far-field expansion at r_max
/// within rtol; ShootingBracketError if the bisection cannot bracket or match.
RadialProfile shoot_profile(double r_max = 30.0, double rtol = 1e-8, double dr = 0.005);

/// sqrt(mu) * min_{r <= R sqrt(mu)} f(r) / r, with f(r)/r -> alpha at r = 0.
double c_mu(double R, double mu, const RadialProfile& profile);

/// Max |f'' + 2 f'/r - 2 f/r^2 + f (1 - f^2)| over table points with r in [r_lo, r_max),
/// f'' from second differences of the table.
double profile_residual(const RadialProfile& profile, double r_lo = 0.5);

}  // namespace ldg
