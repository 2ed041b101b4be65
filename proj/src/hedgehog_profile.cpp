#include "ldg/hedgehog_profile.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "ldg/errors.hpp"

namespace ldg {

double profile_far_field(double r);

namespace {

using State = std::array<double, 2>;
namespace odeint = boost::numeric::odeint;

void rhs(const State& x, State& dx, double r) {
  dx[0] = x[1];
  dx[1] = -2.0 * x[1] / r + 2.0 * x[0] / (r * r) - x[0] * (1.0 - x[0] * x[0]);
}

enum class Outcome { Overshoot, Collapse };

struct Trajectory {
  Outcome outcome = Outcome::Collapse;
  std::vector<State> states;  // at r = (first + k) * dr, k = 0, 1, ...
};

// Integrate from (r0, x0) and record the state at table points first*dr,
// (first+1)*dr, ... until an event or the last table point.
Trajectory integrate(double r0, const State& x0, std::size_t first, std::size_t last, double dr, double tol) {
  Trajectory tr;
  auto stepper = odeint::make_dense_output(tol, tol, odeint::runge_kutta_dopri5<State>());
  stepper.initialize(x0, r0, std::min(1e-3, dr));
  std::size_t next = first;
  const double r_end = last * dr;
  State x;
  while (next <= last) {
    const auto [t0, t1] = stepper.do_step(rhs);
    (void)t0;
    while (next <= last && next * dr <= t1) {
      stepper.calc_state(next * dr, x);
      tr.states.push_back(x);
      ++next;
    }
    const State& cur = stepper.current_state();
    if (cur[0] > 1.0) {
      tr.outcome = Outcome::Overshoot;
      return tr;
    }
    if (cur[1] < 0.0) {
      tr.outcome = Outcome::Collapse;
      return tr;
    }
    if (t1 >= r_end) break;
  }
  // No event before the table end: side of the far-field value decides.
  tr.outcome = tr.states.back()[0] > profile_far_field(r_end) ? Outcome::Overshoot : Outcome::Collapse;
  return tr;
}

struct Bisection {
  Trajectory lo, hi;  // collapse side, overshoot side
  double p_lo, p_hi;
};

// Bisect a scalar launch parameter p between collapse (small p) and overshoot (large p).
template <class Launch>
Bisection bisect(Launch launch, double lo, double hi) {
  Bisection b{launch(lo), launch(hi), lo, hi};
  if (b.lo.outcome != Outcome::Collapse || b.hi.outcome != Outcome::Overshoot) {
    std::ostringstream os;
    os << "launch parameters [" << lo << ", " << hi << "] do not bracket the profile";
    throw Error(ErrorCode::ShootingBracketError, os.str());
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (b.p_lo + b.p_hi);
    if (mid <= b.p_lo || mid >= b.p_hi) break;
    Trajectory t = launch(mid);
    if (t.outcome == Outcome::Overshoot) {
      b.hi = std::move(t);
      b.p_hi = mid;
    } else {
      b.lo = std::move(t);
      b.p_lo = mid;
    }
  }
  return b;
}

// Number of leading samples on which the bracketing trajectories agree.
std::size_t agreement(const Bisection& b, double tol) {
  const std::size_t m = std::min(b.lo.states.size(), b.hi.states.size());
  std::size_t k = 0;
  while (k < m && std::abs(b.lo.states[k][0] - b.hi.states[k][0]) < tol) ++k;
  return k;
}

}  // namespace

double profile_far_field(double r) {
  const double q = 1.0 / (r * r);
  return 1.0 - q - 1.5 * q * q - 11.5 * q * q * q - 196.625 * q * q * q * q;
}

double RadialProfile::f_at(double r) const {
  if (r < 0.0 || r > r_max + 1e-12) throw Error(ErrorCode::OutOfTable, "radius outside the profile table");
  const double x = r / dr;
  const std::size_t k = std::min(static_cast<std::size_t>(x), samples.size() - 2);
  const double t = x - k;
  return (1.0 - t) * samples[k].f + t * samples[k + 1].f;
}

RadialProfile shoot_profile(double r_max, double rtol, double dr) {
  if (!(r_max >= 20.0)) throw Error(ErrorCode::InvalidConfig, "r_max must be at least 20");
  if (!(rtol > 0.0)) throw Error(ErrorCode::InvalidConfig, "rtol must be positive");
  if (!(dr > 0.0 && dr <= 0.05)) throw Error(ErrorCode::InvalidConfig, "table spacing must lie in (0, 0.05]");
  const std::size_t last = static_cast<std::size_t>(std::llround(r_max / dr));
  const double tol = std::clamp(rtol * 1e-3, 1e-13, 1e-9);
  const double agree_tol = 1e-9;

  RadialProfile prof;
  prof.dr = dr;
  prof.r_max = last * dr;
  prof.samples.reserve(last + 1);

  // Stage 1: series launch f = a r - (a/10) r^3 at r0, bisection on a = f'(0).
  const double r0 = 1e-3;
  auto launch0 = [&](double alpha) {
    const State x0{alpha * r0 - alpha * r0 * r0 * r0 / 10.0, alpha - 0.3 * alpha * r0 * r0};
    return integrate(r0, x0, 1, last, dr, tol);
  };
  Bisection b = bisect(launch0, 1e-3, 10.0);
  prof.alpha = 0.5 * (b.p_lo + b.p_hi);
  prof.samples.push_back({0.0, 0.0, prof.alpha});

  // Later stages restart from an accepted state and re-bisect on f' there,
  // since the unstable mode exp(sqrt2 r) eats the precision of a single shot.
  std::size_t first = 1;
  while (true) {
    const std::size_t k = agreement(b, agree_tol);
    const bool done = first + k > last;
    // Keep a margin before the divergence point unless the end is reached.
    const std::size_t keep = done ? k : (k > 400 ? k - 200 : k / 2);
    if (keep == 0) throw Error(ErrorCode::ShootingBracketError, "profile bisection stalled");
    for (std::size_t m = 0; m < keep; ++m) {
      const State& s = b.lo.states[m];
      prof.samples.push_back({(first + m) * dr, s[0], s[1]});
    }
    if (done) break;
    first += keep;
    const double r_start = (first - 1) * dr;
    const State base = b.lo.states[keep - 1];
    auto launch = [&](double slope) { return integrate(r_start, State{base[0], slope}, first, last, dr, tol); };
    double width = 1e-8 * std::max(std::abs(base[1]), 1e-6);
    for (int tries = 0;; ++tries) {
      try {
        b = bisect(launch, base[1] - width, base[1] + width);
        break;
      } catch (const Error&) {
        if (tries > 12) throw;
        width *= 10.0;
      }
    }
  }

  const double end_f = prof.samples.back().f;
  const double target = profile_far_field(prof.r_max);
  if (std::abs(end_f - target) >= rtol) {
    std::ostringstream os;
    os << "profile misses the far field at r_max: f=" << end_f << " expected " << target;
    throw Error(ErrorCode::ShootingBracketError, os.str());
  }
  return prof;
}

double c_mu(double R, double mu, const RadialProfile& profile) {
  if (!(R > 0.0) || !(mu > 0.0)) throw Error(ErrorCode::InvalidConfig, "R and mu must be positive");
  const double sm = std::sqrt(mu);
  const double limit = R * sm;
  if (limit > profile.r_max + 1e-12) throw Error(ErrorCode::OutOfTable, "R sqrt(mu) exceeds the profile table");
  double mn = profile.alpha;
  for (const auto& s : profile.samples) {
    if (s.r > limit) break;
    if (s.r > 0.0) mn = std::min(mn, s.f / s.r);
  }
  // include the interpolated end point
  if (limit > 0.0) mn = std::min(mn, profile.f_at(limit) / limit);
  return sm * mn;
}

double profile_residual(const RadialProfile& p, double r_lo) {
  double mx = 0.0;
  const double dr = p.dr;
  for (std::size_t k = 1; k + 1 < p.samples.size(); ++k) {
    const double r = p.samples[k].r;
    if (r < r_lo) continue;
    const double f = p.samples[k].f, df = p.samples[k].df;
    const double d2 = (p.samples[k + 1].f - 2.0 * f + p.samples[k - 1].f) / (dr * dr);
    mx = std::max(mx, std::abs(d2 + 2.0 * df / r - 2.0 * f / (r * r) + f * (1.0 - f * f)));
  }
  return mx;
}

}  // namespace ldg
