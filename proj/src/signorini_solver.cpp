#include "ldg/signorini_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ldg/errors.hpp"
#include "ldg/field_io.hpp"

namespace ldg {

namespace {

double obstacle_bound(const Params& p) { return p.obstacle_value(); }

bool violates(double u2, const Params& p) {
  return p.obstacle().family == Family::Plus ? u2 < obstacle_bound(p) : u2 > obstacle_bound(p);
}

// Euclidean projection of one node onto {|u| <= H} (and the half space on T).
void project_node(UVec& u, int i, int j, const Params& p, bool obstacle) {
  if (i == 0) u.u1 = u.u3 = 0.0;
  if (j == 0) u.u3 = 0.0;
  const double H = p.h_a();
  if (j == 0 && obstacle && violates(u.u2, p)) {
    // nearest point of {|u| <= H} n {obstacle}: the ball projection if it is
    // feasible, otherwise the disk cut out of the obstacle plane
    const double nrm = u.norm();
    if (nrm > H && !violates(H / nrm * u.u2, p)) {
      u = (H / nrm) * u;
      return;
    }
    const double b = obstacle_bound(p);
    u.u2 = b;
    const double r = std::hypot(u.u1, u.u3), R = std::sqrt(std::max(0.0, H * H - b * b));
    if (r > R) {
      u.u1 *= R / r;
      u.u3 *= R / r;
    }
    return;
  }
  // slack keeps the map idempotent: a rescaled vector may land an ulp above H
  const double nrm = u.norm();
  if (nrm > H * (1.0 + 1e-14)) u = (H / nrm) * u;
}

void project_free_nodes(OrderField& field, const Grid& grid, const Params& params, bool obstacle) {
  for (int j = 0; j <= grid.n(); ++j)
    for (int i = 0; i <= grid.row_end(j); ++i) {
      if (grid.is_arc(i, j)) continue;
      project_node(field.at(i, j), i, j, params, obstacle);
    }
}

// Penalty contribution on T: sum_i 4 pi A_i B_eps(t_i), t_i = +-(u2 - level H).
double penalty_term(const OrderField& f, const Grid& g, const Params& p, double eps, std::vector<UVec>* deriv) {
  const double sign = p.obstacle().family == Family::Plus ? 1.0 : -1.0;
  const double b = obstacle_bound(p);
  double total = 0.0;
  for (int i = 0; i <= g.row_end(0); ++i) {
    if (g.is_arc(i, 0)) continue;
    const double w = 4.0 * std::numbers::pi * g.cell_rho_moment(i);
    const double t = sign * (f.at(i, 0).u2 - b);
    total += w * penalty_b(t, eps);
    if (deriv) (*deriv)[g.index(i, 0)].u2 += w * 2.0 * penalty_beta(t, eps) * sign;
  }
  return total;
}

struct Evaluation {
  EnergyBreakdown e;
  double penalty = 0.0;
  double objective = 0.0;       // energy plus penalty
  std::vector<double> node_e;   // per-node energy shares
  std::vector<UVec> deriv;      // masked dE/du
  std::vector<UVec> grad;       // masked dE/du / W
};

// Objective change between two evaluations, summed node by node. Near a
// minimizer the change is far below one ulp of the total, so subtracting
// totals would only see rounding noise.
double objective_change(const Evaluation& from, const Evaluation& to) {
  long double d = 0.0;
  for (std::size_t k = 0; k < from.node_e.size(); ++k) d += to.node_e[k] - from.node_e[k];
  return static_cast<double>(d + (to.penalty - from.penalty));
}

void evaluate(const OrderField& f, const Grid& g, const Params& p, const SolverConfig& cfg,
              const std::vector<unsigned char>& mask, Evaluation& out) {
  out.e = energy_and_derivative(f, g, p, out.deriv, &out.node_e);
  out.penalty = cfg.mode == ConstraintMode::Penalty ? penalty_term(f, g, p, cfg.epsilon, &out.deriv) : 0.0;
  out.objective = out.e.total + out.penalty;
  if (!std::isfinite(out.objective)) throw Error(ErrorCode::NonFiniteField, "energy became non-finite");
  out.grad.resize(g.size());
  for (int j = 0; j <= g.n(); ++j)
    for (int i = 0; i <= g.n(); ++i) {
      const std::size_t k = g.index(i, j);
      UVec& d = out.deriv[k];
      if (!g.in_domain(i, j)) d = {};
      if (mask[k] & 1) d.u1 = 0.0;
      if (mask[k] & 2) d.u2 = 0.0;
      if (mask[k] & 4) d.u3 = 0.0;
      out.grad[k] = g.in_domain(i, j) ? (1.0 / g.weight(i, j)) * d : UVec{};
    }
}

double weighted_dot(const std::vector<UVec>& x, const std::vector<UVec>& y, const Grid& g) {
  double s = 0.0;
  const auto& w = g.weights();
  for (std::size_t k = 0; k < x.size(); ++k)
    if (w[k] != 0.0) s += w[k] * dot(x[k], y[k]);
  return s;
}

}  // namespace

Seed Seed::parse(const std::string& text) {
  Seed s;
  if (text == "hedgehog") s.kind = SeedKind::Hedgehog;
  else if (text == "ring") s.kind = SeedKind::RingSeed;
  else if (text == "split") s.kind = SeedKind::SplitSeed;
  else if (text.rfind("file:", 0) == 0 && text.size() > 5) {
    s.kind = SeedKind::FromFile;
    s.path = text.substr(5);
  } else {
    throw Error(ErrorCode::InvalidConfig, "unknown seed '" + text + "' (hedgehog|ring|split|file:<path>)");
  }
  return s;
}

std::string Seed::str() const {
  switch (kind) {
    case SeedKind::Hedgehog: return "hedgehog";
    case SeedKind::RingSeed: return "ring";
    case SeedKind::SplitSeed: return "split";
    case SeedKind::FromFile: return "file:" + path;
  }
  return "?";
}

void SolverConfig::validate() const {
  if (max_iters < 0) throw Error(ErrorCode::InvalidConfig, "max_iters must be nonnegative");
  if (!(grad_tol > 0.0)) throw Error(ErrorCode::InvalidConfig, "grad_tol must be positive");
  if (!(initial_step > 0.0) || !(min_step > 0.0) || !(max_step >= initial_step))
    throw Error(ErrorCode::InvalidConfig, "step bounds must satisfy 0 < min_step, 0 < initial_step <= max_step");
  if (!(shrink > 0.0 && shrink < 1.0)) throw Error(ErrorCode::InvalidConfig, "shrink must lie in (0, 1)");
  if (!(armijo > 0.0 && armijo < 1.0)) throw Error(ErrorCode::InvalidConfig, "armijo constant must lie in (0, 1)");
  if (mode == ConstraintMode::Penalty && !(epsilon > 0.0))
    throw Error(ErrorCode::InvalidConfig, "penalty epsilon must be positive");
  if (!(seed.core_radius > 0.0 && seed.core_radius < 1.0))
    throw Error(ErrorCode::InvalidConfig, "seed core radius must lie in (0, 1)");
  if (coarse_levels < 0) throw Error(ErrorCode::InvalidConfig, "coarse_levels must be nonnegative");
}

double penalty_beta(double s, double eps) {
  if (s >= 0.0) return 0.0;
  const double e2 = 2.0 * eps * eps;
  if (s <= -e2) return eps + s / eps;
  return -s * s / (4.0 * eps * eps * eps);
}

double penalty_b(double t, double eps) {
  if (t >= 0.0) return 0.0;
  const double e3 = eps * eps * eps;
  const double e2 = 2.0 * eps * eps;
  if (t >= -e2) return -t * t * t / (6.0 * e3);
  return 4.0 * e3 / 3.0 + 2.0 * (eps * (t + e2) + (t * t - e2 * e2) / (2.0 * eps));
}

OrderField initialize(const Seed& seed, const Grid& grid, const Params& params) {
  OrderField f(grid);
  if (seed.kind == SeedKind::FromFile) {
    FieldFile ff = read_field_file(seed.path);
    if (ff.n != grid.n())
      throw Error(ErrorCode::ShapeError, "seed file grid n=" + std::to_string(ff.n) + " does not match n=" +
                                             std::to_string(grid.n()));
    f = std::move(ff.field);
  } else {
    const double H = params.h_a();
    const double k = std::sqrt(params.a() * params.mu());
    const double rs = seed.core_radius;
    for (int j = 0; j <= grid.n(); ++j)
      for (int i = 0; i <= grid.n(); ++i) {
        const double rho = grid.rho(i), z = grid.z(j);
        const double r = std::hypot(rho, z);
        const double phi = std::atan2(rho, z);
        const UVec us = (1.0 / H) * boundary_value(phi, params);
        UVec v = (H * std::tanh(k * r)) * us;
        if (seed.kind != SeedKind::Hedgehog && r < rs) {
          // Interpolate from a uniaxial core state (0, +-1, 0) at the origin
          // to the hedgehog direction with u2 forced to the core sign.
          const double sg = seed.kind == SeedKind::RingSeed ? 1.0 : -1.0;
          const double s = r / rs;
          const UVec outer{us.u1, sg * std::abs(us.u2), us.u3};
          v = H * ((1.0 - s) * UVec{0.0, sg, 0.0} + s * outer);
        }
        f.at(i, j) = v;
      }
  }
  apply_boundary(f, grid, params);
  project_in_place(f, grid, params, ConstraintMode::Projection);
  return f;
}

void project_in_place(OrderField& field, const Grid& grid, const Params& params, ConstraintMode mode) {
  check_shape(field, grid);
  apply_boundary(field, grid, params);
  project_free_nodes(field, grid, params, mode == ConstraintMode::Projection);
}

OrderField project_constraints(const OrderField& field, const Grid& grid, const Params& params, ConstraintMode mode) {
  OrderField out = field;
  project_in_place(out, grid, params, mode);
  return out;
}

double projected_gradient_norm(const OrderField& field, const std::vector<UVec>& l2_grad, const Grid& grid,
                               const Params& params, ConstraintMode mode) {
  const double H = params.h_a();
  const double b = obstacle_bound(params);
  const bool plus = params.obstacle().family == Family::Plus;
  double mx = 0.0;
  for (int j = 0; j <= grid.n(); ++j)
    for (int i = 0; i <= grid.row_end(j); ++i) {
      if (grid.is_arc(i, j)) continue;
      const UVec& u = field.at(i, j);
      UVec gr = l2_grad[grid.index(i, j)];
      if (j == 0 && mode == ConstraintMode::Projection) {
        // Descent moves along -g; drop the component that would leave the half space.
        const bool at_bound = std::abs(u.u2 - b) <= 1e-12 * H;
        if (at_bound && ((plus && gr.u2 > 0.0) || (!plus && gr.u2 < 0.0))) gr.u2 = 0.0;
      }
      const double nrm = u.norm();
      if (nrm >= H * (1.0 - 1e-12)) {
        const double radial = dot(gr, u) / nrm;
        if (radial < 0.0) gr = gr - (radial / nrm) * u;
      }
      mx = std::max({mx, std::abs(gr.u1), std::abs(gr.u2), std::abs(gr.u3)});
    }
  return mx;
}

double obstacle_violation(const OrderField& field, const Grid& grid, const Params& params) {
  const double b = obstacle_bound(params);
  const bool plus = params.obstacle().family == Family::Plus;
  double mx = 0.0;
  for (int i = 0; i <= grid.row_end(0); ++i) {
    const double u2 = field.at(i, 0).u2;
    mx = std::max(mx, plus ? b - u2 : u2 - b);
  }
  return mx;
}

SolveResult solve(const SolverConfig& config, const Grid& grid, const Params& params) {
  config.validate();
  if (config.coarse_levels > 0 && config.seed.kind != SeedKind::FromFile && grid.n() / 2 >= 32) {
    SolverConfig coarse_cfg = config;
    coarse_cfg.coarse_levels = config.coarse_levels - 1;
    coarse_cfg.on_iter = nullptr;
    const Grid coarse(grid.n() / 2);
    const SolveResult cr = solve(coarse_cfg, coarse, params);
    OrderField start = prolong(cr.field, coarse, grid);
    apply_boundary(start, grid, params);
    return solve_from(start, config, grid, params);
  }
  return solve_from(initialize(config.seed, grid, params), config, grid, params);
}

SolveResult solve_from(const OrderField& start, const SolverConfig& config, const Grid& grid, const Params& params) {
  config.validate();
  check_finite(start, grid);
  const auto mask = fixed_mask(grid);
  SolveResult res;
  OrderField x = start;
  apply_boundary(x, grid, params);
  project_in_place(x, grid, params, config.mode);

  Evaluation cur, trial;
  evaluate(x, grid, params, config, mask, cur);
  double pg = projected_gradient_norm(x, cur.grad, grid, params, config.mode);
  res.log.push_back({0, cur.e, pg});
  if (config.on_iter) config.on_iter(0, cur.e, pg);

  double step = config.initial_step;
  OrderField xn = x;
  std::vector<UVec> s(grid.size()), y(grid.size());
  int it = 0;
  for (; it < config.max_iters; ++it) {
    if (pg < config.grad_tol) {
      res.converged = true;
      break;
    }
    double t = step;
    while (true) {
      for (int j = 0; j <= grid.n(); ++j)
        for (int i = 0; i <= grid.row_end(j); ++i) {
          const std::size_t k = grid.index(i, j);
          xn.values[k] = x.values[k] - t * cur.grad[k];
        }
      // arc values are pinned by the mask, only the free nodes need projecting
      project_free_nodes(xn, grid, params, config.mode == ConstraintMode::Projection);
      evaluate(xn, grid, params, config, mask, trial);
      double dec = 0.0;
      for (std::size_t k = 0; k < x.values.size(); ++k) dec += dot(cur.deriv[k], xn.values[k] - x.values[k]);
      if (objective_change(cur, trial) <= config.armijo * dec && trial.objective <= cur.objective) break;
      t *= config.shrink;
      if (t < config.min_step) {
        std::ostringstream os;
        os << "backtracking underflow at iteration " << it + 1 << " (step " << t << ")";
        throw Error(ErrorCode::NoDescent, os.str());
      }
    }
    for (std::size_t k = 0; k < s.size(); ++k) {
      s[k] = xn.values[k] - x.values[k];
      y[k] = trial.grad[k] - cur.grad[k];
    }
    const double sy = weighted_dot(s, y, grid), ss = weighted_dot(s, s, grid);
    step = sy > 0.0 ? std::clamp(ss / sy, config.min_step * 16, config.max_step) : std::min(2.0 * t, config.max_step);
    std::swap(x, xn);
    std::swap(cur, trial);
    pg = projected_gradient_norm(x, cur.grad, grid, params, config.mode);
    res.log.push_back({it + 1, cur.e, pg});
    if (config.on_iter) config.on_iter(it + 1, cur.e, pg);
  }
  if (!res.converged && pg < config.grad_tol) res.converged = true;
  res.iterations = it;
  res.obstacle_violation = obstacle_violation(x, grid, params);
  res.field = std::move(x);
  return res;
}

std::vector<ContinuationStage> continuation(const std::vector<double>& a_schedule, const SolverConfig& config,
                                            const Grid& grid, const Params& base,
                                            const std::function<void(const ContinuationStage&, int)>& on_stage) {
  if (a_schedule.size() < 2) throw Error(ErrorCode::InvalidConfig, "continuation needs at least two values of a");
  for (std::size_t k = 1; k < a_schedule.size(); ++k)
    if (!(a_schedule[k] > a_schedule[k - 1])) throw Error(ErrorCode::InvalidConfig, "a schedule must be increasing");
  std::vector<ContinuationStage> out;
  for (std::size_t k = 0; k < a_schedule.size(); ++k) {
    try {
      const Params p = base.with_a(a_schedule[k]);
      ContinuationStage st;
      st.a = a_schedule[k];
      if (k == 0) {
        st.result = solve(config, grid, p);
      } else {
        SolverConfig warm = config;
        warm.coarse_levels = 0;
        st.result = solve_from(out.back().result.field, warm, grid, p);
      }
      st.energy = energy(st.result.field, grid, p);
      st.potential_integral = potential_integral(st.result.field, grid, p.a());
      if (on_stage) on_stage(st, static_cast<int>(k));
      out.push_back(std::move(st));
    } catch (const Error& e) {
      throw Error(e.code(), "continuation stage " + std::to_string(k) + " (a=" + std::to_string(a_schedule[k]) +
                                "): " + e.what());
    }
  }
  return out;
}

}  // namespace ldg
