#pragma once

// Constrained minimization of the discrete energy over the Signorini classes
//   F+ : u2 >= b H_a on T      F- : u2 <= c H_a on T
// by projected gradient descent (Barzilai-Borwein trial step, Armijo
// backtracking) in the weighted L2 metric of the grid quadrature.

#include <functional>
#include <string>
#include <vector>

#include "ldg/energy.hpp"
#include "ldg/grid.hpp"

namespace ldg {

enum class SeedKind { Hedgehog, RingSeed, SplitSeed, FromFile };

struct Seed {
  SeedKind kind = SeedKind::Hedgehog;
  std::string path;       // FromFile
  double core_radius = 0.4;  // radius of the modified region for RingSeed / SplitSeed

  static Seed parse(const std::string& text);
  std::string str() const;
};

enum class ConstraintMode { Projection, Penalty };

struct SolverConfig {
  int max_iters = 20000;
  /// Stop when the max-norm of the projected L2 gradient drops below this.
  double grad_tol = 1e-3;
  double initial_step = 1e-5;
  double min_step = 1e-14;
  double max_step = 1.0;
  double shrink = 0.5;
  double armijo = 1e-4;
  ConstraintMode mode = ConstraintMode::Projection;
  double epsilon = 0.05;  // Penalty mode only
  Seed seed;
  /// Warm-start through coarser grids (n/2, n/4, ... >= 32) when > 0.
  int coarse_levels = 0;
  /// Optional per-iteration hook.
  std::function<void(int iter, const EnergyBreakdown&, double grad_norm)> on_iter;

  void validate() const;
};

/// Smooth penalty beta_eps: 0 for s >= 0, eps + s/eps for s <= -2 eps^2,
/// -s^2 / (4 eps^3) in between (C^1 junctions at both ends).
double penalty_beta(double s, double eps);
/// B_eps(t) = 2 int_0^t beta_eps(s) ds, closed form.
double penalty_b(double t, double eps);

struct LogRow {
  int iter = 0;
  EnergyBreakdown energy;
  double grad_norm = 0.0;
};

struct SolveResult {
  OrderField field;
  std::vector<LogRow> log;
  bool converged = false;
  int iterations = 0;
  /// Max over T of the obstacle violation (0 in Projection mode).
  double obstacle_violation = 0.0;
};

OrderField initialize(const Seed& seed, const Grid& grid, const Params& params);

/// Radial truncation to H_a, obstacle on T, then axis / T / arc clamps.
/// In Penalty mode the obstacle step is skipped.
OrderField project_constraints(const OrderField& field, const Grid& grid, const Params& params,
                               ConstraintMode mode = ConstraintMode::Projection);
void project_in_place(OrderField& field, const Grid& grid, const Params& params,
                      ConstraintMode mode = ConstraintMode::Projection);

/// Max-norm of the gradient restricted to free directions (active obstacle
/// and truncation directions removed).
double projected_gradient_norm(const OrderField& field, const std::vector<UVec>& l2_grad, const Grid& grid,
                               const Params& params, ConstraintMode mode);

/// Signed obstacle violation on T: max over T of (b H - u2)_+ (Plus) or (u2 - c H)_+ (Minus).
double obstacle_violation(const OrderField& field, const Grid& grid, const Params& params);

SolveResult solve(const SolverConfig& config, const Grid& grid, const Params& params);
/// Same, starting from a given field (projected first).
SolveResult solve_from(const OrderField& start, const SolverConfig& config, const Grid& grid, const Params& params);

struct ContinuationStage {
  double a = 0.0;
  SolveResult result;
  EnergyBreakdown energy;
  double potential_integral = 0.0;
};

/// Solve at schedule[0] from the configured seed, then warm-start each next a.
/// Params supplies mu and the obstacle. Schedule must be increasing with >= 2
/// entries. Errors from stage k are rethrown with the stage index.
std::vector<ContinuationStage> continuation(const std::vector<double>& a_schedule, const SolverConfig& config,
                                            const Grid& grid, const Params& base,
                                            const std::function<void(const ContinuationStage&, int)>& on_stage = {});

}  // namespace ldg
