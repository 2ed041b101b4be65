#include "ldg/cli.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ldg/disclination.hpp"
#include "ldg/energy.hpp"
#include "ldg/errors.hpp"
#include "ldg/field_io.hpp"
#include "ldg/hedgehog_profile.hpp"
#include "ldg/signorini_solver.hpp"

namespace ldg::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

constexpr const char* kFieldFormat = "ldg-field v1";

void apply_thread_cap() {
#ifdef _OPENMP
  if (const char* env = std::getenv("LDG_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) omp_set_num_threads(std::min(cap, omp_get_num_procs()));
  }
#endif
}

struct SolveFlags {
  std::string family = "plus";
  double a = 20.0;
  double mu = 50.0;
  std::optional<double> level;
  int n = 128;
  std::string seed;
  std::string mode = "projection";
  std::string out;
  std::string log;
  int max_iters = SolverConfig{}.max_iters;
  double grad_tol = SolverConfig{}.grad_tol;
  int coarse_levels = 0;
  double core_radius = Seed{}.core_radius;
};

Family parse_family(const std::string& s) {
  if (s == "plus") return Family::Plus;
  if (s == "minus") return Family::Minus;
  throw Error(ErrorCode::InvalidConfig, "family must be plus or minus, got '" + s + "'");
}

Params make_params(const SolveFlags& f, double a) {
  const Family fam = parse_family(f.family);
  const double level = f.level ? *f.level : (fam == Family::Plus ? -0.95 : 0.95);
  return Params(a, f.mu, fam == Family::Plus ? Obstacle::plus(level) : Obstacle::minus(level));
}

SolverConfig make_config(const SolveFlags& f) {
  SolverConfig cfg;
  const Family fam = parse_family(f.family);
  cfg.seed = Seed::parse(f.seed.empty() ? (fam == Family::Plus ? "ring" : "split") : f.seed);
  cfg.seed.core_radius = f.core_radius;
  if (f.mode == "projection") {
    cfg.mode = ConstraintMode::Projection;
  } else if (f.mode.rfind("penalty:", 0) == 0) {
    cfg.mode = ConstraintMode::Penalty;
    try {
      cfg.epsilon = std::stod(f.mode.substr(8));
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidConfig, "bad penalty epsilon in '" + f.mode + "'");
    }
  } else {
    throw Error(ErrorCode::InvalidConfig, "mode must be projection or penalty:<eps>, got '" + f.mode + "'");
  }
  cfg.max_iters = f.max_iters;
  cfg.grad_tol = f.grad_tol;
  cfg.coarse_levels = f.coarse_levels;
  cfg.validate();
  return cfg;
}

void add_solve_flags(CLI::App* app, SolveFlags& f, bool with_a) {
  app->add_option("--family", f.family, "plus | minus")->check(CLI::IsMember({"plus", "minus"}));
  if (with_a) app->add_option("--a", f.a, "reduced temperature a > 0");
  app->add_option("--mu", f.mu, "droplet size parameter mu > 0");
  app->add_option("--level", f.level, "obstacle level b (plus) or c (minus)");
  app->add_option("--n", f.n, "grid resolution, h = 1/n");
  app->add_option("--seed", f.seed, "hedgehog | ring | split | file:<path>");
  app->add_option("--mode", f.mode, "projection | penalty:<eps>");
  app->add_option("--max-iters", f.max_iters);
  app->add_option("--grad-tol", f.grad_tol);
  app->add_option("--coarse-levels", f.coarse_levels, "warm start through coarser grids");
  app->add_option("--core-radius", f.core_radius, "modified region radius for ring / split seeds");
  app->fallthrough();
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_log_row(std::ostream& os, int iter, const EnergyBreakdown& e, double g) {
  os << iter << ' ' << fmt17(e.total) << ' ' << fmt17(e.dirichlet) << ' ' << fmt17(e.axis_penalty) << ' '
     << fmt17(e.bulk) << ' ' << fmt17(g) << '\n';
}

json params_json(const Params& p, int n) {
  return {{"a", p.a()},
          {"mu", p.mu()},
          {"family", p.obstacle().family == Family::Plus ? "plus" : "minus"},
          {"level", p.obstacle().level},
          {"n", n}};
}

void write_manifest(const std::string& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::IoError, "cannot write " + path);
  os << std::setw(2) << j << '\n';
}

json echo(const std::vector<std::string>& args) {
  json a = json::array();
  a.push_back("ldg");
  for (const auto& s : args) a.push_back(s);
  return a;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_solve(const SolveFlags& f, const std::vector<std::string>& args, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  if (f.out.empty()) throw Error(ErrorCode::InvalidConfig, "--out is required");
  const Params params = make_params(f, f.a);
  SolverConfig cfg = make_config(f);
  const Grid grid(f.n);

  const std::string log_path = f.log.empty() ? f.out + ".log" : f.log;
  std::ofstream log(log_path);
  if (!log) throw Error(ErrorCode::IoError, "cannot write " + log_path);
  log << "# iter total dirichlet axis bulk grad_norm\n";
  cfg.on_iter = [&](int it, const EnergyBreakdown& e, double g) { write_log_row(log, it, e, g); };

  const SolveResult res = solve(cfg, grid, params);
  log.close();
  write_field_file(f.out, res.field, grid, params.a(), params.mu());

  const EnergyBreakdown e = res.log.empty() ? energy(res.field, grid, params) : res.log.back().energy;
  const std::string manifest = f.out + ".manifest.json";
  json j{{"command", echo(args)},
         {"params", params_json(params, f.n)},
         {"seed", cfg.seed.str()},
         {"mode", f.mode},
         {"wall_time_s", elapsed(t0)},
         {"converged", res.converged},
         {"iterations", res.iterations},
         {"energy", e.total},
         {"obstacle_violation", res.obstacle_violation},
         {"outputs", {f.out, log_path, manifest}},
         {"field_format", kFieldFormat}};
  write_manifest(manifest, j);
  out << "energy = " << fmt17(e.total) << "\n";
  out << "iterations = " << res.iterations << "\n";
  out << "converged = " << (res.converged ? "true" : "false") << "\n";
  return res.converged ? 0 : 2;
}

struct ClassifyFlags {
  std::string in;
  std::string out;
  bool ring = false;
  bool cores = false;
  std::vector<std::vector<double>> windings;
  double tol = 0.0;
};

int cmd_classify(const ClassifyFlags& f, std::ostream& out) {
  const FieldFile file = read_field_file(f.in);
  const Grid grid(file.n);
  const Params params(file.a, file.mu);
  ReportOptions opt;
  opt.ring = f.ring;
  opt.cores = f.cores;
  opt.tol = f.tol;
  for (const auto& w : f.windings) {
    if (w.size() != 3) throw Error(ErrorCode::InvalidConfig, "--winding takes rho z r");
    opt.windings.push_back({w[0], w[1], w[2]});
  }
  const std::string text = format_report(analyze(file.field, grid, params, opt), grid);
  if (f.out.empty()) {
    out << text;
  } else {
    std::ofstream os(f.out);
    if (!os) throw Error(ErrorCode::IoError, "cannot write " + f.out);
    os << text;
  }
  return 0;
}

struct SweepFlags {
  SolveFlags solve;
  std::vector<double> schedule{10, 20, 40, 80};
  std::string out_dir = "sweep";
};

std::string stage_name(double a) {
  std::ostringstream os;
  os << "a" << a;
  return os.str();
}

int cmd_sweep(const SweepFlags& f, const std::vector<std::string>& args, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  SolverConfig cfg = make_config(f.solve);
  const Params base = make_params(f.solve, f.schedule.empty() ? 1.0 : f.schedule.front());
  const Grid grid(f.solve.n);
  fs::create_directories(f.out_dir);
  const std::string summary_path = (fs::path(f.out_dir) / "summary.txt").string();
  std::ofstream summary(summary_path);
  if (!summary) throw Error(ErrorCode::IoError, "cannot write " + summary_path);
  summary << "a total potential_integral zeros parity ring_rho\n";
  summary.flush();
  bool all_converged = true;

  auto on_stage = [&](const ContinuationStage& st, int k) {
    const std::string stem = (fs::path(f.out_dir) / stage_name(st.a)).string();
    const std::string field_path = stem + ".field";
    const Params p = base.with_a(st.a);
    write_field_file(field_path, st.result.field, grid, st.a, p.mu());
    const AxisZeros zeros = find_axis_zeros(st.result.field, grid);
    double ring_rho = NAN;
    try {
      if (auto r = find_ring(st.result.field, grid)) ring_rho = r->rho;
    } catch (const Error&) {
    }
    summary << st.a << ' ' << fmt17(st.energy.total) << ' ' << fmt17(st.potential_integral) << ' '
            << zeros.z.size() << ' ' << zeros.parity() << ' ' << (std::isnan(ring_rho) ? "none" : fmt17(ring_rho))
            << '\n';
    summary.flush();
    all_converged = all_converged && st.result.converged;
    const std::string manifest = stem + ".manifest.json";
    json j{{"command", echo(args)},
           {"stage", k},
           {"params", params_json(p, f.solve.n)},
           {"seed", k == 0 ? cfg.seed.str() : "warm"},
           {"mode", f.solve.mode},
           {"wall_time_s", elapsed(t0)},
           {"converged", st.result.converged},
           {"iterations", st.result.iterations},
           {"energy", st.energy.total},
           {"potential_integral", st.potential_integral},
           {"outputs", {field_path, manifest, summary_path}},
           {"field_format", kFieldFormat}};
    write_manifest(manifest, j);
    out << "stage " << k << " a = " << st.a << " energy = " << fmt17(st.energy.total)
        << " iterations = " << st.result.iterations << "\n";
  };
  continuation(f.schedule, cfg, grid, base, on_stage);
  return all_converged ? 0 : 2;
}

struct ProfileFlags {
  double rmax = 30.0;
  double rtol = 1e-8;
  double dr = 0.005;
  std::string out;
};

int cmd_profile(const ProfileFlags& f, std::ostream& out) {
  const RadialProfile p = shoot_profile(f.rmax, f.rtol, f.dr);
  std::ofstream file;
  std::ostream* os = &out;
  if (!f.out.empty()) {
    file.open(f.out);
    if (!file) throw Error(ErrorCode::IoError, "cannot write " + f.out);
    os = &file;
  }
  *os << "# alpha = " << fmt17(p.alpha) << "\n# r f df\n";
  for (const auto& s : p.samples) *os << fmt17(s.r) << ' ' << fmt17(s.f) << ' ' << fmt17(s.df) << '\n';
  if (!f.out.empty()) out << "alpha = " << fmt17(p.alpha) << "\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  apply_thread_cap();
  CLI::App app{"Axially symmetric Landau-de Gennes droplet solver"};
  app.require_subcommand(1);
  // keys go under a [solve] / [classify] / [sweep] / [profile] section; flags win
  app.set_config("--config", "", "key = value file with the same keys as the flags");

  SolveFlags solve_flags;
  auto* solve_cmd = app.add_subcommand("solve", "minimize the energy in one Signorini class");
  add_solve_flags(solve_cmd, solve_flags, true);
  solve_cmd->add_option("--out", solve_flags.out, "field file")->required();
  solve_cmd->add_option("--log", solve_flags.log, "log file (default <out>.log)");

  ClassifyFlags classify_flags;
  auto* classify_cmd = app.add_subcommand("classify", "structural report for a field file");
  classify_cmd->fallthrough();
  classify_cmd->add_option("--in", classify_flags.in, "field file")->required();
  classify_cmd->add_option("--out", classify_flags.out, "report file (default stdout)");
  classify_cmd->add_flag("--ring", classify_flags.ring, "locate the equatorial ring");
  classify_cmd->add_flag("--cores", classify_flags.cores, "tangent-map fit at the lowest axis zero");
  classify_cmd->add_option("--winding", classify_flags.windings, "rho z r")->expected(3)->allow_extra_args(false);
  classify_cmd->add_option("--tol", classify_flags.tol, "phase tolerance (default 1e-6 max(1, |u|))");

  SweepFlags sweep_flags;
  auto* sweep_cmd = app.add_subcommand("sweep", "continuation in a with per-stage output");
  add_solve_flags(sweep_cmd, sweep_flags.solve, false);
  sweep_cmd->add_option("--schedule", sweep_flags.schedule, "increasing a values")->delimiter(',');
  sweep_cmd->add_option("--out-dir", sweep_flags.out_dir);

  ProfileFlags profile_flags;
  auto* profile_cmd = app.add_subcommand("profile", "radial hedgehog profile table");
  profile_cmd->fallthrough();
  profile_cmd->add_option("--rmax", profile_flags.rmax);
  profile_cmd->add_option("--rtol", profile_flags.rtol);
  profile_cmd->add_option("--dr", profile_flags.dr);
  profile_cmd->add_option("--out", profile_flags.out);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*solve_cmd) return cmd_solve(solve_flags, args, out);
    if (*classify_cmd) return cmd_classify(classify_flags, out);
    if (*sweep_cmd) return cmd_sweep(sweep_flags, args, out);
    if (*profile_cmd) return cmd_profile(profile_flags, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace ldg::cli
