#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ldg/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run ldg_run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = ldg::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path scratch_dir() {
  const fs::path d = fs::temp_directory_path() / "ldg_cli_test";
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("cli solve writes field, log and manifest deterministically") {
  const fs::path d = scratch_dir();
  const std::string out = (d / "ring.field").string();
  const std::vector<std::string> args{"solve", "--family", "plus", "--a", "10", "--mu", "25", "--level", "-0.95",
                                      "--n", "32", "--seed", "hedgehog", "--out", out};
  const Run r = ldg_run(args);
  CHECK(r.code == 0);
  REQUIRE(fs::exists(out));
  CHECK(fs::exists(out + ".log"));
  CHECK(fs::exists(out + ".manifest.json"));
  CHECK(slurp(out).rfind("# ldg-field v1 n_rho=33 n_z=33 a=10 mu=25", 0) == 0);
  const std::string log = slurp(out + ".log");
  CHECK(log.rfind("# iter total dirichlet axis bulk grad_norm\n0 ", 0) == 0);
  const std::string manifest = slurp(out + ".manifest.json");
  CHECK(manifest.find("\"field_format\": \"ldg-field v1\"") != std::string::npos);

  const std::string first = slurp(out);
  CHECK(ldg_run(args).code == 0);
  CHECK(slurp(out) == first);

  const Run c = ldg_run({"classify", "--in", out, "--ring"});
  CHECK(c.code == 0);
  CHECK(c.out.find("parity = even") != std::string::npos);
  CHECK(c.out.find("[ring]") != std::string::npos);

  std::ofstream(d / "trunc.field") << first.substr(0, first.size() / 2);
  const Run t = ldg_run({"classify", "--in", (d / "trunc.field").string()});
  CHECK(t.code == 1);
  CHECK(t.err.find("ParseError") != std::string::npos);

  std::ofstream(d / "v2.field") << "# ldg-field v2 n_rho=33 n_z=33 a=10 mu=25\n";
  CHECK(ldg_run({"classify", "--in", (d / "v2.field").string()}).code == 1);
}

TEST_CASE("cli exit codes") {
  const fs::path d = scratch_dir();
  const Run bad = ldg_run({"solve", "--family", "plus", "--level", "0.2", "--n", "32", "--out", (d / "x").string()});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("outside") != std::string::npos);
  CHECK(ldg_run({"solve", "--family", "sideways", "--out", "x"}).code == 1);
  CHECK(ldg_run({"solve", "--family", "plus", "--mode", "penalty:abc", "--out", "x"}).code == 1);
  CHECK(ldg_run({}).code == 1);
  const Run capped = ldg_run({"solve", "--family", "minus", "--a", "10", "--mu", "25", "--n", "32", "--max-iters", "3",
                              "--out", (d / "capped.field").string()});
  CHECK(capped.code == 2);
  CHECK(fs::exists(d / "capped.field"));
}

TEST_CASE("cli config file with flag override") {
  const fs::path d = scratch_dir();
  const fs::path cfg = d / "solve.ini";
  std::ofstream(cfg) << "[solve]\nfamily = minus\na = 10\nmu = 25\nn = 48\nmax-iters = 5\n";
  const std::string out = (d / "cfg.field").string();
  const Run r = ldg_run({"solve", "--config", cfg.string(), "--n", "32", "--out", out});
  CHECK(r.code == 2);
  CHECK(slurp(out).rfind("# ldg-field v1 n_rho=33 n_z=33 a=10 mu=25", 0) == 0);
}

TEST_CASE("cli sweep and profile") {
  const fs::path d = scratch_dir() / "sweep";
  fs::remove_all(d);
  const Run r = ldg_run({"sweep", "--family", "plus", "--mu", "25", "--n", "32", "--schedule", "5,10,20",
                         "--out-dir", d.string()});
  CHECK(r.code == 0);
  for (const char* stem : {"a5", "a10", "a20"}) {
    CHECK(fs::exists(d / (std::string(stem) + ".field")));
    CHECK(fs::exists(d / (std::string(stem) + ".manifest.json")));
  }
  std::istringstream summary(slurp(d / "summary.txt"));
  std::string line;
  std::getline(summary, line);
  CHECK(line == "a total potential_integral zeros parity ring_rho");
  double prev = INFINITY;
  int rows = 0;
  while (std::getline(summary, line)) {
    std::istringstream ls(line);
    double a, total, pot;
    ls >> a >> total >> pot;
    CHECK(pot < prev);
    prev = pot;
    ++rows;
  }
  CHECK(rows == 3);

  const fs::path prof = scratch_dir() / "profile.txt";
  CHECK(ldg_run({"profile", "--rmax", "20", "--rtol", "1e-6", "--out", prof.string()}).code == 0);
  const std::string table = slurp(prof);
  CHECK(table.rfind("# alpha = 0.5060427", 0) == 0);
  CHECK(ldg_run({"profile", "--rmax", "5"}).code == 1);
}
