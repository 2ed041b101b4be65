#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ldg/disclination.hpp"
#include "ldg/energy.hpp"
#include "ldg/errors.hpp"
#include "ldg/field_io.hpp"
#include "ldg/hedgehog_profile.hpp"
#include "ldg/signorini_solver.hpp"

namespace py = pybind11;
using namespace ldg;

namespace {

// Fields cross the boundary as (n+1, n+1, 3) arrays indexed [j, i, component]
// (z row, rho column); nodes outside the quarter disk are zero.
py::array_t<double> to_array(const OrderField& f) {
  py::array_t<double> out({f.n_z, f.n_rho, 3});
  auto m = out.mutable_unchecked<3>();
  for (int j = 0; j < f.n_z; ++j)
    for (int i = 0; i < f.n_rho; ++i) {
      const UVec& u = f.at(i, j);
      m(j, i, 0) = u.u1;
      m(j, i, 1) = u.u2;
      m(j, i, 2) = u.u3;
    }
  return out;
}

OrderField from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& a, const Grid& g) {
  if (a.ndim() != 3 || a.shape(0) != g.n_z() || a.shape(1) != g.n_rho() || a.shape(2) != 3)
    throw Error(ErrorCode::ShapeError, "field array must have shape (n+1, n+1, 3)");
  auto m = a.unchecked<3>();
  OrderField f(g);
  for (int j = 0; j < g.n_z(); ++j)
    for (int i = 0; i < g.n_rho(); ++i) f.at(i, j) = {m(j, i, 0), m(j, i, 1), m(j, i, 2)};
  return f;
}

Params make_params(const std::string& family, double a, double mu, std::optional<double> level) {
  if (family == "plus") return Params(a, mu, Obstacle::plus(level.value_or(-0.95)));
  if (family == "minus") return Params(a, mu, Obstacle::minus(level.value_or(0.95)));
  throw Error(ErrorCode::InvalidConfig, "family must be 'plus' or 'minus'");
}

py::dict energy_dict(const EnergyBreakdown& e) {
  py::dict d;
  d["total"] = e.total;
  d["dirichlet"] = e.dirichlet;
  d["axis"] = e.axis_penalty;
  d["bulk"] = e.bulk;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Axisymmetric Landau-de Gennes droplet solver";

  py::register_exception<Error>(m, "LdgError", PyExc_RuntimeError);

  m.def("h_a", &compute_h_a, py::arg("a"));
  m.def("d_a", &compute_d_a, py::arg("a"));
  m.def("p_invariant", [](double u1, double u2, double u3) { return p_invariant({u1, u2, u3}); });
  m.def("lift", [](double u1, double u2, double u3, double theta) { return lift({u1, u2, u3}, theta); });
  m.def("s_invariant", [](const Vec5& w) { return s_invariant(w); });
  m.def(
      "eigenvalues",
      [](double u1, double u2, double u3) {
        const EigenData e = eigenvalues({u1, u2, u3});
        py::dict d;
        d["formula"] = e.formula;
        d["sorted"] = e.sorted;
        d["phase"] = std::string(to_string(e.phase));
        if (e.director) d["director"] = *e.director;
        return d;
      },
      py::arg("u1"), py::arg("u2"), py::arg("u3"));

  m.def(
      "solve",
      [](const std::string& family, double a, double mu, std::optional<double> level, int n, const std::string& seed,
         int max_iters, double grad_tol) {
        const Params p = make_params(family, a, mu, level);
        const Grid g(n);
        SolverConfig cfg;
        cfg.seed = Seed::parse(seed.empty() ? (family == "plus" ? "ring" : "split") : seed);
        cfg.max_iters = max_iters;
        cfg.grad_tol = grad_tol;
        SolveResult r;
        {
          py::gil_scoped_release release;
          r = solve(cfg, g, p);
        }
        py::dict d;
        d["field"] = to_array(r.field);
        d["converged"] = r.converged;
        d["iterations"] = r.iterations;
        d["energy"] = energy_dict(energy(r.field, g, p));
        d["obstacle_violation"] = r.obstacle_violation;
        return d;
      },
      py::arg("family") = "plus", py::arg("a") = 20.0, py::arg("mu") = 50.0, py::arg("level") = py::none(),
      py::arg("n") = 64, py::arg("seed") = "", py::arg("max_iters") = SolverConfig{}.max_iters,
      py::arg("grad_tol") = SolverConfig{}.grad_tol);

  m.def(
      "energy",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& field, double a, double mu) {
        const Grid g(static_cast<int>(field.shape(0)) - 1);
        return energy_dict(energy(from_array(field, g), g, Params(a, mu)));
      },
      py::arg("field"), py::arg("a"), py::arg("mu"));

  m.def(
      "classify",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& field, double a, double mu) {
        const Grid g(static_cast<int>(field.shape(0)) - 1);
        const Params p(a, mu);
        return format_report(analyze(from_array(field, g), g, p), g);
      },
      py::arg("field"), py::arg("a"), py::arg("mu"));

  m.def(
      "read_field",
      [](const std::string& path) {
        FieldFile f = read_field_file(path);
        py::dict d;
        d["n"] = f.n;
        d["a"] = f.a;
        d["mu"] = f.mu;
        d["field"] = to_array(f.field);
        return d;
      },
      py::arg("path"));
  m.def(
      "write_field",
      [](const std::string& path, const py::array_t<double, py::array::c_style | py::array::forcecast>& field,
         double a, double mu) {
        const Grid g(static_cast<int>(field.shape(0)) - 1);
        write_field_file(path, from_array(field, g), g, a, mu);
      },
      py::arg("path"), py::arg("field"), py::arg("a"), py::arg("mu"));

  m.def("hedgehog_alpha", [](double r_max, double rtol) { return shoot_profile(r_max, rtol).alpha; },
        py::arg("r_max") = 30.0, py::arg("rtol") = 1e-8);
  m.def("c_mu", [](double R, double mu) { return c_mu(R, mu, shoot_profile()); }, py::arg("R"), py::arg("mu"));
}
