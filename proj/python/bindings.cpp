#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "latfront/artifacts.hpp"
#include "latfront/cli.hpp"
#include "latfront/common.hpp"
#include "latfront/config.hpp"

namespace py = pybind11;
using namespace latfront;

namespace {

py::object to_py(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

json checked(const std::string& text, const std::string& command) {
  const Validation v = validate_text(text, command);
  if (!v.ok()) {
    std::string all;
    for (const auto& e : v.errors) all += (all.empty() ? "" : "; ") + e;
    throw Error(ErrorKind::Config, all);
  }
  return v.config;
}

WaveSolution solve(const json& cfg, const WaveSystem& system) {
  const Grid grid = grid_from(cfg, system);
  const json& s = cfg["solver"];
  return newton_solve(system, grid, initial_guess(grid, s["width"].get<double>(), system.components),
                      s["c_guess"].get<double>(), newton_from(cfg));
}

Vec nodes(const Grid& g) {
  Vec xi(g.n);
  for (int i = 0; i < g.n; ++i) xi(i) = g.node(i);
  return xi;
}

py::dict solution_dict(const WaveSolution& sol) {
  py::dict d = to_py(to_json(sol));
  d["xi"] = nodes(sol.grid);
  d["profile"] = Mat(sol.profile);
  return d;
}

py::dict solve_wave(const std::string& config) {
  const json cfg = checked(config, "solve-wave");
  const ModelContext mc = build_model(cfg);
  const WaveSolution sol = solve(cfg, mc.system);
  py::dict d = solution_dict(sol);
  if (cfg["solver"]["kernel_check"].get<bool>()) d["kernel"] = to_py(to_json(kernel_vectors(mc.system, sol)));
  return d;
}

py::dict check_hyperbolic(const std::string& config, double c) {
  const json cfg = checked(config, "check-hyperbolic");
  const ModelContext mc = build_model(cfg);
  const json& hy = cfg["hyperbolic"];
  const HyperbolicityReport r = asymptotic_hyperbolicity(limit_operator(mc.system, c, mc.tail_bound),
                                                         hy["tol"].get<double>(), hy["points"].get<int>());
  return to_py(to_json(r));
}

py::dict branch_from_config(const std::string& config) {
  const json cfg = checked(config, "continue");
  const ModelContext mc = build_model(cfg);
  const json& co = cfg["continuation"];
  const std::string param = co["parameter"];
  const double p1 = co["to"];
  SystemFamily family;
  double p0;
  double bound = mc.tail_bound;
  if (param == "eps" && mc.has_perturbation) {
    const PerturbedSystem ps = mc.perturbed;
    family = [ps](double e) { return ps.at(e); };
    p0 = co["from"].is_null() ? 0.0 : co["from"].get<double>();
    if (mc.family == "infinite_range")
      bound = 2.0 * std::max(std::abs(p0), std::abs(p1)) * mc.provenance["certificate"].get<double>();
  } else {
    family = model_family(cfg, param);
    p0 = co["from"].is_null() ? cfg["model"][param].get<double>() : co["from"].get<double>();
  }
  const WaveSolution start = solve(cfg, family(p0));
  const ContinuationBranch b = continue_branch(family, start, p0, p1, continuation_from(cfg, bound), param);
  py::dict d = to_py(to_json(b));
  py::list profiles;
  for (const auto& s : b.steps) profiles.append(Mat(s.profile));
  d["xi"] = nodes(start.grid);
  d["profiles"] = profiles;
  return d;
}

py::dict fixed_point(const std::string& config) {
  const json cfg = checked(config, "fixed-point");
  const ModelContext mc = build_model(cfg);
  const json& fp = cfg["fixedpoint"];
  const WaveSolution base = solve(cfg, mc.perturbed.reference);
  FixedPointOptions opts;
  opts.tol = fp["tol"];
  opts.max_iter = fp["max_iter"];
  const FixedPointResult r = iterate(make_context(mc.perturbed, base, fp["eps"].get<double>()), opts);
  py::dict d = to_py(to_json(r.state));
  d["c0"] = base.c;
  d["solution"] = solution_dict(r.solution);
  return d;
}

py::dict simulate(const std::string& config) {
  const json cfg = checked(config, "simulate");
  const ModelContext mc = build_model(cfg);
  const json& s = cfg["sim"];
  const int M = s["M"];
  const double position = s["position"].is_null() ? 0.75 * M : s["position"].get<double>();
  const Trajectory t = integrate(mc.lattice, front_state(M, position, s["width"].get<double>(), mc.lattice.period),
                                 s["dt"].get<double>(), s["T"].get<double>(), s["stride"].get<int>());
  const Locator loc = s["locator"] == "mass" ? Locator::Mass : Locator::Crossing;
  const SpeedMeasurement sp = measure_speed(t, s["level"].get<double>(), 0, s["window"].get<double>(), loc);
  py::dict d = to_py(to_json(sp));
  d["times"] = t.times;
  d["snapshots"] = t.snapshots;
  return d;
}

py::dict tails(const std::string& config) {
  const json cfg = checked(config, "tails");
  const ModelContext mc = build_model(cfg);
  const WaveSolution sol = solve(cfg, mc.system);
  TailReport r = (mc.has_lattice && mc.lattice.period > 1) ? tail_report(mc.lattice, sol.c) : tail_report(mc.system, sol.c);
  const double w = cfg["tails"]["window"];
  r.fit0 = fit_tail(sol, End::Minus, w);
  r.fit1 = fit_tail(sol, End::Plus, w);
  r.has_fit = true;
  py::dict d = to_py(to_json(r));
  d["c"] = sol.c;
  return d;
}

}  // namespace

PYBIND11_MODULE(_latfront, m) {
  m.doc() = "Traveling fronts of periodic lattice differential equations";
  m.attr("__version__") = kVersion;

  py::register_exception<Error>(m, "LatfrontError", PyExc_RuntimeError);

  m.def("default_config", [] { return default_config().dump(); }, "Default configuration as JSON text.");
  m.def(
      "validate",
      [](const std::string& text, const std::string& command) {
        const Validation v = validate_text(text, command);
        return py::make_tuple(v.ok(), v.ok() ? v.config.dump() : std::string(), v.errors);
      },
      py::arg("config"), py::arg("command") = "", "Returns (ok, normalized JSON text, errors).");
  m.def(
      "run",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line tool in process; returns (exit code, stdout, stderr).");

  m.def("solve_wave", &solve_wave, py::arg("config"));
  m.def("check_hyperbolic", &check_hyperbolic, py::arg("config"), py::arg("c"));
  m.def("continue_branch", &branch_from_config, py::arg("config"));
  m.def("fixed_point", &fixed_point, py::arg("config"));
  m.def("simulate", &simulate, py::arg("config"));
  m.def("tails", &tails, py::arg("config"));

  m.def(
      "two_periodic_equilibria",
      [](double d1, double a) {
        std::vector<std::vector<double>> out;
        for (const auto& s : find_two_periodic_equilibria(d1, a)) out.push_back(s.values);
        return out;
      },
      py::arg("d1"), py::arg("a"));
  m.def("upsilon_two_site", &upsilon_two_site, py::arg("d_e"), py::arg("d_o"), py::arg("d2"), py::arg("eps"),
        py::arg("gamma1"), py::arg("gamma2"), py::arg("c"), py::arg("theta"));
  m.def(
      "principal_eigenpair",
      [](const Mat& B) {
        const Eigenpair e = principal_eigenpair(B);
        return py::make_tuple(e.lambda, e.vector);
      },
      py::arg("B"));
}
