#include "latfront/cli.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "latfront/artifacts.hpp"
#include "latfront/config.hpp"

namespace latfront {

namespace {

// An error carrying extra fields for the stderr report.
struct Failure : Error {
  json details;
  Failure(ErrorKind kind, const std::string& what, json d) : Error(kind, what), details(std::move(d)) {}
};

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Convergence:
    case ErrorKind::Domain:
      return kExitConvergence;
    case ErrorKind::Hyperbolicity:
      return kExitHyperbolicity;
    case ErrorKind::KernelDimension:
      return kExitKernel;
    case ErrorKind::Config:
    case ErrorKind::InvalidInput:
      return kExitConfig;
  }
  return kExitConfig;
}

void report_error(std::ostream& err, const std::string& command, ErrorKind kind, const std::string& message,
                  const json& details = json::object()) {
  json j = {{"error", to_string(kind)}, {"exit_code", exit_code(kind)}, {"command", command}, {"message", message}};
  for (auto it = details.begin(); it != details.end(); ++it) j[it.key()] = it.value();
  err << j.dump() << std::endl;
}

std::string num(double v) { return format_number(v); }

struct Context {
  std::string command;
  json config;
  ModelContext model;
  ArtifactWriter writer;
  std::ostream& out;
};

WaveSolution solve(const json& cfg, const WaveSystem& system) {
  const Grid grid = grid_from(cfg, system);
  const json& s = cfg["solver"];
  const Profile guess = initial_guess(grid, s["width"].get<double>(), system.components);
  return newton_solve(system, grid, guess, s["c_guess"].get<double>(), newton_from(cfg));
}

void write_solution(const Context& ctx, const WaveSolution& sol, json extra = json::object(), const std::string& stem = "") {
  Vec xi(sol.grid.n);
  for (int i = 0; i < sol.grid.n; ++i) xi(i) = sol.grid.node(i);
  ctx.writer.profile(stem + "profile.csv", xi, sol.profile);
  json body = to_json(sol);
  for (auto it = extra.begin(); it != extra.end(); ++it) body[it.key()] = it.value();
  ctx.writer.json_file(stem + "solution.json", body);
}

const json& model_block(const Context& ctx) { return ctx.config["model"]; }

void require_family(const Context& ctx, const std::set<std::string>& allowed) {
  if (!allowed.count(ctx.model.family)) {
    std::string list;
    for (const auto& s : allowed) list += (list.empty() ? "" : ", ") + s;
    throw Error(ErrorKind::Config, "model.family: '" + ctx.command + "' needs one of {" + list + "}, got '" +
                                       ctx.model.family + "'");
  }
}

int cmd_equilibria(Context& ctx) {
  require_family(ctx, {"nagumo", "two_site", "four_site"});
  const json& m = model_block(ctx);
  const json& e = ctx.config["equilibria"];
  const int period = e["period"];
  std::vector<PeriodicState> states;
  if (period == 2) {
    ScanSpec scan;
    scan.lo = e["lo"];
    scan.hi = e["hi"];
    scan.points = e["points"];
    states = find_two_periodic_equilibria(m["d1"], m["a"], scan);
  } else {
    states = find_four_periodic_equilibria(m["d1"], m["d2"], m["a"]);
  }
  json list = json::array();
  for (const auto& s : states) list.push_back(to_json(s));
  ctx.writer.json_file("equilibria.json", {{"period", period}, {"states", list}});
  ctx.out << "equilibria: period=" << period << " states=" << states.size() << " stop_reason=done\n";
  return kExitOk;
}

int cmd_transform(Context& ctx, bool four) {
  require_family(ctx, {four ? "four_site" : "two_site"});
  json prov = ctx.model.provenance;
  json body = prov["lattice"];
  prov.erase("lattice");
  body["provenance"] = prov;
  ctx.writer.json_file("model.json", body);
  if (four) {
    ctx.out << "transform4: quasipositivity_violations=" << prov["quasipositivity_violations"].size()
            << " stop_reason=done\n";
  } else {
    ctx.out << "transform2: d_e=" << num(prov["d_e"]) << " d_o=" << num(prov["d_o"])
            << " positive_couplings=" << (prov["positive_couplings"].get<bool>() ? "true" : "false")
            << " bistable=" << (prov["bistable"].get<bool>() ? "true" : "false") << " stop_reason=done\n";
  }
  return kExitOk;
}

int cmd_check_hyperbolic(Context& ctx) {
  double c;
  const json& hy = ctx.config["hyperbolic"];
  if (!hy["c"].is_null()) {
    c = hy["c"];
  } else {
    c = solve(ctx.config, ctx.model.system).c;
  }
  const MfdeOperator op = limit_operator(ctx.model.system, c, ctx.model.tail_bound);
  const HyperbolicityReport r = asymptotic_hyperbolicity(op, hy["tol"].get<double>(), hy["points"].get<int>());
  json body = to_json(r);
  body["c"] = c;
  ctx.writer.json_file("hyperbolicity.json", body);
  ctx.out << "check-hyperbolic: c=" << num(c) << " verdict=" << (r.verdict ? "true" : "false")
          << " min_modulus=" << num(r.min_modulus) << " theta_at_min=" << num(r.theta_at_min) << " stop_reason="
          << (r.verdict ? "hyperbolic" : "hyperbolicity_lost") << "\n";
  if (!r.verdict)
    throw Failure(ErrorKind::Hyperbolicity, "characteristic matrix is (numerically) singular on the imaginary axis",
                  {{"min_char_modulus", r.min_modulus}, {"theta_at_min", r.theta_at_min}, {"tol", r.tol}});
  return kExitOk;
}

int cmd_solve_wave(Context& ctx) {
  const WaveSolution sol = solve(ctx.config, ctx.model.system);
  json extra = json::object();
  KernelData k;
  const bool check = ctx.config["solver"]["kernel_check"];
  if (check) {
    k = kernel_vectors(ctx.model.system, sol);
    extra["kernel"] = to_json(k);
  }
  write_solution(ctx, sol, extra);
  ctx.out << "solve-wave: c=" << num(sol.c) << " residual=" << num(sol.residual_norm)
          << " newton_iters=" << sol.newton_iters;
  if (check) ctx.out << " kernel_dim=" << k.kernel_dim;
  ctx.out << " stop_reason=" << (sol.pinning_suspected ? "pinning_suspected" : "converged") << "\n";
  if (check && k.kernel_dim != 1) {
    try {
      require_simple_kernel(k);
    } catch (const Error& e) {
      throw Failure(ErrorKind::KernelDimension, e.what(), {{"kernel_dim_estimate", k.kernel_dim}});
    }
  }
  return kExitOk;
}

int cmd_continue(Context& ctx) {
  const json& co = ctx.config["continuation"];
  const json& m = model_block(ctx);
  const std::string param = co["parameter"];
  SystemFamily family;
  double p0;
  double tail_bound = ctx.model.tail_bound;
  if (param == "eps" && ctx.model.has_perturbation) {
    const PerturbedSystem ps = ctx.model.perturbed;
    family = [ps](double e) { return ps.at(e); };
    p0 = co["from"].is_null() ? 0.0 : co["from"].get<double>();
    if (ctx.model.family == "infinite_range") {
      const double cert = ctx.model.provenance["certificate"];
      tail_bound = 2.0 * std::max(std::abs(p0), std::abs(co["to"].get<double>())) * cert;
    }
  } else {
    family = model_family(ctx.config, param);
    p0 = co["from"].is_null() ? m[param].get<double>() : co["from"].get<double>();
  }
  const double p1 = co["to"];
  const WaveSolution start = solve(ctx.config, family(p0));
  const ContinuationBranch branch =
      continue_branch(family, start, p0, p1, continuation_from(ctx.config, tail_bound), param);

  ctx.writer.csv("branch.csv", param + ",c,newton_iters,min_char_modulus,kernel_dim", branch_rows(branch));
  ctx.writer.json_file("branch.json", to_json(branch));
  if (co["dump_profiles"].get<bool>()) {
    for (std::size_t i = 0; i < branch.steps.size(); ++i) {
      std::ostringstream name;
      name << "profile_" << std::setw(4) << std::setfill('0') << i << ".csv";
      Vec xi(start.grid.n);
      for (int j = 0; j < start.grid.n; ++j) xi(j) = start.grid.node(j);
      ctx.writer.profile(name.str(), xi, branch.steps[i].profile);
    }
  }
  const BranchRecord* last = nullptr;
  for (const auto& s : branch.steps)
    if (s.accepted) last = &s;
  const double c_last = last ? last->c : start.c;
  const double res_last = last ? last->residual_norm : start.residual_norm;
  ctx.out << "continue: " << param << "=" << num(branch.reached()) << " c=" << num(c_last) << " residual=" << num(res_last)
          << " steps=" << branch.steps.size() << " stop_reason=" << to_string(branch.stop_reason) << "\n";

  const BranchRecord& tail = branch.steps.back();
  const double min_mod = tail.hyperbolicity.entries.empty() ? std::nan("") : tail.hyperbolicity.min_modulus;
  json details = {{"stop_reason", to_string(branch.stop_reason)},
                  {"reached", branch.reached()},
                  {"min_char_modulus", min_mod},
                  {"theta_at_min", tail.hyperbolicity.theta_at_min},
                  {"kernel_dim_estimate", tail.kernel_dim}};
  switch (branch.stop_reason) {
    case StopReason::ReachedTarget:
      return kExitOk;
    case StopReason::HyperbolicityLost:
      throw Failure(ErrorKind::Hyperbolicity, branch.message, details);
    case StopReason::KernelDimensionChange:
      throw Failure(ErrorKind::KernelDimension, branch.message, details);
    case StopReason::StepUnderflow:
    case StopReason::PinningSuspected:
      throw Failure(ErrorKind::Convergence, branch.message, details);
  }
  return kExitOk;
}

int cmd_fixed_point(Context& ctx) {
  const json& fp = ctx.config["fixedpoint"];
  const double eps = fp["eps"];
  const PerturbedSystem& ps = ctx.model.perturbed;
  const WaveSolution base = solve(ctx.config, ps.reference);
  const FixedPointContext fctx = make_context(ps, base, eps);
  FixedPointOptions opts;
  opts.tol = fp["tol"];
  opts.max_iter = fp["max_iter"];
  const FixedPointResult res = iterate(fctx, opts);

  json body = to_json(res.state);
  body["eps"] = eps;
  body["c0"] = base.c;
  body["kernel"] = to_json(fctx.kernel);
  // direct Newton solve at the same eps, started from the reference wave
  try {
    const WaveSolution direct =
        newton_solve(ps.at(eps), base.grid, base.profile, base.c, newton_from(ctx.config), &base.profile);
    body["c_newton"] = direct.c;
    body["c_difference"] = std::abs(direct.c - res.state.c_current);
  } catch (const Error& e) {
    body["c_newton"] = nullptr;
    body["c_newton_error"] = e.what();
  }
  ctx.writer.csv("history.csv", "iter,step_norm,c_k,lambda_hat", history_rows(res.state));
  ctx.writer.json_file("fixedpoint.json", body);
  write_solution(ctx, res.solution);
  ctx.out << "fixed-point: eps=" << num(eps) << " c=" << num(res.state.c_current)
          << " residual=" << num(res.solution.residual_norm) << " iterations=" << res.state.history.size()
          << " contraction_ratio=" << num(res.state.contraction_ratio) << " stop_reason=converged\n";
  return kExitOk;
}

int cmd_simulate(Context& ctx) {
  const json& s = ctx.config["sim"];
  const LatticeModel& lm = ctx.model.lattice;
  const int M = s["M"];
  const double position = s["position"].is_null() ? 0.75 * M : s["position"].get<double>();
  const SimState init = front_state(M, position, s["width"].get<double>(), lm.period);
  const double dt = s["dt"];
  const Trajectory traj = integrate(lm, init, dt, s["T"].get<double>(), s["stride"].get<int>());
  const Locator loc = s["locator"] == "mass" ? Locator::Mass : Locator::Crossing;
  const SpeedMeasurement sp = measure_speed(traj, s["level"].get<double>(), 0, s["window"].get<double>(), loc);
  json body = to_json(sp);
  body["dt"] = dt;
  body["dt_bound"] = max_stable_dt(lm, init);
  body["snapshots"] = traj.times.size();
  ctx.writer.csv("trajectory.csv", "t,site,value", trajectory_rows(traj));
  std::string shape = "unmeasured";
  if (sp.c != 0.0) {
    const ExtractedProfile ep = extract_profile(traj, sp.c, s["profile_h"].get<double>(), s["window"].get<double>());
    body["profile_scatter"] = ep.scatter;
    body["traveling_wave"] = ep.traveling_wave;
    ctx.writer.profile("sim_profile.csv", ep.xi, ep.values);
    shape = ep.traveling_wave ? "traveling_wave" : "not_traveling_wave";
  }
  ctx.writer.json_file("speed.json", body);
  ctx.out << "simulate: c=" << num(sp.c) << " residual=" << num(sp.fit_residual) << " stop_reason=" << shape << "\n";
  return kExitOk;
}

int cmd_tails(Context& ctx) {
  const WaveSolution sol = solve(ctx.config, ctx.model.system);
  TailReport r = (ctx.model.has_lattice && ctx.model.lattice.period > 1) ? tail_report(ctx.model.lattice, sol.c)
                                                                         : tail_report(ctx.model.system, sol.c);
  json body;
  try {
    const double w = ctx.config["tails"]["window"];
    r.fit0 = fit_tail(sol, End::Minus, w);
    r.fit1 = fit_tail(sol, End::Plus, w);
    r.has_fit = true;
  } catch (const Error& e) {
    body["fit_error"] = e.what();
  }
  json rep = to_json(r);
  for (auto it = rep.begin(); it != rep.end(); ++it) body[it.key()] = it.value();
  body["c"] = sol.c;
  ctx.writer.json_file("tails.json", body);
  ctx.out << "tails: c=" << num(sol.c) << " lambda0=" << num(r.lambda0) << " lambda1=" << num(r.lambda1)
          << " residual=" << num(sol.residual_norm) << " stop_reason=" << (r.has_fit ? "fitted" : "no_fit") << "\n";
  return kExitOk;
}

int cmd_sweep(Context& ctx) {
  const json& sw = ctx.config["sweep"];
  const std::string param = sw["parameter"];
  if (!model_block(ctx).contains(param) || !model_block(ctx)[param].is_number())
    throw Error(ErrorKind::Config, "sweep.parameter: '" + param + "' is not a numeric field of the model block");
  std::vector<std::vector<double>> rows;
  int failed = 0;
  for (const auto& v : sw["values"]) {
    json cfg = ctx.config;
    cfg["model"][param] = v;
    try {
      const WaveSolution sol = solve(cfg, build_model(cfg).system);
      rows.push_back({v.get<double>(), sol.c, sol.residual_norm, static_cast<double>(sol.newton_iters), 1.0});
    } catch (const Error&) {
      const double nan = std::nan("");
      rows.push_back({v.get<double>(), nan, nan, nan, 0.0});
      ++failed;
    }
  }
  ctx.writer.csv("sweep.csv", param + ",c,residual_norm,newton_iters,converged", rows);
  ctx.out << "sweep: " << param << " runs=" << rows.size() << " failed=" << failed
          << " stop_reason=" << (failed ? "some_failed" : "done") << "\n";
  if (failed) throw Error(ErrorKind::Convergence, std::to_string(failed) + " sweep run(s) failed; see sweep.csv");
  return kExitOk;
}

int dispatch(Context& ctx) {
  const std::string& c = ctx.command;
  if (c == "equilibria") return cmd_equilibria(ctx);
  if (c == "transform2") return cmd_transform(ctx, false);
  if (c == "transform4") return cmd_transform(ctx, true);
  if (c == "check-hyperbolic") return cmd_check_hyperbolic(ctx);
  if (c == "solve-wave") return cmd_solve_wave(ctx);
  if (c == "continue") return cmd_continue(ctx);
  if (c == "fixed-point") return cmd_fixed_point(ctx);
  if (c == "simulate") return cmd_simulate(ctx);
  if (c == "tails") return cmd_tails(ctx);
  if (c == "sweep") return cmd_sweep(ctx);
  throw Error(ErrorKind::Config, "unknown command '" + c + "'");
}

const std::vector<std::pair<std::string, std::string>> kCommands{
    {"equilibria", "periodic equilibria of the Nagumo lattice (equilibria.json)"},
    {"transform2", "two-site change of variables (model.json)"},
    {"transform4", "four-site change of variables (model.json)"},
    {"check-hyperbolic", "imaginary-axis scan of the end-state characteristic matrices (hyperbolicity.json)"},
    {"solve-wave", "Newton solve of the traveling-wave problem (profile.csv, solution.json)"},
    {"continue", "natural-parameter continuation of the wave (branch.csv, branch.json)"},
    {"fixed-point", "Picard iteration of the perturbed wave (history.csv, fixedpoint.json)"},
    {"simulate", "RK4 integration of the lattice (trajectory.csv, speed.json, sim_profile.csv)"},
    {"tails", "decay rates at both ends (tails.json)"},
    {"sweep", "independent wave solves over a list of model values (sweep.csv)"},
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"latfront: traveling fronts of periodic lattice differential equations"};
  app.footer("Config: JSON file, then path=value overrides (CLI > file > defaults).\nDefaults:\n" +
             default_config().dump(2) +
             "\nModel families: nagumo, scaled_nagumo, two_site, four_site, periodic, infinite_range.\n"
             "Exit codes: 0 ok, 2 convergence, 3 hyperbolicity, 4 invalid config, 5 kernel dimension.");
  app.require_subcommand(1);
  std::string config_path, out_dir;
  std::vector<std::string> overrides;
  for (const auto& [name, desc] : kCommands) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("-c,--config", config_path, "JSON config file");
    sub->add_option("-o,--out", out_dir, "output directory (overrides output.directory)");
    sub->add_option("overrides", overrides, "path.to.field=value");
  }

  std::vector<std::string> argv_store{"latfront"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    report_error(err, "", ErrorKind::Config, e.what());
    return kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  json raw = json::object();
  if (!config_path.empty()) {
    std::ifstream f(config_path);
    if (!f) {
      report_error(err, command, ErrorKind::Config, "cannot open config file " + config_path);
      return kExitConfig;
    }
    std::stringstream ss;
    ss << f.rdbuf();
    try {
      raw = json::parse(ss.str());
    } catch (const json::parse_error& e) {
      report_error(err, command, ErrorKind::Config, std::string("invalid JSON in ") + config_path + ": " + e.what());
      return kExitConfig;
    }
  }
  try {
    for (const auto& o : overrides) apply_override(raw, o);
    if (!out_dir.empty()) apply_override(raw, "output.directory=\"" + out_dir + "\"");
  } catch (const Error& e) {
    report_error(err, command, e.kind(), e.what());
    return exit_code(e.kind());
  }
  const Validation v = validate(raw, command);
  if (!v.ok()) {
    report_error(err, command, ErrorKind::Config, v.errors.front(), {{"errors", v.errors}});
    return kExitConfig;
  }

  try {
    Context ctx{command, v.config, build_model(v.config),
                ArtifactWriter(v.config["output"]["directory"].get<std::string>(), v.config), out};
    return dispatch(ctx);
  } catch (const Failure& e) {
    report_error(err, command, e.kind(), e.what(), e.details);
    return exit_code(e.kind());
  } catch (const Error& e) {
    report_error(err, command, e.kind(), e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    report_error(err, command, ErrorKind::InvalidInput, e.what());
    return kExitConfig;
  }
}

}  // namespace latfront
