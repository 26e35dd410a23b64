#include "latfront/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <set>
#include <sstream>

namespace latfront {

namespace {

const std::vector<std::string> kBlocks{"model",      "grid", "solver",    "hyperbolic", "continuation", "fixedpoint",
                                       "equilibria", "sim",  "tails",     "sweep",      "output"};

json model_defaults(const std::string& family) {
  if (family == "nagumo") return {{"family", family}, {"d1", 1.0}, {"d2", 0.0}, {"a", 0.3}, {"eps", 1.0}};
  if (family == "scaled_nagumo") return {{"family", family}, {"d1", 1.0}, {"d2", 0.0}, {"a", 0.3}, {"eps", 0.05}};
  if (family == "two_site")
    return {{"family", family}, {"d1", -0.05}, {"d2", 0.05}, {"a", 0.5},
            {"minus", "auto"},  {"plus", "auto"}, {"eps", 1.0}};
  if (family == "four_site")
    return {{"family", family}, {"d1", 0.0},           {"d2", 1.0},      {"a", 0.3},
            {"minus", "auto"},  {"plus", "auto"},      {"split", "printed"}, {"eps", 1.0}};
  if (family == "periodic") return {{"family", family}, {"period", 1}, {"couplings", json::array()}, {"cubics", json::array()}};
  if (family == "infinite_range")
    return {{"family", family}, {"kernel", "geometric"}, {"q", 0.5},      {"scale", 1.0},     {"k0", 1},
            {"k_num", 40},      {"lambda_max", 0.0},     {"a", 0.3},      {"cubic_k", 1.0},   {"eps", 1.0},
            {"table", json::array()}, {"certificate", -1.0}};
  return json();
}

struct Checker {
  std::vector<std::string>& errors;

  void add(const std::string& path, const std::string& msg) { errors.push_back(path + ": " + msg); }

  bool number(const json& b, const std::string& block, const std::string& key) {
    if (!b.contains(key)) return false;
    if (!b[key].is_number()) {
      add(block + "." + key, "must be a number");
      return false;
    }
    if (!std::isfinite(b[key].get<double>())) {
      add(block + "." + key, "must be finite");
      return false;
    }
    return true;
  }
  void positive(const json& b, const std::string& block, const std::string& key) {
    if (number(b, block, key) && !(b[key].get<double>() > 0.0)) add(block + "." + key, "must be > 0");
  }
  void integer(const json& b, const std::string& block, const std::string& key, long lo) {
    if (!b.contains(key)) return;
    if (!b[key].is_number_integer()) {
      add(block + "." + key, "must be an integer");
      return;
    }
    if (b[key].get<long>() < lo) add(block + "." + key, "must be >= " + std::to_string(lo));
  }
  void boolean(const json& b, const std::string& block, const std::string& key) {
    if (b.contains(key) && !b[key].is_boolean()) add(block + "." + key, "must be true or false");
  }
  void one_of(const json& b, const std::string& block, const std::string& key, const std::set<std::string>& allowed) {
    if (!b.contains(key)) return;
    if (!b[key].is_string() || !allowed.count(b[key].get<std::string>())) {
      std::string list;
      for (const auto& s : allowed) list += (list.empty() ? "" : ", ") + s;
      add(block + "." + key, "must be one of {" + list + "}");
    }
  }
  void unknown(const json& b, const json& defaults, const std::string& block) {
    for (auto it = b.begin(); it != b.end(); ++it)
      if (!defaults.contains(it.key())) add(block + "." + it.key(), "unknown field");
  }
};

json merge_block(const json& defaults, const json& given) {
  json out = defaults;
  for (auto it = given.begin(); it != given.end(); ++it) out[it.key()] = it.value();
  return out;
}

std::set<std::string> required_blocks(const std::string& command) {
  if (command == "solve-wave" || command == "tails") return {"model", "grid"};
  if (command == "continue") return {"model", "grid", "continuation"};
  if (command == "fixed-point") return {"model", "grid", "fixedpoint"};
  if (command == "simulate") return {"model", "sim"};
  if (command == "sweep") return {"model", "grid", "sweep"};
  if (command == "equilibria" || command == "transform2" || command == "transform4" || command == "check-hyperbolic")
    return {"model"};
  return {};
}

void check_state(Checker& ck, const json& m, const std::string& key, std::size_t period) {
  if (!m.contains(key)) return;
  const json& v = m[key];
  if (v.is_string() && v.get<std::string>() == "auto") return;
  if (v.is_number_integer() && v.get<long>() >= 0) return;
  if (v.is_array() && v.size() == period) {
    for (const auto& x : v)
      if (!x.is_number()) {
        ck.add("model." + key, "state entries must be numbers");
        return;
      }
    return;
  }
  ck.add("model." + key, "must be \"auto\", an equilibrium index, or " + std::to_string(period) + " numbers");
}

void check_model(Checker& ck, const json& m) {
  const std::string family = m.value("family", "");
  for (const char* k : {"d1", "d2", "a", "eps", "q", "scale", "lambda_max", "cubic_k", "certificate"}) ck.number(m, "model", k);
  if (family == "nagumo" || family == "scaled_nagumo" || family == "infinite_range") {
    if (ck.number(m, "model", "a")) {
      const double a = m["a"].get<double>();
      if (!(a > 0.0 && a < 1.0)) ck.add("model.a", "must lie in (0, 1)");
    }
  }
  if (family == "scaled_nagumo") ck.positive(m, "model", "eps");
  if (family == "two_site") {
    if (ck.number(m, "model", "d1") && m["d1"].get<double>() == 0.0)
      ck.add("model.d1", "d1 = 0 decouples the sublattices; the period-2 branch formula is undefined (use four_site with d1 = 0)");
    check_state(ck, m, "minus", 2);
    check_state(ck, m, "plus", 2);
  }
  if (family == "four_site") {
    check_state(ck, m, "minus", 4);
    check_state(ck, m, "plus", 4);
    ck.one_of(m, "model", "split", {"printed", "all_d1"});
  }
  if (family == "periodic") {
    ck.integer(m, "model", "period", 1);
    const long P = m.value("period", 1L);
    if (!m["couplings"].is_array()) ck.add("model.couplings", "must be a list of [n, k, value]");
    else
      for (std::size_t i = 0; i < m["couplings"].size(); ++i) {
        const json& c = m["couplings"][i];
        if (!c.is_array() || c.size() != 3 || !c[0].is_number_integer() || !c[1].is_number_integer() || !c[2].is_number())
          ck.add("model.couplings[" + std::to_string(i) + "]", "must be [n, k, value] with integer n, k");
        else if (c[0].get<long>() < 0 || c[0].get<long>() >= P)
          ck.add("model.couplings[" + std::to_string(i) + "]", "site index must lie in [0, period)");
      }
    if (!m["cubics"].is_array() || static_cast<long>(m["cubics"].size()) != P)
      ck.add("model.cubics", "must list one {\"k\", \"a\"} per site of the period");
    else
      for (std::size_t i = 0; i < m["cubics"].size(); ++i) {
        const json& c = m["cubics"][i];
        if (!c.is_object() || !c.contains("k") || !c.contains("a") || !c["k"].is_number() || !c["a"].is_number())
          ck.add("model.cubics[" + std::to_string(i) + "]", "must be {\"k\": number, \"a\": number}");
      }
  }
  if (family == "infinite_range") {
    ck.one_of(m, "model", "kernel", {"geometric", "table"});
    ck.integer(m, "model", "k0", 1);
    ck.integer(m, "model", "k_num", 2);
    if (m["k0"].is_number_integer() && m["k_num"].is_number_integer() && m["k0"].get<long>() >= m["k_num"].get<long>())
      ck.add("model.k0", "must be smaller than model.k_num");
    if (m.value("kernel", "") == "geometric" && ck.number(m, "model", "q")) {
      const double q = m["q"].get<double>();
      if (!(q > 0.0 && q < 1.0)) ck.add("model.q", "must lie in (0, 1)");
    }
    if (m.value("kernel", "") == "table") {
      if (!m["table"].is_array() || m["table"].empty()) ck.add("model.table", "must list [k, value] pairs");
      if (!(m["certificate"].is_number() && m["certificate"].get<double>() >= 0.0))
        ck.add("model.certificate", "a table kernel needs a declared tail certificate >= 0");
    }
  }
}

PeriodicState state_from(const json& v, const std::vector<PeriodicState>& list, bool minus, const std::string& key) {
  if (v.is_array()) {
    PeriodicState s;
    s.period = static_cast<int>(v.size());
    for (const auto& x : v) s.values.push_back(x.get<double>());
    return s;
  }
  if (v.is_number_integer()) {
    const long i = v.get<long>();
    if (i < 0 || i >= static_cast<long>(list.size()))
      throw Error(ErrorKind::Config, "model." + key + ": equilibrium index " + std::to_string(i) + " out of range (" +
                                         std::to_string(list.size()) + " states found)");
    return list[static_cast<std::size_t>(i)];
  }
  // auto: outermost nonhomogeneous states, ordered by first component
  std::vector<PeriodicState> nontrivial;
  for (const auto& s : list) {
    bool homog = true;
    for (double x : s.values) homog = homog && x == s.values.front();
    if (!homog) nontrivial.push_back(s);
  }
  if (nontrivial.empty())
    throw Error(ErrorKind::Config, "model." + key + ": no nonhomogeneous equilibria; give the states explicitly");
  return minus ? nontrivial.front() : nontrivial.back();
}

LatticeModel combine(const LatticeModel& base, const LatticeModel& extra, double eps) {
  LatticeModel m = base;
  for (const auto& [key, v] : extra.couplings) m.add_coupling(key.first, key.second, eps * v);
  return m;
}

json model_json(const LatticeModel& m) {
  json c = json::array();
  for (const auto& [key, v] : m.couplings) c.push_back({key.first, key.second, v});
  json cubics = json::array();
  for (const auto& g : m.cubics) cubics.push_back({{"k", g.k}, {"a", g.a}});
  return {{"period", m.period}, {"couplings", c}, {"cubics", cubics}};
}

json state_json(const PeriodicState& s) { return {{"values", s.values}, {"residual", s.residual}}; }

}  // namespace

json default_config() {
  return {
      {"model", model_defaults("nagumo")},
      {"grid", {{"L", 40.0}, {"h", 0.05}}},
      {"solver",
       {{"tol", 1e-10}, {"max_iter", 50}, {"max_halvings", 8}, {"tail_tol", 1e-5}, {"width", 2.0}, {"c_guess", 0.1},
        {"kernel_check", true}}},
      {"hyperbolic", {{"tol", 1e-8}, {"points", 4096}, {"c", nullptr}}},
      {"continuation",
       {{"parameter", "eps"},
        {"from", nullptr},
        {"to", 1.0},
        {"step0", 0.05},
        {"step_min", 1e-5},
        {"grow", 1.5},
        {"step_max", 0.25},
        {"dump_profiles", false}}},
      {"fixedpoint", {{"eps", 0.05}, {"tol", 1e-10}, {"max_iter", 200}}},
      {"equilibria", {{"period", 2}, {"lo", -4.0}, {"hi", 5.0}, {"points", 10000}}},
      {"sim",
       {{"M", 400},
        {"dt", 0.05},
        {"T", 200.0},
        {"stride", 20},
        {"position", nullptr},
        {"width", 2.0},
        {"level", 0.5},
        {"window", 0.5},
        {"locator", "crossing"},
        {"profile_h", 0.05}}},
      {"tails", {{"window", 0.75}}},
      {"sweep", {{"parameter", "a"}, {"values", json::array()}}},
      {"output", {{"directory", "out"}}},
  };
}

Validation validate(const json& raw, const std::string& command) {
  Validation v;
  Checker ck{v.errors};
  if (!raw.is_object()) {
    ck.add("$", "config must be a JSON object");
    return v;
  }
  // malformed blocks are reported and skipped so that the remaining checks still run
  json given = json::object();
  for (auto it = raw.begin(); it != raw.end(); ++it)
    if (std::find(kBlocks.begin(), kBlocks.end(), it.key()) == kBlocks.end()) ck.add(it.key(), "unknown block");
    else if (!it.value().is_object()) ck.add(it.key(), "block must be an object");
    else given[it.key()] = it.value();
  for (const auto& b : required_blocks(command))
    if (!raw.contains(b)) ck.add(b, "block required by '" + command + "' is missing");

  json cfg = default_config();
  for (auto it = given.begin(); it != given.end(); ++it) {
    if (it.key() == "model") continue;
    ck.unknown(it.value(), cfg[it.key()], it.key());
    cfg[it.key()] = merge_block(cfg[it.key()], it.value());
  }
  const json given_model = given.contains("model") ? given["model"] : json::object();
  const std::string family = given_model.value("family", std::string("nagumo"));
  json mdef = model_defaults(family);
  if (mdef.is_null()) {
    ck.add("model.family", "must be one of {nagumo, scaled_nagumo, two_site, four_site, periodic, infinite_range}");
    return v;
  }
  ck.unknown(given_model, mdef, "model");
  cfg["model"] = merge_block(mdef, given_model);
  check_model(ck, cfg["model"]);

  const json& g = cfg["grid"];
  ck.positive(g, "grid", "h");
  ck.positive(g, "grid", "L");
  if (g["h"].is_number() && g["L"].is_number() && g["h"].get<double>() > 0.0 && g["L"].get<double>() < 10.0 * g["h"].get<double>())
    ck.add("grid.L", "must be at least 10 h");

  const json& s = cfg["solver"];
  ck.positive(s, "solver", "tol");
  ck.integer(s, "solver", "max_iter", 1);
  ck.integer(s, "solver", "max_halvings", 0);
  ck.positive(s, "solver", "tail_tol");
  ck.positive(s, "solver", "width");
  ck.number(s, "solver", "c_guess");
  ck.boolean(s, "solver", "kernel_check");

  const json& hy = cfg["hyperbolic"];
  ck.positive(hy, "hyperbolic", "tol");
  ck.integer(hy, "hyperbolic", "points", 8);
  if (!hy["c"].is_null()) {
    if (ck.number(hy, "hyperbolic", "c") && hy["c"].get<double>() == 0.0)
      ck.add("hyperbolic.c", "standing waves (c = 0) are not supported by the scan");
  }

  const json& co = cfg["continuation"];
  if (!co["parameter"].is_string()) ck.add("continuation.parameter", "must be a string");
  if (!co["from"].is_null()) ck.number(co, "continuation", "from");
  ck.number(co, "continuation", "to");
  ck.positive(co, "continuation", "step0");
  ck.positive(co, "continuation", "step_min");
  ck.positive(co, "continuation", "step_max");
  if (ck.number(co, "continuation", "grow") && co["grow"].get<double>() < 1.0) ck.add("continuation.grow", "must be >= 1");
  ck.boolean(co, "continuation", "dump_profiles");

  const json& fp = cfg["fixedpoint"];
  ck.number(fp, "fixedpoint", "eps");
  ck.positive(fp, "fixedpoint", "tol");
  ck.integer(fp, "fixedpoint", "max_iter", 1);

  const json& eq = cfg["equilibria"];
  ck.integer(eq, "equilibria", "period", 2);
  if (eq["period"].is_number_integer() && eq["period"] != 2 && eq["period"] != 4) ck.add("equilibria.period", "must be 2 or 4");
  ck.number(eq, "equilibria", "lo");
  ck.number(eq, "equilibria", "hi");
  ck.integer(eq, "equilibria", "points", 2);

  const json& sm = cfg["sim"];
  ck.integer(sm, "sim", "M", 8);
  ck.positive(sm, "sim", "dt");
  ck.positive(sm, "sim", "T");
  ck.integer(sm, "sim", "stride", 1);
  if (!sm["position"].is_null()) ck.number(sm, "sim", "position");
  ck.positive(sm, "sim", "width");
  ck.number(sm, "sim", "level");
  if (ck.number(sm, "sim", "window") && !(sm["window"].get<double>() > 0.0 && sm["window"].get<double>() <= 1.0))
    ck.add("sim.window", "must lie in (0, 1]");
  ck.one_of(sm, "sim", "locator", {"crossing", "mass"});
  ck.positive(sm, "sim", "profile_h");

  if (ck.number(cfg["tails"], "tails", "window") &&
      !(cfg["tails"]["window"].get<double>() > 0.0 && cfg["tails"]["window"].get<double>() <= 1.0))
    ck.add("tails.window", "must lie in (0, 1]");

  const json& sw = cfg["sweep"];
  if (!sw["parameter"].is_string()) ck.add("sweep.parameter", "must be a string");
  if (!sw["values"].is_array()) ck.add("sweep.values", "must be a list of numbers");
  else if (command == "sweep" && sw["values"].empty()) ck.add("sweep.values", "must not be empty");

  if (!cfg["output"]["directory"].is_string()) ck.add("output.directory", "must be a string");

  // model construction and grid commensurability
  if (v.errors.empty()) {
    try {
      ModelContext mc = build_model(cfg);
      if (raw.contains("grid") || required_blocks(command).count("grid")) {
        try {
          grid_from(cfg, mc.system);
        } catch (const Error& e) {
          ck.add("grid.h", e.what());
        }
      }
      if (command == "simulate" && !mc.has_lattice) ck.add("model.family", "'" + family + "' has no lattice form to simulate");
      if (command == "fixed-point" && !mc.has_perturbation)
        ck.add("model.family", "'" + family + "' has no eps-perturbation split");
    } catch (const Error& e) {
      ck.add("model", e.what());
    }
  }
  if (v.errors.empty()) v.config = cfg;
  return v;
}

Validation validate_text(const std::string& text, const std::string& command) {
  json raw;
  try {
    raw = json::parse(text);
  } catch (const json::parse_error& e) {
    Validation v;
    v.errors.push_back(std::string("$: invalid JSON: ") + e.what());
    return v;
  }
  return validate(raw, command);
}

void apply_override(json& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw Error(ErrorKind::Config, "override '" + assignment + "' must look like path.to.field=value");
  const std::string path = assignment.substr(0, eq), text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  json* node = &config;
  std::stringstream ss(path);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].empty()) throw Error(ErrorKind::Config, "override path '" + path + "' has an empty component");
    if (!node->is_object()) *node = json::object();
    node = &(*node)[parts[i]];
  }
  *node = value;
}

std::string config_hash(const json& normalized) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : normalized.dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

ModelContext build_model(const json& config) {
  const json& m = config.at("model");
  ModelContext mc;
  mc.family = m.at("family").get<std::string>();
  const std::string& f = mc.family;
  if (f == "nagumo") {
    const double d1 = m["d1"], d2 = m["d2"], a = m["a"];
    mc.eps = m["eps"];
    mc.perturbed = nagumo_perturbed(d1, d2, a);
    mc.has_perturbation = true;
    mc.system = mc.perturbed.at(mc.eps);
    mc.lattice = build_nagumo(d1, mc.eps * d2, a);
    mc.has_lattice = true;
  } else if (f == "scaled_nagumo") {
    mc.eps = m["eps"];
    mc.system = scaled_nagumo(m["d1"], m["d2"], m["a"], mc.eps);
  } else if (f == "two_site") {
    const double d1 = m["d1"], d2 = m["d2"], a = m["a"];
    const auto list = find_two_periodic_equilibria(d1, a);
    const PeriodicState minus = state_from(m["minus"], list, true, "minus");
    const PeriodicState plus = state_from(m["plus"], list, false, "plus");
    const TwoSiteSystem ts = two_site_transform(d1, d2, a, minus, plus);
    mc.eps = m["eps"];
    mc.perturbed = two_site_perturbed(ts);
    mc.has_perturbation = true;
    mc.system = mc.perturbed.at(mc.eps);
    mc.lattice = ts.lattice(mc.eps);
    mc.has_lattice = true;
    mc.provenance = {{"minus", state_json(ts.minus)},
                     {"plus", state_json(ts.plus)},
                     {"d_e", ts.d_e},
                     {"d_o", ts.d_o},
                     {"f_e", {{"k", ts.f_e.k}, {"a", ts.f_e.a}}},
                     {"f_o", {{"k", ts.f_o.k}, {"a", ts.f_o.a}}},
                     {"printed_a_e", ts.printed_a_e},
                     {"printed_a_o", ts.printed_a_o},
                     {"discrepancy", ts.discrepancy},
                     {"positive_couplings", ts.positive_couplings()},
                     {"bistable", ts.bistable()}};
  } else if (f == "four_site") {
    const double d1 = m["d1"], d2 = m["d2"], a = m["a"];
    PeriodicState minus, plus;
    const bool homog = m["minus"] == "auto" && m["plus"] == "auto";
    if (homog && d1 == 0.0) {
      minus = PeriodicState{4, {0.0, 0.0, 0.0, 0.0}};
      plus = PeriodicState{4, {1.0, 1.0, 1.0, 1.0}};
    } else {
      const auto list = find_four_periodic_equilibria(d1, d2, a);
      minus = state_from(m["minus"], list, true, "minus");
      plus = state_from(m["plus"], list, false, "plus");
    }
    const FourSiteSystem fs = four_site_transform(d1, d2, a, minus, plus);
    const FourSiteSplit split = m["split"] == "all_d1" ? FourSiteSplit::AllD1 : FourSiteSplit::Printed;
    mc.eps = m["eps"];
    mc.perturbed = four_site_perturbed(fs, split);
    mc.has_perturbation = true;
    mc.system = mc.perturbed.at(mc.eps);
    if (mc.eps == 1.0) {
      mc.lattice = fs.transformed;
      mc.has_lattice = true;
    }
    json viol = json::array();
    for (const auto& [q, r, c] : fs.quasipositivity_violations()) viol.push_back({q, r, c});
    mc.provenance = {{"minus", state_json(fs.minus)},
                     {"plus", state_json(fs.plus)},
                     {"quasipositivity_violations", viol},
                     {"lattice", model_json(fs.transformed)}};
  } else if (f == "periodic") {
    LatticeModel lm;
    lm.period = m["period"];
    for (const auto& c : m["couplings"]) lm.add_coupling(c[0].get<int>(), c[1].get<int>(), c[2].get<double>());
    for (const auto& c : m["cubics"]) lm.cubics.push_back({c["k"].get<double>(), c["a"].get<double>()});
    lm.metadata = "periodic table";
    mc.system = wave_system(lm);
    mc.lattice = lm;
    mc.has_lattice = true;
  } else if (f == "infinite_range") {
    KernelFamily k;
    k.name = m["kernel"];
    k.q = m["q"];
    k.scale = m["scale"];
    k.declared_certificate = m["certificate"];
    for (const auto& e : m["table"]) k.table[e.at(0).get<int>()] = e.at(1).get<double>();
    k.cubic = CubicNonlinearity{m["cubic_k"].get<double>(), m["a"].get<double>()};
    const InfiniteRangeModel ir = build_infinite_range(k, m["k0"], m["k_num"], m["lambda_max"]);
    mc.eps = m["eps"];
    mc.perturbed = infinite_range_perturbed(ir);
    mc.has_perturbation = true;
    mc.system = mc.perturbed.at(mc.eps);
    mc.lattice = combine(ir.base, ir.tail_model(), mc.eps);
    mc.has_lattice = true;
    mc.tail_bound = 2.0 * std::abs(mc.eps) * ir.certificate;
    mc.provenance = {{"certificate", ir.certificate}, {"k0", ir.k0}, {"k_num", ir.k_num}};
  } else {
    throw Error(ErrorKind::Config, "model.family: unknown family '" + f + "'");
  }
  if (mc.has_lattice && !mc.provenance.contains("lattice")) mc.provenance["lattice"] = model_json(mc.lattice);
  return mc;
}

SystemFamily model_family(const json& config, const std::string& parameter) {
  const json& m = config.at("model");
  if (!m.contains(parameter) || !m[parameter].is_number() || parameter == "family")
    throw Error(ErrorKind::Config, "continuation.parameter: model field '" + parameter + "' is not a numeric field of the '" +
                                       m["family"].get<std::string>() + "' model");
  if (m["family"] == "scaled_nagumo" && parameter == "eps")
    throw Error(ErrorKind::Config, "continuation.parameter: the scaled operator's eps moves the shifts off the grid");
  return [config, parameter](double value) {
    json c = config;
    c["model"][parameter] = value;
    return build_model(c).system;
  };
}

Grid grid_from(const json& config, const WaveSystem& system) {
  const json& g = config.at("grid");
  return make_grid(g["L"].get<double>(), g["h"].get<double>(), system.shifts());
}

NewtonOptions newton_from(const json& config) {
  const json& s = config.at("solver");
  NewtonOptions o;
  o.tol = s["tol"];
  o.max_iter = s["max_iter"];
  o.max_halvings = s["max_halvings"];
  o.tail_tol = s["tail_tol"];
  return o;
}

ContinuationOptions continuation_from(const json& config, double tail_bound) {
  const json& c = config.at("continuation");
  ContinuationOptions o;
  o.step0 = c["step0"];
  o.step_min = c["step_min"];
  o.grow = c["grow"];
  o.step_max = c["step_max"];
  o.hyperbolic_tol = config["hyperbolic"]["tol"];
  o.hyperbolic_points = config["hyperbolic"]["points"];
  o.tail_bound = tail_bound;
  o.check_kernel = config["solver"]["kernel_check"];
  o.newton = newton_from(config);
  return o;
}

}  // namespace latfront
