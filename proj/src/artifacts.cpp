#include "latfront/artifacts.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace latfront {

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::InvalidInput, "cannot write " + path.string());
  f << text;
  if (!f) throw Error(ErrorKind::InvalidInput, "write failed for " + path.string());
}

json vec_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json entry_json(const HyperbolicityEntry& e) {
  return {{"end", to_string(e.end)},     {"adjoint", e.adjoint}, {"verdict", e.verdict}, {"min_modulus", e.min_modulus},
          {"theta_at_min", e.theta_at_min}, {"Theta", e.Theta},   {"tol", e.tol}};
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << v;
  return os.str();
}

ArtifactWriter::ArtifactWriter(std::filesystem::path dir, const json& config)
    : dir_(std::move(dir)), hash_(config_hash(config)), config_(config) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw Error(ErrorKind::InvalidInput, "cannot create output directory " + dir_.string() + ": " + ec.message());
}

std::filesystem::path ArtifactWriter::csv(const std::string& name, const std::string& header,
                                          const std::vector<std::vector<double>>& rows) const {
  std::string text = "# latfront " + std::string(kVersion) + " config_hash=" + hash_ + "\n" + header + "\n";
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) text += ',';
      text += format_number(row[j]);
    }
    text += '\n';
  }
  const auto path = dir_ / name;
  write_text(path, text);
  return path;
}

std::filesystem::path ArtifactWriter::json_file(const std::string& name, json body) const {
  body["meta"] = {{"version", kVersion}, {"config_hash", hash_}, {"config", config_}};
  const auto path = dir_ / name;
  write_text(path, body.dump(2) + "\n");
  return path;
}

std::filesystem::path ArtifactWriter::profile(const std::string& name, const Vec& xi, const Profile& values) const {
  std::string header = "xi";
  for (int p = 0; p < values.cols(); ++p) header += ",u" + std::to_string(p + 1);
  std::vector<std::vector<double>> rows;
  rows.reserve(static_cast<std::size_t>(xi.size()));
  for (int i = 0; i < xi.size(); ++i) {
    std::vector<double> r{xi(i)};
    for (int p = 0; p < values.cols(); ++p) r.push_back(values(i, p));
    rows.push_back(std::move(r));
  }
  return csv(name, header, rows);
}

json to_json(const PeriodicState& s) { return {{"period", s.period}, {"values", s.values}, {"residual", s.residual}}; }

json to_json(const LatticeModel& m) {
  json c = json::array();
  for (const auto& [key, v] : m.couplings) c.push_back({key.first, key.second, v});
  json cubics = json::array();
  for (const auto& g : m.cubics) cubics.push_back({{"k", g.k}, {"a", g.a}});
  return {{"period", m.period}, {"couplings", c}, {"cubics", cubics}};
}

json to_json(const HyperbolicityReport& r) {
  json e = json::array();
  for (const auto& x : r.entries) e.push_back(entry_json(x));
  return {{"verdict", r.verdict}, {"min_modulus", r.min_modulus}, {"theta_at_min", r.theta_at_min}, {"tol", r.tol},
          {"entries", e}};
}

json to_json(const WaveSolution& s) {
  return {{"c", s.c},
          {"residual_norm", s.residual_norm},
          {"newton_iters", s.newton_iters},
          {"L", s.grid.L},
          {"h", s.grid.h},
          {"nodes", s.grid.n},
          {"phase", {{"component", s.phase.component}, {"level", s.phase.level}, {"location", s.phase.location}}},
          {"pinning_suspected", s.pinning_suspected}};
}

json to_json(const KernelData& k) {
  return {{"kernel_dim_estimate", k.kernel_dim},
          {"oscillatory_dim", k.oscillatory_dim},
          {"smallest_singular_values", vec_json(k.smallest)},
          {"largest_singular_value", k.largest},
          {"restricted_smallest", k.restricted_smallest},
          {"plus_residual", k.plus_residual}};
}

json to_json(const FixedPointState& s) {
  return {{"c", s.c_current},
          {"iterations", s.history.size()},
          {"contraction_ratio", s.contraction_ratio},
          {"delta_hat", s.delta_hat},
          {"C0_estimate", s.C0_estimate},
          {"K0", s.K0},
          {"K1", s.K1},
          {"K2", s.K2},
          {"M", s.M},
          {"max_psi_norm", s.max_psi_norm},
          {"max_orthogonality", s.max_orthogonality},
          {"max_plus_overlap", s.max_plus_overlap}};
}

json to_json(const SpeedMeasurement& s) {
  return {{"c", s.c},     {"fit_residual", s.fit_residual}, {"t_a", s.t_a}, {"t_b", s.t_b},
          {"level", s.level}, {"locator", s.locator == Locator::Crossing ? "crossing" : "mass"}};
}

json to_json(const TailReport& r) {
  json j = {{"lambda0", r.lambda0},
            {"lambda1", r.lambda1},
            {"method", r.method},
            {"eigvec0", vec_json(r.eigvec0)},
            {"eigvec1", vec_json(r.eigvec1)}};
  if (r.has_fit) {
    j["fit"] = {{"minus", {{"rate", r.fit0.rate}, {"R2", r.fit0.r2}, {"points", r.fit0.points}}},
                {"plus", {{"rate", r.fit1.rate}, {"R2", r.fit1.r2}, {"points", r.fit1.points}}}};
  }
  return j;
}

json to_json(const ContinuationBranch& b) {
  json steps = json::array();
  // last parameter of the leading run of accepted, monotone profiles
  json monotone_up_to = nullptr;
  bool still_monotone = true;
  for (const auto& s : b.steps) {
    json h = s.hyperbolicity.entries.empty() ? json(nullptr) : to_json(s.hyperbolicity);
    const bool monotone = s.profile.size() > 0 && check_monotonicity(s.profile).monotone;
    if (s.accepted && still_monotone && monotone) monotone_up_to = s.param;
    else if (s.accepted) still_monotone = false;
    steps.push_back({{b.parameter, s.param},
                     {"c", s.c},
                     {"newton_iters", s.newton_iters},
                     {"residual_norm", s.residual_norm},
                     {"phase_location", s.phase_location},
                     {"kernel_dim", s.kernel_dim},
                     {"accepted", s.accepted},
                     {"monotone", monotone},
                     {"hyperbolicity", h}});
  }
  return {{"parameter", b.parameter}, {"stop_reason", to_string(b.stop_reason)}, {"message", b.message},
          {"reached", b.reached()},   {"monotone_up_to", monotone_up_to}, {"steps", steps}};
}

std::vector<std::vector<double>> branch_rows(const ContinuationBranch& b) {
  std::vector<std::vector<double>> rows;
  for (const auto& s : b.steps) {
    const double m = s.hyperbolicity.entries.empty() ? std::numeric_limits<double>::quiet_NaN() : s.hyperbolicity.min_modulus;
    rows.push_back({s.param, s.c, static_cast<double>(s.newton_iters), m, static_cast<double>(s.kernel_dim)});
  }
  return rows;
}

std::vector<std::vector<double>> history_rows(const FixedPointState& s) {
  std::vector<std::vector<double>> rows;
  for (const auto& r : s.history) rows.push_back({static_cast<double>(r.iter), r.step_norm, r.c, r.lambda_hat});
  return rows;
}

std::vector<std::vector<double>> trajectory_rows(const Trajectory& t) {
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < t.snapshots.size(); ++k)
    for (std::size_t n = 0; n < t.snapshots[k].size(); ++n)
      rows.push_back({t.times[k], static_cast<double>(n), t.snapshots[k][n]});
  return rows;
}

}  // namespace latfront
