#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "latfront/bvp.hpp"
#include "latfront/config.hpp"
#include "latfront/continuation.hpp"
#include "latfront/fixedpoint.hpp"
#include "latfront/mfde.hpp"
#include "latfront/sim.hpp"
#include "latfront/tails.hpp"

namespace latfront {

// Writes CSV and JSON files into one directory. Every file carries the version and config hash:
// CSV files as leading "# " comment lines, JSON files under "meta".
class ArtifactWriter {
 public:
  ArtifactWriter(std::filesystem::path dir, const json& config);

  const std::string& hash() const { return hash_; }
  const std::filesystem::path& directory() const { return dir_; }

  std::filesystem::path csv(const std::string& name, const std::string& header,
                            const std::vector<std::vector<double>>& rows) const;
  std::filesystem::path json_file(const std::string& name, json body) const;
  std::filesystem::path profile(const std::string& name, const Vec& xi, const Profile& values) const;

 private:
  std::filesystem::path dir_;
  std::string hash_;
  json config_;
};

// 17 significant digits, shortest form that round-trips through the same printer.
std::string format_number(double v);

json to_json(const PeriodicState& s);
json to_json(const LatticeModel& m);
json to_json(const HyperbolicityReport& r);
json to_json(const WaveSolution& s);
json to_json(const KernelData& k);
json to_json(const FixedPointState& s);
json to_json(const SpeedMeasurement& s);
json to_json(const TailReport& r);
json to_json(const ContinuationBranch& b);

std::vector<std::vector<double>> branch_rows(const ContinuationBranch& b);
std::vector<std::vector<double>> history_rows(const FixedPointState& s);
std::vector<std::vector<double>> trajectory_rows(const Trajectory& t);

}  // namespace latfront
