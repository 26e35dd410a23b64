#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "latfront/bvp.hpp"
#include "latfront/continuation.hpp"
#include "latfront/model.hpp"

namespace latfront {

using json = nlohmann::json;

// Defaults for every block; `validate` fills missing fields from here.
json default_config();

struct Validation {
  json config;                      // normalized (defaults filled); empty when errors is nonempty
  std::vector<std::string> errors;  // "path: message"
  bool ok() const { return errors.empty(); }
};

// Every violation is listed. `command` (may be empty) adds the per-command required blocks.
Validation validate(const json& raw, const std::string& command = "");
Validation validate_text(const std::string& text, const std::string& command = "");

// Applies "a.b.c=value"; the value is parsed as JSON when possible, otherwise kept as a string.
void apply_override(json& config, const std::string& assignment);

std::string config_hash(const json& normalized);

// Model construction from a normalized config.
struct ModelContext {
  std::string family;
  WaveSystem system;                // at the configured eps
  bool has_lattice = false;
  LatticeModel lattice;             // for time integration and periodic tail rates
  bool has_perturbation = false;
  PerturbedSystem perturbed;        // reference (eps = 0) and perturbation
  double eps = 1.0;
  double tail_bound = 0.0;          // infinite-range truncation, added to hyperbolicity tolerances
  json provenance;
};

ModelContext build_model(const json& config);
// Same model with one field of the model block replaced (continuation in a model parameter).
SystemFamily model_family(const json& config, const std::string& parameter);

Grid grid_from(const json& config, const WaveSystem& system);
NewtonOptions newton_from(const json& config);
ContinuationOptions continuation_from(const json& config, double tail_bound);

}  // namespace latfront
