#pragma once

#include <string>
#include <vector>

#include "cclqg/system.hpp"

namespace cclqg {

/// Parsed experiment description. See README for the JSON schema.
struct ExperimentConfig {
  SystemStructure structure;
  Sigma0Mode sigma0_mode = Sigma0Mode::Stationary;
  std::vector<double> grid;  // capacities in `unit`
  std::string unit = "nats";
  int horizon = 1000;
  int n = 10000;
  std::uint64_t seed = 1729;
  int burn_in = -1;  // -1: use the default policy
  std::string mode = "steady";
  double tol_sigma = 4.0;
  std::string out_dir = "out";
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

/// Converts a capacity value from the config unit to nats.
double capacity_to_nats(double value, const std::string& unit);

/// The capacity grid in nats.
std::vector<double> grid_nats(const ExperimentConfig& config);

/// Shrinks a full-size experiment: divides every multiplicity and every grid
/// value by k (multiplicities are rounded and floored at 1). Per-subsystem
/// budgets are invariant under this scaling.
ExperimentConfig apply_scale(const ExperimentConfig& config, int k);

LqgSystem build_system(const ExperimentConfig& config, const Tolerances& tols = default_tols());

}  // namespace cclqg
