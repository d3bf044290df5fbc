#pragma once

#include <string>
#include <vector>

#include "cclqg/agent.hpp"

namespace cclqg {

/// Closed-form stationary quantities of a scalar system
/// theta' = a theta + w, y = c theta + v with Var w = s2w, Var v = s2v.
struct ScalarSteady {
  double sigma = 0.0;
  double p = 0.0;
  double m = 0.0;
};

ScalarSteady scalar_steady(double a, double c, double s2w, double s2v);

/// Capacity split over independent scalar subsystems with weights
/// w_i = sigma_i - m_i: minimizes sum_i e^{-2 b_i} w_i subject to
/// sum b_i = capacity, b_i >= 0.
struct ScalarAllocation {
  Vector budgets;
  double distortion = 0.0;
  double eta = 0.0;
  bool infinite = false;
};

ScalarAllocation allocate(const Vector& weights, double capacity,
                          const Tolerances& tols = default_tols());

/// Stationary summary of one distinct group of a structured system.
struct SubsystemSummary {
  std::string label;
  Eigen::Index dim = 0;
  int mult = 0;
  SteadyState steady;
  Vector weights;        // eigenvalues of sigma - m for one block, descending
  Matrix weight_basis;   // matching eigenvectors
  double trace_sigma = 0.0;
  double trace_m = 0.0;
};

/// Capacity split across a structured system, one water level shared by
/// every eigenvalue of every block, with stationary realizability checked
/// per distinct group.
struct GroupAllocation {
  std::string label;
  Eigen::Index dim = 0;
  int mult = 0;
  Vector budgets;            // nats per block eigenvalue (one block)
  double block_budget = 0.0; // sum over one block
  double total_budget = 0.0; // mult * block_budget
  bool feasible = false;
  SsConditionReport report;
};

struct AllocationResult {
  double capacity = 0.0;  // nats, whole system
  double eta = 0.0;
  bool infinite = false;
  double distortion = 0.0;
  double cost = 0.0;      // sum mult * tr(m_block) + distortion
  double capacity_used = 0.0;
  bool feasible = false;  // every group passes its stationary conditions
  std::vector<GroupAllocation> groups;
};

std::vector<SubsystemSummary> summarize_groups(const LqgSystem& system,
                                               const Tolerances& tols = default_tols());

AllocationResult allocate_blocks(const LqgSystem& system, double capacity,
                                 const Tolerances& tols = default_tols());

AllocationResult allocate_blocks(const std::vector<SubsystemSummary>& groups, double capacity,
                                 const Tolerances& tols = default_tols());

}  // namespace cclqg
