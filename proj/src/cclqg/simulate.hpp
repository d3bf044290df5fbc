#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

#include "cclqg/agent.hpp"

namespace cclqg {

/// A prediction strategy that can be run along sampled trajectories. begin()
/// returns a fresh per-trajectory run so experiments can execute in parallel.
class Predictor {
 public:
  class Run {
   public:
    virtual ~Run() = default;
    /// Consumes y_{t+1} and returns the prediction of theta_{t+1}.
    virtual Vector step(const Vector& y, GaussianStream& rng) = 0;
  };

  virtual ~Predictor() = default;
  virtual std::unique_ptr<Run> begin() const = 0;
  /// Expected squared error at step t (1-based).
  virtual double analytic_loss(int t) const = 0;
  /// Largest usable step, 0 when unlimited.
  virtual int horizon_limit() const = 0;
};

/// Wraps a constructed recursion agent. Finite-horizon agents report the
/// schedule losses; stationary agents report the asymptotic cost.
std::unique_ptr<Predictor> make_agent_predictor(LinearGaussianAgent agent,
                                                std::vector<double> losses);
std::unique_ptr<Predictor> make_agent_predictor(LinearGaussianAgent agent, double constant_loss);

/// Oracle-access predictor: runs the exact filter and applies the per-step
/// channel gains to the posterior mean. Valid without any construction
/// conditions.
std::unique_ptr<Predictor> make_direct_predictor(const LqgSystem& system,
                                                 PredictorSchedule schedule,
                                                 const Tolerances& tols = default_tols());
std::unique_ptr<Predictor> make_direct_predictor(const LqgSystem& system, ChannelGains gains,
                                                 double constant_loss,
                                                 const Tolerances& tols = default_tols());

/// Monte Carlo estimate of the per-step squared prediction error.
struct EmpiricalReport {
  int n = 0;
  int horizon = 0;
  int burn_in = 0;
  std::uint64_t seed = 0;
  Vector analytic;   // index t-1 holds step t
  Vector empirical;  // mean squared error across trajectories
  Vector se;         // standard error of the mean
  double timeavg_analytic = 0.0;  // analytic loss averaged over measured steps
  double timeavg_empirical = 0.0;
  double timeavg_se = 0.0;
  double timeavg_z = 0.0;
};

/// Default burn-in policy: max(10 * mixing, 200) steps with
/// mixing = ceil(1 / (1 - spectral radius)).
int default_burn_in(const LqgSystem& system);

/// Samples n trajectories, runs the predictor along each and accumulates
/// per-step and time-averaged error statistics. Deterministic for a fixed
/// seed: every trajectory draws from its own substream and partial results
/// merge in fixed chunk order regardless of thread count.
EmpiricalReport run_experiment(const LqgSystem& system, const Predictor& predictor, int horizon,
                               int n, std::uint64_t seed, int burn_in = 0,
                               const Tolerances& tols = default_tols());

struct CompareResult {
  bool pass = false;
  int worst_step = 0;
  double worst_z = 0.0;
  double tol_sigma = 0.0;
};

/// Checks every measured step's z-score against tol_sigma.
CompareResult compare(const EmpiricalReport& report, double tol_sigma = 4.0);

/// CSV rows: step,analytic,empirical,se,z.
void write_report_csv(const EmpiricalReport& report, std::ostream& os);

}  // namespace cclqg
