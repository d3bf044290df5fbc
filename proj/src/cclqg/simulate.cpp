#include "cclqg/simulate.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

#include "cclqg/errors.hpp"

namespace cclqg {

namespace {

constexpr std::uint64_t kEnvTag = 0x656e76ULL;
constexpr std::uint64_t kAgentTag = 0x6167656e74ULL;
constexpr int kChunk = 256;  // fixed trajectory chunk, part of the determinism contract

class AgentPredictor final : public Predictor {
 public:
  AgentPredictor(LinearGaussianAgent agent, std::vector<double> losses, double constant_loss)
      : agent_(std::move(agent)), losses_(std::move(losses)), constant_loss_(constant_loss) {}

  class AgentRun final : public Run {
   public:
    explicit AgentRun(const LinearGaussianAgent& agent)
        : agent_(agent), state_(initial_agent_state(agent)) {}
    Vector step(const Vector& y, GaussianStream& rng) override {
      return agent_step(agent_, state_, y, rng);
    }

   private:
    const LinearGaussianAgent& agent_;
    AgentState state_;
  };

  std::unique_ptr<Run> begin() const override { return std::make_unique<AgentRun>(agent_); }

  double analytic_loss(int t) const override {
    if (losses_.empty()) return constant_loss_;
    if (t < 1 || t > static_cast<int>(losses_.size()))
      raise(ErrorCode::StepOutOfRange, "no analytic loss for this step");
    return losses_[static_cast<std::size_t>(t - 1)];
  }

  int horizon_limit() const override { return agent_.horizon; }

 private:
  LinearGaussianAgent agent_;
  std::vector<double> losses_;
  double constant_loss_;
};

class DirectPredictor final : public Predictor {
 public:
  DirectPredictor(const LqgSystem& system, std::vector<Matrix> f, std::vector<Matrix> psi_root,
                  std::vector<double> losses, double constant_loss)
      : system_(system),
        f_(std::move(f)),
        psi_root_(std::move(psi_root)),
        losses_(std::move(losses)),
        constant_loss_(constant_loss) {}

  class DirectRun final : public Run {
   public:
    explicit DirectRun(const DirectPredictor& owner)
        : owner_(owner), fs_(initial_filter_state(owner.system_)) {}

    Vector step(const Vector& y, GaussianStream& rng) override {
      fs_ = filter_step(fs_, y, owner_.system_);
      std::size_t j = owner_.f_.size() == 1 ? 0 : static_cast<std::size_t>(fs_.t - 1);
      if (j >= owner_.f_.size()) raise(ErrorCode::StepOutOfRange, "stepped past the gain schedule");
      return owner_.f_[j] * fs_.mean + owner_.psi_root_[j] * rng.vector(fs_.mean.size());
    }

   private:
    const DirectPredictor& owner_;
    FilterState fs_;
  };

  std::unique_ptr<Run> begin() const override { return std::make_unique<DirectRun>(*this); }

  double analytic_loss(int t) const override {
    if (losses_.empty()) return constant_loss_;
    if (t < 1 || t > static_cast<int>(losses_.size()))
      raise(ErrorCode::StepOutOfRange, "no analytic loss for this step");
    return losses_[static_cast<std::size_t>(t - 1)];
  }

  int horizon_limit() const override {
    return losses_.empty() ? 0 : static_cast<int>(losses_.size());
  }

 private:
  LqgSystem system_;
  std::vector<Matrix> f_;
  std::vector<Matrix> psi_root_;
  std::vector<double> losses_;
  double constant_loss_;
};

struct Welford {
  long count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    double d = x - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (x - mean);
  }

  void merge(const Welford& o) {
    if (o.count == 0) return;
    if (count == 0) {
      *this = o;
      return;
    }
    double d = o.mean - mean;
    long total = count + o.count;
    mean += d * static_cast<double>(o.count) / static_cast<double>(total);
    m2 += o.m2 + d * d * static_cast<double>(count) * static_cast<double>(o.count) /
                     static_cast<double>(total);
    count = total;
  }
};

}  // namespace

std::unique_ptr<Predictor> make_agent_predictor(LinearGaussianAgent agent,
                                                std::vector<double> losses) {
  return std::make_unique<AgentPredictor>(std::move(agent), std::move(losses), 0.0);
}

std::unique_ptr<Predictor> make_agent_predictor(LinearGaussianAgent agent, double constant_loss) {
  return std::make_unique<AgentPredictor>(std::move(agent), std::vector<double>{}, constant_loss);
}

std::unique_ptr<Predictor> make_direct_predictor(const LqgSystem& system,
                                                 PredictorSchedule schedule,
                                                 const Tolerances& tols) {
  std::vector<Matrix> f, root;
  f.reserve(schedule.gains.size());
  root.reserve(schedule.gains.size());
  for (const ChannelGains& g : schedule.gains) {
    f.push_back(g.f);
    root.push_back(sqrt_psd(g.psi, tols));
  }
  return std::make_unique<DirectPredictor>(system, std::move(f), std::move(root), schedule.loss,
                                           0.0);
}

std::unique_ptr<Predictor> make_direct_predictor(const LqgSystem& system, ChannelGains gains,
                                                 double constant_loss, const Tolerances& tols) {
  std::vector<Matrix> f{gains.f};
  std::vector<Matrix> root{sqrt_psd(gains.psi, tols)};
  return std::make_unique<DirectPredictor>(system, std::move(f), std::move(root),
                                           std::vector<double>{}, constant_loss);
}

int default_burn_in(const LqgSystem& system) {
  double rho = spectral_radius(system.a);
  if (rho >= 1.0) raise(ErrorCode::Unstable, "no mixing time for an unstable system");
  int mixing = static_cast<int>(std::ceil(1.0 / (1.0 - rho)));
  return std::max(10 * mixing, 200);
}

EmpiricalReport run_experiment(const LqgSystem& system, const Predictor& predictor, int horizon,
                               int n, std::uint64_t seed, int burn_in, const Tolerances& tols) {
  if (horizon < 1 || n < 1) raise(ErrorCode::InvalidArgument, "horizon and count must be positive");
  if (burn_in < 0 || burn_in >= horizon)
    raise(ErrorCode::InvalidArgument, "burn-in must lie inside the horizon");
  if (predictor.horizon_limit() != 0 && horizon > predictor.horizon_limit())
    raise(ErrorCode::StepOutOfRange, "horizon exceeds the predictor's schedule");

  const Eigen::Index d = system.dim();
  const Eigen::Index m = system.obs_dim();
  const Matrix root0 = sqrt_psd(system.sigma0, tols);
  const Matrix rootw = sqrt_psd(system.sw, tols);
  const Matrix rootv = sqrt_psd(system.sv, tols);

  const int chunks = (n + kChunk - 1) / kChunk;
  std::vector<std::vector<Welford>> step_stats(static_cast<std::size_t>(chunks),
                                               std::vector<Welford>(static_cast<std::size_t>(horizon)));
  std::vector<Welford> avg_stats(static_cast<std::size_t>(chunks));

  std::atomic<int> next_chunk{0};
  auto worker = [&]() {
    Vector theta(d), y(m), noise_in(d), err(d);
    for (;;) {
      int c = next_chunk.fetch_add(1);
      if (c >= chunks) return;
      std::vector<Welford>& steps = step_stats[static_cast<std::size_t>(c)];
      Welford& avg = avg_stats[static_cast<std::size_t>(c)];
      const int lo = c * kChunk;
      const int hi = std::min(n, lo + kChunk);
      for (int i = lo; i < hi; ++i) {
        GaussianStream env(derive_seed(seed, kEnvTag, static_cast<std::uint64_t>(i)));
        GaussianStream agent_rng(derive_seed(seed, kAgentTag, static_cast<std::uint64_t>(i)));
        std::unique_ptr<Predictor::Run> run = predictor.begin();
        theta.noalias() = root0 * env.vector(d);
        double measured_sum = 0.0;
        for (int t = 1; t <= horizon; ++t) {
          noise_in.noalias() = rootw * env.vector(d);
          theta = system.a * theta + noise_in;
          y.noalias() = system.c * theta + rootv * env.vector(m);
          Vector pred = run->step(y, agent_rng);
          err = theta - pred;
          double sq = err.squaredNorm();
          steps[static_cast<std::size_t>(t - 1)].add(sq);
          if (t > burn_in) measured_sum += sq;
        }
        avg.add(measured_sum / static_cast<double>(horizon - burn_in));
      }
    }
  };

  unsigned hw = std::thread::hardware_concurrency();
  int nthreads = std::max(1, std::min<int>(chunks, hw ? static_cast<int>(hw) : 1));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }

  std::vector<Welford> steps(static_cast<std::size_t>(horizon));
  Welford avg;
  for (int c = 0; c < chunks; ++c) {
    for (int t = 0; t < horizon; ++t)
      steps[static_cast<std::size_t>(t)].merge(step_stats[static_cast<std::size_t>(c)][static_cast<std::size_t>(t)]);
    avg.merge(avg_stats[static_cast<std::size_t>(c)]);
  }

  EmpiricalReport report;
  report.n = n;
  report.horizon = horizon;
  report.burn_in = burn_in;
  report.seed = seed;
  report.analytic.resize(horizon);
  report.empirical.resize(horizon);
  report.se.resize(horizon);
  double analytic_sum = 0.0;
  for (int t = 1; t <= horizon; ++t) {
    const Welford& w = steps[static_cast<std::size_t>(t - 1)];
    report.analytic[t - 1] = predictor.analytic_loss(t);
    report.empirical[t - 1] = w.mean;
    report.se[t - 1] = w.count > 1 ? std::sqrt(w.m2 / static_cast<double>(w.count - 1) /
                                               static_cast<double>(w.count))
                                   : 0.0;
    if (t > burn_in) analytic_sum += report.analytic[t - 1];
  }
  report.timeavg_analytic = analytic_sum / static_cast<double>(horizon - burn_in);
  report.timeavg_empirical = avg.mean;
  report.timeavg_se = avg.count > 1 ? std::sqrt(avg.m2 / static_cast<double>(avg.count - 1) /
                                                static_cast<double>(avg.count))
                                    : 0.0;
  double gap = report.timeavg_empirical - report.timeavg_analytic;
  report.timeavg_z = report.timeavg_se > 0.0 ? gap / report.timeavg_se : (gap == 0.0 ? 0.0 : INFINITY);
  return report;
}

CompareResult compare(const EmpiricalReport& report, double tol_sigma) {
  CompareResult out;
  out.tol_sigma = tol_sigma;
  out.worst_step = 0;
  out.worst_z = 0.0;
  for (int t = report.burn_in + 1; t <= report.horizon; ++t) {
    double se = report.se[t - 1];
    double gap = report.empirical[t - 1] - report.analytic[t - 1];
    double z = se > 0.0 ? gap / se : (gap == 0.0 ? 0.0 : INFINITY);
    if (std::abs(z) > std::abs(out.worst_z) || out.worst_step == 0) {
      out.worst_z = z;
      out.worst_step = t;
    }
  }
  out.pass = std::abs(out.worst_z) <= tol_sigma;
  return out;
}

void write_report_csv(const EmpiricalReport& report, std::ostream& os) {
  os << "step,analytic,empirical,se,z\n";
  char buf[160];
  for (int t = 1; t <= report.horizon; ++t) {
    double se = report.se[t - 1];
    double gap = report.empirical[t - 1] - report.analytic[t - 1];
    double z = se > 0.0 ? gap / se : (gap == 0.0 ? 0.0 : INFINITY);
    std::snprintf(buf, sizeof buf, "%d,%.12g,%.12g,%.12g,%.6g\n", t, report.analytic[t - 1],
                  report.empirical[t - 1], se, z);
    os << buf;
  }
}

}  // namespace cclqg
