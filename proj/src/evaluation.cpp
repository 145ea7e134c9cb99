#include "driftfuse/evaluation.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace driftfuse {

namespace {
double wrapped_angle_norm(const Vec3& a, const Vec3& b) {
  const double dr = wrap_angle(a.x() - b.x());
  const double dp = wrap_angle(a.y() - b.y());
  const double dy = wrap_angle(a.z() - b.z());
  return std::sqrt(dr * dr + dp * dp + dy * dy);
}
}  // namespace

ErrorSeries state_errors(std::span<const State12> estimate,
                         std::span<const State12> gt) {
  if (estimate.size() != gt.size()) {
    throw InvalidInputError("error series length mismatch");
  }
  ErrorSeries out;
  out.position.reserve(estimate.size());
  out.orientation.reserve(estimate.size());
  out.velocity.reserve(estimate.size());
  out.angular_rate.reserve(estimate.size());
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    out.position.push_back((estimate[i].position - gt[i].position).norm());
    out.orientation.push_back(wrapped_angle_norm(estimate[i].euler, gt[i].euler));
    out.velocity.push_back((estimate[i].velocity - gt[i].velocity).norm());
    out.angular_rate.push_back((estimate[i].rates - gt[i].rates).norm());
  }
  return out;
}

GroupStats aggregate(std::span<const double> errors) {
  if (errors.empty()) {
    throw InvalidInputError("cannot aggregate an empty error series");
  }
  GroupStats s;
  double sum = 0.0, sum_sq = 0.0;
  for (double e : errors) {
    sum += e;
    sum_sq += e * e;
    s.max_error = std::max(s.max_error, e);
  }
  const double n = static_cast<double>(errors.size());
  s.mean = sum / n;
  s.rmse = std::sqrt(sum_sq / n);
  s.stddev = std::sqrt(std::max(sum_sq / n - s.mean * s.mean, 0.0));
  return s;
}

ErrorStats aggregate(const ErrorSeries& series) {
  return {aggregate(std::span<const double>(series.position)),
          aggregate(std::span<const double>(series.orientation)),
          aggregate(std::span<const double>(series.velocity)),
          aggregate(std::span<const double>(series.angular_rate))};
}

RunStats compute_run_stats(const RunLog& log) {
  std::vector<State12> gt, fused, vio;
  gt.reserve(log.rows.size());
  fused.reserve(log.rows.size());
  vio.reserve(log.rows.size());
  for (const RunLogRow& row : log.rows) {
    gt.push_back(row.gt);
    fused.push_back(row.fused);
    vio.push_back(vio_world_state(row.vio));
  }
  return {aggregate(state_errors(fused, gt)), aggregate(state_errors(vio, gt))};
}

void SweepGrid::validate() const {
  if (delays.empty() || position_noises.empty() || yaw_noises.empty()) {
    throw ConfigError("sweep grid lists must be non-empty");
  }
  if (trials < 1) {
    throw ConfigError("sweep grid needs at least one trial per cell");
  }
  if (paired && position_noises.size() != yaw_noises.size()) {
    throw ConfigError("paired sweep requires noise lists of equal length");
  }
  for (double d : delays) {
    if (!(d >= 0.0)) {
      throw ConfigError("sweep delays must be >= 0");
    }
  }
}

SweepResult run_sweep(const SweepGrid& grid, const ScenarioConfig& base,
                      int parallel) {
  grid.validate();
  base.validate();

  struct CellSpec {
    double delay, sigma_p, sigma_yaw;
  };
  std::vector<CellSpec> cells;
  for (double delay : grid.delays) {
    if (grid.paired) {
      for (std::size_t i = 0; i < grid.position_noises.size(); ++i) {
        cells.push_back({delay, grid.position_noises[i], grid.yaw_noises[i]});
      }
    } else {
      for (double sp : grid.position_noises) {
        for (double sy : grid.yaw_noises) {
          cells.push_back({delay, sp, sy});
        }
      }
    }
  }

  struct TrialResult {
    std::array<double, 4> fused{};
    std::array<double, 4> vio{};
  };
  const std::size_t trial_count = cells.size() * grid.trials;
  std::vector<TrialResult> results(trial_count);
  std::exception_ptr failure;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};

  auto worker = [&]() {
    for (;;) {
      const std::size_t job = next.fetch_add(1);
      if (job >= trial_count || failed.load()) {
        return;
      }
      const std::size_t cell = job / grid.trials;
      const std::size_t trial = job % grid.trials;
      try {
        ScenarioConfig config = base;
        config.detector.latency = cells[cell].delay;
        config.detector.position_stddev = cells[cell].sigma_p;
        config.detector.yaw_stddev = cells[cell].sigma_yaw;
        config.seed = derive_seed(base.seed, cell, trial);
        const RunStats stats = compute_run_stats(run_scenario(config));
        results[job] = {
            {stats.fused.position.rmse, stats.fused.orientation.rmse,
             stats.fused.velocity.rmse, stats.fused.angular_rate.rmse},
            {stats.vio.position.rmse, stats.vio.orientation.rmse,
             stats.vio.velocity.rmse, stats.vio.angular_rate.rmse}};
      } catch (...) {
        if (!failed.exchange(true)) {
          failure = std::current_exception();
        }
        return;
      }
    }
  };

  const int workers = std::max(1, parallel);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int i = 0; i < workers; ++i) {
      pool.emplace_back(worker);
    }
    for (std::thread& th : pool) {
      th.join();
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }

  SweepResult out;
  out.trials = grid.trials;
  out.cells.reserve(cells.size());
  for (std::size_t cell = 0; cell < cells.size(); ++cell) {
    SweepCell c;
    c.delay = cells[cell].delay;
    c.sigma_p = cells[cell].sigma_p;
    c.sigma_yaw = cells[cell].sigma_yaw;
    for (int trial = 0; trial < grid.trials; ++trial) {
      const TrialResult& r = results[cell * grid.trials + trial];
      for (int g = 0; g < 4; ++g) {
        c.fused_rmse[g] += r.fused[g] / grid.trials;
        c.vio_rmse[g] += r.vio[g] / grid.trials;
      }
      c.seeds.push_back(derive_seed(base.seed, cell, trial));
    }
    out.cells.push_back(std::move(c));
  }
  return out;
}

}  // namespace driftfuse
