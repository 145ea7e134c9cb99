#include "driftfuse.h"

#include <string>

#include "driftfuse/config.hpp"
#include "driftfuse/pipeline.hpp"
#include "driftfuse/runner.hpp"

namespace {

thread_local std::string g_last_error;

df_status fail(df_status status, const char* what) {
  g_last_error = what;
  return status;
}

template <typename Fn>
df_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return DF_OK;
  } catch (const driftfuse::InvalidInputError& e) {
    return fail(DF_ERR_INVALID_ARGUMENT, e.what());
  } catch (const driftfuse::ConfigError& e) {
    return fail(DF_ERR_CONFIG, e.what());
  } catch (const driftfuse::DataError& e) {
    return fail(DF_ERR_DATA, e.what());
  } catch (const std::exception& e) {
    return fail(DF_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(DF_ERR_INTERNAL, "unknown error");
  }
}

driftfuse::RunOverrides to_overrides(const df_run_options* options) {
  driftfuse::RunOverrides overrides;
  if (options) {
    if (options->has_seed) {
      overrides.seed = options->seed;
    }
    if (options->trials > 0) {
      overrides.trials = options->trials;
    }
    overrides.parallel = options->parallel > 0 ? options->parallel : 1;
  }
  return overrides;
}

bool null_arg(const void* p) { return p == nullptr; }

}  // namespace

struct df_pipeline {
  driftfuse::EstimatorPipeline impl;
};

extern "C" {

const char* df_status_name(df_status status) {
  switch (status) {
    case DF_OK:
      return "ok";
    case DF_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case DF_ERR_CONFIG:
      return "configuration error";
    case DF_ERR_DATA:
      return "data error";
    case DF_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* df_last_error(void) { return g_last_error.c_str(); }

df_status df_simulate(const char* config_path, const char* out_dir,
                      const df_run_options* options) {
  if (null_arg(config_path) || null_arg(out_dir)) {
    return fail(DF_ERR_INVALID_ARGUMENT, "config_path and out_dir required");
  }
  return guarded([&] {
    driftfuse::cmd_simulate(config_path, out_dir, to_overrides(options));
  });
}

df_status df_sweep(const char* config_path, const char* grid_path,
                   const char* out_dir, const df_run_options* options) {
  if (null_arg(config_path) || null_arg(grid_path) || null_arg(out_dir)) {
    return fail(DF_ERR_INVALID_ARGUMENT,
                "config_path, grid_path and out_dir required");
  }
  return guarded([&] {
    driftfuse::cmd_sweep(config_path, grid_path, out_dir,
                         to_overrides(options));
  });
}

df_status df_replay(const char* log_dir, const char* config_path,
                    const char* out_dir) {
  if (null_arg(log_dir) || null_arg(out_dir)) {
    return fail(DF_ERR_INVALID_ARGUMENT, "log_dir and out_dir required");
  }
  return guarded([&] {
    driftfuse::cmd_replay(log_dir, config_path ? config_path : "", out_dir);
  });
}

df_status df_pipeline_create(const char* config_path, df_pipeline** out) {
  if (null_arg(config_path) || null_arg(out)) {
    return fail(DF_ERR_INVALID_ARGUMENT, "config_path and out required");
  }
  return guarded([&] {
    const driftfuse::PipelineParams params =
        driftfuse::load_pipeline_params(config_path);
    *out = new df_pipeline{driftfuse::EstimatorPipeline(params)};
  });
}

df_status df_pipeline_create_default(df_pipeline** out) {
  if (null_arg(out)) {
    return fail(DF_ERR_INVALID_ARGUMENT, "out required");
  }
  return guarded([&] {
    *out = new df_pipeline{
        driftfuse::EstimatorPipeline(driftfuse::PipelineParams{})};
  });
}

void df_pipeline_destroy(df_pipeline* pipeline) { delete pipeline; }

df_status df_pipeline_on_imu(df_pipeline* pipeline,
                             const df_imu_sample* sample) {
  if (null_arg(pipeline) || null_arg(sample)) {
    return fail(DF_ERR_INVALID_ARGUMENT, "pipeline and sample required");
  }
  return guarded([&] {
    driftfuse::ImuSample s;
    s.t = sample->t;
    s.channels = {sample->roll, sample->pitch, sample->roll_rate,
                  sample->pitch_rate};
    pipeline->impl.on_imu(s);
  });
}

df_status df_pipeline_on_odometry(df_pipeline* pipeline,
                                  const df_odometry* sample,
                                  df_fused_state* fused) {
  if (null_arg(pipeline) || null_arg(sample)) {
    return fail(DF_ERR_INVALID_ARGUMENT, "pipeline and sample required");
  }
  return guarded([&] {
    driftfuse::OdometrySample s;
    s.t = sample->t;
    s.pose.position = driftfuse::Vec3(sample->position[0], sample->position[1],
                                      sample->position[2]);
    s.pose.orientation = driftfuse::Quat(
        sample->orientation_wxyz[0], sample->orientation_wxyz[1],
        sample->orientation_wxyz[2], sample->orientation_wxyz[3]);
    s.velocity_body =
        driftfuse::Vec3(sample->velocity_body[0], sample->velocity_body[1],
                        sample->velocity_body[2]);
    s.angular_velocity_body = driftfuse::Vec3(sample->angular_velocity_body[0],
                                              sample->angular_velocity_body[1],
                                              sample->angular_velocity_body[2]);
    const driftfuse::FusedState out = pipeline->impl.on_odometry(s);
    if (fused) {
      for (int i = 0; i < 3; ++i) {
        fused->position[i] = out.position(i);
        fused->orientation_rpy[i] = out.orientation_rpy(i);
        fused->velocity_world[i] = out.velocity_world(i);
        fused->angular_velocity_body[i] = out.body_rates(i);
      }
    }
  });
}

df_status df_pipeline_on_landmark(df_pipeline* pipeline,
                                  const df_landmark* measurement,
                                  int* accepted) {
  if (null_arg(pipeline) || null_arg(measurement)) {
    return fail(DF_ERR_INVALID_ARGUMENT, "pipeline and measurement required");
  }
  return guarded([&] {
    driftfuse::LandmarkMeasurement m;
    m.t = measurement->t;
    m.position = driftfuse::Vec3(measurement->position[0],
                                 measurement->position[1],
                                 measurement->position[2]);
    m.yaw = measurement->yaw;
    m.confidence = measurement->confidence;
    const auto report = pipeline->impl.on_landmark(m);
    if (accepted) {
      *accepted = report.accepted() ? 1 : 0;
    }
  });
}

df_status df_pipeline_drift_state(const df_pipeline* pipeline, double mean[8],
                                  double covariance[64]) {
  if (null_arg(pipeline) || null_arg(mean)) {
    return fail(DF_ERR_INVALID_ARGUMENT, "pipeline and mean required");
  }
  return guarded([&] {
    const driftfuse::DriftState& state = pipeline->impl.drift();
    for (int i = 0; i < 8; ++i) {
      mean[i] = state.mean(i);
    }
    if (covariance) {
      for (int r = 0; r < 8; ++r) {
        for (int c = 0; c < 8; ++c) {
          covariance[r * 8 + c] = state.covariance(r, c);
        }
      }
    }
  });
}

}  // extern "C"
