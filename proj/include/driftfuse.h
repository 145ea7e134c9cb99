/*
 * driftfuse — VIO drift estimation and full-state sensor fusion for
 * fast-moving vehicles, plus the Monte-Carlo evaluation harness.
 *
 * C interface of the shared library. All functions return a df_status;
 * on failure df_last_error() carries a human-readable message for the
 * calling thread.
 */
#ifndef DRIFTFUSE_H
#define DRIFTFUSE_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#ifndef DF_API
#define DF_API __attribute__((visibility("default")))
#endif

typedef enum df_status {
  DF_OK = 0,
  DF_ERR_INVALID_ARGUMENT = 1, /* bad values fed to an operation */
  DF_ERR_CONFIG = 2,           /* bad parameters or config/track files */
  DF_ERR_DATA = 3,             /* malformed logs or I/O failure */
  DF_ERR_INTERNAL = 4
} df_status;

DF_API const char *df_status_name(df_status status);

/* Message for the most recent failure on this thread; empty when none. */
DF_API const char *df_last_error(void);

/* ------------------------------------------------------------------ */
/* Batch commands (the CLI is a thin wrapper around these).            */

typedef struct df_run_options {
  int has_seed;  /* nonzero: seed replaces the config value */
  uint64_t seed;
  int trials;    /* > 0: replaces the grid's trials-per-cell */
  int parallel;  /* worker threads for sweeps; <= 0 means 1 */
} df_run_options;

/* Simulates one scenario; writes run.csv, measurements.csv, imu.csv,
 * fused.csv, summary.csv and replay.cfg into out_dir. */
DF_API df_status df_simulate(const char *config_path, const char *out_dir,
                             const df_run_options *options);

/* Runs the delay x noise grid; writes sweep.csv, seeds.csv and sweep.md.
 * Output is byte-identical for a given config and seed regardless of the
 * parallel worker count. */
DF_API df_status df_sweep(const char *config_path, const char *grid_path,
                          const char *out_dir, const df_run_options *options);

/* Replays logged streams through the estimator; writes fused.csv (and
 * summary.csv when ground-truth columns are present). A NULL or empty
 * config_path falls back to <log_dir>/replay.cfg. */
DF_API df_status df_replay(const char *log_dir, const char *config_path,
                           const char *out_dir);

/* ------------------------------------------------------------------ */
/* Streaming estimator.                                                */

typedef struct df_pipeline df_pipeline;

typedef struct df_odometry {
  double t;
  double position[3];            /* VIO frame, m */
  double orientation_wxyz[4];    /* unit quaternion, scalar first */
  double velocity_body[3];       /* body frame, m/s */
  double angular_velocity_body[3]; /* body frame, rad/s */
} df_odometry;

typedef struct df_imu_sample {
  double t;
  double roll, pitch;           /* rad */
  double roll_rate, pitch_rate; /* rad/s */
} df_imu_sample;

typedef struct df_landmark {
  double t;           /* exposure timestamp, s */
  double position[3]; /* world frame, m */
  double yaw;         /* rad */
  double confidence;  /* in [0, 1] */
} df_landmark;

typedef struct df_fused_state {
  double position[3];              /* world frame, m */
  double orientation_rpy[3];       /* roll, pitch, yaw, rad */
  double velocity_world[3];        /* m/s */
  double angular_velocity_body[3]; /* p, q, r, rad/s */
} df_fused_state;

/* Creates an estimator from a key-value config file (the same estimator
 * keys a replay config uses), or with default parameters. */
DF_API df_status df_pipeline_create(const char *config_path,
                                    df_pipeline **out);
DF_API df_status df_pipeline_create_default(df_pipeline **out);
DF_API void df_pipeline_destroy(df_pipeline *pipeline);

/* Feed samples in timestamp order; at equal timestamps feed IMU before
 * odometry and landmark fixes after the odometry tick they follow. */
DF_API df_status df_pipeline_on_imu(df_pipeline *pipeline,
                                    const df_imu_sample *sample);

/* Ingests one odometry tick (prediction step) and, when fused is not NULL,
 * returns the corrected state for this tick. */
DF_API df_status df_pipeline_on_odometry(df_pipeline *pipeline,
                                         const df_odometry *sample,
                                         df_fused_state *fused);

/* Processes one landmark fix. When accepted is not NULL it is set to 1 if
 * the measurement was fused and 0 if it was gated out or dropped. */
DF_API df_status df_pipeline_on_landmark(df_pipeline *pipeline,
                                         const df_landmark *measurement,
                                         int *accepted);

/* Copies the drift mean (8 values: x, vx, y, vy, z, vz, yaw, yaw rate) and,
 * when covariance is not NULL, the row-major 8x8 covariance. */
DF_API df_status df_pipeline_drift_state(const df_pipeline *pipeline,
                                         double mean[8], double covariance[64]);

#ifdef __cplusplus
}
#endif

#endif /* DRIFTFUSE_H */
