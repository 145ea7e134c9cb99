/* Compiled as C: verifies the public header is consumable without C++. */
#include <stdio.h>
#include <string.h>

#include "driftfuse.h"

int main(void) {
  if (strcmp(df_status_name(DF_OK), "ok") != 0) {
    return 1;
  }

  df_pipeline *pipeline = NULL;
  if (df_pipeline_create_default(&pipeline) != DF_OK || pipeline == NULL) {
    fprintf(stderr, "pipeline creation failed: %s\n", df_last_error());
    return 1;
  }

  df_odometry odom;
  memset(&odom, 0, sizeof odom);
  odom.orientation_wxyz[0] = 1.0;

  df_fused_state fused;
  if (df_pipeline_on_odometry(pipeline, &odom, &fused) != DF_OK) {
    fprintf(stderr, "odometry failed: %s\n", df_last_error());
    return 1;
  }
  if (fused.position[0] != 0.0) {
    return 1;
  }

  double mean[8];
  if (df_pipeline_drift_state(pipeline, mean, NULL) != DF_OK) {
    return 1;
  }

  df_pipeline_destroy(pipeline);

  /* NULL arguments must fail cleanly, not crash. */
  if (df_pipeline_on_imu(NULL, NULL) != DF_ERR_INVALID_ARGUMENT) {
    return 1;
  }
  printf("ok\n");
  return 0;
}
