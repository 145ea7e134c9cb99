#pragma once

// Test-only dense Kalman filter over the 8-state drift layout, written with
// plain arrays and loops. It shares no code with the library implementation
// so the two can check each other.

#include <cmath>
#include <cstring>

namespace oracle {

inline void mat_mul(const double* a, const double* b, double* out, int n,
                    int m, int p) {
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) {
      double sum = 0.0;
      for (int k = 0; k < m; ++k) {
        sum += a[i * m + k] * b[k * p + j];
      }
      out[i * p + j] = sum;
    }
  }
}

inline void mat_transpose(const double* a, double* out, int n, int m) {
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      out[j * n + i] = a[i * m + j];
    }
  }
}

// Gauss-Jordan with partial pivoting; returns false on a singular matrix.
inline bool mat_invert(const double* a_in, double* inv, int n) {
  double a[16 * 16];
  std::memcpy(a, a_in, sizeof(double) * n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      inv[i * n + j] = (i == j) ? 1.0 : 0.0;
    }
  }
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int row = col + 1; row < n; ++row) {
      if (std::fabs(a[row * n + col]) > std::fabs(a[pivot * n + col])) {
        pivot = row;
      }
    }
    if (std::fabs(a[pivot * n + col]) < 1e-300) {
      return false;
    }
    if (pivot != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(a[col * n + j], a[pivot * n + j]);
        std::swap(inv[col * n + j], inv[pivot * n + j]);
      }
    }
    const double diag = a[col * n + col];
    for (int j = 0; j < n; ++j) {
      a[col * n + j] /= diag;
      inv[col * n + j] /= diag;
    }
    for (int row = 0; row < n; ++row) {
      if (row == col) {
        continue;
      }
      const double factor = a[row * n + col];
      if (factor == 0.0) {
        continue;
      }
      for (int j = 0; j < n; ++j) {
        a[row * n + j] -= factor * a[col * n + j];
        inv[row * n + j] -= factor * inv[col * n + j];
      }
    }
  }
  return true;
}

struct Kalman8 {
  double x[8] = {};
  double p[64] = {};

  void predict(const double a[64], const double q[64]) {
    double ax[8];
    for (int i = 0; i < 8; ++i) {
      double sum = 0.0;
      for (int k = 0; k < 8; ++k) {
        sum += a[i * 8 + k] * x[k];
      }
      ax[i] = sum;
    }
    std::memcpy(x, ax, sizeof ax);

    double ap[64], at[64], apat[64];
    mat_mul(a, p, ap, 8, 8, 8);
    mat_transpose(a, at, 8, 8);
    mat_mul(ap, at, apat, 8, 8, 8);
    for (int i = 0; i < 64; ++i) {
      p[i] = apat[i] + q[i];
    }
  }

  // Measurement of (x, y, z, yaw) at state indices (0, 2, 4, 6).
  void correct(const double z[4], const double r[16]) {
    static const int idx[4] = {0, 2, 4, 6};

    double s[16];
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        s[i * 4 + j] = p[idx[i] * 8 + idx[j]] + r[i * 4 + j];
      }
    }
    double s_inv[16];
    mat_invert(s, s_inv, 4);

    double pht[32];  // 8x4: columns of P at the measured indices
    for (int i = 0; i < 8; ++i) {
      for (int j = 0; j < 4; ++j) {
        pht[i * 4 + j] = p[i * 8 + idx[j]];
      }
    }
    double gain[32];
    mat_mul(pht, s_inv, gain, 8, 4, 4);

    double innovation[4];
    for (int i = 0; i < 4; ++i) {
      innovation[i] = z[i] - x[idx[i]];
    }
    for (int i = 0; i < 8; ++i) {
      double sum = 0.0;
      for (int j = 0; j < 4; ++j) {
        sum += gain[i * 4 + j] * innovation[j];
      }
      x[i] += sum;
    }

    double hp[32];  // 4x8: rows of P at the measured indices
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 8; ++j) {
        hp[i * 8 + j] = p[idx[i] * 8 + j];
      }
    }
    double ghp[64];
    mat_mul(gain, hp, ghp, 8, 4, 8);
    for (int i = 0; i < 64; ++i) {
      p[i] -= ghp[i];
    }
  }
};

}  // namespace oracle
