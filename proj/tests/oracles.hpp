#pragma once

// Independent brute-force implementations used as oracles. These deliberately
// avoid the library's evaluation paths: plain triple loops over the displayed
// sums, no shared helpers.

#include <cmath>
#include <vector>

#include "gonodyn/model.hpp"
#include "gonodyn/operators.hpp"

namespace oracle {

// Full operator by the literal definition: x'_k = a * S_k / (sum x * sum y).
inline void full_step(const gonodyn::HeredityTensor& t, double a,
                      const std::vector<double>& x, const std::vector<double>& y,
                      std::vector<double>& x_out, std::vector<double>& y_out) {
  const int n = t.n;
  double sx = 0.0, sy = 0.0;
  for (double v : x) sx += v;
  for (double v : y) sy += v;
  x_out.assign(static_cast<size_t>(n), 0.0);
  y_out.assign(static_cast<size_t>(n), 0.0);
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int p = 0; p < n; ++p)
        s += t.at(i, p, k) * x[static_cast<size_t>(i)] * y[static_cast<size_t>(p)];
    x_out[static_cast<size_t>(k)] = a * s / (sx * sy);
    y_out[static_cast<size_t>(k)] = (1.0 - a) * s / (sx * sy);
  }
}

// Reduced operator: x'_k = sum_{i,p} theta_{ipk} x_i x_p / a.
inline std::vector<double> reduced_step(const gonodyn::HeredityTensor& t, double a,
                                        const std::vector<double>& x) {
  const int n = t.n;
  std::vector<double> out(static_cast<size_t>(n), 0.0);
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int p = 0; p < n; ++p)
        s += t.at(i, p, k) * x[static_cast<size_t>(i)] * x[static_cast<size_t>(p)];
    out[static_cast<size_t>(k)] = s / a;
  }
  return out;
}

// Normalized operator: u'_k = sum_{i,p} theta_{ipk} u_i u_p.
inline std::vector<double> normalized_step(const gonodyn::HeredityTensor& t,
                                           const std::vector<double>& u) {
  const int n = t.n;
  std::vector<double> out(static_cast<size_t>(n), 0.0);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int p = 0; p < n; ++p)
        out[static_cast<size_t>(k)] += t.at(i, p, k) * u[static_cast<size_t>(i)] * u[static_cast<size_t>(p)];
  return out;
}

// The displayed C3 polynomial system, written out directly.
inline std::vector<double> c3_step(double c, const std::vector<double>& u) {
  const double d = 1.0 - c;
  return {c * u[2] * u[2] + 2.0 * u[1] * u[2],
          d * u[2] * u[2] + 2.0 * u[0] * u[2],
          (u[0] + u[1]) * (u[0] + u[1])};
}

// The literal funnel-map double sum with c_{ik} = delta_{ik}:
// x'_k = x_k x_j / a (k != l), x'_l = (x_l x_j + sum_i sum_{p != j} x_i x_p)/a.
inline std::vector<double> u_literal_step(int n, int j, int l, double a,
                                          const std::vector<double>& x) {
  std::vector<double> out(static_cast<size_t>(n), 0.0);
  for (int k = 0; k < n; ++k) {
    if (k == l) continue;
    out[static_cast<size_t>(k)] = x[static_cast<size_t>(k)] * x[static_cast<size_t>(j)] / a;
  }
  double rest = 0.0;
  for (int i = 0; i < n; ++i)
    for (int p = 0; p < n; ++p)
      if (p != j) rest += x[static_cast<size_t>(i)] * x[static_cast<size_t>(p)];
  out[static_cast<size_t>(l)] =
      (x[static_cast<size_t>(l)] * x[static_cast<size_t>(j)] + rest) / a;
  return out;
}

// Central finite differences of the normalized step.
inline std::vector<std::vector<double>> fd_jacobian(const gonodyn::HeredityTensor& t,
                                                    const std::vector<double>& u, double h) {
  const int n = t.n;
  std::vector<std::vector<double>> jac(static_cast<size_t>(n),
                                       std::vector<double>(static_cast<size_t>(n), 0.0));
  for (int m = 0; m < n; ++m) {
    auto up = u;
    auto um = u;
    up[static_cast<size_t>(m)] += h;
    um[static_cast<size_t>(m)] -= h;
    const auto fp = normalized_step(t, up);
    const auto fm = normalized_step(t, um);
    for (int k = 0; k < n; ++k)
      jac[static_cast<size_t>(k)][static_cast<size_t>(m)] =
          (fp[static_cast<size_t>(k)] - fm[static_cast<size_t>(k)]) / (2.0 * h);
  }
  return jac;
}

inline double linf(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace oracle
