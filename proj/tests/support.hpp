#pragma once

// Helpers shared by the unit tests and the acceptance runner.

#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <Eigen/Dense>

#include "ddvv/immersion.hpp"
#include "ddvv/sampling.hpp"

namespace ddvv::testing {

/// Random smooth expression text; sqrt only sees arguments bounded away from 0.
inline std::string random_expression(CounterRng& rng, int depth) {
  const double pick = rng.uniform();
  if (depth == 0 || pick < 0.2) {
    const int v = static_cast<int>(rng.uniform() * 4);
    if (v == 3) return std::to_string(rng.uniform(-2.0, 2.0));
    return "u" + std::to_string(v + 1);
  }
  const std::string a = random_expression(rng, depth - 1);
  const std::string b = random_expression(rng, depth - 1);
  const int op = static_cast<int>(rng.uniform() * 9);
  switch (op) {
    case 0: return "(" + a + " + " + b + ")";
    case 1: return "(" + a + " - " + b + ")";
    case 2: return "(" + a + " * " + b + ")";
    case 3: return "(" + a + ") / (2 + sin(" + b + "))";
    case 4: return "sin(" + a + ")";
    case 5: return "cos(" + a + ")";
    case 6: return "exp(0.5 * sin(" + a + "))";
    case 7: return "sqrt(1.5 + cos(" + a + "))";
    default: return "(" + a + ")^2";
  }
}

using ScalarField = std::function<double(std::array<double, 3>)>;

/// 6th-order central first-difference stencil composed along the requested
/// axes, Richardson-extrapolated over h and h/2.
inline double fd_partial(const ScalarField& f, std::array<double, 3> p, const std::array<int, 3>& alpha, double h) {
  static const double w[7] = {-1.0 / 60, 9.0 / 60, -45.0 / 60, 0.0, 45.0 / 60, -9.0 / 60, 1.0 / 60};
  std::vector<int> axes;
  for (int v = 0; v < 3; ++v)
    for (int k = 0; k < alpha[v]; ++k) axes.push_back(v);
  std::function<double(std::array<double, 3>, std::size_t, double)> rec = [&](std::array<double, 3> q, std::size_t i,
                                                                               double step) {
    if (i == axes.size()) return f(q);
    double s = 0.0;
    for (int j = 0; j < 7; ++j) {
      if (w[j] == 0.0) continue;
      auto r = q;
      r[axes[i]] += (j - 3) * step;
      s += w[j] * rec(r, i + 1, step);
    }
    return s / step;
  };
  const double d1 = rec(p, 0, h), d2 = rec(p, 0, h / 2);
  return (64.0 * d2 - d1) / 63.0;
}

/// Random symmetric trace-free m x m matrix with entries of unit scale.
inline Eigen::MatrixXd random_tracefree(CounterRng& rng, int m) {
  Eigen::MatrixXd a(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) a(i, j) = rng.normal();
  a = 0.5 * (a + a.transpose()).eval();
  a -= (a.trace() / m) * Eigen::MatrixXd::Identity(m, m);
  return a;
}

/// x in the upper half (x6 > 0) of S^5 mapped to H^5 by y = (1, x1..x5) / x6.
inline ImmersionSpec sphere_to_hyperbolic(const ImmersionSpec& s, Box domain) {
  auto map = s.map;
  return make_immersion(s.name + "-hyp", AmbientModel::hyperbolic(), domain, [map](const auto& u) {
    using T = typename std::decay_t<decltype(u)>::value_type;
    const std::vector<T> x = (*map)(u);
    const T inv = 1.0 / x[5];
    std::vector<T> y{inv};
    for (int k = 0; k < 5; ++k) y.push_back(x[k] * inv);
    return y;
  });
}

/// Stereographic projection from (0, ..., 0, 1): x -> (x1..x5) / (1 - x6).
inline ImmersionSpec sphere_to_euclidean(const ImmersionSpec& s, Box domain) {
  auto map = s.map;
  return make_immersion(s.name + "-euc", AmbientModel::euclidean(), domain, [map](const auto& u) {
    using T = typename std::decay_t<decltype(u)>::value_type;
    const std::vector<T> x = (*map)(u);
    const T inv = 1.0 / (1.0 - x[5]);
    std::vector<T> y;
    for (int k = 0; k < 5; ++k) y.push_back(x[k] * inv);
    return y;
  });
}

/// stdout of a shell command and its exit status.
struct Captured {
  std::string out;
  int status = -1;
};

inline Captured run_capture(const std::string& cmd) {
  Captured c;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return c;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) c.out.append(buf, n);
  const int st = pclose(p);
  c.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return c;
}

}  // namespace ddvv::testing
