#pragma once

// Counter-based uniform sampling: the k-th draw depends only on (seed, k),
// so sample plans are reproducible across platforms and execution orders.

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace ddvv {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Uniform double in [0, 1) for stream `seed`, counter `k`.
inline double uniform01(std::uint64_t seed, std::uint64_t k) {
  const std::uint64_t h = splitmix64(splitmix64(seed) ^ (k * 0xd1b54a32d192ed03ULL));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double v) const { return lo <= v && v <= hi; }
};

using Box = std::array<Interval, 3>;
using ChartPoint = std::array<double, 3>;

inline ChartPoint box_center(const Box& b) { return {b[0].mid(), b[1].mid(), b[2].mid()}; }

inline bool box_contains(const Box& b, const ChartPoint& p) {
  return b[0].contains(p[0]) && b[1].contains(p[1]) && b[2].contains(p[2]);
}

/// `count` points drawn uniformly from the box.
inline std::vector<ChartPoint> sample_box(const Box& box, int count, std::uint64_t seed) {
  std::vector<ChartPoint> pts;
  pts.reserve(count > 0 ? count : 0);
  for (int i = 0; i < count; ++i) {
    ChartPoint p;
    for (int a = 0; a < 3; ++a) {
      const double t = uniform01(seed, 3 * static_cast<std::uint64_t>(i) + a);
      p[a] = box[a].lo + t * (box[a].hi - box[a].lo);
    }
    pts.push_back(p);
  }
  return pts;
}

/// Counter-based stream with a running index, for test and gallery generators.
class CounterRng {
public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}
  double uniform() { return uniform01(seed_, k_++); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

private:
  std::uint64_t seed_;
  std::uint64_t k_ = 0;
};

}  // namespace ddvv
