#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "gonodyn/model.hpp"

namespace gonodyn {

// Deterministic sampling used by claims, sweeps and tests. Raw bits come from
// mt19937_64; the double conversions are hand-rolled so sampled values do not
// depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  double exponential() { return -std::log1p(-uniform01()); }

  // Uniform point of the standard simplex (normalized exponentials).
  std::vector<double> simplex_point(int n) {
    std::vector<double> v(static_cast<size_t>(n));
    double s = 0.0;
    for (auto& vi : v) {
      vi = exponential();
      s += vi;
    }
    for (auto& vi : v) vi /= s;
    return v;
  }

  // Simplex point with every coordinate at least min_coord.
  std::vector<double> interior_simplex_point(int n, double min_coord) {
    for (;;) {
      auto v = simplex_point(n);
      bool ok = true;
      for (double vi : v) ok = ok && vi >= min_coord;
      if (ok) return v;
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Dense tensor with independent uniform-simplex rows.
HeredityTensor random_tensor(int n, Rng& rng);

// Random member of the C1 family: off-diagonal pair weights uniform outside
// the band |v - 1/2| <= half_margin.
HeredityTensor random_c1_tensor(int n, Rng& rng, double half_margin = 0.05);

// Random member of the C2 family for partition boundary m; cross rows are
// uniform simplex rows, and with probability 1/2 an explicit random mirror
// block is supplied instead of the transpose default.
HeredityTensor random_c2_tensor(int n, int m, Rng& rng);

// Random state of S with both sexes present (masses sum to 1).
FullState random_full_state(int n, Rng& rng);

// Random slice state (y = beta x not imposed).
FullState random_slice_state(int n, const MixingRate& rate, Rng& rng);

}  // namespace gonodyn
