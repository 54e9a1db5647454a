#include "gonodyn/rng.hpp"

#include <cmath>

#include "gonodyn/operators.hpp"

namespace gonodyn {

HeredityTensor random_tensor(int n, Rng& rng) {
  auto t = HeredityTensor::zeros(n);
  for (int i = 0; i < n; ++i) {
    for (int p = 0; p < n; ++p) {
      auto row = rng.simplex_point(n);
      for (int k = 0; k < n; ++k) t.at(i, p, k) = row[static_cast<size_t>(k)];
    }
  }
  return t;
}

HeredityTensor random_c1_tensor(int n, Rng& rng, double half_margin) {
  std::vector<TensorEntry> entries;
  for (int i = 0; i < n; ++i) {
    for (int p = 0; p < n; ++p) {
      if (i == p) continue;
      double v;
      do {
        v = rng.uniform01();
      } while (std::abs(v - 0.5) <= half_margin);
      entries.push_back({i, p, i, v});
      entries.push_back({i, p, p, 1.0 - v});
    }
  }
  return build_c1(n, entries);
}

HeredityTensor random_c2_tensor(int n, int m, Rng& rng) {
  const int nf = m - 1;
  const int nm = n - m;
  auto block = [&](int rows, int cols) {
    std::vector<std::vector<std::vector<double>>> b(static_cast<size_t>(rows));
    for (auto& r : b) {
      r.resize(static_cast<size_t>(cols));
      for (auto& row : r) row = rng.simplex_point(n);
    }
    return b;
  };
  const auto cross = block(nf, nm);
  if (rng.uniform01() < 0.5) return build_c2(n, m, cross);
  return build_c2(n, m, cross, block(nm, nf));
}

FullState random_full_state(int n, Rng& rng) {
  std::vector<double> mass(static_cast<size_t>(2 * n));
  double total = 0.0;
  for (auto& v : mass) {
    v = rng.exponential();
    total += v;
  }
  for (auto& v : mass) v /= total;
  std::vector<double> x(mass.begin(), mass.begin() + n);
  std::vector<double> y(mass.begin() + n, mass.end());
  return FullState::unchecked(std::move(x), std::move(y));
}

FullState random_slice_state(int n, const MixingRate& rate, Rng& rng) {
  auto xs = rng.simplex_point(n);
  auto ys = rng.simplex_point(n);
  std::vector<double> x(static_cast<size_t>(n));
  std::vector<double> y(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    x[static_cast<size_t>(k)] = rate.a * xs[static_cast<size_t>(k)];
    y[static_cast<size_t>(k)] = rate.b * ys[static_cast<size_t>(k)];
  }
  return FullState::unchecked(std::move(x), std::move(y));
}

}  // namespace gonodyn
