#include "gonodyn/operators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace gonodyn {

namespace {

// sum_{i,p} theta_{ipk} x_i y_p for every k; the shared core of all levels.
void bilinear_rows(const HeredityTensor& t, std::span<const double> x, std::span<const double> y,
                   std::span<double> out) {
  const int n = t.n;
  std::fill(out.begin(), out.end(), 0.0);
  const double* theta = t.theta.data();
  for (int i = 0; i < n; ++i) {
    for (int p = 0; p < n; ++p) {
      const double w = x[static_cast<size_t>(i)] * y[static_cast<size_t>(p)];
      if (w == 0.0) {
        theta += n;
        continue;
      }
      for (int k = 0; k < n; ++k) out[static_cast<size_t>(k)] += theta[k] * w;
      theta += n;
    }
  }
}

}  // namespace

GonosomalOperator::GonosomalOperator(HeredityTensor theta_in, MixingRate rate_in)
    : theta(checked_tensor(std::move(theta_in))), rate(rate_in) {}

FullState apply_full(const GonosomalOperator& op, const FullState& z) {
  const double sx = z.sum_x();
  const double sy = z.sum_y();
  if (sx == 0.0 || sy == 0.0) throw ZeroSexMass("one sex has zero total mass");
  const int n = op.size();
  std::vector<double> s(static_cast<size_t>(n));
  bilinear_rows(op.theta, z.x, z.y, s);
  const double denom = sx * sy;
  std::vector<double> x(static_cast<size_t>(n));
  std::vector<double> y(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double share = s[static_cast<size_t>(k)] / denom;
    x[static_cast<size_t>(k)] = op.rate.a * share;
    y[static_cast<size_t>(k)] = op.rate.b * share;
  }
  return FullState::unchecked(std::move(x), std::move(y));
}

FullState apply_restricted(const GonosomalOperator& op, const FullState& z) {
  constexpr double kSliceTol = 1e-9;
  if (std::abs(z.sum_x() - op.rate.a) > kSliceTol || std::abs(z.sum_y() - op.rate.b) > kSliceTol) {
    std::ostringstream os;
    os << "state is off the slice: sum x = " << z.sum_x() << ", sum y = " << z.sum_y()
       << ", expected " << op.rate.a << " / " << op.rate.b;
    throw NotInSa(os.str());
  }
  const int n = op.size();
  std::vector<double> s(static_cast<size_t>(n));
  bilinear_rows(op.theta, z.x, z.y, s);
  std::vector<double> x(static_cast<size_t>(n));
  std::vector<double> y(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    x[static_cast<size_t>(k)] = s[static_cast<size_t>(k)] / op.rate.b;
    y[static_cast<size_t>(k)] = s[static_cast<size_t>(k)] / op.rate.a;
  }
  return FullState::unchecked(std::move(x), std::move(y));
}

ReducedState apply_reduced(const GonosomalOperator& op, const ReducedState& x) {
  const int n = op.size();
  std::vector<double> s(static_cast<size_t>(n));
  bilinear_rows(op.theta, x.x, x.x, s);
  // Rescale to the exact budget; the image sum is (sum x)^2 / a, so rounding
  // drift would otherwise double on every iteration.
  double total = 0.0;
  for (double sk : s) total += sk;
  if (total > 0.0 && total != x.a) {
    const double scale = x.a / total;
    for (auto& sk : s) sk *= scale;
  }
  return ReducedState::unchecked(std::move(s), x.a);
}

NormalizedState apply_normalized(const GonosomalOperator& op, const NormalizedState& u) {
  std::vector<double> out(u.u.size());
  step_normalized(op.theta, u.u, out);
  return NormalizedState::unchecked(std::move(out));
}

void apply_normalized_raw(const HeredityTensor& t, std::span<const double> u,
                          std::span<double> out) {
  bilinear_rows(t, u, u, out);
}

void step_normalized(const HeredityTensor& t, std::span<const double> u, std::span<double> out) {
  bilinear_rows(t, u, u, out);
  double total = 0.0;
  for (double v : out) total += v;
  if (total != 1.0 && total > 0.0) {
    for (auto& v : out) v /= total;
  }
}

Eigen::MatrixXd jacobian_normalized_raw(const HeredityTensor& t, std::span<const double> u) {
  const int n = t.n;
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    for (int m = 0; m < n; ++m) {
      double acc = 0.0;
      for (int q = 0; q < n; ++q) {
        acc += t.at(m, q, k) * u[static_cast<size_t>(q)];
        acc += t.at(q, m, k) * u[static_cast<size_t>(q)];
      }
      jac(k, m) = acc;
    }
  }
  return jac;
}

Eigen::MatrixXd jacobian_normalized(const GonosomalOperator& op, const NormalizedState& u) {
  return jacobian_normalized_raw(op.theta, u.u);
}

QuadraticMap1D::QuadraticMap1D(double theta1_in, double theta2_in, double theta3_in, double a_in)
    : theta1(theta1_in), theta2(theta2_in), theta3(theta3_in), a(a_in) {
  if (!(theta1 >= 0.0 && theta1 <= 1.0) || !(theta2 >= 0.0 && theta2 <= 2.0) ||
      !(theta3 >= 0.0 && theta3 <= 1.0)) {
    std::ostringstream os;
    os << "effective coefficients (" << theta1 << "," << theta2 << "," << theta3
       << ") leave the realizable box [0,1]x[0,2]x[0,1]";
    throw InvalidState(os.str());
  }
  if (!(a > 0.0 && a < 1.0) && a != 1.0) {
    // a = 1 is allowed for the bare scalar map (unit budget); anything else
    // outside (0,1) is meaningless.
    throw InvalidState("mass budget must lie in (0,1]");
  }
}

QuadraticMap1D QuadraticMap1D::from_tensor(const HeredityTensor& t, const MixingRate& rate) {
  if (t.n != 2) throw InvalidState("scalar map requires a two-type tensor");
  return QuadraticMap1D(t.at(0, 0, 0), t.at(0, 1, 0) + t.at(1, 0, 0), t.at(1, 1, 0), rate.a);
}

double t_apply(const QuadraticMap1D& map, double x1) {
  return (map.theta1 + map.theta3 - map.theta2) / map.a * x1 * x1 +
         (map.theta2 - 2.0 * map.theta3) * x1 + map.theta3 * map.a;
}

double t_derivative(const QuadraticMap1D& map, double x1) {
  return 2.0 * (map.theta1 + map.theta3 - map.theta2) / map.a * x1 + map.theta2 -
         2.0 * map.theta3;
}

HeredityTensor build_c1(int n, const std::vector<TensorEntry>& entries) {
  auto t = HeredityTensor::zeros(n);
  std::vector<char> touched(static_cast<size_t>(n) * n, 0);
  for (const auto& e : entries) {
    if (e.i < 0 || e.i >= n || e.p < 0 || e.p >= n || e.k < 0 || e.k >= n)
      throw IndexOutOfRange("C1 entry index outside 1..n");
    if (e.k != e.i && e.k != e.p) {
      std::ostringstream os;
      os << "C1 entry (" << e.i + 1 << "," << e.p + 1 << "," << e.k + 1
         << "): offspring type outside {mother, father}";
      throw BadPattern(os.str());
    }
    if (std::abs(e.value - 0.5) <= kInputTol) {
      std::ostringstream os;
      os << "C1 entry (" << e.i + 1 << "," << e.p + 1 << "," << e.k + 1 << ") equals 1/2";
      throw HalfForbidden(os.str());
    }
    t.at(e.i, e.p, e.k) = e.value;
    touched[static_cast<size_t>(e.i * n + e.p)] = 1;
  }
  // Diagonal pairs have a single admissible offspring type.
  for (int i = 0; i < n; ++i) {
    if (!touched[static_cast<size_t>(i * n + i)]) t.at(i, i, i) = 1.0;
  }
  return checked_tensor(std::move(t));
}

HeredityTensor build_c2(int n, int m, const std::vector<std::vector<std::vector<double>>>& cross,
                        const std::optional<std::vector<std::vector<std::vector<double>>>>& mirror) {
  if (m < 2 || m > n - 1) {
    std::ostringstream os;
    os << "partition boundary m = " << m << " must satisfy 2 <= m <= n-1 (n = " << n << ")";
    throw BadPartition(os.str());
  }
  const int nf = m - 1;  // |F|
  const int nm = n - m;  // |M|
  auto expect_dims = [&](const std::vector<std::vector<std::vector<double>>>& block, int rows,
                         int cols, const char* name) {
    if (static_cast<int>(block.size()) != rows)
      throw InvalidState(std::string(name) + " block has the wrong number of female rows");
    for (const auto& r : block) {
      if (static_cast<int>(r.size()) != cols)
        throw InvalidState(std::string(name) + " block has the wrong number of male columns");
      for (const auto& row : r)
        if (static_cast<int>(row.size()) != n)
          throw InvalidState(std::string(name) + " block rows must have length n");
    }
  };
  expect_dims(cross, nf, nm, "cross");
  if (mirror) expect_dims(*mirror, nm, nf, "mirror");

  auto t = HeredityTensor::zeros(n);
  auto in_f1 = [&](int idx) { return idx <= m - 1; };  // F union {1}, 0-based idx <= m-1
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const bool same_block = (in_f1(i) && in_f1(j)) || ((i == 0 || i >= m) && (j == 0 || j >= m));
      if (same_block) {
        t.at(i, j, 0) = 1.0;
      } else if (i >= 1 && i <= m - 1) {  // i in F, j in M
        const auto& row = cross[static_cast<size_t>(i - 1)][static_cast<size_t>(j - m)];
        for (int k = 0; k < n; ++k) t.at(i, j, k) = row[static_cast<size_t>(k)];
      } else {  // i in M, j in F: explicit mirror or transpose of the cross block
        const auto& row = mirror
                              ? (*mirror)[static_cast<size_t>(i - m)][static_cast<size_t>(j - 1)]
                              : cross[static_cast<size_t>(j - 1)][static_cast<size_t>(i - m)];
        for (int k = 0; k < n; ++k) t.at(i, j, k) = row[static_cast<size_t>(k)];
      }
    }
  }
  const auto report = validate_tensor(t);
  if (!report.pass) {
    std::ostringstream os;
    os << "C2 cross block violates stochasticity at " << report.violations.size() << " row(s)";
    throw NotStochastic(os.str());
  }
  return t;
}

HeredityTensor build_c3(double c) {
  if (!(c >= 0.0 && c <= 1.0)) throw InvalidState("C3 parameter c must lie in [0,1]");
  const double d = 1.0 - c;
  auto t = HeredityTensor::zeros(3);
  // Unit coefficients reproducing the displayed three-variable system.
  t.at(0, 0, 2) = 1.0;
  t.at(0, 1, 2) = 1.0;
  t.at(1, 0, 2) = 1.0;
  t.at(1, 1, 2) = 1.0;
  t.at(0, 2, 1) = 1.0;
  t.at(2, 0, 1) = 1.0;
  t.at(1, 2, 0) = 1.0;
  t.at(2, 1, 0) = 1.0;
  t.at(2, 2, 0) = c;
  t.at(2, 2, 1) = d;
  return checked_tensor(std::move(t));
}

UOperator build_u(int n, int j, int l) {
  if (n < 1 || j < 0 || j >= n || l < 0 || l >= n)
    throw IndexOutOfRange("funnel map indices must lie in 1..n");
  auto t = HeredityTensor::zeros(n);
  for (int i = 0; i < n; ++i) {
    for (int p = 0; p < n; ++p) {
      if (p == j) {
        t.at(i, p, i) = 1.0;  // c_{ik} = delta_{ik}
      } else {
        t.at(i, p, l) = 1.0;
      }
    }
  }
  return UOperator{n, j, l, checked_tensor(std::move(t))};
}

ReducedState apply_u(const UOperator& op, const ReducedState& x) {
  if (static_cast<int>(x.x.size()) != op.n)
    throw InvalidState("state dimension does not match the funnel map");
  // The ratio is formed once so x_j = a gives exactly 1 and vertex starts
  // remain bitwise fixed.
  const double r = x.x[static_cast<size_t>(op.j)] / x.a;
  std::vector<double> out(x.x.size());
  for (size_t k = 0; k < out.size(); ++k) out[k] = x.x[k] * r;
  out[static_cast<size_t>(op.l)] =
      x.x[static_cast<size_t>(op.l)] * r + (x.a - x.x[static_cast<size_t>(op.j)]);
  return ReducedState::unchecked(std::move(out), x.a);
}

}  // namespace gonodyn
