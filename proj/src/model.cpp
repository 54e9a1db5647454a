#include "gonodyn/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace gonodyn {

namespace {

double sum(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw InvalidState(msg);
}

void require_nonnegative(const std::vector<double>& v, const char* what) {
  for (size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] >= 0.0)) {  // also rejects NaN
      std::ostringstream os;
      os << what << "[" << i << "] = " << v[i] << " is negative or not a number";
      throw InvalidState(os.str());
    }
  }
}

}  // namespace

void TemperatureParams::validate() const {
  require(tau1 >= 0.0 && tau2 >= 0.0 && tau3 >= 0.0, "temperature exposures must be nonnegative");
  require(std::abs(tau1 + tau2 + tau3 - 1.0) <= kInputTol,
          "temperature exposures must sum to 1");
  require(std::abs(mu1 + mu1_bar - 1.0) <= kInputTol, "mu1 + mu1_bar must equal 1");
  require(std::abs(mu2 + mu2_bar - 1.0) <= kInputTol, "mu2 + mu2_bar must equal 1");
  require(mu1 >= mu1_bar && mu1_bar >= 0.0, "feminizing environment requires mu1 >= mu1_bar >= 0");
  require(mu2 >= 0.0 && mu2 <= mu2_bar, "masculinizing environment requires 0 <= mu2 <= mu2_bar");
}

MixingRate MixingRate::from_a(double a) { return from_parts(a, 1.0 - a); }

MixingRate MixingRate::from_parts(double a, double b) {
  if (!(a > 0.0) || !(a < 1.0)) {
    std::ostringstream os;
    os << "female fraction a = " << a << " must lie strictly inside (0,1)";
    throw DegenerateRate(os.str());
  }
  if (std::abs(a + b - 1.0) > kInputTol) {
    std::ostringstream os;
    os << "a + b = " << a + b << " deviates from 1 beyond tolerance";
    throw DegenerateRate(os.str());
  }
  return MixingRate{a, b, b / a};
}

MixingRate derive_rates(const TemperatureParams& params) {
  params.validate();
  const double a = params.mu1 * params.tau1 + params.mu2 * params.tau2 + params.tau3 / 2.0;
  const double b =
      params.mu1_bar * params.tau1 + params.mu2_bar * params.tau2 + params.tau3 / 2.0;
  if (!(a > 0.0) || !(a < 1.0)) {
    std::ostringstream os;
    os << "derived female fraction a = " << a << " leaves no room for one sex";
    throw DegenerateRate(os.str());
  }
  return MixingRate::from_parts(a, b);
}

HeredityTensor HeredityTensor::zeros(int n) {
  if (n < 1) throw InvalidState("tensor dimension must be positive");
  HeredityTensor t;
  t.n = n;
  t.theta.assign(static_cast<size_t>(n) * n * n, 0.0);
  return t;
}

TensorValidationReport validate_tensor(const HeredityTensor& t) {
  TensorValidationReport report;
  if (t.n < 1 || t.theta.size() != static_cast<size_t>(t.n) * t.n * t.n) {
    report.pass = false;
    report.violations.push_back({-1, -1, 0.0, 0.0});
    return report;
  }
  report.min_entry = *std::min_element(t.theta.begin(), t.theta.end());
  for (int i = 0; i < t.n; ++i) {
    for (int p = 0; p < t.n; ++p) {
      auto row = t.row(i, p);
      double row_sum = 0.0;
      double row_min = row[0];
      for (double v : row) {
        row_sum += v;
        row_min = std::min(row_min, v);
      }
      const double err = std::abs(row_sum - 1.0);
      report.max_row_sum_error = std::max(report.max_row_sum_error, err);
      if (err > kInputTol || row_min < -kInputTol || std::isnan(row_sum)) {
        report.pass = false;
        report.violations.push_back({i, p, row_sum, row_min});
      }
    }
  }
  return report;
}

HeredityTensor checked_tensor(HeredityTensor t) {
  const auto report = validate_tensor(t);
  if (!report.pass) {
    std::ostringstream os;
    os << "heredity tensor fails stochasticity at " << report.violations.size()
       << " (female,male) pair(s); first offender (" << report.violations.front().i + 1 << ","
       << report.violations.front().p + 1 << ") with row sum " << report.violations.front().row_sum;
    throw NotStochastic(os.str());
  }
  return t;
}

FullState::FullState(std::vector<double> x_in, std::vector<double> y_in)
    : x(std::move(x_in)), y(std::move(y_in)) {
  require(!x.empty() && x.size() == y.size(), "state needs matching nonempty female/male parts");
  require_nonnegative(x, "x");
  require_nonnegative(y, "y");
  const double sx = sum(x);
  const double sy = sum(y);
  require(sx > 0.0, "female mass must be positive");
  require(sy > 0.0, "male mass must be positive");
  require(std::abs(sx + sy - 1.0) <= kInputTol, "total mass must equal 1");
}

FullState::FullState(Unchecked, std::vector<double> x_in, std::vector<double> y_in)
    : x(std::move(x_in)), y(std::move(y_in)) {}

FullState FullState::unchecked(std::vector<double> x_in, std::vector<double> y_in) {
  return FullState(Unchecked{}, std::move(x_in), std::move(y_in));
}

double FullState::sum_x() const { return sum(x); }
double FullState::sum_y() const { return sum(y); }

bool FullState::in_slice(const MixingRate& rate, double tol) const {
  return std::abs(sum_x() - rate.a) <= tol && std::abs(sum_y() - rate.b) <= tol;
}

ReducedState::ReducedState(std::vector<double> x_in, double a_in) : x(std::move(x_in)), a(a_in) {
  require(!x.empty(), "reduced state must be nonempty");
  require_nonnegative(x, "x");
  require(a > 0.0 && a < 1.0, "mass budget must lie in (0,1)");
  require(std::abs(sum(x) - a) <= kInputTol, "reduced state must carry exactly the budget mass");
}

ReducedState::ReducedState(Unchecked, std::vector<double> x_in, double a_in)
    : x(std::move(x_in)), a(a_in) {}

ReducedState ReducedState::unchecked(std::vector<double> x_in, double a_in) {
  return ReducedState(Unchecked{}, std::move(x_in), a_in);
}

NormalizedState::NormalizedState(std::vector<double> u_in) : u(std::move(u_in)) {
  require(!u.empty(), "normalized state must be nonempty");
  require_nonnegative(u, "u");
  require(std::abs(sum(u) - 1.0) <= kInputTol, "normalized state must sum to 1");
}

NormalizedState::NormalizedState(Unchecked, std::vector<double> u_in) : u(std::move(u_in)) {}

NormalizedState NormalizedState::unchecked(std::vector<double> u_in) {
  return NormalizedState(Unchecked{}, std::move(u_in));
}

NormalizedState normalize(const ReducedState& x) {
  std::vector<double> u(x.x.size());
  for (size_t k = 0; k < u.size(); ++k) u[k] = x.x[k] / x.a;
  return NormalizedState::unchecked(std::move(u));
}

FullState lift(const NormalizedState& u, const MixingRate& rate) {
  std::vector<double> x(u.u.size());
  std::vector<double> y(u.u.size());
  for (size_t k = 0; k < x.size(); ++k) {
    x[k] = rate.a * u.u[k];
    y[k] = rate.b * u.u[k];
  }
  return FullState::unchecked(std::move(x), std::move(y));
}

ReducedState reduce(const FullState& z, const MixingRate& rate, double tol) {
  if (std::abs(z.sum_x() - rate.a) > tol) {
    std::ostringstream os;
    os << "female mass " << z.sum_x() << " is off the slice budget " << rate.a;
    throw NotInSa(os.str());
  }
  return ReducedState::unchecked(z.x, rate.a);
}

}  // namespace gonodyn
