#pragma once

#include <span>
#include <vector>

#include "gonodyn/errors.hpp"

namespace gonodyn {

// Tolerance for all stochasticity / mass-balance checks on inputs.
// Violations are reported, never silently renormalized.
inline constexpr double kInputTol = 1e-12;

// Incubation-temperature exposure probabilities and the per-environment
// female/male proportions. tau1: feminizing, tau2: masculinizing,
// tau3: transition temperatures.
struct TemperatureParams {
  double tau1 = 0.0;
  double tau2 = 0.0;
  double tau3 = 0.0;
  double mu1 = 0.0;      // female proportion at feminizing temperatures
  double mu1_bar = 0.0;  // male proportion, mu1 + mu1_bar = 1
  double mu2 = 0.0;      // female proportion at masculinizing temperatures
  double mu2_bar = 0.0;

  // Throws InvalidState on any violated invariant:
  // tau >= 0 summing to 1, mu pairs summing to 1, mu1 >= mu1_bar >= 0,
  // 0 <= mu2 <= mu2_bar.
  void validate() const;
};

// Female egg fraction a, male fraction b = 1 - a, and beta = b/a.
// a in {0,1} is rejected: the dynamics divide by both sex masses.
struct MixingRate {
  double a;
  double b;
  double beta;

  static MixingRate from_a(double a);             // b = 1 - a
  static MixingRate from_parts(double a, double b);
};

// a = mu1*tau1 + mu2*tau2 + tau3/2, b = mu1_bar*tau1 + mu2_bar*tau2 + tau3/2.
// Throws DegenerateRate when a falls outside (0,1).
MixingRate derive_rates(const TemperatureParams& params);

// Offspring-type proportions theta[i][p][k]: fraction of type-k eggs laid by
// a type-i female crossed with a type-p male. Rows over k are stochastic.
// Indices are 0-based throughout the library; file formats are 1-based.
struct HeredityTensor {
  int n = 0;
  std::vector<double> theta;  // flat, index (i*n + p)*n + k

  static HeredityTensor zeros(int n);

  double at(int i, int p, int k) const { return theta[static_cast<size_t>((i * n + p) * n + k)]; }
  double& at(int i, int p, int k) { return theta[static_cast<size_t>((i * n + p) * n + k)]; }
  std::span<const double> row(int i, int p) const {
    return std::span<const double>(theta).subspan(static_cast<size_t>((i * n + p) * n),
                                                  static_cast<size_t>(n));
  }
};

struct TensorValidationReport {
  struct RowViolation {
    int i;            // 0-based female type
    int p;            // 0-based male type
    double row_sum;
    double min_entry;
  };
  bool pass = true;
  std::vector<RowViolation> violations;  // every failing (i,p) pair
  double max_row_sum_error = 0.0;
  double min_entry = 0.0;
};

// Checks nonnegativity and row-stochasticity over k within kInputTol.
// Returns a failing report instead of throwing so callers can print
// every violation at once.
TensorValidationReport validate_tensor(const HeredityTensor& t);

// Validate-or-throw convenience used by builders and config loading.
HeredityTensor checked_tensor(HeredityTensor t);

// Population state at full resolution: female masses x, male masses y.
// All entries >= 0, both sums positive, total mass 1.
struct FullState {
  std::vector<double> x;
  std::vector<double> y;

  FullState(std::vector<double> x_in, std::vector<double> y_in);
  static FullState unchecked(std::vector<double> x_in, std::vector<double> y_in);

  int size() const { return static_cast<int>(x.size()); }
  double sum_x() const;
  double sum_y() const;
  // Membership in the slice {sum x = a, sum y = 1 - a}.
  bool in_slice(const MixingRate& rate, double tol = kInputTol) const;

 private:
  struct Unchecked {};
  FullState(Unchecked, std::vector<double> x_in, std::vector<double> y_in);
};

// Female-side state with mass budget a (the set S_a^{n-1}).
struct ReducedState {
  std::vector<double> x;
  double a;

  ReducedState(std::vector<double> x_in, double a_in);
  static ReducedState unchecked(std::vector<double> x_in, double a_in);

  int size() const { return static_cast<int>(x.size()); }

 private:
  struct Unchecked {};
  ReducedState(Unchecked, std::vector<double> x_in, double a_in);
};

// Point of the standard probability simplex.
struct NormalizedState {
  std::vector<double> u;

  explicit NormalizedState(std::vector<double> u_in);
  static NormalizedState unchecked(std::vector<double> u_in);

  int size() const { return static_cast<int>(u.size()); }

 private:
  struct Unchecked {};
  NormalizedState(Unchecked, std::vector<double> u_in);
};

// u_i = x_i / a.
NormalizedState normalize(const ReducedState& x);

// x_k = a*u_k, y_k = (1-a)*u_k; the result lies on the slice with y = beta*x.
FullState lift(const NormalizedState& u, const MixingRate& rate);

// Female part of a slice state. Throws NotInSa when |sum x - a| > tol.
ReducedState reduce(const FullState& z, const MixingRate& rate, double tol = 1e-9);

}  // namespace gonodyn
