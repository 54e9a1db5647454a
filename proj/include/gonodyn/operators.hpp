#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gonodyn/model.hpp"

namespace gonodyn {

// One heredity tensor plus a mixing rate. Evaluation at the four coordinate
// levels (full, slice-restricted, reduced, normalized) shares this object.
struct GonosomalOperator {
  HeredityTensor theta;
  MixingRate rate;

  GonosomalOperator(HeredityTensor theta_in, MixingRate rate_in);
  int size() const { return theta.n; }
};

// x'_k = a * sum_{i,p} theta_{ipk} x_i y_p / (sum x * sum y), same sum scaled
// by (1-a) for y'. Throws ZeroSexMass when either sex has no mass.
FullState apply_full(const GonosomalOperator& op, const FullState& z);

// Slice form: x'_k = sum_{i,p} theta_{ipk} x_i y_p / (1-a), y'_k = same / a.
// Throws NotInSa when z is off the slice by more than 1e-9.
FullState apply_restricted(const GonosomalOperator& op, const FullState& z);

// x'_k = sum_{i,p} theta_{ipk} x_i x_p / a on the budget-a female states.
ReducedState apply_reduced(const GonosomalOperator& op, const ReducedState& x);

// u'_k = sum_{i,p} theta_{ipk} u_i u_p on the standard simplex.
NormalizedState apply_normalized(const GonosomalOperator& op, const NormalizedState& u);

// Polynomial form of the normalized step without simplex validation; used by
// finite-difference checks. out must not alias u.
void apply_normalized_raw(const HeredityTensor& t, std::span<const double> u,
                          std::span<double> out);

// Iteration step on the simplex: the polynomial step followed by rescaling to
// unit sum. The quadratic map is homogeneous, so off-simplex rounding drift
// in the sum direction doubles every step and must not be carried along.
void step_normalized(const HeredityTensor& t, std::span<const double> u, std::span<double> out);

// Jacobian of the normalized step: J(k,m) = sum_p theta_{mpk} u_p
//                                         + sum_i theta_{imk} u_i.
Eigen::MatrixXd jacobian_normalized_raw(const HeredityTensor& t, std::span<const double> u);
Eigen::MatrixXd jacobian_normalized(const GonosomalOperator& op, const NormalizedState& u);

// The n = 2 dynamics collapse to a scalar quadratic map on [0, a]:
//   T(x) = (theta1 + theta3 - theta2) x^2 / a + (theta2 - 2*theta3) x + theta3 a
// with theta1 = theta_{000}, theta2 = theta_{010} + theta_{100},
// theta3 = theta_{110} (0-based tensor indices).
struct QuadraticMap1D {
  double theta1;
  double theta2;
  double theta3;
  double a;

  QuadraticMap1D(double theta1_in, double theta2_in, double theta3_in, double a_in);
  static QuadraticMap1D from_tensor(const HeredityTensor& t, const MixingRate& rate);
};

double t_apply(const QuadraticMap1D& map, double x1);
double t_derivative(const QuadraticMap1D& map, double x1);

// Sparse tensor entry, 0-based indices.
struct TensorEntry {
  int i;
  int p;
  int k;
  double value;
};

// Volterra-type zero pattern: offspring types restricted to {mother, father},
// no coefficient equal to 1/2. Unlisted diagonal rows default to
// theta_{iii} = 1. Throws BadPattern / HalfForbidden / NotStochastic.
HeredityTensor build_c1(int n, const std::vector<TensorEntry>& entries);

// Block family over the partition {0} | F = {1..m-1} | M = {m..n-1}
// (0-based; m is the 1-based boundary of F = {2..m} in file terms).
// Same-block pairs send all mass to type 0; cross pairs use the supplied
// rows. cross[fi][mj] is the length-n row for (female 1+fi, male m+mj);
// mirror covers the (male, female) ordered pairs and defaults to the
// transpose of cross.
HeredityTensor build_c2(int n, int m, const std::vector<std::vector<std::vector<double>>>& cross,
                        const std::optional<std::vector<std::vector<std::vector<double>>>>& mirror =
                            std::nullopt);

// n = 3 family with a genuine 2-cycle; the normalized step is exactly
//   u'_0 = c u_2^2 + 2 u_1 u_2,  u'_1 = (1-c) u_2^2 + 2 u_0 u_2,
//   u'_2 = (u_0 + u_1)^2.
HeredityTensor build_c3(double c);

// Funnel map: every coordinate is scaled by x_j / a and the leftover mass
// lands on coordinate l. Indices are 0-based.
struct UOperator {
  int n;
  int j;
  int l;
  HeredityTensor tensor;  // dense realization for the generic machinery
};

UOperator build_u(int n, int j, int l);

// Simplified slice form: x'_k = x_k * (x_j / a) for k != l,
// x'_l = x_l * (x_j / a) + (a - x_j). Valid on sum x = a; the ratio is taken
// first so exact vertex starts stay exactly fixed.
ReducedState apply_u(const UOperator& op, const ReducedState& x);

}  // namespace gonodyn
