#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gonodyn/operators.hpp"

namespace gonodyn {

enum class Classification {
  attracting,
  repelling,
  neutral,
  saddle,
  non_hyperbolic,
};

const char* to_string(Classification c);

struct FixedPointRecord {
  NormalizedState u;
  double residual;                   // max-norm of V(u) - u
  Classification classification;
  std::vector<double> spectrum;      // tangent-space eigenvalue magnitudes, descending
  std::optional<double> slope;       // 1-D closed-form records store T'(x*) here
};

// Closed-form n = 2 fixed points.
struct N2FixedPoints {
  enum class Branch { quadratic, affine, identity };
  Branch branch;
  bool whole_interval = false;          // identity map: every point of [0,a] is fixed
  std::vector<double> roots;            // fixed points of T inside [0, a]
  std::vector<FixedPointRecord> records;
};

// Solves x = T(x) on [0, a]: quadratic branch when theta1+theta3 != theta2,
// affine branch on the locus theta1+theta3 = theta2, whole-interval sentinel
// for the identity parameters (1, 1, 0). Roots outside [0,a] are dropped,
// coincident roots deduplicated.
N2FixedPoints fixed_points_n2(const QuadraticMap1D& map);

// |T'| against 1 with hysteresis band 1e-9. Throws NotAFixedPoint when
// |T(x) - x| >= 1e-9.
Classification classify_1d(const QuadraticMap1D& map, double x_star);

struct FixedPointSearchOptions {
  int multistart = 200;          // low-discrepancy seeds in addition to vertices
  double newton_tol = 1e-12;
  double accept_residual = 1e-11;
  double dedup_radius = 1e-7;
  int max_newton_iters = 80;
};

struct FixedPointEnumeration {
  std::vector<FixedPointRecord> records;  // sorted lexicographically by coordinates
  bool whole_interval_n2 = false;         // n=2 identity map detected
  std::vector<std::string> warnings;
};

// Multistart Newton on V(u) - u restricted to the tangent slice {sum du = 0},
// seeded from all vertices, the barycenter and a Halton set; iterates are
// projected back onto the simplex. Records carry tangent spectra and
// classifications.
FixedPointEnumeration enumerate_fixed_points(
    const GonosomalOperator& op, const FixedPointSearchOptions& opts = {});

// Tangent-restricted spectrum at record.u: attracting when every magnitude is
// below 1-1e-9, repelling when all are above 1+1e-9, non-hyperbolic when any
// sits within 1e-9 of 1, saddle otherwise. Throws NotAFixedPoint when
// record.residual >= 1e-9.
Classification classify_nd(const GonosomalOperator& op, const FixedPointRecord& record);
std::vector<double> tangent_spectrum(const GonosomalOperator& op, const NormalizedState& u);

// z^(0) .. z^(steps) under apply_full.
std::vector<FullState> iterate(const GonosomalOperator& op, const FullState& z0, int steps);

struct OmegaOptions {
  long max_steps = 100000;
  double tol = 1e-9;
  int max_period = 64;
  int tail_window = 1024;
  int confirm = 32;  // consecutive confirmations required for fixed points and cycles
};

struct LimitReport {
  enum class Kind { fixed_point, cycle, boundary_attracted, undetermined };
  Kind kind;
  int period = 0;                      // 1 for fixed points, p for cycles
  std::vector<NormalizedState> points; // limit set estimate or tail samples
  long steps_used = 0;
  double final_gap = 0.0;              // convergence metric achieved
  double boundary_gap = 0.0;           // max over the tail of each state's min coordinate
};

const char* to_string(LimitReport::Kind k);

// Iterates the normalized dynamics and classifies the tail: fixed point when
// the step gap stays below tol for `confirm` consecutive steps; otherwise the
// stored tail is scanned for the smallest period 2..max_period confirmed
// `confirm` times; otherwise boundary attraction when every tail state has a
// coordinate below tol; otherwise undetermined with tail samples.
LimitReport omega_limit(const GonosomalOperator& op, const NormalizedState& u0,
                        const OmegaOptions& opts = {});

// Full-state entry point: one application of the full operator lands on the
// slice, after which the normalized dynamics are conjugate.
LimitReport omega_limit(const GonosomalOperator& op, const FullState& z0,
                        const OmegaOptions& opts = {});

// Predicted n = 2 limit per the closed-form limit table, evaluated
// most-specific-first: identity parameters, the exact period-2 parameters,
// the affine locus, then the seven quadratic rows in order.
struct N2LimitPrediction {
  enum class Kind { fixed_point, period2, identity };
  Kind kind;
  double x_limit = 0.0;           // fixed_point: limit of x_1; identity: x0
  double cycle_a = 0.0;           // period2: the pair {x0, a - x0}
  double cycle_b = 0.0;
  int table_row = 0;              // 1..7 quadratic rows; 0 for special cases
};

N2LimitPrediction predict_limit_n2(const QuadraticMap1D& map, double x0);

// Predicted limit of the funnel map: e_j for j = l; otherwise e_j exactly
// when x0_j = a (bitwise) and e_l for every other start. 0-based indices.
ReducedState predict_limit_u(int n, int j, int l, const ReducedState& x0);

// Full-state limit from a female-side limit: appends the male block beta*x.
FullState lift_limit(const ReducedState& x_limit, const MixingRate& rate);
FullState lift_record(const FixedPointRecord& record, const MixingRate& rate);

}  // namespace gonodyn
