#include "doctest.h"

#include <cmath>

#include "gonodyn/analysis.hpp"
#include "gonodyn/rng.hpp"
#include "oracles.hpp"

using namespace gonodyn;

namespace {

HeredityTensor effective_n2(double t1, double t2, double t3) {
  auto t = HeredityTensor::zeros(2);
  t.at(0, 0, 0) = t1;
  t.at(0, 0, 1) = 1 - t1;
  t.at(0, 1, 0) = t2 / 2;
  t.at(0, 1, 1) = 1 - t2 / 2;
  t.at(1, 0, 0) = t2 / 2;
  t.at(1, 0, 1) = 1 - t2 / 2;
  t.at(1, 1, 0) = t3;
  t.at(1, 1, 1) = 1 - t3;
  return t;
}

// Brute-force 1-D fixed point: iterate from the midpoint until stationary.
double iterate_to_fixed_point(const QuadraticMap1D& map, double x0, long steps = 200000) {
  double x = x0;
  for (long t = 0; t < steps; ++t) {
    const double next = t_apply(map, x);
    if (std::abs(next - x) < 1e-15) return next;
    x = next;
  }
  return x;
}

}  // namespace

TEST_CASE("fixed_points_n2: two roots for (1, 0.5, 0.5) at unit budget") {
  const QuadraticMap1D map(1.0, 0.5, 0.5, 1.0);
  const auto result = fixed_points_n2(map);
  CHECK(result.branch == N2FixedPoints::Branch::quadratic);
  REQUIRE(result.roots.size() == 2);
  CHECK(result.roots[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(result.roots[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("fixed_points_n2: affine branch gives the midpoint for (0,1,1)") {
  const QuadraticMap1D map(0.0, 1.0, 1.0, 1.0);
  const auto result = fixed_points_n2(map);
  CHECK(result.branch == N2FixedPoints::Branch::affine);
  REQUIRE(result.roots.size() == 1);
  CHECK(result.roots[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(result.records[0].classification == Classification::neutral);
}

TEST_CASE("fixed_points_n2: interior root matches brute-force iteration") {
  const QuadraticMap1D map(0.5, 0.5, 0.5, 0.5);
  const auto result = fixed_points_n2(map);
  REQUIRE(result.roots.size() == 1);
  const double iterated = iterate_to_fixed_point(map, 0.25);
  CHECK(result.roots[0] == doctest::Approx(iterated).epsilon(1e-11));
  CHECK(result.roots[0] == doctest::Approx(0.19098300562505255).epsilon(1e-12));
  CHECK(result.records[0].classification == Classification::attracting);
}

TEST_CASE("fixed_points_n2: identity branch flags the whole interval") {
  const auto result = fixed_points_n2(QuadraticMap1D(1.0, 1.0, 0.0, 0.5));
  CHECK(result.branch == N2FixedPoints::Branch::identity);
  CHECK(result.whole_interval);
  CHECK(result.roots.empty());
}

TEST_CASE("fixed_points_n2: every returned root is fixed, across the parameter grid") {
  for (int i1 = 0; i1 <= 10; ++i1) {
    for (int i2 = 0; i2 <= 10; ++i2) {
      for (int i3 = 0; i3 <= 10; ++i3) {
        const QuadraticMap1D map(i1 / 10.0, i2 / 5.0, i3 / 10.0, 0.6);
        const auto result = fixed_points_n2(map);
        for (double r : result.roots) {
          CHECK(std::abs(t_apply(map, r) - r) < 1e-10);
          CHECK(r >= 0.0);
          CHECK(r <= 0.6);
        }
      }
    }
  }
}

TEST_CASE("classify_1d examples from the stability table") {
  const QuadraticMap1D invol(0.0, 1.0, 1.0, 0.5);
  CHECK(classify_1d(invol, 0.25) == Classification::neutral);

  const QuadraticMap1D attract_a(1.0, 1.5, 0.5, 0.8);
  CHECK(classify_1d(attract_a, 0.8) == Classification::attracting);

  const QuadraticMap1D mid(0.5, 0.5, 0.5, 0.5);
  CHECK(classify_1d(mid, 0.19098300562505255) == Classification::attracting);

  CHECK_THROWS_AS(classify_1d(mid, 0.4), NotAFixedPoint);
}

TEST_CASE("classify_1d: repelling interior point when the discriminant exceeds 4") {
  // theta = (0, 0, 1): T(x) = (x-a)^2/a with slope 1 - sqrt(5) at the root.
  const QuadraticMap1D map(0.0, 0.0, 1.0, 1.0);
  const auto result = fixed_points_n2(map);
  REQUIRE(result.roots.size() == 1);
  CHECK(result.records[0].classification == Classification::repelling);
  CHECK(std::abs(*result.records[0].slope) == doctest::Approx(std::sqrt(5.0) - 1.0));
}

TEST_CASE("enumerate_fixed_points: C3 finds exactly the interior point") {
  const double s5 = std::sqrt(5.0);
  for (double c : {0.0, 0.5, 1.0}) {
    const GonosomalOperator op(build_c3(c), MixingRate::from_a(0.5));
    const auto found = enumerate_fixed_points(op);
    REQUIRE(found.records.size() == 1);
    const auto& rec = found.records[0];
    CHECK(rec.residual < 1e-11);
    CHECK(rec.u.u[2] == doctest::Approx((3.0 - s5) / 2.0).epsilon(1e-11));
    CHECK(rec.classification != Classification::attracting);
    REQUIRE(rec.spectrum.size() == 2);
    CHECK(rec.spectrum[0] == doctest::Approx(s5 - 1.0).epsilon(1e-6));
    CHECK(rec.spectrum[1] == doctest::Approx(3.0 - s5).epsilon(1e-6));
  }
  // c = 1 closed forms quoted to full precision.
  const GonosomalOperator op(build_c3(1.0), MixingRate::from_a(0.5));
  const auto found = enumerate_fixed_points(op);
  REQUIRE(found.records.size() == 1);
  CHECK(found.records[0].u.u[0] == doctest::Approx((3.0 * s5 + 1.0) / 22.0).epsilon(1e-10));
  CHECK(found.records[0].u.u[1] == doctest::Approx((4.0 * s5 - 6.0) / 11.0).epsilon(1e-10));
}

TEST_CASE("enumerate_fixed_points: funnel map vertices") {
  const auto rate = MixingRate::from_a(0.5);
  {
    const auto u_op = build_u(4, 1, 1);
    const auto found = enumerate_fixed_points(GonosomalOperator(u_op.tensor, rate));
    REQUIRE(found.records.size() == 1);
    CHECK(found.records[0].u.u[1] == doctest::Approx(1.0));
  }
  {
    const auto u_op = build_u(4, 1, 3);
    const auto found = enumerate_fixed_points(GonosomalOperator(u_op.tensor, rate));
    REQUIRE(found.records.size() == 2);
    bool has_j = false, has_l = false, l_attracting = false, j_attracting = false;
    for (const auto& rec : found.records) {
      if (rec.u.u[1] > 0.99) {
        has_j = true;
        j_attracting = rec.classification == Classification::attracting;
      }
      if (rec.u.u[3] > 0.99) {
        has_l = true;
        l_attracting = rec.classification == Classification::attracting;
      }
    }
    CHECK(has_j);
    CHECK(has_l);
    CHECK(l_attracting);
    CHECK_FALSE(j_attracting);
  }
}

TEST_CASE("enumerate_fixed_points: C2 vertex is the unique fixed point and attracts") {
  Rng rng(31);
  const auto theta = random_c2_tensor(4, 3, rng);
  const GonosomalOperator op(theta, MixingRate::from_a(0.3));
  const auto found = enumerate_fixed_points(op);
  REQUIRE(found.records.size() == 1);
  CHECK(found.records[0].u.u[0] == doctest::Approx(1.0));
  CHECK(found.records[0].classification == Classification::attracting);
  CHECK(classify_nd(op, found.records[0]) == Classification::attracting);

  const auto lifted = lift_record(found.records[0], op.rate);
  const auto next = apply_full(op, lifted);
  CHECK(oracle::linf(next.x, lifted.x) < 1e-10);
  CHECK(oracle::linf(next.y, lifted.y) < 1e-10);
}

TEST_CASE("enumerate_fixed_points agrees with the closed form for n = 2") {
  Rng rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    const double t1 = rng.uniform01();
    const double t2 = rng.uniform(0.0, 2.0);
    const double t3 = rng.uniform01();
    const double a = rng.uniform(0.2, 0.8);
    const GonosomalOperator op(effective_n2(t1, t2, t3), MixingRate::from_a(a));
    const auto closed = fixed_points_n2(QuadraticMap1D(t1, t2, t3, a));
    const auto numeric = enumerate_fixed_points(op);
    // Every closed-form root shows up in the Newton enumeration.
    for (double r : closed.roots) {
      bool matched = false;
      for (const auto& rec : numeric.records)
        matched = matched || std::abs(rec.u.u[0] * a - r) < 1e-7;
      CHECK(matched);
    }
    // And the enumeration never reports anything that is not fixed.
    for (const auto& rec : numeric.records) CHECK(rec.residual < 1e-11);
  }
}

TEST_CASE("enumerate_fixed_points flags the identity scalar map") {
  const GonosomalOperator op(effective_n2(1.0, 1.0, 0.0), MixingRate::from_a(0.5));
  const auto found = enumerate_fixed_points(op);
  CHECK(found.whole_interval_n2);
  CHECK(found.records.empty());
}

TEST_CASE("classify_nd rejects non-fixed points") {
  const GonosomalOperator op(build_c3(0.5), MixingRate::from_a(0.5));
  FixedPointRecord fake{NormalizedState({0.2, 0.3, 0.5}), 0.5, Classification::neutral, {}, {}};
  CHECK_THROWS_AS(classify_nd(op, fake), NotAFixedPoint);
}

TEST_CASE("iterate: constant on fixed points, alternating for the involution") {
  const GonosomalOperator op(effective_n2(0.0, 1.0, 1.0), MixingRate::from_a(0.5));
  const double x0 = 0.1;
  const auto z0 = lift(NormalizedState({x0 / 0.5, 1.0 - x0 / 0.5}), op.rate);
  const auto traj = iterate(op, z0, 6);
  REQUIRE(traj.size() == 7);
  for (size_t t = 0; t < traj.size(); ++t) {
    const double expected = (t % 2 == 0) ? x0 : 0.5 - x0;
    CHECK(traj[t].x[0] == doctest::Approx(expected).epsilon(1e-13));
  }
}

TEST_CASE("iterate: geometric decay toward the C2 vertex") {
  Rng rng(33);
  const GonosomalOperator op(random_c2_tensor(3, 2, rng), MixingRate::from_a(0.5));
  const auto z0 = lift(NormalizedState({0.2, 0.5, 0.3}), op.rate);
  const auto traj = iterate(op, z0, 40);
  double prev = 1.0 - traj[1].x[0] / 0.5;
  bool decayed = true;
  for (size_t t = 2; t < traj.size() && prev > 1e-13; ++t) {
    const double cur = 1.0 - traj[t].x[0] / 0.5;
    decayed = decayed && (cur <= prev * 0.999 || cur < 1e-13);
    prev = cur;
  }
  CHECK(decayed);
  CHECK(prev < 1e-10);
}

TEST_CASE("omega_limit: C3 generic starts reach the 2-cycle") {
  const GonosomalOperator op(build_c3(0.4), MixingRate::from_a(0.5));
  OmegaOptions opts;
  opts.max_steps = 3000;
  const auto report = omega_limit(op, NormalizedState({0.2, 0.3, 0.5}), opts);
  CHECK(report.kind == LimitReport::Kind::cycle);
  CHECK(report.period == 2);
  REQUIRE(report.points.size() == 2);
  const std::vector<double> pa = {0.0, 0.0, 1.0};
  const std::vector<double> pb = {0.4, 0.6, 0.0};
  for (const auto& pt : report.points)
    CHECK(std::min(oracle::linf(pt.u, pa), oracle::linf(pt.u, pb)) < 1e-8);
}

TEST_CASE("omega_limit: funnel map reaches the predicted vertex") {
  const auto u_op = build_u(4, 1, 2);
  const GonosomalOperator op(u_op.tensor, MixingRate::from_a(0.5));
  OmegaOptions opts;
  opts.max_steps = 200;
  const auto report = omega_limit(op, NormalizedState({0.3, 0.3, 0.2, 0.2}), opts);
  CHECK(report.kind == LimitReport::Kind::fixed_point);
  REQUIRE(report.points.size() == 1);
  CHECK(report.points[0].u[2] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("omega_limit: two-type attracting vertex via the full-state entry") {
  const GonosomalOperator op(effective_n2(1.0, 1.5, 0.5), MixingRate::from_a(0.5));
  const auto z0 = lift(NormalizedState({0.3, 0.7}), op.rate);
  const auto report = omega_limit(op, z0);
  CHECK(report.kind == LimitReport::Kind::fixed_point);
  CHECK(report.points[0].u[0] == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("omega_limit: exact period-2 alternation for the involution") {
  const GonosomalOperator op(effective_n2(0.0, 1.0, 1.0), MixingRate::from_a(0.5));
  const double x0 = 0.12;
  OmegaOptions opts;
  opts.max_steps = 2000;
  const auto report =
      omega_limit(op, lift(NormalizedState({x0 / 0.5, 1.0 - x0 / 0.5}), op.rate), opts);
  CHECK(report.kind == LimitReport::Kind::cycle);
  CHECK(report.period == 2);
  const std::vector<double> pa = {x0 / 0.5, 1.0 - x0 / 0.5};
  const std::vector<double> pb = {1.0 - x0 / 0.5, x0 / 0.5};
  for (const auto& pt : report.points)
    CHECK(std::min(oracle::linf(pt.u, pa), oracle::linf(pt.u, pb)) < 1e-12);
}

TEST_CASE("omega_limit: cycle points return to themselves under the period") {
  const GonosomalOperator op(build_c3(0.7), MixingRate::from_a(0.5));
  OmegaOptions opts;
  opts.max_steps = 3000;
  const auto report = omega_limit(op, NormalizedState({0.25, 0.35, 0.4}), opts);
  REQUIRE(report.kind == LimitReport::Kind::cycle);
  for (const auto& pt : report.points) {
    std::vector<double> u = pt.u;
    std::vector<double> next(u.size());
    for (int hop = 0; hop < report.period; ++hop) {
      step_normalized(op.theta, u, next);
      u.swap(next);
    }
    CHECK(oracle::linf(u, pt.u) < 1e-8);
  }
}

TEST_CASE("omega_limit: undetermined on a short budget") {
  const GonosomalOperator op(effective_n2(0.5, 0.5, 0.5), MixingRate::from_a(0.5));
  OmegaOptions opts;
  opts.max_steps = 5;
  const auto report = omega_limit(op, NormalizedState({0.9, 0.1}), opts);
  CHECK(report.kind == LimitReport::Kind::undetermined);
  CHECK_FALSE(report.points.empty());
}

TEST_CASE("predict_limit_n2: table rows, affine locus and special cases") {
  // Row 1: everything dies out toward x1 = 0.
  const auto r1 = predict_limit_n2(QuadraticMap1D(0.3, 0.5, 0.0, 0.5), 0.3);
  CHECK(r1.kind == N2LimitPrediction::Kind::fixed_point);
  CHECK(r1.x_limit == 0.0);
  CHECK(r1.table_row == 1);

  // Row 4 at unit budget: theta3*a/(theta3 - theta2 + 1) = 0.5.
  const auto r4 = predict_limit_n2(QuadraticMap1D(1.0, 0.5, 0.5, 1.0), 0.3);
  CHECK(r4.x_limit == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r4.table_row == 4);

  // Row 7: (1 - theta2) a / (theta1 - theta2) = 0.5.
  const auto r7 = predict_limit_n2(QuadraticMap1D(0.5, 1.5, 0.0, 1.0), 0.3);
  CHECK(r7.x_limit == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r7.table_row == 7);

  // Affine locus inside row 3's parameter box: the x* formula would divide
  // by zero, the affine fixed point takes over.
  const auto aff = predict_limit_n2(QuadraticMap1D(0.5, 1.0, 0.5, 1.0), 0.3);
  CHECK(aff.table_row == 0);
  CHECK(aff.x_limit == doctest::Approx(0.5).epsilon(1e-14));

  const auto ident = predict_limit_n2(QuadraticMap1D(1.0, 1.0, 0.0, 0.5), 0.2);
  CHECK(ident.kind == N2LimitPrediction::Kind::identity);
  CHECK(ident.x_limit == 0.2);

  const auto per2 = predict_limit_n2(QuadraticMap1D(0.0, 1.0, 1.0, 0.5), 0.2);
  CHECK(per2.kind == N2LimitPrediction::Kind::period2);
  CHECK(per2.cycle_a == 0.2);
  CHECK(per2.cycle_b == doctest::Approx(0.3));
}

TEST_CASE("predict_limit_u: knife edge and generic starts") {
  const auto x0 = ReducedState::unchecked({0.2, 0.15, 0.15}, 0.5);
  const auto same = predict_limit_u(3, 1, 1, x0);
  CHECK(same.x[1] == 0.5);

  std::vector<double> vertex = {0.5, 0.0, 0.0};
  const auto edge = predict_limit_u(3, 0, 2, ReducedState::unchecked(vertex, 0.5));
  CHECK(edge.x[0] == 0.5);

  const auto generic = predict_limit_u(3, 0, 2, x0);
  CHECK(generic.x[2] == 0.5);

  CHECK_THROWS_AS(predict_limit_u(3, 5, 0, x0), IndexOutOfRange);
}

TEST_CASE("lift_limit produces the proportional male block") {
  const auto rate = MixingRate::from_a(0.4);
  const auto z = lift_limit(ReducedState::unchecked({0.1, 0.3}, 0.4), rate);
  CHECK(z.y[0] == doctest::Approx(rate.beta * 0.1));
  CHECK(z.y[1] == doctest::Approx(rate.beta * 0.3));
  CHECK(z.sum_x() + z.sum_y() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("tangent spectrum reproduces the scalar slope for n = 2") {
  Rng rng(34);
  for (int trial = 0; trial < 30; ++trial) {
    const double t1 = rng.uniform01();
    const double t2 = rng.uniform(0.0, 2.0);
    const double t3 = rng.uniform01();
    const double a = rng.uniform(0.2, 0.8);
    const QuadraticMap1D map(t1, t2, t3, a);
    const auto closed = fixed_points_n2(map);
    if (closed.roots.empty()) continue;
    const GonosomalOperator op(effective_n2(t1, t2, t3), MixingRate::from_a(a));
    for (size_t i = 0; i < closed.roots.size(); ++i) {
      const auto spec = tangent_spectrum(op, closed.records[i].u);
      REQUIRE(spec.size() == 1);
      CHECK(spec[0] == doctest::Approx(std::abs(*closed.records[i].slope)).epsilon(1e-9));
    }
  }
}
