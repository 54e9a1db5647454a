#include "gonodyn/claims.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>
#include <thread>

#include "gonodyn/analysis.hpp"
#include "gonodyn/operators.hpp"
#include "gonodyn/rng.hpp"

namespace gonodyn {

namespace {

constexpr double kInfoMetric = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

double linf(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

double min_coord(std::span<const double> u) {
  double m = u[0];
  for (double v : u) m = std::min(m, v);
  return m;
}

void add_metric(ClaimReport& report, std::string name, double value, double tolerance, bool ok) {
  report.metrics.push_back({std::move(name), value, tolerance, ok});
  report.pass = report.pass && ok;
}

void add_info(ClaimReport& report, std::string name, double value) {
  report.metrics.push_back({std::move(name), value, kInfoMetric, true});
}

// Closed-form interior fixed point of the C3 family.
std::array<double, 3> c3_interior_fixed_point(double c) {
  const double s5 = std::sqrt(5.0);
  return {((7.0 - 3.0 * s5) * c + 4.0 * s5 - 8.0) / (2.0 * (4.0 - s5)),
          ((3.0 * s5 - 7.0) * c + s5 - 1.0) / (2.0 * (4.0 - s5)), (3.0 - s5) / 2.0};
}

std::vector<double> c3_values(const ClaimConfig& config) {
  if (config.c) return {*config.c};
  return {0.0, 0.25, 0.5, 0.75, 1.0};
}

GonosomalOperator random_operator(Rng& rng, const ClaimConfig& config) {
  const int n = config.n ? *config.n : rng.uniform_int(1, 6);
  const auto rate = MixingRate::from_a(rng.uniform(0.1, 0.9));
  return GonosomalOperator(random_tensor(n, rng), rate);
}

// ---------------------------------------------------------------------------
// L1: every image of the full operator lands on the slice, and the slice is
// invariant.

ClaimReport run_l1(const ClaimConfig& config) {
  ClaimReport report;
  report.pass = true;
  Rng rng(config.seed ^ 0x11ULL);
  const int ops = config.samples.value_or(200);
  const double tol = config.tol.value_or(1e-12);
  double worst_x = 0.0;
  double worst_y = 0.0;
  for (int i = 0; i < ops; ++i) {
    const auto op = random_operator(rng, config);
    for (int s = 0; s < 5; ++s) {
      const auto z0 = (s % 2 == 0) ? random_full_state(op.size(), rng)
                                   : random_slice_state(op.size(), op.rate, rng);
      const auto z1 = apply_full(op, z0);
      worst_x = std::max(worst_x, std::abs(z1.sum_x() - op.rate.a));
      worst_y = std::max(worst_y, std::abs(z1.sum_y() - op.rate.b));
    }
  }
  add_metric(report, "max |sum x' - a|", worst_x, tol, worst_x < tol);
  add_metric(report, "max |sum y' - (1-a)|", worst_y, tol, worst_y < tol);
  return report;
}

// ---------------------------------------------------------------------------
// L2N: after the first step every iterate satisfies y = beta x.

ClaimReport run_l2n(const ClaimConfig& config) {
  ClaimReport report;
  report.pass = true;
  Rng rng(config.seed ^ 0x12ULL);
  const int ops = config.samples.value_or(100);
  const long steps = config.max_steps.value_or(50);
  const double tol = config.tol.value_or(1e-12);
  double worst = 0.0;
  for (int i = 0; i < ops; ++i) {
    const auto op = random_operator(rng, config);
    auto z = random_full_state(op.size(), rng);
    for (long t = 0; t < steps; ++t) {
      z = apply_full(op, z);
      for (int k = 0; k < op.size(); ++k)
        worst = std::max(worst, std::abs(z.y[static_cast<size_t>(k)] -
                                         op.rate.beta * z.x[static_cast<size_t>(k)]));
    }
  }
  add_metric(report, "max ||y - beta x||", worst, tol, worst < tol);
  return report;
}

// ---------------------------------------------------------------------------
// C1-EQUIV: the slice dynamics and the normalized dynamics are conjugate.

ClaimReport run_conjugacy(const ClaimConfig& config) {
  ClaimReport report;
  report.pass = true;
  Rng rng(config.seed ^ 0x13ULL);
  const int ops = config.samples.value_or(100);
  const long steps = config.max_steps.value_or(100);
  const double tol = config.tol.value_or(1e-10);
  double worst = 0.0;
  std::vector<double> u, next;
  for (int i = 0; i < ops; ++i) {
    const auto op = random_operator(rng, config);
    const int n = op.size();
    auto z = apply_full(op, random_full_state(n, rng));
    u.assign(z.x.begin(), z.x.end());
    for (auto& v : u) v /= op.rate.a;
    next.assign(static_cast<size_t>(n), 0.0);
    for (long t = 0; t < steps; ++t) {
      z = apply_full(op, z);
      step_normalized(op.theta, u, next);
      u.swap(next);
      for (int k = 0; k < n; ++k)
        worst = std::max(worst, std::abs(z.x[static_cast<size_t>(k)] / op.rate.a -
                                         u[static_cast<size_t>(k)]));
    }
  }
  add_metric(report, "max |x/a - u| over trajectories", worst, tol, worst < tol);
  return report;
}

// ---------------------------------------------------------------------------
// C1 family helpers.

struct BoundaryRun {
  bool reached;      // a full window of states stayed within the boundary band
  long steps_used;
};

BoundaryRun boundary_attraction_run(const HeredityTensor& theta, std::vector<double> u,
                                    long max_steps, double band, int window) {
  std::vector<double> next(u.size());
  int streak = 0;
  for (long t = 1; t <= max_steps; ++t) {
    step_normalized(theta, u, next);
    u.swap(next);
    streak = (min_coord(u) < band) ? streak + 1 : 0;
    if (streak >= window) return {true, t};
  }
  return {false, max_steps};
}

std::vector<double> random_nonfixed_interior(const HeredityTensor& theta, Rng& rng) {
  for (;;) {
    auto u = rng.interior_simplex_point(theta.n, 0.05);
    std::vector<double> image(u.size());
    apply_normalized_raw(theta, u, image);
    if (linf(image, u) > 1e-9) return u;
  }
}

// T1-1: Volterra-type trajectories approach the boundary.

ClaimReport run_t1_1(const ClaimConfig& config) {
  ClaimReport report;
  report.pass = true;
  Rng rng(config.seed ^ 0x21ULL);
  const int tensors = config.samples.value_or(20);
  const int starts = 20;
  const long max_steps = config.max_steps.value_or(100000);
  const double band = config.tol.value_or(1e-6);
  int successes = 0;
  int total = 0;
  for (int i = 0; i < tensors; ++i) {
    const auto theta = random_c1_tensor(3, rng);
    for (int s = 0; s < starts; ++s) {
      ++total;
      const auto run = boundary_attraction_run(theta, random_nonfixed_interior(theta, rng),
                                               max_steps, band, 1024);
      if (run.reached) {
        ++successes;
      } else {
        std::ostringstream os;
        os << "tensor " << i << ", start " << s << ": min coordinate stayed above " << band
           << " after " << max_steps << " steps";
        report.notes.push_back(os.str());
      }
    }
  }
  const double fraction = static_cast<double>(successes) / total;
  add_metric(report, "boundary-attraction success fraction", fraction, 0.95, fraction >= 0.95);
  add_info(report, "runs", total);
  return report;
}

// T1-2 (evidence): no finite cycle shows up for the Volterra-type class.

ClaimReport run_t1_2(const ClaimConfig& config) {
  ClaimReport report;
  report.pass = true;
  report.evidence_only = true;
  Rng rng(config.seed ^ 0x22ULL);
  const int tensors = config.samples.value_or(10);
  const long max_steps = config.max_steps.value_or(20000);
  int cycles = 0;
  int fixed = 0;
  int other = 0;
  for (int i = 0; i < tensors; ++i) {
    const auto op = GonosomalOperator(random_c1_tensor(3, rng), MixingRate::from_a(0.5));
    for (int s = 0; s < 10; ++s) {
      OmegaOptions opts;
      opts.max_steps = max_steps;
      const auto limit = omega_limit(
          op, NormalizedState::unchecked(random_nonfixed_interior(op.theta, rng)), opts);
      if (limit.kind == LimitReport::Kind::cycle)
        ++cycles;
      else if (limit.kind == LimitReport::Kind::fixed_point)
        ++fixed;
      else
        ++other;
    }
  }
  add_metric(report, "finite cycles detected", cycles, 0.0, cycles == 0);
  add_info(report, "single-point tails", fixed);
  add_info(report, "unsettled tails", other);
  report.notes.push_back(
      "evidence-only: a finite simulation cannot certify that an unsettled limit set is infinite");
  return report;
}

// T1-3 (evidence): trajectories near an isolated interior fixed point of a
// rock-paper-scissors Volterra-type operator do not converge to it.

ClaimReport run_t1_3(const ClaimConfig& config) {
  ClaimReport report;
  report.pass = true;
  report.evidence_only = true;
  Rng rng(config.seed ^ 0x23ULL);
  const int tensors = config.samples.value_or(5);
  const long steps = config.max_steps.value_or(20000);
  double worst_ratio = std::numeric_limits<double>::infinity();
  for (int i = 0; i < tensors; ++i) {
    // Cyclic dominance pattern: v_01 > v_10, v_02 < v_20, v_12 > v_21 gives an
    // isolated interior fixed point (delta, -gamma, alpha) / (delta-gamma+alpha).
    auto draw = [&](double lo, double hi) {
      double v;
      do {
        v = rng.uniform(lo, hi);
      } while (std::abs(v - 0.5) <= 0.05);
      return v;
    };
    const double v01 = draw(0.55, 1.0), v10 = draw(0.0, 0.45);
    const double v02 = draw(0.0, 0.45), v20 = draw(0.55, 1.0);
    const double v12 = draw(0.55, 1.0), v21 = draw(0.0, 0.45);
    std::vector<TensorEntry> entries = {
        {0, 1, 0, v01}, {0, 1, 1, 1 - v01}, {1, 0, 1, v10}, {1, 0, 0, 1 - v10},
        {0, 2, 0, v02}, {0, 2, 2, 1 - v02}, {2, 0, 2, v20}, {2, 0, 0, 1 - v20},
        {1, 2, 1, v12}, {1, 2, 2, 1 - v12}, {2, 1, 2, v21}, {2, 1, 1, 1 - v21}};
    const auto theta = build_c1(3, entries);
    const double alpha = v01 - v10;
    const double gamma = v02 - v20;
    const double delta = v12 - v21;
    const double norm = delta - gamma + alpha;
    std::vector<double> star = {delta / norm, -gamma / norm, alpha / norm};
    std::vector<double> image(3);
    apply_normalized_raw(theta, star, image);
    add_info(report, "interior fixed-point residual (tensor " + std::to_string(i) + ")",
             linf(image, star));

    for (int s = 0; s < 5; ++s) {
      std::vector<double> u = star;
      const double eps = 1e-3;
      u[0] += eps * (rng.uniform01() - 0.5);
      u[1] += eps * (rng.uniform01() - 0.5);
      double corr = (1.0 - u[0] - u[1]);
      u[2] = std::max(corr, 0.0);
      const double d0 = linf(u, star);
      std::vector<double> next(3);
      for (long t = 0; t < steps; ++t) {
        step_normalized(theta, u, next);
        u.swap(next);
      }
      const double d1 = linf(u, star);
      worst_ratio = std::min(worst_ratio, d1 / d0);
    }
  }
  add_metric(report, "min final/initial distance to the interior fixed point", worst_ratio, 2.0,
             worst_ratio > 2.0);
  report.notes.push_back("evidence-only: non-convergence is sampled, not proved");
  return report;
}

// T1-4: block-family trajectories collapse onto the first vertex with a
// geometric (in fact quadratic) tail.

ClaimReport run_t1_4(const ClaimConfig& config) {
  ClaimReport report;
  report.pass = true;
  Rng rng(config.seed ^ 0x24ULL);
  const long max_steps = config.max_steps.value_or(10000);
  const double final_tol = config.tol.value_or(1e-10);
  double worst_ratio = 0.0;
  double worst_final = 0.0;
  long worst_steps = 0;
  for (int n : {3, 4}) {
    for (int rep = 0; rep < 3; ++rep) {
      const int m = 2 + (n == 4 ? rep % 2 : 0);
      const auto theta = random_c2_tensor(n, m, rng);
      for (int s = 0; s < 20; ++s) {
        std::vector<double> u = rng.simplex_point(n);
        std::vector<double> next(u.size());
        double dist = 1.0 - u[0];
        long t = 0;
        while (t < max_steps && dist > 1e-13) {
          step_normalized(theta, u, next);
          u.swap(next);
          ++t;
          double d = 0.0;
          for (size_t k = 1; k < u.size(); ++k) d = std::max(d, u[k]);
          d = std::max(d, std::abs(1.0 - u[0]));
          // Tail ratios only: the max-norm distance can grow for a step or
          // two while mass reshuffles inside the off-vertex block.
          if (dist <= 0.1 && dist > 1e-13 && d > 0.0)
            worst_ratio = std::max(worst_ratio, d / dist);
          dist = d;
        }
        worst_final = std::max(worst_final, dist);
        worst_steps = std::max(worst_steps, t);
      }
    }
  }
  add_metric(report, "max tail ratio d(t+1)/d(t)", worst_ratio, 0.999, worst_ratio < 0.999);
  add_metric(report, "max final distance to the vertex", worst_final, final_tol,
             worst_final < final_tol);
  add_info(report, "max steps to converge", static_cast<double>(worst_steps));
  return report;
}

// T1-5: the C3 family has the closed-form interior fixed point and a 2-cycle
// that attracts generic starts.

ClaimReport run_t1_5(const ClaimConfig& config) {
  ClaimReport report;
  report.pass = true;
  Rng rng(config.seed ^ 0x25ULL);
  const auto rate = MixingRate::from_a(0.5);
  double worst_fp = 0.0;
  double worst_residual = 0.0;
  double worst_cycle = 0.0;
  double min_top_multiplier = std::numeric_limits<double>::infinity();
  bool all_cycles = true;
  bool unique_fp = true;
  bool none_attracting = true;
  for (double c : c3_values(config)) {
    const GonosomalOperator op(build_c3(c), rate);
    const auto found = enumerate_fixed_points(op);
    unique_fp = unique_fp && found.records.size() == 1;
    const auto star = c3_interior_fixed_point(c);
    for (const auto& rec : found.records) {
      worst_residual = std::max(worst_residual, rec.residual);
      worst_fp = std::max(worst_fp, linf(rec.u.u, star));
      none_attracting = none_attracting && rec.classification != Classification::attracting;
      if (!rec.spectrum.empty())
        min_top_multiplier = std::min(min_top_multiplier, rec.spectrum.front());
    }

    const std::vector<double> cycle_a = {0.0, 0.0, 1.0};
    const std::vector<double> cycle_b = {c, 1.0 - c, 0.0};
    const int starts = config.samples.value_or(50);
    for (int s = 0; s < starts; ++s) {
      OmegaOptions opts;
      opts.max_steps = config.max_steps.value_or(5000);
      const auto limit =
          omega_limit(op, NormalizedState::unchecked(rng.interior_simplex_point(3, 0.05)), opts);
      if (limit.kind != LimitReport::Kind::cycle || limit.period != 2) {
        all_cycles = false;
        continue;
      }
      for (const auto& pt : limit.points) {
        const double d = std::min(linf(pt.u, cycle_a), linf(pt.u, cycle_b));
        worst_cycle = std::max(worst_cycle, d);
      }
    }
  }
  add_metric(report, "unique interior fixed point found", unique_fp ? 1.0 : 0.0, 1.0, unique_fp);
  add_metric(report, "max |u* - closed form|", worst_fp, 1e-9, worst_fp < 1e-9);
  add_metric(report, "max fixed-point residual", worst_residual, 1e-10, worst_residual < 1e-10);
  add_metric(report, "fixed point never attracting", none_attracting ? 1.0 : 0.0, 1.0,
             none_attracting);
  add_metric(report, "all generic starts reach a 2-cycle", all_cycles ? 1.0 : 0.0, 1.0, all_cycles);
  add_metric(report, "max cycle-point deviation from {(0,0,1),(c,1-c,0)}", worst_cycle, 1e-8,
             worst_cycle < 1e-8);
  add_info(report, "min leading multiplier at the fixed point", min_top_multiplier);
  report.notes.push_back(
      "detected 2-cycle {(0,0,1),(c,1-c,0)} in normalized coordinates; the printed pair "
      "{(ac,ad,0,...),(a,0,0,...)} is not invariant: (1,0,0) maps to (0,0,1)");
  report.notes.push_back(
      "the knife-edge slice u3 = (3-sqrt5)/2 is irrational, so the interior fixed point is "
      "checked by the solver rather than by iteration from the slice");
  return report;
}

// ---------------------------------------------------------------------------
// PROP1 / THM3: the two-type limit table.

struct N2Sample {
  double t1, t2, t3, a, x0;
};

// Rows are sampled inside margins that keep the contraction ratio away from 1
// so the step budget suffices; the x* row additionally keeps the discriminant
// inside (0,4) where that point is attracting per the stability table.
N2Sample sample_row(int row, Rng& rng) {
  N2Sample s{};
  s.a = rng.uniform(0.2, 0.8);
  s.x0 = rng.uniform(0.02, 0.98) * s.a;
  switch (row) {
    case 1:
      s.t1 = rng.uniform(0.0, 0.98);
      s.t2 = rng.uniform(0.0, 0.96);
      s.t3 = 0.0;
      break;
    case 2:
      s.t1 = 1.0;
      s.t2 = rng.uniform(1.04, 2.0);
      s.t3 = rng.uniform(0.02, 1.0);
      break;
    case 3:
      for (;;) {
        s.t1 = rng.uniform(0.0, 0.98);
        s.t2 = rng.uniform(0.0, 2.0);
        s.t3 = rng.uniform(0.02, 1.0);
        const double disc = (s.t2 - 1.0) * (s.t2 - 1.0) + 4.0 * s.t3 * (1.0 - s.t1);
        const double root = std::sqrt(disc);
        if (root >= 0.04 && root <= 1.96) break;
      }
      break;
    case 4:
      s.t1 = 1.0;
      s.t2 = rng.uniform(0.0, 0.96);
      s.t3 = rng.uniform(0.02, 1.0);
      break;
    case 5:
      s.t1 = 1.0;
      s.t2 = rng.uniform(0.0, 0.96);
      s.t3 = 0.0;
      break;
    case 6:
      s.t1 = 1.0;
      s.t2 = rng.uniform(1.04, 1.96);
      s.t3 = 0.0;
      break;
    case 7:
      s.t1 = rng.uniform(0.0, 1.0);
      s.t2 = rng.uniform(1.04, 2.0);
      s.t3 = 0.0;
      break;
  }
  return s;
}

double iterate_scalar(const QuadraticMap1D& map, double x, long max_steps) {
  for (long t = 0; t < max_steps; ++t) {
    const double next = t_apply(map, x);
    if (std::abs(next - x) < 1e-12) return next;
    x = next;
  }
  return x;
}

ClaimReport run_prop1(const ClaimConfig& config) {
  ClaimReport report;
  report.pass = true;
  Rng rng(config.seed ^ 0x31ULL);
  const int per_row = config.samples.value_or(20);
  const long max_steps = config.max_steps.value_or(10000);
  const double tol = config.tol.value_or(1e-8);
  double worst = 0.0;
  for (int row = 1; row <= 7; ++row) {
    for (int s = 0; s < per_row; ++s) {
      const auto sample = sample_row(row, rng);
      const QuadraticMap1D map(sample.t1, sample.t2, sample.t3, sample.a);
      const auto pred = predict_limit_n2(map, sample.x0);
      const double sim = iterate_scalar(map, sample.x0, max_steps);
      const double dev = std::abs(sim - pred.x_limit);
      worst = std::max(worst, dev);
      if (dev >= tol) {
        std::ostringstream os;
        os << "row " << row << " sample " << s << ": simulated " << fmt(sim) << " vs table "
           << fmt(pred.x_limit);
        report.notes.push_back(os.str());
      }
    }
  }
  add_metric(report, "max |simulated - table| over 7 rows", worst, tol, worst < tol);

  // Period-2 parameters: the map is the affine involution a - x.
  double worst_double_step = 0.0;
  for (int s = 0; s < 100; ++s) {
    const double a = rng.uniform(0.2, 0.8);
    const QuadraticMap1D map(0.0, 1.0, 1.0, a);
    const double x = rng.uniform(0.0, 1.0) * a;
    worst_double_step = std::max(worst_double_step, std::abs(t_apply(map, t_apply(map, x)) - x));
  }
  add_metric(report, "max |T(T(x)) - x| at (0,1,1)", worst_double_step, 1e-14,
             worst_double_step < 1e-14);

  bool period2_ok = true;
  double worst_cycle = 0.0;
  for (int s = 0; s < 5; ++s) {
    const auto rate = MixingRate::from_a(rng.uniform(0.3, 0.7));
    auto t = HeredityTensor::zeros(2);
    t.at(0, 0, 1) = 1.0;
    t.at(0, 1, 0) = 0.5;
    t.at(0, 1, 1) = 0.5;
    t.at(1, 0, 0) = 0.5;
    t.at(1, 0, 1) = 0.5;
    t.at(1, 1, 0) = 1.0;
    const GonosomalOperator op(std::move(t), rate);
    const double x0 = rng.uniform(0.05, 0.95) * rate.a;
    OmegaOptions opts;
    opts.max_steps = 2000;
    const auto limit = omega_limit(
        op, NormalizedState::unchecked({x0 / rate.a, 1.0 - x0 / rate.a}), opts);
    if (limit.kind != LimitReport::Kind::cycle || limit.period != 2) {
      period2_ok = false;
      continue;
    }
    const std::vector<double> pa = {x0 / rate.a, 1.0 - x0 / rate.a};
    const std::vector<double> pb = {1.0 - x0 / rate.a, x0 / rate.a};
    for (const auto& pt : limit.points)
      worst_cycle = std::max(worst_cycle, std::min(linf(pt.u, pa), linf(pt.u, pb)));
  }
  add_metric(report, "period-2 detected at (0,1,1)", period2_ok ? 1.0 : 0.0, 1.0, period2_ok);
  add_metric(report, "max period-2 point deviation from {x0, a-x0}", worst_cycle, 1e-8,
             worst_cycle < 1e-8);
  return report;
}

HeredityTensor tensor_from_effective(double t1, double t2, double t3) {
  auto t = HeredityTensor::zeros(2);
  t.at(0, 0, 0) = t1;
  t.at(0, 0, 1) = 1.0 - t1;
  t.at(0, 1, 0) = t2 / 2.0;
  t.at(0, 1, 1) = 1.0 - t2 / 2.0;
  t.at(1, 0, 0) = t2 / 2.0;
  t.at(1, 0, 1) = 1.0 - t2 / 2.0;
  t.at(1, 1, 0) = t3;
  t.at(1, 1, 1) = 1.0 - t3;
  return t;
}

ClaimReport run_thm3(const ClaimConfig& config) {
  ClaimReport report;
  report.pass = true;
  Rng rng(config.seed ^ 0x32ULL);
  const int per_row = config.samples.value_or(8);
  const long max_steps = config.max_steps.value_or(10000);
  const double tol = config.tol.value_or(1e-8);
  double worst = 0.0;
  for (int row = 1; row <= 7; ++row) {
    for (int s = 0; s < per_row; ++s) {
      const auto sample = sample_row(row, rng);
      const auto rate = MixingRate::from_a(sample.a);
      const GonosomalOperator op(tensor_from_effective(sample.t1, sample.t2, sample.t3), rate);
      const QuadraticMap1D map(sample.t1, sample.t2, sample.t3, sample.a);
      const auto pred = predict_limit_n2(map, sample.x0);
      const auto target = lift_limit(
          ReducedState::unchecked({pred.x_limit, sample.a - pred.x_limit}, sample.a), rate);
      auto z = random_full_state(2, rng);  // arbitrary start in S; one step lands on the slice
      long t = 0;
      double move = 1.0;
      while (t < max_steps && move > 1e-13) {
        const auto znext = apply_full(op, z);
        move = std::max(linf(znext.x, z.x), linf(znext.y, z.y));
        z = znext;
        ++t;
      }
      const double dev = std::max(linf(z.x, target.x), linf(z.y, target.y));
      worst = std::max(worst, dev);
      if (dev >= tol) {
        std::ostringstream os;
        os << "row " << row << " sample " << s << ": full-state limit off by " << fmt(dev);
        report.notes.push_back(os.str());
      }
    }
  }
  add_metric(report, "max full-state deviation from (x*, a-x*, bx*, b(a-x*))", worst, tol,
             worst < tol);

  // Period-2 parameters, proportional start: even iterates return to the
  // initial state and odd iterates to its swap.
  double worst_even = 0.0;
  double worst_odd = 0.0;
  for (int s = 0; s < 5; ++s) {
    const auto rate = MixingRate::from_a(rng.uniform(0.3, 0.7));
    const GonosomalOperator op(tensor_from_effective(0.0, 1.0, 1.0), rate);
    const double x0 = rng.uniform(0.05, 0.95) * rate.a;
    const auto z0 = lift(NormalizedState::unchecked({x0 / rate.a, 1.0 - x0 / rate.a}), rate);
    auto even = z0;
    for (int t = 0; t < 200; ++t) even = apply_full(op, even);
    worst_even = std::max(worst_even, std::max(linf(even.x, z0.x), linf(even.y, z0.y)));
    const auto swapped = lift(NormalizedState::unchecked({1.0 - x0 / rate.a, x0 / rate.a}), rate);
    auto odd = apply_full(op, even);
    worst_odd = std::max(worst_odd, std::max(linf(odd.x, swapped.x), linf(odd.y, swapped.y)));
  }
  add_metric(report, "even-iterate return deviation at (0,1,1)", worst_even, 1e-10,
             worst_even < 1e-10);
  add_metric(report, "odd-iterate swap deviation at (0,1,1)", worst_odd, 1e-10, worst_odd < 1e-10);
  report.notes.push_back(
      "the even/odd return formulas presume the proportional male block y = beta x; generic "
      "slice starts settle on the alternation of the first image instead");
  return report;
}

// ---------------------------------------------------------------------------
// PROP3 / THM4: funnel-map limits.

std::vector<std::pair<int, int>> funnel_pairs(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int j = 0; j < n; ++j) pairs.emplace_back(j, j);
  pairs.emplace_back(0, 2);
  pairs.emplace_back(1, 4);
  pairs.emplace_back(3, 1);
  return pairs;
}

ClaimReport run_prop3(const ClaimConfig& config) {
  ClaimReport report;
  report.pass = true;
  Rng rng(config.seed ^ 0x41ULL);
  const int n = 5;
  const auto rate = MixingRate::from_a(0.6);
  const int starts = config.samples.value_or(20);
  const double tol = config.tol.value_or(1e-8);
  // j != l: the j coordinate collapses doubly exponentially, 200 steps and
  // 1e-8 are comfortable. j = l: sigma' = sigma(1 - sigma/a), so the vertex
  // is approached algebraically (t * sigma -> a) and the limit location can
  // only be pinned to the gap the stopping rule reaches; the rate envelope is
  // checked separately.
  double worst_fast = 0.0;
  long worst_fast_steps = 0;
  double worst_slow = 0.0;
  double worst_envelope = 0.0;
  bool settled = true;
  bool vertices_exact = true;
  for (const auto& [j, l] : funnel_pairs(n)) {
    const auto u_op = build_u(n, j, l);
    const GonosomalOperator op(u_op.tensor, rate);
    for (int s = 0; s < starts; ++s) {
      auto xs = rng.simplex_point(n);
      std::vector<double> x(xs.size());
      for (size_t k = 0; k < x.size(); ++k) x[k] = rate.a * xs[k];
      const auto x0 = ReducedState::unchecked(std::move(x), rate.a);
      const auto pred_u = normalize(predict_limit_u(n, j, l, x0));
      OmegaOptions opts;
      opts.max_steps = (j != l) ? 200 : 100000;
      const auto limit = omega_limit(op, normalize(x0), opts);
      if (limit.kind != LimitReport::Kind::fixed_point) {
        settled = false;
        continue;
      }
      const double dev = linf(limit.points.front().u, pred_u.u);
      if (j != l) {
        worst_fast = std::max(worst_fast, dev);
        worst_fast_steps = std::max(worst_fast_steps, limit.steps_used);
      } else {
        worst_slow = std::max(worst_slow, dev);
      }
    }
    if (j == l) {
      // Envelope check: t * (1 - u_j) -> 1 in normalized coordinates.
      std::vector<double> u = rng.interior_simplex_point(n, 0.02);
      std::vector<double> next(u.size());
      const long horizon = 100000;
      for (long t = 0; t < horizon; ++t) {
        step_normalized(op.theta, u, next);
        u.swap(next);
      }
      worst_envelope = std::max(
          worst_envelope, std::abs(static_cast<double>(horizon) * (1.0 - u[static_cast<size_t>(j)]) - 1.0));
    } else {
      // Knife-edge start x0 = a e_j stays bitwise fixed under the funnel map.
      std::vector<double> vx(static_cast<size_t>(n), 0.0);
      vx[static_cast<size_t>(j)] = rate.a;
      auto vertex = ReducedState::unchecked(vx, rate.a);
      for (int t = 0; t < 200 && vertices_exact; ++t) {
        const auto next = apply_u(u_op, vertex);
        vertices_exact = vertices_exact && next.x == vertex.x;
        vertex = next;
      }
    }
  }
  add_metric(report, "all runs settle on a fixed point", settled ? 1.0 : 0.0, 1.0, settled);
  add_metric(report, "j != l: max |omega limit - predicted vertex| within 200 steps", worst_fast,
             tol, worst_fast < tol);
  add_info(report, "j != l: max steps used", static_cast<double>(worst_fast_steps));
  add_metric(report, "j = l: max |omega limit - predicted vertex|", worst_slow, 1e-4,
             worst_slow < 1e-4);
  add_metric(report, "j = l: |t (1 - u_j) - 1| at t = 1e5", worst_envelope, 0.05,
             worst_envelope < 0.05);
  add_metric(report, "vertex knife-edge starts stay bitwise fixed", vertices_exact ? 1.0 : 0.0,
             1.0, vertices_exact);
  report.notes.push_back(
      "the j = l family approaches its vertex algebraically (sigma' = sigma(1 - sigma/a), so "
      "t*sigma -> a); a 200-step/1e-8 gate is attainable only for j != l, where the j "
      "coordinate collapses doubly exponentially");
  return report;
}

ClaimReport run_thm4(const ClaimConfig& config) {
  ClaimReport report;
  report.pass = true;
  Rng rng(config.seed ^ 0x42ULL);
  const int n = 5;
  const auto rate = MixingRate::from_a(0.35);
  const int starts = config.samples.value_or(10);
  const double tol = config.tol.value_or(1e-8);
  double worst_fast = 0.0;
  double worst_slow = 0.0;
  for (const auto& [j, l] : funnel_pairs(n)) {
    const auto u_op = build_u(n, j, l);
    const GonosomalOperator op(u_op.tensor, rate);
    const int target = (j == l) ? j : l;  // generic starts never sit on the knife edge
    std::vector<double> tx(static_cast<size_t>(n), 0.0);
    tx[static_cast<size_t>(target)] = rate.a;
    const auto full_target = lift_limit(ReducedState::unchecked(tx, rate.a), rate);
    // Full-state runs inherit the two regimes: 300 steps reach 1e-8 only for
    // j != l; the algebraic j = l runs are held to the gap 2e4 steps attain.
    const int budget = (j != l) ? 300 : 20000;
    const int run_count = (j != l) ? starts : std::min(starts, 5);
    for (int s = 0; s < run_count; ++s) {
      auto z = random_full_state(n, rng);
      for (int t = 0; t < budget; ++t) z = apply_full(op, z);
      const double dev = std::max(linf(z.x, full_target.x), linf(z.y, full_target.y));
      if (j != l)
        worst_fast = std::max(worst_fast, dev);
      else
        worst_slow = std::max(worst_slow, dev);
    }
  }

  // Exact slice vertex start stays bitwise fixed under the full operator.
  bool vertex_exact = true;
  {
    const auto u_op = build_u(n, 1, 3);
    const GonosomalOperator op(u_op.tensor, rate);
    std::vector<double> vx(static_cast<size_t>(n), 0.0);
    std::vector<double> vy(static_cast<size_t>(n), 0.0);
    vx[1] = rate.a;
    vy[1] = rate.b;
    auto z = FullState::unchecked(vx, vy);
    for (int t = 0; t < 50 && vertex_exact; ++t) {
      const auto next = apply_full(op, z);
      vertex_exact = vertex_exact && next.x == z.x && next.y == z.y;
      z = next;
    }
  }
  add_metric(report, "j != l: max full-state deviation from the lifted vertex", worst_fast, tol,
             worst_fast < tol);
  add_metric(report, "j = l: max full-state deviation from the lifted vertex", worst_slow, 1e-3,
             worst_slow < 1e-3);
  add_metric(report, "slice vertex start stays bitwise fixed", vertex_exact ? 1.0 : 0.0, 1.0,
             vertex_exact);
  report.notes.push_back(
      "j = l runs converge algebraically and are held to the deviation a 2e4-step budget can "
      "reach; j != l runs hit 1e-8 within 300 steps");
  return report;
}

// ---------------------------------------------------------------------------
// EQ4E: the printed closed-form iterate, kept as a quarantined conjecture
// check; it disagrees with direct iteration away from the k = j component.

ClaimReport run_eq4e(const ClaimConfig& config) {
  ClaimReport report;
  report.pass = true;
  report.quarantined = true;
  Rng rng(config.seed ^ 0x51ULL);
  const int n = 4;
  const int j = 0;
  const int l = 2;
  const auto rate = MixingRate::from_a(0.5);
  const auto u_op = build_u(n, j, l);
  const double tol = config.tol.value_or(1e-9);

  auto xs = rng.simplex_point(n);
  while (xs[static_cast<size_t>(j)] < 0.15) xs = rng.simplex_point(n);
  std::vector<double> x0(xs.size());
  for (size_t k = 0; k < x0.size(); ++k) x0[k] = rate.a * xs[k];

  const int horizon = 6;
  double worst = 0.0;
  int first_k = -1;
  int first_m = -1;
  double first_closed = 0.0;
  double first_direct = 0.0;
  auto direct = ReducedState::unchecked(x0, rate.a);
  for (int m = 0; m < horizon; ++m) {
    direct = apply_u(u_op, direct);  // direct iterate x^(m+1)
    for (int k = 0; k < n; ++k) {
      double closed;
      if (k != l) {
        double base = x0[static_cast<size_t>(k)] * x0[static_cast<size_t>(j)] /
                      (rate.a * rate.a);
        double v = base;
        for (int q = 0; q < m; ++q) v *= v;  // base^(2^m)
        closed = rate.a * v;
      } else {
        double base = x0[static_cast<size_t>(j)] / rate.a;
        double v = base;
        for (int q = 0; q < m; ++q) v *= v;
        closed = rate.a *
                 (1.0 - v * (rate.a - x0[static_cast<size_t>(l)]) / x0[static_cast<size_t>(j)]);
      }
      const double dev = std::abs(closed - direct.x[static_cast<size_t>(k)]);
      worst = std::max(worst, dev);
      if (dev > tol && first_k < 0) {
        first_k = k;
        first_m = m;
        first_closed = closed;
        first_direct = direct.x[static_cast<size_t>(k)];
      }
    }
  }
  add_metric(report, "max |closed form - direct iterate|", worst, tol, worst <= tol);
  if (first_k >= 0) {
    std::ostringstream os;
    os << "first disagreement at (k=" << first_k + 1 << ", m=" << first_m << "): closed form "
       << fmt(first_closed) << ", direct iterate " << fmt(first_direct);
    report.notes.push_back(os.str());
    report.notes.push_back(
        "conjecture check: the printed closed form reproduces only the k = j component; the "
        "check is quarantined and does not fail the suite");
  }
  return report;
}

}  // namespace

const ClaimRegistry& ClaimRegistry::instance() {
  static const ClaimRegistry registry;
  return registry;
}

ClaimRegistry::ClaimRegistry() {
  entries_ = {
      {"L1", "every image of the full operator lies on the slice sum x = a", false, false,
       &run_l1},
      {"L2N", "iterates keep the male block proportional: y = beta x", false, false, &run_l2n},
      {"C1-EQUIV", "slice dynamics and normalized dynamics are conjugate", false, false,
       &run_conjugacy},
      {"T1-1", "Volterra-type (C1) trajectories approach the boundary", false, false, &run_t1_1},
      {"T1-2", "Volterra-type limit sets are a single point or infinite", false, true, &run_t1_2},
      {"T1-3", "no convergence to an isolated interior fixed point (C1)", false, true, &run_t1_3},
      {"T1-4", "block family (C2) converges to the first vertex exponentially", false, false,
       &run_t1_4},
      {"T1-5", "C3 family: closed-form fixed point and attracting 2-cycle", false, false,
       &run_t1_5},
      {"PROP1", "two-type limit table over the seven convergent rows", false, false, &run_prop1},
      {"THM3", "full-state limits follow the lifted two-type table", false, false, &run_thm3},
      {"PROP3", "funnel map limits: e_j on the knife edge, e_l otherwise", false, false,
       &run_prop3},
      {"THM4", "full-state funnel limits with the proportional male block", false, false,
       &run_thm4},
      {"EQ4E", "printed closed-form funnel iterate (conjecture check)", true, false, &run_eq4e},
  };
}

const ClaimRegistry::Entry* ClaimRegistry::find(const std::string& id) const {
  for (const auto& e : entries_)
    if (e.id == id) return &e;
  return nullptr;
}

std::vector<std::string> ClaimRegistry::ids() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.id);
  return out;
}

bool ClaimRegistry::contains(const std::string& id) const { return find(id) != nullptr; }

const std::string& ClaimRegistry::description(const std::string& id) const {
  const auto* e = find(id);
  if (!e) throw UnknownClaim("unknown claim id: " + id);
  return e->description;
}

ClaimReport ClaimRegistry::run(const std::string& id, const ClaimConfig& config) const {
  const auto* e = find(id);
  if (!e) throw UnknownClaim("unknown claim id: " + id);
  ClaimReport report;
  try {
    report = e->runner(config);
  } catch (const std::exception& ex) {
    report.pass = false;
    report.notes.push_back(std::string("claim aborted: ") + ex.what());
  }
  report.id = e->id;
  report.description = e->description;
  report.quarantined = report.quarantined || e->quarantined;
  report.evidence_only = report.evidence_only || e->evidence_only;
  return report;
}

std::vector<ClaimReport> ClaimRegistry::run_all(const ClaimConfig& config, int threads) const {
  if (threads <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    threads = static_cast<int>(std::min(hw == 0 ? 1u : hw, 8u));
  }
  std::vector<ClaimReport> reports(entries_.size());
  if (threads <= 1) {
    for (size_t i = 0; i < entries_.size(); ++i) reports[i] = run(entries_[i].id, config);
    return reports;
  }
  std::vector<std::future<ClaimReport>> futures;
  futures.reserve(entries_.size());
  for (const auto& e : entries_)
    futures.push_back(std::async(std::launch::async,
                                 [this, &e, &config] { return run(e.id, config); }));
  for (size_t i = 0; i < futures.size(); ++i) reports[i] = futures[i].get();
  return reports;
}

bool ClaimRegistry::suite_pass(const std::vector<ClaimReport>& reports) {
  for (const auto& r : reports)
    if (!r.quarantined && !r.pass) return false;
  return true;
}

}  // namespace gonodyn
