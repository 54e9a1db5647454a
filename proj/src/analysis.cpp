#include "gonodyn/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace gonodyn {

namespace {

constexpr double kHysteresis = 1e-9;   // classification band around |lambda| = 1
constexpr double kRangeTol = 1e-12;    // containment slack for roots of T

double linf_diff(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

double min_coord(std::span<const double> a) {
  double m = a[0];
  for (double v : a) m = std::min(m, v);
  return m;
}

// Orthonormal basis of the tangent slice {sum v = 0}: column j has j+1
// leading entries 1/sqrt((j+1)(j+2)) followed by -(j+1)/sqrt((j+1)(j+2)).
Eigen::MatrixXd tangent_basis(int n) {
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n - 1);
  for (int j = 0; j < n - 1; ++j) {
    const double norm = std::sqrt(static_cast<double>(j + 1) * (j + 2));
    for (int i = 0; i <= j; ++i) b(i, j) = 1.0 / norm;
    b(j + 1, j) = -static_cast<double>(j + 1) / norm;
  }
  return b;
}

// Euclidean projection onto the standard simplex.
std::vector<double> project_simplex(std::vector<double> v) {
  std::vector<double> mu = v;
  std::sort(mu.begin(), mu.end(), std::greater<>());
  double css = 0.0;
  double theta = 0.0;
  for (size_t j = 0; j < mu.size(); ++j) {
    css += mu[j];
    const double t = (css - 1.0) / static_cast<double>(j + 1);
    if (mu[j] - t > 0.0) theta = t;
  }
  for (auto& vi : v) vi = std::max(vi - theta, 0.0);
  return v;
}

// Halton sequence mapped onto the simplex through sorted-gap coordinates.
class HaltonSimplex {
 public:
  explicit HaltonSimplex(int n) : n_(n) {
    static constexpr int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (int d = 0; d < n_ - 1; ++d) bases_.push_back(primes[d % 12]);
  }

  std::vector<double> next() {
    ++index_;
    std::vector<double> cuts;
    cuts.reserve(static_cast<size_t>(n_) + 1);
    cuts.push_back(0.0);
    for (int d = 0; d < n_ - 1; ++d) cuts.push_back(radical_inverse(index_, bases_[static_cast<size_t>(d)]));
    cuts.push_back(1.0);
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> u(static_cast<size_t>(n_));
    for (int k = 0; k < n_; ++k) u[static_cast<size_t>(k)] = cuts[static_cast<size_t>(k + 1)] - cuts[static_cast<size_t>(k)];
    return u;
  }

 private:
  static double radical_inverse(long i, int base) {
    double f = 1.0;
    double r = 0.0;
    while (i > 0) {
      f /= base;
      r += f * static_cast<double>(i % base);
      i /= base;
    }
    return r;
  }
  int n_;
  long index_ = 0;
  std::vector<int> bases_;
};

Classification classify_spectrum(const std::vector<double>& magnitudes) {
  if (magnitudes.empty()) return Classification::attracting;  // zero-dimensional tangent space
  bool all_below = true;
  bool all_above = true;
  bool any_on_circle = false;
  for (double m : magnitudes) {
    all_below = all_below && m < 1.0 - kHysteresis;
    all_above = all_above && m > 1.0 + kHysteresis;
    any_on_circle = any_on_circle || std::abs(m - 1.0) <= kHysteresis;
  }
  if (all_below) return Classification::attracting;
  if (all_above) return Classification::repelling;
  if (any_on_circle) return Classification::non_hyperbolic;
  return Classification::saddle;
}

// Newton on V(u) - u within the tangent slice; iterates are pulled back onto
// the simplex after every step. The loop does not stop at the residual
// tolerance: at non-simple roots (singular linearization) the residual hits
// the sqrt(eps) floor while the iterate is still ~1e-6 away, and the
// linearly-converging Newton tail closes that gap. Iteration ends when the
// step itself stalls, and the best iterate seen is returned.
std::optional<std::vector<double>> newton_fixed_point(const HeredityTensor& theta,
                                                      const Eigen::MatrixXd& basis,
                                                      std::vector<double> u,
                                                      const FixedPointSearchOptions& opts) {
  const int n = theta.n;
  std::vector<double> image(static_cast<size_t>(n));
  std::vector<double> best = u;
  double best_res = std::numeric_limits<double>::infinity();
  Eigen::VectorXd residual(n);
  for (int iter = 0; iter < opts.max_newton_iters; ++iter) {
    apply_normalized_raw(theta, u, image);
    double res = 0.0;
    for (int k = 0; k < n; ++k) {
      residual(k) = image[static_cast<size_t>(k)] - u[static_cast<size_t>(k)];
      res = std::max(res, std::abs(residual(k)));
    }
    if (res < best_res) {
      best_res = res;
      best = u;
    }
    if (res == 0.0) break;
    Eigen::MatrixXd jac = jacobian_normalized_raw(theta, u);
    jac.diagonal().array() -= 1.0;
    const Eigen::MatrixXd reduced = basis.transpose() * jac * basis;
    const Eigen::VectorXd rhs = -basis.transpose() * residual;
    Eigen::VectorXd step = reduced.colPivHouseholderQr().solve(rhs);
    if (!step.allFinite()) break;
    const double norm = step.lpNorm<Eigen::Infinity>();
    if (norm < 1e-16) break;
    if (norm > 0.5) step *= 0.5 / norm;  // keep steps inside the simplex scale
    const Eigen::VectorXd full = basis * step;
    for (int k = 0; k < n; ++k) u[static_cast<size_t>(k)] += full(k);
    u = project_simplex(std::move(u));
  }
  if (best_res < opts.newton_tol) return best;
  return std::nullopt;
}

}  // namespace

const char* to_string(Classification c) {
  switch (c) {
    case Classification::attracting: return "attracting";
    case Classification::repelling: return "repelling";
    case Classification::neutral: return "neutral";
    case Classification::saddle: return "saddle";
    case Classification::non_hyperbolic: return "non-hyperbolic";
  }
  return "unknown";
}

const char* to_string(LimitReport::Kind k) {
  switch (k) {
    case LimitReport::Kind::fixed_point: return "fixed_point";
    case LimitReport::Kind::cycle: return "cycle";
    case LimitReport::Kind::boundary_attracted: return "boundary_attracted";
    case LimitReport::Kind::undetermined: return "undetermined";
  }
  return "unknown";
}

N2FixedPoints fixed_points_n2(const QuadraticMap1D& map) {
  N2FixedPoints out{N2FixedPoints::Branch::quadratic, false, {}, {}};
  const double t1 = map.theta1;
  const double t2 = map.theta2;
  const double t3 = map.theta3;
  const double a = map.a;

  if (t1 == 1.0 && t2 == 1.0 && t3 == 0.0) {
    out.branch = N2FixedPoints::Branch::identity;
    out.whole_interval = true;
    return out;
  }

  std::vector<double> roots;
  const double lead = t1 + t3 - t2;
  if (lead == 0.0) {
    out.branch = N2FixedPoints::Branch::affine;
    const double denom = 1.0 - t2 + 2.0 * t3;
    if (denom != 0.0) roots.push_back(t3 * a / denom);
  } else {
    // Fixed points solve alpha x^2 + beta x + gamma = 0 with the discriminant
    // (theta2-1)^2 + 4 theta3 (1-theta1); the larger-|q| root is formed first
    // so near-affine parameter sets keep the finite root accurate.
    const double alpha = lead / a;
    const double beta = t2 - 2.0 * t3 - 1.0;
    const double gamma = t3 * a;
    const double disc = (t2 - 1.0) * (t2 - 1.0) + 4.0 * t3 * (1.0 - t1);
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      const double q = (beta >= 0.0) ? -0.5 * (beta + sq) : -0.5 * (beta - sq);
      if (q == 0.0) {
        roots.push_back(0.0);
      } else {
        roots.push_back(q / alpha);
        roots.push_back(gamma / q);
      }
    }
  }

  std::vector<double> kept;
  for (double r : roots) {
    if (r >= -kRangeTol && r <= a + kRangeTol) kept.push_back(std::clamp(r, 0.0, a));
  }
  std::sort(kept.begin(), kept.end());
  // Coincident roots (discriminant zero) collapse to one record.
  for (size_t i = 0; i < kept.size(); ++i) {
    if (i > 0 && std::abs(kept[i] - kept[i - 1]) <= 1e-7) continue;
    const double x = kept[i];
    out.roots.push_back(x);
    FixedPointRecord rec{NormalizedState::unchecked({x / a, 1.0 - x / a}),
                         std::abs(t_apply(map, x) - x), Classification::neutral, {},
                         t_derivative(map, x)};
    rec.classification = classify_1d(map, x);
    out.records.push_back(std::move(rec));
  }
  return out;
}

Classification classify_1d(const QuadraticMap1D& map, double x_star) {
  const double miss = std::abs(t_apply(map, x_star) - x_star);
  if (miss >= 1e-9) {
    std::ostringstream os;
    os << "x = " << x_star << " misses fixedness by " << miss;
    throw NotAFixedPoint(os.str());
  }
  const double slope = std::abs(t_derivative(map, x_star));
  if (slope < 1.0 - kHysteresis) return Classification::attracting;
  if (slope > 1.0 + kHysteresis) return Classification::repelling;
  return Classification::neutral;
}

std::vector<double> tangent_spectrum(const GonosomalOperator& op, const NormalizedState& u) {
  const int n = op.size();
  if (n == 1) return {};
  const Eigen::MatrixXd basis = tangent_basis(n);
  const Eigen::MatrixXd jac = jacobian_normalized_raw(op.theta, u.u);
  const Eigen::MatrixXd reduced = basis.transpose() * jac * basis;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(reduced, /*computeEigenvectors=*/false);
  std::vector<double> mags(static_cast<size_t>(n - 1));
  for (int i = 0; i < n - 1; ++i) mags[static_cast<size_t>(i)] = std::abs(solver.eigenvalues()(i));
  std::sort(mags.begin(), mags.end(), std::greater<>());
  return mags;
}

Classification classify_nd(const GonosomalOperator& op, const FixedPointRecord& record) {
  if (record.residual >= 1e-9) {
    std::ostringstream os;
    os << "record residual " << record.residual << " is too large for classification";
    throw NotAFixedPoint(os.str());
  }
  return classify_spectrum(tangent_spectrum(op, record.u));
}

FixedPointEnumeration enumerate_fixed_points(const GonosomalOperator& op,
                                             const FixedPointSearchOptions& opts) {
  FixedPointEnumeration out;
  const int n = op.size();

  if (n == 2) {
    const auto map = QuadraticMap1D::from_tensor(op.theta, op.rate);
    if (map.theta1 == 1.0 && map.theta2 == 1.0 && map.theta3 == 0.0) {
      out.whole_interval_n2 = true;
      out.warnings.push_back("identity map: every point of [0,a] is fixed");
      return out;
    }
  }

  std::vector<std::vector<double>> candidates;
  auto consider = [&](const std::vector<double>& u) {
    std::vector<double> image(static_cast<size_t>(n));
    apply_normalized_raw(op.theta, u, image);
    if (linf_diff(image, u) < opts.accept_residual) candidates.push_back(u);
  };

  if (n == 1) {
    consider({1.0});
  } else {
    const Eigen::MatrixXd basis = tangent_basis(n);
    std::vector<std::vector<double>> seeds;
    for (int k = 0; k < n; ++k) {
      std::vector<double> v(static_cast<size_t>(n), 0.0);
      v[static_cast<size_t>(k)] = 1.0;
      seeds.push_back(std::move(v));
    }
    seeds.emplace_back(static_cast<size_t>(n), 1.0 / n);
    HaltonSimplex halton(n);
    for (int s = 0; s < opts.multistart; ++s) seeds.push_back(halton.next());

    for (const auto& seed : seeds) {
      // Exactly fixed seeds (vertices, typically) are kept as-is; Newton can
      // stall there when the linearization is singular.
      std::vector<double> image(static_cast<size_t>(n));
      apply_normalized_raw(op.theta, seed, image);
      if (linf_diff(image, seed) < opts.newton_tol) {
        candidates.push_back(seed);
        continue;
      }
      if (auto u = newton_fixed_point(op.theta, basis, seed, opts)) consider(*u);
    }
  }

  // Single-linkage dedup: candidates chained within the dedup radius collapse
  // into one record. Non-simple fixed points (singular linearization) come
  // back from Newton as a sqrt(eps)-wide cloud of near-roots, and the cloud
  // must not be reported as many points; the smallest-residual member
  // represents the cluster.
  std::vector<std::pair<std::vector<double>, double>> scored;
  std::vector<double> image(static_cast<size_t>(n));
  for (auto& u : candidates) {
    apply_normalized_raw(op.theta, u, image);
    scored.emplace_back(std::move(u), linf_diff(image, u));
  }
  std::sort(scored.begin(), scored.end(),
            [](const auto& lhs, const auto& rhs) { return lhs.second < rhs.second; });
  std::vector<std::vector<std::pair<std::vector<double>, double>>> clusters;
  for (auto& cand : scored) {
    std::vector<size_t> hits;
    for (size_t ci = 0; ci < clusters.size(); ++ci)
      for (const auto& member : clusters[ci])
        if (linf_diff(cand.first, member.first) <= opts.dedup_radius) {
          hits.push_back(ci);
          break;
        }
    if (hits.empty()) {
      clusters.push_back({std::move(cand)});
      continue;
    }
    clusters[hits.front()].push_back(std::move(cand));
    for (size_t h = hits.size(); h-- > 1;) {
      auto& target = clusters[hits.front()];
      auto& victim = clusters[hits[h]];
      target.insert(target.end(), std::make_move_iterator(victim.begin()),
                    std::make_move_iterator(victim.end()));
      clusters.erase(clusters.begin() + static_cast<long>(hits[h]));
    }
  }
  std::vector<std::pair<std::vector<double>, double>> unique;
  for (auto& cluster : clusters) unique.push_back(std::move(cluster.front()));
  std::sort(unique.begin(), unique.end(),
            [](const auto& lhs, const auto& rhs) { return lhs.first < rhs.first; });

  for (auto& [u, res] : unique) {
    FixedPointRecord rec{NormalizedState::unchecked(u), res, Classification::neutral, {}, {}};
    rec.spectrum = tangent_spectrum(op, rec.u);
    rec.classification = classify_spectrum(rec.spectrum);
    out.records.push_back(std::move(rec));
  }
  if (out.records.empty())
    out.warnings.push_back("no fixed point located from any seed; at least one was expected");
  if (out.records.size() > 50)
    out.warnings.push_back("unusually many fixed points; the fixed-point set may be a continuum");
  return out;
}

std::vector<FullState> iterate(const GonosomalOperator& op, const FullState& z0, int steps) {
  std::vector<FullState> trajectory;
  trajectory.reserve(static_cast<size_t>(steps) + 1);
  trajectory.push_back(z0);
  for (int t = 0; t < steps; ++t) trajectory.push_back(apply_full(op, trajectory.back()));
  return trajectory;
}

LimitReport omega_limit(const GonosomalOperator& op, const NormalizedState& u0,
                        const OmegaOptions& opts) {
  const int n = op.size();
  const int window = std::max(opts.tail_window, opts.max_period + opts.confirm + 1);
  std::vector<std::vector<double>> ring(static_cast<size_t>(window));
  long pushed = 0;
  auto push = [&](const std::vector<double>& u) {
    ring[static_cast<size_t>(pushed % window)] = u;
    ++pushed;
  };
  auto tail_at = [&](long s) -> const std::vector<double>& {
    const long count = std::min<long>(pushed, window);
    return ring[static_cast<size_t>((pushed - count + s) % window)];
  };
  auto tail_len = [&]() { return std::min<long>(pushed, window); };
  auto boundary_gap = [&]() {
    double g = 0.0;
    for (long s = 0; s < tail_len(); ++s) g = std::max(g, min_coord(tail_at(s)));
    return g;
  };
  auto samples = [&](long count) {
    std::vector<NormalizedState> pts;
    const long len = tail_len();
    for (long s = std::max<long>(0, len - count); s < len; ++s)
      pts.push_back(NormalizedState::unchecked(tail_at(s)));
    return pts;
  };

  std::vector<double> cur = u0.u;
  std::vector<double> next(static_cast<size_t>(n));
  push(cur);
  int consecutive = 0;
  double gap = std::numeric_limits<double>::infinity();
  long steps_used = 0;
  for (long t = 1; t <= opts.max_steps; ++t) {
    step_normalized(op.theta, cur, next);
    gap = linf_diff(next, cur);
    cur.swap(next);
    push(cur);
    steps_used = t;
    if (gap < opts.tol) {
      if (++consecutive >= opts.confirm) {
        LimitReport report{LimitReport::Kind::fixed_point, 1,
                           {NormalizedState::unchecked(cur)}, t, gap, boundary_gap()};
        return report;
      }
    } else {
      consecutive = 0;
    }
  }

  const long len = tail_len();
  for (int p = 2; p <= opts.max_period; ++p) {
    if (len < p + opts.confirm) break;
    bool ok = true;
    double worst = 0.0;
    for (int q = 0; q < opts.confirm && ok; ++q) {
      const long s = len - 1 - p - q;
      const double d = linf_diff(tail_at(s + p), tail_at(s));
      worst = std::max(worst, d);
      ok = d < opts.tol;
    }
    if (ok) {
      std::vector<NormalizedState> points;
      for (long s = len - p; s < len; ++s) points.push_back(NormalizedState::unchecked(tail_at(s)));
      return LimitReport{LimitReport::Kind::cycle, p, std::move(points), steps_used, worst,
                         boundary_gap()};
    }
  }

  const double bgap = boundary_gap();
  if (bgap < opts.tol)
    return LimitReport{LimitReport::Kind::boundary_attracted, 0, samples(4), steps_used, gap, bgap};
  return LimitReport{LimitReport::Kind::undetermined, 0, samples(8), steps_used, gap, bgap};
}

LimitReport omega_limit(const GonosomalOperator& op, const FullState& z0,
                        const OmegaOptions& opts) {
  // One full application lands on the slice with y proportional to x; from
  // there the normalized dynamics are conjugate.
  const FullState z1 = apply_full(op, z0);
  std::vector<double> u(z1.x.size());
  for (size_t k = 0; k < u.size(); ++k) u[k] = z1.x[k] / op.rate.a;
  OmegaOptions inner = opts;
  inner.max_steps = std::max<long>(1, opts.max_steps - 1);
  LimitReport report = omega_limit(op, NormalizedState::unchecked(std::move(u)), inner);
  report.steps_used += 1;
  return report;
}

N2LimitPrediction predict_limit_n2(const QuadraticMap1D& map, double x0) {
  const double t1 = map.theta1;
  const double t2 = map.theta2;
  const double t3 = map.theta3;
  const double a = map.a;
  N2LimitPrediction pred{N2LimitPrediction::Kind::fixed_point, 0.0, 0.0, 0.0, 0};

  if (t1 == 1.0 && t2 == 1.0 && t3 == 0.0) {
    pred.kind = N2LimitPrediction::Kind::identity;
    pred.x_limit = x0;
    return pred;
  }
  if (t1 == 0.0 && t2 == 1.0 && t3 == 1.0) {
    pred.kind = N2LimitPrediction::Kind::period2;
    pred.cycle_a = x0;
    pred.cycle_b = a - x0;
    return pred;
  }
  if (t1 + t3 == t2) {  // affine locus: the printed x* formula degenerates here
    pred.x_limit = t3 * a / (1.0 - t2 + 2.0 * t3);
    return pred;
  }

  auto minus_branch_root = [&]() {
    const double alpha = (t1 + t3 - t2) / a;
    const double beta = t2 - 2.0 * t3 - 1.0;
    const double gamma = t3 * a;
    const double disc = (t2 - 1.0) * (t2 - 1.0) + 4.0 * t3 * (1.0 - t1);
    const double sq = std::sqrt(std::max(disc, 0.0));
    const double q = (beta >= 0.0) ? -0.5 * (beta + sq) : -0.5 * (beta - sq);
    if (q == 0.0) return 0.0;
    return (beta >= 0.0) ? q / alpha : gamma / q;
  };

  if (t1 < 1.0 && t2 <= 1.0 && t3 == 0.0) {
    pred.x_limit = 0.0;
    pred.table_row = 1;
  } else if (t1 == 1.0 && t2 >= 1.0 && t3 > 0.0) {
    pred.x_limit = a;
    pred.table_row = 2;
  } else if (t1 < 1.0 && t3 > 0.0) {
    pred.x_limit = minus_branch_root();
    pred.table_row = 3;
  } else if (t1 == 1.0 && t2 < 1.0 && t3 > 0.0) {
    pred.x_limit = t3 * a / (t3 - t2 + 1.0);
    pred.table_row = 4;
  } else if (t1 == 1.0 && t2 < 1.0 && t3 == 0.0) {
    pred.x_limit = 0.0;
    pred.table_row = 5;
  } else if (t1 == 1.0 && t2 > 1.0 && t2 < 2.0 && t3 == 0.0) {
    pred.x_limit = a;
    pred.table_row = 6;
  } else {  // theta2 in (1,2], theta3 = 0
    pred.x_limit = (1.0 - t2) * a / (t1 - t2);
    pred.table_row = 7;
  }
  return pred;
}

ReducedState predict_limit_u(int n, int j, int l, const ReducedState& x0) {
  if (j < 0 || j >= n || l < 0 || l >= n || x0.size() != n)
    throw IndexOutOfRange("funnel map indices must lie in 1..n");
  // Knife-edge membership x0_j = a is an exact comparison: floating-point
  // starts off the edge converge generically.
  const int target = (j == l) ? j : (x0.x[static_cast<size_t>(j)] == x0.a ? j : l);
  std::vector<double> x(static_cast<size_t>(n), 0.0);
  x[static_cast<size_t>(target)] = x0.a;
  return ReducedState::unchecked(std::move(x), x0.a);
}

FullState lift_limit(const ReducedState& x_limit, const MixingRate& rate) {
  std::vector<double> y(x_limit.x.size());
  for (size_t k = 0; k < y.size(); ++k) y[k] = rate.beta * x_limit.x[k];
  return FullState::unchecked(x_limit.x, std::move(y));
}

FullState lift_record(const FixedPointRecord& record, const MixingRate& rate) {
  return lift(record.u, rate);
}

}  // namespace gonodyn
