// gonodyn: config-driven simulation and analysis of sex-linked inheritance
// dynamics. JSON reports go to stdout, human summaries to stderr.
//
// Exit codes: 0 success, 1 invalid config or failed checks, 2 parse error,
// 3 undetermined dynamics, 4 unknown claim id.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gonodyn/analysis.hpp"
#include "gonodyn/claims.hpp"
#include "gonodyn/scenario.hpp"
#include "gonodyn/serialize.hpp"

namespace {

using gonodyn::ScenarioConfig;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitParse = 2;
constexpr int kExitUndetermined = 3;
constexpr int kExitUnknownClaim = 4;

int thread_budget() {
  if (const char* env = std::getenv("GONODYN_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::min(hw == 0 ? 1u : hw, 8u));
}

struct OutputTarget {
  std::ofstream file;
  std::ostream* stream = &std::cout;

  explicit OutputTarget(const std::string& path) {
    if (path.empty() || path == "-") return;
    file.open(path, std::ios::binary);
    if (!file) throw gonodyn::InvalidState("cannot open output file " + path);
    stream = &file;
  }
};

ScenarioConfig load_scenario(const std::string& path) {
  return gonodyn::scenario_from_json(gonodyn::load_json_file(path));
}

// ---------------------------------------------------------------------------

int cmd_validate(const std::string& path, bool json_only) {
  const auto doc = gonodyn::load_json_file(path);
  const auto result = gonodyn::validate_scenario_json(doc);
  nlohmann::json issues = nlohmann::json::array();
  for (const auto& issue : result.issues)
    issues.push_back({{"where", issue.where}, {"message", issue.message}});
  nlohmann::json report = {{"pass", result.pass}, {"issues", issues}};
  if (result.tensor_report) report["tensor"] = to_json(*result.tensor_report);
  std::cout << report.dump(2) << "\n";
  if (!json_only) {
    if (result.pass) {
      std::cerr << "config ok\n";
    } else {
      std::cerr << "config invalid:\n";
      for (const auto& issue : result.issues)
        std::cerr << "  " << issue.where << ": " << issue.message << "\n";
      if (result.tensor_report)
        for (const auto& v : result.tensor_report->violations)
          std::cerr << "  tensor row (" << v.i + 1 << "," << v.p + 1 << ") sums to " << v.row_sum
                    << "\n";
    }
  }
  return result.pass ? kExitOk : kExitInvalid;
}

// ---------------------------------------------------------------------------

int cmd_simulate(const std::string& path, long steps_flag, const std::string& out_path,
                 const std::string& format, const std::string& level) {
  const auto cfg = load_scenario(path);
  const long steps = steps_flag >= 0 ? steps_flag : cfg.run.steps;
  const int n = cfg.size();
  OutputTarget out(out_path);

  std::vector<std::vector<double>> xs;
  std::vector<std::vector<double>> ys;
  bool with_y = false;
  try {
    if (level == "full") {
      with_y = true;
      auto z = cfg.initial_full();
      xs.push_back(z.x);
      ys.push_back(z.y);
      for (long t = 1; t <= steps; ++t) {
        z = apply_full(cfg.op, z);
        xs.push_back(z.x);
        ys.push_back(z.y);
      }
    } else if (level == "reduced") {
      auto x = cfg.initial_reduced();
      xs.push_back(x.x);
      for (long t = 1; t <= steps; ++t) {
        x = apply_reduced(cfg.op, x);
        xs.push_back(x.x);
      }
    } else if (level == "normalized") {
      auto u = cfg.initial_normalized();
      xs.push_back(u.u);
      for (long t = 1; t <= steps; ++t) {
        u = apply_normalized(cfg.op, u);
        xs.push_back(u.u);
      }
    } else {
      throw gonodyn::InvalidState("--level must be full, reduced or normalized");
    }
  } catch (const gonodyn::ZeroSexMass& e) {
    std::cerr << "step " << xs.size() << ": " << e.what() << "\n";
    return kExitInvalid;
  }

  if (format == "csv") {
    std::ostringstream header;
    header << "t";
    for (int k = 1; k <= n; ++k) header << ",x_" << k;
    if (with_y)
      for (int k = 1; k <= n; ++k) header << ",y_" << k;
    *out.stream << header.str() << "\n";
    for (size_t t = 0; t < xs.size(); ++t) {
      *out.stream << t;
      for (double v : xs[t]) *out.stream << "," << gonodyn::format_g17(v);
      if (with_y)
        for (double v : ys[t]) *out.stream << "," << gonodyn::format_g17(v);
      *out.stream << "\n";
    }
  } else if (format == "json") {
    nlohmann::json rows = nlohmann::json::array();
    for (size_t t = 0; t < xs.size(); ++t) {
      nlohmann::json row = {{"t", t}, {"x", xs[t]}};
      if (with_y) row["y"] = ys[t];
      rows.push_back(std::move(row));
    }
    *out.stream << rows.dump(2) << "\n";
  } else {
    throw gonodyn::InvalidState("--format must be csv or json");
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_fixed_points(const std::string& path, bool json_only) {
  const auto cfg = load_scenario(path);
  nlohmann::json out;
  std::ostringstream human;

  if (cfg.size() == 2) {
    const auto map = gonodyn::QuadraticMap1D::from_tensor(cfg.op.theta, cfg.op.rate);
    const auto closed = fixed_points_n2(map);
    const char* branch = closed.branch == gonodyn::N2FixedPoints::Branch::quadratic ? "quadratic"
                         : closed.branch == gonodyn::N2FixedPoints::Branch::affine  ? "affine"
                                                                                    : "identity";
    nlohmann::json records = nlohmann::json::array();
    for (const auto& rec : closed.records) records.push_back(to_json(rec));
    out["closed_form"] = {{"branch", branch},
                          {"whole_interval", closed.whole_interval},
                          {"roots", closed.roots},
                          {"records", records}};
    human << "closed-form branch: " << branch << "\n";
    if (closed.whole_interval) human << "identity: every point of [0,a] is fixed\n";
    for (const auto& rec : closed.records)
      human << "  x1 = " << gonodyn::format_g17(rec.u.u[0] * cfg.op.rate.a) << "  ("
            << to_string(rec.classification) << ", T' = " << *rec.slope << ")\n";
  }

  const auto found = enumerate_fixed_points(cfg.op);
  nlohmann::json records = nlohmann::json::array();
  for (const auto& rec : found.records) records.push_back(to_json(rec));
  out["records"] = records;
  out["whole_interval"] = found.whole_interval_n2;
  out["warnings"] = found.warnings;
  std::cout << out.dump(2) << "\n";

  if (!json_only) {
    human << found.records.size() << " fixed point(s) from the solver\n";
    for (const auto& rec : found.records) {
      human << "  u = (";
      for (size_t k = 0; k < rec.u.u.size(); ++k)
        human << (k ? ", " : "") << gonodyn::format_g17(rec.u.u[k]);
      human << ")  residual " << rec.residual << "  " << to_string(rec.classification) << "\n";
    }
    for (const auto& w : found.warnings) human << "  note: " << w << "\n";
    std::cerr << human.str();
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct OmegaFlags {
  std::optional<long> max_steps;
  std::optional<double> tol;
  std::optional<int> max_period;
  std::optional<int> tail_window;
};

int cmd_omega(const std::string& path, const OmegaFlags& flags, bool json_only) {
  const auto cfg = load_scenario(path);
  auto opts = cfg.run.omega;
  if (flags.max_steps) opts.max_steps = *flags.max_steps;
  if (flags.tol) opts.tol = *flags.tol;
  if (flags.max_period) opts.max_period = *flags.max_period;
  if (flags.tail_window) opts.tail_window = *flags.tail_window;
  gonodyn::LimitReport report =
      cfg.initial && std::holds_alternative<gonodyn::FullState>(*cfg.initial)
          ? omega_limit(cfg.op, std::get<gonodyn::FullState>(*cfg.initial), opts)
          : omega_limit(cfg.op, cfg.initial_normalized(), opts);
  std::cout << to_json(report).dump(2) << "\n";
  if (!json_only) {
    std::cerr << to_string(report.kind);
    if (report.kind == gonodyn::LimitReport::Kind::cycle)
      std::cerr << " (period " << report.period << ")";
    std::cerr << " after " << report.steps_used << " steps, final gap " << report.final_gap
              << "\n";
  }
  return report.kind == gonodyn::LimitReport::Kind::undetermined ? kExitUndetermined : kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_verify(const std::vector<std::string>& ids, std::uint64_t seed, bool json_only) {
  const auto& registry = gonodyn::ClaimRegistry::instance();
  std::vector<std::string> unknown;
  for (const auto& id : ids)
    if (!registry.contains(id)) unknown.push_back(id);
  if (!unknown.empty()) {
    std::cerr << "unknown claim id(s):";
    for (const auto& id : unknown) std::cerr << " " << id;
    std::cerr << "\n";
    return kExitUnknownClaim;
  }

  gonodyn::ClaimConfig config;
  config.seed = seed;
  std::vector<gonodyn::ClaimReport> reports;
  if (ids.empty()) {
    reports = registry.run_all(config, thread_budget());
  } else {
    for (const auto& id : ids) reports.push_back(registry.run(id, config));
  }

  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : reports) out.push_back(to_json(r));
  std::cout << out.dump(2) << "\n";

  if (!json_only) {
    for (const auto& r : reports) {
      std::cerr << (r.pass ? "PASS " : "FAIL ") << r.id;
      if (r.quarantined) std::cerr << " [quarantined]";
      if (r.evidence_only) std::cerr << " [evidence-only]";
      std::cerr << " — " << r.description << "\n";
      for (const auto& note : r.notes) std::cerr << "    note: " << note << "\n";
    }
  }
  return gonodyn::ClaimRegistry::suite_pass(reports) ? kExitOk : kExitInvalid;
}

// ---------------------------------------------------------------------------

struct GridAxis {
  std::string name;
  std::vector<double> values;
};

std::vector<GridAxis> parse_grid(const std::string& spec) {
  std::vector<GridAxis> axes;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw gonodyn::InvalidState("grid axis needs name=start:stop:step");
    GridAxis axis;
    axis.name = part.substr(0, eq);
    double start = 0, stop = 0, step = 0;
    if (std::sscanf(part.c_str() + eq + 1, "%lf:%lf:%lf", &start, &stop, &step) != 3 || step <= 0)
      throw gonodyn::InvalidState("grid axis needs name=start:stop:step with step > 0");
    const long count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count < 1 || count > 1000000) throw gonodyn::InvalidState("grid axis size out of range");
    for (long i = 0; i < count; ++i) axis.values.push_back(start + static_cast<double>(i) * step);
    axes.push_back(std::move(axis));
  }
  if (axes.empty()) throw gonodyn::InvalidState("empty grid spec");
  return axes;
}

struct SweepRow {
  std::vector<double> coords;
  std::string pred_kind;
  std::string sim_kind;
  std::string pred_detail;
  std::string sim_detail;
  bool agree = false;
};

std::string join_values(const std::vector<double>& vs) {
  std::string out;
  for (size_t i = 0; i < vs.size(); ++i) {
    if (i) out += ";";
    out += gonodyn::format_g17(vs[i]);
  }
  return out;
}

int cmd_sweep(const std::string& path, const std::string& grid_spec, const std::string& out_path,
              double agree_tol) {
  const auto cfg = load_scenario(path);
  const auto axes = parse_grid(grid_spec);

  bool theta_sweep = false;
  bool c_sweep = false;
  for (const auto& axis : axes) {
    if (axis.name == "theta1" || axis.name == "theta2" || axis.name == "theta3" ||
        axis.name == "a")
      theta_sweep = true;
    else if (axis.name == "c")
      c_sweep = true;
    else
      throw gonodyn::InvalidState("unknown grid axis '" + axis.name +
                                  "' (expected theta1, theta2, theta3, a or c)");
  }
  if (theta_sweep && c_sweep)
    throw gonodyn::InvalidState("cannot mix the two-type cube axes with the C3 axis");
  if (theta_sweep && cfg.size() != 2)
    throw gonodyn::InvalidState("theta sweeps require a two-type scenario");
  if (c_sweep && cfg.size() != 3)
    throw gonodyn::InvalidState("c sweeps require a three-type C3 scenario");
  if (!cfg.initial) throw gonodyn::InvalidState("sweep requires an initial state in the config");

  long total = 1;
  for (const auto& axis : axes) total *= static_cast<long>(axis.values.size());

  // Defaults from the base scenario; grid axes override per point.
  double base_t1 = 0, base_t2 = 0, base_t3 = 0;
  if (cfg.size() == 2) {
    const auto base_map = gonodyn::QuadraticMap1D::from_tensor(cfg.op.theta, cfg.op.rate);
    base_t1 = base_map.theta1;
    base_t2 = base_map.theta2;
    base_t3 = base_map.theta3;
  }
  const double base_a = cfg.op.rate.a;

  std::vector<SweepRow> rows(static_cast<size_t>(total));
  const auto omega_opts = cfg.run.omega;

  auto run_point = [&](long index) {
    SweepRow row;
    long rest = index;
    std::vector<double> coords(axes.size());
    for (size_t d = axes.size(); d-- > 0;) {
      const long size = static_cast<long>(axes[d].values.size());
      coords[d] = axes[d].values[static_cast<size_t>(rest % size)];
      rest /= size;
    }
    row.coords = coords;

    if (theta_sweep) {
      double t1 = base_t1, t2 = base_t2, t3 = base_t3, a = base_a;
      for (size_t d = 0; d < axes.size(); ++d) {
        if (axes[d].name == "theta1") t1 = coords[d];
        if (axes[d].name == "theta2") t2 = coords[d];
        if (axes[d].name == "theta3") t3 = coords[d];
        if (axes[d].name == "a") a = coords[d];
      }
      const auto rate = gonodyn::MixingRate::from_a(a);
      const gonodyn::QuadraticMap1D map(t1, t2, t3, a);
      const double x0 = cfg.initial_normalized().u[0] * a;
      const auto pred = predict_limit_n2(map, x0);

      auto tensor = gonodyn::HeredityTensor::zeros(2);
      tensor.at(0, 0, 0) = t1;
      tensor.at(0, 0, 1) = 1 - t1;
      tensor.at(0, 1, 0) = t2 / 2;
      tensor.at(0, 1, 1) = 1 - t2 / 2;
      tensor.at(1, 0, 0) = t2 / 2;
      tensor.at(1, 0, 1) = 1 - t2 / 2;
      tensor.at(1, 1, 0) = t3;
      tensor.at(1, 1, 1) = 1 - t3;
      const gonodyn::GonosomalOperator op(std::move(tensor), rate);
      const auto report = omega_limit(
          op, gonodyn::NormalizedState::unchecked({x0 / a, 1.0 - x0 / a}), omega_opts);

      row.sim_kind = to_string(report.kind);
      std::vector<double> sim_x1;
      for (const auto& pt : report.points) sim_x1.push_back(pt.u[0] * a);
      row.sim_detail = join_values(sim_x1);
      using Kind = gonodyn::N2LimitPrediction::Kind;
      switch (pred.kind) {
        case Kind::identity:
          row.pred_kind = "identity";
          row.pred_detail = join_values({x0});
          row.agree = report.kind == gonodyn::LimitReport::Kind::fixed_point &&
                      std::abs(sim_x1.front() - x0) < agree_tol;
          break;
        case Kind::period2: {
          row.pred_kind = "cycle";
          row.pred_detail = join_values({pred.cycle_a, pred.cycle_b});
          bool ok = report.kind == gonodyn::LimitReport::Kind::cycle && report.period == 2;
          for (double v : sim_x1)
            ok = ok && (std::abs(v - pred.cycle_a) < agree_tol ||
                        std::abs(v - pred.cycle_b) < agree_tol);
          row.agree = ok;
          break;
        }
        case Kind::fixed_point:
          row.pred_kind = "fixed_point";
          row.pred_detail = join_values({pred.x_limit});
          row.agree = report.kind == gonodyn::LimitReport::Kind::fixed_point &&
                      std::abs(sim_x1.front() - pred.x_limit) < agree_tol;
          break;
      }
    } else {
      const double c = coords.front();
      const gonodyn::GonosomalOperator op(gonodyn::build_c3(c), cfg.op.rate);
      const auto report = omega_limit(op, cfg.initial_normalized(), omega_opts);
      row.pred_kind = "cycle";
      row.pred_detail = "0;0;1|" + join_values({c, 1 - c, 0});
      row.sim_kind = to_string(report.kind);
      std::string detail;
      bool ok = report.kind == gonodyn::LimitReport::Kind::cycle && report.period == 2;
      const std::vector<double> pa = {0, 0, 1};
      const std::vector<double> pb = {c, 1 - c, 0};
      for (const auto& pt : report.points) {
        if (!detail.empty()) detail += "|";
        detail += join_values(pt.u);
        double da = 0, db = 0;
        for (size_t k = 0; k < pt.u.size(); ++k) {
          da = std::max(da, std::abs(pt.u[k] - pa[k]));
          db = std::max(db, std::abs(pt.u[k] - pb[k]));
        }
        ok = ok && std::min(da, db) < agree_tol;
      }
      row.sim_detail = detail;
      row.agree = ok;
    }
    rows[static_cast<size_t>(index)] = std::move(row);
  };

  const int threads = std::max(1, std::min<int>(thread_budget(), static_cast<int>(total)));
  if (threads == 1) {
    for (long i = 0; i < total; ++i) run_point(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<long> cursor{0};
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (;;) {
          const long i = cursor.fetch_add(1);
          if (i >= total) return;
          run_point(i);
        }
      });
    for (auto& th : pool) th.join();
  }

  OutputTarget out(out_path);
  std::ostringstream header;
  for (const auto& axis : axes) header << axis.name << ",";
  header << "pred_kind,pred_detail,sim_kind,sim_detail,agree";
  *out.stream << header.str() << "\n";
  long agreed = 0;
  for (const auto& row : rows) {
    for (double c : row.coords) *out.stream << gonodyn::format_g17(c) << ",";
    *out.stream << row.pred_kind << "," << row.pred_detail << "," << row.sim_kind << ","
                << row.sim_detail << "," << (row.agree ? "true" : "false") << "\n";
    agreed += row.agree ? 1 : 0;
  }
  std::cerr << agreed << "/" << total << " grid points agree with the prediction\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gonodyn: quadratic evolution operators of sex-linked inheritance"};
  app.require_subcommand(1);

  std::string config_path;
  bool json_only = false;

  auto* validate = app.add_subcommand("validate", "check a scenario config");
  validate->add_option("config", config_path)->required();
  validate->add_flag("--json", json_only, "suppress the human-readable summary");

  auto* simulate = app.add_subcommand("simulate", "write a trajectory table");
  long steps = -1;
  std::string out_path;
  std::string format = "csv";
  std::string level = "full";
  simulate->add_option("config", config_path)->required();
  simulate->add_option("--steps", steps, "number of steps (default from config)");
  simulate->add_option("--out", out_path, "output file (default stdout)");
  simulate->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  simulate->add_option("--level", level)->check(CLI::IsMember({"full", "reduced", "normalized"}));

  auto* fixed = app.add_subcommand("fixed-points", "locate and classify fixed points");
  fixed->add_option("config", config_path)->required();
  fixed->add_flag("--json", json_only);

  auto* omega = app.add_subcommand("omega", "estimate the limit set of a trajectory");
  OmegaFlags omega_flags;
  omega->add_option("config", config_path)->required();
  omega->add_option("--max-steps", omega_flags.max_steps);
  omega->add_option("--tol", omega_flags.tol);
  omega->add_option("--max-period", omega_flags.max_period);
  omega->add_option("--tail-window", omega_flags.tail_window);
  omega->add_flag("--json", json_only);

  auto* verify = app.add_subcommand("verify", "run registered analytical claims");
  std::vector<std::string> claim_ids;
  std::uint64_t seed = 20240601;
  verify->add_option("ids", claim_ids, "claim ids (empty = all)");
  verify->add_option("--seed", seed, "seed for all sampling");
  verify->add_flag("--json", json_only);

  auto* sweep = app.add_subcommand("sweep", "grid sweep: prediction vs simulation");
  std::string grid_spec;
  double agree_tol = 1e-6;
  sweep->add_option("config", config_path)->required();
  sweep->add_option("--grid", grid_spec, "axes, e.g. theta1=0:1:0.05,theta3=0:1:0.05")->required();
  sweep->add_option("--out", out_path, "output CSV (default stdout)");
  sweep->add_option("--agree-tol", agree_tol, "agreement tolerance");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(validate)) return cmd_validate(config_path, json_only);
    if (app.got_subcommand(simulate))
      return cmd_simulate(config_path, steps, out_path, format, level);
    if (app.got_subcommand(fixed)) return cmd_fixed_points(config_path, json_only);
    if (app.got_subcommand(omega)) return cmd_omega(config_path, omega_flags, json_only);
    if (app.got_subcommand(verify)) return cmd_verify(claim_ids, seed, json_only);
    if (app.got_subcommand(sweep)) return cmd_sweep(config_path, grid_spec, out_path, agree_tol);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const gonodyn::UnknownClaim& e) {
    std::cerr << e.what() << "\n";
    return kExitUnknownClaim;
  } catch (const gonodyn::Error& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitOk;
}
