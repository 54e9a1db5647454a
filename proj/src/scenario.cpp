#include "gonodyn/scenario.hpp"

#include <fstream>
#include <sstream>

namespace gonodyn {

namespace {

using nlohmann::json;

MixingRate rate_from_json(const json& doc) {
  const auto& rate = doc.at("rate");
  if (rate.contains("a") == rate.contains("temperature"))
    throw InvalidState("rate needs exactly one of 'a' or 'temperature'");
  if (rate.contains("a")) return MixingRate::from_a(rate.at("a").get<double>());
  const auto& temp = rate.at("temperature");
  TemperatureParams params;
  const auto tau = temp.at("tau").get<std::vector<double>>();
  if (tau.size() != 3) throw InvalidState("temperature block needs tau = [tau1, tau2, tau3]");
  params.tau1 = tau[0];
  params.tau2 = tau[1];
  params.tau3 = tau[2];
  params.mu1 = temp.at("mu1").get<double>();
  params.mu2 = temp.at("mu2").get<double>();
  params.mu1_bar = temp.contains("mu1_bar") ? temp.at("mu1_bar").get<double>() : 1.0 - params.mu1;
  params.mu2_bar = temp.contains("mu2_bar") ? temp.at("mu2_bar").get<double>() : 1.0 - params.mu2;
  return derive_rates(params);
}

int tensor_source_count(const json& tensor) {
  int count = 0;
  for (const char* key : {"dense", "sparse", "family"}) count += tensor.contains(key) ? 1 : 0;
  return count;
}

// Builds the raw tensor without the final stochasticity gate; family builders
// still enforce their own structural errors. 1-based file indices become
// 0-based here.
HeredityTensor tensor_from_json(const json& doc, int n, std::string* family,
                                std::optional<UOperator>* u_op, std::optional<double>* c3_c) {
  const auto& tensor = doc.at("tensor");
  if (tensor_source_count(tensor) != 1)
    throw InvalidState("tensor needs exactly one source: 'dense', 'sparse' or 'family'");

  if (tensor.contains("dense")) {
    const auto& dense = tensor.at("dense");
    if (static_cast<int>(dense.size()) != n) throw InvalidState("dense tensor must be n x n x n");
    auto t = HeredityTensor::zeros(n);
    for (int i = 0; i < n; ++i) {
      const auto& plane = dense.at(static_cast<size_t>(i));
      if (static_cast<int>(plane.size()) != n) throw InvalidState("dense tensor must be n x n x n");
      for (int p = 0; p < n; ++p) {
        const auto row = plane.at(static_cast<size_t>(p)).get<std::vector<double>>();
        if (static_cast<int>(row.size()) != n) throw InvalidState("dense tensor must be n x n x n");
        for (int k = 0; k < n; ++k) t.at(i, p, k) = row[static_cast<size_t>(k)];
      }
    }
    return t;
  }

  if (tensor.contains("sparse")) {
    auto t = HeredityTensor::zeros(n);
    for (const auto& entry : tensor.at("sparse")) {
      const int i = entry.at("i").get<int>() - 1;
      const int p = entry.at("p").get<int>() - 1;
      const int k = entry.at("k").get<int>() - 1;
      if (i < 0 || i >= n || p < 0 || p >= n || k < 0 || k >= n)
        throw IndexOutOfRange("sparse tensor entry index outside 1..n");
      t.at(i, p, k) = entry.at("value").get<double>();
    }
    return t;
  }

  // Family parameters live inline next to the "family" name.
  const auto name = tensor.at("family").get<std::string>();
  *family = name;
  if (name == "C1") {
    std::vector<TensorEntry> entries;
    for (const auto& entry : tensor.at("entries"))
      entries.push_back({entry.at("i").get<int>() - 1, entry.at("p").get<int>() - 1,
                         entry.at("k").get<int>() - 1, entry.at("value").get<double>()});
    return build_c1(n, entries);
  }
  if (name == "C2") {
    const int m = tensor.at("m").get<int>();
    const auto cross = tensor.at("cross").get<std::vector<std::vector<std::vector<double>>>>();
    std::optional<std::vector<std::vector<std::vector<double>>>> mirror;
    if (tensor.contains("mirror"))
      mirror = tensor.at("mirror").get<std::vector<std::vector<std::vector<double>>>>();
    return build_c2(n, m, cross, mirror);
  }
  if (name == "C3") {
    if (n != 3) throw InvalidState("family C3 requires n = 3");
    const double c = tensor.at("c").get<double>();
    *c3_c = c;
    return build_c3(c);
  }
  if (name == "U") {
    const int j = tensor.at("j").get<int>() - 1;
    const int l = tensor.at("l").get<int>() - 1;
    auto op = build_u(n, j, l);
    auto t = op.tensor;
    *u_op = std::move(op);
    return t;
  }
  throw InvalidState("unknown tensor family '" + name + "' (expected C1, C2, C3 or U)");
}

std::optional<InitialState> initial_from_json(const json& doc, int n, const MixingRate& rate) {
  if (!doc.contains("initial")) return std::nullopt;
  const auto& init = doc.at("initial");
  const auto level = init.at("level").get<std::string>();
  auto expect_size = [&](const std::vector<double>& v, const char* what) {
    if (static_cast<int>(v.size()) != n) {
      std::ostringstream os;
      os << "initial." << what << " must have length n = " << n;
      throw InvalidState(os.str());
    }
  };
  if (level == "full") {
    auto x = init.at("x").get<std::vector<double>>();
    auto y = init.at("y").get<std::vector<double>>();
    expect_size(x, "x");
    expect_size(y, "y");
    return InitialState(FullState(std::move(x), std::move(y)));
  }
  if (level == "reduced") {
    auto x = init.at("x").get<std::vector<double>>();
    expect_size(x, "x");
    return InitialState(ReducedState(std::move(x), rate.a));
  }
  if (level == "normalized") {
    auto u = init.at("u").get<std::vector<double>>();
    expect_size(u, "u");
    return InitialState(NormalizedState(std::move(u)));
  }
  throw InvalidState("initial.level must be 'full', 'reduced' or 'normalized'");
}

RunOptions run_from_json(const json& doc) {
  RunOptions run;
  if (!doc.contains("run")) return run;
  const auto& r = doc.at("run");
  if (r.contains("steps")) run.steps = r.at("steps").get<long>();
  if (r.contains("max_steps")) run.omega.max_steps = r.at("max_steps").get<long>();
  if (r.contains("tol")) run.omega.tol = r.at("tol").get<double>();
  if (r.contains("max_period")) run.omega.max_period = r.at("max_period").get<int>();
  if (r.contains("tail_window")) run.omega.tail_window = r.at("tail_window").get<int>();
  if (r.contains("seed")) run.seed = r.at("seed").get<std::uint64_t>();
  return run;
}

}  // namespace

nlohmann::json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw nlohmann::json::parse_error::create(101, 0, "cannot open " + path.string(), nullptr);
  return nlohmann::json::parse(in);
}

NormalizedState ScenarioConfig::initial_normalized() const {
  if (!initial) throw InvalidState("scenario has no initial state");
  if (const auto* u = std::get_if<NormalizedState>(&*initial)) return *u;
  if (const auto* x = std::get_if<ReducedState>(&*initial)) return normalize(*x);
  const auto& z = std::get<FullState>(*initial);
  return normalize(reduce(z, op.rate));
}

FullState ScenarioConfig::initial_full() const {
  if (!initial) throw InvalidState("scenario has no initial state");
  if (const auto* z = std::get_if<FullState>(&*initial)) return *z;
  if (const auto* x = std::get_if<ReducedState>(&*initial)) return lift(normalize(*x), op.rate);
  return lift(std::get<NormalizedState>(*initial), op.rate);
}

ReducedState ScenarioConfig::initial_reduced() const {
  if (!initial) throw InvalidState("scenario has no initial state");
  if (const auto* x = std::get_if<ReducedState>(&*initial)) return *x;
  if (const auto* z = std::get_if<FullState>(&*initial)) return reduce(*z, op.rate);
  const auto& u = std::get<NormalizedState>(*initial);
  std::vector<double> x(u.u.size());
  for (size_t k = 0; k < x.size(); ++k) x[k] = op.rate.a * u.u[k];
  return ReducedState::unchecked(std::move(x), op.rate.a);
}

ScenarioConfig scenario_from_json(const nlohmann::json& doc) {
  const int n = doc.at("n").get<int>();
  if (n < 1) throw InvalidState("n must be a positive integer");
  const auto rate = rate_from_json(doc);
  std::string family;
  std::optional<UOperator> u_op;
  std::optional<double> c3_c;
  auto tensor = tensor_from_json(doc, n, &family, &u_op, &c3_c);
  GonosomalOperator op(std::move(tensor), rate);  // validates stochasticity
  auto initial = initial_from_json(doc, n, rate);
  auto run = run_from_json(doc);
  return ScenarioConfig{std::move(op), std::move(initial), run,
                        std::move(family), std::move(u_op), c3_c};
}

ScenarioValidation validate_scenario_json(const nlohmann::json& doc) {
  ScenarioValidation result;
  result.pass = true;
  auto fail = [&](std::string where, std::string message) {
    result.pass = false;
    result.issues.push_back({std::move(where), std::move(message)});
  };

  int n = 0;
  try {
    n = doc.at("n").get<int>();
    if (n < 1) fail("n", "must be a positive integer");
  } catch (const Error& e) {
    fail("n", e.what());
    return result;
  }
  if (n < 1) return result;

  MixingRate rate = MixingRate::from_a(0.5);
  bool have_rate = false;
  try {
    rate = rate_from_json(doc);
    have_rate = true;
  } catch (const Error& e) {
    fail("rate", e.what());
  }

  try {
    std::string family;
    std::optional<UOperator> u_op;
    std::optional<double> c3_c;
    auto tensor = tensor_from_json(doc, n, &family, &u_op, &c3_c);
    result.tensor_report = validate_tensor(tensor);
    if (!result.tensor_report->pass) fail("tensor", "stochasticity violations; see tensor report");
  } catch (const Error& e) {
    fail("tensor", e.what());
  }

  if (have_rate) {
    try {
      initial_from_json(doc, n, rate);
    } catch (const Error& e) {
      fail("initial", e.what());
    }
  }
  return result;
}

}  // namespace gonodyn
