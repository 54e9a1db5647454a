#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gonodyn {

// Per-claim overrides; unset fields keep the claim's defaults. Claims whose
// scenario pins a structural dimension ignore the n override.
struct ClaimConfig {
  std::uint64_t seed = 20240601;
  std::optional<int> n;
  std::optional<int> samples;
  std::optional<long> max_steps;
  std::optional<double> tol;
  std::optional<double> c;  // C3 family parameter
};

struct Metric {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;  // NaN marks an informational metric
  bool ok = true;
};

struct ClaimReport {
  std::string id;
  std::string description;
  bool pass = false;
  bool quarantined = false;    // excluded from suite pass/fail (conjecture check)
  bool evidence_only = false;  // property not decidable by finite simulation
  std::vector<Metric> metrics;
  std::vector<std::string> notes;
};

// Statically populated registry mapping claim ids to runnable numerical
// checks. Outcomes are deterministic given (id, config, seed).
class ClaimRegistry {
 public:
  static const ClaimRegistry& instance();

  std::vector<std::string> ids() const;
  bool contains(const std::string& id) const;
  const std::string& description(const std::string& id) const;

  // Throws UnknownClaim for unregistered ids.
  ClaimReport run(const std::string& id, const ClaimConfig& config = {}) const;

  // Every claim in registration order; claims execute independently and may
  // run concurrently, reports come back ordered by registration.
  std::vector<ClaimReport> run_all(const ClaimConfig& config = {}, int threads = 0) const;

  // All non-quarantined claims passing.
  static bool suite_pass(const std::vector<ClaimReport>& reports);

 private:
  ClaimRegistry();
  struct Entry {
    std::string id;
    std::string description;
    bool quarantined = false;
    bool evidence_only = false;
    ClaimReport (*runner)(const ClaimConfig&);
  };
  std::vector<Entry> entries_;
  const Entry* find(const std::string& id) const;
};

}  // namespace gonodyn
