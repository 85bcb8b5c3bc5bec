#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace widthlab {

// Groups used by the randomized and exhaustive suites.
struct CatalogEntry {
  std::string spec;
  std::size_t order = 0;
};
const std::vector<CatalogEntry>& group_catalog();

using MetricValue = std::variant<long long, double, bool, std::string>;
struct Metric {
  std::string key;
  MetricValue value;
};

struct SuiteOptions {
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> trials;  // unset: the suite's default
  unsigned jobs = 1;
  std::uint64_t budget_evals = 100'000'000;
  double time_budget_s = 0;  // 0: unlimited; checked between instances
};

struct SuiteResult {
  std::string suite;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;   // requested
  std::uint64_t checked = 0;  // instances actually verified
  std::uint64_t passed = 0;
  bool pass = false;
  bool vacuous = false;       // zero trials requested
  bool truncated = false;     // stopped by the time budget
  std::vector<std::string> failures;  // first few failure descriptions
  std::vector<Metric> metrics;
};

// Registered names in a stable order.
const std::vector<std::string>& suite_names();
// Resolves aliases; nullopt for unknown names.
std::optional<std::string> canonical_suite(const std::string& name);
std::uint64_t default_trials(const std::string& suite);
// Throws InputError for unknown suites. Deterministic for fixed options.
SuiteResult run_suite(const std::string& name, const SuiteOptions& opts);

}  // namespace widthlab
