#pragma once

// Randomized property suites behind `verify` and `catalysis verify`. Trial i
// of every suite draws from trial_rng(seed, i), so the channel suites share
// one instance set and results never depend on the thread count.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "thermorec/operator.hpp"

namespace thermorec::cli {

struct VerifyConfig {
  std::uint64_t seed = 42;
  std::size_t trials = 200;
  std::vector<Index> system_dims{2, 3};
  std::vector<Index> bath_dims{2, 3, 4};
  std::vector<Index> catalyst_dims{2};
  /// Extra instance appended to the channel identity, chain and Petz suites.
  std::optional<std::string> fixture;
  /// Restrict to these suites; empty runs all.
  std::vector<std::string> suites;
  unsigned threads = 0;
};

struct SuiteResult {
  std::string name;
  double tolerance = 0.0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t skipped = 0;
  /// Primary residual over non-skipped trials; 0 when none ran.
  double max_residual = 0.0;
  /// Secondary per-suite maxima (e.g. quadrature node-doubling change).
  std::map<std::string, double> maxima;
  /// Lowest-index failing trial.
  std::optional<nlohmann::json> counterexample;

  bool ok() const { return failed == 0; }
};

struct VerifySummary {
  VerifyConfig config;
  std::vector<SuiteResult> suites;

  bool ok() const;
  nlohmann::json to_json() const;
  /// One row per suite.
  std::string to_csv() const;
  /// First failure plus the first counterexample of every other failing suite.
  nlohmann::json counterexample() const;
};

const std::vector<std::string>& suite_names();

SuiteResult run_suite(const std::string& name, const VerifyConfig& config);
VerifySummary run_verify(const VerifyConfig& config);

struct CatalysisConfig {
  std::uint64_t seed = 42;
  std::size_t trials = 200;
  Index system_dim = 2;
  std::vector<Index> catalyst_dims{2};
  Index bath_dim = 2;
  unsigned threads = 0;
};

struct CatalysisReport {
  CatalysisConfig config;
  SuiteResult fixed_point;
  SuiteResult theorem;
  double max_catalyst_residual = 0.0;

  bool ok() const { return fixed_point.ok() && theorem.ok(); }
  nlohmann::json to_json() const;
  nlohmann::json counterexample() const;
};

CatalysisReport run_catalysis_verify(const CatalysisConfig& config);

/// "2,3" -> {2, 3}; throws ValidationError on malformed input.
std::vector<Index> parse_dim_list(const std::string& text);

}  // namespace thermorec::cli
