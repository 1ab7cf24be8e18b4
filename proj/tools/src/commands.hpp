#pragma once

// Subcommand implementations. Each returns a process exit code; validation
// problems are thrown and mapped to exit codes by run().

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "thermorec_cli/report.hpp"
#include "thermorec_cli/verify.hpp"

namespace thermorec::cli {

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::string out;
  Format format = Format::Json;
};

struct DivergenceOptions {
  std::string a;
  std::string b;
  std::optional<std::string> alpha;
};

struct WorkboundOptions {
  std::string rho;
  std::string sigma;
  std::string hs;
  double beta = 0.0;
  std::string mode = "std";
  std::optional<std::string> unitary;
  std::optional<std::string> hb;
  std::optional<std::string> csv;
  std::optional<double> kt;
};

struct RecoverOptions {
  std::optional<std::string> unitary;
  std::optional<std::string> hs;
  std::optional<std::string> hb;
  std::optional<double> beta;
  std::optional<std::string> sigma;
  std::optional<std::string> rho;
  std::optional<std::string> dims;
};

struct OscillatorOptions {
  double beta_e = 0.0;
  std::optional<double> p0;
  std::optional<int> n_max;
  std::optional<std::string> sweep;
  std::optional<std::string> csv;
};

struct CatalysisOptions {
  std::size_t trials = 200;
  std::string dims = "2;2";
  Index bath_dim = 2;
  unsigned threads = 0;
};

struct VerifyOptions {
  std::size_t trials = 200;
  std::string dims = "2,3;2,3,4";
  std::string catalyst_dims = "2";
  std::optional<std::string> fixture;
  std::vector<std::string> suites;
  unsigned threads = 0;
};

int cmd_divergence(const GlobalOptions& g, const DivergenceOptions& o, std::ostream& out);
int cmd_workbound(const GlobalOptions& g, const WorkboundOptions& o, std::ostream& out);
int cmd_recover(const GlobalOptions& g, const RecoverOptions& o, std::ostream& out);
int cmd_oscillator(const GlobalOptions& g, const OscillatorOptions& o, std::ostream& out);
int cmd_catalysis_verify(const GlobalOptions& g, const CatalysisOptions& o, std::ostream& out);
int cmd_verify(const GlobalOptions& g, const VerifyOptions& o, std::ostream& out);

/// "inf" / "infinity" or a decimal number.
double parse_alpha(const std::string& text);

}  // namespace thermorec::cli
