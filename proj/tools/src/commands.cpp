#include "commands.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <iostream>
#include <sstream>

#include "thermorec/divergence.hpp"
#include "thermorec/json_io.hpp"
#include "thermorec/oscillator.hpp"
#include "thermorec/sampling.hpp"
#include "thermorec/workbounds.hpp"
#include "thermorec_cli/app.hpp"
#include "thermorec_cli/instance_io.hpp"

namespace thermorec::cli {
namespace {

constexpr double kChainSlack = 1e-10;

DensityMatrix load_state(const std::string& path) {
  return DensityMatrix(matrix_from_json(read_json_file(path)));
}

HamiltonianSpec load_hamiltonian(const std::string& path) {
  return hamiltonian_from_json(read_json_file(path));
}

std::uint64_t require_seed(const GlobalOptions& g, const std::string& command) {
  if (!g.seed) throw ValidationError(command + " is randomized and requires --seed");
  return *g.seed;
}

// Scalar top-level fields as a two-column table.
std::string flat_csv(const nlohmann::json& j) {
  CsvTable t{{"field", "value"}, {}};
  for (const auto& [key, value] : j.items()) {
    if (value.is_number()) {
      t.rows.push_back({key, csv_cell(value.get<double>())});
    } else if (value.is_boolean()) {
      t.rows.push_back({key, value.get<bool>() ? "true" : "false"});
    } else if (value.is_string()) {
      t.rows.push_back({key, value.get<std::string>()});
    } else if (value.is_null()) {
      t.rows.push_back({key, "inf"});
    }
  }
  return t.render();
}

void emit_report(const GlobalOptions& g, const nlohmann::json& j, const std::string& csv, std::ostream& out) {
  emit(g.format == Format::Csv ? csv : render_json(j), g.out, out);
}

void write_counterexample(const GlobalOptions& g, const nlohmann::json& ce) {
  emit(render_json(ce), counterexample_path(g.out), std::cerr);
}

nlohmann::json alpha_json(double alpha) {
  if (std::isinf(alpha)) return "inf";
  return num(alpha);
}

nlohmann::json optimum_json(const AlphaOptimum& opt) {
  return {{"value", num(opt.value)}, {"alpha", alpha_json(opt.alpha)}, {"unbounded", opt.unbounded}};
}

Index parse_dim(const std::string& text, const std::string& whole) {
  const auto dims = parse_dim_list(text);
  if (dims.size() != 1) throw ValidationError("expected a single dimension in \"" + whole + "\"");
  return dims.front();
}

std::pair<std::string, std::string> split_once(const std::string& text, char sep) {
  const auto pos = text.find(sep);
  if (pos == std::string::npos || text.find(sep, pos + 1) != std::string::npos) {
    throw ValidationError("expected exactly one '" + std::string(1, sep) + "' in \"" + text + "\"");
  }
  return {text.substr(0, pos), text.substr(pos + 1)};
}

double parse_double(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ValidationError("malformed " + what + " \"" + text + "\"");
  }
  if (used != text.size()) throw ValidationError("malformed " + what + " \"" + text + "\"");
  return v;
}

struct RecoverInputs {
  ThermalOperation op;
  std::optional<DensityMatrix> rho;
  DensityMatrix sigma;
  std::optional<ThermalInstance> instance;
};

RecoverInputs recover_inputs(const GlobalOptions& g, const RecoverOptions& o) {
  if (o.dims) {
    if (o.unitary || o.hs || o.hb || o.beta || o.sigma || o.rho) {
      throw ValidationError("--dims samples an instance and excludes the file inputs");
    }
    const auto [s, b] = split_once(*o.dims, 'x');
    Rng rng = trial_rng(require_seed(g, "recover --dims"), 0);
    ThermalInstance inst = sample_thermal_instance(parse_dim(s, *o.dims), parse_dim(b, *o.dims), rng);
    DensityMatrix sigma = apply(inst.op, inst.rho);
    return {inst.op, inst.rho, std::move(sigma), std::move(inst)};
  }
  if (!o.unitary || !o.hs || !o.hb || !o.beta || !o.sigma) {
    throw ValidationError("recover needs --unitary, --hs, --hb, --beta and --sigma, or --dims");
  }
  const HamiltonianSpec hs = load_hamiltonian(*o.hs);
  const HamiltonianSpec hb = load_hamiltonian(*o.hb);
  const std::array<HamiltonianSpec, 2> parts{hs, hb};
  EnergyConservingUnitary v(matrix_from_json(read_json_file(*o.unitary)), HamiltonianSpec::local_sum(parts));
  ThermalOperation op(std::move(v), hs, hb, *o.beta);
  std::optional<DensityMatrix> rho;
  if (o.rho) rho = load_state(*o.rho);
  return {std::move(op), std::move(rho), load_state(*o.sigma), std::nullopt};
}

nlohmann::json oscillator_point(const OscillatorInstance& inst) {
  const ReversalPopulations pop = reversal_populations(inst);
  const InvestBoundCheck check = invest_bound_check(inst);
  return {{"beta_e", num(inst.beta_e())},
          {"p0", num(inst.p0())},
          {"b", num(inst.b())},
          {"n_max", inst.n_max()},
          {"truncation_tail", num(inst.truncation_tail())},
          {"p0_reversal_closed", num(pop.p0_closed)},
          {"p0_reversal_matrix", num(pop.p0_matrix)},
          {"population_residual", num(pop.residual)},
          {"bound", num(check.closed_form)},
          {"bound_matrix", num(check.matrix)},
          {"bound_residual", num(check.residual)}};
}

const std::vector<std::string> kOscillatorColumns{"beta_e",
                                                  "p0",
                                                  "b",
                                                  "n_max",
                                                  "truncation_tail",
                                                  "p0_reversal_closed",
                                                  "p0_reversal_matrix",
                                                  "population_residual",
                                                  "bound",
                                                  "bound_matrix",
                                                  "bound_residual"};

std::string oscillator_csv(const std::vector<nlohmann::json>& points) {
  CsvTable t{kOscillatorColumns, {}};
  for (const auto& p : points) {
    std::vector<std::string> row;
    for (const auto& c : kOscillatorColumns) {
      row.push_back(c == "n_max" ? std::to_string(p[c].get<int>()) : csv_cell(p[c].is_null() ? NAN : p[c].get<double>()));
    }
    t.rows.push_back(std::move(row));
  }
  return t.render();
}

}  // namespace

double parse_alpha(const std::string& text) {
  std::string lower = text;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "inf" || lower == "infinity") return std::numeric_limits<double>::infinity();
  return parse_double(text, "alpha");
}

int cmd_divergence(const GlobalOptions& g, const DivergenceOptions& o, std::ostream& out) {
  const DensityMatrix a = load_state(o.a);
  const DensityMatrix b = load_state(o.b);
  if (a.dim() != b.dim()) throw ValidationError("--a and --b have different dimensions");
  nlohmann::json j;
  DivergenceResult r;
  if (!o.alpha) {
    r = relative_entropy(a, b);
    j["alpha"] = 1.0;
    j["variant"] = "relative_entropy";
  } else {
    const AlphaFamilySpec spec(parse_alpha(*o.alpha));
    r = renyi_divergence(a, b, spec);
    j["alpha"] = alpha_json(spec.alpha());
    if (spec.is_infinite()) {
      j["variant"] = "max";
    } else if (std::abs(spec.alpha() - 1.0) < kAlphaOneWindow) {
      j["variant"] = "relative_entropy";
    } else {
      j["variant"] = spec.variant() == RenyiVariant::Petz ? "petz" : "sandwiched";
    }
  }
  j["value"] = num(r.value);
  j["finite"] = r.finite;
  emit_report(g, j, flat_csv(j), out);
  return kExitOk;
}

int cmd_workbound(const GlobalOptions& g, const WorkboundOptions& o, std::ostream& out) {
  if (o.mode != "std" && o.mode != "nano-gain" && o.mode != "nano-invest") {
    throw ValidationError("--mode must be std, nano-gain or nano-invest");
  }
  if (o.unitary.has_value() != o.hb.has_value()) throw ValidationError("--unitary and --hb go together");
  if (o.kt && !(*o.kt > 0.0 && std::isfinite(*o.kt))) throw ValidationError("--kt must be positive");
  const DensityMatrix rho = load_state(o.rho);
  const DensityMatrix sigma = load_state(o.sigma);
  const HamiltonianSpec hs = load_hamiltonian(o.hs);
  if (rho.dim() != hs.dim() || sigma.dim() != hs.dim()) throw ValidationError("state and Hamiltonian dimensions differ");
  const DensityMatrix tau = gibbs_state(hs, o.beta).state;

  std::optional<ThermalOperation> op;
  if (o.unitary) {
    const HamiltonianSpec hb = load_hamiltonian(*o.hb);
    const std::array<HamiltonianSpec, 2> parts{hs, hb};
    op.emplace(EnergyConservingUnitary(matrix_from_json(read_json_file(*o.unitary)), HamiltonianSpec::local_sum(parts)),
               hs, hb, o.beta);
  }
  const WorkReport r = work_report(rho, sigma, tau, AlphaGrid::standard(), op ? &*op : nullptr);

  double selected = 0.0;
  if (o.mode == "std") selected = r.w_gain_std;
  if (o.mode == "nano-gain") selected = r.nano_gain.value;
  if (o.mode == "nano-invest") selected = r.nano_invest.value;

  nlohmann::json j = {{"mode", o.mode},
                      {"units", "kT"},
                      {"value", num(selected)},
                      {"delta", num(r.delta)},
                      {"w_gain_std", num(r.w_gain_std)},
                      {"w_inv_std", num(r.w_inv_std)},
                      {"nano_gain", optimum_json(r.nano_gain)},
                      {"nano_invest", optimum_json(r.nano_invest)},
                      {"recovery_fidelity_bound", r.recovery_fidelity_bound ? num(*r.recovery_fidelity_bound) : nlohmann::json()}};
  if (o.kt) {
    j["kt"] = num(*o.kt);
    j["value_energy"] = num(selected * *o.kt);
  }

  if (o.csv) {
    CsvTable t{{"bound", "alpha", "value"}, {}};
    const auto add = [&](const char* name, const AlphaOptimum& opt) {
      for (const auto& s : opt.trace) t.rows.push_back({name, csv_cell(s.alpha), csv_cell(s.value)});
    };
    if (o.mode != "nano-invest") add("nano_gain", r.nano_gain);
    if (o.mode != "nano-gain") add("nano_invest", r.nano_invest);
    emit(t.render(), *o.csv, out);
  }
  emit_report(g, j, flat_csv(j), out);
  return kExitOk;
}

int cmd_recover(const GlobalOptions& g, const RecoverOptions& o, std::ostream& out) {
  const RecoverInputs in = recover_inputs(g, o);
  if (in.sigma.dim() != in.op.system_dim()) throw ValidationError("--sigma does not match the system dimension");
  const ThermalOperation rev = reversal(in.op);
  const DensityMatrix recovered = apply(rev, in.sigma);
  const DensityMatrix& tau = in.op.system_gibbs().state;
  const double petz_residual =
      max_abs(petz_recovery(in.op, tau).map.matrix() - superoperator(rev).matrix());

  nlohmann::json j = {{"recovered", matrix_to_json(recovered.matrix())}, {"petz_residual", num(petz_residual)}};
  if (in.rho) {
    if (in.rho->dim() != in.op.system_dim()) throw ValidationError("--rho does not match the system dimension");
    const RecoveryBound rb = recovery_gain_bound(*in.rho, in.sigma, in.op);
    const bool first = rb.recovery_divergence <= rb.delta + kChainSlack;
    const bool second = rb.bound <= rb.recovery_divergence + kChainSlack;
    j["delta"] = num(rb.delta);
    j["d_recovery"] = num(rb.recovery_divergence);
    j["neg_log_f"] = num(rb.bound);
    j["flags"] = {{"delta_ge_d_recovery", first}, {"d_recovery_ge_neg_log_f", second}, {"chain_holds", first && second}};
  }
  if (in.instance) {
    j["seed"] = *g.seed;
    j["instance"] = instance_to_json(*in.instance);
  }
  emit_report(g, j, flat_csv(j), out);
  return kExitOk;
}

int cmd_oscillator(const GlobalOptions& g, const OscillatorOptions& o, std::ostream& out) {
  std::vector<nlohmann::json> points;
  nlohmann::json j;
  if (o.sweep) {
    std::vector<std::string> parts;
    std::stringstream ss(*o.sweep);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 4 || parts[0] != "p0") throw ValidationError("--sweep expects p0:start:stop:steps");
    const double start = parse_double(parts[1], "sweep start");
    const double stop = parse_double(parts[2], "sweep stop");
    const auto steps = parse_dim_list(parts[3]);
    if (steps.size() != 1 || steps[0] < 2) throw ValidationError("--sweep needs at least 2 steps");
    const Index n = steps[0];
    for (Index k = 0; k < n; ++k) {
      const double p0 = k + 1 == n ? stop : start + (stop - start) * static_cast<double>(k) / static_cast<double>(n - 1);
      points.push_back(oscillator_point(OscillatorInstance::create(o.beta_e, p0, o.n_max)));
    }
    j = {{"beta_e", num(o.beta_e)}, {"points", points}};
  } else {
    if (!o.p0) throw ValidationError("oscillator needs --p0 or --sweep");
    points.push_back(oscillator_point(OscillatorInstance::create(o.beta_e, *o.p0, o.n_max)));
    j = points.front();
  }
  const std::string csv = oscillator_csv(points);
  if (o.csv) emit(csv, *o.csv, out);
  emit_report(g, j, csv, out);
  return kExitOk;
}

int cmd_catalysis_verify(const GlobalOptions& g, const CatalysisOptions& o, std::ostream& out) {
  CatalysisConfig c;
  c.seed = require_seed(g, "catalysis verify");
  c.trials = o.trials;
  const auto [s, cats] = split_once(o.dims, ';');
  c.system_dim = parse_dim(s, o.dims);
  c.catalyst_dims = parse_dim_list(cats);
  c.bath_dim = o.bath_dim;
  c.threads = o.threads;

  const CatalysisReport r = run_catalysis_verify(c);
  CsvTable t{{"suite", "passed", "failed", "skipped", "max_residual", "tolerance", "status"}, {}};
  for (const SuiteResult* s2 : {&r.fixed_point, &r.theorem}) {
    t.rows.push_back({s2->name, std::to_string(s2->passed), std::to_string(s2->failed), std::to_string(s2->skipped),
                      csv_cell(s2->max_residual), csv_cell(s2->tolerance), s2->ok() ? "pass" : "fail"});
  }
  emit_report(g, r.to_json(), t.render(), out);
  if (r.ok()) return kExitOk;
  write_counterexample(g, r.counterexample());
  return kExitViolation;
}

int cmd_verify(const GlobalOptions& g, const VerifyOptions& o, std::ostream& out) {
  VerifyConfig c;
  c.seed = require_seed(g, "verify");
  c.trials = o.trials;
  const auto [s, b] = split_once(o.dims, ';');
  c.system_dims = parse_dim_list(s);
  c.bath_dims = parse_dim_list(b);
  c.catalyst_dims = parse_dim_list(o.catalyst_dims);
  c.fixture = o.fixture;
  c.suites = o.suites;
  c.threads = o.threads;

  const VerifySummary summary = run_verify(c);
  emit_report(g, summary.to_json(), summary.to_csv(), out);
  if (summary.ok()) return kExitOk;
  write_counterexample(g, summary.counterexample());
  return kExitViolation;
}

}  // namespace thermorec::cli
