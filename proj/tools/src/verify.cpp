#include "thermorec_cli/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "thermorec/catalysis.hpp"
#include "thermorec/divergence.hpp"
#include "thermorec/json_io.hpp"
#include "thermorec/oscillator.hpp"
#include "thermorec/sampling.hpp"
#include "thermorec/workbounds.hpp"
#include "thermorec_cli/instance_io.hpp"
#include "thermorec_cli/parallel.hpp"
#include "thermorec_cli/report.hpp"

namespace thermorec::cli {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Status { Pass, Fail, Skip };

struct Outcome {
  Status status = Status::Pass;
  double residual = 0.0;
  std::map<std::string, double> maxima;
  /// Filled only for failures.
  nlohmann::json detail;
};

using TrialFn = std::function<Outcome(const VerifyConfig&, std::size_t)>;

struct SuiteDef {
  std::string name;
  double tolerance;
  TrialFn trial;
  bool takes_fixture = false;
};

Index pick(const std::vector<Index>& dims, std::size_t i) { return dims[i % dims.size()]; }

// Channel suites cycle through every (system, bath) pair.
std::pair<Index, Index> channel_dims(const VerifyConfig& c, std::size_t trial) {
  return {pick(c.system_dims, trial), pick(c.bath_dims, trial / c.system_dims.size())};
}

ThermalInstance channel_instance(const VerifyConfig& c, std::size_t trial) {
  Rng rng = trial_rng(c.seed, trial);
  const auto [ds, db] = channel_dims(c, trial);
  return sample_thermal_instance(ds, db, rng);
}

Outcome judge(double residual, double tol) {
  Outcome o;
  o.residual = residual;
  o.status = (std::isfinite(residual) && residual <= tol) ? Status::Pass : Status::Fail;
  return o;
}

// ---- channel suites (also run on a fixture instance) -----------------------

Outcome identity_on(const ThermalInstance& inst) {
  const auto& t = inst.op;
  const DensityMatrix& tau = t.system_gibbs().state;
  const DensityMatrix sigma = DensityMatrix::normalized(t.apply_raw(inst.rho.matrix()));
  const DeltaResult d = delta(inst.rho, sigma, tau);
  const ComplexMatrix& v = t.unitary().matrix();
  const ComplexMatrix& env = t.env_state().matrix();
  const DensityMatrix lhs(kron(inst.rho.matrix(), env));
  const DensityMatrix rhs = DensityMatrix::normalized(v.adjoint() * kron(sigma.matrix(), env) * v);
  const DivergenceResult joint = relative_entropy(lhs, rhs);
  const double residual = (d.finite && joint.finite) ? std::abs(d.value - joint.value) : kInf;
  Outcome o = judge(residual, 1e-9);
  if (o.status == Status::Fail) o.detail = {{"delta", num(d.value)}, {"joint_divergence", num(joint.value)}};
  return o;
}

Outcome chain_on(const ThermalInstance& inst) {
  const auto& t = inst.op;
  const DensityMatrix& tau = t.system_gibbs().state;
  const DensityMatrix sigma = DensityMatrix::normalized(t.apply_raw(inst.rho.matrix()));
  const DensityMatrix recovered = DensityMatrix::normalized(reversal(t).apply_raw(sigma.matrix()));
  const DeltaResult d = delta(inst.rho, sigma, tau);
  const DivergenceResult d_rec = relative_entropy(inst.rho, recovered);
  const double f = fidelity(inst.rho, recovered).squared;
  const double neg_log_f = f > 0.0 ? -std::log(f) : kInf;
  // Largest amount by which either link of the chain is violated.
  double violation = kInf;
  if (d.finite && d_rec.finite) violation = std::max({0.0, d_rec.value - d.value, neg_log_f - d_rec.value});
  Outcome o = judge(violation, 1e-10);
  if (o.status == Status::Fail) {
    o.detail = {{"delta", num(d.value)}, {"d_recovery", num(d_rec.value)}, {"neg_log_f", num(neg_log_f)}};
  }
  return o;
}

Outcome petz_on(const ThermalInstance& inst) {
  const auto petz = petz_recovery(inst.op, inst.op.system_gibbs().state);
  const double residual = max_abs(petz.map.matrix() - superoperator(reversal(inst.op)).matrix());
  return judge(residual, 1e-10);
}

Outcome with_instance(const ThermalInstance& inst, const std::function<Outcome(const ThermalInstance&)>& f) {
  Outcome o = f(inst);
  if (o.status == Status::Fail) o.detail["instance"] = instance_to_json(inst);
  return o;
}

// ---- remaining suites -------------------------------------------------------

Outcome adjointness_trial(const VerifyConfig& c, std::size_t trial) {
  Rng rng = trial_rng(c.seed, trial);
  const auto [ds, db] = channel_dims(c, trial);
  const HermitianOperator a = random_hermitian(ds, rng);
  const HermitianOperator m = random_hermitian(ds * db, rng);
  const Complex lhs = (kron(a.matrix(), ComplexMatrix::Identity(db, db)) * m.matrix()).trace();
  const Complex rhs = (a.matrix() * partial_trace(m.matrix(), CompositeSpace({ds, db}), {0})).trace();
  Outcome o = judge(std::abs(lhs - rhs), 1e-10);
  if (o.status == Status::Fail) o.detail = {{"a", matrix_to_json(a.matrix())}, {"m", matrix_to_json(m.matrix())}};
  return o;
}

Outcome data_processing_trial(const VerifyConfig& c, std::size_t trial) {
  Rng rng = trial_rng(c.seed, trial);
  const auto [ds, db] = channel_dims(c, trial);
  const DensityMatrix rho = random_density_matrix(ds * db, rng);
  const DensityMatrix sigma = random_density_matrix(ds * db, rng);
  const CompositeSpace space({ds, db});
  const double full = relative_entropy(rho, sigma).value;
  const double reduced = relative_entropy(partial_trace(rho, space, {0}), partial_trace(sigma, space, {0})).value;
  Outcome o = judge(std::max(0.0, reduced - full), 1e-10);
  if (o.status == Status::Fail) o.detail = {{"rho", matrix_to_json(rho.matrix())}, {"sigma", matrix_to_json(sigma.matrix())}};
  return o;
}

Outcome ordering_trial(const VerifyConfig& c, std::size_t trial) {
  Rng rng = trial_rng(c.seed, trial);
  const Index d = pick(c.system_dims, trial) * pick(c.bath_dims, trial);
  const DensityMatrix rho = random_density_matrix(d, rng);
  const DensityMatrix sigma = random_density_matrix(d, rng);
  const double rel = relative_entropy(rho, sigma).value;
  const double half = renyi_divergence(rho, sigma, AlphaFamilySpec(0.5)).value;
  const double neg_log_f = -std::log(fidelity(rho, sigma).squared);
  Outcome o = judge(std::max(0.0, half - rel), 1e-10);
  o.maxima["half_vs_fidelity"] = std::abs(half - neg_log_f);
  if (std::abs(half - neg_log_f) > 1e-9) o.status = Status::Fail;
  if (o.status == Status::Fail) o.detail = {{"rho", matrix_to_json(rho.matrix())}, {"sigma", matrix_to_json(sigma.matrix())}};
  return o;
}

Outcome rotated_trial(const VerifyConfig& c, std::size_t trial) {
  Rng rng = trial_rng(c.seed, trial);
  const auto [ds, db] = channel_dims(c, trial);
  const HamiltonianSpec hs = random_integer_hamiltonian(ds, 2, rng);
  std::uniform_real_distribution<double> beta_dist(0.3, 1.5);
  const double beta = beta_dist(rng);
  std::vector<Superoperator> maps;
  for (int k = 0; k < 2; ++k) {
    const HamiltonianSpec hb = random_integer_hamiltonian(db, 3, rng);
    const std::array<HamiltonianSpec, 2> parts{hs, hb};
    auto v = sample_energy_conserving_unitary(HamiltonianSpec::local_sum(parts), rng());
    maps.push_back(superoperator(ThermalOperation(std::move(v), hs, hb, beta)));
  }
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  const double p = weight(rng);
  const std::array<double, 2> weights{p, 1.0 - p};
  const Superoperator n = Superoperator::mixture(weights, maps);
  const DensityMatrix tau = gibbs_state(hs, beta).state;
  const DensityMatrix rho = random_density_matrix(ds, rng);
  const DensityMatrix sigma = n.apply(rho);

  const double d = relative_entropy(rho, tau).value - relative_entropy(sigma, tau).value;
  const RotatedRecovery rot(n, tau);
  const double b64 = -2.0 * std::log(fidelity(rho, rot.average(sigma, {64})).root);
  const double b128 = -2.0 * std::log(fidelity(rho, rot.average(sigma, {128})).root);
  const double node_change = std::abs(b64 - b128);

  Outcome o = judge(std::max(0.0, b64 - d), 1e-10);
  o.maxima["node_doubling_change"] = node_change;
  if (node_change > 1e-8) o.status = Status::Fail;
  if (o.status == Status::Fail) {
    o.detail = {{"delta", num(d)},         {"bound_64", num(b64)},
                {"bound_128", num(b128)},  {"rho", matrix_to_json(rho.matrix())},
                {"map", matrix_to_json(n.matrix())}, {"tau", matrix_to_json(tau.matrix())}};
  }
  return o;
}

Outcome oscillator_trial(const VerifyConfig& c, std::size_t trial) {
  static constexpr std::array<double, 3> kBetaE{0.5, 1.0, 2.0};
  Rng rng = trial_rng(c.seed, trial);
  const double be = kBetaE[trial % kBetaE.size()];
  const double lo = 1.0 - std::exp(-be);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double p0 = lo + (1.0 - lo) * u(rng);
  const auto inst = OscillatorInstance::create(be, p0);
  const double pop = reversal_populations(inst).residual;
  const double bound = invest_bound_check(inst).residual;
  Outcome o = judge(pop, 1e-9);
  o.maxima["invest_bound_residual"] = bound;
  if (bound > 1e-8) o.status = Status::Fail;
  if (o.status == Status::Fail) o.detail = {{"beta_e", be}, {"p0", p0}, {"n_max", inst.n_max()}};
  return o;
}

// ---- catalysis --------------------------------------------------------------

constexpr std::array<NctoFamily, 5> kFamilies{NctoFamily::ThermalCatalysts, NctoFamily::IdleCatalysts,
                                              NctoFamily::SpectralFunction, NctoFamily::Swap,
                                              NctoFamily::Generic};

const char* family_name(NctoFamily f) {
  switch (f) {
    case NctoFamily::ThermalCatalysts: return "thermal_catalysts";
    case NctoFamily::IdleCatalysts: return "idle_catalysts";
    case NctoFamily::SpectralFunction: return "spectral_function";
    case NctoFamily::Swap: return "swap";
    case NctoFamily::Generic: return "generic";
  }
  return "unknown";
}

struct CatalysisTrial {
  Outcome fixed_point;
  Outcome theorem;
  double catalyst_residual = 0.0;
};

nlohmann::json ncto_json(const NctoInstance& inst, NctoFamily family) {
  const auto& op = inst.operation();
  nlohmann::json cats = nlohmann::json::array();
  for (const auto& c : inst.catalysts().catalysts) {
    cats.push_back({{"state", matrix_to_json(c.state.matrix())}, {"hamiltonian", matrix_to_json(c.hamiltonian.op().matrix())}});
  }
  return {{"family", family_name(family)},
          {"system_hamiltonian", matrix_to_json(op.system_hamiltonian().op().matrix())},
          {"bath_hamiltonian", matrix_to_json(op.bath_hamiltonian().op().matrix())},
          {"beta", op.beta()},
          {"unitary", matrix_to_json(op.unitary().matrix())},
          {"catalysts", cats}};
}

CatalysisTrial catalysis_trial(std::uint64_t seed, std::size_t trial, Index ds, Index db,
                               const std::vector<Index>& cat_dims) {
  Rng rng = trial_rng(seed, trial);
  const NctoFamily family = kFamilies[trial % kFamilies.size()];
  const NctoInstance inst = sample_ncto_instance(ds, db, cat_dims, family, rng);
  const DensityMatrix rho = random_density_matrix(ds, rng);

  CatalysisTrial out;
  const FixedPointReport fp = check_fixed_point_product(inst);
  for (double r : fp.catalyst_residuals) out.catalyst_residual = std::max(out.catalyst_residual, r);
  if (!fp.lemma_applicable) {
    out.fixed_point.status = Status::Skip;
    out.theorem.status = Status::Skip;
    return out;
  }
  out.fixed_point = judge(fp.global_residual, 1e-8);
  if (out.fixed_point.status == Status::Fail) {
    out.fixed_point.detail = {{"instance", ncto_json(inst, family)}, {"global_residual", num(fp.global_residual)}};
  }

  const GeneralTheoremCheck th = check_general_theorem(inst, rho);
  out.theorem = judge(th.identity_residual, 1e-9);
  out.theorem.maxima["chain_violation"] = std::max(0.0, th.recovery_divergence - th.delta);
  if (!th.inequality_holds) out.theorem.status = Status::Fail;
  if (out.theorem.status == Status::Fail) {
    out.theorem.detail = {{"instance", ncto_json(inst, family)},
                          {"rho", matrix_to_json(rho.matrix())},
                          {"delta", num(th.delta)},
                          {"recovery_divergence", num(th.recovery_divergence)}};
  }
  return out;
}

// ---- reduction --------------------------------------------------------------

void absorb(SuiteResult& r, const Outcome& o, const nlohmann::json& trial_label, std::uint64_t seed) {
  for (const auto& [k, v] : o.maxima) r.maxima[k] = std::max(r.maxima.count(k) ? r.maxima[k] : 0.0, v);
  switch (o.status) {
    case Status::Skip: ++r.skipped; return;
    case Status::Pass: ++r.passed; break;
    case Status::Fail: ++r.failed; break;
  }
  r.max_residual = std::max(r.max_residual, std::isnan(o.residual) ? kInf : o.residual);
  if (o.status == Status::Fail && !r.counterexample) {
    nlohmann::json ce = o.detail.is_object() ? o.detail : nlohmann::json::object();
    ce["suite"] = r.name;
    ce["seed"] = seed;
    ce["trial"] = trial_label;
    ce["residual"] = num(o.residual);
    ce["tolerance"] = r.tolerance;
    r.counterexample = std::move(ce);
  }
}

const std::vector<SuiteDef>& suite_defs() {
  static const std::vector<SuiteDef> defs = {
      {"operator.adjointness", 1e-10, adjointness_trial},
      {"divergence.data_processing", 1e-10, data_processing_trial},
      {"divergence.ordering", 1e-10, ordering_trial},
      {"channel.identity", 1e-9,
       [](const VerifyConfig& c, std::size_t i) { return with_instance(channel_instance(c, i), identity_on); }, true},
      {"channel.chain", 1e-10,
       [](const VerifyConfig& c, std::size_t i) { return with_instance(channel_instance(c, i), chain_on); }, true},
      {"channel.petz", 1e-10,
       [](const VerifyConfig& c, std::size_t i) { return with_instance(channel_instance(c, i), petz_on); }, true},
      {"channel.rotated_recovery", 1e-10, rotated_trial},
      {"oscillator.oracle", 1e-9, oscillator_trial},
  };
  return defs;
}

void validate_config(const VerifyConfig& c) {
  if (c.system_dims.empty() || c.bath_dims.empty()) throw ValidationError("dimension lists must be nonempty");
  for (const auto* list : {&c.system_dims, &c.bath_dims, &c.catalyst_dims}) {
    for (Index d : *list) {
      if (d < 1) throw ValidationError("dimensions must be positive");
    }
  }
}

CatalysisConfig catalysis_config_from(const VerifyConfig& c) {
  CatalysisConfig cc;
  cc.seed = c.seed;
  cc.trials = c.trials;
  cc.system_dim = c.system_dims.front();
  cc.catalyst_dims = c.catalyst_dims;
  cc.bath_dim = c.bath_dims.front();
  cc.threads = c.threads;
  return cc;
}

nlohmann::json suite_json(const SuiteResult& s) {
  nlohmann::json j = {{"name", s.name},
                      {"passed", s.passed},
                      {"failed", s.failed},
                      {"skipped", s.skipped},
                      {"max_residual", num(s.max_residual)},
                      {"tolerance", s.tolerance},
                      {"status", s.ok() ? "pass" : "fail"}};
  for (const auto& [k, v] : s.maxima) j["max_" + k] = num(v);
  return j;
}

}  // namespace

std::vector<Index> parse_dim_list(const std::string& text) {
  std::vector<Index> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      throw ValidationError("malformed dimension \"" + item + "\" in \"" + text + "\"");
    }
    if (used != item.size() || v < 1) throw ValidationError("malformed dimension \"" + item + "\" in \"" + text + "\"");
    out.push_back(static_cast<Index>(v));
  }
  if (out.empty()) throw ValidationError("empty dimension list");
  return out;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& d : suite_defs()) n.push_back(d.name);
    n.push_back("catalysis.fixed_point");
    n.push_back("catalysis.theorem");
    return n;
  }();
  return names;
}

SuiteResult run_suite(const std::string& name, const VerifyConfig& config) {
  validate_config(config);
  if (name == "catalysis.fixed_point" || name == "catalysis.theorem") {
    const CatalysisReport r = run_catalysis_verify(catalysis_config_from(config));
    return name == "catalysis.fixed_point" ? r.fixed_point : r.theorem;
  }
  const auto it = std::find_if(suite_defs().begin(), suite_defs().end(),
                               [&](const SuiteDef& d) { return d.name == name; });
  if (it == suite_defs().end()) throw ValidationError("unknown suite \"" + name + "\"");

  std::vector<Outcome> outcomes(config.trials);
  parallel_for(config.trials, config.threads, [&](std::size_t i) { outcomes[i] = it->trial(config, i); });

  SuiteResult r;
  r.name = it->name;
  r.tolerance = it->tolerance;
  for (std::size_t i = 0; i < outcomes.size(); ++i) absorb(r, outcomes[i], i, config.seed);

  if (config.fixture && it->takes_fixture) {
    const ThermalInstance fixture = load_instance_file(*config.fixture);
    const std::function<Outcome(const ThermalInstance&)> body =
        it->name == "channel.identity" ? identity_on : it->name == "channel.chain" ? chain_on : petz_on;
    Outcome o = with_instance(fixture, body);
    if (o.status == Status::Fail) o.detail["fixture"] = *config.fixture;
    absorb(r, o, "fixture", config.seed);
  }
  return r;
}

VerifySummary run_verify(const VerifyConfig& config) {
  validate_config(config);
  for (const auto& s : config.suites) {
    if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end()) {
      throw ValidationError("unknown suite \"" + s + "\"");
    }
  }
  // Load the fixture up front so a malformed file is a validation error.
  if (config.fixture) load_instance_file(*config.fixture);

  const auto wanted = [&](const std::string& n) {
    return config.suites.empty() || std::find(config.suites.begin(), config.suites.end(), n) != config.suites.end();
  };
  VerifySummary summary{config, {}};
  for (const auto& d : suite_defs()) {
    if (wanted(d.name)) summary.suites.push_back(run_suite(d.name, config));
  }
  if (wanted("catalysis.fixed_point") || wanted("catalysis.theorem")) {
    const CatalysisReport cat = run_catalysis_verify(catalysis_config_from(config));
    if (wanted("catalysis.fixed_point")) summary.suites.push_back(cat.fixed_point);
    if (wanted("catalysis.theorem")) summary.suites.push_back(cat.theorem);
  }
  return summary;
}

bool VerifySummary::ok() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.ok(); });
}

nlohmann::json VerifySummary::to_json() const {
  nlohmann::json j;
  j["command"] = "verify";
  j["seed"] = config.seed;
  j["trials"] = config.trials;
  j["system_dims"] = config.system_dims;
  j["bath_dims"] = config.bath_dims;
  j["catalyst_dims"] = config.catalyst_dims;
  if (config.fixture) j["fixture"] = *config.fixture;
  std::size_t passed = 0, failed = 0, skipped = 0;
  nlohmann::json suites_j = nlohmann::json::array();
  for (const auto& s : suites) {
    suites_j.push_back(suite_json(s));
    passed += s.passed;
    failed += s.failed;
    skipped += s.skipped;
  }
  j["suites"] = suites_j;
  j["totals"] = {{"passed", passed}, {"failed", failed}, {"skipped", skipped}};
  j["status"] = ok() ? "pass" : "fail";
  return j;
}

std::string VerifySummary::to_csv() const {
  CsvTable t{{"suite", "passed", "failed", "skipped", "max_residual", "tolerance", "status"}, {}};
  for (const auto& s : suites) {
    t.rows.push_back({s.name, std::to_string(s.passed), std::to_string(s.failed), std::to_string(s.skipped),
                      csv_cell(s.max_residual), csv_cell(s.tolerance), s.ok() ? "pass" : "fail"});
  }
  return t.render();
}

nlohmann::json VerifySummary::counterexample() const {
  nlohmann::json first;
  nlohmann::json others = nlohmann::json::array();
  for (const auto& s : suites) {
    if (!s.counterexample) continue;
    if (first.is_null()) {
      first = *s.counterexample;
    } else {
      others.push_back(*s.counterexample);
    }
  }
  if (first.is_null()) return first;
  first["config"] = {{"seed", config.seed},
                     {"trials", config.trials},
                     {"system_dims", config.system_dims},
                     {"bath_dims", config.bath_dims},
                     {"catalyst_dims", config.catalyst_dims}};
  first["other_failures"] = others;
  return first;
}

CatalysisReport run_catalysis_verify(const CatalysisConfig& config) {
  if (config.system_dim < 1 || config.bath_dim < 1) throw ValidationError("dimensions must be positive");
  for (Index d : config.catalyst_dims) {
    if (d < 1) throw ValidationError("dimensions must be positive");
  }
  std::vector<CatalysisTrial> trials(config.trials);
  parallel_for(config.trials, config.threads, [&](std::size_t i) {
    trials[i] = catalysis_trial(config.seed, i, config.system_dim, config.bath_dim, config.catalyst_dims);
  });

  CatalysisReport r;
  r.config = config;
  r.fixed_point.name = "catalysis.fixed_point";
  r.fixed_point.tolerance = 1e-8;
  r.theorem.name = "catalysis.theorem";
  r.theorem.tolerance = 1e-9;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    absorb(r.fixed_point, trials[i].fixed_point, i, config.seed);
    absorb(r.theorem, trials[i].theorem, i, config.seed);
    r.max_catalyst_residual = std::max(r.max_catalyst_residual, trials[i].catalyst_residual);
  }
  return r;
}

nlohmann::json CatalysisReport::to_json() const {
  return {{"command", "catalysis verify"},
          {"seed", config.seed},
          {"trials", config.trials},
          {"system_dim", config.system_dim},
          {"bath_dim", config.bath_dim},
          {"catalyst_dims", config.catalyst_dims},
          {"premise_passed", fixed_point.passed + fixed_point.failed},
          {"premise_failed", fixed_point.skipped},
          {"lemma_asserted", fixed_point.passed + fixed_point.failed},
          {"lemma_failed", fixed_point.failed},
          {"theorem_checked", theorem.passed + theorem.failed},
          {"theorem_failed", theorem.failed},
          {"max_global_residual", num(fixed_point.max_residual)},
          {"max_identity_residual", num(theorem.max_residual)},
          {"max_catalyst_residual", num(max_catalyst_residual)},
          {"suites", {suite_json(fixed_point), suite_json(theorem)}},
          {"status", ok() ? "pass" : "fail"}};
}

nlohmann::json CatalysisReport::counterexample() const {
  if (fixed_point.counterexample) return *fixed_point.counterexample;
  if (theorem.counterexample) return *theorem.counterexample;
  return nullptr;
}

}  // namespace thermorec::cli
