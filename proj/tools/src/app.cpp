#include "thermorec_cli/app.hpp"

#include <CLI11.hpp>

#include "commands.hpp"
#include "thermorec/config.hpp"

namespace thermorec::cli {
namespace {

void print_error(std::ostream& err, const std::string& kind, const std::string& message) {
  err << nlohmann::json{{"error", kind}, {"message", message}}.dump() << "\n";
}

// Restores the process-wide tolerances when run() returns, so repeated
// in-process invocations do not leak overrides into each other.
class ToleranceGuard {
 public:
  ToleranceGuard() : saved_(tolerances()) {}
  ~ToleranceGuard() { set_tolerances(saved_); }
  ToleranceGuard(const ToleranceGuard&) = delete;
  ToleranceGuard& operator=(const ToleranceGuard&) = delete;

 private:
  Tolerances saved_;
};

constexpr const char* kOscillatorFooter =
    "CSV columns: beta_e,p0,b,n_max,truncation_tail,p0_reversal_closed,"
    "p0_reversal_matrix,population_residual,bound,bound_matrix,bound_residual";

constexpr const char* kWorkboundFooter = "--csv columns: bound,alpha,value (one row per evaluated alpha)";

constexpr const char* kVerifyFooter = "CSV columns: suite,passed,failed,skipped,max_residual,tolerance,status";

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  ToleranceGuard guard;

  CLI::App app{"Thermal operations, recovery maps and work bounds"};
  app.name("thermo-recover");
  app.fallthrough();
  app.require_subcommand(1);

  GlobalOptions g;
  std::uint64_t seed = 0;
  std::string format = "json";
  std::vector<std::string> tol_overrides;
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed (required by randomized commands)");
  app.add_option("--out", g.out, "Report path (stdout when omitted)");
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--tol-override", tol_overrides, "Tolerance override key=value (repeatable)");

  DivergenceOptions div;
  std::string alpha_text;
  auto* div_cmd = app.add_subcommand("divergence", "Relative entropy or Renyi divergence of two states");
  div_cmd->add_option("--a", div.a, "First state (matrix JSON)")->required();
  div_cmd->add_option("--b", div.b, "Second state (matrix JSON)")->required();
  auto* alpha_opt = div_cmd->add_option("--alpha", alpha_text, "Renyi order, a number >= 0 or inf");

  WorkboundOptions wb;
  std::string wb_unitary, wb_hb, wb_csv;
  double wb_kt = 1.0;
  auto* wb_cmd = app.add_subcommand("workbound", "Work bounds for a transition rho -> sigma, in units of kT");
  wb_cmd->add_option("--rho", wb.rho, "Initial state")->required();
  wb_cmd->add_option("--sigma", wb.sigma, "Final state")->required();
  wb_cmd->add_option("--hs", wb.hs, "System Hamiltonian")->required();
  wb_cmd->add_option("--beta", wb.beta, "Inverse temperature")->required();
  wb_cmd->add_option("--mode", wb.mode, "std, nano-gain or nano-invest")
      ->check(CLI::IsMember({"std", "nano-gain", "nano-invest"}));
  auto* wb_unitary_opt = wb_cmd->add_option("--unitary", wb_unitary, "Energy-conserving unitary implementing the transition");
  auto* wb_hb_opt = wb_cmd->add_option("--hb", wb_hb, "Bath Hamiltonian for --unitary");
  auto* wb_csv_opt = wb_cmd->add_option("--csv", wb_csv, "Write the alpha trace here");
  auto* wb_kt_opt = wb_cmd->add_option("--kt", wb_kt, "Also report the selected value times kT");
  wb_cmd->footer(kWorkboundFooter);

  RecoverOptions rec;
  std::string rec_unitary, rec_hs, rec_hb, rec_sigma, rec_rho, rec_dims;
  double rec_beta = 0.0;
  auto* rec_cmd = app.add_subcommand("recover", "Reversal (Petz) recovery of a thermal operation");
  auto* rec_unitary_opt = rec_cmd->add_option("--unitary", rec_unitary, "Joint unitary on system and bath");
  auto* rec_hs_opt = rec_cmd->add_option("--hs", rec_hs, "System Hamiltonian");
  auto* rec_hb_opt = rec_cmd->add_option("--hb", rec_hb, "Bath Hamiltonian");
  auto* rec_beta_opt = rec_cmd->add_option("--beta", rec_beta, "Inverse temperature");
  auto* rec_sigma_opt = rec_cmd->add_option("--sigma", rec_sigma, "Output state to recover from");
  auto* rec_rho_opt = rec_cmd->add_option("--rho", rec_rho, "Input state, enables the bound chain");
  auto* rec_dims_opt = rec_cmd->add_option("--dims", rec_dims, "Sample an instance instead, e.g. 2x4 (needs --seed)");

  OscillatorOptions osc;
  double osc_p0 = 1.0;
  int osc_nmax = 0;
  std::string osc_sweep, osc_csv;
  auto* osc_cmd = app.add_subcommand("oscillator", "Two-level system coupled to a harmonic-oscillator bath");
  osc_cmd->add_option("--beta-e", osc.beta_e, "beta times the system gap")->required();
  auto* osc_p0_opt = osc_cmd->add_option("--p0", osc_p0, "Ground population of the target state");
  auto* osc_nmax_opt = osc_cmd->add_option("--nmax", osc_nmax, "Bath truncation level (automatic when omitted)");
  auto* osc_sweep_opt = osc_cmd->add_option("--sweep", osc_sweep, "p0:start:stop:steps");
  auto* osc_csv_opt = osc_cmd->add_option("--csv", osc_csv, "Write the point table here");
  osc_cmd->footer(kOscillatorFooter);

  CatalysisOptions cat;
  auto* cat_cmd = app.add_subcommand("catalysis", "Catalytic thermal operations");
  cat_cmd->require_subcommand(1);
  auto* cat_verify = cat_cmd->add_subcommand("verify", "Fixed-point product and recovery sweeps (needs --seed)");
  cat_verify->add_option("--trials", cat.trials, "Number of sampled instances");
  cat_verify->add_option("--dims", cat.dims, "system;catalyst,catalyst,...");
  cat_verify->add_option("--bath-dim", cat.bath_dim, "Bath dimension");
  cat_verify->add_option("--threads", cat.threads, "Worker threads (0 = hardware)");
  cat_verify->footer(kVerifyFooter);

  VerifyOptions ver;
  std::string ver_fixture;
  auto* ver_cmd = app.add_subcommand("verify", "Run the randomized property suites (needs --seed)");
  ver_cmd->add_option("--trials", ver.trials, "Trials per suite");
  ver_cmd->add_option("--dims", ver.dims, "system dims;bath dims, e.g. 2,3;2,3,4");
  ver_cmd->add_option("--catalyst-dims", ver.catalyst_dims, "Catalyst dimensions for the catalysis suites");
  auto* ver_fixture_opt = ver_cmd->add_option("--fixture", ver_fixture, "Extra instance for the channel suites");
  ver_cmd->add_option("--suite", ver.suites, "Run only this suite (repeatable)");
  ver_cmd->add_option("--threads", ver.threads, "Worker threads (0 = hardware)");
  ver_cmd->footer(kVerifyFooter);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    print_error(err, "usage", e.what());
    return kExitValidation;
  }

  try {
    if (!tol_overrides.empty()) {
      Tolerances tol = tolerances();
      for (const auto& o : tol_overrides) apply_tolerance_override(tol, o);
      set_tolerances(tol);
    }
    if (seed_opt->count() > 0) g.seed = seed;
    g.format = format == "csv" ? Format::Csv : Format::Json;

    if (div_cmd->parsed()) {
      if (alpha_opt->count() > 0) div.alpha = alpha_text;
      return cmd_divergence(g, div, out);
    }
    if (wb_cmd->parsed()) {
      if (wb_unitary_opt->count() > 0) wb.unitary = wb_unitary;
      if (wb_hb_opt->count() > 0) wb.hb = wb_hb;
      if (wb_csv_opt->count() > 0) wb.csv = wb_csv;
      if (wb_kt_opt->count() > 0) wb.kt = wb_kt;
      return cmd_workbound(g, wb, out);
    }
    if (rec_cmd->parsed()) {
      if (rec_unitary_opt->count() > 0) rec.unitary = rec_unitary;
      if (rec_hs_opt->count() > 0) rec.hs = rec_hs;
      if (rec_hb_opt->count() > 0) rec.hb = rec_hb;
      if (rec_beta_opt->count() > 0) rec.beta = rec_beta;
      if (rec_sigma_opt->count() > 0) rec.sigma = rec_sigma;
      if (rec_rho_opt->count() > 0) rec.rho = rec_rho;
      if (rec_dims_opt->count() > 0) rec.dims = rec_dims;
      return cmd_recover(g, rec, out);
    }
    if (osc_cmd->parsed()) {
      if (osc_p0_opt->count() > 0) osc.p0 = osc_p0;
      if (osc_nmax_opt->count() > 0) osc.n_max = osc_nmax;
      if (osc_sweep_opt->count() > 0) osc.sweep = osc_sweep;
      if (osc_csv_opt->count() > 0) osc.csv = osc_csv;
      return cmd_oscillator(g, osc, out);
    }
    if (cat_verify->parsed()) return cmd_catalysis_verify(g, cat, out);
    if (ver_cmd->parsed()) {
      if (ver_fixture_opt->count() > 0) ver.fixture = ver_fixture;
      return cmd_verify(g, ver, out);
    }
    throw ValidationError("no command given");
  } catch (const ValidationError& e) {
    print_error(err, "validation", e.what());
    return kExitValidation;
  } catch (const DomainError& e) {
    print_error(err, "domain", e.what());
    return kExitValidation;
  } catch (const nlohmann::json::exception& e) {
    print_error(err, "json", e.what());
    return kExitValidation;
  } catch (const std::logic_error& e) {
    // Internal consistency check tripped: treat like a detected violation.
    print_error(err, "internal", e.what());
    return kExitViolation;
  } catch (const std::exception& e) {
    print_error(err, "runtime", e.what());
    return kExitValidation;
  }
}

}  // namespace thermorec::cli
