#include "thermorec_cli/instance_io.hpp"

#include <array>

#include "thermorec/json_io.hpp"

namespace thermorec::cli {
namespace {

const nlohmann::json& field(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(std::string("instance is missing \"") + key + "\"");
  return j.at(key);
}

nlohmann::json diagonal_json(const HamiltonianSpec& h) {
  // Instances built here always have diagonal Hamiltonians; anything else is
  // written in full.
  const ComplexMatrix& m = h.op().matrix();
  ComplexMatrix off = m;
  off.diagonal().setZero();
  if (max_abs(off) != 0.0) return matrix_to_json(m);
  nlohmann::json d = nlohmann::json::array();
  for (Index i = 0; i < m.rows(); ++i) d.push_back(m(i, i).real());
  return {{"diagonal", d}};
}

}  // namespace

ThermalInstance instance_from_json(const nlohmann::json& j) {
  HamiltonianSpec hs = hamiltonian_from_json(field(j, "system_hamiltonian"));
  HamiltonianSpec hb = hamiltonian_from_json(field(j, "bath_hamiltonian"));
  const auto& beta_j = field(j, "beta");
  if (!beta_j.is_number()) throw ValidationError("\"beta\" must be a number");
  const double beta = beta_j.get<double>();
  ComplexMatrix v = matrix_from_json(field(j, "unitary"));
  DensityMatrix rho(matrix_from_json(field(j, "rho")));
  const bool unchecked = j.value("unchecked", false);

  const std::array<HamiltonianSpec, 2> parts{hs, hb};
  HamiltonianSpec total = HamiltonianSpec::local_sum(parts);
  EnergyConservingUnitary u = unchecked ? EnergyConservingUnitary::unchecked(std::move(v), std::move(total))
                                        : EnergyConservingUnitary(std::move(v), std::move(total));
  ThermalOperation op(std::move(u), std::move(hs), std::move(hb), beta);
  if (rho.dim() != op.system_dim()) throw ValidationError("\"rho\" does not match the system dimension");
  return {std::move(op), std::move(rho)};
}

nlohmann::json instance_to_json(const ThermalInstance& inst) {
  // beta is written at full precision so that replays are exact.
  return {{"system_hamiltonian", diagonal_json(inst.op.system_hamiltonian())},
          {"bath_hamiltonian", diagonal_json(inst.op.bath_hamiltonian())},
          {"beta", inst.op.beta()},
          {"unitary", matrix_to_json(inst.op.unitary().matrix())},
          {"rho", matrix_to_json(inst.rho.matrix())},
          {"unchecked", !inst.op.unitary().validated()}};
}

ThermalInstance load_instance_file(const std::string& path) {
  const nlohmann::json j = read_json_file(path);
  if (j.is_object() && j.contains("instance")) return instance_from_json(j.at("instance"));
  return instance_from_json(j);
}

}  // namespace thermorec::cli
