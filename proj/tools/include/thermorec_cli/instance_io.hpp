#pragma once

// Self-contained thermal-operation instances: the fixture format read by
// `verify --fixture` and written into counterexample dumps.
//
//   {"system_hamiltonian": H, "bath_hamiltonian": H, "unitary": M,
//    "beta": b, "rho": M, "unchecked": bool}
//
// H is a Hamiltonian JSON, M the matrix format. With "unchecked": true the
// unitary skips the energy-conservation checks (negative controls only).

#include <nlohmann/json.hpp>

#include "thermorec/sampling.hpp"

namespace thermorec::cli {

ThermalInstance instance_from_json(const nlohmann::json& j);
nlohmann::json instance_to_json(const ThermalInstance& inst);

/// Accepts a bare instance or a counterexample dump carrying one under
/// "instance".
ThermalInstance load_instance_file(const std::string& path);

}  // namespace thermorec::cli
