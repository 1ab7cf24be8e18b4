#pragma once

// Canonical interchange format: {"dim": n, "entries": [[re, im], ...]} in
// row-major order. Hamiltonians additionally accept {"diagonal": [E_0, ...]}.

#include <string>

#include <nlohmann/json.hpp>

#include "thermorec/operator.hpp"

namespace thermorec {

class HamiltonianSpec;

nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j);

HamiltonianSpec hamiltonian_from_json(const nlohmann::json& j);

/// Reads and parses a JSON file; throws ValidationError on I/O or syntax
/// errors.
nlohmann::json read_json_file(const std::string& path);

/// Rounds to 12 significant digits so that serialized reports print exactly
/// that many digits.
double round_sig12(double x);

}  // namespace thermorec
