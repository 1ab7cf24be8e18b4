#include "thermorec/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "thermorec/thermo.hpp"

namespace thermorec {

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw ValidationError("matrix_to_json: matrix must be square");
  nlohmann::json entries = nlohmann::json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      entries.push_back({round_sig12(m(i, j).real()), round_sig12(m(i, j).imag())});
    }
  }
  return {{"dim", m.rows()}, {"entries", std::move(entries)}};
}

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("entries")) {
    throw ValidationError("matrix JSON must be an object with 'dim' and 'entries'");
  }
  if (!j.at("dim").is_number_integer() || j.at("dim").get<long long>() <= 0) {
    throw ValidationError("matrix JSON 'dim' must be a positive integer");
  }
  const auto n = j.at("dim").get<long long>();
  check_dimension(static_cast<std::size_t>(n));
  const auto& entries = j.at("entries");
  if (!entries.is_array() || static_cast<long long>(entries.size()) != n * n) {
    throw ValidationError("matrix JSON 'entries' must hold dim*dim [re, im] pairs");
  }
  ComplexMatrix m(n, n);
  for (long long k = 0; k < n * n; ++k) {
    const auto& e = entries[static_cast<std::size_t>(k)];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw ValidationError("matrix JSON entry " + std::to_string(k) + " is not [re, im]");
    }
    m(k / n, k % n) = Complex(e[0].get<double>(), e[1].get<double>());
  }
  if (!m.allFinite()) throw ValidationError("matrix JSON has non-finite entries");
  return m;
}

HamiltonianSpec hamiltonian_from_json(const nlohmann::json& j) {
  if (j.is_object() && j.contains("diagonal")) {
    const auto& d = j.at("diagonal");
    if (!d.is_array() || d.empty()) throw ValidationError("'diagonal' must be a non-empty array");
    std::vector<double> energies;
    for (const auto& e : d) {
      if (!e.is_number()) throw ValidationError("'diagonal' entries must be numbers");
      energies.push_back(e.get<double>());
    }
    return HamiltonianSpec::diagonal(energies);
  }
  return HamiltonianSpec(HermitianOperator(matrix_from_json(j)));
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("malformed JSON in '" + path + "': " + e.what());
  }
}

double round_sig12(double x) {
  if (!std::isfinite(x) || x == 0.0) return x;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return std::strtod(buf, nullptr);
}

}  // namespace thermorec
