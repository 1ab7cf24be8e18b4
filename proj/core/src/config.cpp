#include "thermorec/config.hpp"

#include <cstdlib>
#include <limits>
#include <map>

namespace thermorec {
namespace {

Tolerances initial_tolerances() {
  Tolerances tol;
  if (const char* env = std::getenv("THERMO_RECOVER_MAX_DIM")) {
    char* end = nullptr;
    const unsigned long long cap = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) tol.max_dim = static_cast<std::size_t>(cap);
  }
  return tol;
}

Tolerances& global_tolerances() {
  static Tolerances tol = initial_tolerances();
  return tol;
}

}  // namespace

const Tolerances& tolerances() { return global_tolerances(); }

void set_tolerances(const Tolerances& tol) { global_tolerances() = tol; }

void apply_tolerance_override(Tolerances& tol, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ValidationError("tolerance override must look like key=value: '" + assignment + "'");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);

  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (text.empty() || *end != '\0') {
    throw ValidationError("tolerance override value is not a number: '" + assignment + "'");
  }
  if (!(value >= std::numeric_limits<double>::epsilon())) {
    throw ValidationError("tolerance override below machine epsilon: '" + assignment + "'");
  }

  const std::map<std::string, double Tolerances::*> keys = {
      {"hermitian", &Tolerances::hermitian},
      {"psd", &Tolerances::psd},
      {"trace", &Tolerances::trace},
      {"rank", &Tolerances::rank_relative},
      {"unitary", &Tolerances::unitary},
      {"commutator", &Tolerances::commutator},
      {"degeneracy", &Tolerances::degeneracy_relative},
      {"catalyst", &Tolerances::catalyst},
      {"gibbs_preserving", &Tolerances::gibbs_preserving},
  };
  if (key == "max_dim") {
    tol.max_dim = static_cast<std::size_t>(value);
    return;
  }
  const auto it = keys.find(key);
  if (it == keys.end()) throw ValidationError("unknown tolerance key: '" + key + "'");
  tol.*(it->second) = value;
}

void check_dimension(std::size_t dim) {
  if (dim == 0) throw ValidationError("dimension must be positive");
  if (dim > tolerances().max_dim) {
    throw ValidationError("dimension " + std::to_string(dim) + " exceeds max_dim " +
                          std::to_string(tolerances().max_dim));
  }
}

}  // namespace thermorec
