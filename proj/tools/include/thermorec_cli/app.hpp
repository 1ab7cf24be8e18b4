#pragma once

#include <ostream>

namespace thermorec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitValidation = 2;

/// Entry point of thermo-recover. Reports go to --out or `out`; validation
/// errors are printed to `err` as JSON.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace thermorec::cli
