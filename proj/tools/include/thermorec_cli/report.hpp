#pragma once

// Report emission shared by every subcommand: numbers carry 12 significant
// digits, non-finite values become null, and output goes to --out or stdout.

#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace thermorec::cli {

enum class Format { Json, Csv };

/// Rounded number, or null when not finite.
nlohmann::json num(double x);

/// Same rounding as num(), rendered for a CSV cell ("inf", "-inf", "nan"
/// for non-finite values).
std::string csv_cell(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string render() const;
};

/// Writes `text` to `path`, or to `fallback` when `path` is empty.
void emit(const std::string& text, const std::string& path, std::ostream& fallback);

std::string render_json(const nlohmann::json& j);

/// `<out>.counterexample.json`, or a fixed name in the working directory when
/// no --out was given.
std::string counterexample_path(const std::string& out);

}  // namespace thermorec::cli
