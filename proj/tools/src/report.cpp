#include "thermorec_cli/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "thermorec/config.hpp"
#include "thermorec/json_io.hpp"

namespace thermorec::cli {

nlohmann::json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  if (x == 0.0) return 0.0;  // no negative zero in reports
  return round_sig12(x);
}

std::string csv_cell(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string CsvTable::render() const {
  std::string out;
  const auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

void emit(const std::string& text, const std::string& path, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ValidationError("cannot write " + path);
  f << text;
  if (!f) throw ValidationError("failed writing " + path);
}

std::string render_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::string counterexample_path(const std::string& out) {
  return (out.empty() ? std::string("thermo-recover") : out) + ".counterexample.json";
}

}  // namespace thermorec::cli
