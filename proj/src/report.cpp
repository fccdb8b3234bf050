#include "ttk/report.hpp"

#include <sstream>

namespace ttk {

std::string emit_report(const Report& r, const std::string& format) {
  if (format == "json") {
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["command"] = r.command;
    j["verdict"] = r.verdict;
    j["bounds"] = r.bounds;
    j["details"] = r.details;
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  out << r.command << ": " << r.verdict << "\n";
  if (!r.bounds.empty()) out << "bounds: " << r.bounds.dump() << "\n";
  if (!r.details.empty()) out << "details: " << r.details.dump(2) << "\n";
  out << "time: " << r.timing_ms << " ms\n";
  return out.str();
}

}  // namespace ttk
