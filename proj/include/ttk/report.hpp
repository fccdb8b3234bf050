#pragma once

#include <string>

#include <json.hpp>

namespace ttk {

// Machine-readable command report. JSON serialization is byte-stable across
// runs for equal inputs and bounds; wall-clock timing therefore appears only
// in the text rendering.
struct Report {
  std::string command;
  std::string verdict;  // ok | refuted | inconclusive | error
  nlohmann::ordered_json bounds = nlohmann::ordered_json::object();
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
  double timing_ms = 0.0;

  int exit_code() const {
    if (verdict == "ok" || verdict == "inconclusive") return 0;
    if (verdict == "refuted") return 1;
    return 2;
  }
};

std::string emit_report(const Report& r, const std::string& format);

}  // namespace ttk
