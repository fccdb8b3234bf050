#pragma once

#include <cstdint>
#include <string>

namespace ttk {

// Bounded checks certify or refute only with explicit evidence; everything
// else is inconclusive at the bound.
enum class Verdict3 : uint8_t { Certified, Refuted, Inconclusive };

inline std::string verdict_name(Verdict3 v) {
  switch (v) {
    case Verdict3::Certified: return "certified";
    case Verdict3::Refuted: return "refuted";
    case Verdict3::Inconclusive: return "inconclusive";
  }
  return "?";
}

}  // namespace ttk
