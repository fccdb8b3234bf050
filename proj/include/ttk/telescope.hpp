#pragma once

#include "ttk/theory.hpp"

namespace ttk {

// An ordered cofibrant context [(x_i, t_i)]: each assigned term may mention only
// earlier variables, and the induced formula is /\ e_p(x_i) = t_i.
struct TelescopeEntry {
  std::string var;
  Sort sort;  // kind tm or ty
  Term assigned;
};

struct Telescope {
  std::vector<TelescopeEntry> entries;

  bool empty() const { return entries.empty(); }
  std::vector<std::pair<std::string, Sort>> var_list() const;
  // Prefix of the first n entries.
  Telescope prefix(size_t n) const;
  // /\ e_p(x_i) = t_i over the theory's boundary symbols.
  Formula as_formula(const Theory& theory) const;
};

}  // namespace ttk
