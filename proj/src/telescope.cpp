#include "ttk/telescope.hpp"

namespace ttk {

std::vector<std::pair<std::string, Sort>> Telescope::var_list() const {
  std::vector<std::pair<std::string, Sort>> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.emplace_back(e.var, e.sort);
  return out;
}

Telescope Telescope::prefix(size_t n) const {
  Telescope out;
  out.entries.assign(entries.begin(), entries.begin() + std::min(n, entries.size()));
  return out;
}

Formula Telescope::as_formula(const Theory& theory) const {
  Formula f;
  for (const auto& e : entries)
    f.atoms.push_back(Atom::eq(boundary(Term::var(e.var, e.sort), theory), e.assigned));
  return f;
}

}  // namespace ttk
