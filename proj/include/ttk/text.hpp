#pragma once

#include <set>

#include "ttk/morphism.hpp"
#include "ttk/telescope.hpp"

namespace ttk {

struct SyntaxError : KernelError {
  int line = 0;
  int col = 0;
  std::string expected;
  SyntaxError(int line, int col, const std::string& expected, const std::string& got)
      : KernelError("syntax error at " + std::to_string(line) + ":" +
                    std::to_string(col) + ": expected " + expected + ", got " + got),
        line(line), col(col), expected(expected) {}
};

struct DuplicateName : KernelError {
  int line = 0;
  DuplicateName(int line, const std::string& name)
      : KernelError("duplicate name at line " + std::to_string(line) + ": " + name),
        line(line) {}
};

struct UnknownSort : KernelError {
  int line = 0;
  UnknownSort(int line, const std::string& what)
      : KernelError("unknown sort at line " + std::to_string(line) + ": " + what),
        line(line) {}
};

// One `theory NAME { ... }` block. Imported stdlib content is merged into
// `theory` and remembered so the canonical printer can emit the import line
// instead of the expansion.
struct TheoryBlock {
  Theory theory;
  std::vector<std::string> imports;
  std::set<std::string> imported_symbols;
  std::set<std::string> imported_axioms;
  std::vector<std::pair<std::string, Telescope>> telescopes;
  std::vector<std::pair<std::string, Sequent>> goals;

  const Telescope* telescope(const std::string& name) const {
    for (const auto& [n, t] : telescopes)
      if (n == name) return &t;
    return nullptr;
  }
  const Sequent* goal(const std::string& name) const {
    for (const auto& [n, g] : goals)
      if (n == name) return &g;
    return nullptr;
  }
};

struct ParsedFile {
  std::vector<TheoryBlock> theories;
  std::vector<TheoryMorphism> morphisms;

  const TheoryBlock* theory(const std::string& name) const {
    for (const auto& t : theories)
      if (t.theory.name == name) return &t;
    return nullptr;
  }
  const TheoryMorphism* morphism(const std::string& name) const {
    for (const auto& m : morphisms)
      if (m.name == name) return &m;
    return nullptr;
  }
};

ParsedFile parse_theory_file(const std::string& text);

// Canonical form: parse(print(parse(x))) == parse(x).
std::string print_theory_file(const ParsedFile& file);
std::string print_term(const Term& t);
std::string print_formula(const Formula& f);
std::string print_sort(Sort s);

// Parses a term over a theory's signature and a variable context.
Term parse_term(const std::string& text, const Theory& theory,
                const std::vector<std::pair<std::string, Sort>>& vars);

}  // namespace ttk
