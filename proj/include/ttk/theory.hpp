#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ttk/formula.hpp"

namespace ttk {

struct FunSymbol {
  std::string name;
  std::vector<Sort> arg_sorts;
  Sort result_sort;
  // Index of a leading context argument, when the theory's conventions mark
  // one (used by the context-normal-form analyses).
  std::optional<size_t> context_position;
  bool from_base = false;   // belongs to the shared base theory
  bool structural = false;  // substitution/weakening machinery, not a basic symbol

  size_t arity() const { return arg_sorts.size(); }
};

struct PredSymbol {
  std::string name;
  std::vector<Sort> arg_sorts;
  bool from_base = false;
};

// A sequent phi |-_V psi. The variable context keeps declaration order; rule
// na instantiates variables in this order.
struct Sequent {
  std::vector<std::pair<std::string, Sort>> vars;
  Formula lhs;
  Formula rhs;

  const Sort* var_sort(const std::string& name) const {
    for (const auto& [n, s] : vars)
      if (n == name) return &s;
    return nullptr;
  }
  bool operator==(const Sequent& o) const {
    return vars == o.vars && lhs == o.lhs && rhs == o.rhs;
  }
  std::string show() const;
};

struct NamedAxiom {
  std::string name;
  Sequent sequent;
  bool from_base = false;
};

struct Theory {
  std::string name;
  std::vector<FunSymbol> fun_symbols;
  std::vector<PredSymbol> pred_symbols;
  std::vector<NamedAxiom> axioms;

  const FunSymbol* fun(const std::string& name) const;
  const PredSymbol* pred(const std::string& name) const;
  const NamedAxiom* axiom(const std::string& name) const;

  void add_fun(FunSymbol f);
  void add_pred(PredSymbol p);
  void add_axiom(std::string name, Sequent s, bool from_base = false);
};

// Errors raised by core operations. Checkers report; constructors throw.
struct KernelError : std::runtime_error {
  explicit KernelError(const std::string& what) : std::runtime_error(what) {}
};
struct UnknownVariable : KernelError { using KernelError::KernelError; };
struct UnknownSymbol : KernelError { using KernelError::KernelError; };
struct ArityMismatch : KernelError { using KernelError::KernelError; };
struct SortMismatch : KernelError { using KernelError::KernelError; };
struct NoBoundary : KernelError { using KernelError::KernelError; };
struct MissingBaseSymbol : KernelError { using KernelError::KernelError; };

// Syntax-directed sort reconstruction. Validates t's variables against vctx
// and its applications against their stored sorts.
Sort sort_of(const Term& t, const std::map<std::string, Sort>& vctx);

// e_p: ty_n(t) for tm-sorted t, ft_n(t) for ty-sorted t. The theory must
// declare the base symbol at the needed level.
Term boundary(const Term& t, const Theory& theory);

// Names of the base boundary symbols at a level.
std::string ty_symbol_name(int level);
std::string ft_symbol_name(int level);

struct ValidationIssue {
  std::string code;      // UnknownSymbol, OpenSequent, SortMismatch, DuplicateName, ...
  std::string position;  // axiom/symbol name and path
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
};

ValidationReport validate_theory(const Theory& t);

// lambda-smallness: non-base symbol and axiom counts each < lambda.
// lambda == 0 is the unbounded sentinel (aleph_0), so everything finite is small.
bool is_small(const Theory& t, uint64_t lambda);

bool well_sorted_over(const Term& t, const Theory& theory, std::string* why = nullptr);
bool well_sorted_over(const Formula& f, const Theory& theory,
                      const std::vector<std::pair<std::string, Sort>>& vars,
                      std::string* why = nullptr);
bool well_sorted_over(const Sequent& s, const Theory& theory, std::string* why = nullptr);

}  // namespace ttk
