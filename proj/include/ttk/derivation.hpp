#pragma once

#include <memory>

#include "ttk/theory.hpp"

namespace ttk {

// Rules of the natural deduction system. Every node concludes a sequent with
// an atomic right-hand side and the same left-hand side as the root.
enum class Rule : uint8_t { Nv, Ns, Nh, Nl, Np, Nf, Na, Ne1, Ne2 };

std::string rule_name(Rule r);

struct DerivationTree {
  Rule rule = Rule::Nv;
  Sequent conclusion;  // rhs must be a single atom
  std::vector<std::shared_ptr<DerivationTree>> premises;

  // Rule-specific payload.
  size_t index = 0;        // nh: lhs conjunct; np/nf: argument index
  Atom nl_template;        // nl: the context atom psi with the marked variable
  std::string nl_var;      // nl: the marked variable x
  std::string axiom_name;  // na
  std::vector<Term> instantiation;  // na: t1..tk in the axiom's variable order
  size_t conjunct = 0;              // na: rhs conjunct index j

  size_t size() const {
    size_t n = 1;
    for (const auto& p : premises) n += p->size();
    return n;
  }
};

using DerivationPtr = std::shared_ptr<DerivationTree>;

struct CheckError : KernelError {
  std::string path;
  CheckError(const std::string& code, const std::string& path, const std::string& what)
      : KernelError(code + " at [" + path + "]: " + what), path(path) {}
};

// Verifies every node against its rule schema; returns the root conclusion.
// Throws CheckError with codes RuleMismatch, UnknownAxiom, SideConditionFailed,
// LhsDrift carrying the offending path.
Sequent check_derivation(const Theory& theory, const DerivationTree& d);

// One sequent per rhs conjunct, same variable context and lhs.
std::vector<Sequent> split_sequent(const Sequent& s);

}  // namespace ttk
