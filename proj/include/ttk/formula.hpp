#pragma once

#include <string>
#include <vector>

#include "ttk/term.hpp"

namespace ttk {

// Atomic formulas: t1 = t2, t|, or R(t1,...,tk). Defined(t) is kept as a
// distinct constructor for readability; canonicalize() turns it into t = t
// and is idempotent. The deduction layer treats the two as interchangeable.
struct Atom {
  enum class Kind : uint8_t { Eq, Defined, Pred } kind = Kind::Defined;
  Term lhs;                // Eq lhs, Defined term
  Term rhs;                // Eq rhs
  std::string pred;        // Pred symbol name
  std::vector<Term> args;  // Pred arguments

  static Atom eq(Term a, Term b);
  static Atom defined(Term t);
  static Atom predicate(std::string name, std::vector<Term> args);

  bool operator==(const Atom& o) const;
  bool operator!=(const Atom& o) const { return !(*this == o); }

  std::string show() const;
};

Atom canonicalize(const Atom& a);
// Semantic equality modulo Defined(t) ~ Eq(t,t).
bool atoms_equivalent(const Atom& a, const Atom& b);

Atom substitute(const Atom& a, const Substitution& rho);
void free_vars(const Atom& a, std::map<std::string, Sort>& out);

// A finite conjunction; the empty list is T (truth).
struct Formula {
  std::vector<Atom> atoms;

  bool is_top() const { return atoms.empty(); }
  bool operator==(const Formula& o) const { return atoms == o.atoms; }
  bool operator!=(const Formula& o) const { return !(*this == o); }

  static Formula top() { return {}; }
  static Formula of(std::vector<Atom> atoms) { return Formula{std::move(atoms)}; }

  std::string show() const;
};

Formula substitute(const Formula& f, const Substitution& rho);
void free_vars(const Formula& f, std::map<std::string, Sort>& out);
// Order-insensitive comparison modulo canonicalization.
bool formulas_equivalent(const Formula& a, const Formula& b);

}  // namespace ttk
