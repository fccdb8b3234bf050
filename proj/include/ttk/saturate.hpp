#pragma once

#include "ttk/derivation.hpp"

namespace ttk {

// Forward-chaining closure of a theory's rules over the depth-bounded closed
// term universe: the finite stand-in for the initial model. Facts are closed
// atomic formulas, canonicalized; equalities are kept as congruence classes,
// so membership queries realize the symmetry/transitivity/congruence closure
// without materializing every orientation.
class FactSet {
 public:
  FactSet() = default;

  int depth_bound() const;
  bool fuel_exhausted() const;
  size_t rounds_used() const;
  size_t fact_count() const;

  bool contains(const Atom& closed_atom) const;
  bool is_defined(const Term& t) const;
  bool equal(const Term& a, const Term& b) const;

  // Materialized defined terms, one representative per congruence class,
  // ordered by (depth, creation). All within the depth bound.
  std::vector<Term> defined_representatives() const;
  // Every materialized defined term (class members included).
  std::vector<Term> defined_terms() const;
  // Members of the class of t, when t is known.
  std::vector<Term> class_members(const Term& t) const;

  // Reads back a closed natural-deduction derivation of the atom over the
  // saturated theory (empty variable context, T left-hand side).
  std::optional<DerivationPtr> explain(const Atom& closed_atom) const;

 private:
  friend FactSet saturate(const Theory&, int, int);
  struct Engine;
  std::shared_ptr<Engine> engine_;
};

FactSet saturate(const Theory& theory, int depth, int fuel);

struct FreshenResult {
  Theory theory;               // T plus fresh constants and closed hypotheses
  Formula goal;                // rhs with constants for variables
  Substitution var_to_const;   // x -> c_x as terms
  std::map<std::string, std::string> const_to_var;
  std::map<std::string, size_t> hyp_axiom_conjunct;  // hypothesis axiom -> lhs index
  std::map<std::string, std::string> fresh_axiom_var;  // freshness axiom -> variable
};

FreshenResult freshen(const Theory& theory, const Sequent& s);

struct ProveResult {
  enum class Verdict : uint8_t { Certified, Inconclusive } verdict =
      Verdict::Inconclusive;
  std::vector<DerivationPtr> trees;  // one per rhs conjunct, over the input theory
  int depth = 0;
  int fuel = 0;
  bool certified() const { return verdict == Verdict::Certified; }
};

// Bounded decision procedure: freshen, saturate, read back. Absence of a
// proof is "inconclusive at bound", never a refutation.
ProveResult prove(const Theory& theory, const Sequent& s, int depth, int fuel);

// A freshened-and-saturated context for one (vars, lhs) pair, reusable for
// many right-hand-side queries against the same hypotheses.
class ProverContext {
 public:
  ProverContext(const Theory& theory, std::vector<std::pair<std::string, Sort>> vars,
                Formula lhs, int depth, int fuel);

  // Atoms are over the original variables.
  bool holds(const Atom& atom) const;
  std::optional<DerivationPtr> derive(const Atom& atom) const;
  bool holds_all(const Formula& f) const;

  const FactSet& facts() const { return facts_; }
  // Defined closed terms of the freshened world, translated back to the
  // variable world, one per class.
  std::vector<Term> defined_terms() const;
  // Defined congruence classes as member lists, in the variable world.
  std::vector<std::vector<Term>> equality_classes() const;

  const Theory& theory() const { return theory_; }
  const Formula& hypotheses() const { return lhs_; }
  const std::vector<std::pair<std::string, Sort>>& vars() const { return vars_; }
  int depth() const { return depth_; }
  int fuel() const { return fuel_; }

 private:
  Term to_const(const Term& t) const;
  Term to_var(const Term& t) const;
  Atom to_const(const Atom& a) const;

  Theory theory_;
  std::vector<std::pair<std::string, Sort>> vars_;
  Formula lhs_;
  int depth_;
  int fuel_;
  FreshenResult fr_;
  FactSet facts_;
};

// Rewrites a closed derivation over the freshened theory into a derivation of
// the original open sequent: constants become variables, freshness axioms
// become nv, hypothesis axioms become nh.
DerivationPtr unfreshen(const DerivationPtr& tree, const FreshenResult& fr,
                        const std::vector<std::pair<std::string, Sort>>& vars,
                        const Formula& lhs);

}  // namespace ttk
