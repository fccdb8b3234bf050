#include "ttk/derivation.hpp"

#include <set>

namespace ttk {

std::string rule_name(Rule r) {
  switch (r) {
    case Rule::Nv: return "nv";
    case Rule::Ns: return "ns";
    case Rule::Nh: return "nh";
    case Rule::Nl: return "nl";
    case Rule::Np: return "np";
    case Rule::Nf: return "nf";
    case Rule::Na: return "na";
    case Rule::Ne1: return "ne1";
    case Rule::Ne2: return "ne2";
  }
  return "?";
}

namespace {

const Atom& rhs_atom(const DerivationTree& d, const std::string& path) {
  if (d.conclusion.rhs.atoms.size() != 1)
    throw CheckError("RuleMismatch", path, "conclusion rhs is not atomic");
  return d.conclusion.rhs.atoms[0];
}

// Defined(t) and t = t are interchangeable; equations match in either stored
// orientation only where a rule says so (they do not, so orientation is exact;
// canonicalization only removes the Defined/Eq distinction).
bool atom_is(const Atom& have, const Atom& want) { return atoms_equivalent(have, want); }

void expect_premises(const DerivationTree& d, size_t n, const std::string& path) {
  if (d.premises.size() != n)
    throw CheckError("RuleMismatch", path,
                     rule_name(d.rule) + " expects " + std::to_string(n) +
                         " premises, got " + std::to_string(d.premises.size()));
}

std::optional<std::pair<Term, Term>> as_equation(const Atom& a) {
  Atom c = canonicalize(a);
  if (c.kind != Atom::Kind::Eq) return std::nullopt;
  return std::make_pair(c.lhs, c.rhs);
}

void check_node(const Theory& theory, const DerivationTree& d, const Sequent& root,
                const std::string& path, std::set<const DerivationTree*>& seen) {
  // Premise subtrees are shared; a node checked once under this root stays
  // valid wherever it reappears.
  if (!seen.insert(&d).second) return;
  if (!(d.conclusion.lhs == root.lhs) || d.conclusion.vars != root.vars)
    throw CheckError("LhsDrift", path, "premise context differs from the root's");
  const Atom& goal = rhs_atom(d, path);

  for (size_t i = 0; i < d.premises.size(); ++i)
    check_node(theory, *d.premises[i], root, path + "." + std::to_string(i), seen);

  switch (d.rule) {
    case Rule::Nv: {
      expect_premises(d, 0, path);
      Atom c = canonicalize(goal);
      if (c.kind != Atom::Kind::Eq || c.lhs != c.rhs || !c.lhs.is_var())
        throw CheckError("RuleMismatch", path, "nv concludes x def");
      if (!d.conclusion.var_sort(c.lhs.head()))
        throw CheckError("SideConditionFailed", path,
                         "nv variable " + c.lhs.head() + " not in V");
      break;
    }
    case Rule::Ns: {
      expect_premises(d, 1, path);
      auto prem = as_equation(rhs_atom(*d.premises[0], path));
      auto conc = as_equation(goal);
      if (!prem || !conc || prem->first != conc->second || prem->second != conc->first)
        throw CheckError("RuleMismatch", path, "ns swaps an equation");
      break;
    }
    case Rule::Nh: {
      expect_premises(d, 0, path);
      if (d.index >= d.conclusion.lhs.atoms.size())
        throw CheckError("SideConditionFailed", path, "nh conjunct index out of range");
      if (!atom_is(goal, d.conclusion.lhs.atoms[d.index]))
        throw CheckError("RuleMismatch", path, "nh conclusion is not the conjunct");
      break;
    }
    case Rule::Nl: {
      expect_premises(d, 2, path);
      auto eq = as_equation(rhs_atom(*d.premises[0], path));
      if (!eq) throw CheckError("RuleMismatch", path, "nl first premise is an equation");
      Substitution with_a, with_b;
      with_a.map.emplace(d.nl_var, eq->first);
      with_b.map.emplace(d.nl_var, eq->second);
      if (!atom_is(rhs_atom(*d.premises[1], path), substitute(d.nl_template, with_a)))
        throw CheckError("RuleMismatch", path, "nl second premise is psi[a/x]");
      if (!atom_is(goal, substitute(d.nl_template, with_b)))
        throw CheckError("RuleMismatch", path, "nl conclusion is psi[b/x]");
      break;
    }
    case Rule::Np: {
      expect_premises(d, 1, path);
      const Atom& prem = rhs_atom(*d.premises[0], path);
      if (prem.kind != Atom::Kind::Pred)
        throw CheckError("RuleMismatch", path, "np premise is a predicate atom");
      if (!theory.pred(prem.pred))
        throw CheckError("SideConditionFailed", path, "unknown predicate " + prem.pred);
      if (d.index >= prem.args.size())
        throw CheckError("SideConditionFailed", path, "np index out of range");
      if (!atom_is(goal, Atom::defined(prem.args[d.index])))
        throw CheckError("RuleMismatch", path, "np concludes t_i def");
      break;
    }
    case Rule::Nf: {
      expect_premises(d, 1, path);
      Atom prem = canonicalize(rhs_atom(*d.premises[0], path));
      if (prem.kind != Atom::Kind::Eq || prem.lhs != prem.rhs || prem.lhs.is_var())
        throw CheckError("RuleMismatch", path, "nf premise is sigma(ts) def");
      if (!theory.fun(prem.lhs.head()))
        throw CheckError("SideConditionFailed", path,
                         "unknown symbol " + prem.lhs.head());
      if (d.index >= prem.lhs.args().size())
        throw CheckError("SideConditionFailed", path, "nf index out of range");
      if (!atom_is(goal, Atom::defined(prem.lhs.args()[d.index])))
        throw CheckError("RuleMismatch", path, "nf concludes t_i def");
      break;
    }
    case Rule::Ne1:
    case Rule::Ne2: {
      expect_premises(d, 1, path);
      auto eq = as_equation(rhs_atom(*d.premises[0], path));
      if (!eq) throw CheckError("RuleMismatch", path, "ne premise is an equation");
      Term side = d.rule == Rule::Ne1 ? eq->first : eq->second;
      if (!atom_is(goal, Atom::defined(side)))
        throw CheckError("RuleMismatch", path, "ne concludes a side's definedness");
      break;
    }
    case Rule::Na: {
      const NamedAxiom* ax = theory.axiom(d.axiom_name);
      if (!ax) throw CheckError("UnknownAxiom", path, d.axiom_name);
      const Sequent& sch = ax->sequent;
      if (d.instantiation.size() != sch.vars.size())
        throw CheckError("SideConditionFailed", path, "na instantiation arity");
      Substitution rho;
      for (size_t i = 0; i < sch.vars.size(); ++i) {
        if (d.instantiation[i].sort() != sch.vars[i].second)
          throw CheckError("SideConditionFailed", path,
                           "na instantiation sort at " + sch.vars[i].first);
        rho.map.emplace(sch.vars[i].first, d.instantiation[i]);
      }
      if (d.conjunct >= sch.rhs.atoms.size())
        throw CheckError("SideConditionFailed", path, "na conjunct index");
      size_t k = sch.vars.size(), n = sch.lhs.atoms.size();
      expect_premises(d, k + n, path);
      for (size_t i = 0; i < k; ++i)
        if (!atom_is(rhs_atom(*d.premises[i], path), Atom::defined(d.instantiation[i])))
          throw CheckError("RuleMismatch", path,
                           "na premise " + std::to_string(i) + " is t_i def");
      for (size_t i = 0; i < n; ++i)
        if (!atom_is(rhs_atom(*d.premises[k + i], path),
                     substitute(sch.lhs.atoms[i], rho)))
          throw CheckError("RuleMismatch", path,
                           "na premise " + std::to_string(k + i) + " is psi_i[rho]");
      if (!atom_is(goal, substitute(sch.rhs.atoms[d.conjunct], rho)))
        throw CheckError("RuleMismatch", path, "na conclusion is chi_j[rho]");
      break;
    }
  }
}

}  // namespace

Sequent check_derivation(const Theory& theory, const DerivationTree& d) {
  std::string why;
  if (!well_sorted_over(d.conclusion, theory, &why))
    throw CheckError("SideConditionFailed", "root", "ill-sorted conclusion: " + why);
  std::set<const DerivationTree*> seen;
  check_node(theory, d, d.conclusion, "root", seen);
  return d.conclusion;
}

std::vector<Sequent> split_sequent(const Sequent& s) {
  std::vector<Sequent> out;
  out.reserve(s.rhs.atoms.size());
  for (const auto& a : s.rhs.atoms) {
    Sequent part;
    part.vars = s.vars;
    part.lhs = s.lhs;
    part.rhs = Formula::of({a});
    out.push_back(std::move(part));
  }
  return out;
}

}  // namespace ttk
