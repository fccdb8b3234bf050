#include "ttk/structure.hpp"

#include <algorithm>

namespace ttk {

namespace {

// sigma(x1,...,xk) over the axiom's own variable list, or nullopt.
std::optional<std::string> as_symbol_definedness(const Sequent& s, const Atom& atom) {
  Atom c = canonicalize(atom);
  if (c.kind != Atom::Kind::Eq || c.lhs != c.rhs) return std::nullopt;
  const Term& t = c.lhs;
  if (t.is_var() || t.args().size() != s.vars.size()) return std::nullopt;
  for (size_t i = 0; i < s.vars.size(); ++i) {
    const Term& a = t.args()[i];
    if (!a.is_var() || a.head() != s.vars[i].first) return std::nullopt;
  }
  return t.head();
}

std::vector<Term> canonical_vars(const FunSymbol& sym, std::vector<std::string>* names) {
  std::vector<Term> vars;
  for (size_t i = 0; i < sym.arity(); ++i) {
    std::string n = "x" + std::to_string(i + 1);
    if (names) names->push_back(n);
    vars.push_back(Term::var(n, sym.arg_sorts[i]));
  }
  return vars;
}

// Renames a formula over one variable list to another, positionally.
Formula rename_formula(const Formula& f, const std::vector<std::pair<std::string, Sort>>& from,
                       const std::vector<std::pair<std::string, Sort>>& to) {
  Substitution rho;
  for (size_t i = 0; i < from.size() && i < to.size(); ++i)
    rho.map.emplace(from[i].first, Term::var(to[i].first, to[i].second));
  return substitute(f, rho);
}

void subterms_of(const Term& t, std::vector<Term>& out) {
  if (!t.is_var()) {
    out.push_back(t);
    for (const auto& a : t.args()) subterms_of(a, out);
  }
}

}  // namespace

SeparationCertificate classify_separated(const Theory& theory, int bound) {
  SeparationCertificate cert;
  std::map<std::string, const NamedAxiom*> a_d_axioms;
  // First pass: definedness axioms.
  std::set<std::string> taken;
  for (const auto& ax : theory.axioms) {
    const Sequent& s = ax.sequent;
    if (s.rhs.atoms.size() != 1) continue;
    auto sym = as_symbol_definedness(s, s.rhs.atoms[0]);
    if (!sym) continue;
    if (cert.a_d.count(*sym))
      throw NotSeparated("symbol " + *sym + " has two definedness axioms: " +
                         cert.a_d[*sym] + " and " + ax.name);
    cert.a_d[*sym] = ax.name;
    cert.phi_sigma[*sym] = s.lhs;
    a_d_axioms[*sym] = &ax;
    taken.insert(ax.name);
  }
  for (const auto& f : theory.fun_symbols)
    if (!cert.a_d.count(f.name))
      throw NotSeparated("symbol " + f.name + " has no definedness axiom");
  // Second pass: converse axioms, everything else is equational.
  for (const auto& ax : theory.axioms) {
    if (taken.count(ax.name)) continue;
    const Sequent& s = ax.sequent;
    bool converse = false;
    if (s.lhs.atoms.size() == 1) {
      auto sym = as_symbol_definedness(s, s.lhs.atoms[0]);
      if (sym && cert.a_d.count(*sym)) {
        const NamedAxiom* def_ax = a_d_axioms[*sym];
        Formula expected = rename_formula(def_ax->sequent.lhs, def_ax->sequent.vars,
                                          s.vars);
        if (formulas_equivalent(s.rhs, expected)) converse = true;
      }
    }
    if (converse)
      cert.a_d_prime.insert(ax.name);
    else
      cert.a_e.insert(ax.name);
  }

  // Condition 3, bounded: closed substitutions of term depth <= bound over
  // the minimal fragment, with guard facts looked up in a slightly deeper
  // universe so the boundary chains of the substituted terms stay in range.
  cert.condition3.bound = bound;
  int margin = bound + 2;
  Theory minimal = theory;
  minimal.axioms.clear();
  for (const auto& ax : theory.axioms)
    if (!cert.a_d_prime.count(ax.name)) minimal.axioms.push_back(ax);
  FactSet fs = saturate(minimal, margin, 2 * margin + 6);
  std::map<Sort, std::vector<Term>> by_sort;
  for (const auto& t : fs.defined_representatives())
    if (t.depth() <= bound) by_sort[t.sort()].push_back(t);
  auto atom_in_range = [&](const Atom& a) {
    Atom c = canonicalize(a);
    if (c.kind == Atom::Kind::Eq)
      return c.lhs.depth() <= margin && c.rhs.depth() <= margin;
    for (const auto& t : c.args)
      if (t.depth() > margin) return false;
    return true;
  };

  for (const auto& ax : theory.axioms) {
    if (!cert.a_e.count(ax.name)) continue;
    const Sequent& s = ax.sequent;
    std::vector<Term> rhs_subterms;
    for (const auto& a : s.rhs.atoms) {
      Atom c = canonicalize(a);
      if (c.kind == Atom::Kind::Eq) {
        subterms_of(c.lhs, rhs_subterms);
        subterms_of(c.rhs, rhs_subterms);
      } else {
        for (const auto& t : c.args) subterms_of(t, rhs_subterms);
      }
    }
    // Enumerate closed substitutions into the axiom variables.
    std::vector<std::vector<Term>> choices;
    bool possible = true;
    for (const auto& [v, srt] : s.vars) {
      auto it = by_sort.find(srt);
      if (it == by_sort.end()) {
        possible = false;
        break;
      }
      choices.push_back(it->second);
    }
    if (!possible) continue;
    std::vector<size_t> idx(choices.size(), 0);
    bool done = choices.empty();
    size_t guard = 0;
    while (!done && guard < 100000) {
      guard++;
      Substitution rho;
      for (size_t i = 0; i < choices.size(); ++i)
        rho.map.emplace(s.vars[i].first, choices[i][idx[i]]);
      bool premise = true;
      for (const auto& a : s.lhs.atoms) {
        Atom inst = substitute(a, rho);
        if (!atom_in_range(inst) || !fs.contains(inst)) premise = false;
      }
      if (premise) {
        cert.condition3.instances_checked++;
        for (const auto& sub : rhs_subterms) {
          const FunSymbol* sym = theory.fun(sub.head());
          if (!sym) continue;
          auto pit = cert.phi_sigma.find(sub.head());
          if (pit == cert.phi_sigma.end()) continue;
          const NamedAxiom* def_ax = a_d_axioms[sub.head()];
          Substitution inner;
          for (size_t i = 0; i < def_ax->sequent.vars.size(); ++i)
            inner.map.emplace(def_ax->sequent.vars[i].first,
                              substitute(sub.args()[i], rho));
          for (const auto& g : pit->second.atoms) {
            Atom inst = substitute(g, inner);
            if (!atom_in_range(inst)) continue;  // outside this bound's universe
            if (!fs.contains(inst))
              cert.condition3.violations.push_back(
                  "axiom " + ax.name + ", subterm " + sub.head() +
                  ": guard not derivable for a closed instance");
          }
        }
      }
      // advance
      done = true;
      for (size_t i = 0; i < idx.size(); ++i) {
        if (++idx[i] < choices[i].size()) {
          done = false;
          break;
        }
        idx[i] = 0;
      }
      if (choices.empty()) break;
    }
  }
  return cert;
}

std::pair<Theory, Theory> minimal_maximal(const SeparationCertificate& cert,
                                          const Theory& theory) {
  Theory minimal = theory;
  minimal.name = theory.name + "_min";
  minimal.axioms.clear();
  for (const auto& ax : theory.axioms)
    if (!cert.a_d_prime.count(ax.name)) minimal.axioms.push_back(ax);

  Theory maximal = minimal;
  maximal.name = theory.name + "_max";
  for (const auto& ax : theory.axioms)
    if (cert.a_d_prime.count(ax.name)) maximal.axioms.push_back(ax);
  // Synthesize the missing converses.
  std::set<std::string> have;
  for (const auto& axname : cert.a_d_prime) {
    const NamedAxiom* ax = theory.axiom(axname);
    if (ax && ax->sequent.lhs.atoms.size() == 1) {
      auto sym = as_symbol_definedness(ax->sequent, ax->sequent.lhs.atoms[0]);
      if (sym) have.insert(*sym);
    }
  }
  for (const auto& [sym, def_name] : cert.a_d) {
    if (have.count(sym)) continue;
    const NamedAxiom* def_ax = theory.axiom(def_name);
    Sequent s;
    s.vars = def_ax->sequent.vars;
    s.lhs = def_ax->sequent.rhs;
    s.rhs = def_ax->sequent.lhs;
    if (s.rhs.is_top()) continue;  // converse of an unconditional axiom is vacuous
    std::string name = def_name + "_conv";
    while (maximal.axiom(name)) name += "'";
    maximal.add_axiom(name, std::move(s));
  }
  return {std::move(minimal), std::move(maximal)};
}

WellDefinedReport check_well_defined(const Theory& theory, const WellDefinedCert& cand,
                                     int depth) {
  WellDefinedReport rep;
  auto rank_of = [&](const std::string& name) -> int {
    auto it = cand.order.find(name);
    if (it != cand.order.end()) return it->second;
    return 0;  // base symbols sit at the bottom
  };
  for (const auto& sym : theory.fun_symbols) {
    if (sym.from_base) continue;
    WellDefinedReport::PerSymbol ps;
    ps.symbol = sym.name;
    auto it = cand.defining.find(sym.name);
    if (it == cand.defining.end())
      throw MissingSymbol("no defining entry for symbol " + sym.name);
    const auto& pins = it->second;
    if (pins.size() != sym.arity())
      throw MissingSymbol("defining entry arity mismatch for " + sym.name);

    std::vector<std::string> names;
    std::vector<Term> vars = canonical_vars(sym, &names);
    int my_rank = rank_of(sym.name);

    // Structural constraints: occurrence ranks and variable scoping.
    for (size_t i = 0; i < pins.size(); ++i) {
      if (!pins[i]) continue;
      const Term& pin = *pins[i];
      std::vector<Term> occ;
      subterms_of(pin, occ);
      for (const auto& o : occ) {
        const FunSymbol* of = theory.fun(o.head());
        if (of && !of->from_base && rank_of(o.head()) >= my_rank)
          throw CyclicOrder("defining term of " + sym.name + " mentions " + o.head() +
                            " which is not strictly below it");
      }
      for (const auto& [v, srt] : free_vars(pin)) {
        bool earlier = false;
        for (size_t j = 0; j < i; ++j)
          if (names[j] == v) earlier = true;
        if (!earlier) {
          ps.structural_ok = false;
          ps.note = "pin " + std::to_string(i) + " mentions " + v;
        }
      }
      if (!has_boundary(sym.arg_sorts[i]) ||
          pin.sort() != boundary_sort(sym.arg_sorts[i])) {
        ps.structural_ok = false;
        ps.note = "pin " + std::to_string(i) + " has the wrong sort";
      }
    }
    if (!ps.structural_ok) {
      rep.symbols.push_back(std::move(ps));
      continue;
    }

    // Pin-telescope definedness: /\_{i<j} e(x_i)=A_i |- A_j def.
    Formula prefix;
    for (size_t j = 0; j < pins.size(); ++j) {
      if (pins[j]) {
        Sequent q;
        for (size_t i = 0; i < j; ++i) q.vars.emplace_back(names[i], sym.arg_sorts[i]);
        q.lhs = prefix;
        q.rhs = Formula::of({Atom::defined(*pins[j])});
        auto r = prove(theory, q, depth, 2 * depth + 6);
        ps.sequents.emplace_back("A" + std::to_string(j + 1) + " defined",
                                 r.certified() ? Verdict3::Certified
                                               : Verdict3::Inconclusive);
        prefix.atoms.push_back(
            Atom::eq(boundary(vars[j], theory), *pins[j]));
      }
    }
    // Bi-implication with sigma(xs) def.
    Term app = Term::app(sym, vars);
    {
      Sequent fwd;
      for (size_t i = 0; i < names.size(); ++i) fwd.vars.emplace_back(names[i], sym.arg_sorts[i]);
      fwd.lhs = prefix;
      fwd.rhs = Formula::of({Atom::defined(app)});
      auto r = prove(theory, fwd, depth, 2 * depth + 6);
      ps.sequents.emplace_back("pins imply defined", r.certified()
                                                         ? Verdict3::Certified
                                                         : Verdict3::Inconclusive);
    }
    {
      Sequent bwd;
      for (size_t i = 0; i < names.size(); ++i) bwd.vars.emplace_back(names[i], sym.arg_sorts[i]);
      bwd.lhs = Formula::of({Atom::defined(app)});
      bwd.rhs = prefix;
      if (prefix.is_top()) {
        ps.sequents.emplace_back("defined implies pins", Verdict3::Certified);
      } else {
        auto r = prove(theory, bwd, depth, 2 * depth + 6);
        ps.sequents.emplace_back("defined implies pins", r.certified()
                                                             ? Verdict3::Certified
                                                             : Verdict3::Inconclusive);
      }
    }
    rep.symbols.push_back(std::move(ps));
  }
  return rep;
}

TRS extract_directed(const Theory& theory, const SeparationCertificate& cert) {
  std::vector<RewriteRule> rules;
  for (const auto& ax : theory.axioms) {
    if (!cert.a_e.count(ax.name)) continue;
    const Sequent& s = ax.sequent;
    if (s.rhs.atoms.size() != 1)
      throw UndirectedAxiom(ax.name, "non-equational-rhs");
    Atom c = canonicalize(s.rhs.atoms[0]);
    if (c.kind != Atom::Kind::Eq || c.lhs == c.rhs)
      throw UndirectedAxiom(ax.name, "non-equational-rhs");
    if (c.lhs.is_var()) throw UndirectedAxiom(ax.name, "variable-lhs");
    auto lv = free_vars(c.lhs);
    for (const auto& [v, srt] : free_vars(c.rhs))
      if (!lv.count(v)) throw UndirectedAxiom(ax.name, "escaping-variable");
    RewriteRule r;
    r.name = ax.name;
    r.lhs = c.lhs;
    r.rhs = c.rhs;
    rules.push_back(std::move(r));
  }
  return validate_trs(std::move(rules));
}

std::optional<DerivationPtr> derive_step_equality(const ProverContext& ctx,
                                                  const TRS& trs,
                                                  const std::vector<RewriteRule>& tel_rules,
                                                  const Term& start,
                                                  const StepInfo& step) {
  auto mk = [&](Rule rule, Atom concl) {
    auto d = std::make_shared<DerivationTree>();
    d->rule = rule;
    d->conclusion.vars = ctx.vars();
    d->conclusion.lhs = ctx.hypotheses();
    d->conclusion.rhs = Formula::of({std::move(concl)});
    return d;
  };

  auto redex_opt = subterm_at(start, step.pos);
  if (!redex_opt) return std::nullopt;
  Term redex = *redex_opt;

  DerivationPtr redex_eq;
  Term replacement;
  if (step.from_telescope) {
    if (step.rule_index >= tel_rules.size()) return std::nullopt;
    // The telescope conjunct e(x_i) = t_i is hypothesis #rule_index.
    const auto& hyp = ctx.hypotheses().atoms;
    if (step.rule_index >= hyp.size()) return std::nullopt;
    redex_eq = mk(Rule::Nh, hyp[step.rule_index]);
    redex_eq->index = step.rule_index;
    replacement = tel_rules[step.rule_index].rhs;
  } else {
    const RewriteRule& rule = trs.rules[step.rule_index];
    const NamedAxiom* ax = ctx.theory().axiom(rule.name);
    if (!ax) return std::nullopt;
    const Sequent& sch = ax->sequent;
    Substitution rho = step.subst;
    std::vector<Term> inst;
    for (const auto& [v, srt] : sch.vars) {
      const Term* bound = rho.find(v);
      if (!bound) return std::nullopt;  // variable not determined by the lhs
      inst.push_back(*bound);
    }
    replacement = substitute(rule.rhs, rho);
    Atom concl = canonicalize(substitute(sch.rhs.atoms[0], rho));
    auto na = mk(Rule::Na, concl);
    na->axiom_name = ax->name;
    na->conjunct = 0;
    na->instantiation = inst;
    for (const Term& t : inst) {
      auto d = ctx.derive(Atom::defined(t));
      if (!d) return std::nullopt;
      na->premises.push_back(*d);
    }
    for (const auto& g : sch.lhs.atoms) {
      auto d = ctx.derive(substitute(g, rho));
      if (!d) return std::nullopt;
      na->premises.push_back(*d);
    }
    redex_eq = na;
  }

  auto start_def = ctx.derive(Atom::defined(start));
  if (!start_def) return std::nullopt;

  // phi |- start = start, then one nl step placing the redex equality in context.
  Term hole = Term::var("@hole", redex.sort());
  Atom tmpl = Atom::eq(start, replace_at(start, step.pos, hole));
  auto nl = mk(Rule::Nl, Atom::eq(start, step.result));
  nl->nl_template = tmpl;
  nl->nl_var = "@hole";
  nl->premises = {redex_eq, *start_def};
  return nl;
}

ReductionSystemReport validate_reduction_system(const Theory& theory, const TRS& trs,
                                                const std::vector<Telescope>& tels,
                                                size_t samples, int depth) {
  ReductionSystemReport rep;
  rep.condition1 = Verdict3::Certified;
  rep.notes.push_back("condition 1 automatic for the =>_R u =>_phi shape");

  int fuel = 4 * depth + 10;
  size_t cond2_failed = 0, cond3_failed = 0;
  for (const auto& tel : tels) {
    ProverContext ctx(theory, tel.var_list(), tel.as_formula(theory), depth, fuel);
    auto tel_rules = telescope_rules(tel, theory);
    size_t taken = 0;
    std::vector<Term> sample_pool;
    for (const auto& members : ctx.equality_classes())
      for (const auto& m : members) sample_pool.push_back(m);
    for (const auto& t : sample_pool) {
      if (taken >= samples) break;
      for (const auto& st : step(trs, tel_rules, t)) {
        if (taken >= samples) break;
        ++taken;
        rep.cond2_steps_checked++;
        auto d = derive_step_equality(ctx, trs, tel_rules, t, st);
        bool ok = false;
        if (d) {
          try {
            check_derivation(theory, **d);
            ok = true;
          } catch (const KernelError&) {
            ok = false;
          }
        }
        if (!ok) {
          cond2_failed++;
          rep.cond2_steps_failed++;
        }
      }
    }
    // Condition 3: sides of A_e instances whose guards hold are one-step
    // related or joinable.
    for (const auto& rule : trs.rules) {
      const NamedAxiom* ax = theory.axiom(rule.name);
      if (!ax) continue;
      size_t taken3 = 0;
      auto defined = ctx.defined_terms();
      std::map<Sort, std::vector<Term>> by_sort;
      for (const auto& t : defined) by_sort[t.sort()].push_back(t);
      const Sequent& sch = ax->sequent;
      std::vector<std::vector<Term>> choices;
      bool possible = true;
      for (const auto& [v, srt] : sch.vars) {
        auto bit = by_sort.find(srt);
        if (bit == by_sort.end()) {
          possible = false;
          break;
        }
        choices.push_back(bit->second);
      }
      if (!possible) continue;
      std::vector<size_t> idx(choices.size(), 0);
      bool done = false;
      while (!done && taken3 < samples) {
        Substitution rho;
        for (size_t i = 0; i < choices.size(); ++i)
          rho.map.emplace(sch.vars[i].first, choices[i][idx[i]]);
        bool premise = ctx.holds_all(substitute(sch.lhs, rho));
        if (premise) {
          Term l = substitute(rule.lhs, rho);
          Term rside = substitute(rule.rhs, rho);
          if (ctx.holds(Atom::defined(l))) {
            taken3++;
            rep.cond3_instances_checked++;
            bool one_step = false;
            for (const auto& st : step(trs, tel_rules, l))
              if (st.result == rside) one_step = true;
            if (!one_step && !joinable(trs, tel_rules, l, rside, fuel, 64)) {
              cond3_failed++;
              rep.cond3_instances_failed++;
            }
          }
        }
        done = choices.empty();
        for (size_t i = 0; i < idx.size(); ++i) {
          if (++idx[i] < choices[i].size()) break;
          idx[i] = 0;
          if (i + 1 == idx.size()) done = true;
        }
        if (choices.empty()) break;
      }
    }
  }
  rep.condition2 = rep.cond2_steps_checked == 0
                       ? Verdict3::Certified
                       : (cond2_failed == 0 ? Verdict3::Certified
                                            : Verdict3::Inconclusive);
  rep.condition3 = cond3_failed == 0 ? Verdict3::Certified : Verdict3::Inconclusive;
  return rep;
}

ConfluenceReport certify_confluent(const Theory& theory, const TRS& trs,
                                   const Telescope& tel, int depth, int fuel) {
  ConfluenceReport rep;
  rep.depth = depth;
  rep.fuel = fuel;
  ProverContext ctx(theory, tel.var_list(), tel.as_formula(theory), depth, fuel);
  if (ctx.facts().fuel_exhausted())
    rep.notes.push_back("saturation fuel exhausted before the fixed point");
  auto tel_rules = telescope_rules(tel, theory);

  // Forward: every derivable equality pair is joinable.
  for (const auto& members : ctx.equality_classes()) {
    for (size_t i = 0; i < members.size(); ++i)
      for (size_t j = i + 1; j < members.size(); ++j) {
        rep.checked_pairs++;
        if (members[i] == members[j]) continue;
        auto w = joinable(trs, tel_rules, members[i], members[j], fuel, 256);
        if (!w) {
          ConfluenceReport::Counterexample ce;
          ce.t = members[i];
          ce.s = members[j];
          ce.evidence = "derivable equality not joinable within fuel " +
                        std::to_string(fuel);
          rep.counterexamples.push_back(std::move(ce));
        }
      }
  }

  // Converse: pairs with equal bounded normal forms must be derivably equal
  // at twice the depth.
  ProverContext ctx2(theory, tel.var_list(), tel.as_formula(theory), 2 * depth, fuel);
  std::map<Term, std::vector<Term>, TermLess> by_nf;
  bool nf_incomplete = false;
  std::vector<Term> all_defined;
  for (const auto& members : ctx.equality_classes())
    for (const auto& m : members) all_defined.push_back(m);
  rep.states = all_defined.size();
  for (const auto& t : all_defined) {
    auto tr = normalize(trs, tel_rules, t, fuel);
    if (tr.fuel_exhausted) {
      nf_incomplete = true;
      continue;
    }
    by_nf[tr.end].push_back(t);
  }
  for (const auto& [nf, terms] : by_nf) {
    for (size_t i = 0; i < terms.size(); ++i)
      for (size_t j = i + 1; j < terms.size(); ++j) {
        rep.converse_checked++;
        if (!ctx2.holds(Atom::eq(terms[i], terms[j]))) rep.converse_failed++;
      }
  }
  if (nf_incomplete)
    rep.notes.push_back("some normalizations ran out of fuel; converse is partial");

  if (!rep.counterexamples.empty())
    rep.verdict = ConfluenceReport::Verdict::Counterexample;
  else if (rep.converse_failed > 0 || nf_incomplete)
    rep.verdict = ConfluenceReport::Verdict::Inconclusive;
  else
    rep.verdict = ConfluenceReport::Verdict::CertifiedAtBound;
  return rep;
}

namespace {

Verdict3 check_defined_rec(const Theory& theory, const WellDefinedCert& wd,
                           const TRS& trs, const std::vector<RewriteRule>& tel_rules,
                           const std::set<std::string>& tel_vars, const Term& t,
                           int fuel, std::map<Term, Verdict3, TermLess>& memo) {
  auto it = memo.find(t);
  if (it != memo.end()) return it->second;
  Verdict3 out = Verdict3::Certified;
  if (t.is_var()) {
    out = tel_vars.count(t.head()) ? Verdict3::Certified : Verdict3::Inconclusive;
    memo[t] = out;
    return out;
  }
  for (const auto& a : t.args()) {
    Verdict3 v = check_defined_rec(theory, wd, trs, tel_rules, tel_vars, a, fuel, memo);
    if (v != Verdict3::Certified) {
      memo[t] = v;
      return v;
    }
  }
  const FunSymbol* sym = theory.fun(t.head());
  if (!sym) {
    memo[t] = Verdict3::Inconclusive;
    return Verdict3::Inconclusive;
  }
  if (!sym->from_base) {
    auto dit = wd.defining.find(sym->name);
    if (dit == wd.defining.end()) {
      memo[t] = Verdict3::Inconclusive;
      return Verdict3::Inconclusive;
    }
    const auto& pins = dit->second;
    for (size_t i = 0; i < pins.size() && i < t.args().size(); ++i) {
      if (!pins[i]) continue;
      Substitution rho;
      for (size_t j = 0; j < i; ++j)
        rho.map.emplace("x" + std::to_string(j + 1), t.args()[j]);
      Term expected = substitute(*pins[i], rho);
      Term bnd = boundary(t.args()[i], theory);
      if (!(bnd == expected) &&
          !joinable(trs, tel_rules, bnd, expected, fuel, 64)) {
        memo[t] = Verdict3::Inconclusive;
        return Verdict3::Inconclusive;
      }
    }
  }
  memo[t] = out;
  return out;
}

}  // namespace

Verdict3 check_defined(const Theory& theory, const WellDefinedCert& wd, const TRS& trs,
                       const Telescope& tel, const Term& t, int fuel) {
  std::set<std::string> tel_vars;
  for (const auto& e : tel.entries) tel_vars.insert(e.var);
  auto tel_rules = telescope_rules(tel, theory);
  std::map<Term, Verdict3, TermLess> memo;
  return check_defined_rec(theory, wd, trs, tel_rules, tel_vars, t, fuel, memo);
}

}  // namespace ttk
