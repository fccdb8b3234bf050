#include "ttk/theory.hpp"

#include <set>

namespace ttk {

std::string Sequent::show() const {
  std::string s = "[";
  for (size_t i = 0; i < vars.size(); ++i) {
    if (i) s += ", ";
    s += vars[i].first + " : " + show_sort(vars[i].second);
  }
  s += "] ";
  s += lhs.show() + " |- " + rhs.show();
  return s;
}

const FunSymbol* Theory::fun(const std::string& name) const {
  for (const auto& f : fun_symbols)
    if (f.name == name) return &f;
  return nullptr;
}

const PredSymbol* Theory::pred(const std::string& name) const {
  for (const auto& p : pred_symbols)
    if (p.name == name) return &p;
  return nullptr;
}

const NamedAxiom* Theory::axiom(const std::string& name) const {
  for (const auto& a : axioms)
    if (a.name == name) return &a;
  return nullptr;
}

void Theory::add_fun(FunSymbol f) {
  if (fun(f.name) || pred(f.name))
    throw KernelError("duplicate symbol name: " + f.name);
  fun_symbols.push_back(std::move(f));
}

void Theory::add_pred(PredSymbol p) {
  if (fun(p.name) || pred(p.name))
    throw KernelError("duplicate symbol name: " + p.name);
  pred_symbols.push_back(std::move(p));
}

void Theory::add_axiom(std::string name, Sequent s, bool from_base) {
  if (axiom(name)) throw KernelError("duplicate axiom name: " + name);
  axioms.push_back(NamedAxiom{std::move(name), std::move(s), from_base});
}

Sort sort_of(const Term& t, const std::map<std::string, Sort>& vctx) {
  if (t.is_var()) {
    auto it = vctx.find(t.head());
    if (it == vctx.end()) throw UnknownVariable("unknown variable " + t.head());
    if (it->second != t.sort())
      throw SortMismatch("variable " + t.head() + " declared " +
                         show_sort(it->second) + " but used at " + show_sort(t.sort()));
    return t.sort();
  }
  for (const auto& a : t.args()) sort_of(a, vctx);
  return t.sort();
}

std::string ty_symbol_name(int level) { return "ty" + std::to_string(level); }
std::string ft_symbol_name(int level) { return "ft" + std::to_string(level); }

Term boundary(const Term& t, const Theory& theory) {
  Sort s = t.sort();
  if (!has_boundary(s))
    throw NoBoundary("term " + t.show() + " of sort " + show_sort(s) +
                     " has no boundary");
  std::string name =
      s.kind == SortKind::Tm ? ty_symbol_name(s.level) : ft_symbol_name(ty_level(s));
  const FunSymbol* sym = theory.fun(name);
  if (!sym)
    throw MissingBaseSymbol("theory " + theory.name + " does not declare " + name);
  return Term::app(*sym, {t});
}

namespace {

void check_term(const Theory& th, const Term& t,
                const std::vector<std::pair<std::string, Sort>>& vars,
                const std::string& where, ValidationReport& rep) {
  if (t.is_var()) {
    bool found = false;
    for (const auto& [n, s] : vars)
      if (n == t.head()) {
        found = true;
        if (s != t.sort())
          rep.issues.push_back({"SortMismatch", where,
                                "variable " + t.head() + " used at " +
                                    show_sort(t.sort()) + ", declared " + show_sort(s)});
      }
    if (!found)
      rep.issues.push_back({"OpenSequent", where, "free variable " + t.head() +
                                                      " not in the variable context"});
    return;
  }
  const FunSymbol* sym = th.fun(t.head());
  if (!sym) {
    rep.issues.push_back({"UnknownSymbol", where, "function symbol " + t.head()});
    return;
  }
  if (sym->arity() != t.args().size()) {
    rep.issues.push_back({"ArityMismatch", where, t.head()});
    return;
  }
  if (sym->result_sort != t.sort())
    rep.issues.push_back({"SortMismatch", where, t.head() + " result sort"});
  for (size_t i = 0; i < t.args().size(); ++i) {
    if (t.args()[i].sort() != sym->arg_sorts[i])
      rep.issues.push_back({"SortMismatch", where,
                            t.head() + " argument " + std::to_string(i)});
    check_term(th, t.args()[i], vars, where, rep);
  }
}

void check_formula(const Theory& th, const Formula& f,
                   const std::vector<std::pair<std::string, Sort>>& vars,
                   const std::string& where, ValidationReport& rep) {
  for (const auto& a : f.atoms) {
    switch (a.kind) {
      case Atom::Kind::Eq:
        if (a.lhs.sort() != a.rhs.sort())
          rep.issues.push_back({"SortMismatch", where, "equation sides differ in sort"});
        check_term(th, a.lhs, vars, where, rep);
        check_term(th, a.rhs, vars, where, rep);
        break;
      case Atom::Kind::Defined: check_term(th, a.lhs, vars, where, rep); break;
      case Atom::Kind::Pred: {
        const PredSymbol* p = th.pred(a.pred);
        if (!p) {
          rep.issues.push_back({"UnknownSymbol", where, "predicate " + a.pred});
          break;
        }
        if (p->arg_sorts.size() != a.args.size()) {
          rep.issues.push_back({"ArityMismatch", where, a.pred});
          break;
        }
        for (size_t i = 0; i < a.args.size(); ++i) {
          if (a.args[i].sort() != p->arg_sorts[i])
            rep.issues.push_back({"SortMismatch", where,
                                  a.pred + " argument " + std::to_string(i)});
          check_term(th, a.args[i], vars, where, rep);
        }
        break;
      }
    }
  }
}

}  // namespace

ValidationReport validate_theory(const Theory& t) {
  ValidationReport rep;
  std::set<std::string> names;
  for (const auto& f : t.fun_symbols) {
    if (!names.insert(f.name).second)
      rep.issues.push_back({"DuplicateName", f.name, "function symbol"});
    if (f.context_position) {
      if (*f.context_position >= f.arg_sorts.size())
        rep.issues.push_back({"BadContextPosition", f.name, "index out of range"});
      else if (f.arg_sorts[*f.context_position].kind != SortKind::Ctx ||
               is_ty(f.arg_sorts[*f.context_position]))
        rep.issues.push_back(
            {"BadContextPosition", f.name, "marked argument is not ctx-sorted"});
    }
  }
  for (const auto& p : t.pred_symbols)
    if (!names.insert(p.name).second)
      rep.issues.push_back({"DuplicateName", p.name, "predicate symbol"});
  std::set<std::string> axnames;
  for (const auto& ax : t.axioms) {
    if (!axnames.insert(ax.name).second)
      rep.issues.push_back({"DuplicateName", ax.name, "axiom"});
    std::set<std::string> vnames;
    for (const auto& [n, s] : ax.sequent.vars)
      if (!vnames.insert(n).second)
        rep.issues.push_back({"DuplicateName", ax.name, "variable " + n});
    check_formula(t, ax.sequent.lhs, ax.sequent.vars, ax.name, rep);
    check_formula(t, ax.sequent.rhs, ax.sequent.vars, ax.name, rep);
  }
  return rep;
}

bool is_small(const Theory& t, uint64_t lambda) {
  if (lambda == 0) return true;  // aleph_0 sentinel: every finite theory is small
  uint64_t funs = 0, preds = 0, axs = 0;
  for (const auto& f : t.fun_symbols)
    if (!f.from_base) ++funs;
  for (const auto& p : t.pred_symbols)
    if (!p.from_base) ++preds;
  for (const auto& a : t.axioms)
    if (!a.from_base) ++axs;
  return funs < lambda && preds < lambda && axs < lambda;
}

bool well_sorted_over(const Term& t, const Theory& theory, std::string* why) {
  if (t.is_var()) return true;
  const FunSymbol* sym = theory.fun(t.head());
  if (!sym || sym->arity() != t.args().size() || sym->result_sort != t.sort()) {
    if (why) *why = "bad application of " + t.head();
    return false;
  }
  for (size_t i = 0; i < t.args().size(); ++i) {
    if (t.args()[i].sort() != sym->arg_sorts[i]) {
      if (why) *why = t.head() + " argument " + std::to_string(i);
      return false;
    }
    if (!well_sorted_over(t.args()[i], theory, why)) return false;
  }
  return true;
}

bool well_sorted_over(const Formula& f, const Theory& theory,
                      const std::vector<std::pair<std::string, Sort>>& vars,
                      std::string* why) {
  std::map<std::string, Sort> vctx(vars.begin(), vars.end());
  for (const auto& a : f.atoms) {
    Atom c = canonicalize(a);
    std::vector<Term> terms;
    if (c.kind == Atom::Kind::Eq) {
      if (c.lhs.sort() != c.rhs.sort()) {
        if (why) *why = "equation sides differ in sort";
        return false;
      }
      terms = {c.lhs, c.rhs};
    } else {
      const PredSymbol* p = theory.pred(c.pred);
      if (!p || p->arg_sorts.size() != c.args.size()) {
        if (why) *why = "bad predicate " + c.pred;
        return false;
      }
      terms = c.args;
    }
    for (const auto& t : terms) {
      if (!well_sorted_over(t, theory, why)) return false;
      for (const auto& [vn, vs] : free_vars(t)) {
        auto it = vctx.find(vn);
        if (it == vctx.end()) {
          if (why) *why = "free variable " + vn;
          return false;
        }
        if (it->second != vs) {
          if (why) *why = "variable " + vn + " sort";
          return false;
        }
      }
    }
  }
  return true;
}

bool well_sorted_over(const Sequent& s, const Theory& theory, std::string* why) {
  return well_sorted_over(s.lhs, theory, s.vars, why) &&
         well_sorted_over(s.rhs, theory, s.vars, why);
}

}  // namespace ttk
