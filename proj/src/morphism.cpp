#include "ttk/morphism.hpp"

namespace ttk {

bool TheoryMorphism::fully_certified() const {
  for (const auto& ax : source.axioms) {
    auto it = obligation_status.find(ax.name);
    if (it == obligation_status.end() ||
        it->second.kind != ObligationStatus::Kind::Certified)
      return false;
  }
  return true;
}

TheoryMorphism identity_morphism(const Theory& t) {
  TheoryMorphism f;
  f.name = "id_" + t.name;
  f.source = t;
  f.target = t;
  return f;
}

namespace {

std::vector<std::string> default_params(size_t n) {
  std::vector<std::string> ps;
  ps.reserve(n);
  for (size_t i = 0; i < n; ++i) ps.push_back("x" + std::to_string(i + 1));
  return ps;
}

}  // namespace

ValidationReport validate_morphism(const TheoryMorphism& f) {
  ValidationReport rep;
  for (const auto& sym : f.source.fun_symbols) {
    auto it = f.fun_map.find(sym.name);
    if (it == f.fun_map.end()) {
      const FunSymbol* tgt = f.target.fun(sym.name);
      if (!tgt)
        rep.issues.push_back({"UnmappedSymbol", sym.name, "no image and no identity"});
      else if (tgt->arg_sorts != sym.arg_sorts || tgt->result_sort != sym.result_sort)
        rep.issues.push_back({"SortMismatch", sym.name, "identity image signature"});
      continue;
    }
    const FunImage& img = it->second;
    if (img.params.size() != sym.arity()) {
      rep.issues.push_back({"ArityMismatch", sym.name, "image parameter count"});
      continue;
    }
    if (img.body.sort() != sym.result_sort)
      rep.issues.push_back({"SortMismatch", sym.name, "image result sort"});
    std::vector<std::pair<std::string, Sort>> vars;
    for (size_t i = 0; i < img.params.size(); ++i)
      vars.emplace_back(img.params[i], sym.arg_sorts[i]);
    std::string why;
    Formula probe = Formula::of({Atom::defined(img.body)});
    if (!well_sorted_over(probe, f.target, vars, &why))
      rep.issues.push_back({"SortMismatch", sym.name, "image body: " + why});
  }
  for (const auto& sym : f.source.pred_symbols) {
    auto it = f.pred_map.find(sym.name);
    if (it == f.pred_map.end()) {
      const PredSymbol* tgt = f.target.pred(sym.name);
      if (!tgt)
        rep.issues.push_back({"UnmappedSymbol", sym.name, "no image and no identity"});
      else if (tgt->arg_sorts != sym.arg_sorts)
        rep.issues.push_back({"SortMismatch", sym.name, "identity image signature"});
      continue;
    }
    const PredImage& img = it->second;
    if (img.params.size() != sym.arg_sorts.size()) {
      rep.issues.push_back({"ArityMismatch", sym.name, "image parameter count"});
      continue;
    }
    std::vector<std::pair<std::string, Sort>> vars;
    for (size_t i = 0; i < img.params.size(); ++i)
      vars.emplace_back(img.params[i], sym.arg_sorts[i]);
    std::string why;
    if (!well_sorted_over(img.body, f.target, vars, &why))
      rep.issues.push_back({"SortMismatch", sym.name, "image body: " + why});
  }
  return rep;
}

Term apply_morphism(const TheoryMorphism& f, const Term& t) {
  if (t.is_var()) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(apply_morphism(f, a));
  auto it = f.fun_map.find(t.head());
  if (it == f.fun_map.end()) {
    const FunSymbol* tgt = f.target.fun(t.head());
    if (!tgt) throw UnmappedSymbol("morphism has no image for symbol " + t.head());
    return Term::app(*tgt, std::move(args));
  }
  const FunImage& img = it->second;
  Substitution rho;
  for (size_t i = 0; i < img.params.size(); ++i) rho.map.emplace(img.params[i], args[i]);
  return substitute(img.body, rho);
}

Formula apply_morphism(const TheoryMorphism& f, const Formula& phi) {
  Formula out;
  for (const auto& a : phi.atoms) {
    switch (a.kind) {
      case Atom::Kind::Eq:
        out.atoms.push_back(
            Atom::eq(apply_morphism(f, a.lhs), apply_morphism(f, a.rhs)));
        break;
      case Atom::Kind::Defined:
        out.atoms.push_back(Atom::defined(apply_morphism(f, a.lhs)));
        break;
      case Atom::Kind::Pred: {
        std::vector<Term> args;
        for (const auto& t : a.args) args.push_back(apply_morphism(f, t));
        auto it = f.pred_map.find(a.pred);
        if (it == f.pred_map.end()) {
          if (!f.target.pred(a.pred))
            throw UnmappedSymbol("morphism has no image for predicate " + a.pred);
          out.atoms.push_back(Atom::predicate(a.pred, std::move(args)));
        } else {
          Substitution rho;
          for (size_t i = 0; i < it->second.params.size(); ++i)
            rho.map.emplace(it->second.params[i], args[i]);
          Formula img = substitute(it->second.body, rho);
          for (auto& at : img.atoms) out.atoms.push_back(std::move(at));
        }
        break;
      }
    }
  }
  return out;
}

Sequent apply_morphism(const TheoryMorphism& f, const Sequent& s) {
  Sequent out;
  out.vars = s.vars;
  out.lhs = apply_morphism(f, s.lhs);
  out.rhs = apply_morphism(f, s.rhs);
  return out;
}

TheoryMorphism compose(const TheoryMorphism& g, const TheoryMorphism& f) {
  TheoryMorphism h;
  h.name = g.name + "." + f.name;
  h.source = f.source;
  h.target = g.target;
  for (const auto& sym : f.source.fun_symbols) {
    std::vector<std::string> params = default_params(sym.arity());
    std::vector<Term> vars;
    for (size_t i = 0; i < params.size(); ++i)
      vars.push_back(Term::var(params[i], sym.arg_sorts[i]));
    Term via_f = apply_morphism(f, Term::app(sym, vars));
    h.fun_map[sym.name] = FunImage{params, apply_morphism(g, via_f)};
  }
  for (const auto& sym : f.source.pred_symbols) {
    std::vector<std::string> params = default_params(sym.arg_sorts.size());
    std::vector<Term> vars;
    for (size_t i = 0; i < params.size(); ++i)
      vars.push_back(Term::var(params[i], sym.arg_sorts[i]));
    Formula via_f =
        apply_morphism(f, Formula::of({Atom::predicate(sym.name, std::move(vars))}));
    h.pred_map[sym.name] = PredImage{params, apply_morphism(g, via_f)};
  }
  return h;
}

}  // namespace ttk
