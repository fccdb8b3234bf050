#include "ttk/colimit.hpp"

#include <set>

namespace ttk {

namespace {

bool same_signature(const FunSymbol& a, const FunSymbol& b) {
  return a.arg_sorts == b.arg_sorts && a.result_sort == b.result_sort;
}

void require_contains_base(const Theory& base, const Theory& node) {
  for (const auto& f : base.fun_symbols) {
    const FunSymbol* g = node.fun(f.name);
    if (!g || !same_signature(f, *g))
      throw BaseMismatch("node " + node.name + " does not contain base symbol " +
                         f.name);
  }
  for (const auto& p : base.pred_symbols)
    if (!node.pred(p.name))
      throw BaseMismatch("node " + node.name + " does not contain base predicate " +
                         p.name);
  for (const auto& ax : base.axioms)
    if (!node.axiom(ax.name))
      throw BaseMismatch("node " + node.name + " does not contain base axiom " +
                         ax.name);
}

std::vector<Term> symbol_vars(const FunSymbol& sym, std::vector<std::string>* names) {
  std::vector<Term> vars;
  for (size_t i = 0; i < sym.arity(); ++i) {
    std::string n = "x" + std::to_string(i + 1);
    if (names) names->push_back(n);
    vars.push_back(Term::var(n, sym.arg_sorts[i]));
  }
  return vars;
}

}  // namespace

ColimitResult theory_colimit(const TheoryDiagram& diagram) {
  for (const auto& node : diagram.nodes) require_contains_base(diagram.base, node);
  for (const auto& e : diagram.edges) {
    if (e.from >= diagram.nodes.size() || e.to >= diagram.nodes.size())
      throw KernelError("colimit: edge endpoint out of range");
    // Edges must fix base symbols: an explicit non-identity image is a mismatch.
    for (const auto& f : diagram.base.fun_symbols)
      if (e.morphism.fun_map.count(f.name))
        throw BaseMismatch("edge morphism remaps base symbol " + f.name);
    for (const auto& p : diagram.base.pred_symbols)
      if (e.morphism.pred_map.count(p.name))
        throw BaseMismatch("edge morphism remaps base predicate " + p.name);
  }

  ColimitResult out;
  out.theory = diagram.base;
  out.theory.name = "colim";
  for (auto& f : out.theory.fun_symbols) f.from_base = true;
  for (auto& p : out.theory.pred_symbols) p.from_base = true;
  for (auto& a : out.theory.axioms) a.from_base = true;

  std::set<std::string> used;
  for (const auto& f : out.theory.fun_symbols) used.insert(f.name);
  for (const auto& p : out.theory.pred_symbols) used.insert(p.name);
  std::set<std::string> used_axioms;
  for (const auto& a : out.theory.axioms) used_axioms.insert(a.name);

  // Per-node symbol renaming, resolved by suffixing the node index.
  std::vector<std::map<std::string, std::string>> rename(diagram.nodes.size());
  for (size_t i = 0; i < diagram.nodes.size(); ++i) {
    const Theory& node = diagram.nodes[i];
    auto fresh = [&](const std::string& name) {
      if (!used.count(name)) return name;
      std::string candidate = name + "_" + std::to_string(i + 1);
      while (used.count(candidate)) candidate += "'";
      out.renamed.push_back({{i, name}, candidate});
      return candidate;
    };
    for (const auto& f : node.fun_symbols) {
      if (diagram.base.fun(f.name)) continue;
      FunSymbol copy = f;
      copy.name = fresh(f.name);
      rename[i][f.name] = copy.name;
      used.insert(copy.name);
      out.theory.fun_symbols.push_back(std::move(copy));
    }
    for (const auto& p : node.pred_symbols) {
      if (diagram.base.pred(p.name)) continue;
      PredSymbol copy = p;
      copy.name = fresh(p.name);
      rename[i][p.name] = copy.name;
      used.insert(copy.name);
      out.theory.pred_symbols.push_back(std::move(copy));
    }
  }

  // Injections: rename non-base symbols, identity elsewhere.
  for (size_t i = 0; i < diagram.nodes.size(); ++i) {
    TheoryMorphism inj;
    inj.name = "inj" + std::to_string(i + 1);
    inj.source = diagram.nodes[i];
    inj.target = out.theory;  // finalized below; axioms do not affect translation
    for (const auto& [old_name, new_name] : rename[i]) {
      if (const FunSymbol* f = diagram.nodes[i].fun(old_name)) {
        std::vector<std::string> names;
        std::vector<Term> vars = symbol_vars(*f, &names);
        const FunSymbol* tgt = out.theory.fun(new_name);
        inj.fun_map[old_name] = FunImage{names, Term::app(*tgt, vars)};
      } else if (const PredSymbol* p = diagram.nodes[i].pred(old_name)) {
        std::vector<std::string> names;
        std::vector<Term> vars;
        for (size_t k = 0; k < p->arg_sorts.size(); ++k) {
          names.push_back("x" + std::to_string(k + 1));
          vars.push_back(Term::var(names.back(), p->arg_sorts[k]));
        }
        inj.pred_map[old_name] = PredImage{names, Formula::of({Atom::predicate(new_name, vars)})};
      }
    }
    for (const auto& ax : diagram.nodes[i].axioms)
      inj.obligation_status[ax.name] = ObligationStatus{};
    out.injections.push_back(std::move(inj));
  }

  // Axioms of the nodes, translated along the injections.
  for (size_t i = 0; i < diagram.nodes.size(); ++i) {
    for (const auto& ax : diagram.nodes[i].axioms) {
      if (diagram.base.axiom(ax.name)) continue;
      std::string name = ax.name;
      if (used_axioms.count(name)) name += "_" + std::to_string(i + 1);
      while (used_axioms.count(name)) name += "'";
      used_axioms.insert(name);
      out.theory.axioms.push_back(
          NamedAxiom{name, apply_morphism(out.injections[i], ax.sequent), false});
    }
  }

  // Gluing axioms per edge: inj_from(sigma(xs)) is Kleene-equal to
  // inj_to(f(sigma(xs))) for every non-base symbol of the source node.
  for (size_t e = 0; e < diagram.edges.size(); ++e) {
    const auto& edge = diagram.edges[e];
    const Theory& src = diagram.nodes[edge.from];
    std::string tag = "glue" + std::to_string(e + 1) + "_";
    for (const auto& sym : src.fun_symbols) {
      if (diagram.base.fun(sym.name)) continue;
      std::vector<std::string> names;
      std::vector<Term> vars = symbol_vars(sym, &names);
      Term lhs = apply_morphism(out.injections[edge.from], Term::app(sym, vars));
      Term via_f = apply_morphism(edge.morphism, Term::app(sym, vars));
      Term rhs = apply_morphism(out.injections[edge.to], via_f);
      Sequent s1, s2;
      for (size_t k = 0; k < names.size(); ++k)
        s1.vars.emplace_back(names[k], sym.arg_sorts[k]);
      s2.vars = s1.vars;
      s1.lhs = Formula::of({Atom::defined(lhs)});
      s1.rhs = Formula::of({Atom::eq(lhs, rhs)});
      s2.lhs = Formula::of({Atom::defined(rhs)});
      s2.rhs = Formula::of({Atom::eq(lhs, rhs)});
      out.theory.add_axiom(tag + sym.name + "_l", std::move(s1));
      out.theory.add_axiom(tag + sym.name + "_r", std::move(s2));
    }
    for (const auto& sym : src.pred_symbols) {
      if (diagram.base.pred(sym.name)) continue;
      std::vector<std::string> names;
      std::vector<Term> vars;
      for (size_t k = 0; k < sym.arg_sorts.size(); ++k) {
        names.push_back("x" + std::to_string(k + 1));
        vars.push_back(Term::var(names.back(), sym.arg_sorts[k]));
      }
      Formula lhs = apply_morphism(out.injections[edge.from],
                                   Formula::of({Atom::predicate(sym.name, vars)}));
      Formula via_f =
          apply_morphism(edge.morphism, Formula::of({Atom::predicate(sym.name, vars)}));
      Formula rhs = apply_morphism(out.injections[edge.to], via_f);
      Sequent s1, s2;
      for (size_t k = 0; k < names.size(); ++k)
        s1.vars.emplace_back(names[k], sym.arg_sorts[k]);
      s2.vars = s1.vars;
      s1.lhs = lhs;
      s1.rhs = rhs;
      s2.lhs = rhs;
      s2.rhs = lhs;
      out.theory.add_axiom(tag + sym.name + "_l", std::move(s1));
      out.theory.add_axiom(tag + sym.name + "_r", std::move(s2));
    }
  }

  for (auto& inj : out.injections) inj.target = out.theory;
  return out;
}

ColimitResult coproduct(const Theory& base, const Theory& a, const Theory& b) {
  TheoryDiagram d;
  d.base = base;
  d.nodes = {a, b};
  return theory_colimit(d);
}

ColimitResult coequalizer(const Theory& base, const TheoryMorphism& f,
                          const TheoryMorphism& g) {
  TheoryDiagram d;
  d.base = base;
  d.nodes = {f.source, f.target};
  TheoryDiagram::Edge ef{0, 1, f}, eg{0, 1, g};
  d.edges = {ef, eg};
  ColimitResult full = theory_colimit(d);
  // The coequalizer is presented on T' itself: the colimit above contains a
  // renamed copy of T's non-base symbols; quotient them away by keeping T'
  // plus the gluing axioms rewritten through the edge images.
  ColimitResult out;
  out.theory = f.target;
  out.theory.name = "coeq";
  for (const auto& sym : f.source.fun_symbols) {
    if (base.fun(sym.name)) continue;
    std::vector<std::string> names;
    std::vector<Term> vars = symbol_vars(sym, &names);
    Term via_f = apply_morphism(f, Term::app(sym, vars));
    Term via_g = apply_morphism(g, Term::app(sym, vars));
    if (via_f == via_g) continue;
    Sequent s1, s2;
    for (size_t k = 0; k < names.size(); ++k)
      s1.vars.emplace_back(names[k], sym.arg_sorts[k]);
    s2.vars = s1.vars;
    s1.lhs = Formula::of({Atom::defined(via_f)});
    s1.rhs = Formula::of({Atom::eq(via_f, via_g)});
    s2.lhs = Formula::of({Atom::defined(via_g)});
    s2.rhs = Formula::of({Atom::eq(via_f, via_g)});
    out.theory.add_axiom("coeq_" + sym.name + "_l", std::move(s1));
    out.theory.add_axiom("coeq_" + sym.name + "_r", std::move(s2));
  }
  for (const auto& sym : f.source.pred_symbols) {
    if (base.pred(sym.name)) continue;
    std::vector<std::string> names;
    std::vector<Term> vars;
    for (size_t k = 0; k < sym.arg_sorts.size(); ++k) {
      names.push_back("x" + std::to_string(k + 1));
      vars.push_back(Term::var(names.back(), sym.arg_sorts[k]));
    }
    Formula via_f = apply_morphism(f, Formula::of({Atom::predicate(sym.name, vars)}));
    Formula via_g = apply_morphism(g, Formula::of({Atom::predicate(sym.name, vars)}));
    if (via_f == via_g) continue;
    Sequent s1, s2;
    for (size_t k = 0; k < names.size(); ++k)
      s1.vars.emplace_back(names[k], sym.arg_sorts[k]);
    s2.vars = s1.vars;
    s1.lhs = via_f;
    s1.rhs = via_g;
    s2.lhs = via_g;
    s2.rhs = via_f;
    out.theory.add_axiom("coeq_" + sym.name + "_l", std::move(s1));
    out.theory.add_axiom("coeq_" + sym.name + "_r", std::move(s2));
  }
  TheoryMorphism inj = identity_morphism(f.target);
  inj.name = "coeq_inj";
  inj.target = out.theory;
  for (const auto& ax : f.target.axioms) inj.obligation_status[ax.name] = {};
  out.injections.push_back(std::move(inj));
  return out;
}

}  // namespace ttk
