#include "ttk/stdlib.hpp"

namespace ttk {

namespace {

Sort TY0 = make_ty(0);
Sort TY1 = make_ty(1);
Sort TM0 = make_tm(0);
Sort TM1 = make_tm(1);
Sort CTX0 = make_ctx(0);

struct Builder {
  Theory th;

  FunSymbol& fun(const std::string& name, std::vector<Sort> args, Sort result,
                 bool base = false, bool structural = false) {
    FunSymbol f;
    f.name = name;
    f.arg_sorts = std::move(args);
    f.result_sort = result;
    f.from_base = base;
    f.structural = structural;
    th.add_fun(std::move(f));
    return th.fun_symbols.back();
  }

  Term v(const std::string& name, Sort s) { return Term::var(name, s); }

  Term a(const std::string& sym, std::vector<Term> args) {
    const FunSymbol* f = th.fun(sym);
    if (!f) throw UnknownSymbol("stdlib builder: " + sym);
    return Term::app(*f, std::move(args));
  }

  void axiom(const std::string& name, std::vector<std::pair<std::string, Sort>> vars,
             Formula lhs, Formula rhs, bool base = false) {
    Sequent s;
    s.vars = std::move(vars);
    s.lhs = std::move(lhs);
    s.rhs = std::move(rhs);
    th.add_axiom(name, std::move(s), base);
  }

  // A_d axiom `<sym>_def`: guard |- sym(xs) def, plus the converse A'_d axiom
  // `<sym>_def_conv` when the guard is not trivial.
  void definedness(const std::string& sym, std::vector<std::pair<std::string, Sort>> vars,
                   Formula guard, bool base = false, bool converse = true) {
    const FunSymbol* f = th.fun(sym);
    std::vector<Term> args;
    for (const auto& [n, s] : vars) args.push_back(Term::var(n, s));
    Term app = Term::app(*f, args);
    axiom(sym + "_def", vars, guard, Formula::of({Atom::defined(app)}), base);
    if (converse && !guard.is_top())
      axiom(sym + "_def_conv", vars, Formula::of({Atom::defined(app)}), guard, base);
  }
};

void add_base(Builder& b) {
  b.fun("nil", {}, CTX0, true);
  b.definedness("nil", {}, Formula::top(), true);
  for (int n = 0; n < kMaxLevel; ++n) {
    b.fun(ty_symbol_name(n), {make_tm(n)}, make_ty(n), true);
    b.definedness(ty_symbol_name(n), {{"x", make_tm(n)}},
                  Formula::of({Atom::defined(Term::var("x", make_tm(n)))}), true);
    b.fun(ft_symbol_name(n), {make_ty(n)}, make_ctx(n), true);
    b.definedness(ft_symbol_name(n), {{"A", make_ty(n)}},
                  Formula::of({Atom::defined(Term::var("A", make_ty(n)))}), true);
  }
}

// Explicit level-0 substitution calculus: weakening, the context variable,
// substitution, and map composition.
void add_subst_machinery(Builder& b, bool with_comp) {
  Term A = b.v("A", TY0), B = b.v("B", TY0), T1 = b.v("T", TY1);
  Term t = b.v("t", TM0), bb = b.v("b", TM1), aa = b.v("a", TM0);

  b.fun("wk_ty0", {TY0, TY0}, TY1, false, true);
  b.definedness("wk_ty0", {{"A", TY0}, {"B", TY0}},
                Formula::of({Atom::eq(b.a("ft0", {B}), b.a("ft0", {A}))}));
  b.axiom("wk_ty0_ft", {{"A", TY0}, {"B", TY0}},
          Formula::of({Atom::defined(b.a("wk_ty0", {A, B}))}),
          Formula::of({Atom::eq(b.a("ft1", {b.a("wk_ty0", {A, B})}), A)}));

  b.fun("wk_tm0", {TY0, TY0, TM0}, TM1, false, true);
  b.definedness("wk_tm0", {{"A", TY0}, {"B", TY0}, {"t", TM0}},
                Formula::of({Atom::eq(b.a("ft0", {B}), b.a("ft0", {A})),
                             Atom::eq(b.a("ty0", {t}), B)}));
  b.axiom("wk_tm0_ty", {{"A", TY0}, {"B", TY0}, {"t", TM0}},
          Formula::of({Atom::defined(b.a("wk_tm0", {A, B, t}))}),
          Formula::of({Atom::eq(b.a("ty1", {b.a("wk_tm0", {A, B, t})}),
                                b.a("wk_ty0", {A, B}))}));

  b.fun("var0", {TY0}, TM1, false, true);
  b.definedness("var0", {{"A", TY0}}, Formula::top());
  b.axiom("var0_ty", {{"A", TY0}},
          Formula::of({Atom::defined(b.a("var0", {A}))}),
          Formula::of({Atom::eq(b.a("ty1", {b.a("var0", {A})}),
                                b.a("wk_ty0", {A, A}))}));

  b.fun("subst_ty0", {TY1, TM0}, TY0, false, true);
  b.definedness("subst_ty0", {{"T", TY1}, {"a", TM0}},
                Formula::of({Atom::eq(b.a("ty0", {aa}), b.a("ft1", {T1}))}));
  b.axiom("subst_ty0_ft", {{"T", TY1}, {"a", TM0}},
          Formula::of({Atom::defined(b.a("subst_ty0", {T1, aa}))}),
          Formula::of({Atom::eq(b.a("ft0", {b.a("subst_ty0", {T1, aa})}),
                                b.a("ft0", {b.a("ft1", {T1})}))}));
  b.axiom("subst_ty0_wk", {{"A", TY0}, {"B", TY0}, {"a", TM0}},
          Formula::of({Atom::defined(b.a("subst_ty0", {b.a("wk_ty0", {A, B}), aa}))}),
          Formula::of({Atom::eq(b.a("subst_ty0", {b.a("wk_ty0", {A, B}), aa}), B)}));

  b.fun("subst_tm0", {TM1, TM0}, TM0, false, true);
  b.definedness("subst_tm0", {{"b", TM1}, {"a", TM0}},
                Formula::of({Atom::eq(b.a("ty0", {aa}),
                                      b.a("ft1", {b.a("ty1", {bb})}))}));
  b.axiom("subst_tm0_ty", {{"b", TM1}, {"a", TM0}},
          Formula::of({Atom::defined(b.a("subst_tm0", {bb, aa}))}),
          Formula::of({Atom::eq(b.a("ty0", {b.a("subst_tm0", {bb, aa})}),
                                b.a("subst_ty0", {b.a("ty1", {bb}), aa}))}));
  b.axiom("subst_tm0_var", {{"A", TY0}, {"a", TM0}},
          Formula::of({Atom::defined(b.a("subst_tm0", {b.a("var0", {A}), aa}))}),
          Formula::of({Atom::eq(b.a("subst_tm0", {b.a("var0", {A}), aa}), aa)}));
  b.axiom("subst_tm0_wk", {{"A", TY0}, {"B", TY0}, {"t", TM0}, {"a", TM0}},
          Formula::of({Atom::defined(
              b.a("subst_tm0", {b.a("wk_tm0", {A, B, t}), aa}))}),
          Formula::of({Atom::eq(b.a("subst_tm0", {b.a("wk_tm0", {A, B, t}), aa}), t)}));

  if (with_comp) {
    Term As = b.v("As", TY0), Ad = b.v("Ad", TY0);
    Term g = b.v("g", TM1), f = b.v("f", TM1), X = b.v("X", TY0);
    b.fun("comp0", {TY0, TY0, TY1, TM1, TM1}, TM1, false, true);
    b.definedness(
        "comp0", {{"As", TY0}, {"Ad", TY0}, {"T", TY1}, {"g", TM1}, {"f", TM1}},
        Formula::of({Atom::eq(b.a("ft0", {Ad}), b.a("ft0", {As})),
                     Atom::eq(b.a("ft1", {T1}), Ad),
                     Atom::eq(b.a("ty1", {g}), T1),
                     Atom::eq(b.a("ty1", {f}), b.a("wk_ty0", {As, Ad}))}));
    b.axiom("comp0_var",
            {{"As", TY0}, {"Ad", TY0}, {"T", TY1}, {"X", TY0}, {"f", TM1}},
            Formula::of({Atom::defined(
                b.a("comp0", {As, Ad, T1, b.a("var0", {X}), f}))}),
            Formula::of({Atom::eq(b.a("comp0", {As, Ad, T1, b.a("var0", {X}), f}),
                                  f)}));
  }
}

void add_id(Builder& b, bool with_definedness) {
  Term x = b.v("x", TM0), y = b.v("y", TM0);
  b.fun("Id", {TM0, TM0}, TY0);
  if (with_definedness) {
    b.definedness("Id", {{"x", TM0}, {"y", TM0}},
                  Formula::of({Atom::eq(b.a("ty0", {x}), b.a("ty0", {y}))}));
    b.axiom("Id_ft", {{"x", TM0}, {"y", TM0}},
            Formula::of({Atom::defined(b.a("Id", {x, y}))}),
            Formula::of({Atom::eq(b.a("ft0", {b.a("Id", {x, y})}),
                                  b.a("ft0", {b.a("ty0", {x})}))}));
  } else {
    // The bare Id0 theory: only the boundary axiom.
    b.axiom("Id_bnd", {{"x", TM0}, {"y", TM0}},
            Formula::of({Atom::defined(b.a("Id", {x, y}))}),
            Formula::of({Atom::eq(b.a("ty0", {x}), b.a("ty0", {y}))}));
  }
}

void add_id1(Builder& b) {
  Term p = b.v("p", TM1), q = b.v("q", TM1);
  b.fun("Id1", {TM1, TM1}, TY1);
  b.definedness("Id1", {{"p", TM1}, {"q", TM1}},
                Formula::of({Atom::eq(b.a("ty1", {p}), b.a("ty1", {q}))}));
  b.axiom("Id1_ft", {{"p", TM1}, {"q", TM1}},
          Formula::of({Atom::defined(b.a("Id1", {p, q}))}),
          Formula::of({Atom::eq(b.a("ft1", {b.a("Id1", {p, q})}),
                                b.a("ft1", {b.a("ty1", {p})}))}));
}

void add_refl(Builder& b) {
  Term x = b.v("x", TM0);
  b.fun("refl", {TM0}, TM0);
  b.definedness("refl", {{"x", TM0}}, Formula::top());
  b.axiom("refl_ty", {{"x", TM0}},
          Formula::of({Atom::defined(b.a("refl", {x}))}),
          Formula::of({Atom::eq(b.a("ty0", {b.a("refl", {x})}), b.a("Id", {x, x}))}));
  Term p = b.v("p", TM1);
  b.fun("refl1", {TM1}, TM1);
  b.definedness("refl1", {{"p", TM1}}, Formula::top());
  b.axiom("refl1_ty", {{"p", TM1}},
          Formula::of({Atom::defined(b.a("refl1", {p}))}),
          Formula::of({Atom::eq(b.a("ty1", {b.a("refl1", {p})}),
                                b.a("Id1", {p, p}))}));
}

void add_transport(Builder& b) {
  Term B = b.v("B", TY1), a1 = b.v("a1", TM0), a2 = b.v("a2", TM0);
  Term p = b.v("p", TM0), t = b.v("t", TM0);
  b.fun("transport", {TY1, TM0, TM0, TM0, TM0}, TM0);
  b.definedness("transport",
                {{"B", TY1}, {"a1", TM0}, {"a2", TM0}, {"p", TM0}, {"t", TM0}},
                Formula::of({Atom::eq(b.a("ty0", {a1}), b.a("ft1", {B})),
                             Atom::eq(b.a("ty0", {a2}), b.a("ft1", {B})),
                             Atom::eq(b.a("ty0", {p}), b.a("Id", {a1, a2})),
                             Atom::eq(b.a("ty0", {t}), b.a("subst_ty0", {B, a1}))}));
  Term tr = b.a("transport", {B, a1, a2, p, t});
  b.axiom("transport_ty",
          {{"B", TY1}, {"a1", TM0}, {"a2", TM0}, {"p", TM0}, {"t", TM0}},
          Formula::of({Atom::defined(tr)}),
          Formula::of({Atom::eq(b.a("ty0", {tr}), b.a("subst_ty0", {B, a2}))}));
}

// The Pi-type theories. `variant` 0..3 picks the beta axiom of
// T_Pi, T_Pi', T_Pi'', T_Pi'''.
void add_pi(Builder& b, int variant) {
  Term A = b.v("A", TY0), B = b.v("B", TY1);
  Term f = b.v("f", TM0), a = b.v("a", TM0), bb = b.v("b", TM1);

  b.fun("Pi", {TY0, TY1}, TY0);
  b.definedness("Pi", {{"A", TY0}, {"B", TY1}},
                Formula::of({Atom::eq(b.a("ft1", {B}), A)}));
  b.axiom("Pi_ft", {{"A", TY0}, {"B", TY1}},
          Formula::of({Atom::defined(b.a("Pi", {A, B}))}),
          Formula::of({Atom::eq(b.a("ft0", {b.a("Pi", {A, B})}), b.a("ft0", {A}))}));

  b.fun("lam", {TY0, TY1, TM1}, TM0);
  b.definedness("lam", {{"A", TY0}, {"B", TY1}, {"b", TM1}},
                Formula::of({Atom::eq(b.a("ft1", {B}), A),
                             Atom::eq(b.a("ty1", {bb}), B)}));
  b.axiom("lam_ty", {{"A", TY0}, {"B", TY1}, {"b", TM1}},
          Formula::of({Atom::defined(b.a("lam", {A, B, bb}))}),
          Formula::of({Atom::eq(b.a("ty0", {b.a("lam", {A, B, bb})}),
                                b.a("Pi", {A, B}))}));

  b.fun("app", {TY0, TY1, TM0, TM0}, TM0);
  b.definedness("app", {{"A", TY0}, {"B", TY1}, {"f", TM0}, {"a", TM0}},
                Formula::of({Atom::eq(b.a("ft1", {B}), A),
                             Atom::eq(b.a("ty0", {f}), b.a("Pi", {A, B})),
                             Atom::eq(b.a("ty0", {a}), A)}));
  b.axiom("app_ty", {{"A", TY0}, {"B", TY1}, {"f", TM0}, {"a", TM0}},
          Formula::of({Atom::defined(b.a("app", {A, B, f, a}))}),
          Formula::of({Atom::eq(b.a("ty0", {b.a("app", {A, B, f, a})}),
                                b.a("subst_ty0", {B, a}))}));

  if (variant == 0 || variant == 1) {
    Term redex = b.a("app", {A, B, b.a("lam", {A, B, bb}), a});
    Term contractum = b.a("subst_tm0", {bb, a});
    Formula guard =
        variant == 0
            ? Formula::of({Atom::eq(b.a("ft1", {B}), A),
                           Atom::eq(b.a("ty1", {bb}), B),
                           Atom::eq(b.a("ty0", {a}), A)})
            : Formula::of({Atom::defined(redex)});
    b.axiom("beta", {{"A", TY0}, {"B", TY1}, {"b", TM1}, {"a", TM0}}, guard,
            Formula::of({Atom::eq(redex, contractum)}));
  } else {
    Term A2 = b.v("A2", TY0), B2 = b.v("B2", TY1);
    Term redex = b.a("app", {A, B, b.a("lam", {A2, B2, bb}), a});
    Term contractum = b.a("subst_tm0", {bb, a});
    Formula guard =
        variant == 2
            ? Formula::of({Atom::eq(b.a("ft1", {B}), A), Atom::eq(A, A2),
                           Atom::eq(B, B2), Atom::eq(b.a("ty1", {bb}), B2),
                           Atom::eq(b.a("ty0", {a}), A)})
            : Formula::of({Atom::defined(redex)});
    b.axiom("beta",
            {{"A", TY0},
             {"A2", TY0},
             {"B", TY1},
             {"B2", TY1},
             {"b", TM1},
             {"a", TM0}},
            guard, Formula::of({Atom::eq(redex, contractum)}));
  }
}

WellDefinedCert pi_well_defined_cert() {
  WellDefinedCert c;
  c.checked_depth = 4;
  c.order = {{"Pi", 1},        {"lam", 2},      {"app", 3},      {"wk_ty0", 1},
             {"wk_tm0", 1},    {"var0", 1},     {"subst_ty0", 1}, {"subst_tm0", 1}};
  Term x1ty = Term::var("x1", TY0);
  Term x1ty1 = Term::var("x1", TY1);
  Term x1tm1 = Term::var("x1", TM1);
  Term x2ty = Term::var("x2", TY0);
  auto ap = [&](const std::string& h, Sort s, std::vector<Term> args) {
    return Term::app_raw(h, s, std::move(args));
  };
  c.defining["Pi"] = {std::nullopt, x1ty};
  c.defining["lam"] = {std::nullopt, x1ty, Term::var("x2", TY1)};
  c.defining["app"] = {std::nullopt, x1ty, ap("Pi", TY0, {x1ty, Term::var("x2", TY1)}),
                       x1ty};
  c.defining["wk_ty0"] = {std::nullopt, ap("ft0", CTX0, {x1ty})};
  c.defining["wk_tm0"] = {std::nullopt, ap("ft0", CTX0, {x1ty}), x2ty};
  c.defining["var0"] = {std::nullopt};
  c.defining["subst_ty0"] = {std::nullopt, ap("ft1", TY0, {x1ty1})};
  c.defining["subst_tm0"] = {std::nullopt, ap("ft1", TY0, {ap("ty1", TY1, {x1tm1})})};
  return c;
}

void add_contractible(Builder& b) {
  Term c = b.v("c", TM0);
  b.fun("C", {}, TY0);
  b.definedness("C", {}, Formula::top());
  b.axiom("C_ft", {}, Formula::of({Atom::defined(b.a("C", {}))}),
          Formula::of({Atom::eq(b.a("ft0", {b.a("C", {})}), b.a("nil", {}))}));
  b.fun("c0", {}, TM0);
  b.definedness("c0", {}, Formula::top());
  b.axiom("c0_ty", {}, Formula::of({Atom::defined(b.a("c0", {}))}),
          Formula::of({Atom::eq(b.a("ty0", {b.a("c0", {})}), b.a("C", {}))}));
  // eq keeps only its definedness direction: the converse would not be
  // preserved by the collapse eq(c) |-> refl(unit).
  b.fun("eq", {TM0}, TM0);
  b.definedness("eq", {{"c", TM0}},
                Formula::of({Atom::eq(b.a("ty0", {c}), b.a("C", {}))}), false,
                /*converse=*/false);
  b.axiom("eq_ty", {{"c", TM0}},
          Formula::of({Atom::eq(b.a("ty0", {c}), b.a("C", {}))}),
          Formula::of({Atom::eq(b.a("ty0", {b.a("eq", {c})}),
                                b.a("Id", {b.a("c0", {}), c}))}));
}

void add_unit(Builder& b) {
  Term t = b.v("t", TM0);
  b.fun("Top", {}, TY0);
  b.definedness("Top", {}, Formula::top());
  b.axiom("Top_ft", {}, Formula::of({Atom::defined(b.a("Top", {}))}),
          Formula::of({Atom::eq(b.a("ft0", {b.a("Top", {})}), b.a("nil", {}))}));
  b.fun("unit", {}, TM0);
  b.definedness("unit", {}, Formula::top());
  b.axiom("unit_ty", {}, Formula::of({Atom::defined(b.a("unit", {}))}),
          Formula::of({Atom::eq(b.a("ty0", {b.a("unit", {})}), b.a("Top", {}))}));
  // The judgmental eta rule of the unit type, written as a plain equation.
  b.axiom("unit_eta", {{"t", TM0}},
          Formula::of({Atom::eq(b.a("ty0", {t}), b.a("Top", {}))}),
          Formula::of({Atom::eq(t, b.a("unit", {}))}));
}

void add_combinatory(Builder& b) {
  Term f = b.v("f", TM0), x = b.v("x", TM0), y = b.v("y", TM0), z = b.v("z", TM0);
  b.fun("k", {}, TM0);
  b.definedness("k", {}, Formula::top());
  b.fun("s", {}, TM0);
  b.definedness("s", {}, Formula::top());
  b.fun("ap", {TM0, TM0}, TM0);
  b.definedness("ap", {{"f", TM0}, {"x", TM0}}, Formula::top());
  Term kred = b.a("ap", {b.a("ap", {b.a("k", {}), x}), y});
  b.axiom("k_rule", {{"x", TM0}, {"y", TM0}},
          Formula::of({Atom::defined(kred)}), Formula::of({Atom::eq(kred, x)}));
  Term sred = b.a("ap", {b.a("ap", {b.a("ap", {b.a("s", {}), x}), y}), z});
  b.axiom("s_rule", {{"x", TM0}, {"y", TM0}, {"z", TM0}},
          Formula::of({Atom::defined(sred)}),
          Formula::of({Atom::eq(sred, b.a("ap", {b.a("ap", {x, z}),
                                                 b.a("ap", {y, z})}))}));
}

NamedArtifact finish(Builder& b, const std::string& name, bool separated,
                     std::optional<WellDefinedCert> wd = std::nullopt,
                     int cond3_bound = 2) {
  NamedArtifact art;
  art.name = name;
  b.th.name = name;
  art.theory = b.th;
  if (separated) {
    art.separation = classify_separated(b.th, cond3_bound);
    try {
      art.trs = extract_directed(b.th, *art.separation);
    } catch (const UndirectedAxiom& e) {
      art.notes.push_back(std::string("no directed system: ") + e.what());
    }
  }
  art.well_defined = std::move(wd);
  return art;
}

Cond1Witness contr_to_unit_witness(const Theory& source, const Theory& target);

}  // namespace

std::vector<std::string> stdlib_theory_names() {
  return {"base",   "id0",          "id_full",  "refl_transport", "t_pi", "t_pi1",
          "t_pi2",  "t_pi3",        "contractible", "unit",       "combinatory"};
}

NamedArtifact stdlib_theory(const std::string& name) {
  Builder b;
  if (name == "base") {
    add_base(b);
    return finish(b, name, true);
  }
  if (name == "id0") {
    add_base(b);
    add_id(b, false);
    NamedArtifact art;
    art.name = name;
    b.th.name = name;
    art.theory = b.th;
    art.notes.push_back("not separated: Id has no definedness axiom");
    return art;
  }
  if (name == "id_full") {
    add_base(b);
    add_id(b, true);
    add_id1(b);
    return finish(b, name, true);
  }
  if (name == "refl_transport") {
    add_base(b);
    add_subst_machinery(b, true);
    add_id(b, true);
    add_id1(b);
    add_refl(b);
    add_transport(b);
    return finish(b, name, true);
  }
  if (name == "t_pi" || name == "t_pi1" || name == "t_pi2" || name == "t_pi3") {
    int variant = name == "t_pi" ? 0 : name == "t_pi1" ? 1 : name == "t_pi2" ? 2 : 3;
    add_base(b);
    add_subst_machinery(b, false);
    add_pi(b, variant);
    return finish(b, name, true, pi_well_defined_cert());
  }
  if (name == "contractible") {
    add_base(b);
    add_subst_machinery(b, false);
    add_id(b, true);
    add_id1(b);
    add_refl(b);
    add_contractible(b);
    return finish(b, name, true);
  }
  if (name == "unit") {
    add_base(b);
    add_subst_machinery(b, false);
    add_id(b, true);
    add_id1(b);
    add_refl(b);
    add_unit(b);
    return finish(b, name, true);
  }
  if (name == "combinatory") {
    add_base(b);
    add_combinatory(b);
    // The total application symbol makes the closed universe explode; the
    // condition-3 desk check runs at bound 0 for this fixture.
    return finish(b, name, true, std::nullopt, 0);
  }
  if (name == "interval" || name == "hofmann_ext")
    throw NotImplemented("theory " + name +
                         " depends on external definitions and is not provided");
  throw UnknownName("unknown stdlib theory: " + name);
}

std::vector<std::string> stdlib_morphism_names() {
  return {"pi_incl", "pi2_incl", "pi_iso", "contr_to_unit"};
}

namespace {

Cond1Witness contr_to_unit_witness(const Theory& source, const Theory& target) {
  Cond1Witness w;
  auto canonical = [&](const FunSymbol& sym) {
    std::vector<Term> xs;
    for (size_t i = 0; i < sym.arity(); ++i)
      xs.push_back(Term::var("x" + std::to_string(i + 1), sym.arg_sorts[i]));
    return xs;
  };
  for (const auto& sym : target.fun_symbols) {
    if (sym.from_base) continue;
    Cond1Entry e;
    if (sym.name == "Top") {
      e.guard = Formula::top();
      e.lift = Term::app(*source.fun("C"), {});
    } else if (sym.name == "unit") {
      e.guard = Formula::top();
      e.lift = Term::app(*source.fun("c0"), {});
    } else {
      // Identity-preserved symbol: guard = its definedness guard, lift =
      // sigma(xs), both over the canonical variables.
      const FunSymbol* ssym = source.fun(sym.name);
      if (!ssym) continue;
      std::vector<Term> xs = canonical(sym);
      e.lift = Term::app(*ssym, xs);
      const NamedAxiom* def_ax = source.axiom(sym.name + "_def");
      if (def_ax) {
        Substitution rho;
        for (size_t i = 0; i < def_ax->sequent.vars.size(); ++i)
          rho.map.emplace(def_ax->sequent.vars[i].first, xs[i]);
        e.guard = substitute(def_ax->sequent.lhs, rho);
      }
    }
    w.entries[sym.name] = std::move(e);
  }
  return w;
}

}  // namespace

NamedArtifact stdlib_morphism(const std::string& name) {
  NamedArtifact art;
  art.name = name;
  if (name == "pi_incl" || name == "pi2_incl") {
    NamedArtifact src = stdlib_theory(name == "pi_incl" ? "t_pi" : "t_pi2");
    NamedArtifact dst = stdlib_theory(name == "pi_incl" ? "t_pi1" : "t_pi3");
    TheoryMorphism m;
    m.name = name;
    m.source = *src.theory;
    m.target = *dst.theory;
    for (const auto& ax : m.source.axioms) m.obligation_status[ax.name] = {};
    art.morphism = std::move(m);
    return art;
  }
  if (name == "pi_iso") {
    NamedArtifact src = stdlib_theory("t_pi");
    NamedArtifact dst = stdlib_theory("t_pi2");
    TheoryMorphism m;
    m.name = name;
    m.source = *src.theory;
    m.target = *dst.theory;
    for (const auto& ax : m.source.axioms) m.obligation_status[ax.name] = {};
    art.morphism = std::move(m);
    return art;
  }
  if (name == "contr_to_unit") {
    NamedArtifact src = stdlib_theory("contractible");
    NamedArtifact dst = stdlib_theory("unit");
    TheoryMorphism m;
    m.name = name;
    m.source = *src.theory;
    m.target = *dst.theory;
    const Theory& s = *src.theory;
    const Theory& d = *dst.theory;
    m.fun_map["C"] = FunImage{{}, Term::app(*d.fun("Top"), {})};
    m.fun_map["c0"] = FunImage{{}, Term::app(*d.fun("unit"), {})};
    m.fun_map["eq"] = FunImage{
        {"c"}, Term::app(*d.fun("refl"), {Term::app(*d.fun("unit"), {})})};
    for (const auto& ax : s.axioms) m.obligation_status[ax.name] = {};
    art.cond1 = contr_to_unit_witness(s, d);
    art.morphism = std::move(m);
    return art;
  }
  throw UnknownName("unknown stdlib morphism: " + name);
}

namespace {

// When the image is literally an axiom of the target, one na node per
// conclusion conjunct (with nv/nh premises) certifies it without search.
std::optional<std::vector<DerivationPtr>> direct_axiom_witnesses(const Theory& target,
                                                                 const Sequent& image) {
  for (const auto& tax : target.axioms) {
    if (!(tax.sequent == image)) continue;
    std::vector<DerivationPtr> trees;
    for (size_t j = 0; j < image.rhs.atoms.size(); ++j) {
      auto na = std::make_shared<DerivationTree>();
      na->rule = Rule::Na;
      na->axiom_name = tax.name;
      na->conjunct = j;
      na->conclusion.vars = image.vars;
      na->conclusion.lhs = image.lhs;
      na->conclusion.rhs = Formula::of({image.rhs.atoms[j]});
      for (const auto& [v, s] : image.vars) {
        na->instantiation.push_back(Term::var(v, s));
        auto nv = std::make_shared<DerivationTree>();
        nv->rule = Rule::Nv;
        nv->conclusion.vars = image.vars;
        nv->conclusion.lhs = image.lhs;
        nv->conclusion.rhs = Formula::of({Atom::defined(Term::var(v, s))});
        na->premises.push_back(nv);
      }
      for (size_t i = 0; i < image.lhs.atoms.size(); ++i) {
        auto nh = std::make_shared<DerivationTree>();
        nh->rule = Rule::Nh;
        nh->index = i;
        nh->conclusion.vars = image.vars;
        nh->conclusion.lhs = image.lhs;
        nh->conclusion.rhs = Formula::of({image.lhs.atoms[i]});
        na->premises.push_back(nh);
      }
      trees.push_back(std::move(na));
    }
    return trees;
  }
  return std::nullopt;
}

}  // namespace

void certify_morphism(TheoryMorphism& m, int depth, int fuel) {
  for (const auto& ax : m.source.axioms) {
    Sequent image = apply_morphism(m, ax.sequent);
    ObligationStatus st;
    if (auto direct = direct_axiom_witnesses(m.target, image)) {
      st.kind = ObligationStatus::Kind::Certified;
      st.witnesses = std::move(*direct);
    } else {
      ProveResult r = prove(m.target, image, depth, fuel);
      if (r.certified()) {
        st.kind = ObligationStatus::Kind::Certified;
        st.witnesses = r.trees;
      } else {
        st.kind = ObligationStatus::Kind::Assumed;
      }
    }
    m.obligation_status[ax.name] = std::move(st);
  }
}

}  // namespace ttk
