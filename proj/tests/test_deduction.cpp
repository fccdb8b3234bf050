#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ttk/saturate.hpp"
#include "ttk/stdlib.hpp"

using namespace ttk;

namespace {

Term tvar(const std::string& n, Sort s) { return Term::var(n, s); }

// A tiny fixture: one constant and one unary symbol with sigma(x) = x.
Theory sigma_theory() {
  Theory th;
  th.name = "sigma";
  FunSymbol c{"c", {}, make_tm(0), std::nullopt, false, false};
  FunSymbol sigma{"sigma", {make_tm(0)}, make_tm(0), std::nullopt, false, false};
  th.add_fun(c);
  th.add_fun(sigma);
  Sequent cdef;
  cdef.rhs = Formula::of({Atom::defined(Term::app(c, {}))});
  th.add_axiom("c_def", cdef);
  Sequent collapse;
  collapse.vars = {{"x", make_tm(0)}};
  Term x = tvar("x", make_tm(0));
  collapse.lhs = Formula::of({Atom::defined(x)});
  collapse.rhs = Formula::of({Atom::eq(Term::app(sigma, {x}), x)});
  th.add_axiom("collapse", collapse);
  return th;
}

}  // namespace

TEST_CASE("check_derivation: nv node") {
  Theory id0 = *stdlib_theory("id0").theory;
  DerivationTree d;
  d.rule = Rule::Nv;
  d.conclusion.vars = {{"x", make_tm(0)}};
  d.conclusion.lhs = Formula::top();
  d.conclusion.rhs = Formula::of({Atom::defined(tvar("x", make_tm(0)))});
  CHECK_NOTHROW(check_derivation(id0, d));

  DerivationTree bad = d;
  bad.conclusion.rhs = Formula::of({Atom::defined(tvar("y", make_tm(0)))});
  CHECK_THROWS_AS(check_derivation(id0, bad), CheckError);
}

TEST_CASE("check_derivation: na instance of the Id0 axiom") {
  Theory id0 = *stdlib_theory("id0").theory;
  Term x = tvar("x", make_tm(0)), y = tvar("y", make_tm(0));
  Term idxy = Term::app(*id0.fun("Id"), {x, y});

  auto nv = [&](const Term& v) {
    auto d = std::make_shared<DerivationTree>();
    d->rule = Rule::Nv;
    d->conclusion.vars = {{"x", make_tm(0)}, {"y", make_tm(0)}};
    d->conclusion.lhs = Formula::of({Atom::defined(idxy)});
    d->conclusion.rhs = Formula::of({Atom::defined(v)});
    return d;
  };
  auto hyp = std::make_shared<DerivationTree>();
  hyp->rule = Rule::Nh;
  hyp->index = 0;
  hyp->conclusion.vars = {{"x", make_tm(0)}, {"y", make_tm(0)}};
  hyp->conclusion.lhs = Formula::of({Atom::defined(idxy)});
  hyp->conclusion.rhs = Formula::of({Atom::defined(idxy)});

  DerivationTree na;
  na.rule = Rule::Na;
  na.axiom_name = "Id_bnd";
  na.instantiation = {x, y};
  na.conjunct = 0;
  na.premises = {nv(x), nv(y), hyp};
  na.conclusion.vars = {{"x", make_tm(0)}, {"y", make_tm(0)}};
  na.conclusion.lhs = Formula::of({Atom::defined(idxy)});
  na.conclusion.rhs = Formula::of({Atom::eq(Term::app(*id0.fun("ty0"), {x}),
                                            Term::app(*id0.fun("ty0"), {y}))});
  CHECK_NOTHROW(check_derivation(id0, na));

  // nf from Id(x,y) def concludes x def.
  auto base = std::make_shared<DerivationTree>(*hyp);
  DerivationTree nf;
  nf.rule = Rule::Nf;
  nf.index = 0;
  nf.premises = {base};
  nf.conclusion.vars = {{"x", make_tm(0)}, {"y", make_tm(0)}};
  nf.conclusion.lhs = Formula::of({Atom::defined(idxy)});
  nf.conclusion.rhs = Formula::of({Atom::defined(x)});
  CHECK_NOTHROW(check_derivation(id0, nf));

  // Unknown axiom is rejected.
  DerivationTree ua = na;
  ua.axiom_name = "nope";
  CHECK_THROWS_AS(check_derivation(id0, ua), CheckError);

  // Lhs drift is rejected.
  DerivationTree drift = na;
  auto changed = std::make_shared<DerivationTree>(*nv(x));
  changed->conclusion.lhs = Formula::top();
  drift.premises[0] = changed;
  CHECK_THROWS_AS(check_derivation(id0, drift), CheckError);
}

TEST_CASE("split_sequent") {
  Theory id0 = *stdlib_theory("id0").theory;
  Term x = tvar("x", make_tm(0));
  Sequent s;
  s.vars = {{"x", make_tm(0)}};
  s.lhs = Formula::top();
  s.rhs = Formula::of({Atom::defined(x), Atom::eq(x, x)});
  auto parts = split_sequent(s);
  REQUIRE(parts.size() == 2);
  CHECK(parts[0].rhs.atoms.size() == 1);
  CHECK(parts[0].lhs == s.lhs);
  CHECK(parts[1].vars == s.vars);

  s.rhs = Formula::top();
  CHECK(split_sequent(s).empty());
  s.rhs = Formula::of({Atom::defined(x)});
  CHECK(split_sequent(s).size() == 1);
}

TEST_CASE("freshen: open sequent becomes closed goal over an extended theory") {
  Theory id0 = *stdlib_theory("id0").theory;
  Term x = tvar("x", make_tm(0)), y = tvar("y", make_tm(0));
  Sequent s;
  s.vars = {{"x", make_tm(0)}, {"y", make_tm(0)}};
  s.lhs = Formula::of({Atom::eq(x, y)});
  s.rhs = Formula::of({Atom::eq(y, x)});
  FreshenResult fr = freshen(id0, s);
  CHECK(fr.theory.fun_symbols.size() == id0.fun_symbols.size() + 2);
  CHECK(fr.theory.axioms.size() == id0.axioms.size() + 3);  // 2 freshness + 1 hypothesis
  REQUIRE(fr.goal.atoms.size() == 1);
  CHECK(fr.goal.atoms[0].kind == Atom::Kind::Eq);
  CHECK(fr.goal.atoms[0].lhs.head() == "c_y");
  CHECK(fr.goal.atoms[0].rhs.head() == "c_x");

  // Closed sequent: theory unchanged, goal = rhs.
  Sequent closed;
  closed.rhs = Formula::top();
  FreshenResult fr2 = freshen(id0, closed);
  CHECK(fr2.theory.fun_symbols.size() == id0.fun_symbols.size());
  CHECK(fr2.theory.axioms.size() == id0.axioms.size());
}

TEST_CASE("saturate: empty theory and definedness reflexivity") {
  Theory empty;
  empty.name = "empty";
  FactSet fs = saturate(empty, 3, 10);
  CHECK(fs.defined_representatives().empty());
  CHECK_FALSE(fs.fuel_exhausted());

  Theory one;
  one.name = "one";
  FunSymbol c{"c", {}, make_tm(0), std::nullopt, false, false};
  one.add_fun(c);
  Sequent cdef;
  cdef.rhs = Formula::of({Atom::defined(Term::app(c, {}))});
  one.add_axiom("c_def", cdef);
  FactSet fs1 = saturate(one, 2, 10);
  Term ct = Term::app(c, {});
  CHECK(fs1.is_defined(ct));
  CHECK(fs1.contains(Atom::eq(ct, ct)));
}

TEST_CASE("saturate: collapse example at depth 2 (hand enumeration oracle)") {
  Theory th = sigma_theory();
  Term c = Term::app(*th.fun("c"), {});
  Term sc = Term::app(*th.fun("sigma"), {c});
  Term ssc = Term::app(*th.fun("sigma"), {sc});
  FactSet fs = saturate(th, 2, 10);
  CHECK(fs.contains(Atom::eq(sc, c)));
  CHECK(fs.is_defined(sc));
  CHECK(fs.contains(Atom::eq(ssc, sc)));
  CHECK(fs.contains(Atom::eq(ssc, c)));  // transitivity within depth

  // Monotonicity in depth and fuel.
  FactSet d1 = saturate(th, 1, 10);
  CHECK(d1.contains(Atom::eq(sc, c)));
  CHECK_FALSE(d1.contains(Atom::eq(ssc, sc)));  // ssc is beyond depth 1
  FactSet f0 = saturate(th, 2, 1);
  for (const auto& t : f0.defined_terms()) CHECK(fs.is_defined(t));
}

TEST_CASE("saturate: symmetry, transitivity, congruence closure invariants") {
  Theory th = sigma_theory();
  // Add a second constant equal to c.
  FunSymbol d{"d", {}, make_tm(0), std::nullopt, false, false};
  th.add_fun(d);
  Sequent ddef;
  ddef.rhs = Formula::of({Atom::defined(Term::app(d, {}))});
  th.add_axiom("d_def", ddef);
  Sequent cd;
  cd.rhs = Formula::of({Atom::eq(Term::app(*th.fun("c"), {}), Term::app(d, {}))});
  th.add_axiom("c_eq_d", cd);
  FactSet fs = saturate(th, 2, 10);
  Term c = Term::app(*th.fun("c"), {}), dd = Term::app(*th.fun("d"), {});
  Term sc = Term::app(*th.fun("sigma"), {c});
  Term sd = Term::app(*th.fun("sigma"), {dd});
  CHECK(fs.contains(Atom::eq(c, dd)));
  CHECK(fs.contains(Atom::eq(dd, c)));           // symmetry
  CHECK(fs.contains(Atom::eq(sc, sd)));          // congruence
  CHECK(fs.contains(Atom::eq(sd, dd)));          // via collapse + transitivity
}

TEST_CASE("prove: Id0 boundary flip via na then ns") {
  Theory id0 = *stdlib_theory("id0").theory;
  Term x = tvar("x", make_tm(0)), y = tvar("y", make_tm(0));
  Term idxy = Term::app(*id0.fun("Id"), {x, y});
  Sequent s;
  s.vars = {{"x", make_tm(0)}, {"y", make_tm(0)}};
  s.lhs = Formula::of({Atom::defined(idxy)});
  s.rhs = Formula::of({Atom::eq(Term::app(*id0.fun("ty0"), {y}),
                                Term::app(*id0.fun("ty0"), {x}))});
  ProveResult r = prove(id0, s, 3, 20);
  REQUIRE(r.certified());
  REQUIRE(r.trees.size() == 1);
  CHECK_NOTHROW(check_derivation(id0, *r.trees[0]));
  CHECK(r.trees[0]->conclusion.lhs == s.lhs);

  // Underivable goal stays inconclusive.
  Sequent bad;
  bad.rhs = Formula::of({Atom::defined(Term::app_raw("c_x", make_tm(0), {}))});
  Theory with_const = id0;
  FunSymbol cx{"c_x", {}, make_tm(0), std::nullopt, false, false};
  with_const.add_fun(cx);
  ProveResult r2 = prove(with_const, bad, 3, 10);
  CHECK_FALSE(r2.certified());

  // Conjunct projection via nh.
  Sequent nh;
  nh.vars = {{"x", make_tm(0)}, {"y", make_tm(0)}};
  nh.lhs = Formula::of({Atom::eq(x, y), Atom::defined(x)});
  nh.rhs = Formula::of({Atom::eq(x, y)});
  ProveResult r3 = prove(id0, nh, 2, 10);
  REQUIRE(r3.certified());
  CHECK_NOTHROW(check_derivation(id0, *r3.trees[0]));
}

TEST_CASE("prove agrees on split components") {
  Theory th = sigma_theory();
  Term x = tvar("x", make_tm(0));
  Term sx = Term::app(*th.fun("sigma"), {x});
  Sequent s;
  s.vars = {{"x", make_tm(0)}};
  s.lhs = Formula::of({Atom::defined(x)});
  s.rhs = Formula::of({Atom::eq(sx, x), Atom::defined(sx)});
  ProveResult whole = prove(th, s, 3, 15);
  REQUIRE(whole.certified());
  CHECK(whole.trees.size() == 2);
  for (const auto& component : split_sequent(s)) {
    ProveResult part = prove(th, component, 3, 15);
    CHECK(part.certified());
  }
  for (const auto& t : whole.trees) CHECK_NOTHROW(check_derivation(th, *t));
}

TEST_CASE("constant-freshening round trip on random small sequents") {
  Theory th = sigma_theory();
  Term x = tvar("x", make_tm(0));
  Term c = Term::app(*th.fun("c"), {});
  std::vector<Term> terms{x, c, Term::app(*th.fun("sigma"), {x}),
                          Term::app(*th.fun("sigma"), {c})};
  std::mt19937 rng(11);
  int agreements = 0, total = 0;
  for (int i = 0; i < 100; ++i) {
    Sequent s;
    s.vars = {{"x", make_tm(0)}};
    Term a = terms[rng() % terms.size()], b = terms[rng() % terms.size()];
    Term g1 = terms[rng() % terms.size()], g2 = terms[rng() % terms.size()];
    s.lhs = Formula::of({Atom::eq(a, b)});
    s.rhs = Formula::of({Atom::eq(g1, g2)});
    ProveResult direct = prove(th, s, 3, 15);

    FreshenResult fr = freshen(th, s);
    Sequent closed;
    closed.rhs = fr.goal;
    ProveResult via_fresh = prove(fr.theory, closed, 3, 15);
    ++total;
    if (direct.certified() == via_fresh.certified()) ++agreements;
  }
  CHECK(agreements == total);
}

TEST_CASE("predicate facts: saturation, projection, and read-back") {
  Theory th;
  th.name = "preds";
  FunSymbol c{"c", {}, make_tm(0), std::nullopt, false, false};
  FunSymbol d{"d", {}, make_tm(0), std::nullopt, false, false};
  th.add_fun(c);
  th.add_fun(d);
  PredSymbol P{"P", {make_tm(0)}, false};
  th.add_pred(P);
  Term ct = Term::app(c, {}), dt = Term::app(d, {});
  Sequent cdef;
  cdef.rhs = Formula::of({Atom::defined(ct)});
  th.add_axiom("c_def", cdef);
  Sequent pc;
  pc.rhs = Formula::of({Atom::predicate("P", {ct})});
  th.add_axiom("p_c", pc);
  // P carries its argument to d.
  Sequent collapse;
  collapse.vars = {{"x", make_tm(0)}};
  Term x = tvar("x", make_tm(0));
  collapse.lhs = Formula::of({Atom::predicate("P", {x})});
  collapse.rhs = Formula::of({Atom::eq(x, dt), Atom::predicate("P", {dt})});
  th.add_axiom("collapse", collapse);

  FactSet fs = saturate(th, 2, 10);
  CHECK(fs.contains(Atom::predicate("P", {ct})));
  CHECK(fs.is_defined(ct));  // np projects definedness out of P(c)
  CHECK(fs.contains(Atom::eq(ct, dt)));
  CHECK(fs.contains(Atom::predicate("P", {dt})));

  // Read-back produces checkable trees for predicate goals too.
  auto tree = fs.explain(Atom::predicate("P", {dt}));
  REQUIRE(tree.has_value());
  CHECK_NOTHROW(check_derivation(th, **tree));
  auto eq_tree = fs.explain(Atom::eq(dt, ct));
  REQUIRE(eq_tree.has_value());
  CHECK_NOTHROW(check_derivation(th, **eq_tree));

  // And through the open-sequent interface.
  Sequent goal;
  goal.vars = {{"x", make_tm(0)}};
  goal.lhs = Formula::of({Atom::predicate("P", {x})});
  goal.rhs = Formula::of({Atom::eq(x, dt)});
  ProveResult r = prove(th, goal, 2, 10);
  REQUIRE(r.certified());
  CHECK_NOTHROW(check_derivation(th, *r.trees[0]));
}

TEST_CASE("saturation is deterministic across runs") {
  Theory th = sigma_theory();
  FactSet a = saturate(th, 3, 15);
  FactSet b = saturate(th, 3, 15);
  CHECK(a.fact_count() == b.fact_count());
  auto ra = a.defined_representatives();
  auto rb = b.defined_representatives();
  REQUIRE(ra.size() == rb.size());
  for (size_t i = 0; i < ra.size(); ++i) CHECK(ra[i] == rb[i]);
  CHECK(a.rounds_used() == b.rounds_used());
}

TEST_CASE("fuel exhaustion is flagged") {
  // A free unary generator needs one round per depth level; a tiny fuel
  // cannot close the depth-4 universe.
  Theory th;
  th.name = "chain";
  FunSymbol c{"c", {}, make_tm(0), std::nullopt, false, false};
  FunSymbol f{"f", {make_tm(0)}, make_tm(0), std::nullopt, false, false};
  th.add_fun(c);
  th.add_fun(f);
  Sequent cdef;
  cdef.rhs = Formula::of({Atom::defined(Term::app(c, {}))});
  th.add_axiom("c_def", cdef);
  Sequent fdef;
  fdef.vars = {{"x", make_tm(0)}};
  Term x = tvar("x", make_tm(0));
  fdef.lhs = Formula::of({Atom::defined(x)});
  fdef.rhs = Formula::of({Atom::defined(Term::app(f, {x}))});
  th.add_axiom("f_def", fdef);
  FactSet starved = saturate(th, 4, 1);
  FactSet done = saturate(th, 4, 20);
  CHECK(starved.fuel_exhausted());
  CHECK_FALSE(done.fuel_exhausted());
  for (const auto& t : starved.defined_terms()) CHECK(done.is_defined(t));
}

TEST_CASE("derivations returned by prove replay through the checker") {
  Theory pi = *stdlib_theory("t_pi1").theory;
  // beta premise implies the equality at a small depth.
  Term A = tvar("A", make_ty(0)), B = tvar("B", make_ty(1));
  Term b = tvar("b", make_tm(1)), a = tvar("a", make_tm(0));
  Term lam = Term::app(*pi.fun("lam"), {A, B, b});
  Term redex = Term::app(*pi.fun("app"), {A, B, lam, a});
  Sequent s;
  s.vars = {{"A", make_ty(0)}, {"B", make_ty(1)}, {"b", make_tm(1)}, {"a", make_tm(0)}};
  s.lhs = Formula::of({Atom::defined(redex)});
  s.rhs = Formula::of({Atom::eq(redex, Term::app(*pi.fun("subst_tm0"), {b, a}))});
  ProveResult r = prove(pi, s, 4, 25);
  REQUIRE(r.certified());
  CHECK_NOTHROW(check_derivation(pi, *r.trees[0]));
}
