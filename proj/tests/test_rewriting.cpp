#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ttk/rewriting.hpp"
#include "ttk/stdlib.hpp"

using namespace ttk;

namespace {

Term tvar(const std::string& n, Sort s) { return Term::var(n, s); }

RewriteRule beta_rule(const Theory& pi, bool annotated_variant) {
  Term A = tvar("A", make_ty(0)), B = tvar("B", make_ty(1));
  Term b = tvar("b", make_tm(1)), a = tvar("a", make_tm(0));
  Term lam = annotated_variant
                 ? Term::app(*pi.fun("lam"), {tvar("A2", make_ty(0)),
                                              tvar("B2", make_ty(1)), b})
                 : Term::app(*pi.fun("lam"), {A, B, b});
  RewriteRule r;
  r.name = "beta";
  r.lhs = Term::app(*pi.fun("app"), {A, B, lam, a});
  r.rhs = Term::app(*pi.fun("subst_tm0"), {b, a});
  return r;
}

}  // namespace

TEST_CASE("validate_trs: beta left-linearity per variant") {
  Theory pi = *stdlib_theory("t_pi").theory;
  TRS plain = validate_trs({beta_rule(pi, false)});
  CHECK_FALSE(plain.left_linear);  // A and B occur twice
  TRS annotated = validate_trs({beta_rule(pi, true)});
  CHECK(annotated.left_linear);

  RewriteRule varlhs;
  varlhs.name = "bad";
  varlhs.lhs = tvar("x", make_tm(0));
  varlhs.rhs = Term::app(*pi.fun("subst_tm0"),
                         {tvar("b", make_tm(1)), tvar("x", make_tm(0))});
  CHECK_THROWS_AS(validate_trs({varlhs}), VariableLhs);

  RewriteRule escaping;
  escaping.name = "esc";
  Term x = tvar("x", make_tm(0));
  escaping.lhs = Term::app(*pi.fun("ty0"), {x});
  escaping.rhs = tvar("Y", make_ty(0));
  CHECK_THROWS_AS(validate_trs({escaping}), EscapingVariable);
}

TEST_CASE("step: telescope boundary rewrites in one root step") {
  Theory contr = *stdlib_theory("contractible").theory;
  Telescope tel;
  tel.entries.push_back(
      TelescopeEntry{"x", make_tm(0), Term::app(*contr.fun("C"), {})});
  TRS empty_trs;
  Term tyx = Term::app(*contr.fun("ty0"), {tvar("x", make_tm(0))});
  auto succs = step(empty_trs, tel, tyx, contr);
  REQUIRE(succs.size() == 1);
  CHECK(succs[0].result == Term::app(*contr.fun("C"), {}));
  CHECK(succs[0].pos.empty());
  CHECK(succs[0].from_telescope);

  // A normal form has no successors.
  CHECK(step(empty_trs, tel, tvar("x", make_tm(0)), contr).empty());
}

TEST_CASE("step: root beta redex carries the matching substitution") {
  NamedArtifact art = stdlib_theory("t_pi1");
  const Theory& pi = *art.theory;
  const TRS& trs = *art.trs;
  Term X = tvar("X", make_ty(0)), x = tvar("x", make_tm(0));
  Term wk = Term::app(*pi.fun("wk_ty0"), {X, X});
  Term lam = Term::app(*pi.fun("lam"), {X, wk, Term::app(*pi.fun("var0"), {X})});
  Term redex = Term::app(*pi.fun("app"), {X, wk, lam, x});
  auto succs = step(trs, {}, redex);
  REQUIRE(succs.size() == 1);
  CHECK(succs[0].rule_name == "beta");
  CHECK(succs[0].result ==
        Term::app(*pi.fun("subst_tm0"), {Term::app(*pi.fun("var0"), {X}), x}));
  CHECK(*succs[0].subst.find("a") == x);
}

TEST_CASE("normalize: leftmost-innermost, fuel accounting, replay") {
  NamedArtifact art = stdlib_theory("t_pi1");
  const Theory& pi = *art.theory;
  const TRS& trs = *art.trs;

  ReductionTrace t0 = normalize(trs, {}, tvar("x", make_tm(0)), 10);
  CHECK(t0.steps.empty());
  CHECK(t0.end == tvar("x", make_tm(0)));

  // The closed beta instance reduces to its argument within fuel 10.
  Term X = tvar("X", make_ty(0)), x = tvar("x", make_tm(0));
  Term wk = Term::app(*pi.fun("wk_ty0"), {X, X});
  Term lam = Term::app(*pi.fun("lam"), {X, wk, Term::app(*pi.fun("var0"), {X})});
  Term redex = Term::app(*pi.fun("app"), {X, wk, lam, x});
  ReductionTrace tr = normalize(trs, {}, redex, 10);
  CHECK_FALSE(tr.fuel_exhausted);
  CHECK(tr.end == x);
  CHECK(tr.steps.size() == 2);
  CHECK(replay(trs, {}, tr));

  // A looping rule exhausts fuel and keeps the partial trace.
  Theory sig;
  sig.name = "loop";
  FunSymbol c{"c", {}, make_tm(0), std::nullopt, false, false};
  FunSymbol sigma{"sigma", {make_tm(0)}, make_tm(0), std::nullopt, false, false};
  sig.add_fun(c);
  sig.add_fun(sigma);
  RewriteRule loop;
  loop.name = "loop";
  Term sx = Term::app(*sig.fun("sigma"), {tvar("x", make_tm(0))});
  loop.lhs = sx;
  loop.rhs = sx;
  TRS ltrs = validate_trs({loop});
  ReductionTrace lt =
      normalize(ltrs, {}, Term::app(*sig.fun("sigma"), {Term::app(*sig.fun("c"), {})}), 5);
  CHECK(lt.fuel_exhausted);
  CHECK(lt.steps.size() == 5);
  CHECK(replay(ltrs, {}, lt));
}

TEST_CASE("joinable: trivial, telescope, and double-redex cases") {
  NamedArtifact art = stdlib_theory("t_pi1");
  const Theory& pi = *art.theory;
  const TRS& trs = *art.trs;
  Term x = tvar("x", make_tm(0));

  auto w0 = joinable(trs, {}, x, x, 5, 16);
  REQUIRE(w0.has_value());
  CHECK(w0->meet == x);
  CHECK(w0->left_trace.steps.empty());
  CHECK(w0->right_trace.steps.empty());

  Telescope tel;
  tel.entries.push_back(
      TelescopeEntry{"X", make_ty(0), Term::app(*pi.fun("nil"), {})});
  auto tel_rules = telescope_rules(tel, pi);
  Term ftX = Term::app(*pi.fun("ft0"), {tvar("X", make_ty(0))});
  auto w1 = joinable(trs, tel_rules, ftX, Term::app(*pi.fun("nil"), {}), 5, 16);
  REQUIRE(w1.has_value());
  CHECK(w1->meet == Term::app(*pi.fun("nil"), {}));
  CHECK(w1->left_trace.steps.size() == 1);
  CHECK(w1->right_trace.steps.empty());

  // Two distinct one-step residuals of a nested double beta redex.
  Term X = tvar("X", make_ty(0));
  Term wk = Term::app(*pi.fun("wk_ty0"), {X, X});
  Term lam = Term::app(*pi.fun("lam"), {X, wk, Term::app(*pi.fun("var0"), {X})});
  Term inner = Term::app(*pi.fun("app"), {X, wk, lam, x});
  Term outer = Term::app(*pi.fun("app"), {X, wk, lam, inner});
  auto succs = step(trs, {}, outer);
  REQUIRE(succs.size() == 2);
  auto w2 = joinable(trs, {}, succs[0].result, succs[1].result, 10, 64);
  REQUIRE(w2.has_value());
  CHECK(replay(trs, {}, w2->left_trace));
  CHECK(replay(trs, {}, w2->right_trace));
  CHECK(w2->left_trace.end == w2->meet);
  CHECK(w2->right_trace.end == w2->meet);
}

TEST_CASE("joinable flags width exhaustion") {
  NamedArtifact comb = stdlib_theory("combinatory");
  Term k = Term::app(*comb.theory->fun("k"), {});
  Term s = Term::app(*comb.theory->fun("s"), {});
  auto ap = [&](Term f, Term x) { return Term::app(*comb.theory->fun("ap"), {f, x}); };
  // Many parallel redexes force a wide frontier.
  Term busy = ap(ap(ap(s, ap(ap(k, k), s)), ap(ap(k, s), k)), ap(ap(k, k), k));
  auto w = joinable(*comb.trs, {}, busy, busy, 6, 1);
  REQUIRE(w.has_value());  // trivially joinable at distance zero
  auto w2 = joinable(*comb.trs, {}, ap(ap(k, busy), k), busy, 6, 1);
  if (w2) CHECK(w2->width_exhausted);
}

TEST_CASE("check_local_confluence: vacuous, counterexample, and combinatory logic") {
  Theory th;
  th.name = "abc";
  for (const char* n : {"a", "b", "c"}) {
    FunSymbol f{n, {}, make_tm(0), std::nullopt, false, false};
    th.add_fun(f);
  }
  Term a = Term::app(*th.fun("a"), {});
  Term b = Term::app(*th.fun("b"), {});
  Term c = Term::app(*th.fun("c"), {});

  TRS empty_trs;
  auto rep0 = check_local_confluence(empty_trs, {}, {a, b}, th, 5);
  CHECK(rep0.ok());

  TRS trs = validate_trs({RewriteRule{"ab", a, b}, RewriteRule{"ac", a, c}});
  auto rep1 = check_local_confluence(trs, {}, {a}, th, 5);
  REQUIRE_FALSE(rep1.ok());
  CHECK(rep1.unjoined[0].origin == a);

  // Combinatory logic: no critical pairs among seeds of depth <= 3.
  NamedArtifact comb = stdlib_theory("combinatory");
  Term k = Term::app(*comb.theory->fun("k"), {});
  Term s = Term::app(*comb.theory->fun("s"), {});
  auto ap = [&](Term f, Term x) { return Term::app(*comb.theory->fun("ap"), {f, x}); };
  std::vector<Term> seeds{ap(ap(k, k), s), ap(ap(ap(s, k), k), s),
                          ap(ap(ap(s, k), k), ap(ap(k, k), s)),
                          ap(ap(k, ap(ap(k, s), k)), k)};
  auto rep2 = check_local_confluence(*comb.trs, {}, seeds, *comb.theory, 30);
  CHECK(rep2.ok());
  CHECK(rep2.peaks_checked > 0);
}

TEST_CASE("check_orthogonal") {
  Theory th;
  th.name = "fg";
  FunSymbol cfun{"c", {}, make_tm(0), std::nullopt, false, false};
  FunSymbol g{"g", {make_tm(0)}, make_tm(0), std::nullopt, false, false};
  FunSymbol f{"f", {make_tm(0)}, make_tm(0), std::nullopt, false, false};
  FunSymbol h{"h", {make_tm(0)}, make_tm(0), std::nullopt, false, false};
  th.add_fun(cfun);
  th.add_fun(g);
  th.add_fun(f);
  th.add_fun(h);
  Term x = tvar("x", make_tm(0));
  Term c = Term::app(*th.fun("c"), {});

  TRS t1 = validate_trs({RewriteRule{"r1", Term::app(*th.fun("f"), {x}), x}});
  TRS t2 = validate_trs({RewriteRule{"r2", Term::app(*th.fun("h"), {x}), x}});
  auto [ok, overlaps] = check_orthogonal(t1, t2);
  CHECK(ok);
  CHECK(overlaps.empty());

  // f(g(x)) -> x overlaps g(c) -> c at argument position 0 of f(g(x)).
  TRS t3 = validate_trs({RewriteRule{
      "fg", Term::app(*th.fun("f"), {Term::app(*th.fun("g"), {x})}), x}});
  TRS t4 = validate_trs({RewriteRule{"gc", Term::app(*th.fun("g"), {c}), c}});
  auto [ok2, overlaps2] = check_orthogonal(t3, t4);
  CHECK_FALSE(ok2);
  bool found = false;
  for (const auto& o : overlaps2)
    if (o.rule_a == "gc" && o.rule_b == "fg" && o.pos == Position{0}) found = true;
  CHECK(found);

  // t_pi2 rules versus a frozen telescope system.
  NamedArtifact pi2 = stdlib_theory("t_pi2");
  Telescope tel;
  tel.entries.push_back(
      TelescopeEntry{"X", make_ty(0), Term::app(*pi2.theory->fun("nil"), {})});
  tel.entries.push_back(TelescopeEntry{"x", make_tm(0), tvar("X", make_ty(0))});
  TRS tel_sys = rigid_telescope_system(tel, *pi2.theory);
  auto [ok3, overlaps3] = check_orthogonal(*pi2.trs, tel_sys);
  CHECK(ok3);
}

TEST_CASE("sampled steps prove as equalities at depth 4") {
  NamedArtifact art = stdlib_theory("t_pi1");
  const Theory& pi = *art.theory;
  Telescope tel;
  tel.entries.push_back(
      TelescopeEntry{"X", make_ty(0), Term::app(*pi.fun("nil"), {})});
  tel.entries.push_back(TelescopeEntry{"x", make_tm(0), tvar("X", make_ty(0))});
  ProverContext ctx(pi, tel.var_list(), tel.as_formula(pi), 3, 20);
  auto tel_rules = telescope_rules(tel, pi);
  size_t proved = 0;
  std::vector<Term> pool;
  for (const auto& members : ctx.equality_classes())
    for (const auto& m : members) pool.push_back(m);
  for (const auto& t : pool) {
    if (proved >= 10) break;
    for (const auto& st : step(*art.trs, tel_rules, t)) {
      Sequent s;
      s.vars = tel.var_list();
      s.lhs = tel.as_formula(pi);
      s.rhs = Formula::of({Atom::eq(t, st.result)});
      ProveResult r = prove(pi, s, 4, 25);
      INFO(t.show() << " => " << st.result.show());
      CHECK(r.certified());
      if (r.certified()) ++proved;
      break;
    }
  }
  CHECK(proved >= 5);
}

TEST_CASE("step determinism across runs") {
  NamedArtifact art = stdlib_theory("t_pi1");
  const Theory& pi = *art.theory;
  Term X = tvar("X", make_ty(0)), x = tvar("x", make_tm(0));
  Term wk = Term::app(*pi.fun("wk_ty0"), {X, X});
  Term lam = Term::app(*pi.fun("lam"), {X, wk, Term::app(*pi.fun("var0"), {X})});
  Term redex = Term::app(*pi.fun("app"), {X, wk, lam, x});
  Term probe = Term::app(*pi.fun("ty0"), {redex});
  auto s1 = step(*art.trs, {}, probe);
  auto s2 = step(*art.trs, {}, probe);
  REQUIRE(s1.size() == s2.size());
  REQUIRE(s1.size() >= 2);  // app_ty at root, beta inside
  for (size_t i = 0; i < s1.size(); ++i) {
    CHECK(s1[i].pos == s2[i].pos);
    CHECK(s1[i].rule_name == s2[i].rule_name);
    CHECK(s1[i].result == s2[i].result);
  }
  for (size_t i = 1; i < s1.size(); ++i)
    CHECK((s1[i - 1].pos < s1[i].pos ||
           (s1[i - 1].pos == s1[i].pos && s1[i - 1].rule_index <= s1[i].rule_index)));
}
