#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ttk/colimit.hpp"
#include "ttk/morita.hpp"
#include "ttk/saturate.hpp"
#include "ttk/stdlib.hpp"

using namespace ttk;

namespace {

Theory id0_theory() { return *stdlib_theory("id0").theory; }
Theory pi_theory() { return *stdlib_theory("t_pi").theory; }

Term tvar(const std::string& n, Sort s) { return Term::var(n, s); }

}  // namespace

TEST_CASE("sort aliases resolve idempotently") {
  CHECK(make_ty(0) == make_ctx(1));
  CHECK(is_ty(make_ty(2)));
  CHECK(ty_level(make_ty(2)) == 2);
  CHECK(make_ty(ty_level(make_ty(3))) == make_ty(3));
  CHECK_FALSE(is_ty(make_ctx(0)));
  CHECK(boundary_sort(make_tm(1)) == make_ty(1));
  CHECK(boundary_sort(make_ty(1)) == make_ctx(1));
  CHECK_FALSE(has_boundary(make_ctx(0)));
}

TEST_CASE("sort_of reconstructs and validates") {
  Theory th = id0_theory();
  Term x = tvar("x", make_tm(0)), y = tvar("y", make_tm(0));
  Term id = Term::app(*th.fun("Id"), {x, y});
  std::map<std::string, Sort> vctx{{"x", make_tm(0)}, {"y", make_tm(0)}};
  CHECK(sort_of(id, vctx) == make_ty(0));
  CHECK(sort_of(tvar("x", make_tm(3)), {{"x", make_tm(3)}}) == make_tm(3));
  // Signature violation surfaces at construction.
  CHECK_THROWS_AS(Term::app(*th.fun("Id"), {tvar("x", make_tm(1)), y}), SortMismatch);
  CHECK_THROWS_AS(sort_of(id, {{"x", make_tm(0)}}), UnknownVariable);
  CHECK_THROWS_AS(Term::app(*th.fun("Id"), {x}), ArityMismatch);
}

TEST_CASE("substitution basics") {
  Theory th = id0_theory();
  Term x = tvar("x", make_tm(0)), y = tvar("y", make_tm(0)), z = tvar("z", make_tm(0));
  Term idyz = Term::app(*th.fun("Id"), {y, z});
  Substitution rho;
  rho.map.emplace("X", idyz);
  CHECK(substitute(tvar("X", make_ty(0)), rho) == idyz);  // variable case
  Substitution toy;
  toy.map.emplace("x", y);
  Term idxy = Term::app(*th.fun("Id"), {x, y});
  CHECK(substitute(idxy, toy) == Term::app(*th.fun("Id"), {y, y}));
  // Variable not free: unchanged.
  Term tyc = Term::app(*th.fun("ty0"), {z});
  CHECK(substitute(tyc, toy) == tyc);
  // Empty substitution is the identity.
  CHECK(substitute(idxy, Substitution{}) == idxy);
}

TEST_CASE("substitute composition on enumerated instances") {
  Theory th = pi_theory();
  std::vector<std::pair<std::string, Sort>> vars{{"X", make_ty(0)}, {"x", make_tm(0)}};
  auto pool_tm = enumerate_terms(th, vars, make_tm(0), 2);
  auto pool_ty = enumerate_terms(th, vars, make_ty(0), 2);
  REQUIRE(pool_tm.size() > 3);
  REQUIRE(pool_ty.size() > 3);
  std::mt19937 rng(7);
  auto pick = [&](const std::vector<Term>& pool) {
    return pool[rng() % pool.size()];
  };
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    Term t = pick(rng() % 2 ? pool_tm : pool_ty);
    Substitution r1, r2;
    r1.map.emplace("x", pick(pool_tm));
    r1.map.emplace("X", pick(pool_ty));
    r2.map.emplace("x", pick(pool_tm));
    r2.map.emplace("X", pick(pool_ty));
    // r2 after r1: apply r2 to r1's range, keep r2 entries for vars r1 misses.
    Substitution comp = r2;
    for (auto& [v, tm] : r1.map) comp.map[v] = substitute(tm, r2);
    CHECK(substitute(substitute(t, r1), r2) == substitute(t, comp));
    ++checked;
  }
  CHECK(checked == 1000);
}

TEST_CASE("boundary operator") {
  Theory th = pi_theory();
  Term a = tvar("a", make_tm(0));
  Term bd = boundary(a, th);
  CHECK(bd.head() == "ty0");
  CHECK(bd.sort() == make_ty(0));
  Term A = tvar("A", make_ty(2));
  Term bA = boundary(A, th);
  CHECK(bA.head() == "ft2");
  CHECK(bA.sort() == make_ctx(2));
  CHECK_THROWS_AS(boundary(tvar("G", make_ctx(0)), th), NoBoundary);
  Theory empty;
  CHECK_THROWS_AS(boundary(a, empty), MissingBaseSymbol);
}

TEST_CASE("apply_morphism: identity and composition agree with two-pass translation") {
  Theory pi = pi_theory();
  TheoryMorphism id = identity_morphism(pi);
  std::vector<std::pair<std::string, Sort>> vars{{"X", make_ty(0)}, {"x", make_tm(0)}};
  auto pool = enumerate_terms(pi, vars, make_tm(0), 3);
  REQUIRE(pool.size() >= 50);
  for (size_t i = 0; i < 50; ++i) CHECK(apply_morphism(id, pool[i]) == pool[i]);

  // g after f versus pointwise composition on 50 terms.
  NamedArtifact iso = stdlib_morphism("pi_iso");
  TheoryMorphism f = *iso.morphism;               // t_pi -> t_pi2
  TheoryMorphism g = identity_morphism(f.target); // t_pi2 -> t_pi2
  TheoryMorphism gf = compose(g, f);
  for (size_t i = 0; i < 50 && i < pool.size(); ++i)
    CHECK(apply_morphism(gf, pool[i]) == apply_morphism(g, apply_morphism(f, pool[i])));
}

TEST_CASE("morphism commutes with substitution") {
  NamedArtifact art = stdlib_morphism("contr_to_unit");
  const TheoryMorphism& f = *art.morphism;
  const Theory& src = f.source;
  Term c = tvar("c", make_tm(0));
  Term eqc = Term::app(*src.fun("eq"), {c});
  Substitution rho;
  rho.map.emplace("c", Term::app(*src.fun("c0"), {}));
  Term lhs = apply_morphism(f, substitute(eqc, rho));
  Substitution rho_img;
  rho_img.map.emplace("c", apply_morphism(f, Term::app(*src.fun("c0"), {})));
  Term rhs = substitute(apply_morphism(f, eqc), rho_img);
  CHECK(lhs == rhs);
}

TEST_CASE("predicate images translate through morphisms") {
  Theory src;
  src.name = "psrc";
  FunSymbol c{"c", {}, make_tm(0), std::nullopt, false, false};
  src.add_fun(c);
  src.add_pred(PredSymbol{"P", {make_tm(0)}, false});
  Theory dst = src;
  dst.name = "pdst";
  dst.add_pred(PredSymbol{"Q", {make_tm(0), make_tm(0)}, false});
  TheoryMorphism m;
  m.name = "diag";
  m.source = src;
  m.target = dst;
  Term x = tvar("x", make_tm(0));
  m.pred_map["P"] = PredImage{{"x"}, Formula::of({Atom::predicate("Q", {x, x})})};
  REQUIRE(validate_morphism(m).ok());
  Formula img = apply_morphism(m, Formula::of({Atom::predicate("P", {Term::app(c, {})})}));
  REQUIRE(img.atoms.size() == 1);
  CHECK(img.atoms[0].pred == "Q");
  CHECK(img.atoms[0].args.size() == 2);
}

TEST_CASE("theory colimit: coproduct of Id0 with Id0") {
  Theory base = *stdlib_theory("base").theory;
  Theory a = id0_theory();
  Theory b = id0_theory();
  ColimitResult r = coproduct(base, a, b);
  // Two renamed Id symbols and two axioms beyond the base.
  int ids = 0, axs = 0;
  for (const auto& f : r.theory.fun_symbols)
    if (f.name.rfind("Id", 0) == 0) ++ids;
  for (const auto& ax : r.theory.axioms)
    if (!ax.from_base) ++axs;
  CHECK(ids == 2);
  CHECK(axs == 2);
  REQUIRE(r.injections.size() == 2);
  // Injections are jointly surjective on non-base symbols.
  std::set<std::string> covered;
  for (size_t i = 0; i < 2; ++i) {
    const Theory& node = i == 0 ? a : b;
    for (const auto& sym : node.fun_symbols) {
      if (base.fun(sym.name)) continue;
      std::vector<Term> xs;
      for (size_t k = 0; k < sym.arity(); ++k)
        xs.push_back(tvar("x" + std::to_string(k + 1), sym.arg_sorts[k]));
      Term img = apply_morphism(r.injections[i], Term::app(sym, xs));
      covered.insert(img.head());
    }
  }
  int nonbase = 0;
  for (const auto& f : r.theory.fun_symbols)
    if (!f.from_base) ++nonbase;
  CHECK(static_cast<int>(covered.size()) == nonbase);
}

TEST_CASE("theory colimit: coequalizer adds gluing axioms") {
  Theory base = *stdlib_theory("base").theory;
  Theory contr = *stdlib_theory("contractible").theory;
  NamedArtifact m = stdlib_morphism("contr_to_unit");
  // f, g : contractible -> unit with f the stdlib map and g mapping eq the
  // same way (identical maps give no axioms; tweak g on c0 is not possible
  // while staying a morphism, so compare f against itself first).
  ColimitResult same = coequalizer(base, *m.morphism, *m.morphism);
  size_t before = m.morphism->target.axioms.size();
  CHECK(same.theory.axioms.size() == before);  // no gluing needed

  // Against the identity-carrying copy: one Kleene pair per differing symbol.
  TheoryMorphism f = *m.morphism;
  TheoryMorphism g = *m.morphism;
  g.fun_map["c0"] = FunImage{{}, Term::app(*f.target.fun("unit"), {})};
  ColimitResult r = coequalizer(base, f, g);
  CHECK(r.theory.axioms.size() == before);  // images still equal termwise
  (void)contr;
}

TEST_CASE("coequalizer of a genuinely parallel pair carries gluing axioms") {
  Theory base = *stdlib_theory("base").theory;
  Theory id0 = id0_theory();
  Theory idf = *stdlib_theory("id_full").theory;
  Term x = tvar("x1", make_tm(0)), y = tvar("x2", make_tm(0));
  TheoryMorphism f;
  f.name = "incl";
  f.source = id0;
  f.target = idf;
  TheoryMorphism g = f;
  g.name = "flip";
  g.fun_map["Id"] = FunImage{{"x1", "x2"}, Term::app(*idf.fun("Id"), {y, x})};
  REQUIRE(validate_morphism(f).ok());
  REQUIRE(validate_morphism(g).ok());
  ColimitResult r = coequalizer(base, f, g);
  // One Kleene pair for the one symbol whose images differ.
  CHECK(r.theory.axioms.size() == idf.axioms.size() + 2);
  // The gluing sequents are provable from the result at depth 2.
  Term fid = Term::app(*idf.fun("Id"), {x, y});
  Term gid = Term::app(*idf.fun("Id"), {y, x});
  Sequent glue;
  glue.vars = {{"x1", make_tm(0)}, {"x2", make_tm(0)}};
  glue.lhs = Formula::of({Atom::defined(fid)});
  glue.rhs = Formula::of({Atom::eq(fid, gid)});
  CHECK(prove(r.theory, glue, 2, 10).certified());
}

TEST_CASE("apply_morphism respects sorts on all stdlib morphisms") {
  for (const auto& name : stdlib_morphism_names()) {
    NamedArtifact art = stdlib_morphism(name);
    const TheoryMorphism& m = *art.morphism;
    std::vector<std::pair<std::string, Sort>> vars{{"q1", make_tm(0)},
                                                   {"q2", make_ty(0)}};
    for (Sort s : {make_tm(0), make_ty(0), make_tm(1)}) {
      for (const auto& t : enumerate_terms(m.source, vars, s, 2, 200)) {
        Term img = apply_morphism(m, t);
        INFO(name << ": " << t.show());
        CHECK(img.sort() == t.sort());
        std::string why;
        CHECK(well_sorted_over(img, m.target, &why));
      }
    }
  }
}

TEST_CASE("coproduct of the identity and contractible theories validates") {
  Theory base = *stdlib_theory("base").theory;
  ColimitResult r = coproduct(base, *stdlib_theory("id_full").theory,
                              *stdlib_theory("contractible").theory);
  ValidationReport rep = validate_theory(r.theory);
  for (const auto& i : rep.issues) MESSAGE(i.code << " " << i.position);
  CHECK(rep.ok());
  // The contractible copy's Id symbols collided and were renamed.
  CHECK_FALSE(r.renamed.empty());
}

TEST_CASE("colimit base mismatch is rejected") {
  Theory base = *stdlib_theory("base").theory;
  Theory bare;  // lacks the base
  bare.name = "bare";
  TheoryDiagram d;
  d.base = base;
  d.nodes = {bare};
  CHECK_THROWS_AS(theory_colimit(d), BaseMismatch);
}

TEST_CASE("validate_theory reports violations with positions") {
  Theory th = id0_theory();
  CHECK(validate_theory(th).ok());

  // An axiom using an undeclared symbol.
  Theory bad = th;
  Sequent s;
  s.vars = {{"x", make_tm(0)}};
  s.rhs = Formula::of({Atom::defined(
      Term::app_raw("ghost", make_tm(0), {tvar("x", make_tm(0))}))});
  bad.add_axiom("uses_ghost", s);
  ValidationReport rep = validate_theory(bad);
  REQUIRE_FALSE(rep.ok());
  bool found = false;
  for (const auto& i : rep.issues)
    if (i.code == "UnknownSymbol" && i.position == "uses_ghost") found = true;
  CHECK(found);

  // A free variable outside V.
  Theory open_th = th;
  Sequent s2;
  s2.rhs = Formula::of({Atom::defined(tvar("loose", make_tm(0)))});
  open_th.add_axiom("open_ax", s2);
  ValidationReport rep2 = validate_theory(open_th);
  bool open_found = false;
  for (const auto& i : rep2.issues)
    if (i.code == "OpenSequent" && i.position == "open_ax") open_found = true;
  CHECK(open_found);
}

TEST_CASE("is_small counts non-base symbols and axioms") {
  Theory id0 = id0_theory();
  CHECK(is_small(id0, 2));   // one symbol, one axiom
  CHECK_FALSE(is_small(id0, 1));
  CHECK(is_small(pi_theory(), 100));
  CHECK(is_small(pi_theory(), 0));  // aleph_0 sentinel
}

TEST_CASE("canonicalization of Defined is idempotent") {
  Term x = tvar("x", make_tm(0));
  Atom d = Atom::defined(x);
  Atom once = canonicalize(d);
  CHECK(once.kind == Atom::Kind::Eq);
  CHECK(once.lhs == x);
  CHECK(once.rhs == x);
  CHECK(canonicalize(once) == once);
  CHECK(atoms_equivalent(d, once));
}

TEST_CASE("match and unify") {
  Theory th = pi_theory();
  Term A = tvar("A", make_ty(0)), B = tvar("B", make_ty(1));
  Term pi = Term::app(*th.fun("Pi"), {A, B});
  Term X = tvar("X", make_ty(0));
  Term wk = Term::app(*th.fun("wk_ty0"), {X, X});
  Term subject = Term::app(*th.fun("Pi"), {X, wk});
  auto m = match_term(pi, subject);
  REQUIRE(m.has_value());
  CHECK(*m->find("A") == X);
  CHECK(*m->find("B") == wk);
  CHECK(substitute(pi, *m) == subject);
  // Occurs check.
  Term fb = tvar("F", make_ty(1));
  CHECK_FALSE(unify(fb, Term::app(*th.fun("wk_ty0"),
                                  {X, Term::app(*th.fun("ft1"), {fb})}))
                  .has_value());
}
