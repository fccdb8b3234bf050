#include "ttk/morita.hpp"

#include <algorithm>

namespace ttk {

TelescopeReport validate_telescope(const Theory& theory, const Telescope& tel,
                                   int depth) {
  TelescopeReport rep;
  std::vector<std::pair<std::string, Sort>> seen;
  bool prefix_ok = true;
  for (size_t i = 0; i < tel.entries.size(); ++i) {
    const auto& e = tel.entries[i];
    TelescopeReport::Entry out;
    out.var = e.var;
    bool entry_ok = false;
    if (!has_boundary(e.sort)) {
      out.verdict = Verdict3::Refuted;
      out.note = "SortMismatch: entry sorts must have kind tm or ty";
    } else if (e.assigned.sort() != boundary_sort(e.sort)) {
      out.verdict = Verdict3::Refuted;
      out.note = "SortMismatch: assigned term is not of the boundary sort";
    } else {
      bool scoped = true;
      for (const auto& [v, s] : free_vars(e.assigned)) {
        bool found = false;
        for (const auto& [sv, ss] : seen)
          if (sv == v && ss == s) found = true;
        if (!found) scoped = false;
      }
      if (!scoped) {
        out.verdict = Verdict3::Refuted;
        out.note = "OutOfOrderReference";
      } else if (!prefix_ok) {
        out.verdict = Verdict3::Inconclusive;
        out.note = "an earlier entry is invalid";
      } else {
        Sequent q;
        q.vars = seen;
        q.lhs = tel.prefix(i).as_formula(theory);
        q.rhs = Formula::of({Atom::defined(e.assigned)});
        auto r = prove(theory, q, depth, 2 * depth + 6);
        out.verdict = r.certified() ? Verdict3::Certified : Verdict3::Inconclusive;
        entry_ok = r.certified();
      }
    }
    prefix_ok = prefix_ok && entry_ok;
    rep.entries.push_back(std::move(out));
    seen.emplace_back(e.var, e.sort);
  }
  return rep;
}

Telescope apply_morphism(const TheoryMorphism& f, const Telescope& tel) {
  Telescope out;
  for (const auto& e : tel.entries)
    out.entries.push_back(TelescopeEntry{e.var, e.sort, apply_morphism(f, e.assigned)});
  return out;
}

HomotopyWitness HomotopyWitness::term(Term h) {
  HomotopyWitness w;
  w.kind = Kind::TermHtpy;
  w.h = std::move(h);
  return w;
}

HomotopyWitness HomotopyWitness::type(Term f, Term g, Term p, Term g2, Term p2) {
  HomotopyWitness w;
  w.kind = Kind::TypeHtpy;
  w.f = std::move(f);
  w.g = std::move(g);
  w.p = std::move(p);
  w.g2 = std::move(g2);
  w.p2 = std::move(p2);
  return w;
}

namespace {

const FunSymbol* need(const Theory& t, const std::string& name) {
  return t.fun(name);
}

// The five judgments of a type homotopy between A and A2 at ty-level n,
// encoded through the explicit weakening/variable/composition symbols.
std::optional<std::vector<Atom>> type_homotopy_judgments(const Theory& theory,
                                                         const HomotopyWitness& w,
                                                         const Term& A, const Term& A2,
                                                         int n,
                                                         const IdConventions& conv) {
  const FunSymbol* ty1 = need(theory, ty_symbol_name(n + 1));
  const FunSymbol* wk = need(theory, conv.wk_ty(n));
  const FunSymbol* id1 = need(theory, conv.id(n + 1));
  const FunSymbol* v0 = need(theory, conv.var0(n));
  const FunSymbol* comp = need(theory, conv.comp(n));
  if (!ty1 || !wk || !id1 || !v0 || !comp) return std::nullopt;
  auto TY = [&](const Term& t) { return Term::app(*ty1, {t}); };
  auto WK = [&](const Term& a, const Term& b) { return Term::app(*wk, {a, b}); };
  auto COMP = [&](const Term& src, const Term& dst, const Term& g_ty, const Term& g,
                  const Term& f) { return Term::app(*comp, {src, dst, g_ty, g, f}); };
  std::vector<Atom> out;
  out.push_back(Atom::eq(TY(w.f), WK(A, A2)));
  out.push_back(Atom::eq(TY(w.g), WK(A2, A)));
  out.push_back(Atom::eq(
      TY(w.p), Term::app(*id1, {COMP(A, A2, WK(A2, A), w.g, w.f), Term::app(*v0, {A})})));
  out.push_back(Atom::eq(TY(w.g2), WK(A2, A)));
  out.push_back(Atom::eq(
      TY(w.p2),
      Term::app(*id1, {COMP(A2, A, WK(A, A2), w.f, w.g), Term::app(*v0, {A2})})));
  return out;
}

}  // namespace

Verdict3 validate_homotopy(const Theory& theory, const Telescope& tel, const Term& lhs,
                           const Term& rhs, const HomotopyWitness& w, int depth,
                           const IdConventions& conv) {
  if (lhs.sort() != rhs.sort()) return Verdict3::Refuted;
  Sort s = lhs.sort();
  ProverContext ctx(theory, tel.var_list(), tel.as_formula(theory), depth,
                    4 * depth + 10);

  if (s.kind == SortKind::Tm && w.kind == HomotopyWitness::Kind::TermHtpy) {
    const FunSymbol* ty = need(theory, ty_symbol_name(s.level));
    const FunSymbol* id = need(theory, conv.id(s.level));
    if (!ty || !id) return Verdict3::Inconclusive;
    Atom goal = Atom::eq(Term::app(*ty, {w.h}), Term::app(*id, {lhs, rhs}));
    return ctx.holds(goal) ? Verdict3::Certified : Verdict3::Inconclusive;
  }
  if (is_ty(s) && w.kind == HomotopyWitness::Kind::TypeHtpy) {
    auto judgments = type_homotopy_judgments(theory, w, lhs, rhs, ty_level(s), conv);
    if (!judgments) return Verdict3::Inconclusive;
    for (const auto& j : *judgments)
      if (!ctx.holds(j)) return Verdict3::Inconclusive;
    return Verdict3::Certified;
  }
  if (s.kind == SortKind::Tm && w.kind == HomotopyWitness::Kind::TypeHtpy) {
    // Heterogeneous: a type homotopy between the ty-boundaries plus a term
    // homotopy between f[lhs] and rhs.
    const FunSymbol* ty = need(theory, ty_symbol_name(s.level));
    const FunSymbol* id = need(theory, conv.id(s.level));
    const FunSymbol* st = need(theory, conv.subst_tm(s.level));
    if (!ty || !id || !st || !w.h.valid()) return Verdict3::Inconclusive;
    Term tl = Term::app(*ty, {lhs});
    Term tr = Term::app(*ty, {rhs});
    auto judgments = type_homotopy_judgments(theory, w, tl, tr, s.level, conv);
    if (!judgments) return Verdict3::Inconclusive;
    for (const auto& j : *judgments)
      if (!ctx.holds(j)) return Verdict3::Inconclusive;
    Term transported = Term::app(*st, {w.f, lhs});
    Atom goal = Atom::eq(Term::app(*ty, {w.h}), Term::app(*id, {transported, rhs}));
    return ctx.holds(goal) ? Verdict3::Certified : Verdict3::Inconclusive;
  }
  return Verdict3::Inconclusive;
}

LiftingReport check_weak_lifting_instance(const LiftingInstance& inst, int depth,
                                          const IdConventions& conv) {
  LiftingReport rep;
  const Theory& src = inst.morphism.source;
  const Theory& dst = inst.morphism.target;
  const Telescope& tel = inst.telescope;
  Telescope tel_img = apply_morphism(inst.morphism, tel);

  int fuel = 4 * depth + 10;
  ProverContext sctx(src, tel.var_list(), tel.as_formula(src), depth, fuel);
  ProverContext dctx(dst, tel_img.var_list(), tel_img.as_formula(dst), depth, fuel);

  rep.type_defined = sctx.holds(Atom::defined(inst.source_type))
                         ? Verdict3::Certified
                         : Verdict3::Inconclusive;

  Term fA = apply_morphism(inst.morphism, inst.source_type);
  rep.boundary_match = dctx.holds(Atom::eq(boundary(inst.target_term, dst), fA))
                           ? Verdict3::Certified
                           : Verdict3::Inconclusive;

  rep.candidate_boundary =
      sctx.holds(Atom::eq(boundary(inst.candidate, src), inst.source_type))
          ? Verdict3::Certified
          : Verdict3::Inconclusive;

  Term fa = apply_morphism(inst.morphism, inst.candidate);
  if (inst.strict) {
    rep.image_relation = dctx.holds(Atom::eq(fa, inst.target_term))
                             ? Verdict3::Certified
                             : Verdict3::Inconclusive;
  } else {
    rep.image_relation = validate_homotopy(dst, tel_img, fa, inst.target_term,
                                           inst.homotopy, depth, conv);
  }
  return rep;
}

Cond1Report check_cond1_witness(const TheoryMorphism& f, const Cond1Witness& w,
                                int depth, bool basic_only) {
  Cond1Report rep;
  int fuel = 4 * depth + 10;
  for (const auto& sym : f.target.fun_symbols) {
    if (sym.from_base) continue;  // ty_n/ft_n and friends lift trivially
    if (basic_only && sym.structural) continue;
    auto it = w.entries.find(sym.name);
    if (it == w.entries.end())
      throw MissingWitness("no condition-1 witness for target symbol " + sym.name);
    const Cond1Entry& e = it->second;
    Cond1Report::PerSymbol ps;
    ps.symbol = sym.name;

    std::vector<std::pair<std::string, Sort>> vars;
    for (size_t i = 0; i < sym.arity(); ++i)
      vars.emplace_back("x" + std::to_string(i + 1), sym.arg_sorts[i]);

    // Guard well-formation: each conjunct's terms are defined under the prefix.
    for (size_t i = 0; i < e.guard.atoms.size(); ++i) {
      Formula prefix;
      prefix.atoms.assign(e.guard.atoms.begin(), e.guard.atoms.begin() + i);
      ProverContext pctx(f.source, vars, prefix, depth, fuel);
      Atom c = canonicalize(e.guard.atoms[i]);
      std::vector<Term> terms;
      if (c.kind == Atom::Kind::Eq) terms = {c.lhs, c.rhs};
      else terms = c.args;
      bool ok = true;
      for (const auto& t : terms)
        if (!pctx.holds(Atom::defined(t))) ok = false;
      ps.sequents.emplace_back("guard clause " + std::to_string(i + 1) + " defined",
                               ok ? Verdict3::Certified : Verdict3::Inconclusive);
    }

    // Source: guard |- t def.
    {
      ProverContext sctx(f.source, vars, e.guard, depth, fuel);
      ps.sequents.emplace_back("lift defined",
                               sctx.holds(Atom::defined(e.lift))
                                   ? Verdict3::Certified
                                   : Verdict3::Inconclusive);
    }

    // Target: sigma(xs) def |- f(t) = sigma(xs) /\ f(guard).
    {
      std::vector<Term> xs;
      for (size_t i = 0; i < vars.size(); ++i)
        xs.push_back(Term::var(vars[i].first, vars[i].second));
      Term app = Term::app(sym, xs);
      ProverContext tctx(f.target, vars, Formula::of({Atom::defined(app)}), depth, fuel);
      Term ft = apply_morphism(f, e.lift);
      bool ok = tctx.holds(Atom::eq(ft, app));
      Formula fguard = apply_morphism(f, e.guard);
      for (const auto& a : fguard.atoms)
        if (!tctx.holds(a)) ok = false;
      ps.sequents.emplace_back("target equations",
                               ok ? Verdict3::Certified : Verdict3::Inconclusive);
    }
    rep.symbols.push_back(std::move(ps));
  }
  return rep;
}

TypeLiftProvider default_type_lift_provider(const Theory& source,
                                            const IdConventions& conv) {
  return [&source, conv](const Telescope&, const Term& A,
                         const Term& B) -> std::optional<Term> {
    (void)B;
    if (!is_ty(A.sort())) return std::nullopt;
    const FunSymbol* v0 = source.fun(conv.var0(ty_level(A.sort())));
    if (!v0) return std::nullopt;
    return Term::app(*v0, {A});
  };
}

TypeLiftReport check_type_lifting(const TheoryMorphism& f,
                                  const std::vector<Telescope>& tels,
                                  const TypeLiftProvider& provider, int depth,
                                  const IdConventions& conv) {
  TypeLiftReport rep;
  int fuel = 4 * depth + 10;
  for (const auto& tel : tels) {
    Telescope tel_img = apply_morphism(f, tel);
    ProverContext sctx(f.source, tel.var_list(), tel.as_formula(f.source), depth, fuel);
    ProverContext dctx(f.target, tel_img.var_list(), tel_img.as_formula(f.target),
                       depth, fuel);
    // The candidate's typing judgments sit two constructors above the pair.
    ProverContext sctx2(f.source, tel.var_list(), tel.as_formula(f.source), depth + 2,
                        fuel);
    ProverContext dctx2(f.target, tel_img.var_list(), tel_img.as_formula(f.target),
                        depth + 2, fuel);
    // Candidate types over the telescope: every defined ty-sorted term at a
    // level where the theory carries the context-variable convention.
    std::vector<Term> types;
    for (const auto& members : sctx.equality_classes())
      for (const auto& t : members)
        if (is_ty(t.sort())) types.push_back(t);
    for (size_t i = 0; i < types.size(); ++i)
      for (size_t j = 0; j < types.size(); ++j) {
        if (i == j) continue;
        const Term& A = types[i];
        const Term& B = types[j];
        if (A.sort() != B.sort()) continue;
        int n = ty_level(A.sort());
        const FunSymbol* ty1 = f.source.fun(ty_symbol_name(n + 1));
        const FunSymbol* wk = f.source.fun(conv.wk_ty(n));
        const FunSymbol* v0t = f.target.fun(conv.var0(n));
        if (!ty1 || !wk || !v0t) continue;  // no convention at this level
        rep.pairs_enumerated++;
        if (!sctx.holds(Atom::eq(boundary(A, f.source), boundary(B, f.source))))
          continue;
        Term fA = apply_morphism(f, A);
        Term fB = apply_morphism(f, B);
        if (!dctx.holds(Atom::eq(fA, fB))) continue;
        rep.pairs_checked++;
        auto b = provider(tel, A, B);
        if (!b) {
          rep.failures.push_back({A, B, "provider returned nothing"});
          continue;
        }
        // phi |- (x:A |- b : B), encoded ty(b) = wk(A, B).
        if (!sctx2.holds(Atom::eq(Term::app(*ty1, {*b}), Term::app(*wk, {A, B})))) {
          rep.failures.push_back({A, B, "candidate is not typed A |- b : B"});
          continue;
        }
        Term fb = apply_morphism(f, *b);
        if (!dctx2.holds(Atom::eq(fb, Term::app(*v0t, {fA})))) {
          rep.failures.push_back({A, B, "image is not the context variable"});
          continue;
        }
      }
  }
  return rep;
}

ExtMoritaReport check_ext_morita(const Theory& theory, const std::vector<Sequent>& extra,
                                 const std::vector<Telescope>& tels, int sub_depth,
                                 int depth) {
  ExtMoritaReport rep;
  for (size_t ti = 0; ti < tels.size(); ++ti) {
    const Telescope& tel = tels[ti];
    ProverContext premise_ctx(theory, tel.var_list(), tel.as_formula(theory), depth,
                              4 * depth + 10);
    ProverContext conclusion_ctx(theory, tel.var_list(), tel.as_formula(theory),
                                 depth + 2, 4 * (depth + 2) + 10);
    for (size_t ai = 0; ai < extra.size(); ++ai) {
      const Sequent& ax = extra[ai];
      std::vector<std::vector<Term>> choices;
      bool possible = true;
      for (const auto& [v, srt] : ax.vars) {
        auto terms = enumerate_terms(theory, tel.var_list(), srt, sub_depth);
        if (terms.empty()) {
          possible = false;
          break;
        }
        choices.push_back(std::move(terms));
      }
      if (!possible) continue;
      std::vector<size_t> idx(choices.size(), 0);
      bool done = false;
      while (!done) {
        Substitution rho;
        for (size_t i = 0; i < choices.size(); ++i)
          rho.map.emplace(ax.vars[i].first, choices[i][idx[i]]);
        rep.instances_enumerated++;
        bool premise = true;
        for (const auto& a : ax.lhs.atoms)
          if (!premise_ctx.holds(substitute(a, rho))) {
            premise = false;
            break;
          }
        if (premise) {
          rep.premises_satisfied++;
          bool concl = true;
          for (const auto& a : ax.rhs.atoms)
            if (!conclusion_ctx.holds(substitute(a, rho))) {
              concl = false;
              break;
            }
          if (!concl) {
            std::string shown;
            for (const auto& [v, t] : rho.map) shown += v + ":=" + t.show() + " ";
            rep.failures.push_back({"axiom#" + std::to_string(ai), ti, shown});
          }
        }
        if (choices.empty()) break;
        done = true;
        for (size_t i = 0; i < idx.size(); ++i) {
          if (++idx[i] < choices[i].size()) {
            done = false;
            break;
          }
          idx[i] = 0;
        }
      }
    }
  }
  return rep;
}

ContextAnalysis context_analysis(const Term& t, const Theory& theory) {
  Sort s = t.sort();
  if (s.kind == SortKind::Ctx && s.level == 0)
    throw KernelError("context_analysis: term must have kind tm or ty");
  int ctx_level = s.kind == SortKind::Tm ? s.level : ty_level(s);
  Sort ctx_sort = make_ctx(ctx_level);

  ContextAnalysis out;
  std::function<void(const Term&)> walk = [&](const Term& u) {
    if (u.sort() == ctx_sort && !(u == t)) {
      out.contexts.push_back(u);  // maximal: do not descend further
      return;
    }
    if (u.is_var()) return;
    const FunSymbol* sym = theory.fun(u.head());
    if (!sym) throw MissingContextMetadata("unknown symbol " + u.head());
    for (size_t i = 0; i < u.args().size(); ++i) {
      if (u.args()[i].sort() == ctx_sort) {
        if (!sym->context_position || *sym->context_position != i) {
          // base boundary symbols are self-describing: their argument is the
          // boundary, not a context slot
          if (!sym->from_base)
            throw MissingContextMetadata("symbol " + u.head() +
                                         " has an unclassified context argument");
        }
      }
      walk(u.args()[i]);
    }
    std::string ftname = u.head();
    if (sym->from_base && ftname.rfind("ft", 0) == 0 &&
        ftname.find_first_not_of("0123456789", 2) == std::string::npos)
      out.ft_free = false;
  };
  walk(t);
  // Deduplicate while keeping the first-seen order.
  std::vector<Term> uniq;
  for (const auto& c : out.contexts) {
    bool seen = false;
    for (const auto& u : uniq)
      if (u == c) seen = true;
    if (!seen) uniq.push_back(c);
  }
  out.contexts = std::move(uniq);
  out.is_context_normal = out.ft_free && out.contexts.size() <= 1;
  return out;
}

std::vector<Telescope> enumerate_telescopes(const Theory& theory, size_t max_len,
                                            int term_depth, int validate_depth,
                                            int max_level, size_t cap) {
  std::vector<Telescope> complete;
  std::vector<Telescope> frontier{Telescope{}};
  complete.push_back(Telescope{});
  std::vector<Sort> entry_sorts;
  for (int n = 0; n < max_level; ++n) {
    entry_sorts.push_back(make_tm(n));
    entry_sorts.push_back(make_ty(n));
  }
  for (size_t len = 1; len <= max_len && complete.size() < cap; ++len) {
    std::vector<Telescope> next;
    for (const auto& tel : frontier) {
      for (Sort s : entry_sorts) {
        if (!has_boundary(s)) continue;
        auto candidates =
            enumerate_terms(theory, tel.var_list(), boundary_sort(s), term_depth);
        for (const auto& t : candidates) {
          Telescope ext = tel;
          ext.entries.push_back(
              TelescopeEntry{"v" + std::to_string(len), s, t});
          // Only the new entry needs certification; the prefix is known valid.
          Sequent q;
          q.vars = tel.var_list();
          q.lhs = tel.as_formula(theory);
          q.rhs = Formula::of({Atom::defined(t)});
          if (!prove(theory, q, validate_depth, 2 * validate_depth + 6).certified())
            continue;
          next.push_back(ext);
          complete.push_back(ext);
          if (complete.size() >= cap) break;
        }
        if (complete.size() >= cap) break;
      }
      if (complete.size() >= cap) break;
    }
    frontier = std::move(next);
  }
  return complete;
}

std::vector<Term> enumerate_terms(const Theory& theory,
                                  const std::vector<std::pair<std::string, Sort>>& vars,
                                  Sort sort, int depth, size_t cap) {
  // Leaves have depth 0; round d adds the applications of depth exactly d.
  std::map<Sort, std::vector<Term>> cur;
  for (const auto& [v, s] : vars) cur[s].push_back(Term::var(v, s));
  for (const auto& f : theory.fun_symbols)
    if (f.arity() == 0) cur[f.result_sort].push_back(Term::app(f, {}));
  for (int d = 1; d <= depth; ++d) {
    std::map<Sort, std::vector<Term>> next = cur;
    for (const auto& f : theory.fun_symbols) {
      if (f.arity() == 0) continue;
      std::vector<std::vector<Term>> pools;
      bool ok = true;
      for (Sort as : f.arg_sorts) {
        auto it = cur.find(as);
        if (it == cur.end() || it->second.empty()) {
          ok = false;
          break;
        }
        pools.push_back(it->second);
      }
      if (!ok) continue;
      std::vector<size_t> idx(pools.size(), 0);
      bool done = false;
      while (!done) {
        std::vector<Term> args;
        args.reserve(pools.size());
        int maxd = 0;
        for (size_t i = 0; i < pools.size(); ++i) {
          args.push_back(pools[i][idx[i]]);
          maxd = std::max(maxd, args.back().depth());
        }
        if (maxd == d - 1) {  // exactly-new terms only; shallower exist already
          auto& bucket = next[f.result_sort];
          if (bucket.size() < cap) bucket.push_back(Term::app(f, std::move(args)));
        }
        done = true;
        for (size_t i = 0; i < idx.size(); ++i) {
          if (++idx[i] < pools[i].size()) {
            done = false;
            break;
          }
          idx[i] = 0;
        }
        if (pools.empty()) break;
      }
    }
    cur = std::move(next);
  }
  auto it = cur.find(sort);
  if (it == cur.end()) return {};
  std::vector<Term> out = it->second;
  std::stable_sort(out.begin(), out.end(), [](const Term& a, const Term& b) {
    if (a.depth() != b.depth()) return a.depth() < b.depth();
    return term_cmp(a, b) < 0;
  });
  if (out.size() > cap) out.resize(cap);
  return out;
}

}  // namespace ttk
