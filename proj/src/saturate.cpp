#include "ttk/saturate.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <tuple>
#include <unordered_map>

namespace ttk {

namespace {

using Tid = uint32_t;
constexpr Tid kNone = 0xffffffffu;

struct TidVecHash {
  size_t operator()(const std::pair<std::string, std::vector<Tid>>& k) const {
    size_t h = std::hash<std::string>{}(k.first);
    for (Tid t : k.second) h = h * 1000003u + t;
    return h;
  }
};

}  // namespace

struct FactSet::Engine {
  Theory theory;
  int depth_bound = 3;
  int fuel = 10;
  bool fuel_exhausted = false;
  size_t rounds = 0;
  size_t change_counter = 0;
  size_t clock = 0;  // event counter stamping edges, facts, and reasons

  struct TNode {
    std::string head;
    Sort sort;
    std::vector<Tid> args;
    int depth = 0;
    bool overflow = false;  // beyond the depth bound: never carries facts
  };
  std::vector<TNode> nodes;
  std::unordered_map<std::pair<std::string, std::vector<Tid>>, Tid, TidVecHash> interned;

  std::vector<Tid> uf;

  struct Edge {
    enum class Kind : uint8_t { Axiom, Congruence } kind = Kind::Congruence;
    Tid u = kNone, v = kNone;  // concrete endpoints, adjacent in the forest
    size_t axiom = 0, conjunct = 0;
    std::vector<Tid> inst;
    size_t time = 0;
  };
  std::vector<Tid> forest_parent;
  std::vector<Edge> forest_edge;  // edge from tid to forest_parent[tid]

  struct ClassData {
    std::vector<Tid> members;
    std::vector<Tid> parents;  // application tids with an argument in this class
    bool defined = false;
    Tid anchor = kNone;  // member holding a direct definedness derivation
    Tid repr = kNone;    // min (depth, tid) member
  };
  std::vector<ClassData> cls;  // valid at union-find roots

  struct DefReason {
    enum class Kind : uint8_t { None, AxiomDefined, AxiomEq, PredArg, Subterm, Via }
        kind = Kind::None;
    size_t axiom = 0, conjunct = 0;
    std::vector<Tid> inst;
    uint8_t eq_side = 0;   // AxiomEq: 1 = lhs, 2 = rhs
    size_t pred_fact = 0;  // PredArg
    size_t pred_index = 0;
    Tid parent = kNone;  // Subterm
    size_t arg_index = 0;
    Tid via = kNone;  // Via: member with a direct derivation
    size_t time = 0;
  };
  std::vector<DefReason> def_reason;  // per tid; set once, never replaced

  std::unordered_map<std::pair<std::string, std::vector<Tid>>, Tid, TidVecHash> sigs;

  struct PredFact {
    std::string pred;
    std::vector<Tid> args;
    size_t axiom = 0, conjunct = 0;
    std::vector<Tid> inst;
    size_t time = 0;
  };
  std::vector<PredFact> pred_facts;

  std::map<std::string, std::vector<Tid>> by_head;

  mutable std::map<std::pair<Tid, Tid>, DerivationPtr> eq_memo;
  mutable std::map<Tid, DerivationPtr> def_memo;
  mutable std::vector<Term> term_cache;

  Tid find(Tid a) const {
    while (uf[a] != a) a = uf[a];
    return a;
  }

  // ---- term table ----

  Tid intern(const std::string& head, std::vector<Tid> args, Sort sort) {
    auto key = std::make_pair(head, args);
    auto it = interned.find(key);
    if (it != interned.end()) return it->second;
    int d = 0;
    bool over = false;
    for (Tid a : args) {
      d = std::max(d, nodes[a].depth + 1);
      over = over || nodes[a].overflow;
    }
    over = over || d > depth_bound;
    Tid id = static_cast<Tid>(nodes.size());
    nodes.push_back(TNode{head, sort, std::move(args), d, over});
    interned.emplace(std::make_pair(head, nodes[id].args), id);
    uf.push_back(id);
    forest_parent.push_back(kNone);
    forest_edge.push_back({});
    def_reason.push_back({});
    cls.push_back({});
    cls[id].members = {id};
    cls[id].repr = id;
    term_cache.push_back(Term());
    if (!over) {
      by_head[head].push_back(id);
      for (Tid a : nodes[id].args) cls[find(a)].parents.push_back(id);
      std::vector<Tid> canon;
      canon.reserve(nodes[id].args.size());
      for (Tid a : nodes[id].args) canon.push_back(find(a));
      auto skey = std::make_pair(head, std::move(canon));
      auto sit = sigs.find(skey);
      if (sit != sigs.end() && find(sit->second) != id) {
        Edge e;
        e.kind = Edge::Kind::Congruence;
        e.u = id;
        e.v = sit->second;
        e.time = ++clock;
        merge(id, sit->second, std::move(e));
      } else {
        sigs[skey] = id;
      }
    }
    return id;
  }

  Tid intern_term(const Term& t) {
    if (t.is_var())
      throw KernelError("saturation universe is closed; stray variable " + t.head());
    std::vector<Tid> args;
    args.reserve(t.args().size());
    for (const auto& a : t.args()) args.push_back(intern_term(a));
    return intern(t.head(), std::move(args), t.sort());
  }

  Term term_of(Tid t) const {
    if (term_cache[t].valid()) return term_cache[t];
    std::vector<Term> args;
    args.reserve(nodes[t].args.size());
    for (Tid a : nodes[t].args) args.push_back(term_of(a));
    Term r = Term::app_raw(nodes[t].head, nodes[t].sort, std::move(args));
    term_cache[t] = r;
    return r;
  }

  // ---- merging ----

  std::deque<std::pair<std::pair<Tid, Tid>, Edge>> pending;
  bool draining = false;

  void merge(Tid u, Tid v, Edge e) {
    pending.push_back({{u, v}, std::move(e)});
    if (draining) return;
    draining = true;
    while (!pending.empty()) {
      auto [uv, edge] = pending.front();
      pending.pop_front();
      do_merge(uv.first, uv.second, std::move(edge));
    }
    draining = false;
  }

  void reroot(Tid x) {
    Tid cur = x;
    Tid prev = kNone;
    Edge carried;
    while (cur != kNone) {
      Tid next = forest_parent[cur];
      Edge next_edge = forest_edge[cur];
      forest_parent[cur] = prev;
      if (prev != kNone) forest_edge[cur] = carried;
      prev = cur;
      carried = next_edge;
      cur = next;
    }
  }

  void do_merge(Tid u, Tid v, Edge e) {
    Tid ru = find(u), rv = find(v);
    if (ru == rv) return;
    if (nodes[u].overflow || nodes[v].overflow) return;
    change_counter++;
    bool keep_u = cls[ru].members.size() >= cls[rv].members.size();
    Tid keep = keep_u ? ru : rv;
    Tid lose = keep_u ? rv : ru;
    Tid lose_end = find(e.u) == lose ? e.u : e.v;
    Tid keep_end = lose_end == e.u ? e.v : e.u;

    reroot(lose_end);
    forest_parent[lose_end] = keep_end;
    forest_edge[lose_end] = e;

    bool keep_was_defined = cls[keep].defined;
    bool lose_was_defined = cls[lose].defined;
    Tid lose_anchor = cls[lose].anchor;

    std::vector<Tid> keep_members = cls[keep].members;
    std::vector<Tid> lose_members = cls[lose].members;
    std::vector<Tid> lose_parents = cls[lose].parents;

    uf[lose] = keep;
    ClassData& K = cls[keep];
    for (Tid m : lose_members) K.members.push_back(m);
    for (Tid p : lose_parents) K.parents.push_back(p);
    Tid lr = cls[lose].repr;
    if (nodes[lr].depth < nodes[K.repr].depth ||
        (nodes[lr].depth == nodes[K.repr].depth && lr < K.repr))
      K.repr = lr;
    if (!keep_was_defined && lose_was_defined) {
      K.defined = true;
      K.anchor = lose_anchor;
    }
    cls[lose] = ClassData{};

    if (keep_was_defined != lose_was_defined) {
      std::vector<Tid> newly = keep_was_defined ? lose_members : keep_members;
      Tid anchor = K.anchor;
      for (Tid m : newly) {
        if (def_reason[m].kind == DefReason::Kind::None) {
          DefReason r;
          r.kind = DefReason::Kind::Via;
          r.via = anchor;
          def_reason[m] = std::move(r);
        }
        mark_args_defined(m);
      }
    }

    for (Tid p : lose_parents) {
      if (nodes[p].overflow) continue;
      std::vector<Tid> canon;
      canon.reserve(nodes[p].args.size());
      for (Tid a : nodes[p].args) canon.push_back(find(a));
      auto skey = std::make_pair(nodes[p].head, std::move(canon));
      auto sit = sigs.find(skey);
      if (sit != sigs.end()) {
        if (find(sit->second) != find(p)) {
          Edge ce;
          ce.kind = Edge::Kind::Congruence;
          ce.u = p;
          ce.v = sit->second;
          ce.time = ++clock;
          pending.push_back({{p, sit->second}, std::move(ce)});
        }
      } else {
        sigs[skey] = p;
      }
    }
  }

  void mark_args_defined(Tid m) {
    for (size_t i = 0; i < nodes[m].args.size(); ++i) {
      DefReason r;
      r.kind = DefReason::Kind::Subterm;
      r.parent = m;
      r.arg_index = i;
      mark_defined(nodes[m].args[i], std::move(r));
    }
  }

  void mark_defined(Tid t, DefReason reason) {
    if (nodes[t].overflow) return;
    Tid r = find(t);
    if (cls[r].defined) {
      if (def_reason[t].kind == DefReason::Kind::None) {
        DefReason via;
        via.kind = DefReason::Kind::Via;
        via.via = cls[r].anchor;
        def_reason[t] = std::move(via);
        mark_args_defined(t);
      }
      return;
    }
    change_counter++;
    cls[r].defined = true;
    cls[r].anchor = t;
    if (def_reason[t].kind == DefReason::Kind::None) def_reason[t] = std::move(reason);
    std::vector<Tid> members = cls[r].members;
    for (Tid m : members) {
      if (def_reason[m].kind == DefReason::Kind::None) {
        DefReason via;
        via.kind = DefReason::Kind::Via;
        via.via = t;
        def_reason[m] = std::move(via);
      }
      mark_args_defined(m);
    }
  }

  bool class_defined(Tid t) const { return !nodes[t].overflow && cls[find(t)].defined; }

  // ---- axiom instantiation ----

  std::map<Sort, std::vector<Tid>> defined_reprs() const {
    std::map<Sort, std::vector<Tid>> out;
    for (Tid t = 0; t < nodes.size(); ++t) {
      if (find(t) != t || !cls[t].defined) continue;
      out[nodes[cls[t].repr].sort].push_back(cls[t].repr);
    }
    for (auto& [s, v] : out)
      std::sort(v.begin(), v.end(), [&](Tid a, Tid b) {
        if (nodes[a].depth != nodes[b].depth) return nodes[a].depth < nodes[b].depth;
        return a < b;
      });
    return out;
  }

  std::optional<Tid> eval(const Term& pat, const std::map<std::string, Tid>& b) {
    if (pat.is_var()) {
      auto it = b.find(pat.head());
      if (it == b.end()) return std::nullopt;
      return it->second;
    }
    std::vector<Tid> args;
    args.reserve(pat.args().size());
    for (const auto& a : pat.args()) {
      auto r = eval(a, b);
      if (!r) return std::nullopt;
      args.push_back(*r);
    }
    return intern(pat.head(), std::move(args), pat.sort());
  }

  bool fully_bound(const Term& pat, const std::map<std::string, Tid>& b) const {
    if (pat.is_var()) return b.count(pat.head()) != 0;
    for (const auto& a : pat.args())
      if (!fully_bound(a, b)) return false;
    return true;
  }

  void match_class(const Term& pat, Tid cls_root, std::map<std::string, Tid>& b,
                   const std::function<void()>& k) {
    if (pat.is_var()) {
      auto it = b.find(pat.head());
      if (it != b.end()) {
        if (find(it->second) == cls_root) k();
        return;
      }
      Tid repr = cls[cls_root].repr;
      if (repr == kNone || nodes[repr].sort != pat.sort()) return;
      b[pat.head()] = repr;
      k();
      b.erase(pat.head());
      return;
    }
    std::vector<Tid> members = cls[cls_root].members;  // copy: merges may reallocate
    for (Tid m : members) {
      if (nodes[m].head != pat.head() || nodes[m].args.size() != pat.args().size())
        continue;
      match_args(pat, m, 0, b, k);
    }
  }

  void match_args(const Term& pat, Tid subject, size_t i, std::map<std::string, Tid>& b,
                  const std::function<void()>& k) {
    if (i == pat.args().size()) {
      k();
      return;
    }
    Tid arg = nodes[subject].args[i];
    match_class(pat.args()[i], find(arg), b,
                [&] { match_args(pat, subject, i + 1, b, k); });
  }

  void solve_atom(const Atom& atom, std::map<std::string, Tid>& b,
                  const std::function<void()>& k) {
    Atom a = canonicalize(atom);
    if (a.kind == Atom::Kind::Pred) {
      size_t nfacts = pred_facts.size();
      for (size_t fi = 0; fi < nfacts; ++fi) {
        if (pred_facts[fi].pred != a.pred ||
            pred_facts[fi].args.size() != a.args.size())
          continue;
        std::vector<Tid> fargs = pred_facts[fi].args;
        std::function<void(size_t)> go = [&](size_t i) {
          if (i == a.args.size()) {
            k();
            return;
          }
          match_class(a.args[i], find(fargs[i]), b, [&] { go(i + 1); });
        };
        go(0);
      }
      return;
    }
    auto el = eval(a.lhs, b), er = eval(a.rhs, b);
    if (el && er) {
      if (!nodes[*el].overflow && !nodes[*er].overflow && find(*el) == find(*er) &&
          class_defined(*el))
        k();
      return;
    }
    if (el || er) {
      Tid known = el ? *el : *er;
      const Term& pat = el ? a.rhs : a.lhs;
      if (nodes[known].overflow || !class_defined(known)) return;
      match_class(pat, find(known), b, k);
      return;
    }
    const Term& pat = !a.lhs.is_var() ? a.lhs : a.rhs;
    const Term& other = !a.lhs.is_var() ? a.rhs : a.lhs;
    if (pat.is_var()) return;  // both sides unbound variables: not indexable
    auto it = by_head.find(pat.head());
    if (it == by_head.end()) return;
    std::vector<Tid> candidates = it->second;  // copy: matching may intern
    for (Tid u : candidates) {
      if (!class_defined(u)) continue;
      if (nodes[u].args.size() != pat.args().size()) continue;
      match_args(pat, u, 0, b, [&] { match_class(other, find(u), b, k); });
    }
  }

  bool atom_ground_check(const Atom& atom, std::map<std::string, Tid>& b) {
    Atom a = canonicalize(atom);
    if (a.kind == Atom::Kind::Pred) {
      std::vector<Tid> args;
      for (const auto& t : a.args) {
        auto r = eval(t, b);
        if (!r || nodes[*r].overflow) return false;
        args.push_back(*r);
      }
      for (const auto& f : pred_facts) {
        if (f.pred != a.pred || f.args.size() != args.size()) continue;
        bool ok = true;
        for (size_t i = 0; i < args.size(); ++i)
          if (find(f.args[i]) != find(args[i])) ok = false;
        if (ok) return true;
      }
      return false;
    }
    auto el = eval(a.lhs, b), er = eval(a.rhs, b);
    if (!el || !er || nodes[*el].overflow || nodes[*er].overflow) return false;
    return find(*el) == find(*er) && class_defined(*el);
  }

  size_t count_unbound(const Atom& a, const std::map<std::string, Tid>& b) const {
    std::map<std::string, Sort> fv;
    free_vars(a, fv);
    size_t n = 0;
    for (const auto& [v, s] : fv)
      if (!b.count(v)) ++n;
    return n;
  }

  bool atom_indexable(const Atom& atom, const std::map<std::string, Tid>& b) const {
    Atom a = canonicalize(atom);
    if (a.kind == Atom::Kind::Pred) return true;
    if (fully_bound(a.lhs, b) || fully_bound(a.rhs, b)) return true;
    return !a.lhs.is_var() || !a.rhs.is_var();
  }

  void solve_axiom(const NamedAxiom& ax,
                   const std::function<void(const std::vector<Tid>&)>& emit) {
    const Sequent& s = ax.sequent;
    std::map<std::string, Tid> binding;
    std::vector<const Atom*> atoms;
    for (const auto& a : s.lhs.atoms) atoms.push_back(&a);
    auto reprs = defined_reprs();

    std::function<void(std::vector<const Atom*>)> go;
    go = [&](std::vector<const Atom*> rem) {
      for (size_t i = 0; i < rem.size(); ++i) {
        std::map<std::string, Sort> fv;
        free_vars(*rem[i], fv);
        bool bound = true;
        for (const auto& [v, srt] : fv)
          if (!binding.count(v)) bound = false;
        if (bound) {
          if (!atom_ground_check(*rem[i], binding)) return;
          std::vector<const Atom*> next = rem;
          next.erase(next.begin() + i);
          go(std::move(next));
          return;
        }
      }
      size_t best = rem.size(), best_score = SIZE_MAX;
      for (size_t i = 0; i < rem.size(); ++i) {
        if (!atom_indexable(*rem[i], binding)) continue;
        size_t score = count_unbound(*rem[i], binding);
        if (score < best_score) {
          best_score = score;
          best = i;
        }
      }
      if (best < rem.size()) {
        std::vector<const Atom*> next = rem;
        const Atom* chosen = next[best];
        next.erase(next.begin() + best);
        solve_atom(*chosen, binding, [&] { go(next); });
        return;
      }
      std::string var;
      Sort var_sort;
      if (!rem.empty()) {
        std::map<std::string, Sort> fv;
        free_vars(*rem[0], fv);
        for (const auto& [v, srt] : fv)
          if (!binding.count(v)) {
            var = v;
            var_sort = srt;
            break;
          }
      } else {
        for (const auto& [v, srt] : s.vars)
          if (!binding.count(v)) {
            var = v;
            var_sort = srt;
            break;
          }
      }
      if (var.empty()) {
        // Class-level matching can propose bindings whose literal premise
        // instances mention terms beyond the depth bound; the bounded fixed
        // point only admits instances whose premises are representable facts.
        for (const auto& a : s.lhs.atoms)
          if (!atom_ground_check(a, binding)) return;
        std::vector<Tid> inst;
        inst.reserve(s.vars.size());
        for (const auto& [v, srt] : s.vars) {
          auto it = binding.find(v);
          if (it == binding.end()) return;
          inst.push_back(it->second);
        }
        emit(inst);
        return;
      }
      auto it = reprs.find(var_sort);
      if (it == reprs.end()) return;
      for (Tid cand : it->second) {
        binding[var] = cand;
        go(rem);
        binding.erase(var);
      }
    };
    go(std::move(atoms));
  }

  void apply_instance(size_t ax_index, const std::vector<Tid>& inst) {
    const Sequent& s = theory.axioms[ax_index].sequent;
    for (Tid t : inst)
      if (!class_defined(t)) return;
    std::map<std::string, Tid> b;
    for (size_t i = 0; i < s.vars.size(); ++i) b[s.vars[i].first] = inst[i];
    for (size_t j = 0; j < s.rhs.atoms.size(); ++j) {
      Atom c = canonicalize(s.rhs.atoms[j]);
      if (c.kind == Atom::Kind::Pred) {
        std::vector<Tid> args;
        bool ok = true;
        for (const auto& t : c.args) {
          auto r = eval(t, b);
          if (!r || nodes[*r].overflow) {
            ok = false;
            break;
          }
          args.push_back(*r);
        }
        if (!ok) continue;
        bool present = false;
        for (const auto& f : pred_facts) {
          if (f.pred != c.pred || f.args.size() != args.size()) continue;
          bool same = true;
          for (size_t i = 0; i < args.size(); ++i)
            if (find(f.args[i]) != find(args[i])) same = false;
          if (same) {
            present = true;
            break;
          }
        }
        if (present) continue;
        PredFact f;
        f.pred = c.pred;
        f.args = args;
        f.axiom = ax_index;
        f.conjunct = j;
        f.inst = inst;
        f.time = ++clock;
        pred_facts.push_back(std::move(f));
        change_counter++;
        for (size_t i = 0; i < args.size(); ++i) {
          DefReason r;
          r.kind = DefReason::Kind::PredArg;
          r.pred_fact = pred_facts.size() - 1;
          r.pred_index = i;
          r.time = ++clock;
          mark_defined(args[i], std::move(r));
        }
        continue;
      }
      auto el = eval(c.lhs, b), er = eval(c.rhs, b);
      if (!el || !er || nodes[*el].overflow || nodes[*er].overflow) continue;
      if (*el != *er && find(*el) != find(*er)) {
        Edge e;
        e.kind = Edge::Kind::Axiom;
        e.u = *el;
        e.v = *er;
        e.axiom = ax_index;
        e.conjunct = j;
        e.inst = inst;
        e.time = ++clock;
        merge(*el, *er, std::move(e));
      }
      DefReason r1;
      r1.kind = *el == *er ? DefReason::Kind::AxiomDefined : DefReason::Kind::AxiomEq;
      r1.axiom = ax_index;
      r1.conjunct = j;
      r1.inst = inst;
      r1.eq_side = 1;
      r1.time = ++clock;
      mark_defined(*el, std::move(r1));
      if (*el != *er) {
        DefReason r2;
        r2.kind = DefReason::Kind::AxiomEq;
        r2.axiom = ax_index;
        r2.conjunct = j;
        r2.inst = inst;
        r2.eq_side = 2;
        r2.time = ++clock;
        mark_defined(*er, std::move(r2));
      }
    }
  }

  void run() {
    for (int round = 0; round < fuel; ++round) {
      rounds = static_cast<size_t>(round) + 1;
      size_t before = change_counter;
      step_all_axioms();
      if (change_counter == before) return;
    }
    // Probe whether the fixed point landed exactly on the fuel boundary.
    size_t before = change_counter;
    step_all_axioms();
    fuel_exhausted = change_counter != before;
  }

  void step_all_axioms() {
    for (size_t i = 0; i < theory.axioms.size(); ++i) {
      std::vector<std::vector<Tid>> found;
      solve_axiom(theory.axioms[i],
                  [&](const std::vector<Tid>& inst) { found.push_back(inst); });
      for (const auto& inst : found) apply_instance(i, inst);
    }
  }

  // ---- explanation ----
  // All derivations are closed: empty variable context, T left-hand side.
  // Congruence edges are always explained from a side whose definedness
  // derivation is already in hand, which keeps the recursion well-founded.

  DerivationPtr mk(Rule rule, Atom concl) const {
    auto d = std::make_shared<DerivationTree>();
    d->rule = rule;
    d->conclusion.lhs = Formula::top();
    d->conclusion.rhs = Formula::of({std::move(concl)});
    return d;
  }

  // Explanations replay chronologically: an axiom instance applied at time T
  // only appeals to facts, merges, and definedness established strictly
  // before T, which keeps the mutual recursion well-founded.
  DerivationPtr explain_na(size_t ax, size_t conjunct, const std::vector<Tid>& inst,
                           size_t bound) const {
    const Sequent& s = theory.axioms[ax].sequent;
    Substitution rho;
    for (size_t i = 0; i < s.vars.size(); ++i)
      rho.map.emplace(s.vars[i].first, term_of(inst[i]));
    auto d = mk(Rule::Na, substitute(s.rhs.atoms[conjunct], rho));
    d->axiom_name = theory.axioms[ax].name;
    d->conjunct = conjunct;
    for (Tid t : inst) d->instantiation.push_back(term_of(t));
    for (Tid t : inst) d->premises.push_back(explain_defined(t));
    for (const auto& a : s.lhs.atoms)
      d->premises.push_back(explain_atom_exact(substitute(a, rho), bound));
    return d;
  }

  DerivationPtr explain_atom_exact(const Atom& atom, size_t bound) const {
    Atom a = canonicalize(atom);
    Engine* self = const_cast<Engine*>(this);
    if (a.kind == Atom::Kind::Pred) {
      std::vector<Tid> args;
      for (const auto& t : a.args) args.push_back(self->intern_term(t));
      return explain_pred(a.pred, args, bound);
    }
    Tid l = self->intern_term(a.lhs);
    Tid r = self->intern_term(a.rhs);
    if (l == r) return explain_defined(l);
    return explain_eq(l, r);
  }

  // Largest edge time on the forest path, or SIZE_MAX when disconnected.
  size_t path_max_time(Tid a, Tid b) const {
    if (a == b) return 0;
    if (find(a) != find(b)) return SIZE_MAX;
    size_t worst = 0;
    for (auto& [from, to, e] : forest_path(a, b)) worst = std::max(worst, e.time);
    return worst;
  }

  DerivationPtr explain_pred(const std::string& pred, const std::vector<Tid>& args,
                             size_t bound = SIZE_MAX) const {
    for (const auto& f : pred_facts) {
      if (f.time >= bound) continue;
      if (f.pred != pred || f.args.size() != args.size()) continue;
      bool usable = true;
      for (size_t i = 0; i < args.size(); ++i)
        if (path_max_time(f.args[i], args[i]) >= bound) usable = false;
      if (!usable) continue;
      DerivationPtr d = explain_na(f.axiom, f.conjunct, f.inst, f.time);
      std::vector<Term> cur;
      for (Tid t : f.args) cur.push_back(term_of(t));
      for (size_t i = 0; i < args.size(); ++i) {
        if (f.args[i] == args[i]) continue;
        DerivationPtr eq = explain_eq(f.args[i], args[i]);
        std::vector<Term> tmpl_args = cur;
        tmpl_args[i] = Term::var("@hole", nodes[args[i]].sort);
        cur[i] = term_of(args[i]);
        auto step = mk(Rule::Nl, Atom::predicate(pred, cur));
        step->nl_template = Atom::predicate(pred, tmpl_args);
        step->nl_var = "@hole";
        step->premises = {eq, d};
        d = step;
      }
      return d;
    }
    throw KernelError("explain_pred: no fact usable at this time bound");
  }

  // Path a -> b as (from, to, edge) triples.
  std::vector<std::tuple<Tid, Tid, Edge>> forest_path(Tid a, Tid b) const {
    std::vector<Tid> a_anc;
    for (Tid x = a; x != kNone; x = forest_parent[x]) a_anc.push_back(x);
    std::map<Tid, size_t> pos;
    for (size_t i = 0; i < a_anc.size(); ++i) pos[a_anc[i]] = i;
    std::vector<Tid> b_chain;
    Tid common = kNone;
    for (Tid x = b; x != kNone; x = forest_parent[x]) {
      if (pos.count(x)) {
        common = x;
        break;
      }
      b_chain.push_back(x);
    }
    if (common == kNone) throw KernelError("explain: no forest path");
    std::vector<std::tuple<Tid, Tid, Edge>> path;
    for (size_t i = 0; i < pos[common]; ++i)
      path.push_back({a_anc[i], forest_parent[a_anc[i]], forest_edge[a_anc[i]]});
    for (size_t i = b_chain.size(); i-- > 0;)
      path.push_back({forest_parent[b_chain[i]], b_chain[i], forest_edge[b_chain[i]]});
    return path;
  }

  // Eq(term(x), term(y)) for one forest edge, given Defined(x).
  DerivationPtr edge_eq(Tid x, Tid y, const Edge& e, const DerivationPtr& defined_x) const {
    if (e.kind == Edge::Kind::Axiom) {
      DerivationPtr d = explain_na(e.axiom, e.conjunct, e.inst, e.time);
      if (e.u == x) return d;
      auto s = mk(Rule::Ns, Atom::eq(term_of(x), term_of(y)));
      s->premises = {d};
      return s;
    }
    // Congruence: x and y are applications with argwise-equal classes.
    std::vector<Term> cur;
    for (Tid t : nodes[x].args) cur.push_back(term_of(t));
    Term lhs_term = term_of(x);
    DerivationPtr acc = defined_x;
    for (size_t i = 0; i < nodes[x].args.size(); ++i) {
      Tid ai = nodes[x].args[i];
      Tid bi = nodes[y].args[i];
      if (ai == bi) continue;
      DerivationPtr eq = explain_eq(ai, bi);
      std::vector<Term> tmpl = cur;
      tmpl[i] = Term::var("@hole", nodes[bi].sort);
      cur[i] = term_of(bi);
      Term rhs_now = Term::app_raw(nodes[x].head, nodes[x].sort, std::vector<Term>(cur));
      auto step = mk(Rule::Nl, Atom::eq(lhs_term, rhs_now));
      step->nl_template =
          Atom::eq(lhs_term, Term::app_raw(nodes[x].head, nodes[x].sort, tmpl));
      step->nl_var = "@hole";
      step->premises = {eq, acc};
      acc = step;
    }
    return acc;
  }

  // Walks the forest from `start` (whose Defined derivation is supplied) to
  // `target`, returning Eq(start, target); also yields Defined(target).
  std::pair<DerivationPtr, DerivationPtr> walk(Tid start, Tid target,
                                               DerivationPtr defined_start) const {
    if (start == target) return {nullptr, defined_start};
    auto path = forest_path(start, target);
    DerivationPtr acc;                      // Eq(start, cur)
    DerivationPtr def_cur = defined_start;  // Defined(cur)
    Tid cur = start;
    for (auto& [from, to, e] : path) {
      if (from != cur) throw KernelError("explain: path mismatch");
      DerivationPtr step = edge_eq(from, to, e, def_cur);
      if (!acc) {
        acc = step;
      } else {
        auto t = mk(Rule::Nl, Atom::eq(term_of(start), term_of(to)));
        t->nl_template = Atom::eq(term_of(start), Term::var("@hole", nodes[to].sort));
        t->nl_var = "@hole";
        t->premises = {step, acc};
        acc = t;
      }
      auto dn = mk(Rule::Ne2, Atom::defined(term_of(to)));
      dn->premises = {acc};
      def_cur = dn;
      cur = to;
    }
    return {acc, def_cur};
  }

  DerivationPtr explain_eq(Tid a, Tid b) const {
    if (a == b) return explain_defined(a);
    auto key = std::make_pair(a, b);
    auto mit = eq_memo.find(key);
    if (mit != eq_memo.end()) return mit->second;
    if (find(a) != find(b))
      throw KernelError("explain_eq: not equal: " + term_of(a).show() + " vs " +
                        term_of(b).show());
    auto [eq, def] = walk(a, b, explain_defined(a));
    eq_memo[key] = eq;
    return eq;
  }

  DerivationPtr explain_defined(Tid t) const {
    auto mit = def_memo.find(t);
    if (mit != def_memo.end()) return mit->second;
    if (!class_defined(t)) throw KernelError("explain_defined: not defined");
    const DefReason& r = def_reason[t];
    DerivationPtr d;
    switch (r.kind) {
      case DefReason::Kind::AxiomDefined:
        d = explain_na(r.axiom, r.conjunct, r.inst, r.time);
        break;
      case DefReason::Kind::AxiomEq: {
        DerivationPtr eq = explain_na(r.axiom, r.conjunct, r.inst, r.time);
        d = mk(r.eq_side == 1 ? Rule::Ne1 : Rule::Ne2, Atom::defined(term_of(t)));
        d->premises = {eq};
        break;
      }
      case DefReason::Kind::PredArg: {
        const PredFact& f = pred_facts[r.pred_fact];
        DerivationPtr p = explain_na(f.axiom, f.conjunct, f.inst, f.time);
        d = mk(Rule::Np, Atom::defined(term_of(t)));
        d->index = r.pred_index;
        d->premises = {p};
        break;
      }
      case DefReason::Kind::Subterm: {
        DerivationPtr p = explain_defined(r.parent);
        d = mk(Rule::Nf, Atom::defined(term_of(t)));
        d->index = r.arg_index;
        d->premises = {p};
        break;
      }
      case DefReason::Kind::Via: {
        auto [eq, def] = walk(r.via, t, explain_defined(r.via));
        d = def;
        break;
      }
      case DefReason::Kind::None:
        throw KernelError("explain_defined: missing reason");
    }
    def_memo[t] = d;
    return d;
  }
};

// ---- FactSet facade ----

int FactSet::depth_bound() const { return engine_ ? engine_->depth_bound : 0; }
bool FactSet::fuel_exhausted() const { return engine_ && engine_->fuel_exhausted; }
size_t FactSet::rounds_used() const { return engine_ ? engine_->rounds : 0; }

size_t FactSet::fact_count() const {
  if (!engine_) return 0;
  size_t n = engine_->pred_facts.size();
  for (Tid t = 0; t < engine_->nodes.size(); ++t)
    if (engine_->find(t) == t && engine_->cls[t].defined)
      n += engine_->cls[t].members.size();
  return n;
}

bool FactSet::contains(const Atom& closed_atom) const {
  if (!engine_) return false;
  Atom a = canonicalize(closed_atom);
  if (a.kind == Atom::Kind::Pred) {
    std::vector<Tid> args;
    for (const auto& t : a.args) {
      Tid id = engine_->intern_term(t);
      if (engine_->nodes[id].overflow) return false;
      args.push_back(id);
    }
    for (const auto& f : engine_->pred_facts) {
      if (f.pred != a.pred || f.args.size() != args.size()) continue;
      bool same = true;
      for (size_t i = 0; i < args.size(); ++i)
        if (engine_->find(f.args[i]) != engine_->find(args[i])) same = false;
      if (same) return true;
    }
    return false;
  }
  Tid l = engine_->intern_term(a.lhs);
  Tid r = engine_->intern_term(a.rhs);
  if (engine_->nodes[l].overflow || engine_->nodes[r].overflow) return false;
  return engine_->find(l) == engine_->find(r) && engine_->class_defined(l);
}

bool FactSet::is_defined(const Term& t) const { return contains(Atom::defined(t)); }

bool FactSet::equal(const Term& a, const Term& b) const {
  return contains(Atom::eq(a, b));
}

std::vector<Term> FactSet::defined_representatives() const {
  std::vector<Term> out;
  if (!engine_) return out;
  std::vector<uint32_t> roots;
  for (uint32_t t = 0; t < engine_->nodes.size(); ++t)
    if (engine_->find(t) == t && engine_->cls[t].defined)
      roots.push_back(engine_->cls[t].repr);
  std::sort(roots.begin(), roots.end(), [&](uint32_t a, uint32_t b) {
    if (engine_->nodes[a].depth != engine_->nodes[b].depth)
      return engine_->nodes[a].depth < engine_->nodes[b].depth;
    return a < b;
  });
  out.reserve(roots.size());
  for (uint32_t t : roots) out.push_back(engine_->term_of(t));
  return out;
}

std::vector<Term> FactSet::defined_terms() const {
  std::vector<Term> out;
  if (!engine_) return out;
  for (uint32_t t = 0; t < engine_->nodes.size(); ++t)
    if (!engine_->nodes[t].overflow && engine_->class_defined(t))
      out.push_back(engine_->term_of(t));
  return out;
}

std::vector<Term> FactSet::class_members(const Term& t) const {
  std::vector<Term> out;
  if (!engine_) return out;
  uint32_t id = engine_->intern_term(t);
  if (engine_->nodes[id].overflow) return out;
  for (uint32_t m : engine_->cls[engine_->find(id)].members)
    if (!engine_->nodes[m].overflow) out.push_back(engine_->term_of(m));
  return out;
}

std::optional<DerivationPtr> FactSet::explain(const Atom& closed_atom) const {
  if (!contains(closed_atom)) return std::nullopt;
  Atom a = canonicalize(closed_atom);
  if (a.kind == Atom::Kind::Pred) {
    std::vector<uint32_t> args;
    for (const auto& t : a.args) args.push_back(engine_->intern_term(t));
    return engine_->explain_pred(a.pred, args);
  }
  uint32_t l = engine_->intern_term(a.lhs);
  uint32_t r = engine_->intern_term(a.rhs);
  if (l == r) return engine_->explain_defined(l);
  return engine_->explain_eq(l, r);
}

FactSet saturate(const Theory& theory, int depth, int fuel) {
  FactSet fs;
  fs.engine_ = std::make_shared<FactSet::Engine>();
  fs.engine_->theory = theory;
  fs.engine_->depth_bound = depth;
  fs.engine_->fuel = fuel;
  fs.engine_->run();
  return fs;
}

// ---- freshen / prove ----

FreshenResult freshen(const Theory& theory, const Sequent& s) {
  FreshenResult out;
  out.theory = theory;
  for (const auto& [v, sort] : s.vars) {
    std::string name = "c_" + v;
    while (out.theory.fun(name) || out.theory.pred(name)) name += "_";
    FunSymbol c;
    c.name = name;
    c.result_sort = sort;
    out.theory.add_fun(c);
    out.var_to_const.map.emplace(v, Term::app_raw(name, sort, {}));
    out.const_to_var.emplace(name, v);
    std::string ax_name = "fresh_" + v;
    while (out.theory.axiom(ax_name)) ax_name += "_";
    Sequent ax;
    ax.rhs = Formula::of({Atom::defined(Term::app_raw(name, sort, {}))});
    out.theory.add_axiom(ax_name, std::move(ax));
    out.fresh_axiom_var.emplace(ax_name, v);
  }
  for (size_t i = 0; i < s.lhs.atoms.size(); ++i) {
    std::string ax_name = "hyp_" + std::to_string(i);
    while (out.theory.axiom(ax_name)) ax_name += "_";
    Sequent ax;
    ax.rhs = Formula::of({substitute(s.lhs.atoms[i], out.var_to_const)});
    out.theory.add_axiom(ax_name, std::move(ax));
    out.hyp_axiom_conjunct.emplace(ax_name, i);
  }
  out.goal = substitute(s.rhs, out.var_to_const);
  return out;
}

namespace {

Term unfreshen_term(const Term& t, const FreshenResult& fr) {
  if (t.is_var()) return t;
  if (t.args().empty()) {
    auto it = fr.const_to_var.find(t.head());
    if (it != fr.const_to_var.end()) return Term::var(it->second, t.sort());
    return t;
  }
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(unfreshen_term(a, fr));
  return Term::app_raw(t.head(), t.sort(), std::move(args));
}

Atom unfreshen_atom(const Atom& a, const FreshenResult& fr) {
  switch (a.kind) {
    case Atom::Kind::Eq:
      return Atom::eq(unfreshen_term(a.lhs, fr), unfreshen_term(a.rhs, fr));
    case Atom::Kind::Defined: return Atom::defined(unfreshen_term(a.lhs, fr));
    case Atom::Kind::Pred: {
      std::vector<Term> args;
      for (const auto& t : a.args) args.push_back(unfreshen_term(t, fr));
      return Atom::predicate(a.pred, std::move(args));
    }
  }
  return a;
}

}  // namespace

namespace {

DerivationPtr unfreshen_memo(
    const DerivationPtr& tree, const FreshenResult& fr,
    const std::vector<std::pair<std::string, Sort>>& vars, const Formula& lhs,
    std::map<const DerivationTree*, DerivationPtr>& memo);

}  // namespace

DerivationPtr unfreshen(const DerivationPtr& tree, const FreshenResult& fr,
                        const std::vector<std::pair<std::string, Sort>>& vars,
                        const Formula& lhs) {
  std::map<const DerivationTree*, DerivationPtr> memo;
  return unfreshen_memo(tree, fr, vars, lhs, memo);
}

namespace {

DerivationPtr unfreshen_memo(
    const DerivationPtr& tree, const FreshenResult& fr,
    const std::vector<std::pair<std::string, Sort>>& vars, const Formula& lhs,
    std::map<const DerivationTree*, DerivationPtr>& memo) {
  auto hit = memo.find(tree.get());
  if (hit != memo.end()) return hit->second;
  auto d = std::make_shared<DerivationTree>();
  d->conclusion.vars = vars;
  d->conclusion.lhs = lhs;
  std::vector<Atom> rhs;
  for (const auto& a : tree->conclusion.rhs.atoms) rhs.push_back(unfreshen_atom(a, fr));
  d->conclusion.rhs = Formula::of(std::move(rhs));

  if (tree->rule == Rule::Na) {
    auto h = fr.hyp_axiom_conjunct.find(tree->axiom_name);
    if (h != fr.hyp_axiom_conjunct.end()) {
      d->rule = Rule::Nh;
      d->index = h->second;
      memo[tree.get()] = d;
      return d;
    }
    auto fit = fr.fresh_axiom_var.find(tree->axiom_name);
    if (fit != fr.fresh_axiom_var.end()) {
      d->rule = Rule::Nv;
      memo[tree.get()] = d;
      return d;
    }
  }
  d->rule = tree->rule;
  d->index = tree->index;
  d->nl_var = tree->nl_var;
  if (tree->rule == Rule::Nl) d->nl_template = unfreshen_atom(tree->nl_template, fr);
  d->axiom_name = tree->axiom_name;
  d->conjunct = tree->conjunct;
  for (const auto& t : tree->instantiation)
    d->instantiation.push_back(unfreshen_term(t, fr));
  for (const auto& p : tree->premises)
    d->premises.push_back(unfreshen_memo(p, fr, vars, lhs, memo));
  memo[tree.get()] = d;
  return d;
}

}  // namespace

ProverContext::ProverContext(const Theory& theory,
                             std::vector<std::pair<std::string, Sort>> vars,
                             Formula lhs, int depth, int fuel)
    : theory_(theory), vars_(std::move(vars)), lhs_(std::move(lhs)), depth_(depth),
      fuel_(fuel) {
  Sequent probe;
  probe.vars = vars_;
  probe.lhs = lhs_;
  probe.rhs = Formula::top();
  fr_ = freshen(theory_, probe);
  facts_ = saturate(fr_.theory, depth_, fuel_);
}

Term ProverContext::to_const(const Term& t) const {
  return substitute(t, fr_.var_to_const);
}

Term ProverContext::to_var(const Term& t) const { return unfreshen_term(t, fr_); }

Atom ProverContext::to_const(const Atom& a) const {
  return substitute(a, fr_.var_to_const);
}

bool ProverContext::holds(const Atom& atom) const {
  return facts_.contains(to_const(atom));
}

bool ProverContext::holds_all(const Formula& f) const {
  for (const auto& a : f.atoms)
    if (!holds(a)) return false;
  return true;
}

std::optional<DerivationPtr> ProverContext::derive(const Atom& atom) const {
  auto closed = facts_.explain(to_const(atom));
  if (!closed) return std::nullopt;
  return unfreshen(*closed, fr_, vars_, lhs_);
}

std::vector<Term> ProverContext::defined_terms() const {
  std::vector<Term> out;
  for (const auto& t : facts_.defined_representatives()) out.push_back(to_var(t));
  return out;
}

std::vector<std::vector<Term>> ProverContext::equality_classes() const {
  std::vector<std::vector<Term>> out;
  for (const auto& repr : facts_.defined_representatives()) {
    std::vector<Term> members;
    for (const auto& m : facts_.class_members(repr)) members.push_back(to_var(m));
    std::sort(members.begin(), members.end(), TermLess{});
    out.push_back(std::move(members));
  }
  return out;
}

ProveResult prove(const Theory& theory, const Sequent& s, int depth, int fuel) {
  std::string why;
  if (!well_sorted_over(s, theory, &why))
    throw SortMismatch("prove: ill-sorted sequent: " + why);
  ProveResult out;
  out.depth = depth;
  out.fuel = fuel;
  ProverContext ctx(theory, s.vars, s.lhs, depth, fuel);
  std::vector<DerivationPtr> trees;
  for (const auto& component : split_sequent(s)) {
    auto d = ctx.derive(component.rhs.atoms[0]);
    if (!d) return out;  // inconclusive at this bound
    trees.push_back(*d);
  }
  out.verdict = ProveResult::Verdict::Certified;
  out.trees = std::move(trees);
  return out;
}

}  // namespace ttk
