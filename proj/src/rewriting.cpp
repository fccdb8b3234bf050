#include "ttk/rewriting.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ttk {

namespace {

void count_vars(const Term& t, std::map<std::string, int>& counts) {
  if (t.is_var()) {
    counts[t.head()]++;
    return;
  }
  for (const auto& a : t.args()) count_vars(a, counts);
}

}  // namespace

TRS validate_trs(std::vector<RewriteRule> rules) {
  TRS out;
  out.left_linear = true;
  for (auto& r : rules) {
    if (r.lhs.is_var())
      throw VariableLhs("rule " + r.name + " has a variable left-hand side");
    if (r.lhs.sort() != r.rhs.sort())
      throw SortMismatch("rule " + r.name + " changes sort");
    auto lv = free_vars(r.lhs);
    for (const auto& [v, s] : free_vars(r.rhs))
      if (!lv.count(v))
        throw EscapingVariable("rule " + r.name + ": variable " + v +
                               " does not occur on the left");
    std::map<std::string, int> counts;
    count_vars(r.lhs, counts);
    for (const auto& [v, n] : counts)
      if (n > 1) out.left_linear = false;
    out.rules.push_back(std::move(r));
  }
  return out;
}

std::vector<RewriteRule> telescope_rules(const Telescope& tel, const Theory& theory) {
  std::vector<RewriteRule> out;
  out.reserve(tel.entries.size());
  for (size_t i = 0; i < tel.entries.size(); ++i) {
    const auto& e = tel.entries[i];
    RewriteRule r;
    r.name = "tel:" + e.var;
    r.lhs = boundary(Term::var(e.var, e.sort), theory);
    r.rhs = e.assigned;
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

Term freeze_vars(const Term& t) {
  if (t.is_var()) return Term::app_raw(t.head(), t.sort(), {});
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(freeze_vars(a));
  return Term::app_raw(t.head(), t.sort(), std::move(args));
}

}  // namespace

TRS rigid_telescope_system(const Telescope& tel, const Theory& theory) {
  std::vector<RewriteRule> rules;
  for (auto& r : telescope_rules(tel, theory)) {
    RewriteRule frozen;
    frozen.name = r.name;
    frozen.lhs = freeze_vars(r.lhs);
    frozen.rhs = freeze_vars(r.rhs);
    rules.push_back(std::move(frozen));
  }
  return validate_trs(std::move(rules));
}

namespace {

void collect_steps(const TRS& trs, const std::vector<RewriteRule>& tel_rules,
                   const Term& whole, const Term& t, Position& pos,
                   std::vector<StepInfo>& out) {
  for (size_t ri = 0; ri < trs.rules.size(); ++ri) {
    auto m = match_term(trs.rules[ri].lhs, t);
    if (!m) continue;
    StepInfo s;
    s.pos = pos;
    s.from_telescope = false;
    s.rule_index = ri;
    s.rule_name = trs.rules[ri].name;
    s.subst = *m;
    s.result = replace_at(whole, pos, substitute(trs.rules[ri].rhs, *m));
    out.push_back(std::move(s));
  }
  for (size_t ti = 0; ti < tel_rules.size(); ++ti) {
    if (t != tel_rules[ti].lhs) continue;  // telescope variables are rigid
    StepInfo s;
    s.pos = pos;
    s.from_telescope = true;
    s.rule_index = ti;
    s.rule_name = tel_rules[ti].name;
    s.result = replace_at(whole, pos, tel_rules[ti].rhs);
    out.push_back(std::move(s));
  }
  if (!t.is_var()) {
    for (size_t i = 0; i < t.args().size(); ++i) {
      pos.push_back(i);
      collect_steps(trs, tel_rules, whole, t.args()[i], pos, out);
      pos.pop_back();
    }
  }
}

}  // namespace

std::vector<StepInfo> step(const TRS& trs, const std::vector<RewriteRule>& tel_rules,
                           const Term& t) {
  std::vector<StepInfo> out;
  Position pos;
  collect_steps(trs, tel_rules, t, t, pos, out);
  std::sort(out.begin(), out.end(), [](const StepInfo& a, const StepInfo& b) {
    if (a.pos != b.pos) return a.pos < b.pos;
    if (a.from_telescope != b.from_telescope) return !a.from_telescope;
    return a.rule_index < b.rule_index;
  });
  return out;
}

std::vector<StepInfo> step(const TRS& trs, const Telescope& tel, const Term& t,
                           const Theory& theory) {
  return step(trs, telescope_rules(tel, theory), t);
}

bool replay(const TRS& trs, const std::vector<RewriteRule>& tel_rules,
            const ReductionTrace& trace) {
  Term cur = trace.start;
  for (const auto& s : trace.steps) {
    auto sub = subterm_at(cur, s.pos);
    if (!sub) return false;
    Term replacement;
    if (s.from_telescope) {
      if (s.rule_index >= tel_rules.size() || *sub != tel_rules[s.rule_index].lhs)
        return false;
      replacement = tel_rules[s.rule_index].rhs;
    } else {
      if (s.rule_index >= trs.rules.size()) return false;
      const RewriteRule& r = trs.rules[s.rule_index];
      if (substitute(r.lhs, s.subst) != *sub) return false;
      replacement = substitute(r.rhs, s.subst);
    }
    cur = replace_at(cur, s.pos, replacement);
    if (cur != s.result) return false;
  }
  return cur == trace.end;
}

namespace {

// Leftmost-innermost redex, if any.
std::optional<StepInfo> first_innermost(const TRS& trs,
                                        const std::vector<RewriteRule>& tel_rules,
                                        const Term& whole, const Term& t,
                                        Position& pos) {
  if (!t.is_var()) {
    for (size_t i = 0; i < t.args().size(); ++i) {
      pos.push_back(i);
      auto r = first_innermost(trs, tel_rules, whole, t.args()[i], pos);
      if (r) {
        pos.pop_back();
        return r;
      }
      pos.pop_back();
    }
  }
  for (size_t ri = 0; ri < trs.rules.size(); ++ri) {
    auto m = match_term(trs.rules[ri].lhs, t);
    if (!m) continue;
    StepInfo s;
    s.pos = pos;
    s.from_telescope = false;
    s.rule_index = ri;
    s.rule_name = trs.rules[ri].name;
    s.subst = *m;
    s.result = replace_at(whole, pos, substitute(trs.rules[ri].rhs, *m));
    return s;
  }
  for (size_t ti = 0; ti < tel_rules.size(); ++ti) {
    if (t != tel_rules[ti].lhs) continue;
    StepInfo s;
    s.pos = pos;
    s.from_telescope = true;
    s.rule_index = ti;
    s.rule_name = tel_rules[ti].name;
    s.result = replace_at(whole, pos, tel_rules[ti].rhs);
    return s;
  }
  return std::nullopt;
}

}  // namespace

ReductionTrace normalize(const TRS& trs, const std::vector<RewriteRule>& tel_rules,
                         const Term& t, int fuel) {
  ReductionTrace trace;
  trace.start = t;
  Term cur = t;
  for (int i = 0; i < fuel; ++i) {
    Position pos;
    auto s = first_innermost(trs, tel_rules, cur, cur, pos);
    if (!s) {
      trace.end = cur;
      return trace;
    }
    cur = s->result;
    trace.steps.push_back(std::move(*s));
  }
  Position pos;
  if (first_innermost(trs, tel_rules, cur, cur, pos)) trace.fuel_exhausted = true;
  trace.end = cur;
  return trace;
}

ReductionTrace normalize(const TRS& trs, const Telescope& tel, const Term& t,
                         const Theory& theory, int fuel) {
  return normalize(trs, telescope_rules(tel, theory), t, fuel);
}

namespace {

struct Visited {
  std::map<Term, std::pair<Term, StepInfo>, TermLess> parent;  // term -> (pred, step)
  std::map<Term, int, TermLess> dist;
};

ReductionTrace trace_back(const Term& start, const Term& end, const Visited& v) {
  std::vector<StepInfo> steps;
  Term cur = end;
  while (cur != start) {
    auto it = v.parent.find(cur);
    if (it == v.parent.end()) break;
    steps.push_back(it->second.second);
    cur = it->second.first;
  }
  std::reverse(steps.begin(), steps.end());
  ReductionTrace t;
  t.start = start;
  t.steps = std::move(steps);
  t.end = end;
  return t;
}

}  // namespace

std::optional<JoinWitness> joinable(const TRS& trs,
                                    const std::vector<RewriteRule>& tel_rules,
                                    const Term& t, const Term& s, int fuel, int width) {
  Visited vt, vs;
  vt.dist[t] = 0;
  vs.dist[s] = 0;
  std::vector<Term> ft{t}, fs{s};
  bool width_hit = false;

  auto meet_candidates = [&]() -> std::optional<JoinWitness> {
    std::optional<std::tuple<int, Term>> best;
    for (const auto& [term, dl] : vt.dist) {
      auto it = vs.dist.find(term);
      if (it == vs.dist.end()) continue;
      int total = dl + it->second;
      if (!best || total < std::get<0>(*best) ||
          (total == std::get<0>(*best) && term_cmp(term, std::get<1>(*best)) < 0))
        best = std::make_tuple(total, term);
    }
    if (!best) return std::nullopt;
    JoinWitness w;
    w.meet = std::get<1>(*best);
    w.left_trace = trace_back(t, w.meet, vt);
    w.right_trace = trace_back(s, w.meet, vs);
    w.width_exhausted = width_hit;
    return w;
  };

  if (auto w = meet_candidates()) return w;

  auto expand = [&](Visited& v, std::vector<Term>& frontier) {
    std::vector<Term> next;
    for (const auto& term : frontier) {
      int d = v.dist[term];
      for (auto& st : step(trs, tel_rules, term)) {
        if (v.dist.count(st.result)) continue;
        v.dist[st.result] = d + 1;
        v.parent.emplace(st.result, std::make_pair(term, st));
        next.push_back(st.result);
      }
    }
    std::sort(next.begin(), next.end(), TermLess{});
    if (static_cast<int>(next.size()) > width) {
      width_hit = true;
      next.resize(width);
    }
    frontier = std::move(next);
  };

  for (int level = 0; level < fuel; ++level) {
    if (ft.empty() && fs.empty()) break;
    expand(vt, ft);
    expand(vs, fs);
    if (auto w = meet_candidates()) return w;
  }
  return std::nullopt;
}

std::optional<JoinWitness> joinable(const TRS& trs, const Telescope& tel, const Term& t,
                                    const Term& s, const Theory& theory, int fuel,
                                    int width) {
  return joinable(trs, telescope_rules(tel, theory), t, s, fuel, width);
}

LocalConfluenceReport check_local_confluence(const TRS& trs, const Telescope& tel,
                                             const std::vector<Term>& seeds,
                                             const Theory& theory, int fuel, int width) {
  LocalConfluenceReport rep;
  auto tel_rules = telescope_rules(tel, theory);
  std::set<Term, TermLess> visited;
  std::vector<Term> frontier;
  for (const auto& s : seeds)
    if (visited.insert(s).second) frontier.push_back(s);
  for (int level = 0; level <= fuel && !frontier.empty(); ++level) {
    std::vector<Term> next;
    for (const auto& u : frontier) {
      rep.states_explored++;
      auto succs = step(trs, tel_rules, u);
      for (size_t i = 0; i < succs.size(); ++i)
        for (size_t j = i + 1; j < succs.size(); ++j) {
          if (succs[i].result == succs[j].result) continue;
          rep.peaks_checked++;
          auto w = joinable(trs, tel_rules, succs[i].result, succs[j].result, fuel, width);
          if (!w) {
            LocalConfluencePeak peak;
            peak.origin = u;
            peak.left = succs[i].result;
            peak.right = succs[j].result;
            peak.inconclusive = true;  // bounded search: candidate, not a proof
            rep.unjoined.push_back(std::move(peak));
          }
        }
      if (level < fuel)
        for (auto& st : succs)
          if (visited.insert(st.result).second) next.push_back(st.result);
    }
    frontier = std::move(next);
  }
  return rep;
}

namespace {

Term rename_apart(const Term& t, const std::string& suffix) {
  if (t.is_var()) return Term::var(t.head() + suffix, t.sort());
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(rename_apart(a, suffix));
  return Term::app_raw(t.head(), t.sort(), std::move(args));
}

void overlap_positions(const Term& inner_lhs, const Term& outer_lhs, Position& pos,
                       const std::string& name_a, const std::string& name_b,
                       std::vector<OverlapEntry>& out) {
  if (!outer_lhs.is_var()) {
    if (unify(inner_lhs, outer_lhs))
      out.push_back(OverlapEntry{name_a, pos, name_b});
    for (size_t i = 0; i < outer_lhs.args().size(); ++i) {
      pos.push_back(i);
      overlap_positions(inner_lhs, outer_lhs.args()[i], pos, name_a, name_b, out);
      pos.pop_back();
    }
  }
}

}  // namespace

std::pair<bool, std::vector<OverlapEntry>> check_orthogonal(const TRS& a, const TRS& b) {
  std::vector<OverlapEntry> overlaps;
  for (const auto& ra : a.rules)
    for (const auto& rb : b.rules) {
      Term la = rename_apart(ra.lhs, "#1");
      Term lb = rename_apart(rb.lhs, "#2");
      Position pos;
      overlap_positions(la, lb, pos, ra.name, rb.name, overlaps);
      pos.clear();
      overlap_positions(lb, la, pos, rb.name, ra.name, overlaps);
    }
  return {overlaps.empty(), overlaps};
}

}  // namespace ttk
