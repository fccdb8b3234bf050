#include "ttk/term.hpp"

#include <algorithm>

#include "ttk/theory.hpp"

namespace ttk {

std::string show_sort(Sort s) {
  if (is_ty(s)) return "ty " + std::to_string(ty_level(s));
  if (s.kind == SortKind::Tm) return "tm " + std::to_string(s.level);
  return "ctx " + std::to_string(s.level);
}

namespace {

size_t combine(size_t seed, size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

size_t node_hash(const Term::Node& n) {
  size_t h = std::hash<std::string>{}(n.head);
  h = combine(h, n.is_var ? 0x5bu : 0xa7u);
  h = combine(h, std::hash<Sort>{}(n.sort));
  for (const auto& a : n.args) h = combine(h, a.hash());
  return h;
}

}  // namespace

Term Term::var(const std::string& name, Sort sort) {
  auto n = std::make_shared<Node>();
  n->is_var = true;
  n->head = name;
  n->sort = sort;
  n->depth = 0;  // leaves (variables and constants) have depth 0
  n->hash = node_hash(*n);
  Term t;
  t.node_ = std::move(n);
  return t;
}

Term Term::app_raw(const std::string& head, Sort sort, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  n->is_var = false;
  n->head = head;
  n->sort = sort;
  n->args = std::move(args);
  if (n->args.empty()) {
    n->depth = 0;
  } else {
    int d = 0;
    for (const auto& a : n->args) d = std::max(d, a.depth());
    n->depth = d + 1;
  }
  n->hash = node_hash(*n);
  Term t;
  t.node_ = std::move(n);
  return t;
}

Term Term::app(const FunSymbol& sym, std::vector<Term> args) {
  if (args.size() != sym.arg_sorts.size())
    throw ArityMismatch("symbol " + sym.name + " expects " +
                        std::to_string(sym.arg_sorts.size()) + " arguments, got " +
                        std::to_string(args.size()));
  for (size_t i = 0; i < args.size(); ++i)
    if (args[i].sort() != sym.arg_sorts[i])
      throw SortMismatch("argument " + std::to_string(i) + " of " + sym.name +
                         " has sort " + show_sort(args[i].sort()) + ", expected " +
                         show_sort(sym.arg_sorts[i]));
  return app_raw(sym.name, sym.result_sort, std::move(args));
}

bool Term::operator==(const Term& o) const {
  if (node_ == o.node_) return true;
  if (!node_ || !o.node_) return false;
  if (node_->hash != o.node_->hash) return false;
  if (node_->is_var != o.node_->is_var || node_->sort != o.node_->sort ||
      node_->head != o.node_->head || node_->args.size() != o.node_->args.size())
    return false;
  for (size_t i = 0; i < node_->args.size(); ++i)
    if (node_->args[i] != o.node_->args[i]) return false;
  return true;
}

std::string Term::show() const {
  if (!node_) return "<null>";
  if (is_var() || args().empty()) {
    std::string s = head();
    if (!is_var() && !args().empty()) s += "()";
    return s;
  }
  std::string s = head() + "(";
  for (size_t i = 0; i < args().size(); ++i) {
    if (i) s += ",";
    s += args()[i].show();
  }
  return s + ")";
}

int term_cmp(const Term& a, const Term& b) {
  if (a.depth() != b.depth()) return a.depth() < b.depth() ? -1 : 1;
  if (a.is_var() != b.is_var()) return a.is_var() ? -1 : 1;
  if (a.head() != b.head()) return a.head() < b.head() ? -1 : 1;
  if (a.sort() != b.sort()) return a.sort() < b.sort() ? -1 : 1;
  if (a.args().size() != b.args().size())
    return a.args().size() < b.args().size() ? -1 : 1;
  for (size_t i = 0; i < a.args().size(); ++i) {
    int c = term_cmp(a.args()[i], b.args()[i]);
    if (c != 0) return c;
  }
  return 0;
}

std::optional<Term> subterm_at(const Term& t, const Position& pos) {
  Term cur = t;
  for (size_t idx : pos) {
    if (cur.is_var() || idx >= cur.args().size()) return std::nullopt;
    cur = cur.args()[idx];
  }
  return cur;
}

Term replace_at(const Term& t, const Position& pos, const Term& replacement) {
  if (pos.empty()) return replacement;
  std::vector<Term> args = t.args();
  Position rest(pos.begin() + 1, pos.end());
  args[pos[0]] = replace_at(args[pos[0]], rest, replacement);
  return Term::app_raw(t.head(), t.sort(), std::move(args));
}

Term substitute(const Term& t, const Substitution& rho) {
  if (t.is_var()) {
    if (const Term* r = rho.find(t.head())) {
      if (r->sort() != t.sort())
        throw SortMismatch("substitution maps " + t.head() + " : " +
                           show_sort(t.sort()) + " to a term of sort " +
                           show_sort(r->sort()));
      return *r;
    }
    return t;
  }
  if (rho.empty() || t.args().empty()) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  bool changed = false;
  for (const auto& a : t.args()) {
    args.push_back(substitute(a, rho));
    if (args.back() != a) changed = true;
  }
  if (!changed) return t;
  return Term::app_raw(t.head(), t.sort(), std::move(args));
}

void free_vars(const Term& t, std::map<std::string, Sort>& out) {
  if (t.is_var()) {
    out.emplace(t.head(), t.sort());
    return;
  }
  for (const auto& a : t.args()) free_vars(a, out);
}

std::map<std::string, Sort> free_vars(const Term& t) {
  std::map<std::string, Sort> out;
  free_vars(t, out);
  return out;
}

namespace {

bool match_into(const Term& pattern, const Term& subject, Substitution& rho) {
  if (pattern.is_var()) {
    if (pattern.sort() != subject.sort()) return false;
    if (const Term* bound = rho.find(pattern.head())) return *bound == subject;
    rho.map.emplace(pattern.head(), subject);
    return true;
  }
  if (subject.is_var() || pattern.head() != subject.head() ||
      pattern.args().size() != subject.args().size())
    return false;
  for (size_t i = 0; i < pattern.args().size(); ++i)
    if (!match_into(pattern.args()[i], subject.args()[i], rho)) return false;
  return true;
}

bool occurs(const std::string& var, const Term& t) {
  if (t.is_var()) return t.head() == var;
  for (const auto& a : t.args())
    if (occurs(var, a)) return true;
  return false;
}

bool unify_into(Term a, Term b, Substitution& rho) {
  a = substitute(a, rho);
  b = substitute(b, rho);
  if (a == b) return true;
  if (a.is_var() || b.is_var()) {
    if (!a.is_var()) std::swap(a, b);
    if (a.sort() != b.sort() || occurs(a.head(), b)) return false;
    // Apply the new binding to the existing range.
    Substitution single;
    single.map.emplace(a.head(), b);
    for (auto& [k, v] : rho.map) v = substitute(v, single);
    rho.map.emplace(a.head(), b);
    return true;
  }
  if (a.head() != b.head() || a.args().size() != b.args().size()) return false;
  for (size_t i = 0; i < a.args().size(); ++i)
    if (!unify_into(a.args()[i], b.args()[i], rho)) return false;
  return true;
}

}  // namespace

std::optional<Substitution> match_term(const Term& pattern, const Term& subject) {
  Substitution rho;
  if (match_into(pattern, subject, rho)) return rho;
  return std::nullopt;
}

std::optional<Substitution> unify(const Term& a, const Term& b) {
  Substitution rho;
  if (unify_into(a, b, rho)) return rho;
  return std::nullopt;
}

}  // namespace ttk
