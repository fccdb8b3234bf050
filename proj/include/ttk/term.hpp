#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ttk/sort.hpp"

namespace ttk {

struct FunSymbol;

// First-order well-sorted terms with named variables. No binders, so
// substitution is capture-free by construction. Nodes are immutable and
// shared; structural equality is term identity.
class Term {
 public:
  struct Node {
    bool is_var = false;
    std::string head;  // variable name or function symbol name
    Sort sort;
    std::vector<Term> args;
    size_t hash = 0;
    int depth = 0;
  };

  Term() = default;

  static Term var(const std::string& name, Sort sort);
  // Checked application: arity and argument sorts must match the signature.
  static Term app(const FunSymbol& sym, std::vector<Term> args);
  // Unchecked application for internal rebuilds (substitution, translation)
  // where sorts are preserved by construction.
  static Term app_raw(const std::string& head, Sort sort, std::vector<Term> args);

  bool valid() const { return node_ != nullptr; }
  bool is_var() const { return node_->is_var; }
  const std::string& head() const { return node_->head; }
  Sort sort() const { return node_->sort; }
  const std::vector<Term>& args() const { return node_->args; }
  size_t hash() const { return node_->hash; }
  int depth() const { return node_->depth; }

  bool operator==(const Term& o) const;
  bool operator!=(const Term& o) const { return !(*this == o); }

  std::string show() const;

 private:
  std::shared_ptr<const Node> node_;
};

// Total order on terms used wherever determinism of reports requires one.
int term_cmp(const Term& a, const Term& b);
struct TermLess {
  bool operator()(const Term& a, const Term& b) const { return term_cmp(a, b) < 0; }
};

// A path into a term: the sequence of argument indices from the root.
using Position = std::vector<size_t>;

std::optional<Term> subterm_at(const Term& t, const Position& pos);
Term replace_at(const Term& t, const Position& pos, const Term& replacement);

// Finite sort-compatible map from variable names to terms.
struct Substitution {
  std::map<std::string, Term> map;

  bool empty() const { return map.empty(); }
  const Term* find(const std::string& name) const {
    auto it = map.find(name);
    return it == map.end() ? nullptr : &it->second;
  }
};

Term substitute(const Term& t, const Substitution& rho);

void free_vars(const Term& t, std::map<std::string, Sort>& out);
std::map<std::string, Sort> free_vars(const Term& t);

// First-order matching: find rho with pattern[rho] == subject. Non-linear
// patterns require syntactically equal bindings.
std::optional<Substitution> match_term(const Term& pattern, const Term& subject);

// Syntactic first-order unification (used by the orthogonality check).
std::optional<Substitution> unify(const Term& a, const Term& b);

}  // namespace ttk

template <>
struct std::hash<ttk::Term> {
  size_t operator()(const ttk::Term& t) const { return t.hash(); }
};
