#include "ttk/formula.hpp"

#include <algorithm>

namespace ttk {

Atom Atom::eq(Term a, Term b) {
  Atom r;
  r.kind = Kind::Eq;
  r.lhs = std::move(a);
  r.rhs = std::move(b);
  return r;
}

Atom Atom::defined(Term t) {
  Atom r;
  r.kind = Kind::Defined;
  r.lhs = std::move(t);
  return r;
}

Atom Atom::predicate(std::string name, std::vector<Term> args) {
  Atom r;
  r.kind = Kind::Pred;
  r.pred = std::move(name);
  r.args = std::move(args);
  return r;
}

bool Atom::operator==(const Atom& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case Kind::Eq: return lhs == o.lhs && rhs == o.rhs;
    case Kind::Defined: return lhs == o.lhs;
    case Kind::Pred: return pred == o.pred && args == o.args;
  }
  return false;
}

std::string Atom::show() const {
  switch (kind) {
    case Kind::Eq: return lhs.show() + " = " + rhs.show();
    case Kind::Defined: return lhs.show() + " def";
    case Kind::Pred: {
      std::string s = pred + "(";
      for (size_t i = 0; i < args.size(); ++i) {
        if (i) s += ",";
        s += args[i].show();
      }
      return s + ")";
    }
  }
  return "?";
}

Atom canonicalize(const Atom& a) {
  if (a.kind == Atom::Kind::Defined) return Atom::eq(a.lhs, a.lhs);
  return a;
}

bool atoms_equivalent(const Atom& a, const Atom& b) {
  return canonicalize(a) == canonicalize(b);
}

Atom substitute(const Atom& a, const Substitution& rho) {
  switch (a.kind) {
    case Atom::Kind::Eq: return Atom::eq(substitute(a.lhs, rho), substitute(a.rhs, rho));
    case Atom::Kind::Defined: return Atom::defined(substitute(a.lhs, rho));
    case Atom::Kind::Pred: {
      std::vector<Term> args;
      args.reserve(a.args.size());
      for (const auto& t : a.args) args.push_back(substitute(t, rho));
      return Atom::predicate(a.pred, std::move(args));
    }
  }
  return a;
}

void free_vars(const Atom& a, std::map<std::string, Sort>& out) {
  switch (a.kind) {
    case Atom::Kind::Eq:
      free_vars(a.lhs, out);
      free_vars(a.rhs, out);
      break;
    case Atom::Kind::Defined: free_vars(a.lhs, out); break;
    case Atom::Kind::Pred:
      for (const auto& t : a.args) free_vars(t, out);
      break;
  }
}

std::string Formula::show() const {
  if (atoms.empty()) return "true";
  std::string s;
  for (size_t i = 0; i < atoms.size(); ++i) {
    if (i) s += " /\\ ";
    s += atoms[i].show();
  }
  return s;
}

Formula substitute(const Formula& f, const Substitution& rho) {
  Formula out;
  out.atoms.reserve(f.atoms.size());
  for (const auto& a : f.atoms) out.atoms.push_back(substitute(a, rho));
  return out;
}

void free_vars(const Formula& f, std::map<std::string, Sort>& out) {
  for (const auto& a : f.atoms) free_vars(a, out);
}

bool formulas_equivalent(const Formula& a, const Formula& b) {
  auto key = [](const Formula& f) {
    std::vector<std::string> ks;
    ks.reserve(f.atoms.size());
    for (const auto& at : f.atoms) {
      Atom c = canonicalize(at);
      // Normalize equation orientation so the comparison is symmetric.
      if (c.kind == Atom::Kind::Eq && term_cmp(c.rhs, c.lhs) < 0)
        c = Atom::eq(c.rhs, c.lhs);
      ks.push_back(c.show());
    }
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    return ks;
  };
  return key(a) == key(b);
}

}  // namespace ttk
