#pragma once

#include <functional>

#include "ttk/morphism.hpp"
#include "ttk/saturate.hpp"
#include "ttk/telescope.hpp"
#include "ttk/verdict.hpp"

namespace ttk {

struct TelescopeReport {
  struct Entry {
    std::string var;
    Verdict3 verdict = Verdict3::Inconclusive;
    std::string note;
  };
  std::vector<Entry> entries;
  bool ok() const {
    for (const auto& e : entries)
      if (e.verdict != Verdict3::Certified) return false;
    return true;
  }
};

// Scoping/sort checks plus a bounded-prover certificate for each
// phi_{<i} |- t_i def clause.
TelescopeReport validate_telescope(const Theory& theory, const Telescope& tel,
                                   int depth);

Telescope apply_morphism(const TheoryMorphism& f, const Telescope& tel);

// Names of the identity-type machinery a theory is expected to follow.
// Level-indexed families: Id, Id1, ...; refl, refl1, ...; the explicit
// substitution calculus lives at level 0..N-1.
struct IdConventions {
  std::string id(int level) const { return level == 0 ? "Id" : "Id" + std::to_string(level); }
  std::string refl(int level) const {
    return level == 0 ? "refl" : "refl" + std::to_string(level);
  }
  std::string wk_ty(int level) const { return "wk_ty" + std::to_string(level); }
  std::string wk_tm(int level) const { return "wk_tm" + std::to_string(level); }
  std::string var0(int level) const { return "var" + std::to_string(level); }
  std::string comp(int level) const { return "comp" + std::to_string(level); }
  std::string subst_tm(int level) const { return "subst_tm" + std::to_string(level); }
  std::string subst_ty(int level) const { return "subst_ty" + std::to_string(level); }
};

// Either a term homotopy h with ty(h) = Id(lhs, rhs), or a type homotopy
// (f,g,p,g2,p2); the heterogeneous case carries both.
struct HomotopyWitness {
  enum class Kind : uint8_t { TermHtpy, TypeHtpy } kind = Kind::TermHtpy;
  Term h;
  Term f, g, p, g2, p2;

  static HomotopyWitness term(Term h);
  static HomotopyWitness type(Term f, Term g, Term p, Term g2, Term p2);
};

Verdict3 validate_homotopy(const Theory& theory, const Telescope& tel, const Term& lhs,
                           const Term& rhs, const HomotopyWitness& w, int depth,
                           const IdConventions& conv = {});

struct LiftingInstance {
  TheoryMorphism morphism;
  Telescope telescope;  // over the source theory
  Term source_type;     // A with phi |- A def, sort (d_p, n)
  Term target_term;     // a with f(phi) |- e_p(a) = f(A)
  Term candidate;       // a' over the source
  HomotopyWitness homotopy;
  bool strict = false;
};

struct LiftingReport {
  Verdict3 type_defined = Verdict3::Inconclusive;      // (i)  phi |- A def
  Verdict3 boundary_match = Verdict3::Inconclusive;    // (ii) f(phi) |- e_p(a) = f(A)
  Verdict3 candidate_boundary = Verdict3::Inconclusive;// (iii) phi |- e_p(a') = A
  Verdict3 image_relation = Verdict3::Inconclusive;    // (iv) f(a') ~ a (or = in strict mode)
  Verdict3 overall() const {
    for (Verdict3 v : {type_defined, boundary_match, candidate_boundary, image_relation})
      if (v != Verdict3::Certified) return v;
    return Verdict3::Certified;
  }
};

LiftingReport check_weak_lifting_instance(const LiftingInstance& inst, int depth,
                                          const IdConventions& conv = {});

struct MissingWitness : KernelError { using KernelError::KernelError; };

// Per target symbol: a source-side guard formula over the canonical argument
// variables x1..xk and a lift term t. Boundary-pin guards give the pure
// telescope shape; guard = phi_sigma with t = sigma(xs) realizes the
// fallback for identity-preserved symbols.
struct Cond1Entry {
  Formula guard;
  Term lift;
};

struct Cond1Witness {
  std::map<std::string, Cond1Entry> entries;
};

struct Cond1Report {
  struct PerSymbol {
    std::string symbol;
    std::vector<std::pair<std::string, Verdict3>> sequents;
    bool ok() const {
      for (const auto& [n, v] : sequents)
        if (v != Verdict3::Certified) return false;
      return true;
    }
  };
  std::vector<PerSymbol> symbols;
  bool ok() const {
    for (const auto& s : symbols)
      if (!s.ok()) return false;
    return true;
  }
};

Cond1Report check_cond1_witness(const TheoryMorphism& f, const Cond1Witness& w,
                                int depth, bool basic_only);

using TypeLiftProvider =
    std::function<std::optional<Term>(const Telescope&, const Term&, const Term&)>;

// The provider returning the context variable v0(A) realizes the trivial
// transport; theories without that convention supply their own.
TypeLiftProvider default_type_lift_provider(const Theory& source,
                                            const IdConventions& conv = {});

struct TypeLiftReport {
  size_t pairs_enumerated = 0;
  size_t pairs_checked = 0;
  struct Failure {
    Term A;
    Term B;
    std::string reason;
  };
  std::vector<Failure> failures;
  bool ok() const { return failures.empty(); }
};

TypeLiftReport check_type_lifting(const TheoryMorphism& f,
                                  const std::vector<Telescope>& tels,
                                  const TypeLiftProvider& provider, int depth,
                                  const IdConventions& conv = {});

struct ExtMoritaReport {
  size_t instances_enumerated = 0;
  size_t premises_satisfied = 0;
  struct Failure {
    std::string axiom;
    size_t telescope = 0;
    std::string substitution;
  };
  std::vector<Failure> failures;
  bool ok() const { return failures.empty(); }
};

// Axiom-extension conservativity checker: whenever the premise instance certifies at
// `depth`, the conclusion instance must certify at depth + 2.
ExtMoritaReport check_ext_morita(const Theory& theory, const std::vector<Sequent>& extra,
                                 const std::vector<Telescope>& tels, int sub_depth,
                                 int depth);

struct MissingContextMetadata : KernelError { using KernelError::KernelError; };

struct ContextAnalysis {
  bool ft_free = true;
  std::vector<Term> contexts;  // maximal ctx-sorted subterms
  bool is_context_normal = false;
};

ContextAnalysis context_analysis(const Term& t, const Theory& theory);

// All well-sorted terms over the signature and variable list, of the given
// sort, up to the depth bound; deterministic order, capped.
std::vector<Term> enumerate_terms(const Theory& theory,
                                  const std::vector<std::pair<std::string, Sort>>& vars,
                                  Sort sort, int depth, size_t cap = 20000);

// All valid telescopes up to the given length whose assigned terms have the
// given depth, entry sorts drawn from tm/ty at levels < max_level. Validity
// of each entry is certified by the bounded prover.
std::vector<Telescope> enumerate_telescopes(const Theory& theory, size_t max_len,
                                            int term_depth, int validate_depth,
                                            int max_level = 2, size_t cap = 10000);

}  // namespace ttk
