#pragma once

#include <set>

#include "ttk/rewriting.hpp"
#include "ttk/saturate.hpp"
#include "ttk/verdict.hpp"

namespace ttk {

struct NotSeparated : KernelError { using KernelError::KernelError; };

// Partition of a theory's axioms into definedness axioms A_d (one per
// function symbol, guard phi_sigma), converse axioms A'_d, and equational
// axioms A_e; condition 3 is only ever checked at a bound.
struct SeparationCertificate {
  std::map<std::string, std::string> a_d;    // function symbol -> axiom name
  std::map<std::string, Formula> phi_sigma;  // function symbol -> guard
  std::set<std::string> a_d_prime;
  std::set<std::string> a_e;

  struct Cond3Status {
    int bound = 0;
    size_t instances_checked = 0;
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
  };
  Cond3Status condition3;
};

// Throws NotSeparated naming the first offending axiom.
SeparationCertificate classify_separated(const Theory& theory, int bound);

// minimal = A_d u A_e; maximal = minimal plus one A'_d axiom per symbol.
std::pair<Theory, Theory> minimal_maximal(const SeparationCertificate& cert,
                                          const Theory& theory);

struct CyclicOrder : KernelError { using KernelError::KernelError; };
struct MissingSymbol : KernelError { using KernelError::KernelError; };

// Defining data for one symbol: per argument position, an optional boundary
// pin A_i over the canonical variables x1..x(i-1).
struct WellDefinedCert {
  std::map<std::string, int> order;  // rank per symbol; base symbols rank 0
  std::map<std::string, std::vector<std::optional<Term>>> defining;
  int checked_depth = 0;
};

struct WellDefinedReport {
  struct PerSymbol {
    std::string symbol;
    std::vector<std::pair<std::string, Verdict3>> sequents;
    bool structural_ok = true;
    std::string note;
  };
  std::vector<PerSymbol> symbols;
  bool ok() const {
    for (const auto& s : symbols) {
      if (!s.structural_ok) return false;
      for (const auto& [n, v] : s.sequents)
        if (v != Verdict3::Certified) return false;
    }
    return true;
  }
};

// Verifies acyclicity, occurrence constraints, the pin telescopes'
// definedness, and the bi-implication with sigma(xs) def, via prove at depth.
WellDefinedReport check_well_defined(const Theory& theory, const WellDefinedCert& cand,
                                     int depth);

struct UndirectedAxiom : KernelError {
  std::string axiom;
  std::string reason;  // variable-lhs | escaping-variable | non-equational-rhs
  UndirectedAxiom(const std::string& axiom, const std::string& reason)
      : KernelError("axiom " + axiom + " cannot be directed: " + reason),
        axiom(axiom), reason(reason) {}
};

// Orients every A_e axiom psi |- t = s as the rule t -> s.
TRS extract_directed(const Theory& theory, const SeparationCertificate& cert);

struct ReductionSystemReport {
  Verdict3 condition1 = Verdict3::Certified;  // automatic for =>_R u =>_phi
  Verdict3 condition2 = Verdict3::Inconclusive;
  Verdict3 condition3 = Verdict3::Inconclusive;
  size_t cond2_steps_checked = 0;
  size_t cond2_steps_failed = 0;
  size_t cond3_instances_checked = 0;
  size_t cond3_instances_failed = 0;
  std::vector<std::string> notes;
  bool ok() const {
    return condition1 == Verdict3::Certified && condition2 == Verdict3::Certified &&
           condition3 == Verdict3::Certified;
  }
};

ReductionSystemReport validate_reduction_system(const Theory& theory, const TRS& trs,
                                                const std::vector<Telescope>& tels,
                                                size_t samples, int depth);

struct ConfluenceReport {
  enum class Verdict : uint8_t { CertifiedAtBound, Counterexample, Inconclusive }
      verdict = Verdict::Inconclusive;
  size_t checked_pairs = 0;
  struct Counterexample {
    Term t;
    Term s;
    std::string evidence;
  };
  std::vector<Counterexample> counterexamples;
  size_t converse_checked = 0;
  size_t converse_failed = 0;
  size_t states = 0;
  int depth = 0;
  int fuel = 0;
  std::vector<std::string> notes;
};

// Forward: every derivable equality pair within depth is joinable within
// fuel. Converse: every pair joined (equal bounded normal forms) is derivable
// at twice the depth.
ConfluenceReport certify_confluent(const Theory& theory, const TRS& trs,
                                   const Telescope& tel, int depth, int fuel);

// Recursive definedness procedure for confluent theories.
Verdict3 check_defined(const Theory& theory, const WellDefinedCert& wd, const TRS& trs,
                       const Telescope& tel, const Term& t, int fuel);

// Derivation of phi |- t = result for one rewrite step under the context's
// hypotheses; nullopt when the needed facts are outside the context's bound.
std::optional<DerivationPtr> derive_step_equality(const ProverContext& ctx,
                                                  const TRS& trs,
                                                  const std::vector<RewriteRule>& tel_rules,
                                                  const Term& start,
                                                  const StepInfo& step);

}  // namespace ttk
