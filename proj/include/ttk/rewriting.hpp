#pragma once

#include "ttk/telescope.hpp"

namespace ttk {

struct RewriteRule {
  std::string name;
  Term lhs;
  Term rhs;
};

struct VariableLhs : KernelError { using KernelError::KernelError; };
struct EscapingVariable : KernelError { using KernelError::KernelError; };

struct TRS {
  std::vector<RewriteRule> rules;
  bool left_linear = true;
};

// Enforces the two TRS conditions (lhs not a variable, FV(rhs) within
// FV(lhs)) and computes left-linearity.
TRS validate_trs(std::vector<RewriteRule> rules);

// The telescope contributes the ground steps e_p(x_i) -> t_i; its variables
// act as constants, so matching is plain subterm equality.
std::vector<RewriteRule> telescope_rules(const Telescope& tel, const Theory& theory);
// Same rules with variables frozen into nullary applications, for use where
// syntactic unification must treat them rigidly (orthogonality checks).
TRS rigid_telescope_system(const Telescope& tel, const Theory& theory);

struct StepInfo {
  Position pos;
  bool from_telescope = false;
  size_t rule_index = 0;  // into trs.rules, or into the telescope rules
  std::string rule_name;
  Substitution subst;  // rule case only
  Term result;
};

// All one-step successors under =>_R u =>_phi, ordered by (position, rule).
std::vector<StepInfo> step(const TRS& trs, const std::vector<RewriteRule>& tel_rules,
                           const Term& t);
std::vector<StepInfo> step(const TRS& trs, const Telescope& tel, const Term& t,
                           const Theory& theory);

struct ReductionTrace {
  Term start;
  std::vector<StepInfo> steps;
  Term end;
  bool fuel_exhausted = false;
};

// Replays the recorded steps against the rules; returns false when they do
// not reproduce `end` bit-exactly.
bool replay(const TRS& trs, const std::vector<RewriteRule>& tel_rules,
            const ReductionTrace& trace);

// Leftmost-innermost normalization.
ReductionTrace normalize(const TRS& trs, const std::vector<RewriteRule>& tel_rules,
                         const Term& t, int fuel);
ReductionTrace normalize(const TRS& trs, const Telescope& tel, const Term& t,
                         const Theory& theory, int fuel);

struct JoinWitness {
  Term meet;
  ReductionTrace left_trace;
  ReductionTrace right_trace;
  bool width_exhausted = false;
};

// Breadth-first bidirectional search for a common reduct; absence means "not
// joinable within bound", never a refutation.
std::optional<JoinWitness> joinable(const TRS& trs,
                                    const std::vector<RewriteRule>& tel_rules,
                                    const Term& t, const Term& s, int fuel, int width);
std::optional<JoinWitness> joinable(const TRS& trs, const Telescope& tel, const Term& t,
                                    const Term& s, const Theory& theory, int fuel,
                                    int width);

struct LocalConfluencePeak {
  Term origin;
  Term left;
  Term right;
  bool inconclusive = false;  // bound exhausted rather than refuted
};

struct LocalConfluenceReport {
  std::vector<LocalConfluencePeak> unjoined;
  size_t states_explored = 0;
  size_t peaks_checked = 0;
  bool ok() const { return unjoined.empty(); }
};

LocalConfluenceReport check_local_confluence(const TRS& trs, const Telescope& tel,
                                             const std::vector<Term>& seeds,
                                             const Theory& theory, int fuel,
                                             int width = 64);

struct OverlapEntry {
  std::string rule_a;  // whose lhs unifies...
  Position pos;        // ...at this non-variable position...
  std::string rule_b;  // ...inside this rule's lhs
};

// Critical-overlap freeness between the two systems.
std::pair<bool, std::vector<OverlapEntry>> check_orthogonal(const TRS& a, const TRS& b);

}  // namespace ttk
