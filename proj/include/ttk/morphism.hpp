#pragma once

#include <variant>

#include "ttk/theory.hpp"

namespace ttk {

struct DerivationTree;

// Image of a source function symbol: a target term over parameter variables
// (one per source argument, in order). Free variables of body must be among
// the parameters, with the declared argument sorts.
struct FunImage {
  std::vector<std::string> params;
  Term body;
};

struct PredImage {
  std::vector<std::string> params;
  Formula body;
};

struct ObligationStatus {
  enum class Kind : uint8_t { Assumed, Certified, Refuted } kind = Kind::Assumed;
  std::vector<std::shared_ptr<DerivationTree>> witnesses;  // for Certified
};

struct TheoryMorphism {
  std::string name;
  Theory source;
  Theory target;
  std::map<std::string, FunImage> fun_map;    // defaults to identity when absent
  std::map<std::string, PredImage> pred_map;  // likewise
  std::map<std::string, ObligationStatus> obligation_status;  // per source axiom

  bool fully_certified() const;
};

struct UnmappedSymbol : KernelError { using KernelError::KernelError; };

// Identity morphism T -> T.
TheoryMorphism identity_morphism(const Theory& t);

// Validates sort-preservation of fun_map/pred_map entries and that every
// source symbol is translatable into the target.
ValidationReport validate_morphism(const TheoryMorphism& f);

Term apply_morphism(const TheoryMorphism& f, const Term& t);
Formula apply_morphism(const TheoryMorphism& f, const Formula& phi);
Sequent apply_morphism(const TheoryMorphism& f, const Sequent& s);

TheoryMorphism compose(const TheoryMorphism& g, const TheoryMorphism& f);  // g after f

}  // namespace ttk
