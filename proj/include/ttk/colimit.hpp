#pragma once

#include "ttk/morphism.hpp"

namespace ttk {

struct BaseMismatch : KernelError { using KernelError::KernelError; };

// A finite diagram of theories under a shared base B: nodes plus morphisms
// between nodes. Every node must contain B's symbols and axioms verbatim and
// every edge must fix them.
struct TheoryDiagram {
  Theory base;
  std::vector<Theory> nodes;
  struct Edge {
    size_t from = 0;
    size_t to = 0;
    TheoryMorphism morphism;
  };
  std::vector<Edge> edges;
};

struct ColimitResult {
  Theory theory;
  std::vector<TheoryMorphism> injections;  // one per node, obligations assumed
  // Renamings applied to resolve name collisions: (node, original) -> new name.
  std::vector<std::pair<std::pair<size_t, std::string>, std::string>> renamed;
};

// Coproduct plus gluing axioms for every edge: for each non-base function
// symbol sigma of the edge's source, inj_from(sigma(xs)) and
// inj_to(f(sigma(xs))) are Kleene-equal (two guarded equations); predicates
// get the two implication sequents.
ColimitResult theory_colimit(const TheoryDiagram& diagram);

// Convenience: binary coproduct over a base.
ColimitResult coproduct(const Theory& base, const Theory& a, const Theory& b);

// Coequalizer of a parallel pair f,g : T -> T': T' plus gluing axioms.
ColimitResult coequalizer(const Theory& base, const TheoryMorphism& f,
                          const TheoryMorphism& g);

}  // namespace ttk
