#pragma once

#include "ttk/morita.hpp"
#include "ttk/structure.hpp"

namespace ttk {

struct UnknownName : KernelError { using KernelError::KernelError; };
struct NotImplemented : KernelError { using KernelError::KernelError; };

struct NamedArtifact {
  std::string name;
  std::optional<Theory> theory;
  std::optional<TheoryMorphism> morphism;
  std::optional<SeparationCertificate> separation;
  std::optional<WellDefinedCert> well_defined;
  std::optional<TRS> trs;
  std::optional<Cond1Witness> cond1;
  std::vector<std::string> notes;
};

// base, id0, id_full, refl_transport, t_pi, t_pi1, t_pi2, t_pi3,
// contractible, unit, combinatory. The interval/extensionality theories are
// named placeholders that raise NotImplemented.
NamedArtifact stdlib_theory(const std::string& name);
std::vector<std::string> stdlib_theory_names();

// pi_incl, pi2_incl, pi_iso, contr_to_unit.
NamedArtifact stdlib_morphism(const std::string& name);
std::vector<std::string> stdlib_morphism_names();

// Fills obligation_status by proving the image of every source axiom in the
// target at the given bound.
void certify_morphism(TheoryMorphism& m, int depth, int fuel);

// Levels 0..N-1 of the ty_n/ft_n base symbols (default N = 4).
constexpr int kMaxLevel = 4;

}  // namespace ttk
