// Adjoint symmetries, the prolonged conformal symmetries, and the conserved current families.
#pragma once

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "maxcons/jetspace.hpp"
#include "maxcons/killing.hpp"

namespace maxcons {

// Four lower-index components P_{AA'} at index 2A + A'.
using SpinorField = std::array<Poly, 4>;

SpinorField field_add(const SpinorField& a, const SpinorField& b);
SpinorField field_scaled(const SpinorField& a, const Scalar& s);
bool field_is_zero(const SpinorField& a);
Spinor field_spinor(const SpinorField& a);  // slots (LoU, LoP)
SpinorField spinor_field(const Spinor& s);  // from slots (LoU, LoP)

struct AdjointSymmetry {
  SpinorField c;
  int order() const;
};

// pr X_zeta on on-shell polynomials. Complex-linear in zeta; commutes with total derivatives.
class ProlongedSymmetry {
 public:
  explicit ProlongedSymmetry(KillingSpinor zeta);
  Poly apply(const Poly& e) const;
  SpinorField apply(const SpinorField& f) const;
  const KillingSpinor& zeta() const { return zeta_; }

 private:
  const Poly& jet_value(Variable v) const;
  KillingSpinor zeta_;
  mutable std::recursive_mutex mu_;
  mutable std::map<Variable, Poly> cache_;
};

Poly prolonged_symmetry_apply(const KillingSpinor& zeta, const Poly& e);

// U_{AA'} = xi^B_{A'} phi_{AB}.
SpinorField adjsym_U0(const KillingSpinor& xi, const JetSource& jets = onshell_jets());
// V_{AA'} = kappa_{A'B'C'D'} phibar^{B'C'D'}_A + (3/5)(d^{B'}_A kappa_{A'B'C'D'}) phibar^{C'D'}.
SpinorField adjsym_V0(const KillingSpinor& kappa, const JetSource& jets = onshell_jets());
// Symmetrized prolongations of U and V by the listed type (1,1) spinors.
AdjointSymmetry adjsym_U(const KillingSpinor& xi, const std::vector<KillingSpinor>& zetas);
AdjointSymmetry adjsym_V(const KillingSpinor& kappa, const std::vector<KillingSpinor>& zetas);
// Elementary adjoint symmetry; throws unless d^B_(A' omega_B')B = 0.
AdjointSymmetry adjsym_W(const SpinorField& omega);

// D^B_(A' P_B')B at index (A'B') = (0,0), (0,1), (1,1).
std::array<Poly, 3> spinor_curl(const SpinorField& P, const Deriv& d);
bool adjsym_verify(const AdjointSymmetry& P);

// Delta_{AA'} = D^B_{A'} phi_{AB}; its conjugate from phibar.
SpinorField field_equation(const JetSource& jets, bool barred);
// Natural lift of the spinor Lie derivative of a lower-index one-form: zeta.D P + (d_{AA'} zeta^{CC'}) P_{CC'}.
SpinorField jet_lie(const KillingSpinor& zeta, const SpinorField& P);

// Right-hand sides of the off-shell curl identities for U[xi] and V[kappa].
std::array<Poly, 3> radj_rhs(const KillingSpinor& xi, const JetSource& jets);
std::array<Poly, 3> sadj_rhs(const KillingSpinor& kappa, const JetSource& jets);

// Polynomial solutions of d^B_(A' omega_B')B = 0 with degree <= maxdeg.
// With `gauge_quotient`, a complement of the gradients d_{AA'} chi is returned.
std::vector<SpinorField> w_solution_basis(int maxdeg, bool gauge_quotient = true);
bool is_gradient_field(const SpinorField& omega);

// Phi_{AA'}[P] = 1/2 P_A^{B'} phibar_{A'B'} + 1/2 Pbar_{A'}^B phi_{AB}.
Current density_from_adjoint(const SpinorField& P);

enum class Family { T, Z, V, W };
// T and Z take xi and zetas, V takes kappa and zetas, W takes omega through density_w.
Current current_density(Family fam, const KillingSpinor& lead, const std::vector<KillingSpinor>& zetas = {});
Current density_w(const SpinorField& omega);

// Adjoint symmetry and current attached to a product basis label.
// Real labels with s factors give T (s odd) or Z (s even) currents; chiral labels give V currents.
SpinorField basis_adjoint(const ProductLabel& lab);
Current basis_current(const ProductLabel& lab);

}  // namespace maxcons
