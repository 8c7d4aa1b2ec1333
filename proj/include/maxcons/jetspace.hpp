// Jet coordinates for the free Maxwell field: off-shell tensor jets F_{mu nu, sigma...}
// and on-shell symmetric spinor jets, with total derivatives and conversions.
#pragma once

#include <array>
#include <memory>
#include <vector>

#include "maxcons/poly.hpp"
#include "maxcons/spinor.hpp"

namespace maxcons {

// D_{CC'} on on-shell polynomials (coordinates and symmetric spinor jets).
Poly onshell_derivative(const Poly& e, int C, int Cp);
// D_mu on off-shell polynomials (coordinates and tensor jets).
Poly tensor_derivative(const Poly& e, Frame mu);
Deriv onshell_D();
Deriv tensor_D();

// V^f = sign * V_partner for the null frame metric (g_{LN} = 1, g_{M MBAR} = -1).
std::pair<Frame, int> frame_raise(Frame f);
// Frame volume form, normalized so that eps_{L N M MBAR} = -i.
Scalar levi_civita(Frame a, Frame b, Frame c, Frame d);

// Signed tensor jet F_{mu nu, derivs}; zero when mu == nu.
Poly tensor_jet(Frame mu, Frame nu, const std::vector<Frame>& derivs = {});

using TwoForm = std::array<Poly, kSkewPairs>;  // lower frame components by skew pair
TwoForm hodge_dual(const TwoForm& omega);
// Replaces the field by its dual: F -> *F on tensor jets, phi -> -i phi and phibar -> i phibar on spinor jets.
Poly duality_transform(const Poly& e);
Poly restrict_onshell(const Poly& e);
// Expresses on-shell spinor jets through symmetrized tensor jets.
Poly lift_to_tensor(const Poly& e);
// E^{mu nu}(e) for each skew pair, with dF_{ab}/dF_{mn} = delta^{[m}_a delta^{n]}_b.
TwoForm euler_operator(const Poly& e);

struct Current {
  enum class Rep { Spinor, Tensor };
  Rep rep = Rep::Spinor;
  // Spinor: Psi_{AA'} at index 2A+A'. Tensor: Psi^mu by frame leg.
  std::array<Poly, 4> c;

  int order() const;
  static Current spinor(std::array<Poly, 4> comps) { return {Rep::Spinor, std::move(comps)}; }
  static Current tensor(std::array<Poly, 4> comps) { return {Rep::Tensor, std::move(comps)}; }
  Spinor as_spinor() const;  // (LoU, LoP) slots; requires spinor rep
  static Current from_spinor(const Spinor& s);
  bool is_zero() const;
  bool is_real() const;
  Current& operator+=(const Current& o);
  Current& operator-=(const Current& o);
  Current scaled(const Scalar& s) const;
};
Current operator+(Current a, const Current& b);
Current operator-(Current a, const Current& b);

Current tensor_to_spinor(const Current& c);
Current spinor_to_tensor(const Current& c);
Poly divergence(const Current& c);
bool is_conserved(const Current& c);

// Source of field spinors and their symmetrized derivatives.
class JetSource {
 public:
  virtual ~JetSource() = default;
  virtual Deriv deriv() const = 0;
  // Symmetrized jet of order p with all indices lower.
  // Unbarred slots: (p+2) unprimed then p primed; barred: (p+2) primed then p unprimed.
  virtual Spinor phi(int p, bool barred) const = 0;
};

class OnShellJets final : public JetSource {
 public:
  Deriv deriv() const override { return onshell_D(); }
  Spinor phi(int p, bool barred) const override;
};

// Off-shell field spinors built from tensor jets; the field equations are not imposed.
class OffShellJets final : public JetSource {
 public:
  Deriv deriv() const override { return tensor_D(); }
  Spinor phi(int p, bool barred) const override;
};

const JetSource& onshell_jets();

}  // namespace maxcons
