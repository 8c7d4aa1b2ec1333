// Frame-component tensor algebra and the tensorial conservation laws:
// stress-energy, zilch and chiral currents, their Lie-derivative extensions, and the conserved tensors.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "maxcons/currents.hpp"
#include "maxcons/jetspace.hpp"
#include "maxcons/killing.hpp"

namespace maxcons {

// Dense tensor over the null frame. Slot k is upper or lower; entry flat index is base 4, slot 0 first.
class FrameTensor {
 public:
  FrameTensor() : data_(1) {}
  explicit FrameTensor(std::vector<bool> upper);
  static FrameTensor scalar(Poly v);

  std::size_t rank() const { return up_.size(); }
  bool upper(std::size_t k) const { return up_[k]; }
  const std::vector<bool>& slots() const { return up_; }
  std::size_t size() const { return data_.size(); }
  int value(std::size_t flat, std::size_t slot) const {
    return static_cast<int>((flat >> (2 * (rank() - 1 - slot))) & 3u);
  }
  std::size_t flat(const std::vector<int>& values) const;

  Poly& operator[](std::size_t f) { return data_[f]; }
  const Poly& operator[](std::size_t f) const { return data_[f]; }
  Poly& at(const std::vector<int>& v) { return data_[flat(v)]; }
  const Poly& at(const std::vector<int>& v) const { return data_[flat(v)]; }
  bool is_zero() const;

  FrameTensor& operator+=(const FrameTensor& o);
  FrameTensor& operator-=(const FrameTensor& o);
  friend FrameTensor operator+(FrameTensor a, const FrameTensor& b) { return a += b; }
  friend FrameTensor operator-(FrameTensor a, const FrameTensor& b) { return a -= b; }
  FrameTensor scaled(const Scalar& s) const;
  friend bool operator==(const FrameTensor& a, const FrameTensor& b) { return a.up_ == b.up_ && a.data_ == b.data_; }

 private:
  std::vector<bool> up_;
  std::vector<Poly> data_;
};

// Sums over paired slots (one upper, one lower). Result: free slots of a, then of b.
FrameTensor ft_contract(const FrameTensor& a, const FrameTensor& b, const std::vector<std::pair<int, int>>& pairs);
FrameTensor ft_outer(const FrameTensor& a, const FrameTensor& b);
FrameTensor ft_trace(const FrameTensor& a, int i, int j);
FrameTensor ft_raise(const FrameTensor& a, int i);
FrameTensor ft_lower(const FrameTensor& a, int i);
FrameTensor ft_raise_all(FrameTensor a);
FrameTensor ft_lower_all(FrameTensor a);
// New slot k is old slot order[k].
FrameTensor ft_permute(const FrameTensor& a, const std::vector<int>& order);
FrameTensor ft_symmetrize(const FrameTensor& a, const std::vector<int>& slots);
FrameTensor ft_antisymmetrize(const FrameTensor& a, const std::vector<int>& slots);
// Appends a lower slot holding D_sigma of every entry (off-shell total derivative).
FrameTensor ft_derivative(const FrameTensor& a);
FrameTensor ft_map(const FrameTensor& a, const std::function<Poly(const Poly&)>& f);

FrameTensor ft_metric(bool upper);
FrameTensor ft_delta();  // slots (upper, lower)
FrameTensor ft_volume();  // lower, eps_{L N M MBAR} = -i

// F_{mu nu} from off-shell tensor jets.
FrameTensor field_tensor();
// Hodge dual of a lower rank 2 tensor.
FrameTensor dual_two_form(const FrameTensor& omega);
// Lie derivative of a lower 2-form along a vector field given by a type (1,1) Killing spinor.
FrameTensor lie_two_form(const KillingSpinor& xi, const FrameTensor& omega);
// (L_xi)^n F.
FrameTensor field_extension(const KillingSpinor& xi, int n);
// xi^mu as an upper frame vector.
FrameTensor ckv_tensor(const KillingSpinor& xi);
// Real skew tensor Y_{mu nu} = Y_{A'B'} eps_{AB} + Ybar_{AB} eps_{A'B'} from a type (0,2) spinor.
FrameTensor cky_tensor(const KillingSpinor& Y);
// Rank 4 tensor quadratic in a real CKY, symmetrized in the two arguments. Lower slots.
FrameTensor ky4_build(const FrameTensor& Y1, const FrameTensor& Y2);

// Tensorial currents evaluated on a given lower field 2-form F (which may be an extension F^(n)).
Current tensor_current_T(const FrameTensor& F, const KillingSpinor& xi);
Current tensor_current_Z(const FrameTensor& F, const KillingSpinor& xi);
Current tensor_current_V(const FrameTensor& F, const KillingSpinor& xi, const FrameTensor& Y4);
Current tensor_current_Vmin(const FrameTensor& F, const KillingSpinor& xi, const FrameTensor& Y4);
// W^nu F^{mu nu} + Wt^nu *F^{mu nu} for lower one-forms W, Wt (x-dependent).
Current tensor_current_W(const FrameTensor& F, const FrameTensor& W, const FrameTensor& Wt);

enum class TensorKind { T, Z, V, W };
// Extended tensorial current of order n (T, W) or n + 1 (Z, V) with F replaced by (L_xi)^n F.
// `Y` is the type (0,2) spinor of the real CKY for V; `W` and `Wt` are used for W.
Current current_extended(TensorKind kind, const KillingSpinor& xi, int n, const KillingSpinor* Y = nullptr,
                         const FrameTensor* W = nullptr, const FrameTensor* Wt = nullptr);
// The same current with the non-minimal chiral expression.
Current current_extended_V_full(const KillingSpinor& xi, const KillingSpinor& Y, int n);

// Real lower one-forms (W, Wt) with W = Re-part pairing of a spinor solution omega of the W equation:
// W_{AA'} + i Wt_{AA'} packaging as in the spinor adjoint symmetry.
std::pair<FrameTensor, FrameTensor> w_one_forms(const SpinorField& omega);

struct ConservedTensor {
  TensorKind kind = TensorKind::T;
  int n = 0;
  FrameTensor t;  // T^mu_nu, Z^mu_{nu rho} or V^mu_{nu alpha beta sigma tau}
};
// Built from F^(n) = (L_xi)^n F; xi defaults to the dilation.
ConservedTensor conserved_tensor(TensorKind kind, int n, const KillingSpinor* xi = nullptr);

struct PropertyCheck {
  std::string name;
  bool pass = false;
};
std::vector<PropertyCheck> tensor_properties(const ConservedTensor& t);

const char* tensor_kind_name(TensorKind k);
TensorKind parse_tensor_kind(const std::string& s);

}  // namespace maxcons
