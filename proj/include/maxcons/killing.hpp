// Killing spinors on flat space: solver, explicit bases, symmetrized products,
// Lie derivatives and factorization over the product bases.
#pragma once

#include <array>
#include <compare>
#include <string>
#include <utility>
#include <vector>

#include "maxcons/poly.hpp"
#include "maxcons/spinor.hpp"

namespace maxcons {

// Symmetric spinor field of type (k, l) stored with upper indices.
// Component (a, b) has a unprimed and b primed indices equal to 1.
struct KillingSpinor {
  int k = 0;
  int l = 0;
  std::vector<Poly> c;

  KillingSpinor() : c(1) {}
  KillingSpinor(int k_, int l_) : k(k_), l(l_), c(static_cast<std::size_t>((k_ + 1) * (l_ + 1))) {}

  Poly& at(int a, int b) { return c[static_cast<std::size_t>(a * (l + 1) + b)]; }
  const Poly& at(int a, int b) const { return c[static_cast<std::size_t>(a * (l + 1) + b)]; }
  bool is_zero() const;
  int degree() const;

  KillingSpinor& operator+=(const KillingSpinor& o);
  KillingSpinor& operator-=(const KillingSpinor& o);
  KillingSpinor scaled(const Scalar& s) const;
  friend KillingSpinor operator+(KillingSpinor a, const KillingSpinor& b) { return a += b; }
  friend KillingSpinor operator-(KillingSpinor a, const KillingSpinor& b) { return a -= b; }
  friend bool operator==(const KillingSpinor& a, const KillingSpinor& b) {
    return a.k == b.k && a.l == b.l && a.c == b.c;
  }
};

// Upper-index spinor with k unprimed slots followed by l primed slots.
Spinor to_spinor(const KillingSpinor& K);
// Reads a totally symmetric spinor (any index positions) with k unprimed and l primed slots.
KillingSpinor from_spinor(const Spinor& s);
// Complex conjugate, a type (l, k) spinor.
KillingSpinor conj_spinor(const KillingSpinor& K);
// Component with all indices lowered, a' and b' counting lower indices equal to 1.
Poly lower_component(const KillingSpinor& K, int a, int b);

bool killing_verify(const KillingSpinor& K);
// Basis of the complex solution space of type (k, l), polynomial ansatz of degree <= k + l.
std::vector<KillingSpinor> killing_solve(int k, int l);

enum class KillingKind { CKV, CKY };
struct LabeledKilling {
  std::string label;
  KillingSpinor K;
};
// 15 conformal Killing vectors of type (1,1) or 10 self-dual Killing-Yano spinors of type (0,2).
const std::vector<LabeledKilling>& killing_basis(KillingKind kind);
const KillingSpinor& ckv(const std::string& label);
const KillingSpinor& cky(const std::string& label);

KillingSpinor killing_sym_product(const std::vector<KillingSpinor>& factors);
// Lie derivative along a type (1,1) spinor of a type (1,1) or (0,4) spinor.
KillingSpinor lie_killing(const KillingSpinor& zeta, const KillingSpinor& K);

// Multiplicities of the 15 basis CKVs (in basis order) for a real product of s factors.
std::array<int, 15> ckv_counts(int s, int p, int i, int j, int n, int np);
// Multiplicities of the 10 basis CKYs for the chiral family.
std::array<int, 10> cky_counts(int k, int m, int mp);

// Index tuple of a product basis element; k = -1 for (s, s) products.
// With P the product of the counted CKVs and Pc the product of their conjugates, the element is
// P + Pc, or i(P - Pc) when `prime` is set, multiplied by Y1 Y2 for chiral labels
// and by i (unprimed) or -i (primed) when `minus` is set.
struct ProductLabel {
  int s = 0;
  int p = 0;
  int i = 0;
  int j = 0;
  int n = 0;
  int np = 0;
  int k = -1;
  int m = 0;
  int mp = 0;
  bool prime = false;
  bool minus = false;

  bool chiral() const { return k >= 0; }
  std::string str() const;
  static ProductLabel parse(const std::string& text);
  friend auto operator<=>(const ProductLabel&, const ProductLabel&) = default;
};

// Factor lists chosen by the count formulas.
std::vector<KillingSpinor> product_ckv_factors(const ProductLabel& lab);
std::vector<KillingSpinor> product_cky_factors(const ProductLabel& lab);
KillingSpinor product_element(const ProductLabel& lab);

// All index tuples allowed by the ranges, before any independence filtering.
std::vector<ProductLabel> real_labels(int s);
std::vector<ProductLabel> chiral_labels_raw(int s);
// Basis of the real space of type (s, s): labels in order.
const std::vector<ProductLabel>& real_basis(int s);
// Complex-independent chiral products of type (s, s + 4), kept greedily in label order, each with its
// `minus` partner.
const std::vector<ProductLabel>& chiral_basis(int s);

// Coefficients over the product basis; reconstruction reproduces K exactly.
std::vector<std::pair<ProductLabel, Rational>> killing_factorize(const KillingSpinor& K);

// Closed-form dimensions of the (k,k) and (k,k+4) solution spaces.
long long dim_kk(int k);
long long dim_kk4(int k);

}  // namespace maxcons
