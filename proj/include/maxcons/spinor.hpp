// Dense two-component spinor tensors with polynomial entries.
//
// Every slot carries a spinor index taking values 0 or 1. Index gymnastics use
// eps_{01} = eps^{01} = 1 with psi^A = eps^{AB} psi_B and psi_B = psi^A eps_{AB}.
#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <utility>
#include <vector>

#include "maxcons/poly.hpp"

namespace maxcons {

enum class Idx : std::uint8_t { UpU, LoU, UpP, LoP };

constexpr bool is_primed(Idx s) { return s == Idx::UpP || s == Idx::LoP; }
constexpr bool is_upper(Idx s) { return s == Idx::UpU || s == Idx::UpP; }

// Total derivative D_{CC'} acting on polynomials.
using Deriv = std::function<Poly(const Poly&, int C, int Cp)>;

class Spinor {
 public:
  Spinor() : data_(1) {}
  explicit Spinor(std::vector<Idx> slots);
  static Spinor scalar(Poly v);
  // eps with two slots of the same kind; both upper or both lower.
  static Spinor epsilon(Idx kind);

  std::size_t rank() const { return slots_.size(); }
  Idx slot(std::size_t k) const { return slots_[k]; }
  const std::vector<Idx>& slots() const { return slots_; }
  std::size_t size() const { return data_.size(); }

  Poly& operator[](std::size_t flat) { return data_[flat]; }
  const Poly& operator[](std::size_t flat) const { return data_[flat]; }
  Poly& at(std::initializer_list<int> values);
  const Poly& at(std::initializer_list<int> values) const;
  Poly& at(const std::vector<int>& values);
  const Poly& at(const std::vector<int>& values) const;

  int value(std::size_t flat, std::size_t slot) const {
    return static_cast<int>((flat >> (rank() - 1 - slot)) & 1u);
  }
  std::size_t flat(const std::vector<int>& values) const;
  bool is_zero() const;

  Spinor& operator+=(const Spinor& o);
  Spinor& operator-=(const Spinor& o);
  friend Spinor operator+(Spinor a, const Spinor& b) { return a += b; }
  friend Spinor operator-(Spinor a, const Spinor& b) { return a -= b; }
  Spinor scaled(const Scalar& s) const;
  Spinor times(const Poly& p) const;

 private:
  std::vector<Idx> slots_;
  std::vector<Poly> data_;
};

// Sums over the paired slots (a_i, b_j); each pair must be one upper and one lower of the same kind.
// Result slots: free slots of a, then free slots of b.
Spinor contract(const Spinor& a, const Spinor& b, const std::vector<std::pair<int, int>>& pairs);
Spinor outer(const Spinor& a, const Spinor& b);
Spinor trace(const Spinor& a, int i, int j);
Spinor raise(const Spinor& a, int i);
Spinor lower(const Spinor& a, int i);
Spinor raise_all(Spinor a);
Spinor lower_all(Spinor a);
// New slot k is old slot order[k].
Spinor permute(const Spinor& a, const std::vector<int>& order);
Spinor symmetrize(const Spinor& a, const std::vector<int>& slots);
Spinor antisymmetrize(const Spinor& a, int i, int j);
// Appends two lower slots (C, C') holding D_{CC'} of every entry.
Spinor derivative(const Spinor& a, const Deriv& d);
// Complex conjugate: entries conjugated, primed and unprimed slots exchanged.
Spinor conj(const Spinor& a);
Spinor map_entries(const Spinor& a, const std::function<Poly(const Poly&)>& f);

}  // namespace maxcons
