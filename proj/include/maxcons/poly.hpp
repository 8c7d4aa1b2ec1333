// Variables, monomials and sparse polynomials over Q(i, sqrt2).
#pragma once

#include <boost/container/small_vector.hpp>

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "maxcons/scalar.hpp"

namespace maxcons {

// Null frame legs. Each leg is tied to a pair of spinor index values (A, A').
enum class Frame : std::uint8_t { L = 0, N = 1, M = 2, MBAR = 3 };

struct IndexPair {
  int u;  // unprimed value
  int p;  // primed value
};

constexpr IndexPair frame_pair(Frame f) {
  switch (f) {
    case Frame::L: return {0, 0};
    case Frame::N: return {1, 1};
    case Frame::M: return {0, 1};
    case Frame::MBAR: return {1, 0};
  }
  return {0, 0};
}

constexpr Frame frame_of(int u, int p) {
  if (u == 0) return p == 0 ? Frame::L : Frame::M;
  return p == 0 ? Frame::MBAR : Frame::N;
}

const char* frame_name(Frame f);
Frame parse_frame(std::string_view s);

// Antisymmetric index pairs mu < nu in the order LN, LM, LMBAR, NM, NMBAR, MMBAR.
constexpr int kSkewPairs = 6;
std::pair<Frame, Frame> skew_pair(int index);
int skew_index(Frame a, Frame b);  // requires a < b

class Variable {
 public:
  enum class Kind : std::uint8_t { Coord = 0, OnShellJet = 1, TensorJet = 2 };
  static constexpr int kMaxTensorOrder = 12;

  // Coordinate x^{AA'}.
  static Variable coord(int A, int Ap);
  // Symmetrized on-shell jet of order p; a counts unprimed 1s, b counts primed 1s.
  static Variable jet(int p, int a, int b, bool barred);
  // F_{mu nu, sigma...} with mu < nu in the skew order; derivative multiplicities per frame leg.
  static Variable tensor(int skew, std::array<int, 4> deriv_counts);
  static Variable from_key(std::uint64_t key) { return Variable(key); }
  static Variable parse(std::string_view text);

  Kind kind() const { return static_cast<Kind>(key_ >> 46); }
  std::uint64_t key() const { return key_; }

  // Coord accessors
  int coord_u() const { return static_cast<int>((key_ >> 1) & 1); }
  int coord_p() const { return static_cast<int>(key_ & 1); }
  // OnShellJet accessors
  int order() const;
  int jet_a() const { return static_cast<int>((key_ >> 20) & 0x3ff); }
  int jet_b() const { return static_cast<int>((key_ >> 10) & 0x3ff); }
  bool barred() const { return (key_ & 1) != 0; }
  // TensorJet accessors
  int skew() const { return static_cast<int>((key_ >> 40) & 0x7); }
  std::array<int, 4> deriv_counts() const;

  std::string str() const;

  friend bool operator==(Variable a, Variable b) { return a.key_ == b.key_; }
  friend auto operator<=>(Variable a, Variable b) { return a.key_ <=> b.key_; }

 private:
  explicit Variable(std::uint64_t key) : key_(key) {}
  std::uint64_t key_ = 0;
};

// Monomial: product of variables with exponents, stored as packed (key << 16 | exp) sorted by key.
class Monomial {
 public:
  using Storage = boost::container::small_vector<std::uint64_t, 4>;

  Monomial() = default;
  explicit Monomial(Variable v, unsigned exp = 1);

  unsigned degree() const { return deg_; }
  bool is_one() const { return e_.empty(); }
  std::size_t size() const { return e_.size(); }
  Variable var(std::size_t i) const { return Variable::from_key(e_[i] >> 16); }
  unsigned exp(std::size_t i) const { return static_cast<unsigned>(e_[i] & 0xffff); }
  unsigned exponent_of(Variable v) const;
  unsigned coord_degree() const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  // Removes one power of the variable at position i.
  Monomial drop_one(std::size_t i) const;
  Monomial times(Variable v) const { return *this * Monomial(v); }

  std::string str() const;
  std::size_t hash() const;

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.deg_ == b.deg_ && a.e_ == b.e_; }
  friend bool operator<(const Monomial& a, const Monomial& b);

 private:
  Storage e_;
  unsigned deg_ = 0;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

struct Term {
  Monomial m;
  Scalar c;
};

class Poly {
 public:
  Poly() = default;
  Poly(const Scalar& c);  // NOLINT(google-explicit-constructor)
  Poly(long long c) : Poly(Scalar(c)) {}  // NOLINT(google-explicit-constructor)
  static Poly var(Variable v) { return Poly(Monomial(v), Scalar(1)); }
  static Poly monomial(Monomial m, Scalar c) { return Poly(std::move(m), std::move(c)); }
  // Builds a canonical polynomial from arbitrary (unsorted, repeated) terms.
  static Poly from_terms(std::vector<Term> terms);
  static Poly parse(std::string_view text);

  const std::vector<Term>& terms() const { return t_; }
  std::size_t size() const { return t_.size(); }
  bool is_zero() const { return t_.empty(); }
  bool is_constant() const { return t_.empty() || (t_.size() == 1 && t_[0].m.is_one()); }
  Scalar constant_term() const;
  unsigned degree() const;
  unsigned coord_degree() const;
  // Largest jet order among on-shell jet variables (-1 if none).
  int max_jet_order() const;
  std::vector<Variable> variables() const;

  Poly conj() const;
  Poly scaled(const Scalar& s) const;
  Poly partial(Variable v) const;
  Scalar coefficient(const Monomial& m) const;
  Poly substitute(const std::function<Poly(Variable)>& f) const;
  Poly map_terms(const std::function<void(const Term&, std::vector<Term>&)>& f) const;
  Scalar eval(const std::function<Scalar(Variable)>& value) const;
  std::uint64_t eval_mod(const std::function<std::uint64_t(Variable)>& value, int part, std::uint64_t p) const;

  std::string str() const;

  Poly operator-() const;
  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  friend bool operator==(const Poly& a, const Poly& b);

 private:
  Poly(Monomial m, Scalar c);
  std::vector<Term> t_;
};

Poly operator*(const Scalar& s, const Poly& p);
inline Poly operator*(const Poly& p, const Scalar& s) { return s * p; }

class MissingVariable : public std::runtime_error {
 public:
  explicit MissingVariable(Variable v) : std::runtime_error("no value for variable " + v.str()), v_(v) {}
  Variable variable() const { return v_; }

 private:
  Variable v_;
};

}  // namespace maxcons
