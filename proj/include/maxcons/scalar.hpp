// Elements of Q(i, sqrt2): a + b i + c sqrt2 + d i sqrt2.
#pragma once

#include <array>
#include <string>
#include <string_view>

#include "maxcons/rational.hpp"

namespace maxcons {

class Scalar {
 public:
  Scalar() = default;
  Scalar(const Rational& re) : c_{re, {}, {}, {}} {}  // NOLINT(google-explicit-constructor)
  Scalar(long long n) : c_{Rational(n), {}, {}, {}} {}  // NOLINT(google-explicit-constructor)
  Scalar(Rational a, Rational b, Rational c = {}, Rational d = {})
      : c_{std::move(a), std::move(b), std::move(c), std::move(d)} {}

  static Scalar i() { return Scalar(Rational(0), Rational(1)); }
  static Scalar sqrt2() { return Scalar(Rational(0), Rational(0), Rational(1)); }
  static Scalar parse(std::string_view text);

  // Coordinates in the basis (1, i, sqrt2, i sqrt2).
  const Rational& part(int k) const { return c_[static_cast<std::size_t>(k)]; }
  const Rational& re() const { return c_[0]; }
  const Rational& im() const { return c_[1]; }

  bool is_zero() const { return c_[0].is_zero() && c_[1].is_zero() && c_[2].is_zero() && c_[3].is_zero(); }
  bool is_one() const { return c_[0].is_one() && c_[1].is_zero() && c_[2].is_zero() && c_[3].is_zero(); }
  bool is_rational() const { return c_[1].is_zero() && c_[2].is_zero() && c_[3].is_zero(); }
  bool is_real() const { return c_[1].is_zero() && c_[3].is_zero(); }

  Scalar conj() const { return Scalar(c_[0], -c_[1], c_[2], -c_[3]); }
  Scalar inverse() const;
  std::string str() const;

  Scalar operator-() const { return Scalar(-c_[0], -c_[1], -c_[2], -c_[3]); }
  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  friend bool operator==(const Scalar& a, const Scalar& b) { return a.c_ == b.c_; }

 private:
  std::array<Rational, 4> c_{};
};

}  // namespace maxcons
