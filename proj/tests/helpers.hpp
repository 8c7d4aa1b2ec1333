#pragma once

#include <random>

#include "maxcons/poly.hpp"

namespace maxcons::testing {

inline Scalar random_scalar(std::mt19937_64& rng, bool with_root = false) {
  std::uniform_int_distribution<int> d(-5, 5), den(1, 4);
  Scalar s(Rational(d(rng), den(rng)), Rational(d(rng), den(rng)));
  if (with_root) s += Scalar(Rational(0), Rational(0), Rational(d(rng), den(rng)), Rational(d(rng), den(rng)));
  return s;
}

inline Variable random_onshell_var(std::mt19937_64& rng, int max_order) {
  std::uniform_int_distribution<int> kind(0, 2);
  if (kind(rng) == 0) {
    std::uniform_int_distribution<int> bit(0, 1);
    return Variable::coord(bit(rng), bit(rng));
  }
  std::uniform_int_distribution<int> ord(0, max_order);
  int p = ord(rng);
  bool barred = std::uniform_int_distribution<int>(0, 1)(rng) == 1;
  int nu = barred ? p : p + 2, np = barred ? p + 2 : p;
  int a = std::uniform_int_distribution<int>(0, nu)(rng);
  int b = std::uniform_int_distribution<int>(0, np)(rng);
  return Variable::jet(p, a, b, barred);
}

inline Variable random_tensor_var(std::mt19937_64& rng, int max_order) {
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_int_distribution<int> bit(0, 1);
  if (kind(rng) == 0) return Variable::coord(bit(rng), bit(rng));
  std::array<int, 4> counts{};
  int order = std::uniform_int_distribution<int>(0, max_order)(rng);
  for (int k = 0; k < order; ++k) ++counts[static_cast<std::size_t>(std::uniform_int_distribution<int>(0, 3)(rng))];
  return Variable::tensor(std::uniform_int_distribution<int>(0, kSkewPairs - 1)(rng), counts);
}

template <class VarGen>
Poly random_poly(std::mt19937_64& rng, VarGen gen, int terms, int max_deg) {
  Poly p;
  for (int t = 0; t < terms; ++t) {
    Poly m(random_scalar(rng));
    int deg = std::uniform_int_distribution<int>(0, max_deg)(rng);
    for (int k = 0; k < deg; ++k) m = m * Poly::var(gen(rng));
    p += m;
  }
  return p;
}

inline Poly random_onshell_poly(std::mt19937_64& rng, int terms = 5, int max_deg = 3, int max_order = 2) {
  return random_poly(rng, [max_order](std::mt19937_64& r) { return random_onshell_var(r, max_order); }, terms,
                     max_deg);
}

inline Poly random_tensor_poly(std::mt19937_64& rng, int terms = 5, int max_deg = 3, int max_order = 2) {
  return random_poly(rng, [max_order](std::mt19937_64& r) { return random_tensor_var(r, max_order); }, terms,
                     max_deg);
}

}  // namespace maxcons::testing
