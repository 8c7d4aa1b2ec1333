#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "maxcons/linalg.hpp"
#include "maxcons/poly.hpp"

using namespace maxcons;
using maxcons::testing::random_onshell_poly;
using maxcons::testing::random_scalar;

TEST_SUITE("symcore") {
  TEST_CASE("rational arithmetic stays exact across the 64-bit boundary") {
    Rational big(1ll << 60);
    Rational sq = big * big;
    CHECK_FALSE(sq.is_small());
    CHECK((sq / big) == big);
    CHECK((sq / big).is_small());
    CHECK(Rational(6, -4) == Rational(-3, 2));
    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    CHECK(Rational::parse("-22/8") == Rational(-11, 4));
    CHECK(Rational::parse("123456789012345678901234567890").str() == "123456789012345678901234567890");
    CHECK(binomial(10, 3) == Rational(120));
  }

  TEST_CASE("field operations in Q(i, sqrt2)") {
    Scalar i = Scalar::i(), r = Scalar::sqrt2();
    CHECK(i * i == Scalar(-1));
    CHECK(r * r == Scalar(2));
    CHECK((i * r) * (i * r) == Scalar(-2));
    CHECK((Scalar(1) + i) * (Scalar(1) - i) == Scalar(2));
    Scalar x = Scalar(1) + r;
    CHECK(x.inverse() == r - Scalar(1));
    CHECK(x * x.inverse() == Scalar(1));
    CHECK((Scalar(3) + i).conj() == Scalar(3) - i);
  }

  TEST_CASE("scalar text form round-trips") {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 200; ++k) {
      Scalar s = random_scalar(rng, true);
      CHECK(Scalar::parse(s.str()) == s);
    }
    CHECK(Scalar::parse("1/2-3i+2 r2-1/5i r2") ==
          Scalar(Rational(1, 2), Rational(-3), Rational(2), Rational(-1, 5)));
    CHECK(Scalar().str() == "0");
  }

  TEST_CASE("scalar field axioms on seeded samples") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 100; ++k) {
      Scalar a = random_scalar(rng, true), b = random_scalar(rng, true), c = random_scalar(rng, true);
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK((a * b).conj() == a.conj() * b.conj());
      if (!a.is_zero()) CHECK(a * a.inverse() == Scalar(1));
    }
  }

  TEST_CASE("variable order puts coordinates before spinor jets before tensor jets") {
    Variable x = Variable::coord(1, 1);
    Variable j = Variable::jet(0, 0, 0, false);
    Variable t = Variable::tensor(0, {0, 0, 0, 0});
    CHECK(x < j);
    CHECK(j < t);
    CHECK(Variable::jet(0, 2, 0, false) < Variable::jet(1, 0, 0, false));
    for (Variable v : {x, j, t, Variable::jet(3, 2, 5, true), Variable::tensor(5, {1, 0, 2, 1})}) {
      CHECK(Variable::parse(v.str()) == v);
    }
    CHECK(Variable::tensor(3, {1, 0, 2, 1}).deriv_counts() == std::array<int, 4>{1, 0, 2, 1});
  }

  TEST_CASE("polynomial canonical form") {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 50; ++k) {
      Poly a = random_onshell_poly(rng), b = random_onshell_poly(rng), c = random_onshell_poly(rng);
      CHECK((a - a).is_zero());
      CHECK((a - a).terms().empty());
      CHECK((a + b) + c == a + (b + c));
      CHECK(a * b == b * a);
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK(Poly::parse(a.str()) == a);
      CHECK(a.conj().conj() == a);
      if (!a.is_zero() && !b.is_zero()) CHECK((a * b).degree() == a.degree() + b.degree());
    }
  }

  TEST_CASE("polynomial text form is deterministic") {
    Poly x = Poly::var(Variable::coord(0, 0));
    Poly y = Poly::var(Variable::coord(1, 1));
    Poly phi = Poly::var(Variable::jet(1, 2, 0, false));
    Poly p = phi * x + Poly(Scalar(Rational(1, 2))) + y * y.scaled(Scalar::i());
    CHECK(p.str() == "(1/2) + (1)*x00*phi[1;2;0] + (1i)*x11^2");
    CHECK(Poly::parse("(1)*x00*phi[1;2;0] + (1/2) + (1i)*x11^2") == p);
    CHECK_THROWS(Poly::parse("(1)*q7"));
  }

  TEST_CASE("evaluation and missing variables") {
    Poly x = Poly::var(Variable::coord(0, 1));
    Poly p = x * x + Poly(Scalar::i());
    auto val = [](Variable v) -> Scalar {
      if (v == Variable::coord(0, 1)) return Scalar(3);
      throw MissingVariable(v);
    };
    CHECK(p.eval(val) == Scalar(9) + Scalar::i());
    Poly q = p * Poly::var(Variable::coord(1, 0));
    CHECK_THROWS_AS(q.eval(val), MissingVariable);
  }

  TEST_CASE("conjugation swaps coordinate indices and barred jets") {
    Poly p = Poly::var(Variable::coord(0, 1)) * Poly::var(Variable::jet(2, 3, 1, false)).scaled(Scalar::i());
    Poly q = Poly::var(Variable::coord(1, 0)) * Poly::var(Variable::jet(2, 1, 3, true)).scaled(-Scalar::i());
    CHECK(p.conj() == q);
  }
}

TEST_SUITE("linalg") {
  TEST_CASE("echelon solve and nullspace") {
    // x + y = 3, x - y = 1  ->  x = 2, y = 1
    Echelon e;
    e.insert(make_sparse({{0, Rational(1)}, {1, Rational(1)}, {2, Rational(3)}}));
    e.insert(make_sparse({{0, Rational(1)}, {1, Rational(-1)}, {2, Rational(1)}}));
    auto x = e.solve(2);
    REQUIRE(x.has_value());
    CHECK((*x)[0] == Rational(2));
    CHECK((*x)[1] == Rational(1));
    Echelon h;
    h.insert(make_sparse({{0, Rational(1)}, {1, Rational(2)}, {2, Rational(3)}}));
    auto ns = h.nullspace(3);
    CHECK(ns.size() == 2);
    for (const auto& v : ns) CHECK(v[0] + Rational(2) * v[1] + Rational(3) * v[2] == Rational(0));
    Echelon bad;
    bad.insert(make_sparse({{0, Rational(1)}, {1, Rational(1)}}));
    bad.insert(make_sparse({{0, Rational(1)}, {1, Rational(2)}}));
    CHECK_FALSE(bad.solve(1).has_value());
  }

  TEST_CASE("modular rank agrees with rational rank") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
      int n = 6, m = 5;
      std::vector<std::vector<Rational>> rows(static_cast<std::size_t>(n));
      for (auto& r : rows) {
        for (int k = 0; k < m; ++k) r.emplace_back(std::uniform_int_distribution<int>(-3, 3)(rng));
      }
      rows[5] = rows[0];
      for (int k = 0; k < m; ++k) rows[4][static_cast<std::size_t>(k)] = rows[1][static_cast<std::size_t>(k)] + rows[2][static_cast<std::size_t>(k)];
      std::vector<std::vector<std::uint64_t>> mod;
      for (const auto& r : rows) {
        std::vector<std::uint64_t> v;
        for (const auto& x : r) v.push_back(x.mod(kRankPrime));
        mod.push_back(v);
      }
      CHECK(rank_mod_p(mod) == rank_rational(rows));
    }
  }
}
