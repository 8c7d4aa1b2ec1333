#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "maxcons/currents.hpp"

using namespace maxcons;
using maxcons::testing::random_onshell_poly;

namespace {

Rational small_rational(std::mt19937_64& rng) {
  return Rational(std::uniform_int_distribution<int>(-3, 3)(rng), std::uniform_int_distribution<int>(1, 3)(rng));
}

// Real conformal Killing vector: a rational combination of xi + conj(xi) over three basis elements.
KillingSpinor random_real_ckv(std::mt19937_64& rng) {
  const auto& basis = killing_basis(KillingKind::CKV);
  KillingSpinor r(1, 1);
  for (int t = 0; t < 3; ++t) {
    const auto& K = basis[rng() % basis.size()].K;
    r += (K + conj_spinor(K)).scaled(Scalar(small_rational(rng)));
  }
  return r.is_zero() ? basis[0].K + conj_spinor(basis[0].K) : r;
}

KillingSpinor random_kappa(std::mt19937_64& rng) {
  const auto& Y = killing_basis(KillingKind::CKY);
  KillingSpinor r(0, 4);
  for (int t = 0; t < 2; ++t) {
    r += killing_sym_product({Y[rng() % Y.size()].K, Y[rng() % Y.size()].K})
             .scaled(Scalar(small_rational(rng), small_rational(rng)));
  }
  return r.is_zero() ? killing_sym_product({Y[0].K, Y[0].K}) : r;
}

bool curl_zero_offshell(const std::array<Poly, 3>& lhs, const std::array<Poly, 3>& rhs) {
  for (std::size_t k = 0; k < 3; ++k) {
    if (!(lhs[k] == rhs[k])) return false;
  }
  return true;
}

bool fields_equal(const SpinorField& a, const SpinorField& b) {
  for (std::size_t k = 0; k < 4; ++k) {
    if (!(a[k] == b[k])) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("currents") {
  TEST_CASE("field equations vanish on-shell and not off-shell") {
    OffShellJets off;
    for (bool barred : {false, true}) {
      CHECK(field_is_zero(field_equation(onshell_jets(), barred)));
      CHECK_FALSE(field_is_zero(field_equation(off, barred)));
    }
  }

  TEST_CASE("prolonged symmetries commute with total derivatives") {
    std::mt19937_64 rng(31);
    const auto& basis = killing_basis(KillingKind::CKV);
    for (int t = 0; t < 20; ++t) {
      ProlongedSymmetry X(basis[static_cast<std::size_t>(t) % basis.size()].K);
      Poly e = random_onshell_poly(rng, 4, 2, 1);
      int C = t % 2, Cp = (t / 2) % 2;
      CHECK(X.apply(onshell_derivative(e, C, Cp)) == onshell_derivative(X.apply(e), C, Cp));
    }
  }

  TEST_CASE("prolonged symmetries act on coordinates trivially and map solutions to solutions") {
    ProlongedSymmetry X(ckv("xi14"));
    CHECK(X.apply(Poly::var(Variable::coord(0, 1))).is_zero());
    // dilation: pi phi = x.D phi + 2 phi
    Poly phi = Poly::var(Variable::jet(0, 1, 0, false));
    Poly expect = phi.scaled(Scalar(2));
    for (int C = 0; C <= 1; ++C) {
      for (int Cp = 0; Cp <= 1; ++Cp) expect += Poly::var(Variable::coord(C, Cp)) * onshell_derivative(phi, C, Cp);
    }
    CHECK(X.apply(phi) == expect);
  }

  TEST_CASE("commutator of prolonged symmetries") {
    std::mt19937_64 rng(32);
    const auto& basis = killing_basis(KillingKind::CKV);
    for (int t = 0; t < 12; ++t) {
      const auto& z1 = basis[rng() % basis.size()].K;
      const auto& z2 = basis[rng() % basis.size()].K;
      ProlongedSymmetry X1(z1), X2(z2), X12(lie_killing(z1, z2));
      Poly e = random_onshell_poly(rng, 3, 2, 1);
      // [pr X_1, pr X_2] = pr X_{[z2, z1]} for symmetries generated by Lie derivatives of the field
      Poly comm = X1.apply(X2.apply(e)) - X2.apply(X1.apply(e));
      CHECK(comm == -X12.apply(e));
    }
  }

  TEST_CASE("low order adjoint symmetries") {
    for (const auto& [label, K] : killing_basis(KillingKind::CKV)) {
      CAPTURE(label);
      CHECK_FALSE(field_is_zero(adjsym_U0(K)));
      CHECK(adjsym_verify({adjsym_U0(K)}));
      CHECK(AdjointSymmetry{adjsym_U0(K)}.order() == 0);
    }
    std::mt19937_64 rng(33);
    for (int t = 0; t < 10; ++t) {
      AdjointSymmetry V{adjsym_V0(random_kappa(rng))};
      CHECK(adjsym_verify(V));
      CHECK(V.order() == 1);
    }
  }

  TEST_CASE("curl identities off-shell at p = 0") {
    OffShellJets off;
    for (const auto& [label, K] : killing_basis(KillingKind::CKV)) {
      CAPTURE(label);
      CHECK(curl_zero_offshell(spinor_curl(adjsym_U0(K, off), off.deriv()), radj_rhs(K, off)));
    }
    const auto& Y = killing_basis(KillingKind::CKY);
    for (std::size_t a = 0; a < Y.size(); a += 2) {
      for (std::size_t b = a; b < Y.size(); b += 3) {
        KillingSpinor kappa = killing_sym_product({Y[a].K, Y[b].K});
        CAPTURE(Y[a].label);
        CAPTURE(Y[b].label);
        CHECK(curl_zero_offshell(spinor_curl(adjsym_V0(kappa, off), off.deriv()), sadj_rhs(kappa, off)));
      }
    }
  }

  TEST_CASE("prolonged adjoint symmetries") {
    std::mt19937_64 rng(34);
    for (int t = 0; t < 4; ++t) {
      KillingSpinor xi = random_real_ckv(rng), z1 = random_real_ckv(rng), z2 = random_real_ckv(rng);
      auto P1 = adjsym_U(xi, {z1});
      CHECK(adjsym_verify(P1));
      CHECK(P1.order() == 1);
      auto P2 = adjsym_U(xi, {z1, z2});
      CHECK(adjsym_verify(P2));
      CHECK(P2.order() == 2);
      CHECK(fields_equal(P2.c, adjsym_U(xi, {z2, z1}).c));
      auto S1 = adjsym_V(random_kappa(rng), {z1});
      CHECK(adjsym_verify(S1));
      CHECK(S1.order() == 2);
    }
  }

  TEST_CASE("Lie derivative identities for p = 1") {
    std::mt19937_64 rng(35);
    for (int t = 0; t < 10; ++t) {
      KillingSpinor xi = random_real_ckv(rng), z = random_real_ckv(rng);
      SpinorField lhs = jet_lie(z, adjsym_U0(xi));
      SpinorField rhs = field_add(adjsym_U0(lie_killing(z, xi)), adjsym_U(xi, {z}).c);
      CHECK_FALSE(field_is_zero(adjsym_U(xi, {z}).c));
      CHECK(fields_equal(lhs, rhs));
      KillingSpinor kappa = random_kappa(rng);
      SpinorField lhsS = jet_lie(z, adjsym_V0(kappa));
      SpinorField rhsS = field_add(adjsym_V0(lie_killing(z, kappa)), adjsym_V(kappa, {z}).c);
      CHECK_FALSE(field_is_zero(adjsym_V(kappa, {z}).c));
      CHECK(fields_equal(lhsS, rhsS));
    }
  }

  TEST_CASE("Lie derivative identities for p = 2") {
    std::mt19937_64 rng(36);
    for (int t = 0; t < 10; ++t) {
      KillingSpinor xi = random_real_ckv(rng), z1 = random_real_ckv(rng), z2 = random_real_ckv(rng);
      SpinorField lhs = field_add(jet_lie(z2, adjsym_U(xi, {z1}).c), jet_lie(z1, adjsym_U(xi, {z2}).c));
      SpinorField rhs = field_add(adjsym_U(lie_killing(z2, xi), {z1}).c, adjsym_U(lie_killing(z1, xi), {z2}).c);
      rhs = field_add(rhs, field_scaled(adjsym_U(xi, {z1, z2}).c, Scalar(2)));
      CHECK(fields_equal(lhs, rhs));
      if (t < 4) {
        KillingSpinor kappa = random_kappa(rng);
        SpinorField l2 = field_add(jet_lie(z2, adjsym_V(kappa, {z1}).c), jet_lie(z1, adjsym_V(kappa, {z2}).c));
        SpinorField r2 =
            field_add(adjsym_V(lie_killing(z2, kappa), {z1}).c, adjsym_V(lie_killing(z1, kappa), {z2}).c);
        r2 = field_add(r2, field_scaled(adjsym_V(kappa, {z1, z2}).c, Scalar(2)));
        CHECK(fields_equal(l2, r2));
      }
    }
  }

  TEST_CASE("W equation solution spaces") {
    CHECK(w_solution_basis(0, false).size() == 4);
    CHECK(w_solution_basis(0, true).empty());
    for (int d = 1; d <= 2; ++d) {
      auto raw = w_solution_basis(d, false);
      auto quo = w_solution_basis(d, true);
      CAPTURE(d);
      CHECK(quo.size() < raw.size());
      for (const auto& w : quo) {
        CHECK_NOTHROW(adjsym_W(w));
        CHECK_FALSE(is_gradient_field(w));
        CHECK(is_conserved(density_w(w)));
      }
    }
    SpinorField bad;
    bad[0] = Poly::var(Variable::coord(1, 1));
    CHECK_THROWS_AS(adjsym_W(bad), std::invalid_argument);
  }

  TEST_CASE("current densities from conformal Killing vectors are real and conserved") {
    std::mt19937_64 rng(37);
    for (int t = 0; t < 6; ++t) {
      KillingSpinor xi = random_real_ckv(rng), z = random_real_ckv(rng);
      Current T = current_density(Family::T, xi);
      CHECK(T.is_real());
      CHECK(is_conserved(T));
      Current Z = current_density(Family::Z, xi, {z});
      CHECK(Z.is_real());
      CHECK(is_conserved(Z));
    }
    Current zero = current_density(Family::T, KillingSpinor(1, 1));
    CHECK(zero.is_zero());
  }

  TEST_CASE("weight zero and weight one basis currents") {
    for (const auto& lab : real_basis(1)) {
      CAPTURE(lab.str());
      Current c = basis_current(lab);
      CHECK(c.is_real());
      CHECK(is_conserved(c));
      CHECK_FALSE(c.is_zero());
      CHECK(c.order() == 0);
    }
    for (const auto& lab : real_basis(2)) {
      CAPTURE(lab.str());
      Current c = basis_current(lab);
      CHECK(c.is_real());
      CHECK(is_conserved(c));
      CHECK_FALSE(c.is_zero());
      CHECK(c.order() <= 1);
    }
  }

  TEST_CASE("sampled chiral basis currents are real and conserved") {
    const auto& labs = chiral_basis(1);
    for (std::size_t q = 0; q < labs.size(); q += 17) {
      CAPTURE(labs[q].str());
      Current c = basis_current(labs[q]);
      CHECK(c.is_real());
      CHECK(is_conserved(c));
    }
  }
}

TEST_SUITE("currents_large") {
  TEST_CASE("all weight two basis currents are real and conserved") {
    for (const auto& lab : real_basis(3)) {
      CAPTURE(lab.str());
      Current c = basis_current(lab);
      CHECK_FALSE(c.is_zero());
      CHECK(c.order() == 2);
      CHECK(c.is_real());
      CHECK(is_conserved(c));
    }
    for (const auto& lab : chiral_basis(1)) {
      CAPTURE(lab.str());
      Current c = basis_current(lab);
      CHECK_FALSE(c.is_zero());
      CHECK(c.order() == 2);
      CHECK(c.is_real());
      CHECK(is_conserved(c));
    }
  }
}
