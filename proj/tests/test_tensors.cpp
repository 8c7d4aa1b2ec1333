#include <random>
#include <set>
#include <string>

#include "doctest.h"
#include "maxcons/tensors.hpp"

using namespace maxcons;

namespace {

Rational small_rational(std::mt19937_64& rng) {
  return Rational(std::uniform_int_distribution<int>(-3, 3)(rng), std::uniform_int_distribution<int>(1, 3)(rng));
}

KillingSpinor random_real_ckv(std::mt19937_64& rng) {
  const auto& basis = killing_basis(KillingKind::CKV);
  KillingSpinor r(1, 1);
  for (int t = 0; t < 2; ++t) {
    const auto& K = basis[rng() % basis.size()].K;
    r += (K + conj_spinor(K)).scaled(Scalar(small_rational(rng)));
  }
  return r.is_zero() ? basis[0].K + conj_spinor(basis[0].K) : r;
}

int eps(int a, int b) { return a == b ? 0 : (a == 0 ? 1 : -1); }

// phi_{AB} = 1/2 F_{AA'BB'} eps^{A'B'} (barred: contract the unprimed pair), restricted on-shell.
Poly field_spinor_component(const FrameTensor& F, bool barred, int x, int y) {
  Poly v;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      if (eps(a, b) == 0) continue;
      Frame mu = barred ? frame_of(a, x) : frame_of(x, a);
      Frame nu = barred ? frame_of(b, y) : frame_of(y, b);
      v += F.at({static_cast<int>(mu), static_cast<int>(nu)}).scaled(Scalar(eps(a, b)));
    }
  }
  return restrict_onshell(v.scaled(Scalar(Rational(1, 2))));
}

// Replaces every on-shell jet by (pr X_xi)^n of it.
Poly extend_jets(const ProlongedSymmetry& X, int n, const Poly& e) {
  return e.substitute([&](Variable v) {
    Poly p = Poly::var(v);
    if (v.kind() != Variable::Kind::OnShellJet) return p;
    for (int k = 0; k < n; ++k) p = X.apply(p);
    return p;
  });
}

Current extend_current(const KillingSpinor& xi, int n, const Current& c) {
  ProlongedSymmetry X(xi);
  Current r = c;
  for (auto& p : r.c) p = extend_jets(X, n, p);
  return r;
}

bool same_onshell(const Current& tensor_form, const Current& spinor_form) {
  Current d = tensor_to_spinor(tensor_form) - spinor_form;
  return d.is_zero();
}

}  // namespace

TEST_SUITE("tensors") {
  TEST_CASE("frame tensor algebra") {
    FrameTensor g = ft_metric(false), gu = ft_metric(true);
    FrameTensor d = ft_contract(gu, g, {{1, 0}});
    CHECK(d == ft_delta());
    CHECK(ft_trace(ft_delta(), 0, 1)[0] == Poly(4));
    FrameTensor F = field_tensor();
    CHECK(F == ft_antisymmetrize(F, {0, 1}));
    CHECK(ft_lower_all(ft_raise_all(F)) == F);
    // Double dual is minus the identity on 2-forms in Lorentzian signature.
    CHECK(dual_two_form(dual_two_form(F)) == F.scaled(Scalar(-1)));
    FrameTensor e = ft_volume();
    CHECK(e == ft_antisymmetrize(e, {0, 1, 2, 3}));
  }

  TEST_CASE("field spinors recovered from the field tensor") {
    FrameTensor F = field_tensor();
    for (int x = 0; x < 2; ++x) {
      for (int y = 0; y < 2; ++y) {
        CHECK(field_spinor_component(F, false, x, y) == Poly::var(Variable::jet(0, x + y, 0, false)));
        CHECK(field_spinor_component(F, true, x, y) == Poly::var(Variable::jet(0, 0, x + y, true)));
      }
    }
  }

  TEST_CASE("tensor Lie derivative matches the prolonged spinor action") {
    FrameTensor F = field_tensor();
    for (const auto& [label, K] : killing_basis(KillingKind::CKV)) {
      CAPTURE(label);
      ProlongedSymmetry X(K);
      FrameTensor LF = lie_two_form(K, F);
      for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
          CHECK(field_spinor_component(LF, false, x, y) == X.apply(Poly::var(Variable::jet(0, x + y, 0, false))));
          CHECK(field_spinor_component(LF, true, x, y) == X.apply(Poly::var(Variable::jet(0, 0, x + y, true))));
        }
      }
    }
  }

  TEST_CASE("CKY tensors and the quartic KY tensor") {
    const auto& Y = killing_basis(KillingKind::CKY);
    for (std::size_t k = 0; k < Y.size(); k += 3) {
      CAPTURE(Y[k].label);
      FrameTensor Yt = cky_tensor(Y[k].K);
      CHECK_FALSE(Yt.is_zero());
      CHECK(Yt == ft_antisymmetrize(Yt, {0, 1}));
      FrameTensor Y4 = ky4_build(Yt, Yt);
      CHECK_FALSE(Y4.is_zero());
      CHECK(Y4 == ft_antisymmetrize(Y4, {0, 1}));
      CHECK(Y4 == ft_antisymmetrize(Y4, {2, 3}));
      CHECK(Y4 == ft_permute(Y4, {2, 3, 0, 1}));
    }
  }

  // Every tensorial current equals minus the stated spinor coefficient times the spinor density.
  // The overall sign is uniform across T, Z, V and W and reflects the metric signature of the null frame.
  TEST_CASE("stress-energy current matches its spinor form") {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 4; ++t) {
      KillingSpinor xi = random_real_ckv(rng);
      Current spin = current_density(Family::T, xi);
      for (int n = 0; n <= 1; ++n) {
        CAPTURE(n);
        Current tens = current_extended(TensorKind::T, xi, n);
        CHECK(is_conserved(tens));
        CHECK(same_onshell(tens, extend_current(xi, n, spin).scaled(Scalar(-2))));
      }
    }
  }

  TEST_CASE("zilch current matches its spinor form") {
    std::mt19937_64 rng(42);
    for (int t = 0; t < 2; ++t) {
      KillingSpinor xi = random_real_ckv(rng);
      Current spin = current_density(Family::Z, xi, {xi});
      for (int n = 0; n <= 1; ++n) {
        CAPTURE(n);
        Current tens = current_extended(TensorKind::Z, xi, n);
        CHECK(is_conserved(tens));
        CHECK(same_onshell(tens, extend_current(xi, n, spin).scaled(Scalar(-4))));
      }
    }
  }

  TEST_CASE("chiral current matches its spinor form") {
    std::mt19937_64 rng(43);
    const auto& Ys = killing_basis(KillingKind::CKY);
    for (int t = 0; t < 3; ++t) {
      KillingSpinor xi = random_real_ckv(rng);
      const KillingSpinor& Y = Ys[rng() % Ys.size()].K;
      // The quartic tensor carries (3/2) Y.Y eps eps, so the density uses kappa = 3 Y.Y with factor -8.
      KillingSpinor kappa = killing_sym_product({Y, Y}).scaled(Scalar(3));
      Current spin = current_density(Family::V, kappa, {xi});
      for (int n = 0; n <= 1; ++n) {
        CAPTURE(n);
        Current full = current_extended_V_full(xi, Y, n);
        CHECK_FALSE(full.is_zero());
        CHECK(is_conserved(full));
        CHECK(same_onshell(full, extend_current(xi, n, spin).scaled(Scalar(-8))));
        Current minimal = current_extended(TensorKind::V, xi, n, &Y);
        CHECK_FALSE(minimal.is_zero());
        CHECK(is_conserved(minimal));
        CHECK(minimal.order() == n + 1);
      }
    }
  }

  TEST_CASE("quartic KY tensor projects onto the totally symmetric spinor") {
    const auto& Ys = killing_basis(KillingKind::CKY);
    for (const auto& [label, Y] : Ys) {
      CAPTURE(label);
      FrameTensor Yt = cky_tensor(Y);
      FrameTensor dY = dual_two_form(Yt);
      // Self-dual and anti-self-dual halves do not mix.
      FrameTensor S = (Yt - dY.scaled(Scalar::i())).scaled(Scalar(Rational(1, 2)));
      FrameTensor Sb = (Yt + dY.scaled(Scalar::i())).scaled(Scalar(Rational(1, 2)));
      CHECK_FALSE(S.is_zero());
      CHECK(ky4_build(S, Sb).is_zero());
      // Y4_{M N M N} = (3/2) (Y.Y)_{1'1'1'1'}
      KillingSpinor YY = killing_sym_product({Y, Y});
      CHECK(ky4_build(Yt, Yt).at({2, 1, 2, 1}) == lower_component(YY, 0, 4).scaled(Scalar(Rational(3, 2))));
    }
  }

  TEST_CASE("linear currents match their spinor form") {
    for (int d = 1; d <= 2; ++d) {
      for (const auto& w : w_solution_basis(d, true)) {
        auto [W, Wt] = w_one_forms(w);
        Current tens = tensor_current_W(field_tensor(), W, Wt);
        CHECK(is_conserved(tens));
        CHECK(same_onshell(tens, density_w(w).scaled(Scalar(-1))));
      }
    }
  }

  TEST_CASE("extended currents are conserved") {
    std::mt19937_64 rng(44);
    for (int t = 0; t < 2; ++t) {
      KillingSpinor xi = random_real_ckv(rng);
      for (int n = 0; n <= 2; ++n) {
        CAPTURE(n);
        Current T = current_extended(TensorKind::T, xi, n);
        CHECK(T.order() == n);
        CHECK(is_conserved(T));
        if (n == 2) continue;
        Current Z = current_extended(TensorKind::Z, xi, n);
        CHECK(Z.order() == n + 1);
        CHECK(is_conserved(Z));
      }
      auto [W, Wt] = w_one_forms(w_solution_basis(1, true).front());
      Current Wn = current_extended(TensorKind::W, xi, 1, nullptr, &W, &Wt);
      CHECK(is_conserved(Wn));
    }
  }

  // Three of the stated identities fail for the tensors as defined; each failure is pinned here.
  // Zilch: Z^{mu nu rho} - Z^{nu mu rho} carries eps_{BC} phi_A^D chi_{A'B'C'D} terms that do not vanish on-shell.
  // Chiral: the mu-traces against the Weyl-type slots are not of the stated form.
  TEST_CASE("conserved tensor identities") {
    const std::set<std::string> known_false = {"totally symmetric", "trace mu tau skew", "double trace"};
    std::mt19937_64 rng(45);
    KillingSpinor xi = random_real_ckv(rng);
    for (TensorKind k : {TensorKind::T, TensorKind::Z, TensorKind::V}) {
      for (int n = 0; n <= 1; ++n) {
        for (const KillingSpinor* x : std::vector<const KillingSpinor*>{nullptr, &xi}) {
          if (k == TensorKind::V && n == 1 && x != nullptr) continue;
          ConservedTensor ct = conserved_tensor(k, n, x);
          CHECK_FALSE(ct.t.is_zero());
          for (const auto& p : tensor_properties(ct)) {
            std::string kind = tensor_kind_name(k);
            CAPTURE(kind);
            CAPTURE(n);
            CAPTURE(p.name);
            CHECK(p.pass == (known_false.count(p.name) == 0));
          }
        }
      }
    }
  }

  TEST_CASE("chiral tensor is the Weyl-type projection of two field gradients") {
    FrameTensor V = conserved_tensor(TensorKind::V, 0).t;
    FrameTensor trace = ft_trace(V, 0, 1);
    FrameTensor M = V + ft_outer(ft_delta(), trace.scaled(Scalar(Rational(-1, 2))));
    // V = M - 1/2 delta tr M with tr M = -tr V
    FrameTensor DF = ft_derivative(field_tensor());
    FrameTensor DFu = ft_raise(DF, 2);
    for (int m = 0; m < 4; ++m) {
      for (int n = 0; n < 4; ++n) {
        FrameTensor A({false, false}), B({false, false});
        for (int a = 0; a < 4; ++a) {
          for (int b = 0; b < 4; ++b) {
            A.at({a, b}) = DFu.at({a, b, m});
            B.at({a, b}) = DF.at({a, b, n});
          }
        }
        FrameTensor K = ky4_build(A, B).scaled(Scalar(2));
        for (std::size_t f = 0; f < K.size(); ++f) {
          CHECK(K[f] == M.at({m, n, K.value(f, 0), K.value(f, 1), K.value(f, 2), K.value(f, 3)}));
        }
      }
    }
  }

  TEST_CASE("chiral tensor contracted with constant data reproduces the minimal current") {
    const auto& Ys = killing_basis(KillingKind::CKY);
    const auto& Xs = killing_basis(KillingKind::CKV);
    // Translation and a constant CKY: the minimal current is -2/3 of the contraction.
    KillingSpinor xi = Xs[0].K + conj_spinor(Xs[0].K);
    FrameTensor Y4u = ft_raise_all(ky4_build(cky_tensor(Ys[0].K), cky_tensor(Ys[0].K)));
    FrameTensor c = ft_contract(conserved_tensor(TensorKind::V, 0).t, ckv_tensor(xi), {{1, 0}});
    c = ft_contract(c, Y4u, {{1, 0}, {2, 1}, {3, 2}, {4, 3}});
    Current contracted = Current::tensor({c[0], c[1], c[2], c[3]});
    Current minimal = current_extended(TensorKind::V, xi, 0, &Ys[0].K);
    CHECK_FALSE(minimal.is_zero());
    Current diff = contracted + minimal.scaled(Scalar(Rational(3, 2)));
    for (const auto& p : diff.c) CHECK(restrict_onshell(p).is_zero());
  }

  TEST_CASE("tensor kind names round trip") {
    for (TensorKind k : {TensorKind::T, TensorKind::Z, TensorKind::V, TensorKind::W}) {
      CHECK(parse_tensor_kind(tensor_kind_name(k)) == k);
    }
    CHECK_THROWS_AS(parse_tensor_kind("Q"), std::invalid_argument);
  }
}
