#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "maxcons/classify.hpp"
#include "maxcons/tensors.hpp"

using namespace maxcons;
using maxcons::testing::random_onshell_poly;

namespace {

Rational small_rational(std::mt19937_64& rng) {
  return Rational(std::uniform_int_distribution<int>(-3, 3)(rng), std::uniform_int_distribution<int>(1, 3)(rng));
}

KillingSpinor real_ckv(std::size_t k) {
  const auto& K = killing_basis(KillingKind::CKV)[k].K;
  return K + conj_spinor(K);
}

bool same_field(const SpinorField& a, const SpinorField& b) {
  for (std::size_t k = 0; k < 4; ++k) {
    if (!(a[k] == b[k])) return false;
  }
  return true;
}

// Complex conjugate of a lower spinor field: component (A, A') comes from (A', A).
SpinorField conj_field(const SpinorField& q) {
  return {q[0].conj(), q[2].conj(), q[1].conj(), q[3].conj()};
}

// x-polynomial of degree <= 2 times a jet of order <= 1, plus a pure x term.
Poly random_gauge(std::mt19937_64& rng) {
  Poly chi;
  for (int t = 0; t < 3; ++t) {
    Poly m(Scalar(small_rational(rng), small_rational(rng)));
    const int xdeg = std::uniform_int_distribution<int>(0, 2)(rng);
    for (int d = 0; d < xdeg; ++d) m = m * Poly::var(Variable::coord(static_cast<int>(rng() % 2), static_cast<int>(rng() % 2)));
    const int p = std::uniform_int_distribution<int>(0, 1)(rng);
    const bool barred = rng() % 2 == 1;
    const int nu = barred ? p : p + 2, np = barred ? p + 2 : p;
    m = m * Poly::var(Variable::jet(p, static_cast<int>(rng() % static_cast<unsigned>(nu + 1)),
                                    static_cast<int>(rng() % static_cast<unsigned>(np + 1)), barred));
    chi += m;
  }
  return chi + Poly::var(Variable::coord(0, 1)) * Poly::var(Variable::coord(1, 1));
}

SpinorField gradient(const Poly& chi) {
  SpinorField g;
  for (int q = 0; q < 4; ++q) g[static_cast<std::size_t>(q)] = onshell_derivative(chi, q / 2, q % 2);
  return g;
}

// Random real combination of weight <= 1 basis currents with its expected coefficients.
std::pair<Current, std::map<BasisLabel, Scalar>> random_combination(std::mt19937_64& rng, int count) {
  const auto labels = basis_labels(1);
  std::map<BasisLabel, Scalar> want;
  Current c;
  for (int t = 0; t < count; ++t) {
    const BasisLabel& l = labels[rng() % labels.size()];
    Rational a = small_rational(rng);
    if (a.is_zero()) a = Rational(1);
    want[l] += Scalar(a);
    c += basis_current(l).scaled(Scalar(a));
  }
  for (auto it = want.begin(); it != want.end();) it = it->second.is_zero() ? want.erase(it) : std::next(it);
  return {c, want};
}

std::array<Poly, kSkewPairs> random_theta(std::mt19937_64& rng) {
  std::array<Poly, kSkewPairs> th;
  for (auto& p : th) p = random_onshell_poly(rng, 2, 2, 1);
  return th;
}

}  // namespace

TEST_SUITE("classify") {
  TEST_CASE("tensor energy current has characteristic 2U for every conformal Killing vector") {
    for (std::size_t k = 0; k < 15; ++k) {
      const KillingSpinor xi = real_ckv(k);
      const SpinorField Q = characteristic_of(current_extended(TensorKind::T, xi, 0));
      CHECK(same_field(Q, field_scaled(adjsym_U0(xi), Scalar(2))));
    }
  }

  TEST_CASE("spinor energy density has characteristic -U under the fixed spinor conventions") {
    for (std::size_t k = 0; k < 15; ++k) {
      const KillingSpinor xi = real_ckv(k);
      const SpinorField Q = characteristic_of(current_density(Family::T, xi));
      CHECK(same_field(Q, field_scaled(adjsym_U0(xi), Scalar(-1))));
    }
  }

  TEST_CASE("characteristic re-expansion of the divergence") {
    std::mt19937_64 rng(11);
    const auto labels = basis_labels(1);
    for (int t = 0; t < 6; ++t) {
      const Current c = basis_current(labels[rng() % labels.size()]);
      const Characteristic ch = characteristic_pair(c);
      CHECK(characteristic_verify(c, ch));
      CHECK(same_field(ch.qt, conj_field(ch.q)));
    }
  }

  TEST_CASE("zeroth order zilch and chiral characteristics are trivial") {
    for (std::size_t k = 0; k < 15; ++k) {
      CHECK(field_is_zero(characteristic_of(current_density(Family::Z, real_ckv(k)))));
    }
    for (const auto& Y : killing_basis(KillingKind::CKY)) {
      const Current v = current_density(Family::V, killing_sym_product({Y.K, Y.K}));
      const TrivialityReport r = triviality(v);
      CHECK(r.verdict == Verdict::Trivial);
      REQUIRE(r.chi.has_value());
      CHECK(same_field(gradient(*r.chi), r.characteristic));
    }
  }

  TEST_CASE("curl of a gradient vanishes and the witness search recovers gradients") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 8; ++t) {
      const SpinorField g = gradient(random_gauge(rng));
      for (const auto& p : spinorial_curl(g)) CHECK(p.is_zero());
      const auto chi = gradient_witness(g, 4);
      REQUIRE(chi.has_value());
      CHECK(same_field(gradient(*chi), g));
    }
  }

  TEST_CASE("leading adjoint of a type (1,1) spinor is U") {
    for (std::size_t k = 0; k < 15; ++k) CHECK(same_field(leading_adjoint(real_ckv(k)), adjsym_U0(real_ckv(k))));
  }

  TEST_CASE("leading Killing data of basis characteristics") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 4; ++t) {
      const KillingSpinor xi = real_ckv(rng() % 15);
      const LeadingKilling lk = extract_leading_killing(characteristic_of(current_density(Family::T, xi)));
      CHECK(lk.map == LeadingKilling::Map::Even);
      CHECK(lk.curl_order == 1);
      CHECK(lk.K == xi.scaled(Scalar(-1)));
      CHECK_FALSE(lk.kappa.has_value());
    }
    const BasisLabel z = basis_labels(1).back();
    const LeadingKilling lz = extract_leading_killing(characteristic_of(basis_current(z)));
    CHECK(lz.map == LeadingKilling::Map::Odd);
    CHECK(lz.curl_order == 2);
  }

  TEST_CASE("basis label counts and ordering") {
    CHECK(basis_labels(0).size() == 15);
    CHECK(basis_labels(1).size() == 99);
    const auto l2 = basis_labels(2);
    CHECK(l2.size() == 15 + 84 + 300 + 378);
    for (std::size_t k = 1; k < l2.size(); ++k) CHECK(l2[k - 1].weight() <= l2[k].weight());
    for (const auto& l : l2) CHECK(BasisLabel::parse(l.str()) == l);
    CHECK_THROWS(basis_labels(3));
  }

  TEST_CASE("normalization is uniform on weight <= 1 labels") {
    for (const auto& l : basis_labels(1)) CHECK(basis_label_ratio(l) == basis_label_normalization(l));
    CHECK(basis_normalization(BasisFamily::T) == Scalar(-1));
    CHECK(basis_normalization(BasisFamily::Z) == Scalar(1));
    CHECK(basis_normalization(BasisFamily::Zp) == Scalar(-1));
  }

  TEST_CASE("basis currents are nontrivial and trivial currents are trivial") {
    std::mt19937_64 rng(17);
    const auto labels = basis_labels(1);
    for (int t = 0; t < 5; ++t) CHECK_FALSE(is_trivial(basis_current(labels[rng() % labels.size()])));
    for (int t = 0; t < 3; ++t) {
      const Current tc = trivial_current(random_theta(rng));
      CHECK(is_conserved(tc));
      CHECK(is_trivial(tc));
    }
  }

  TEST_CASE("seeded round trips through the descent") {
    std::mt19937_64 rng(2024);
    for (int t = 0; t < 25; ++t) {
      auto [c, want] = random_combination(rng, 1 + static_cast<int>(rng() % 3));
      const Current input = c + trivial_current(random_theta(rng));
      const Decomposition d = classify_current(input);
      std::map<BasisLabel, Scalar> got(d.terms.begin(), d.terms.end());
      CHECK(got == want);
      CHECK(d.residual_trivial);
      CHECK(reconstruction_holds(input, d));
    }
  }

  TEST_CASE("tensor form of a basis current classifies like its spinor form") {
    const BasisLabel l = basis_labels(1)[20];
    const Decomposition d = classify_current(basis_current(l, Form::Tensor));
    REQUIRE(d.terms.size() == 1);
    CHECK(d.terms[0].first == l);
    CHECK(d.terms[0].second == Scalar(1));
  }

  TEST_CASE("full and minimal chiral currents are equivalent") {
    const KillingSpinor xi = real_ckv(0);
    for (std::size_t y : {0u, 4u, 8u}) {
      const KillingSpinor& Y = killing_basis(KillingKind::CKY)[y].K;
      const Current vm = current_extended(TensorKind::V, xi, 0, &Y);
      const Current vf = current_extended_V_full(xi, Y, 0);
      CHECK(equivalent(vf, vm));
      CHECK_FALSE(equivalent(vf, vm.scaled(Scalar(2))));
    }
  }

  TEST_CASE("linear currents leave a nontrivial linear residual") {
    const auto ws = w_solution_basis(1);
    REQUIRE_FALSE(ws.empty());
    const Current w = density_w(ws[0]);
    const Decomposition d = classify_current(w);
    CHECK(d.terms.empty());
    CHECK_FALSE(d.residual_trivial);
    CHECK(d.linear_part.has_value());
    CHECK(reconstruction_holds(w, d));
  }

  TEST_CASE("classification rejects non-conserved input") {
    Current c = Current::spinor({Poly::var(Variable::jet(0, 0, 0, false)), Poly(), Poly(), Poly()});
    CHECK_THROWS_AS(classify_current(c), ClassificationError);
  }

  TEST_CASE("current weight") {
    CHECK(current_weight(basis_current(basis_labels(0)[0])) == 0);
    CHECK(current_weight(basis_current(basis_labels(1).back())) == 1);
  }

  TEST_CASE("dimension formulas") {
    CHECK(dim_T(0) == 15);
    CHECK(dim_Z(0) == 84);
    CHECK(dim_V(0) == 378);
    CHECK(dim_T(1) == 300);
    CHECK(dim_Z(1) == 825);
    CHECK(dim_V(1) == 3120);
  }

  TEST_CASE("evaluation rank detects dependence") {
    const auto labels = basis_labels(0);
    std::vector<Current> cs;
    for (const auto& l : labels) cs.push_back(basis_current(l));
    CHECK(evaluation_rank(cs, 0) == 15);
    cs.push_back(cs[0].scaled(Scalar(3)) + cs[4]);
    CHECK(evaluation_rank(cs, 0) == 15);
  }
}

TEST_SUITE("classify_large") {
  TEST_CASE("weight 0 and 1 dimensions, degree breakdowns and ranks") {
    const DimsReport r0 = dims_report(0, true, 0, 4);
    REQUIRE(r0.families.size() == 3);
    CHECK(r0.families[0].enumerated == 15);
    CHECK(r0.families[0].rank == 15);
    CHECK(r0.families[0].degree_breakdown == std::vector<int>{4, 7, 4});
    CHECK(r0.families[1].enumerated == 84);
    CHECK(r0.families[1].rank == 84);
    CHECK(r0.families[1].degree_breakdown == std::vector<int>{9, 20, 26, 20, 9});
    CHECK(r0.families[2].enumerated == 378);
    CHECK(r0.families[2].rank == 378);
    CHECK(r0.families[2].degree_breakdown == std::vector<int>{24, 54, 72, 78, 72, 54, 24});
    const DimsReport r1 = dims_report(1, true, 0, 4);
    CHECK(r1.families[0].enumerated == 300);
    CHECK(r1.families[0].rank == 300);
    CHECK(r1.families[1].enumerated == -1);
  }

  TEST_CASE("normalization is uniform on all weight 2 labels") {
    for (const auto& l : basis_labels(2)) CHECK(basis_label_ratio(l) == basis_label_normalization(l));
  }

  TEST_CASE("duality parity: T and Z even, V odd") {
    for (const auto& l : basis_labels(2)) {
      const Current c = basis_current(l);
      Current d = c;
      for (auto& p : d.c) p = duality_transform(p);
      if (l.prod.chiral()) {
        CHECK((d + c).is_zero());
      } else {
        CHECK((d - c).is_zero());
      }
    }
  }

  TEST_CASE("tensor basis has full rank") {
    std::vector<Current> cs;
    for (const auto& e : basis_enumerate(1, Form::Tensor, 4)) cs.push_back(e.current);
    CHECK(evaluation_rank(cs, 7) == 99);
  }

  TEST_CASE("weight 2 chiral round trips") {
    std::mt19937_64 rng(99);
    const auto labels = basis_labels(2);
    for (int t = 0; t < 5; ++t) {
      const BasisLabel& a = labels[rng() % labels.size()];
      const BasisLabel& b = labels[rng() % labels.size()];
      const Current input = basis_current(a).scaled(Scalar(2)) + basis_current(b).scaled(Scalar(Rational(-1, 3)));
      const Decomposition d = classify_current(input);
      std::map<BasisLabel, Scalar> want;
      want[a] += Scalar(2);
      want[b] += Scalar(Rational(-1, 3));
      std::map<BasisLabel, Scalar> got(d.terms.begin(), d.terms.end());
      CHECK(got == want);
      CHECK(d.residual_trivial);
    }
  }
}
