#include <map>
#include <random>

#include "doctest.h"
#include "maxcons/killing.hpp"
#include "maxcons/linalg.hpp"

using namespace maxcons;

namespace {

Poly x(int A, int Ap) { return Poly::var(Variable::coord(A, Ap)); }

// Rank of the evaluation matrix at seeded points, modulo the rank prime.
std::size_t eval_rank(const std::vector<KillingSpinor>& list, std::uint64_t seed, int points = 12) {
  std::mt19937_64 rng(seed);
  std::vector<std::array<std::uint64_t, 4>> pts;
  for (int t = 0; t < points; ++t) {
    std::array<std::uint64_t, 4> v{};
    for (auto& c : v) c = rng() % kRankPrime;
    pts.push_back(v);
  }
  std::vector<std::vector<std::uint64_t>> rows;
  for (const auto& K : list) {
    std::vector<std::uint64_t> row;
    for (const auto& comp : K.c) {
      for (const auto& pt : pts) {
        auto val = [&](Variable v) { return pt[static_cast<std::size_t>(v.coord_u() * 2 + v.coord_p())]; };
        for (int part = 0; part < 4; ++part) row.push_back(comp.eval_mod(val, part, kRankPrime));
      }
    }
    rows.push_back(std::move(row));
  }
  return rank_mod_p(rows);
}

std::size_t exact_rank(const std::vector<KillingSpinor>& list) {
  if (list.empty()) return 0;
  ColumnIndex idx(static_cast<int>(list[0].c.size()));
  Echelon e;
  for (const auto& K : list) e.insert(idx.flatten(K.c));
  return e.rank();
}

}  // namespace

TEST_SUITE("killing") {
  TEST_CASE("verification of simple spinor fields") {
    KillingSpinor c(2, 3);
    for (auto& p : c.c) p = Poly(7);
    CHECK(killing_verify(c));
    KillingSpinor dil(1, 1);
    for (int A = 0; A <= 1; ++A) {
      for (int Ap = 0; Ap <= 1; ++Ap) dil.at(A, Ap) = x(A, Ap);
    }
    CHECK(killing_verify(dil));
    KillingSpinor bad(1, 1);
    bad.at(0, 0) = x(0, 0) * x(0, 0);
    CHECK_FALSE(killing_verify(bad));
  }

  TEST_CASE("explicit bases") {
    const auto& ckvs = killing_basis(KillingKind::CKV);
    const auto& ckys = killing_basis(KillingKind::CKY);
    REQUIRE(ckvs.size() == 15);
    REQUIRE(ckys.size() == 10);
    std::vector<KillingSpinor> a, b;
    for (const auto& e : ckvs) {
      CHECK(e.K.k == 1);
      CHECK(e.K.l == 1);
      CHECK(killing_verify(e.K));
      a.push_back(e.K);
    }
    for (const auto& e : ckys) {
      CHECK(e.K.k == 0);
      CHECK(e.K.l == 2);
      CHECK(killing_verify(e.K));
      b.push_back(e.K);
    }
    CHECK(exact_rank(a) == 15);
    CHECK(exact_rank(b) == 10);
    const KillingSpinor& d = ckv("xi14");
    for (int A = 0; A <= 1; ++A) {
      for (int Ap = 0; Ap <= 1; ++Ap) CHECK(d.at(A, Ap) == x(A, Ap));
    }
    CHECK(ckv("xi01").at(0, 0) == Poly(1));
    CHECK(ckv("xi01").at(1, 1).is_zero());
    // conjugate of x^{(A}_{C'} o^{B)} obar^{C'}
    const KillingSpinor& y = cky("Y11");
    CHECK(y.at(0, 0) == -x(1, 0));
    CHECK(y.at(0, 1) == x(1, 1).scaled(Scalar(Rational(-1, 2))));
    CHECK(y.at(0, 2).is_zero());
    CHECK(conj_spinor(ckv("xi02")) == ckv("xi02b"));
    CHECK(conj_spinor(ckv("xi12")) == ckv("xi12b"));
    CHECK(conj_spinor(ckv("xi22")) == ckv("xi22b"));
    CHECK(conj_spinor(ckv("xi21")) == ckv("xi21"));
  }

  TEST_CASE("solution space dimensions") {
    struct Case {
      int k, l;
      long long dim;
    };
    for (Case cs : {Case{1, 1, 15}, Case{0, 2, 10}, Case{0, 4, 35}, Case{2, 2, 84}}) {
      auto sols = killing_solve(cs.k, cs.l);
      CHECK(static_cast<long long>(sols.size()) == cs.dim);
      CHECK(eval_rank(sols, 1) == sols.size());
      for (const auto& K : sols) {
        CHECK(killing_verify(K));
        CHECK(K.degree() <= cs.k + cs.l);
      }
    }
    CHECK(dim_kk(1) == 15);
    CHECK(dim_kk(2) == 84);
    CHECK(dim_kk(3) == 300);
    CHECK(dim_kk4(0) == 35);
    CHECK(dim_kk4(1) == 189);
  }

  TEST_CASE("symmetrized products") {
    KillingSpinor sq = killing_sym_product({ckv("xi01"), ckv("xi01")});
    CHECK(sq.k == 2);
    CHECK(sq.l == 2);
    CHECK(sq.at(0, 0) == Poly(1));
    for (int a = 0; a <= 2; ++a) {
      for (int b = 0; b <= 2; ++b) {
        if (a || b) CHECK(sq.at(a, b).is_zero());
      }
    }
    KillingSpinor yy = killing_sym_product({cky("Y01"), cky("Y03")});
    CHECK(yy.k == 0);
    CHECK(yy.l == 4);
    for (int b = 0; b <= 4; ++b) CHECK(yy.at(0, b) == (b == 2 ? Poly(Scalar(Rational(1, 6))) : Poly()));
    CHECK_THROWS(killing_sym_product({cky("Y01"), cky("Y01"), cky("Y01")}));
    std::mt19937_64 rng(41);
    for (int t = 0; t < 20; ++t) {
      std::vector<KillingSpinor> fs;
      int nv = static_cast<int>(rng() % 3), ny = static_cast<int>(rng() % 3);
      for (int q = 0; q < nv; ++q) fs.push_back(killing_basis(KillingKind::CKV)[rng() % 15].K);
      for (int q = 0; q < ny; ++q) fs.push_back(killing_basis(KillingKind::CKY)[rng() % 10].K);
      CHECK(killing_verify(killing_sym_product(fs)));
    }
  }

  TEST_CASE("Lie derivatives along conformal Killing vectors") {
    CHECK(lie_killing(ckv("xi02"), ckv("xi01")).is_zero());
    CHECK(lie_killing(ckv("xi14"), ckv("xi01")) == ckv("xi01").scaled(Scalar(-1)));
    std::mt19937_64 rng(42);
    const auto& ckvs = killing_basis(KillingKind::CKV);
    const auto& ckys = killing_basis(KillingKind::CKY);
    for (int t = 0; t < 20; ++t) {
      const KillingSpinor& z = ckvs[rng() % 15].K;
      CHECK(killing_verify(lie_killing(z, ckvs[rng() % 15].K)));
      KillingSpinor kap = killing_sym_product({ckys[rng() % 10].K, ckys[rng() % 10].K});
      CHECK(killing_verify(lie_killing(z, kap)));
    }
    // the weight term is needed: without it dilations would not preserve the equation
    KillingSpinor kap = killing_sym_product({cky("Y11"), cky("Y01")});
    KillingSpinor l1 = lie_killing(ckv("xi14"), kap);
    CHECK(killing_verify(l1));
    CHECK_THROWS(lie_killing(ckv("xi14"), cky("Y01")));
  }

  TEST_CASE("count formula sum rules") {
    for (int s = 0; s <= 4; ++s) {
      for (const auto& lab : real_labels(s)) {
        auto c = ckv_counts(s, lab.p, lab.i, lab.j, lab.n, lab.np);
        int l = s - lab.p + lab.i;
        int total = 0;
        for (int v : c) {
          CHECK(v >= 0);
          total += v;
        }
        CHECK(c[0] + c[1] + c[2] + c[3] == l);
        CHECK(c[4] + c[5] + c[6] == lab.j - lab.i);
        CHECK(c[10] == lab.p - lab.i - lab.j);
        CHECK(c[11] + c[12] + c[13] + c[14] == lab.i);
        CHECK(total == s);
      }
    }
    for (int k = 0; k <= 4; ++k) {
      int h = k / 2;
      for (int m = 0; m <= 4 - k; ++m) {
        for (int mp = 0; mp <= k; ++mp) {
          auto c = cky_counts(k, m, mp);
          int total = 0;
          for (int v : c) {
            CHECK(v >= 0);
            total += v;
          }
          CHECK(c[0] + c[1] + c[2] == 2 - k + h);
          CHECK(c[3] + c[4] + c[5] + c[6] == k - 2 * h);
          CHECK(c[7] + c[8] + c[9] == h);
          CHECK(total == 2);
        }
      }
    }
    auto c = ckv_counts(1, 0, 0, 0, 1, 1);
    for (std::size_t q = 0; q < c.size(); ++q) CHECK(c[q] == (q == 0 ? 1 : 0));
  }

  TEST_CASE("real product bases") {
    std::map<int, std::vector<int>> by_degree = {{1, {4, 7, 4}}, {2, {9, 20, 26, 20, 9}}};
    for (int s = 1; s <= 2; ++s) {
      const auto& labs = real_basis(s);
      CHECK(static_cast<long long>(labs.size()) == dim_kk(s));
      std::vector<int> counts(static_cast<std::size_t>(2 * s + 1));
      std::vector<KillingSpinor> els;
      for (const auto& lab : labs) {
        ++counts[static_cast<std::size_t>(lab.p)];
        KillingSpinor K = product_element(lab);
        CHECK(killing_verify(K));
        CHECK(conj_spinor(K) == K);
        CHECK(K.degree() == lab.p);
        els.push_back(K);
      }
      CHECK(counts == by_degree[s]);
      CHECK(exact_rank(els) == labs.size());
    }
  }

  TEST_CASE("chiral product bases") {
    CHECK(chiral_basis(0).size() == 70);
    const auto& labs = chiral_basis(1);
    CHECK(labs.size() == 378);
    std::vector<int> counts(7);
    for (const auto& lab : labs) ++counts[static_cast<std::size_t>(lab.p)];
    CHECK(counts == std::vector<int>{24, 54, 72, 78, 72, 54, 24});
    for (std::size_t q = 0; q < labs.size(); q += 17) CHECK(killing_verify(product_element(labs[q])));
  }

  TEST_CASE("factorization round trip") {
    std::mt19937_64 rng(43);
    KillingSpinor d2 = ckv("xi14") + conj_spinor(ckv("xi14"));
    auto f = killing_factorize(d2);
    REQUIRE(f.size() == 1);
    CHECK(f[0].second == Rational(1));
    CHECK(product_ckv_factors(f[0].first).size() == 1);
    struct Space {
      int k, l;
    };
    for (Space sp : {Space{1, 1}, Space{2, 2}, Space{0, 4}, Space{1, 5}}) {
      const auto& labs = sp.k == sp.l ? real_basis(sp.k) : chiral_basis(sp.k);
      for (int t = 0; t < 12; ++t) {
        std::map<ProductLabel, Rational> want;
        KillingSpinor K(sp.k, sp.l);
        for (int q = 0; q < 3; ++q) {
          const auto& lab = labs[rng() % labs.size()];
          Rational c(static_cast<long long>(rng() % 7) - 3, static_cast<long long>(rng() % 3) + 1);
          want[lab] += c;
          K += product_element(lab).scaled(Scalar(c));
        }
        std::erase_if(want, [](const auto& kv) { return kv.second.is_zero(); });
        auto got = killing_factorize(K);
        std::map<ProductLabel, Rational> gm(got.begin(), got.end());
        CHECK(gm == want);
      }
    }
    KillingSpinor notreal = ckv("xi02");
    CHECK_THROWS(killing_factorize(notreal));
  }

  TEST_CASE("product labels round-trip through text") {
    for (const auto& lab : real_basis(1)) CHECK(ProductLabel::parse(lab.str()) == lab);
    for (std::size_t q = 0; q < chiral_basis(1).size(); q += 5) {
      const auto& lab = chiral_basis(1)[q];
      CHECK(ProductLabel::parse(lab.str()) == lab);
    }
  }
}

TEST_SUITE("killing_large") {
  TEST_CASE("solution spaces of types (3,3) and (1,5)") {
    auto a = killing_solve(3, 3);
    CHECK(a.size() == 300);
    CHECK(eval_rank(a, 2, 24) == 300);
    auto b = killing_solve(1, 5);
    CHECK(b.size() == 189);
    CHECK(eval_rank(b, 3, 24) == 189);
    for (std::size_t q = 0; q < a.size(); q += 7) CHECK(killing_verify(a[q]));
    for (std::size_t q = 0; q < b.size(); q += 7) CHECK(killing_verify(b[q]));
    CHECK(real_basis(3).size() == 300);
  }
}
