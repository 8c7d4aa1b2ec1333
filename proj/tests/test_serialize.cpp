#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "maxcons/serialize.hpp"

using namespace maxcons;
using maxcons::testing::random_onshell_poly;

TEST_SUITE("serialize") {
  TEST_CASE("currents round-trip through JSON text") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 20; ++t) {
      Current c = Current::spinor({random_onshell_poly(rng), random_onshell_poly(rng), random_onshell_poly(rng),
                                   random_onshell_poly(rng)});
      if (t % 2) c.rep = Current::Rep::Tensor;
      const Current back = current_from_json(Json::parse(to_json(c).dump()));
      CHECK(back.rep == c.rep);
      for (std::size_t k = 0; k < 4; ++k) CHECK(back.c[k] == c.c[k]);
    }
  }

  TEST_CASE("spinor and tensor component keys") {
    const Json js = to_json(Current::spinor({Poly(1), Poly(2), Poly(3), Poly(4)}));
    CHECK(js["rep"] == "spinor");
    CHECK(Poly::parse(js["components"]["10"].get<std::string>()) == Poly(3));
    const Json jt = to_json(Current::tensor({Poly(1), Poly(2), Poly(3), Poly(4)}));
    CHECK(Poly::parse(jt["components"]["MBAR"].get<std::string>()) == Poly(4));
  }

  TEST_CASE("Killing spinors round-trip") {
    for (const auto& e : killing_basis(KillingKind::CKY)) {
      const KillingSpinor back = killing_from_json(Json::parse(to_json(e.K).dump()));
      CHECK(back == e.K);
    }
    const Json j = to_json(killing_basis(KillingKind::CKV)[0].K);
    CHECK(j["type"] == Json::array({1, 1}));
    CHECK(j["components"].contains("1,1"));
  }

  TEST_CASE("schema violations name their location") {
    CHECK_THROWS_WITH_AS(current_from_json(Json::parse(R"({"components": {}})")), doctest::Contains("$"), SchemaError);
    CHECK_THROWS_WITH_AS(current_from_json(Json::parse(R"({"rep": "spinor", "components": {"00": 5}})")),
                         doctest::Contains("$.components.00"), SchemaError);
    CHECK_THROWS_WITH_AS(current_from_json(Json::parse(R"({"rep": "spinor", "components": {"02": "1"}})")),
                         doctest::Contains("$.components.02"), SchemaError);
    CHECK_THROWS_WITH_AS(killing_from_json(Json::parse(R"({"type": [1, 1], "components": {"2,0": "1"}})")),
                         doctest::Contains("$.components.2,0"), SchemaError);
  }

  TEST_CASE("decomposition JSON layout") {
    const BasisLabel l = basis_labels(0)[2];
    const Json d = to_json(classify_current(basis_current(l)));
    REQUIRE(d["terms"].size() == 1);
    CHECK(d["terms"][0]["family"] == l.family_name());
    CHECK(d["terms"][0]["coeff"] == "1");
    CHECK(d["terms"][0]["indices"]["label"] == l.str());
    CHECK(d["residual_trivial"] == true);
    CHECK(d["certificate"].contains("gauge_witnesses"));
  }

  TEST_CASE("conserved tensor JSON lists nonzero components") {
    const Json t = to_json(conserved_tensor(TensorKind::T, 0));
    CHECK(t["kind"] == "T");
    CHECK(t["n"] == 0);
    CHECK(t["slots"].size() == 2);
    CHECK_FALSE(t["components"].empty());
    for (const auto& [key, v] : t["components"].items()) CHECK(v != "0");
  }

  TEST_CASE("reports are deterministic and carry conventions") {
    const Json a = make_report("dims", "dims 0", to_json(dims_report(0, false)));
    const Json b = make_report("dims", "dims 0", to_json(dims_report(0, false)));
    CHECK(a.dump() == b.dump());
    CHECK(a["results"]["dims"]["T"] == 15);
    CHECK(a["results"]["dims"]["Z"] == 84);
    CHECK(a["results"]["dims"]["V"] == 378);
    CHECK(a["conventions"]["signature"] == "(+,-,-,-)");
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
  }
}
