#include "maxcons/serialize.hpp"

#include <cstdint>
#include <cstdio>

namespace maxcons {

namespace {

const char* const kSpinorKeys[4] = {"00", "01", "10", "11"};

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw SchemaError(path + ": " + what); }

const Json& member(const Json& j, const std::string& path, const char* key) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path, std::string("missing key \"") + key + "\"");
  return *it;
}

Poly poly_of(const Json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a polynomial string");
  try {
    return Poly::parse(v.get<std::string>());
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
}

}  // namespace

Json to_json(const Current& c) {
  Json comps = Json::object();
  for (std::size_t k = 0; k < 4; ++k) {
    const std::string key = c.rep == Current::Rep::Spinor ? kSpinorKeys[k] : frame_name(static_cast<Frame>(k));
    comps[key] = c.c[k].str();
  }
  return {{"rep", c.rep == Current::Rep::Spinor ? "spinor" : "tensor"}, {"order", c.order()}, {"components", comps}};
}

Current current_from_json(const Json& j) {
  const Json& rep = member(j, "$", "rep");
  if (!rep.is_string() || (rep != "spinor" && rep != "tensor")) fail("$.rep", "expected \"spinor\" or \"tensor\"");
  Current c;
  c.rep = rep == "spinor" ? Current::Rep::Spinor : Current::Rep::Tensor;
  const Json& comps = member(j, "$", "components");
  if (!comps.is_object()) fail("$.components", "expected an object");
  for (std::size_t k = 0; k < 4; ++k) {
    const std::string key = c.rep == Current::Rep::Spinor ? kSpinorKeys[k] : frame_name(static_cast<Frame>(k));
    auto it = comps.find(key);
    if (it != comps.end()) c.c[k] = poly_of(*it, "$.components." + key);
  }
  for (const auto& [key, v] : comps.items()) {
    bool known = false;
    for (std::size_t k = 0; k < 4; ++k) {
      known |= key == (c.rep == Current::Rep::Spinor ? kSpinorKeys[k] : frame_name(static_cast<Frame>(k)));
    }
    if (!known) fail("$.components." + key, "unknown component key");
  }
  return c;
}

Json characteristic_to_json(const SpinorField& q) {
  return to_json(Current::spinor({q[0], q[1], q[2], q[3]}));
}

Json to_json(const KillingSpinor& K) {
  Json comps = Json::object();
  for (int a = 0; a <= K.k; ++a) {
    for (int b = 0; b <= K.l; ++b) comps[std::to_string(a) + "," + std::to_string(b)] = K.at(a, b).str();
  }
  return {{"type", {K.k, K.l}}, {"components", comps}};
}

KillingSpinor killing_from_json(const Json& j) {
  const Json& type = member(j, "$", "type");
  if (!type.is_array() || type.size() != 2 || !type[0].is_number_integer() || !type[1].is_number_integer()) {
    fail("$.type", "expected [k, l]");
  }
  const int k = type[0].get<int>(), l = type[1].get<int>();
  if (k < 0 || l < 0 || k > 16 || l > 16) fail("$.type", "type out of range");
  KillingSpinor K(k, l);
  const Json& comps = member(j, "$", "components");
  if (!comps.is_object()) fail("$.components", "expected an object");
  for (const auto& [key, v] : comps.items()) {
    int a = -1, b = -1;
    char extra = 0;
    if (std::sscanf(key.c_str(), "%d,%d%c", &a, &b, &extra) != 2 || a < 0 || a > k || b < 0 || b > l) {
      fail("$.components." + key, "bad component key");
    }
    K.at(a, b) = poly_of(v, "$.components." + key);
  }
  return K;
}

Json to_json(const ConservedTensor& t) {
  Json comps = Json::object();
  for (std::size_t f = 0; f < t.t.size(); ++f) {
    if (t.t[f].is_zero()) continue;
    std::string key;
    for (std::size_t s = 0; s < t.t.rank(); ++s) {
      if (s) key += ",";
      key += frame_name(static_cast<Frame>(t.t.value(f, s)));
    }
    comps[key] = t.t[f].str();
  }
  Json slots = Json::array();
  for (std::size_t s = 0; s < t.t.rank(); ++s) slots.push_back(t.t.upper(s) ? "up" : "down");
  return {{"kind", tensor_kind_name(t.kind)}, {"n", t.n}, {"slots", slots}, {"components", comps}};
}

Json label_to_json(const BasisLabel& l) {
  const ProductLabel& p = l.prod;
  return {{"s", p.s},         {"p", p.p},         {"i", p.i},   {"j", p.j},         {"n", p.n},
          {"np", p.np},       {"k", p.k},         {"m", p.m},   {"mp", p.mp},       {"prime", p.prime},
          {"minus", p.minus}, {"label", l.str()}};
}

Json to_json(const Decomposition& d) {
  Json terms = Json::array();
  for (const auto& [lab, coeff] : d.terms) {
    terms.push_back({{"family", lab.family_name()}, {"indices", label_to_json(lab)}, {"coeff", coeff.str()}});
  }
  Json cert = Json::object();
  Json witnesses = Json::array();
  for (const auto& p : d.certificate) witnesses.push_back(p.str());
  cert["gauge_witnesses"] = witnesses;
  cert["residual"] = to_json(d.residual);
  if (d.linear_part) cert["linear_characteristic"] = characteristic_to_json(*d.linear_part);
  return {{"terms", terms}, {"residual_trivial", d.residual_trivial}, {"certificate", cert}};
}

Json to_json(const DimsReport& r) {
  Json fams = Json::array();
  Json counts = Json::object();
  for (const auto& f : r.families) {
    Json e = {{"family", f.family}, {"formula", f.formula}};
    if (f.enumerated >= 0) e["enumerated"] = f.enumerated;
    if (f.rank >= 0) e["rank"] = f.rank;
    if (!f.degree_breakdown.empty()) e["degree_breakdown"] = f.degree_breakdown;
    fams.push_back(e);
    counts[f.family] = f.formula;
  }
  return {{"r", r.r}, {"dims", counts}, {"families", fams}};
}

Json conventions_block() {
  Json norms = Json::object();
  for (BasisFamily f : {BasisFamily::T, BasisFamily::Tp, BasisFamily::Z, BasisFamily::Zp, BasisFamily::Vplus,
                        BasisFamily::Vminus, BasisFamily::Vpplus, BasisFamily::Vpminus}) {
    try {
      norms[family_name(f)] = basis_normalization(f).str();
    } catch (const std::invalid_argument&) {
      // no label of this kind at weight <= 2
    }
  }
  return {{"version", 1},
          {"signature", "(+,-,-,-)"},
          {"epsilon", "eps_01 = eps^01 = 1, psi^A = eps^AB psi_B, psi_B = psi^A eps_AB"},
          {"frame", {{"L", "00'"}, {"N", "11'"}, {"M", "01'"}, {"MBAR", "10'"}}},
          {"volume", "eps_{L N M MBAR} = -i"},
          {"field_equation", "Delta_AA' = D^B_A' phi_AB"},
          {"characteristic", "div = q^AA' Deltabar_AA' + conj(q)^AA' Delta_AA' + D.R, q defined up to gradients"},
          {"basis_normalization", norms}};
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json make_report(const std::string& command, const std::string& inputs, Json results) {
  return {{"command", command},
          {"inputs_digest", "fnv1a64:" + fnv1a_hex(inputs)},
          {"conventions", conventions_block()},
          {"results", std::move(results)}};
}

}  // namespace maxcons
