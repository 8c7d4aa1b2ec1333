#include "maxcons/classify.hpp"

#include <algorithm>
#include <future>
#include <mutex>
#include <random>
#include <set>

#include "maxcons/linalg.hpp"
#include "maxcons/tensors.hpp"

namespace maxcons {

namespace {

constexpr std::uint32_t kTagBase = 1u << 30;

// Raised derivative D^{AA'} = sign * D_{(1-A)(1-A')}.
int raise_sign(int A, int Ap) { return A == Ap ? 1 : -1; }

Poly onshell_D_multi(Poly e, const std::vector<Frame>& J) {
  for (Frame f : J) {
    IndexPair ip = frame_pair(f);
    e = onshell_derivative(e, ip.u, ip.p);
  }
  return e;
}

Poly tensor_D_multi(Poly e, const std::vector<Frame>& J) {
  for (Frame f : J) e = tensor_derivative(e, f);
  return e;
}

// Multisets of frame legs of a given size, in lexicographic order.
std::vector<std::vector<Frame>> frame_multisets(int size) {
  std::vector<std::vector<Frame>> out;
  std::vector<Frame> cur;
  std::function<void(int, int)> rec = [&](int start, int left) {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    for (int f = start; f < 4; ++f) {
      cur.push_back(static_cast<Frame>(f));
      rec(f, left - 1);
      cur.pop_back();
    }
  };
  rec(0, size);
  return out;
}

// Derivatives D_J Delta_{EE'} and D_J Deltabar_{EE'} of a fixed order, as linear forms in tensor jets.
struct EquationJet {
  std::vector<Frame> J;
  int comp = 0;  // 2E + E'
  bool barred = false;
};

struct EquationBasis {
  std::vector<EquationJet> jets;
  ColumnIndex idx{1};
  Echelon ech;  // rows: (form | tag), tags for the real and the i-multiple of each jet
};

struct NTerm {
  std::size_t jet;  // index into EquationBasis::jets
  Scalar coeff;
};

class CharacteristicTables {
 public:
  static CharacteristicTables& get() {
    static CharacteristicTables t;
    return t;
  }

  const EquationBasis& basis(int order) {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    auto it = bases_.find(order);
    if (it != bases_.end()) return *it->second;
    auto b = std::make_unique<EquationBasis>();
    static const SpinorField delta = field_equation(OffShellJets(), false);
    static const SpinorField deltabar = field_equation(OffShellJets(), true);
    for (const auto& J : frame_multisets(order)) {
      for (int bar = 0; bar < 2; ++bar) {
        for (int comp = 0; comp < 4; ++comp) {
          Poly form = tensor_D_multi((bar ? deltabar : delta)[static_cast<std::size_t>(comp)], J);
          std::size_t id = b->jets.size();
          b->jets.push_back({J, comp, bar == 1});
          for (int part = 0; part < 2; ++part) {
            SparseVec row = b->idx.flatten({part ? form.scaled(Scalar::i()) : form});
            row.emplace_back(kTagBase + static_cast<std::uint32_t>(2 * id + part), Rational(1));
            b->ech.insert(std::move(row));
          }
        }
      }
    }
    return *bases_.emplace(order, std::move(b)).first->second;
  }

  // Off-shell D_{CC'} of the lifted jet minus the lift of its on-shell derivative, over equation jets.
  const std::vector<NTerm>& defect(Variable v, int C, int Cp) {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    auto key = std::make_tuple(v.key(), C, Cp);
    auto it = defects_.find(key);
    if (it != defects_.end()) return it->second;
    const int order = v.order();
    Poly lifted = lift_to_tensor(Poly::var(v));
    Poly n = tensor_derivative(lifted, frame_of(C, Cp)) - lift_to_tensor(onshell_derivative(Poly::var(v), C, Cp));
    std::vector<NTerm> terms;
    if (!n.is_zero()) {
      EquationBasis& b = const_cast<EquationBasis&>(basis(order));
      SparseVec red = b.ech.reduce(b.idx.flatten({n}));
      std::map<std::size_t, Scalar> acc;
      for (const auto& [col, val] : red) {
        if (col < kTagBase) throw std::logic_error("jet defect outside the span of the field equations");
        std::uint32_t tag = col - kTagBase;
        Scalar s = (tag % 2 == 0) ? Scalar(-val) : Scalar(Rational(0), -val);
        acc[tag / 2] += s;
      }
      for (auto& [j, s] : acc) {
        if (!s.is_zero()) terms.push_back({j, s});
      }
    }
    return defects_.emplace(key, std::move(terms)).first->second;
  }

 private:
  std::recursive_mutex mu_;
  std::map<int, std::unique_ptr<EquationBasis>> bases_;
  std::map<std::tuple<std::uint64_t, int, int>, std::vector<NTerm>> defects_;
};

SpinorField lower_both(const SpinorField& up) {
  SpinorField low;
  for (int A = 0; A < 2; ++A) {
    for (int Ap = 0; Ap < 2; ++Ap) {
      low[static_cast<std::size_t>(2 * A + Ap)] =
          up[static_cast<std::size_t>(2 * (1 - A) + (1 - Ap))].scaled(Scalar(raise_sign(A, Ap)));
    }
  }
  return low;
}

Current as_spinor_current(const Current& c) { return c.rep == Current::Rep::Spinor ? c : tensor_to_spinor(c); }

}  // namespace

Characteristic characteristic_pair(const Current& c0) {
  const Current c = as_spinor_current(c0);
  auto& tables = CharacteristicTables::get();
  std::array<SpinorField, 2> up;  // coefficients of Delta (0) and Deltabar (1), upper indices
  for (int A = 0; A < 2; ++A) {
    for (int Ap = 0; Ap < 2; ++Ap) {
      const Poly& psi = c.c[static_cast<std::size_t>(2 * A + Ap)];
      const int B = 1 - A, Bp = 1 - Ap;
      const Scalar sign(raise_sign(A, Ap));
      for (Variable v : psi.variables()) {
        if (v.kind() != Variable::Kind::OnShellJet) continue;
        const auto& terms = tables.defect(v, B, Bp);
        if (terms.empty()) continue;
        Poly K = psi.partial(v);
        const EquationBasis& basis = tables.basis(v.order());
        for (const auto& t : terms) {
          const EquationJet& ej = basis.jets[t.jet];
          Scalar f = sign * t.coeff;
          if (ej.J.size() % 2 == 1) f = -f;
          up[ej.barred ? 1 : 0][static_cast<std::size_t>(ej.comp)] += onshell_D_multi(K.scaled(f), ej.J);
        }
      }
    }
  }
  // Equation components are lower; the contraction coefficients computed above multiply Delta_{EE'}
  // and so are upper-index components.
  return {lower_both(up[1]), lower_both(up[0])};
}

SpinorField characteristic_of(const Current& c) { return characteristic_pair(c).q; }

bool characteristic_verify(const Current& c0, const Characteristic& ch) {
  const Current c = as_spinor_current(c0);
  Poly g;
  for (int A = 0; A < 2; ++A) {
    for (int Ap = 0; Ap < 2; ++Ap) {
      g += tensor_derivative(lift_to_tensor(c.c[static_cast<std::size_t>(2 * A + Ap)]), frame_of(1 - A, 1 - Ap))
               .scaled(Scalar(raise_sign(A, Ap)));
    }
  }
  static const SpinorField delta = field_equation(OffShellJets(), false);
  static const SpinorField deltabar = field_equation(OffShellJets(), true);
  // q^{AA'} Deltabar_{AA'} = sum over lower components with the raising signs.
  for (int A = 0; A < 2; ++A) {
    for (int Ap = 0; Ap < 2; ++Ap) {
      const std::size_t lo = static_cast<std::size_t>(2 * A + Ap);
      const std::size_t hi = static_cast<std::size_t>(2 * (1 - A) + (1 - Ap));
      Scalar s(raise_sign(A, Ap));
      g -= (lift_to_tensor(ch.q[hi]) * deltabar[lo]).scaled(s);
      g -= (lift_to_tensor(ch.qt[hi]) * delta[lo]).scaled(s);
    }
  }
  // Terms quadratic in the field equations survive off-shell; their Euler image vanishes on-shell.
  for (const auto& e : euler_operator(g)) {
    if (!restrict_onshell(e).is_zero()) return false;
  }
  return adjsym_verify({ch.q});
}

std::array<Poly, 3> spinorial_curl(const SpinorField& Q) {
  // D^{A'}_C Q_{AA'}: slots (A, A', C, C') -> raise C', trace with A'.
  Spinor d = trace(raise(derivative(field_spinor(Q), onshell_D()), 3), 1, 3);  // (A, C)
  Spinor s = symmetrize(d, {0, 1});
  return {s.at({0, 0}), s.at({0, 1}), s.at({1, 1})};
}

int jet_order(const std::array<Poly, 3>& c) {
  int r = -1;
  for (const auto& p : c) r = std::max(r, p.max_jet_order());
  return r;
}

int jet_order(const SpinorField& f) {
  int r = -1;
  for (const auto& p : f) r = std::max(r, p.max_jet_order());
  return r;
}

// ---------------------------------------------------------------------------
// Leading Killing data

SpinorField leading_adjoint(const KillingSpinor& K) {
  if (K.k != K.l || K.k < 1) throw std::invalid_argument("leading_adjoint needs a type (k,k) spinor, k >= 1");
  const int k = K.k;
  Spinor Ks = to_spinor(K);  // (k UpU, k UpP)
  for (int j = 0; j < k; ++j) Ks = lower(Ks, k + j);
  Spinor ph = onshell_jets().phi(k - 1, false);  // (k+1 LoU, k-1 LoP)
  for (int j = 0; j < k - 1; ++j) ph = raise(ph, k + 1 + j);
  std::vector<std::pair<int, int>> pairs;
  for (int j = 0; j < k; ++j) pairs.emplace_back(j, 1 + j);
  for (int j = 1; j < k; ++j) pairs.emplace_back(k + j, k + j);
  Spinor r = contract(Ks, ph, pairs);  // (A' LoP, A LoU)
  return spinor_field(permute(r, {1, 0}));
}

SpinorField leading_adjoint_chiral(const KillingSpinor& kappa) {
  if (kappa.l != kappa.k + 4 || kappa.k < 1) throw std::invalid_argument("leading_adjoint_chiral needs type (k, k+4)");
  const int k = kappa.k;
  Spinor Ks = lower(to_spinor(kappa), k);           // (k UpU, LoP, k+3 UpP)
  Spinor ph = onshell_jets().phi(k + 1, true);       // (k+3 LoP, k+1 LoU)
  std::vector<std::pair<int, int>> pairs;
  for (int j = 0; j < k; ++j) pairs.emplace_back(j, k + 3 + 1 + j);
  for (int j = 0; j < k + 3; ++j) pairs.emplace_back(k + 1 + j, j);
  Spinor r = contract(Ks, ph, pairs);  // (A' LoP, A LoU)
  return spinor_field(permute(r, {1, 0}));
}

namespace {

// Terms of the curl whose jet variable has exactly the given order.
std::array<Poly, 3> top_order_part(const std::array<Poly, 3>& c, int order) {
  std::array<Poly, 3> out;
  for (std::size_t k = 0; k < 3; ++k) {
    out[k] = c[k].map_terms([order](const Term& t, std::vector<Term>& o) {
      for (std::size_t i = 0; i < t.m.size(); ++i) {
        Variable v = t.m.var(i);
        if (v.kind() == Variable::Kind::OnShellJet && v.order() == order) {
          o.push_back(t);
          return;
        }
      }
    });
  }
  return out;
}

struct ReadOff {
  Variable jet;
  Scalar factor;
};

// For each component of a unit symmetric spinor, the unique jet in curl_(00) and its coefficient.
std::vector<ReadOff> unit_readoff(int k, int l, bool chiral, bool twist) {
  std::vector<ReadOff> out;
  for (int a = 0; a <= k; ++a) {
    for (int b = 0; b <= l; ++b) {
      KillingSpinor E(k, l);
      E.at(a, b) = Poly(1);
      SpinorField P = chiral ? leading_adjoint_chiral(E) : leading_adjoint(E);
      if (twist) P = field_scaled(P, Scalar::i());
      Poly c00 = spinorial_curl(P)[0];
      if (c00.size() != 1 || c00.terms()[0].m.size() != 1) throw std::logic_error("unexpected leading form");
      out.push_back({c00.terms()[0].m.var(0), c00.terms()[0].c});
    }
  }
  return out;
}

KillingSpinor read_killing(const Poly& c00, int k, int l, bool chiral, bool twist) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, bool, bool>, std::vector<ReadOff>> cache;
  std::vector<ReadOff> table;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(k, l, chiral, twist);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, unit_readoff(k, l, chiral, twist)).first;
    table = it->second;
  }
  KillingSpinor K(k, l);
  std::size_t n = 0;
  for (int a = 0; a <= k; ++a) {
    for (int b = 0; b <= l; ++b, ++n) {
      K.at(a, b) = c00.partial(table[n].jet).scaled(table[n].factor.inverse());
    }
  }
  return K;
}

bool same3(const std::array<Poly, 3>& a, const std::array<Poly, 3>& b) { return a == b; }

std::array<Poly, 3> add3(const std::array<Poly, 3>& a, const std::array<Poly, 3>& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

// Restricts a polynomial to terms containing a jet of the given barredness.
Poly jet_part(const Poly& p, bool barred) {
  return p.map_terms([barred](const Term& t, std::vector<Term>& o) {
    for (std::size_t i = 0; i < t.m.size(); ++i) {
      Variable v = t.m.var(i);
      if (v.kind() == Variable::Kind::OnShellJet && v.barred() == barred) {
        o.push_back(t);
        return;
      }
    }
  });
}

}  // namespace

LeadingKilling extract_leading_killing(const SpinorField& Q) {
  LeadingKilling out;
  const auto curl = spinorial_curl(Q);
  const int q = jet_order(curl);
  out.curl_order = q;
  if (q < 0) return out;
  const auto top = top_order_part(curl, q);
  std::array<Poly, 3> rebuilt;
  if (q % 2 == 1) {
    const int r = (q - 1) / 2;
    out.map = LeadingKilling::Map::Even;
    out.K = read_killing(jet_part(top[0], false), 2 * r + 1, 2 * r + 1, false, false);
    rebuilt = top_order_part(spinorial_curl(leading_adjoint(out.K)), q);
    if (r >= 1) {
      KillingSpinor kappa = read_killing(jet_part(top[0], true), 2 * r - 1, 2 * r + 3, true, false);
      rebuilt = add3(rebuilt, top_order_part(spinorial_curl(leading_adjoint_chiral(kappa)), q));
      if (!kappa.is_zero()) out.kappa = std::move(kappa);
    }
  } else {
    const int r = q / 2 - 1;
    out.map = LeadingKilling::Map::Odd;
    out.K = read_killing(jet_part(top[0], false), 2 * r + 2, 2 * r + 2, false, true);
    rebuilt = top_order_part(spinorial_curl(field_scaled(leading_adjoint(out.K), Scalar::i())), q);
  }
  if (!same3(rebuilt, top)) throw MalformedCharacteristic("highest order curl terms do not match a Killing pattern");
  if (!killing_verify(out.K) || (out.kappa && !killing_verify(*out.kappa))) {
    throw MalformedCharacteristic("leading coefficients are not Killing spinors");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Basis labels and currents

BasisFamily BasisLabel::family() const {
  if (prod.chiral()) {
    if (prod.prime) return prod.minus ? BasisFamily::Vpminus : BasisFamily::Vpplus;
    return prod.minus ? BasisFamily::Vminus : BasisFamily::Vplus;
  }
  if (prod.s % 2 == 1) return prod.prime ? BasisFamily::Tp : BasisFamily::T;
  return prod.prime ? BasisFamily::Zp : BasisFamily::Z;
}

int BasisLabel::weight() const { return prod.chiral() ? prod.s + 1 : prod.s - 1; }

const char* family_name(BasisFamily f) {
  switch (f) {
    case BasisFamily::T: return "T";
    case BasisFamily::Tp: return "T'";
    case BasisFamily::Z: return "Z";
    case BasisFamily::Zp: return "Z'";
    case BasisFamily::Vplus: return "+V";
    case BasisFamily::Vminus: return "-V";
    case BasisFamily::Vpplus: return "+V'";
    case BasisFamily::Vpminus: return "-V'";
  }
  return "?";
}

std::string BasisLabel::family_name() const { return maxcons::family_name(family()); }
std::string BasisLabel::str() const { return prod.str(); }
BasisLabel BasisLabel::parse(const std::string& text) { return {ProductLabel::parse(text)}; }

std::vector<BasisLabel> basis_labels(int w) {
  if (w < 0) return {};
  if (w > 2) throw std::invalid_argument("basis enumeration is limited to weight 2");
  std::vector<BasisLabel> out;
  auto add_real = [&](int s) {
    for (const auto& l : real_basis(s)) out.push_back({l});
  };
  add_real(1);
  if (w >= 1) add_real(2);
  if (w >= 2) {
    add_real(3);
    for (const auto& l : chiral_basis(1)) out.push_back({l});
  }
  std::stable_sort(out.begin(), out.end(), [](const BasisLabel& a, const BasisLabel& b) {
    if (a.weight() != b.weight()) return a.weight() < b.weight();
    return a < b;
  });
  return out;
}

Current basis_current(const BasisLabel& lab, Form form) {
  Current c = maxcons::basis_current(lab.prod);
  return form == Form::Tensor ? spinor_to_tensor(c) : c;
}

std::vector<BasisEntry> basis_enumerate(int w, Form form, int jobs) {
  auto labels = basis_labels(w);
  std::vector<BasisEntry> out(labels.size());
  jobs = std::max(1, jobs);
  auto work = [&](std::size_t begin, std::size_t step) {
    for (std::size_t k = begin; k < labels.size(); k += step) out[k] = {labels[k], basis_current(labels[k], form)};
  };
  if (jobs == 1) {
    work(0, 1);
  } else {
    std::vector<std::future<void>> fs;
    for (int j = 0; j < jobs; ++j) fs.push_back(std::async(std::launch::async, work, j, jobs));
    for (auto& f : fs) f.get();
  }
  return out;
}

namespace {

// Labels sharing the block (s, chiral), primedness and sign twist share one normalization.
using NormKey = std::tuple<int, bool, bool, bool>;

NormKey norm_key(const BasisLabel& lab) { return {lab.prod.s, lab.prod.chiral(), lab.prod.prime, lab.prod.minus}; }

// Ratio of the leading Killing spinor of the characteristic of a basis current to its product element.
Scalar leading_ratio(const BasisLabel& lab) {
  LeadingKilling lk = extract_leading_killing(characteristic_of(basis_current(lab)));
  const KillingSpinor* got = lab.prod.chiral() ? (lk.kappa ? &*lk.kappa : nullptr) : &lk.K;
  if (!got) throw std::logic_error("basis current without chiral leading term");
  auto f = killing_factorize(*got);
  if (f.size() != 1 || !(f[0].first == lab.prod)) throw std::logic_error("basis current leading term is not its label");
  return Scalar(f[0].second);
}

Scalar key_normalization(const NormKey& key) {
  static std::mutex mu;
  static std::map<NormKey, Scalar> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const auto [s, chiral, prime, minus] = key;
  for (const auto& l : chiral ? chiral_basis(s) : real_basis(s)) {
    BasisLabel bl{l};
    if (norm_key(bl) == key) return cache.emplace(key, leading_ratio(bl)).first->second;
  }
  throw std::invalid_argument("no basis label with the requested normalization key");
}

}  // namespace

Scalar basis_normalization(BasisFamily f) {
  switch (f) {
    case BasisFamily::T: return key_normalization({1, false, false, false});
    case BasisFamily::Tp: return key_normalization({1, false, true, false});
    case BasisFamily::Z: return key_normalization({2, false, false, false});
    case BasisFamily::Zp: return key_normalization({2, false, true, false});
    case BasisFamily::Vplus: return key_normalization({1, true, false, false});
    case BasisFamily::Vminus: return key_normalization({1, true, false, true});
    case BasisFamily::Vpplus: return key_normalization({1, true, true, false});
    case BasisFamily::Vpminus: return key_normalization({1, true, true, true});
  }
  return Scalar(1);
}

Scalar basis_label_normalization(const BasisLabel& lab) { return key_normalization(norm_key(lab)); }
Scalar basis_label_ratio(const BasisLabel& lab) { return leading_ratio(lab); }

// ---------------------------------------------------------------------------
// Triviality

namespace {

struct Grade {
  int g;   // jet order minus x-degree; pure x monomials use -1000 - degree
  int wu;  // torus weights
  int wp;
  friend auto operator<=>(const Grade&, const Grade&) = default;
};

int idx_weight(int value, bool upper) { return (value == 0) == upper ? -1 : 1; }

Grade grade_of(const Monomial& m) {
  Grade gr{0, 0, 0};
  int xdeg = 0, jord = -1;
  for (std::size_t i = 0; i < m.size(); ++i) {
    Variable v = m.var(i);
    const int e = static_cast<int>(m.exp(i));
    if (v.kind() == Variable::Kind::Coord) {
      xdeg += e;
      gr.wu += e * idx_weight(v.coord_u(), true);
      gr.wp += e * idx_weight(v.coord_p(), true);
    } else {
      const int p = v.order();
      jord = p;
      const int nu = v.barred() ? p : p + 2, np = v.barred() ? p + 2 : p;
      gr.wu += e * (nu - 2 * v.jet_a());
      gr.wp += e * (np - 2 * v.jet_b());
    }
  }
  gr.g = jord >= 0 ? jord - xdeg : -1000 - xdeg;
  return gr;
}

std::vector<Monomial> coord_monomials(int deg) {
  std::vector<Monomial> out;
  for (int e0 = deg; e0 >= 0; --e0) {
    for (int e1 = deg - e0; e1 >= 0; --e1) {
      for (int e2 = deg - e0 - e1; e2 >= 0; --e2) {
        const int ex[4] = {e0, e1, e2, deg - e0 - e1 - e2};
        Monomial m;
        for (int q = 0; q < 4; ++q) {
          if (ex[q] > 0) m = m * Monomial(Variable::coord(q / 2, q % 2), static_cast<unsigned>(ex[q]));
        }
        out.push_back(m);
      }
    }
  }
  return out;
}

std::vector<Variable> jets_of_order(int p) {
  std::vector<Variable> out;
  for (int bar = 0; bar < 2; ++bar) {
    const int nu = bar ? p : p + 2, np = bar ? p + 2 : p;
    for (int a = 0; a <= nu; ++a) {
      for (int b = 0; b <= np; ++b) out.push_back(Variable::jet(p, a, b, bar == 1));
    }
  }
  return out;
}

}  // namespace

std::optional<Poly> gradient_witness(const SpinorField& Q, int bound) {
  if (field_is_zero(Q)) return Poly();
  const int qmax = jet_order(Q);
  // Grades of chi needed to reach each term of Q.
  std::set<Grade> need;
  for (int A = 0; A < 2; ++A) {
    for (int Ap = 0; Ap < 2; ++Ap) {
      for (const auto& t : Q[static_cast<std::size_t>(2 * A + Ap)].terms()) {
        Grade g = grade_of(t.m);
        g.g = g.g >= -500 ? g.g - 1 : g.g - 1;
        g.wu -= idx_weight(A, false);
        g.wp -= idx_weight(Ap, false);
        need.insert(g);
      }
    }
  }
  std::vector<Monomial> cands;
  for (int d = 0; d <= bound + 1; ++d) {
    for (const auto& xm : coord_monomials(d)) {
      if (d <= bound + 1) {
        Grade g = grade_of(xm);
        if (need.count(g)) cands.push_back(xm);
      }
      if (d > bound) continue;
      for (int p = 0; p <= qmax - 1; ++p) {
        for (Variable v : jets_of_order(p)) {
          Monomial m = xm * Monomial(v);
          if (need.count(grade_of(m))) cands.push_back(m);
        }
      }
    }
  }
  if (cands.empty()) return std::nullopt;
  ColumnIndex idx(4);
  const auto nvars = static_cast<std::uint32_t>(2 * cands.size());
  std::map<std::uint32_t, std::vector<std::pair<std::uint32_t, Rational>>> rows;
  auto add_image = [&](std::uint32_t unknown, const SpinorField& img) {
    for (const auto& [col, v] : idx.flatten({img[0], img[1], img[2], img[3]})) rows[col].emplace_back(unknown, v);
  };
  for (std::size_t u = 0; u < cands.size(); ++u) {
    Poly chi = Poly::monomial(cands[u], Scalar(1));
    SpinorField g;
    for (int q = 0; q < 4; ++q) g[static_cast<std::size_t>(q)] = onshell_derivative(chi, q / 2, q % 2);
    add_image(static_cast<std::uint32_t>(2 * u), g);
    add_image(static_cast<std::uint32_t>(2 * u + 1), field_scaled(g, Scalar::i()));
  }
  add_image(nvars, Q);
  Echelon sys;
  for (auto& [col, row] : rows) sys.insert(make_sparse(std::move(row)));
  auto sol = sys.solve(nvars);
  if (!sol) return std::nullopt;
  Poly chi;
  for (std::size_t u = 0; u < cands.size(); ++u) {
    Scalar c((*sol)[2 * u], (*sol)[2 * u + 1]);
    if (!c.is_zero()) chi += Poly::monomial(cands[u], c);
  }
  return chi;
}

int current_weight(const Current& c0) {
  const Current c = as_spinor_current(c0);
  int w = 0;
  for (const auto& p : c.c) {
    for (const auto& t : p.terms()) {
      int s = 0;
      for (std::size_t i = 0; i < t.m.size(); ++i) {
        Variable v = t.m.var(i);
        if (v.kind() == Variable::Kind::OnShellJet) s += v.order() * static_cast<int>(t.m.exp(i));
      }
      w = std::max(w, s);
    }
  }
  return w;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Trivial: return "trivial";
    case Verdict::NonTrivial: return "nontrivial";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

TrivialityReport triviality(const Current& c0) {
  const Current c = as_spinor_current(c0);
  if (!is_conserved(c)) throw std::invalid_argument("triviality requires a conserved current");
  TrivialityReport rep;
  rep.chi_degree_bound = current_weight(c) + 4;
  rep.characteristic = characteristic_of(c);
  for (const auto& p : spinorial_curl(rep.characteristic)) {
    if (!p.is_zero()) {
      rep.verdict = Verdict::NonTrivial;
      return rep;
    }
  }
  rep.chi = gradient_witness(rep.characteristic, rep.chi_degree_bound);
  rep.verdict = rep.chi ? Verdict::Trivial : Verdict::Inconclusive;
  return rep;
}

bool is_trivial(const Current& c) {
  TrivialityReport r = triviality(c);
  if (r.verdict == Verdict::Inconclusive) {
    throw InconclusiveError("gauge witness not found within x-degree " + std::to_string(r.chi_degree_bound));
  }
  return r.verdict == Verdict::Trivial;
}

bool equivalent(const Current& a, const Current& b) { return is_trivial(as_spinor_current(a) - as_spinor_current(b)); }

Current trivial_current(const std::array<Poly, kSkewPairs>& theta) {
  // Theta^{mu nu} upper; Psi^mu = D_nu Theta^{mu nu}.
  auto th = [&](int mu, int nu) -> Poly {
    if (mu == nu) return Poly();
    if (mu < nu) return theta[static_cast<std::size_t>(skew_index(static_cast<Frame>(mu), static_cast<Frame>(nu)))];
    return -theta[static_cast<std::size_t>(skew_index(static_cast<Frame>(nu), static_cast<Frame>(mu)))];
  };
  std::array<Poly, 4> up;
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      IndexPair ip = frame_pair(static_cast<Frame>(nu));
      up[static_cast<std::size_t>(mu)] += onshell_derivative(th(mu, nu), ip.u, ip.p);
    }
  }
  // Lower spinor components of an upper vector: Psi_{00'} = Psi^N, Psi_{11'} = Psi^L,
  // Psi_{01'} = -Psi^MBAR, Psi_{10'} = -Psi^M.
  return Current::spinor({up[1], -up[3], -up[2], up[0]});
}

// ---------------------------------------------------------------------------
// Classification

Decomposition classify_current(const Current& c0) {
  const Current c = as_spinor_current(c0);
  if (!is_conserved(c)) throw ClassificationError("input current is not conserved");
  Decomposition d;
  std::map<BasisLabel, Scalar> acc;
  Current rest = c;
  int last = 1000;
  for (;;) {
    SpinorField Q = characteristic_of(rest);
    LeadingKilling lk = extract_leading_killing(Q);
    const int q = lk.curl_order;
    if (q < 0) break;
    if (q > 3) throw ClassificationError("current weight above the supported bound");
    if (q >= last) throw ClassificationError("descent did not lower the curl order");
    last = q;
    Current sub;
    auto take = [&](const KillingSpinor& K) {
      for (const auto& [lab, coeff] : killing_factorize(K)) {
        BasisLabel bl{lab};
        Scalar a = Scalar(coeff) / basis_label_normalization(bl);
        acc[bl] += a;
        sub += basis_current(bl).scaled(a);
      }
    };
    if (!lk.K.is_zero()) take(lk.K);
    if (lk.kappa) take(*lk.kappa);
    rest -= sub;
  }
  for (auto& [lab, a] : acc) {
    if (!a.is_zero()) d.terms.emplace_back(lab, a);
  }
  d.residual = rest;
  TrivialityReport tr = triviality(rest);
  if (tr.verdict == Verdict::Trivial) {
    d.residual_trivial = true;
    if (tr.chi && !tr.chi->is_zero()) d.certificate.push_back(*tr.chi);
  } else if (tr.verdict == Verdict::NonTrivial) {
    if (jet_order(spinorial_curl(tr.characteristic)) >= 0) {
      throw ClassificationError("descent left a residual with field-dependent curl");
    }
    d.linear_part = tr.characteristic;
  } else {
    throw InconclusiveError("residual triviality undecided within the gauge witness bound");
  }
  return d;
}

bool reconstruction_holds(const Current& c0, const Decomposition& d) {
  Current sum = d.residual;
  for (const auto& [lab, a] : d.terms) sum += basis_current(lab).scaled(a);
  Current c = as_spinor_current(c0);
  for (std::size_t k = 0; k < 4; ++k) {
    if (!(sum.c[k] == c.c[k])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Dimensions

long long dim_T(int r) { return (r + 1LL) * (r + 1) * (2 * r + 3) * (2 * r + 3) * (4 * r + 5) / 3; }
long long dim_Z(int r) { return (r + 2LL) * (r + 2) * (2 * r + 3) * (2 * r + 3) * (4 * r + 7) / 3; }
long long dim_V(int r) { return 2LL * (r + 1) * (r + 3) * (2 * r + 3) * (2 * r + 7) * (4 * r + 9) / 3; }

std::vector<int> degree_breakdown(const std::vector<BasisEntry>& block) {
  std::vector<int> out;
  for (const auto& e : block) {
    int d = 0;
    for (const auto& p : e.current.c) d = std::max(d, static_cast<int>(p.coord_degree()));
    if (out.size() <= static_cast<std::size_t>(d)) out.resize(static_cast<std::size_t>(d) + 1, 0);
    ++out[static_cast<std::size_t>(d)];
  }
  return out;
}

std::size_t evaluation_rank(const std::vector<Current>& currents, std::uint64_t seed, int points) {
  if (currents.empty()) return 0;
  // Coefficients lie in Q(i), so each point contributes at most 8 independent columns.
  if (points <= 0) points = std::max<int>(40, static_cast<int>(currents.size() / 4) + 8);
  std::vector<std::vector<std::uint64_t>> rows(currents.size());
  for (int pt = 0; pt < points; ++pt) {
    std::map<std::uint64_t, std::uint64_t> values;
    auto value = [&](Variable v) -> std::uint64_t {
      auto it = values.find(v.key());
      if (it != values.end()) return it->second;
      std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(pt), static_cast<std::uint32_t>(v.key()),
                       static_cast<std::uint32_t>(v.key() >> 32)};
      std::mt19937_64 rng(ss);
      std::uint64_t x = rng() % kRankPrime;
      values.emplace(v.key(), x);
      return x;
    };
    for (std::size_t r = 0; r < currents.size(); ++r) {
      const Current c = as_spinor_current(currents[r]);
      for (const auto& comp : c.c) {
        for (int part = 0; part < 4; ++part) rows[r].push_back(comp.eval_mod(value, part, kRankPrime));
      }
    }
  }
  return rank_mod_p(std::move(rows));
}

DimsReport dims_report(int r, bool with_rank, std::uint64_t seed, int jobs) {
  if (r < 0) throw std::invalid_argument("r must be non-negative");
  DimsReport rep;
  rep.r = r;
  auto block = [&](int s, bool chiral) {
    std::vector<BasisLabel> labs;
    if (chiral) {
      for (const auto& l : chiral_basis(s)) labs.push_back({l});
    } else {
      for (const auto& l : real_basis(s)) labs.push_back({l});
    }
    std::vector<BasisEntry> out(labs.size());
    jobs = std::max(1, jobs);
    auto work = [&](std::size_t begin, std::size_t step) {
      for (std::size_t k = begin; k < labs.size(); k += step) out[k] = {labs[k], basis_current(labs[k])};
    };
    std::vector<std::future<void>> fs;
    for (int j = 0; j < jobs; ++j) fs.push_back(std::async(std::launch::async, work, j, jobs));
    for (auto& f : fs) f.get();
    return out;
  };
  auto fill = [&](FamilyDims& fd, int s, bool chiral) {
    auto entries = block(s, chiral);
    fd.enumerated = static_cast<long long>(entries.size());
    fd.degree_breakdown = degree_breakdown(entries);
    if (with_rank) {
      std::vector<Current> cs;
      for (auto& e : entries) cs.push_back(e.current);
      fd.rank = static_cast<long long>(evaluation_rank(cs, seed));
    }
  };
  FamilyDims t, z, v;
  t.family = "T", t.formula = dim_T(r);
  z.family = "Z", z.formula = dim_Z(r);
  v.family = "V", v.formula = dim_V(r);
  // Enumeration is limited to weight 2: T for r <= 1, Z and V for r = 0.
  if (r <= 1) fill(t, 2 * r + 1, false);
  if (r == 0) {
    fill(z, 2, false);
    fill(v, 1, true);
  }
  rep.families = {t, z, v};
  return rep;
}

}  // namespace maxcons
