#include "maxcons/killing.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "maxcons/jetspace.hpp"
#include "maxcons/linalg.hpp"

namespace maxcons {

namespace {

Poly coord_partial(const Poly& e, int B, int Bp) { return e.partial(Variable::coord(B, Bp)); }

Rational binom(int n, int k) { return binomial(n, k); }

int sign_pow(int e) { return (e % 2 == 0) ? 1 : -1; }

}  // namespace

bool KillingSpinor::is_zero() const {
  return std::all_of(c.begin(), c.end(), [](const Poly& p) { return p.is_zero(); });
}

int KillingSpinor::degree() const {
  int d = 0;
  for (const auto& p : c) {
    if (!p.is_zero()) d = std::max(d, static_cast<int>(p.coord_degree()));
  }
  return d;
}

KillingSpinor& KillingSpinor::operator+=(const KillingSpinor& o) {
  if (k != o.k || l != o.l) throw std::invalid_argument("Killing spinor type mismatch");
  for (std::size_t f = 0; f < c.size(); ++f) c[f] += o.c[f];
  return *this;
}

KillingSpinor& KillingSpinor::operator-=(const KillingSpinor& o) {
  if (k != o.k || l != o.l) throw std::invalid_argument("Killing spinor type mismatch");
  for (std::size_t f = 0; f < c.size(); ++f) c[f] -= o.c[f];
  return *this;
}

KillingSpinor KillingSpinor::scaled(const Scalar& s) const {
  KillingSpinor r = *this;
  for (auto& p : r.c) p = p.scaled(s);
  return r;
}

Spinor to_spinor(const KillingSpinor& K) {
  std::vector<Idx> slots(static_cast<std::size_t>(K.k), Idx::UpU);
  slots.insert(slots.end(), static_cast<std::size_t>(K.l), Idx::UpP);
  Spinor s(slots);
  for (std::size_t f = 0; f < s.size(); ++f) {
    int a = 0, b = 0;
    for (std::size_t q = 0; q < s.rank(); ++q) (q < static_cast<std::size_t>(K.k) ? a : b) += s.value(f, q);
    s[f] = K.at(a, b);
  }
  return s;
}

KillingSpinor from_spinor(const Spinor& s) {
  Spinor up = raise_all(s);
  int k = 0, l = 0;
  for (Idx i : up.slots()) (is_primed(i) ? l : k) += 1;
  KillingSpinor K(k, l);
  for (int a = 0; a <= k; ++a) {
    for (int b = 0; b <= l; ++b) {
      std::vector<int> vals(up.rank());
      int ra = a, rb = b;
      for (std::size_t q = 0; q < up.rank(); ++q) {
        int& r = is_primed(up.slot(q)) ? rb : ra;
        if (r > 0) {
          vals[q] = 1;
          --r;
        }
      }
      K.at(a, b) = up.at(vals);
    }
  }
  return K;
}

KillingSpinor conj_spinor(const KillingSpinor& K) {
  KillingSpinor r(K.l, K.k);
  for (int a = 0; a <= K.l; ++a) {
    for (int b = 0; b <= K.k; ++b) r.at(a, b) = K.at(b, a).conj();
  }
  return r;
}

Poly lower_component(const KillingSpinor& K, int a, int b) {
  return K.at(K.k - a, K.l - b).scaled(Scalar(sign_pow((K.k - a) + (K.l - b))));
}

bool killing_verify(const KillingSpinor& K) {
  for (int a = 0; a <= K.k + 1; ++a) {
    for (int b = 0; b <= K.l + 1; ++b) {
      Poly S;
      for (int B = 0; B <= 1; ++B) {
        int a0 = a - B;
        if (a0 < 0 || a0 > K.k) continue;
        int wu = B ? a : K.k + 1 - a;
        for (int Bp = 0; Bp <= 1; ++Bp) {
          int b0 = b - Bp;
          if (b0 < 0 || b0 > K.l) continue;
          int wp = Bp ? b : K.l + 1 - b;
          S += coord_partial(lower_component(K, a0, b0), B, Bp).scaled(Scalar(wu * wp));
        }
      }
      if (!S.is_zero()) return false;
    }
  }
  return true;
}

namespace {

using Exps = std::array<int, 4>;  // exponents of x^{00'}, x^{01'}, x^{10'}, x^{11'}

std::vector<Exps> coord_monomials(int d) {
  std::vector<Exps> out;
  for (int e0 = d; e0 >= 0; --e0) {
    for (int e1 = d - e0; e1 >= 0; --e1) {
      for (int e2 = d - e0 - e1; e2 >= 0; --e2) out.push_back({e0, e1, e2, d - e0 - e1 - e2});
    }
  }
  return out;
}

Poly coord_monomial(const Exps& e) {
  Poly p(1);
  for (int q = 0; q < 4; ++q) {
    for (int t = 0; t < e[static_cast<std::size_t>(q)]; ++t) p *= Poly::var(Variable::coord(q >> 1, q & 1));
  }
  return p;
}

}  // namespace

std::vector<KillingSpinor> killing_solve(int k, int l) {
  if (k < 0 || l < 0) throw std::invalid_argument("negative Killing spinor type");
  struct Unknown {
    int a, b;
    Exps e;
  };
  // Unknowns grouped by (degree, unprimed weight, primed weight); the equations never mix groups.
  std::map<std::tuple<int, int, int>, std::vector<Unknown>> blocks;
  for (int d = 0; d <= k + l; ++d) {
    for (const auto& e : coord_monomials(d)) {
      int ou = e[2] + e[3], op = e[1] + e[3];
      for (int a = 0; a <= k; ++a) {
        for (int b = 0; b <= l; ++b) blocks[{d, a - ou, b - op}].push_back({a, b, e});
      }
    }
  }
  std::vector<KillingSpinor> out;
  for (const auto& [key, unknowns] : blocks) {
    std::map<std::pair<int, Monomial>, SparseVec> rows;
    for (std::uint32_t u = 0; u < unknowns.size(); ++u) {
      KillingSpinor K(k, l);
      K.at(unknowns[u].a, unknowns[u].b) = coord_monomial(unknowns[u].e);
      for (int a = 0; a <= k + 1; ++a) {
        for (int b = 0; b <= l + 1; ++b) {
          Poly S;
          for (int B = 0; B <= 1; ++B) {
            int a0 = a - B;
            if (a0 < 0 || a0 > k) continue;
            for (int Bp = 0; Bp <= 1; ++Bp) {
              int b0 = b - Bp;
              if (b0 < 0 || b0 > l) continue;
              int w = (B ? a : k + 1 - a) * (Bp ? b : l + 1 - b);
              S += coord_partial(lower_component(K, a0, b0), B, Bp).scaled(Scalar(w));
            }
          }
          for (const auto& t : S.terms()) rows[{a * (l + 2) + b, t.m}].emplace_back(u, t.c.re());
        }
      }
    }
    Echelon ech;
    for (auto& [rk, row] : rows) ech.insert(make_sparse(std::move(row)));
    for (const auto& v : ech.nullspace(static_cast<std::uint32_t>(unknowns.size()))) {
      KillingSpinor K(k, l);
      for (std::size_t u = 0; u < unknowns.size(); ++u) {
        if (v[u].is_zero()) continue;
        K.at(unknowns[u].a, unknowns[u].b) += coord_monomial(unknowns[u].e).scaled(Scalar(v[u]));
      }
      out.push_back(std::move(K));
    }
  }
  return out;
}

namespace {

Spinor basis_spinor(bool primed, int value) {
  Spinor s({primed ? Idx::UpP : Idx::UpU});
  s[static_cast<std::size_t>(value)] = Poly(1);
  return s;
}

Spinor coord_spinor() {
  Spinor X({Idx::UpU, Idx::UpP});
  for (int A = 0; A <= 1; ++A) {
    for (int Ap = 0; Ap <= 1; ++Ap) X.at({A, Ap}) = Poly::var(Variable::coord(A, Ap));
  }
  return X;
}

// x^A_{B'} s^{B'} (unprimed slot) or x^{A'}_B s^B (primed slot).
Spinor x_dot(const Spinor& s) {
  Spinor X = coord_spinor();
  if (is_primed(s.slot(0))) return contract(lower(X, 1), s, {{1, 0}});
  return contract(lower(X, 0), s, {{0, 0}});
}

std::vector<LabeledKilling> build_ckv() {
  Spinor o = basis_spinor(false, 0), io = basis_spinor(false, 1);
  Spinor ob = basis_spinor(true, 0), ib = basis_spinor(true, 1);
  auto sym2 = [](const Spinor& a, const Spinor& b) { return symmetrize(outer(a, b), {0, 1}); };
  auto first = [&](const Spinor& p, const Spinor& q) {
    // x^A_{B'} (p q)^{(A'B')}
    return contract(lower(coord_spinor(), 1), sym2(p, q), {{1, 1}});
  };
  auto cfirst = [&](const Spinor& p, const Spinor& q) {
    // x^{A'}_B (p q)^{(AB)}
    return permute(contract(lower(coord_spinor(), 0), sym2(p, q), {{0, 1}}), {1, 0});
  };
  auto second = [&](const Spinor& u, const Spinor& pr) { return outer(x_dot(pr), x_dot(u)); };
  std::vector<std::pair<std::string, Spinor>> list = {
      {"xi01", outer(o, ob)},       {"xi02", outer(o, ib)},       {"xi02b", outer(io, ob)},
      {"xi03", outer(io, ib)},      {"xi11", first(ob, ob)},      {"xi12", first(ob, ib)},
      {"xi13", first(ib, ib)},      {"xi11b", cfirst(o, o)},      {"xi12b", cfirst(o, io)},
      {"xi13b", cfirst(io, io)},    {"xi14", coord_spinor()},     {"xi21", second(o, ob)},
      {"xi22", second(o, ib)},      {"xi22b", second(io, ob)},    {"xi23", second(io, ib)},
  };
  std::vector<LabeledKilling> out;
  for (auto& [name, s] : list) out.push_back({name, from_spinor(s)});
  return out;
}

std::vector<LabeledKilling> build_cky() {
  Spinor o = basis_spinor(false, 0), io = basis_spinor(false, 1);
  Spinor ob = basis_spinor(true, 0), ib = basis_spinor(true, 1);
  auto sym2 = [](const Spinor& a, const Spinor& b) { return symmetrize(outer(a, b), {0, 1}); };
  // Unprimed forms, conjugated to type (0,2) below.
  std::vector<std::pair<std::string, Spinor>> list = {
      {"Y01", outer(o, o)},
      {"Y02", sym2(o, io)},
      {"Y03", outer(io, io)},
      {"Y11", sym2(x_dot(ob), o)},
      {"Y12", sym2(x_dot(ib), o)},
      {"Y13", sym2(x_dot(ob), io)},
      {"Y14", sym2(x_dot(ib), io)},
      {"Y21", sym2(x_dot(ob), x_dot(ob))},
      {"Y22", sym2(x_dot(ob), x_dot(ib))},
      {"Y23", sym2(x_dot(ib), x_dot(ib))},
  };
  std::vector<LabeledKilling> out;
  for (auto& [name, s] : list) out.push_back({name, conj_spinor(from_spinor(s))});
  return out;
}

}  // namespace

const std::vector<LabeledKilling>& killing_basis(KillingKind kind) {
  static const std::vector<LabeledKilling> ckvs = build_ckv();
  static const std::vector<LabeledKilling> ckys = build_cky();
  return kind == KillingKind::CKV ? ckvs : ckys;
}

namespace {
const KillingSpinor& find_labeled(KillingKind kind, const std::string& label) {
  for (const auto& e : killing_basis(kind)) {
    if (e.label == label) return e.K;
  }
  throw std::invalid_argument("unknown basis label " + label);
}
}  // namespace

const KillingSpinor& ckv(const std::string& label) { return find_labeled(KillingKind::CKV, label); }
const KillingSpinor& cky(const std::string& label) { return find_labeled(KillingKind::CKY, label); }

namespace {

KillingSpinor sym_product2(const KillingSpinor& A, const KillingSpinor& B) {
  KillingSpinor R(A.k + B.k, A.l + B.l);
  for (int a1 = 0; a1 <= A.k; ++a1) {
    for (int b1 = 0; b1 <= A.l; ++b1) {
      if (A.at(a1, b1).is_zero()) continue;
      for (int a2 = 0; a2 <= B.k; ++a2) {
        for (int b2 = 0; b2 <= B.l; ++b2) {
          if (B.at(a2, b2).is_zero()) continue;
          Rational w = binom(A.k, a1) * binom(B.k, a2) / binom(R.k, a1 + a2) * binom(A.l, b1) * binom(B.l, b2) /
                       binom(R.l, b1 + b2);
          R.at(a1 + a2, b1 + b2) += (A.at(a1, b1) * B.at(a2, b2)).scaled(Scalar(w));
        }
      }
    }
  }
  return R;
}

}  // namespace

KillingSpinor killing_sym_product(const std::vector<KillingSpinor>& factors) {
  int ky = 0;
  for (const auto& f : factors) {
    if (f.k == 0 && f.l == 2) {
      ++ky;
    } else if (f.k != 1 || f.l != 1) {
      throw std::invalid_argument("symmetrized products take type (1,1) and (0,2) factors");
    }
  }
  if (ky > 2) throw std::invalid_argument("at most two type (0,2) factors");
  KillingSpinor R(0, 0);
  R.at(0, 0) = Poly(1);
  for (const auto& f : factors) R = sym_product2(R, f);
  return R;
}

KillingSpinor lie_killing(const KillingSpinor& zeta, const KillingSpinor& K) {
  if (zeta.k != 1 || zeta.l != 1) throw std::invalid_argument("Lie derivative along a type (1,1) spinor only");
  if (K.k == 1 && K.l == 1) {
    KillingSpinor R(1, 1);
    for (int C = 0; C <= 1; ++C) {
      for (int Cp = 0; Cp <= 1; ++Cp) {
        Poly v;
        for (int E = 0; E <= 1; ++E) {
          for (int Ep = 0; Ep <= 1; ++Ep) {
            v += zeta.at(E, Ep) * coord_partial(K.at(C, Cp), E, Ep);
            v -= K.at(E, Ep) * coord_partial(zeta.at(C, Cp), E, Ep);
          }
        }
        R.at(C, Cp) = v;
      }
    }
    return R;
  }
  if (K.k == 0 && K.l == 4) {
    Deriv d = [](const Poly& e, int C, int Cp) { return coord_partial(e, C, Cp); };
    Spinor kap = lower_all(to_spinor(K));
    Spinor Z = to_spinor(zeta);
    Spinor dZ = derivative(Z, d);           // zeta^{FE'}_{,GA'}
    Spinor tr = trace(dZ, 0, 2);            // (E' up, A' down)
    Spinor div = trace(tr, 0, 1);           // d_{CC'} zeta^{CC'}
    Spinor transport = contract(Z, derivative(kap, d), {{0, 4}, {1, 5}});
    Spinor rot = symmetrize(contract(tr, kap, {{0, 3}}), {0, 1, 2, 3}).scaled(Scalar(2));
    Spinor weight = kap.times(div[0]).scaled(Scalar(Rational(-3, 2)));
    return from_spinor(transport + rot + weight);
  }
  throw std::invalid_argument("Lie derivative implemented for types (1,1) and (0,4)");
}

std::array<int, 15> ckv_counts(int s, int p, int i, int j, int n, int np) {
  int l = s - p + i, lp = s - p + j;
  using std::max;
  using std::min;
  std::array<int, 15> c{};
  c[0] = min(n, min(l, np));
  c[1] = max(0, min(n - np, l - np));
  c[2] = max(0, min(np - n, l - n));
  c[3] = max(0, min(l - np, l - n));
  c[4] = max(0, min(np - lp, lp - l));
  c[5] = max(0, lp - l - std::abs(lp - np));
  c[6] = max(0, min(lp - np, lp - l));
  c[7] = c[8] = c[9] = 0;
  c[10] = s - (i + j + l + lp) / 2;
  c[11] = max(0, min(np - 2 * lp + l, n - l));
  c[12] = max(0, min(n - np + 2 * (lp - l), n - l));
  c[13] = max(0, min(np - n + 2 * (l - lp), np - 2 * lp + l));
  c[14] = i - max(0, max(np - 2 * lp + l, n - l));
  return c;
}

std::array<int, 10> cky_counts(int k, int m, int mp) {
  int h = k / 2;
  using std::max;
  using std::min;
  std::array<int, 10> c{};
  c[0] = min(2 + h - k, max(0, m + k - h - 2));
  c[1] = max(0, min(m, 4 + 2 * h - 2 * k - m));
  c[2] = max(0, 2 + h - k - m);
  c[3] = max(0, m + k - 4 + min(k - 2 * h, mp));
  c[4] = max(0, m + k - 4 + max(0, k - 2 * h - mp));
  c[5] = min(k - 2 * h, mp) - c[3];
  c[6] = max(0, k - 2 * h - mp) - c[4];
  c[7] = max(0, mp - k + h);
  c[8] = max(0, k - mp + min(0, 2 * mp - 2 * k + 2 * h));
  c[9] = max(0, h - max(0, mp - k + 2 * h));
  return c;
}

std::string ProductLabel::str() const {
  std::ostringstream os;
  if (chiral()) os << (minus ? '-' : '+');
  os << '(' << s << ',' << p;
  if (chiral()) os << ',' << k;
  os << ',' << i << ',' << j << ',' << n << ',' << np;
  if (chiral()) os << ',' << m << ',' << mp;
  os << ')';
  if (prime) os << '\'';
  return os.str();
}

ProductLabel ProductLabel::parse(const std::string& text) {
  ProductLabel lab;
  std::string t = text;
  bool chiral = false;
  if (!t.empty() && (t[0] == '+' || t[0] == '-')) {
    chiral = true;
    lab.minus = t[0] == '-';
    t = t.substr(1);
  }
  if (!t.empty() && t.back() == '\'') {
    lab.prime = true;
    t.pop_back();
  }
  if (t.size() < 2 || t.front() != '(' || t.back() != ')') throw std::invalid_argument("bad product label " + text);
  std::vector<int> v;
  std::istringstream is(t.substr(1, t.size() - 2));
  std::string part;
  while (std::getline(is, part, ',')) v.push_back(std::stoi(part));
  if (chiral && v.size() == 9) {
    lab.s = v[0], lab.p = v[1], lab.k = v[2], lab.i = v[3], lab.j = v[4], lab.n = v[5], lab.np = v[6];
    lab.m = v[7], lab.mp = v[8];
  } else if (!chiral && v.size() == 6) {
    lab.s = v[0], lab.p = v[1], lab.i = v[2], lab.j = v[3], lab.n = v[4], lab.np = v[5];
  } else {
    throw std::invalid_argument("bad product label " + text);
  }
  return lab;
}

std::vector<KillingSpinor> product_ckv_factors(const ProductLabel& lab) {
  int pp = lab.chiral() ? lab.p - lab.k : lab.p;
  auto counts = ckv_counts(lab.s, pp, lab.i, lab.j, lab.n, lab.np);
  const auto& basis = killing_basis(KillingKind::CKV);
  std::vector<KillingSpinor> out;
  for (std::size_t q = 0; q < counts.size(); ++q) {
    if (counts[q] < 0) throw std::logic_error("negative count for " + lab.str());
    for (int t = 0; t < counts[q]; ++t) out.push_back(basis[q].K);
  }
  return out;
}

std::vector<KillingSpinor> product_cky_factors(const ProductLabel& lab) {
  if (!lab.chiral()) return {};
  auto counts = cky_counts(lab.k, lab.m, lab.mp);
  const auto& basis = killing_basis(KillingKind::CKY);
  std::vector<KillingSpinor> out;
  for (std::size_t q = 0; q < counts.size(); ++q) {
    if (counts[q] < 0) throw std::logic_error("negative count for " + lab.str());
    for (int t = 0; t < counts[q]; ++t) out.push_back(basis[q].K);
  }
  return out;
}

KillingSpinor product_element(const ProductLabel& lab) {
  auto xs = product_ckv_factors(lab);
  std::vector<KillingSpinor> cs;
  for (const auto& x : xs) cs.push_back(conj_spinor(x));
  KillingSpinor P = killing_sym_product(xs), Pc = killing_sym_product(cs);
  KillingSpinor R = lab.prime ? (P - Pc).scaled(Scalar::i()) : P + Pc;
  if (lab.chiral()) {
    R = sym_product2(killing_sym_product(product_cky_factors(lab)), R);
    if (lab.minus) R = R.scaled(lab.prime ? -Scalar::i() : Scalar::i());
  }
  return R;
}

namespace {

template <class F>
void for_each_ijnn(int s, int p, F&& f) {
  for (int i = std::max(0, p - s); i <= p - i; ++i) {
    for (int j = i; j <= p - i; ++j) {
      int nmax = s - p + 2 * i, npmax = s - p + 2 * j;
      for (int n = 0; n <= nmax; ++n) {
        for (int np = (i == j ? n : 0); np <= npmax; ++np) f(i, j, n, np);
      }
    }
  }
}

}  // namespace

std::vector<ProductLabel> real_labels(int s) {
  std::vector<ProductLabel> out;
  for (int p = 0; p <= 2 * s; ++p) {
    for_each_ijnn(s, p, [&](int i, int j, int n, int np) {
      ProductLabel lab;
      lab.s = s, lab.p = p, lab.i = i, lab.j = j, lab.n = n, lab.np = np;
      out.push_back(lab);
      if (i != j || n != np) {
        lab.prime = true;
        out.push_back(lab);
      }
    });
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ProductLabel> chiral_labels_raw(int s) {
  std::vector<ProductLabel> out;
  for (int p = 0; p <= 2 * s + 4; ++p) {
    for (int k = 0; k <= 4; ++k) {
      int pp = p - k;
      if (pp < 0 || pp > 2 * s) continue;
      for_each_ijnn(s, pp, [&](int i, int j, int n, int np) {
        int m0 = n == 0 ? 0 : 4 - k, m1 = 4 - k, q0 = n == 0 ? 0 : k, q1 = k;
        for (int m = m0; m <= m1; ++m) {
          for (int mp = q0; mp <= q1; ++mp) {
            ProductLabel lab;
            lab.s = s, lab.p = p, lab.k = k, lab.i = i, lab.j = j, lab.n = n, lab.np = np, lab.m = m, lab.mp = mp;
            out.push_back(lab);
            if (i != j || n != np) {
              lab.prime = true;
              out.push_back(lab);
            }
          }
        }
      });
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Flattened coordinates of a Killing spinor: column = (monomial id * ncomp + component) * 4 + part.
struct Factorizer {
  std::vector<ProductLabel> labels;
  ColumnIndex index{1};
  Echelon ech;
  std::uint32_t tag_base = 1u << 30;
  int k = 0, l = 0;
};

SparseVec flatten_ks(ColumnIndex& idx, const KillingSpinor& K) { return idx.flatten(K.c); }

}  // namespace

const std::vector<ProductLabel>& real_basis(int s) {
  static std::mutex mu;
  static std::map<int, std::vector<ProductLabel>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(s);
  if (it == cache.end()) it = cache.emplace(s, real_labels(s)).first;
  return it->second;
}

const std::vector<ProductLabel>& chiral_basis(int s) {
  static std::mutex mu;
  static std::map<int, std::vector<ProductLabel>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(s);
  if (it != cache.end()) return it->second;
  // Complex independence of K is real independence of {K, iK}.
  ColumnIndex idx((s + 1) * (s + 5));
  Echelon ech;
  std::vector<ProductLabel> out;
  for (const auto& lab : chiral_labels_raw(s)) {
    KillingSpinor K = product_element(lab);
    SparseVec re = idx.flatten(K.c), im = idx.flatten(K.scaled(Scalar::i()).c);
    Echelon trial = ech;
    if (!trial.insert(re) || !trial.insert(im)) continue;
    ech = std::move(trial);
    out.push_back(lab);
    ProductLabel neg = lab;
    neg.minus = true;
    out.push_back(neg);
  }
  return cache.emplace(s, std::move(out)).first->second;
}

namespace {

Factorizer& factorizer(int k, int l) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<Factorizer>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{k, l}];
  if (!slot) {
    auto f = std::make_unique<Factorizer>();
    f->k = k, f->l = l;
    f->index = ColumnIndex((k + 1) * (l + 1));
    if (k == l) {
      f->labels = real_basis(k);
    } else if (l == k + 4) {
      f->labels = chiral_basis(k);
    } else {
      throw std::invalid_argument("factorization is defined for types (s,s) and (s,s+4)");
    }
    for (std::uint32_t q = 0; q < f->labels.size(); ++q) {
      SparseVec row = flatten_ks(f->index, product_element(f->labels[q]));
      row.emplace_back(f->tag_base + q, Rational(1));
      f->ech.insert(std::move(row));
    }
    slot = std::move(f);
  }
  return *slot;
}

}  // namespace

std::vector<std::pair<ProductLabel, Rational>> killing_factorize(const KillingSpinor& K) {
  if (!killing_verify(K)) throw std::invalid_argument("factorization input is not a Killing spinor");
  Factorizer& f = factorizer(K.k, K.l);
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  SparseVec r = f.ech.reduce(flatten_ks(f.index, K));
  std::vector<std::pair<ProductLabel, Rational>> out;
  for (const auto& [col, v] : r) {
    if (col < f.tag_base) throw std::invalid_argument("spinor is outside the real span of the product basis");
    out.emplace_back(f.labels[col - f.tag_base], -v);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

long long dim_kk(int k) {
  long long a = k + 1, b = k + 2;
  return a * a * b * b * (2 * k + 3) / 12;
}

long long dim_kk4(int k) {
  return static_cast<long long>(k + 1) * (k + 2) * (k + 5) * (k + 6) * (2 * k + 7) / 12;
}

}  // namespace maxcons
