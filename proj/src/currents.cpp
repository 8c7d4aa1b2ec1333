#include "maxcons/currents.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "maxcons/linalg.hpp"

namespace maxcons {

namespace {

Deriv coord_deriv() {
  return [](const Poly& e, int C, int Cp) { return e.partial(Variable::coord(C, Cp)); };
}

Spinor sym2(const Spinor& s) { return symmetrize(s, {0, 1}); }

std::array<Poly, 3> sym_components(const Spinor& s) {
  Spinor y = sym2(s);
  return {y.at({0, 0}), y.at({0, 1}), y.at({1, 1})};
}

// Lower-index rank 4 primed spinor of a type (0,4) Killing spinor.
Spinor lower_k04(const KillingSpinor& kappa) {
  if (kappa.k != 0 || kappa.l != 4) throw std::invalid_argument("expected a type (0,4) spinor");
  return lower_all(to_spinor(kappa));
}

Spinor lower_k11(const KillingSpinor& xi) {
  if (xi.k != 1 || xi.l != 1) throw std::invalid_argument("expected a type (1,1) spinor");
  return to_spinor(xi);
}

}  // namespace

SpinorField field_add(const SpinorField& a, const SpinorField& b) {
  SpinorField r;
  for (std::size_t k = 0; k < 4; ++k) r[k] = a[k] + b[k];
  return r;
}

SpinorField field_scaled(const SpinorField& a, const Scalar& s) {
  SpinorField r;
  for (std::size_t k = 0; k < 4; ++k) r[k] = a[k].scaled(s);
  return r;
}

bool field_is_zero(const SpinorField& a) {
  return std::all_of(a.begin(), a.end(), [](const Poly& p) { return p.is_zero(); });
}

Spinor field_spinor(const SpinorField& a) {
  Spinor s({Idx::LoU, Idx::LoP});
  for (std::size_t k = 0; k < 4; ++k) s[k] = a[k];
  return s;
}

SpinorField spinor_field(const Spinor& s) {
  if (s.slots() != std::vector<Idx>{Idx::LoU, Idx::LoP}) throw std::invalid_argument("expected a (LoU, LoP) spinor");
  SpinorField r;
  for (std::size_t k = 0; k < 4; ++k) r[k] = s[k];
  return r;
}

int AdjointSymmetry::order() const {
  int o = 0;
  for (const auto& p : c) o = std::max(o, p.max_jet_order());
  return o;
}

// ---------------------------------------------------------------------------
// Prolonged conformal symmetries

ProlongedSymmetry::ProlongedSymmetry(KillingSpinor zeta) : zeta_(std::move(zeta)) {
  if (zeta_.k != 1 || zeta_.l != 1) throw std::invalid_argument("prolonged symmetry needs a type (1,1) spinor");
}

const Poly& ProlongedSymmetry::jet_value(Variable v) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  auto it = cache_.find(v);
  if (it != cache_.end()) return it->second;
  const int p = v.order(), a = v.jet_a(), b = v.jet_b();
  const bool barred = v.barred();
  Poly val;
  if (p == 0) {
    // pi_zeta phi_AB = zeta.D phi_AB + Sym_AB[(d_{AC'} zeta^{CC'}) phi_BC], and its primed analogue.
    const JetSource& jets = onshell_jets();
    Spinor Z = to_spinor(zeta_);
    Spinor ph = jets.phi(0, barred);
    Spinor t1 = contract(Z, derivative(ph, onshell_D()), {{0, 2}, {1, 3}});
    Spinor dZ = derivative(Z, coord_deriv());
    Spinor t2 = barred ? contract(trace(dZ, 0, 2), ph, {{0, 1}}) : contract(trace(dZ, 1, 3), ph, {{0, 1}});
    Spinor pi = t1 + sym2(t2);
    val = pi.at({a >= 1 ? 1 : 0, a >= 2 ? 1 : 0});
    if (barred) val = pi.at({b >= 1 ? 1 : 0, b >= 2 ? 1 : 0});
  } else {
    // pr X commutes with D, and on-shell jets are symmetric, so any index split will do.
    const int C = a > 0 ? 1 : 0, Cp = b > 0 ? 1 : 0;
    val = onshell_derivative(jet_value(Variable::jet(p - 1, a - C, b - Cp, barred)), C, Cp);
  }
  return cache_.emplace(v, std::move(val)).first->second;
}

Poly ProlongedSymmetry::apply(const Poly& e) const {
  // Derivation: sum over jet factors of (de/dv) * value(v).
  Poly out;
  for (const auto& t : e.terms()) {
    for (std::size_t f = 0; f < t.m.size(); ++f) {
      Variable v = t.m.var(f);
      if (v.kind() != Variable::Kind::OnShellJet) continue;
      Scalar c = t.c * Scalar(static_cast<long long>(t.m.exp(f)));
      out += Poly::monomial(t.m.drop_one(f), c) * jet_value(v);
    }
  }
  return out;
}

SpinorField ProlongedSymmetry::apply(const SpinorField& f) const {
  SpinorField r;
  for (std::size_t k = 0; k < 4; ++k) r[k] = apply(f[k]);
  return r;
}

Poly prolonged_symmetry_apply(const KillingSpinor& zeta, const Poly& e) { return ProlongedSymmetry(zeta).apply(e); }

// ---------------------------------------------------------------------------
// Adjoint symmetries

SpinorField adjsym_U0(const KillingSpinor& xi, const JetSource& jets) {
  Spinor Xi = lower(lower_k11(xi), 1);  // xi^B_{A'}
  Spinor U = contract(Xi, jets.phi(0, false), {{0, 1}});
  return spinor_field(permute(U, {1, 0}));
}

SpinorField adjsym_V0(const KillingSpinor& kappa, const JetSource& jets) {
  Spinor K = lower_k04(kappa);
  // phibar^{B'C'D'}_A as the order 1 barred jet with primed slots raised
  Spinor d1 = raise(raise(raise(jets.phi(1, true), 0), 1), 2);
  Spinor t1 = contract(K, d1, {{1, 0}, {2, 1}, {3, 2}});  // (A', A)
  // (d^{B'}_A kappa_{A'B'C'D'}) phibar^{C'D'}
  Spinor dK = trace(raise(derivative(K, coord_deriv()), 5), 1, 5);  // (A', C', D', A)
  Spinor pb = raise(raise(jets.phi(0, true), 0), 1);
  Spinor t2 = contract(dK, pb, {{1, 0}, {2, 1}});  // (A', A)
  Spinor V = t1 + t2.scaled(Scalar(Rational(3, 5)));
  return spinor_field(permute(V, {1, 0}));
}

namespace {

SpinorField symmetrized_prolongation(const SpinorField& base, const std::vector<KillingSpinor>& zetas) {
  if (zetas.empty()) return base;
  std::vector<std::unique_ptr<ProlongedSymmetry>> X;
  for (const auto& z : zetas) X.push_back(std::make_unique<ProlongedSymmetry>(z));
  std::vector<int> perm(zetas.size());
  std::iota(perm.begin(), perm.end(), 0);
  SpinorField sum;
  long long count = 0;
  do {
    SpinorField f = base;
    for (auto it = perm.rbegin(); it != perm.rend(); ++it) f = X[static_cast<std::size_t>(*it)]->apply(f);
    sum = field_add(sum, f);
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return field_scaled(sum, Scalar(Rational(1, count)));
}

}  // namespace

AdjointSymmetry adjsym_U(const KillingSpinor& xi, const std::vector<KillingSpinor>& zetas) {
  return {symmetrized_prolongation(adjsym_U0(xi), zetas)};
}

AdjointSymmetry adjsym_V(const KillingSpinor& kappa, const std::vector<KillingSpinor>& zetas) {
  return {symmetrized_prolongation(adjsym_V0(kappa), zetas)};
}

std::array<Poly, 3> spinor_curl(const SpinorField& P, const Deriv& d) {
  // D^B_{A'} P_{BB'}: raise the unprimed derivative slot and contract it with B.
  Spinor dP = raise(derivative(field_spinor(P), d), 2);  // (B, B', C^, A')
  Spinor c = trace(dP, 0, 2);                           // (B', A')
  return sym_components(c);
}

bool adjsym_verify(const AdjointSymmetry& P) {
  auto c = spinor_curl(P.c, onshell_D());
  return std::all_of(c.begin(), c.end(), [](const Poly& p) { return p.is_zero(); });
}

AdjointSymmetry adjsym_W(const SpinorField& omega) {
  for (const auto& p : omega) {
    for (const auto& v : p.variables()) {
      if (v.kind() != Variable::Kind::Coord) throw std::invalid_argument("W adjoint symmetry must depend on x only");
    }
  }
  auto c = spinor_curl(omega, coord_deriv());
  for (const auto& p : c) {
    if (!p.is_zero()) throw std::invalid_argument("omega does not solve the W equation");
  }
  return {omega};
}

SpinorField field_equation(const JetSource& jets, bool barred) {
  Spinor ph = jets.phi(0, barred);
  Spinor d = derivative(ph, jets.deriv());
  if (!barred) {
    // eps^{BC} D_{CA'} phi_{AB}: slots (A, B, C, A')
    return spinor_field(trace(raise(d, 2), 1, 2));
  }
  // eps^{B'C'} D_{AC'} phibar_{A'B'}: slots (A', B', A, C')
  return spinor_field(permute(trace(raise(d, 3), 1, 3), {1, 0}));
}

SpinorField jet_lie(const KillingSpinor& zeta, const SpinorField& P) {
  if (zeta.k != 1 || zeta.l != 1) throw std::invalid_argument("jet_lie needs a type (1,1) spinor");
  SpinorField r;
  for (int A = 0; A <= 1; ++A) {
    for (int Ap = 0; Ap <= 1; ++Ap) {
      Poly v;
      for (int C = 0; C <= 1; ++C) {
        for (int Cp = 0; Cp <= 1; ++Cp) {
          v += zeta.at(C, Cp) * onshell_derivative(P[static_cast<std::size_t>(2 * A + Ap)], C, Cp);
          v += zeta.at(C, Cp).partial(Variable::coord(A, Ap)) * P[static_cast<std::size_t>(2 * C + Cp)];
        }
      }
      r[static_cast<std::size_t>(2 * A + Ap)] = std::move(v);
    }
  }
  return r;
}

std::array<Poly, 3> radj_rhs(const KillingSpinor& xi, const JetSource& jets) {
  Spinor Xi = lower(lower_k11(xi), 1);  // (B^, A')
  Spinor D = field_spinor(field_equation(jets, false));
  return sym_components(contract(Xi, D, {{0, 0}}));  // (A', B')
}

std::array<Poly, 3> sadj_rhs(const KillingSpinor& kappa, const JetSource& jets) {
  Spinor K = lower_k04(kappa);
  Spinor Db = raise_all(field_spinor(field_equation(jets, true)));  // (D^, D'^)
  // D_D^{C'} Dbar^{DD'}: slots (D^, D'^, E, E'^) -> (D'^, C'^)
  Spinor X = trace(raise(derivative(Db, jets.deriv()), 3), 0, 2);
  Spinor t1 = contract(K, X, {{2, 1}, {3, 0}});
  // Dbar^{DD'} d^{C'}_D kappa_{A'B'C'D'}
  Spinor dK = trace(raise(derivative(K, coord_deriv()), 5), 2, 5);  // (A', B', D', D)
  Spinor t2 = contract(dK, Db, {{3, 0}, {2, 1}});
  Spinor r = t1.scaled(Scalar(-1)) + t2.scaled(Scalar(Rational(-2, 5)));
  return sym_components(r);
}

// ---------------------------------------------------------------------------
// W equation

namespace {

std::vector<Poly> coord_monomials_upto(int maxdeg) {
  std::vector<Poly> out;
  for (int d = 0; d <= maxdeg; ++d) {
    for (int e0 = d; e0 >= 0; --e0) {
      for (int e1 = d - e0; e1 >= 0; --e1) {
        for (int e2 = d - e0 - e1; e2 >= 0; --e2) {
          int e3 = d - e0 - e1 - e2;
          Monomial m;
          const int ex[4] = {e0, e1, e2, e3};
          for (int q = 0; q < 4; ++q) {
            if (ex[q] > 0) m = m * Monomial(Variable::coord(q / 2, q % 2), static_cast<unsigned>(ex[q]));
          }
          out.push_back(Poly::monomial(m, Scalar(1)));
        }
      }
    }
  }
  return out;
}

std::vector<Poly> field_vec(const SpinorField& f) { return {f[0], f[1], f[2], f[3]}; }

SpinorField gradient(const Poly& chi) {
  SpinorField g;
  for (int q = 0; q < 4; ++q) g[static_cast<std::size_t>(q)] = chi.partial(Variable::coord(q / 2, q % 2));
  return g;
}

}  // namespace

std::vector<SpinorField> w_solution_basis(int maxdeg, bool gauge_quotient) {
  if (maxdeg < 0) return {};
  auto monos = coord_monomials_upto(maxdeg);
  // Unknown u = (component, monomial); its image under the curl operator.
  ColumnIndex eq_idx(3);
  std::vector<SparseVec> images;
  std::vector<SpinorField> unknowns;
  for (int comp = 0; comp < 4; ++comp) {
    for (const auto& m : monos) {
      SpinorField f;
      f[static_cast<std::size_t>(comp)] = m;
      auto c = spinor_curl(f, coord_deriv());
      images.push_back(eq_idx.flatten({c[0], c[1], c[2]}));
      unknowns.push_back(f);
    }
  }
  // Transpose into equation rows.
  std::map<std::uint32_t, SparseVec> rows;
  for (std::uint32_t u = 0; u < images.size(); ++u) {
    for (const auto& [col, v] : images[u]) rows[col].emplace_back(u, v);
  }
  Echelon sys;
  for (auto& [col, row] : rows) sys.insert(make_sparse(std::move(row)));
  auto kernel = sys.nullspace(static_cast<std::uint32_t>(unknowns.size()));
  std::vector<SpinorField> raw;
  for (const auto& vec : kernel) {
    SpinorField f;
    for (std::size_t u = 0; u < vec.size(); ++u) {
      if (vec[u].is_zero()) continue;
      f = field_add(f, field_scaled(unknowns[u], Scalar(vec[u])));
    }
    raw.push_back(std::move(f));
  }
  if (!gauge_quotient) return raw;
  ColumnIndex idx(4);
  Echelon gauge;
  for (const auto& chi : coord_monomials_upto(maxdeg + 1)) gauge.insert(idx.flatten(field_vec(gradient(chi))));
  std::vector<SpinorField> out;
  for (auto& f : raw) {
    if (gauge.insert(idx.flatten(field_vec(f)))) out.push_back(std::move(f));
  }
  return out;
}

bool is_gradient_field(const SpinorField& omega) {
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      Poly lhs = omega[static_cast<std::size_t>(b)].partial(Variable::coord(a / 2, a % 2));
      Poly rhs = omega[static_cast<std::size_t>(a)].partial(Variable::coord(b / 2, b % 2));
      if (!(lhs == rhs)) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Current densities

Current density_from_adjoint(const SpinorField& P) {
  const JetSource& jets = onshell_jets();
  Spinor Ps = field_spinor(P);
  Spinor t1 = contract(raise(Ps, 1), jets.phi(0, true), {{1, 1}});              // (A, A')
  Spinor t2 = contract(raise(conj(Ps), 1), jets.phi(0, false), {{1, 1}});       // (A', A)
  Spinor s = (t1 + permute(t2, {1, 0})).scaled(Scalar(Rational(1, 2)));
  return Current::from_spinor(s);
}

Current current_density(Family fam, const KillingSpinor& lead, const std::vector<KillingSpinor>& zetas) {
  switch (fam) {
    case Family::T:
      return density_from_adjoint(adjsym_U(lead, zetas).c);
    case Family::Z:
      return density_from_adjoint(field_scaled(adjsym_U(lead, zetas).c, Scalar::i()));
    case Family::V:
      return density_from_adjoint(adjsym_V(lead, zetas).c);
    case Family::W:
      break;
  }
  throw std::invalid_argument("W currents are built from omega; use density_w");
}

Current density_w(const SpinorField& omega) { return density_from_adjoint(field_scaled(adjsym_W(omega).c, Scalar(2))); }

SpinorField basis_adjoint(const ProductLabel& lab) {
  auto xs = product_ckv_factors(lab);
  std::vector<KillingSpinor> cs;
  for (const auto& x : xs) cs.push_back(conj_spinor(x));
  SpinorField P, Pc;
  if (lab.chiral()) {
    KillingSpinor kappa = killing_sym_product(product_cky_factors(lab));
    P = adjsym_V(kappa, xs).c;
    Pc = adjsym_V(kappa, cs).c;
  } else {
    if (xs.empty()) throw std::invalid_argument("real label without factors");
    P = adjsym_U(xs[0], {xs.begin() + 1, xs.end()}).c;
    Pc = adjsym_U(cs[0], {cs.begin() + 1, cs.end()}).c;
  }
  SpinorField base =
      lab.prime ? field_scaled(field_add(P, field_scaled(Pc, Scalar(-1))), Scalar::i()) : field_add(P, Pc);
  // Z family (even number of CKV factors) and the minus chiral partners carry i, or -i when primed.
  bool twist = lab.chiral() ? lab.minus : (lab.s % 2 == 0);
  if (twist) base = field_scaled(base, lab.prime ? -Scalar::i() : Scalar::i());
  return base;
}

Current basis_current(const ProductLabel& lab) { return density_from_adjoint(basis_adjoint(lab)); }

}  // namespace maxcons
