#include "maxcons/jetspace.hpp"

#include <algorithm>
#include <stdexcept>

namespace maxcons {
namespace {

std::array<int, 4> counts_of(const std::vector<Frame>& derivs) {
  std::array<int, 4> c{};
  for (Frame f : derivs) ++c[static_cast<std::size_t>(f)];
  return c;
}

int eps_lower(int a, int b) { return a == b ? 0 : (a == 0 ? 1 : -1); }

}  // namespace

Poly onshell_derivative(const Poly& e, int C, int Cp) {
  std::vector<Term> out;
  out.reserve(e.size() * 2);
  for (const auto& t : e.terms()) {
    for (std::size_t i = 0; i < t.m.size(); ++i) {
      Variable v = t.m.var(i);
      Scalar k(static_cast<long long>(t.m.exp(i)));
      switch (v.kind()) {
        case Variable::Kind::Coord:
          if (v.coord_u() == C && v.coord_p() == Cp) out.push_back({t.m.drop_one(i), t.c * k});
          break;
        case Variable::Kind::OnShellJet: {
          Variable w = Variable::jet(v.order() + 1, v.jet_a() + C, v.jet_b() + Cp, v.barred());
          out.push_back({t.m.drop_one(i).times(w), t.c * k});
          break;
        }
        case Variable::Kind::TensorJet:
          throw std::invalid_argument("on-shell derivative applied to a tensor jet");
      }
    }
  }
  return Poly::from_terms(std::move(out));
}

Poly tensor_derivative(const Poly& e, Frame mu) {
  auto [C, Cp] = frame_pair(mu);
  std::vector<Term> out;
  out.reserve(e.size() * 2);
  for (const auto& t : e.terms()) {
    for (std::size_t i = 0; i < t.m.size(); ++i) {
      Variable v = t.m.var(i);
      Scalar k(static_cast<long long>(t.m.exp(i)));
      switch (v.kind()) {
        case Variable::Kind::Coord:
          if (v.coord_u() == C && v.coord_p() == Cp) out.push_back({t.m.drop_one(i), t.c * k});
          break;
        case Variable::Kind::TensorJet: {
          auto c = v.deriv_counts();
          ++c[static_cast<std::size_t>(mu)];
          out.push_back({t.m.drop_one(i).times(Variable::tensor(v.skew(), c)), t.c * k});
          break;
        }
        case Variable::Kind::OnShellJet:
          throw std::invalid_argument("tensor derivative applied to an on-shell jet");
      }
    }
  }
  return Poly::from_terms(std::move(out));
}

Deriv onshell_D() {
  return [](const Poly& e, int C, int Cp) { return onshell_derivative(e, C, Cp); };
}

Deriv tensor_D() {
  return [](const Poly& e, int C, int Cp) { return tensor_derivative(e, frame_of(C, Cp)); };
}

std::pair<Frame, int> frame_raise(Frame f) {
  switch (f) {
    case Frame::L: return {Frame::N, 1};
    case Frame::N: return {Frame::L, 1};
    case Frame::M: return {Frame::MBAR, -1};
    case Frame::MBAR: return {Frame::M, -1};
  }
  return {f, 1};
}

Scalar levi_civita(Frame a, Frame b, Frame c, Frame d) {
  int v[4] = {static_cast<int>(a), static_cast<int>(b), static_cast<int>(c), static_cast<int>(d)};
  int sign = 1;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (v[i] == v[j]) return Scalar();
      if (v[i] > v[j]) sign = -sign;
    }
  }
  return Scalar(Rational(0), Rational(-sign));
}

Poly tensor_jet(Frame mu, Frame nu, const std::vector<Frame>& derivs) {
  if (mu == nu) return Poly();
  if (mu < nu) return Poly::var(Variable::tensor(skew_index(mu, nu), counts_of(derivs)));
  return -Poly::var(Variable::tensor(skew_index(nu, mu), counts_of(derivs)));
}

namespace {

// omega_{mu nu} from skew components, any order of legs.
Poly two_form_entry(const TwoForm& w, Frame mu, Frame nu) {
  if (mu == nu) return Poly();
  if (mu < nu) return w[static_cast<std::size_t>(skew_index(mu, nu))];
  return -w[static_cast<std::size_t>(skew_index(nu, mu))];
}

}  // namespace

TwoForm hodge_dual(const TwoForm& omega) {
  TwoForm r;
  for (int k = 0; k < kSkewPairs; ++k) {
    auto [mu, nu] = skew_pair(k);
    Poly sum;
    for (int s = 0; s < kSkewPairs; ++s) {
      auto [sigma, tau] = skew_pair(s);
      Scalar e = levi_civita(mu, nu, sigma, tau);
      if (e.is_zero()) continue;
      auto [s1, g1] = frame_raise(sigma);
      auto [t1, g2] = frame_raise(tau);
      sum += two_form_entry(omega, s1, t1).scaled(e * Scalar(g1 * g2));
    }
    r[static_cast<std::size_t>(k)] = std::move(sum);
  }
  return r;
}

Poly duality_transform(const Poly& e) {
  return e.substitute([](Variable v) -> Poly {
    switch (v.kind()) {
      case Variable::Kind::Coord: return Poly::var(v);
      case Variable::Kind::OnShellJet:
        return Poly::var(v).scaled(v.barred() ? Scalar::i() : -Scalar::i());
      case Variable::Kind::TensorJet: {
        // (*F)_k = sum_j (*e_j)_k F_j over unit forms e_j
        Poly out;
        auto counts = v.deriv_counts();
        for (int j = 0; j < kSkewPairs; ++j) {
          TwoForm unit;
          unit[static_cast<std::size_t>(j)] = Poly(1);
          Poly coeff = hodge_dual(unit)[static_cast<std::size_t>(v.skew())];
          if (!coeff.is_zero()) out += coeff * Poly::var(Variable::tensor(j, counts));
        }
        return out;
      }
    }
    return Poly::var(v);
  });
}

Poly restrict_onshell(const Poly& e) {
  return e.substitute([](Variable v) -> Poly {
    if (v.kind() != Variable::Kind::TensorJet) return Poly::var(v);
    auto [mu, nu] = skew_pair(v.skew());
    auto [A, Ap] = frame_pair(mu);
    auto [B, Bp] = frame_pair(nu);
    auto counts = v.deriv_counts();
    int p = 0, du = 0, dp = 0;
    for (int f = 0; f < 4; ++f) {
      auto [u, q] = frame_pair(static_cast<Frame>(f));
      int n = counts[static_cast<std::size_t>(f)];
      p += n;
      du += u * n;
      dp += q * n;
    }
    Poly r;
    if (int e1 = eps_lower(Ap, Bp); e1 != 0) {
      r += Poly::var(Variable::jet(p, A + B + du, dp, false)).scaled(Scalar(e1));
    }
    if (int e2 = eps_lower(A, B); e2 != 0) {
      r += Poly::var(Variable::jet(p, du, Ap + Bp + dp, true)).scaled(Scalar(e2));
    }
    return r;
  });
}

Poly lift_to_tensor(const Poly& e) {
  return e.substitute([](Variable v) -> Poly {
    if (v.kind() != Variable::Kind::OnShellJet) return Poly::var(v);
    const int p = v.order();
    const bool barred = v.barred();
    const int nu = barred ? p : p + 2;   // unprimed indices
    const int np = barred ? p + 2 : p;   // primed indices
    const int a = v.jet_a(), b = v.jet_b();
    Poly sum;
    long long count = 0;
    for (unsigned mu_bits = 0; mu_bits < (1u << nu); ++mu_bits) {
      if (__builtin_popcount(mu_bits) != a) continue;
      for (unsigned mp_bits = 0; mp_bits < (1u << np); ++mp_bits) {
        if (__builtin_popcount(mp_bits) != b) continue;
        ++count;
        auto ub = [&](int k) { return static_cast<int>((mu_bits >> k) & 1u); };
        auto pb = [&](int k) { return static_cast<int>((mp_bits >> k) & 1u); };
        std::vector<Frame> derivs;
        if (!barred) {
          for (int k = 0; k < p; ++k) derivs.push_back(frame_of(ub(k + 2), pb(k)));
          // phi_{AB} = 1/2 F_{AA'BB'} eps^{A'B'}
          sum += tensor_jet(frame_of(ub(0), 0), frame_of(ub(1), 1), derivs);
          sum -= tensor_jet(frame_of(ub(0), 1), frame_of(ub(1), 0), derivs);
        } else {
          for (int k = 0; k < p; ++k) derivs.push_back(frame_of(ub(k), pb(k + 2)));
          sum += tensor_jet(frame_of(0, pb(0)), frame_of(1, pb(1)), derivs);
          sum -= tensor_jet(frame_of(1, pb(0)), frame_of(0, pb(1)), derivs);
        }
      }
    }
    return sum.scaled(Scalar(Rational(1, 2 * count)));
  });
}

TwoForm euler_operator(const Poly& e) {
  TwoForm out;
  for (Variable v : e.variables()) {
    if (v.kind() != Variable::Kind::TensorJet) continue;
    Poly d = e.partial(v);
    auto counts = v.deriv_counts();
    int order = 0;
    for (int f = 0; f < 4; ++f) {
      for (int k = 0; k < counts[static_cast<std::size_t>(f)]; ++k) {
        d = tensor_derivative(d, static_cast<Frame>(f));
        ++order;
      }
    }
    if (order % 2) d = -d;
    out[static_cast<std::size_t>(v.skew())] += d.scaled(Scalar(Rational(1, 2)));
  }
  return out;
}

// ---------------------------------------------------------------------------

int Current::order() const {
  int r = 0;
  for (const auto& p : c) r = std::max(r, p.max_jet_order());
  return r;
}

Spinor Current::as_spinor() const {
  if (rep != Rep::Spinor) throw std::invalid_argument("current is not in spinor form");
  Spinor s({Idx::LoU, Idx::LoP});
  for (std::size_t k = 0; k < 4; ++k) s[k] = c[k];
  return s;
}

Current Current::from_spinor(const Spinor& s) {
  if (s.slots() != std::vector<Idx>{Idx::LoU, Idx::LoP}) throw std::invalid_argument("expected a (LoU, LoP) spinor");
  Current r;
  for (std::size_t k = 0; k < 4; ++k) r.c[k] = s[k];
  return r;
}

bool Current::is_zero() const {
  return std::all_of(c.begin(), c.end(), [](const Poly& p) { return p.is_zero(); });
}

bool Current::is_real() const {
  if (rep == Rep::Spinor) return c[0].conj() == c[0] && c[3].conj() == c[3] && c[1].conj() == c[2];
  // tensor: Psi^L, Psi^N real, Psi^M and Psi^MBAR conjugate
  return c[0].conj() == c[0] && c[1].conj() == c[1] && c[2].conj() == c[3];
}

Current& Current::operator+=(const Current& o) {
  if (o.rep != rep) throw std::invalid_argument("adding currents in different representations");
  for (std::size_t k = 0; k < 4; ++k) c[k] += o.c[k];
  return *this;
}

Current& Current::operator-=(const Current& o) {
  if (o.rep != rep) throw std::invalid_argument("subtracting currents in different representations");
  for (std::size_t k = 0; k < 4; ++k) c[k] -= o.c[k];
  return *this;
}

Current Current::scaled(const Scalar& s) const {
  Current r = *this;
  for (auto& p : r.c) p = p.scaled(s);
  return r;
}

Current operator+(Current a, const Current& b) { return a += b; }
Current operator-(Current a, const Current& b) { return a -= b; }

Current tensor_to_spinor(const Current& t) {
  if (t.rep == Current::Rep::Spinor) return t;
  Current s;
  s.rep = Current::Rep::Spinor;
  s.c[0] = restrict_onshell(t.c[1]);   // Psi_{00'} = Psi^N
  s.c[3] = restrict_onshell(t.c[0]);   // Psi_{11'} = Psi^L
  s.c[1] = -restrict_onshell(t.c[3]);  // Psi_{01'} = -Psi^MBAR
  s.c[2] = -restrict_onshell(t.c[2]);  // Psi_{10'} = -Psi^M
  return s;
}

Current spinor_to_tensor(const Current& s) {
  if (s.rep == Current::Rep::Tensor) return s;
  Current t;
  t.rep = Current::Rep::Tensor;
  t.c[1] = lift_to_tensor(s.c[0]);
  t.c[0] = lift_to_tensor(s.c[3]);
  t.c[3] = -lift_to_tensor(s.c[1]);
  t.c[2] = -lift_to_tensor(s.c[2]);
  return t;
}

Poly divergence(const Current& c) {
  if (c.rep == Current::Rep::Tensor) {
    Poly d;
    for (int f = 0; f < 4; ++f) d += tensor_derivative(c.c[static_cast<std::size_t>(f)], static_cast<Frame>(f));
    return d;
  }
  return onshell_derivative(c.c[0], 1, 1) - onshell_derivative(c.c[1], 1, 0) - onshell_derivative(c.c[2], 0, 1) +
         onshell_derivative(c.c[3], 0, 0);
}

bool is_conserved(const Current& c) {
  if (c.rep == Current::Rep::Tensor) return restrict_onshell(divergence(c)).is_zero();
  return divergence(c).is_zero();
}

// ---------------------------------------------------------------------------

Spinor OnShellJets::phi(int p, bool barred) const {
  const int n1 = p + 2, n2 = p;
  std::vector<Idx> slots(static_cast<std::size_t>(n1), barred ? Idx::LoP : Idx::LoU);
  slots.insert(slots.end(), static_cast<std::size_t>(n2), barred ? Idx::LoU : Idx::LoP);
  Spinor s(slots);
  for (std::size_t f = 0; f < s.size(); ++f) {
    int c1 = 0, c2 = 0;
    for (int k = 0; k < n1; ++k) c1 += s.value(f, static_cast<std::size_t>(k));
    for (int k = 0; k < n2; ++k) c2 += s.value(f, static_cast<std::size_t>(n1 + k));
    s[f] = barred ? Poly::var(Variable::jet(p, c2, c1, true)) : Poly::var(Variable::jet(p, c1, c2, false));
  }
  return s;
}

Spinor OffShellJets::phi(int p, bool barred) const {
  // phi_{AB} = 1/2 F_{AA'BB'} eps^{A'B'}, phibar_{A'B'} = 1/2 F_{AA'BB'} eps^{AB}
  Idx field = barred ? Idx::LoP : Idx::LoU;
  Spinor s({field, field});
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      Poly v;
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          int e = eps_lower(a, b);
          if (e == 0) continue;
          Frame mu = barred ? frame_of(a, x) : frame_of(x, a);
          Frame nu = barred ? frame_of(b, y) : frame_of(y, b);
          v += tensor_jet(mu, nu).scaled(Scalar(e));
        }
      }
      s.at({x, y}) = v.scaled(Scalar(Rational(1, 2)));
    }
  }
  for (int k = 0; k < p; ++k) s = derivative(s, tensor_D());
  // derivative slots come in (LoU, LoP) pairs after the two field slots
  std::vector<int> grp1 = {0, 1}, grp2;
  for (int k = 0; k < p; ++k) {
    int u = 2 + 2 * k, q = 3 + 2 * k;
    grp1.push_back(barred ? q : u);
    grp2.push_back(barred ? u : q);
  }
  std::vector<int> perm = grp1;
  perm.insert(perm.end(), grp2.begin(), grp2.end());
  s = permute(s, perm);
  std::vector<int> g1, g2;
  for (int k = 0; k < p + 2; ++k) g1.push_back(k);
  for (int k = 0; k < p; ++k) g2.push_back(p + 2 + k);
  s = symmetrize(s, g1);
  if (p > 1) s = symmetrize(s, g2);
  return s;
}

const JetSource& onshell_jets() {
  static const OnShellJets jets;
  return jets;
}

}  // namespace maxcons
