#include "maxcons/tensors.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace maxcons {

namespace {

constexpr Frame kLeg[4] = {Frame::L, Frame::N, Frame::M, Frame::MBAR};

int partner(int f) { return static_cast<int>(frame_raise(kLeg[f]).first); }
int metric_sign(int f) { return frame_raise(kLeg[f]).second; }
// Frame leg of the complex conjugate vector: M and MBAR swap.
int conj_leg(int f) { return f == 2 ? 3 : (f == 3 ? 2 : f); }

std::size_t pow4(std::size_t r) { return std::size_t{1} << (2 * r); }

Poly coord_partial(const Poly& e, int f) {
  auto [u, p] = frame_pair(kLeg[f]);
  return e.partial(Variable::coord(u, p));
}

}  // namespace

FrameTensor::FrameTensor(std::vector<bool> upper) : up_(std::move(upper)), data_(pow4(up_.size())) {}

FrameTensor FrameTensor::scalar(Poly v) {
  FrameTensor t;
  t.data_[0] = std::move(v);
  return t;
}

std::size_t FrameTensor::flat(const std::vector<int>& values) const {
  if (values.size() != rank()) throw std::invalid_argument("frame tensor index count mismatch");
  std::size_t f = 0;
  for (int v : values) f = (f << 2) | static_cast<std::size_t>(v);
  return f;
}

bool FrameTensor::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Poly& p) { return p.is_zero(); });
}

FrameTensor& FrameTensor::operator+=(const FrameTensor& o) {
  if (o.up_ != up_) throw std::invalid_argument("adding frame tensors of different valence");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

FrameTensor& FrameTensor::operator-=(const FrameTensor& o) {
  if (o.up_ != up_) throw std::invalid_argument("subtracting frame tensors of different valence");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

FrameTensor FrameTensor::scaled(const Scalar& s) const {
  FrameTensor r = *this;
  for (auto& p : r.data_) p = p.scaled(s);
  return r;
}

FrameTensor ft_outer(const FrameTensor& a, const FrameTensor& b) { return ft_contract(a, b, {}); }

FrameTensor ft_contract(const FrameTensor& a, const FrameTensor& b, const std::vector<std::pair<int, int>>& pairs) {
  std::vector<bool> used_a(a.rank(), false), used_b(b.rank(), false);
  for (auto [i, j] : pairs) {
    auto si = static_cast<std::size_t>(i), sj = static_cast<std::size_t>(j);
    if (a.upper(si) == b.upper(sj)) throw std::invalid_argument("contraction needs one upper and one lower slot");
    used_a[si] = used_b[sj] = true;
  }
  std::vector<bool> slots;
  std::vector<std::size_t> free_a, free_b;
  for (std::size_t k = 0; k < a.rank(); ++k) {
    if (!used_a[k]) free_a.push_back(k), slots.push_back(a.upper(k));
  }
  for (std::size_t k = 0; k < b.rank(); ++k) {
    if (!used_b[k]) free_b.push_back(k), slots.push_back(b.upper(k));
  }
  FrameTensor r(slots);
  for (std::size_t fa = 0; fa < a.size(); ++fa) {
    if (a[fa].is_zero()) continue;
    for (std::size_t fb = 0; fb < b.size(); ++fb) {
      if (b[fb].is_zero()) continue;
      bool match = true;
      for (auto [i, j] : pairs) {
        if (a.value(fa, static_cast<std::size_t>(i)) != b.value(fb, static_cast<std::size_t>(j))) {
          match = false;
          break;
        }
      }
      if (!match) continue;
      std::size_t fr = 0;
      for (auto k : free_a) fr = (fr << 2) | static_cast<std::size_t>(a.value(fa, k));
      for (auto k : free_b) fr = (fr << 2) | static_cast<std::size_t>(b.value(fb, k));
      r[fr] += a[fa] * b[fb];
    }
  }
  return r;
}

FrameTensor ft_trace(const FrameTensor& a, int i, int j) {
  auto si = static_cast<std::size_t>(i), sj = static_cast<std::size_t>(j);
  if (a.upper(si) == a.upper(sj)) throw std::invalid_argument("trace needs one upper and one lower slot");
  std::vector<bool> slots;
  for (std::size_t k = 0; k < a.rank(); ++k) {
    if (k != si && k != sj) slots.push_back(a.upper(k));
  }
  FrameTensor r(slots);
  for (std::size_t f = 0; f < a.size(); ++f) {
    if (a.value(f, si) != a.value(f, sj) || a[f].is_zero()) continue;
    std::size_t fr = 0;
    for (std::size_t k = 0; k < a.rank(); ++k) {
      if (k != si && k != sj) fr = (fr << 2) | static_cast<std::size_t>(a.value(f, k));
    }
    r[fr] += a[f];
  }
  return r;
}

namespace {

// The null metric is its own inverse and maps leg f to its partner with a sign.
FrameTensor flip_slot(const FrameTensor& a, int i, bool to_upper) {
  auto si = static_cast<std::size_t>(i);
  std::vector<bool> slots = a.slots();
  slots[si] = to_upper;
  FrameTensor r(slots);
  const std::size_t shift = 2 * (a.rank() - 1 - si);
  for (std::size_t f = 0; f < a.size(); ++f) {
    int v = a.value(f, si);
    std::size_t g = (f & ~(std::size_t{3} << shift)) | (static_cast<std::size_t>(partner(v)) << shift);
    r[f] = a[g].scaled(Scalar(metric_sign(v)));
  }
  return r;
}

}  // namespace

FrameTensor ft_raise(const FrameTensor& a, int i) {
  if (a.upper(static_cast<std::size_t>(i))) throw std::invalid_argument("slot already upper");
  return flip_slot(a, i, true);
}

FrameTensor ft_lower(const FrameTensor& a, int i) {
  if (!a.upper(static_cast<std::size_t>(i))) throw std::invalid_argument("slot already lower");
  return flip_slot(a, i, false);
}

FrameTensor ft_raise_all(FrameTensor a) {
  for (std::size_t k = 0; k < a.rank(); ++k) {
    if (!a.upper(k)) a = ft_raise(a, static_cast<int>(k));
  }
  return a;
}

FrameTensor ft_lower_all(FrameTensor a) {
  for (std::size_t k = 0; k < a.rank(); ++k) {
    if (a.upper(k)) a = ft_lower(a, static_cast<int>(k));
  }
  return a;
}

FrameTensor ft_permute(const FrameTensor& a, const std::vector<int>& order) {
  if (order.size() != a.rank()) throw std::invalid_argument("permutation size mismatch");
  std::vector<bool> slots;
  for (int o : order) slots.push_back(a.upper(static_cast<std::size_t>(o)));
  FrameTensor r(slots);
  for (std::size_t f = 0; f < a.size(); ++f) {
    std::size_t fr = 0;
    for (int o : order) fr = (fr << 2) | static_cast<std::size_t>(a.value(f, static_cast<std::size_t>(o)));
    r[fr] = a[f];
  }
  return r;
}

namespace {

FrameTensor average_over_perms(const FrameTensor& a, const std::vector<int>& slots, bool alternate) {
  for (int s : slots) {
    if (a.upper(static_cast<std::size_t>(s)) != a.upper(static_cast<std::size_t>(slots[0]))) {
      throw std::invalid_argument("(anti)symmetrizing slots of different position");
    }
  }
  std::vector<int> perm(slots.size());
  std::iota(perm.begin(), perm.end(), 0);
  FrameTensor sum(a.slots());
  long long count = 0;
  do {
    std::vector<int> order(a.rank());
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t k = 0; k < slots.size(); ++k) order[static_cast<std::size_t>(slots[k])] = slots[static_cast<std::size_t>(perm[k])];
    int sign = 1;
    if (alternate) {
      for (std::size_t x = 0; x < perm.size(); ++x) {
        for (std::size_t y = x + 1; y < perm.size(); ++y) {
          if (perm[x] > perm[y]) sign = -sign;
        }
      }
    }
    FrameTensor t = ft_permute(a, order);
    sum += sign > 0 ? t : t.scaled(Scalar(-1));
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sum.scaled(Scalar(Rational(1, count)));
}

}  // namespace

FrameTensor ft_symmetrize(const FrameTensor& a, const std::vector<int>& slots) {
  return average_over_perms(a, slots, false);
}

FrameTensor ft_antisymmetrize(const FrameTensor& a, const std::vector<int>& slots) {
  return average_over_perms(a, slots, true);
}

FrameTensor ft_derivative(const FrameTensor& a) {
  std::vector<bool> slots = a.slots();
  slots.push_back(false);
  FrameTensor r(slots);
  for (std::size_t f = 0; f < a.size(); ++f) {
    if (a[f].is_zero()) continue;
    for (int s = 0; s < 4; ++s) r[(f << 2) | static_cast<std::size_t>(s)] = tensor_derivative(a[f], kLeg[s]);
  }
  return r;
}

FrameTensor ft_map(const FrameTensor& a, const std::function<Poly(const Poly&)>& f) {
  FrameTensor r = a;
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = f(a[k]);
  return r;
}

FrameTensor ft_metric(bool upper) {
  FrameTensor g({upper, upper});
  for (int a = 0; a < 4; ++a) g.at({a, partner(a)}) = Poly(metric_sign(a));
  return g;
}

FrameTensor ft_delta() {
  FrameTensor d({true, false});
  for (int a = 0; a < 4; ++a) d.at({a, a}) = Poly(1);
  return d;
}

FrameTensor ft_volume() {
  FrameTensor e({false, false, false, false});
  for (std::size_t f = 0; f < e.size(); ++f) {
    e[f] = Poly(levi_civita(kLeg[e.value(f, 0)], kLeg[e.value(f, 1)], kLeg[e.value(f, 2)], kLeg[e.value(f, 3)]));
  }
  return e;
}

// ---------------------------------------------------------------------------
// Fields and Killing data

FrameTensor field_tensor() {
  FrameTensor F({false, false});
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) F.at({a, b}) = tensor_jet(kLeg[a], kLeg[b]);
  }
  return F;
}

FrameTensor dual_two_form(const FrameTensor& omega) {
  // *w_{mu nu} = 1/2 eps_{mu nu}^{rho sigma} w_{rho sigma}
  FrameTensor eps = ft_raise(ft_raise(ft_volume(), 2), 3);
  return ft_contract(eps, omega, {{2, 0}, {3, 1}}).scaled(Scalar(Rational(1, 2)));
}

FrameTensor ckv_tensor(const KillingSpinor& xi) {
  if (xi.k != 1 || xi.l != 1) throw std::invalid_argument("expected a type (1,1) spinor");
  FrameTensor v({true});
  for (int f = 0; f < 4; ++f) {
    auto [u, p] = frame_pair(kLeg[f]);
    v.at({f}) = xi.at(u, p);
  }
  return v;
}

FrameTensor cky_tensor(const KillingSpinor& Y) {
  if (Y.k != 0 || Y.l != 2) throw std::invalid_argument("expected a type (0,2) spinor");
  KillingSpinor Yb = conj_spinor(Y);
  auto eps = [](int a, int b) { return a == b ? 0 : (a == 0 ? 1 : -1); };
  FrameTensor t({false, false});
  for (int f = 0; f < 4; ++f) {
    for (int g = 0; g < 4; ++g) {
      auto [A, Ap] = frame_pair(kLeg[f]);
      auto [B, Bp] = frame_pair(kLeg[g]);
      Poly v;
      if (eps(A, B) != 0) v += lower_component(Y, 0, Ap + Bp).scaled(Scalar(eps(A, B)));
      if (eps(Ap, Bp) != 0) v += lower_component(Yb, A + B, 0).scaled(Scalar(eps(Ap, Bp)));
      t.at({f, g}) = v;
    }
  }
  return t;
}

FrameTensor lie_two_form(const KillingSpinor& xi, const FrameTensor& omega) {
  FrameTensor X = ckv_tensor(xi);
  // xi^s D_s w_ab
  FrameTensor r = ft_contract(X, ft_derivative(omega), {{0, 2}});
  // (d_a xi^s) w_sb + (d_b xi^s) w_as, with dX slots (s^, a)
  FrameTensor dX({true, false});
  for (int s = 0; s < 4; ++s) {
    for (int a = 0; a < 4; ++a) dX.at({s, a}) = coord_partial(X.at({s}), a);
  }
  FrameTensor t1 = ft_contract(dX, omega, {{0, 0}});  // (a, b)
  FrameTensor t2 = ft_permute(ft_contract(dX, omega, {{0, 1}}), {1, 0});
  return r + t1 + t2;
}

FrameTensor field_extension(const KillingSpinor& xi, int n) {
  FrameTensor F = field_tensor();
  for (int k = 0; k < n; ++k) F = lie_two_form(xi, F);
  return F;
}

FrameTensor ky4_build(const FrameTensor& Y1, const FrameTensor& Y2) {
  auto one = [](const FrameTensor& P, const FrameTensor& Q) {
    FrameTensor g = ft_metric(false);
    // Y_{ns} Y_{ab}
    FrameTensor t1 = ft_outer(P, Q);
    // Y_{n[a} Y_{b]s}: outer (n,a,b,s) antisymmetrized in a,b, then reordered to (n,s,a,b)
    FrameTensor t2 = ft_permute(ft_antisymmetrize(ft_outer(P, Q), {1, 2}), {0, 3, 1, 2});
    // g_{[n|[a} Y^t_{b]} Y_{t|s]}: slots (n, a, b, s) before antisymmetrizing [n s] and [a b]
    FrameTensor PQ = ft_contract(ft_raise(P, 0), Q, {{0, 0}});  // Y^t_b Y_ts -> (b, s)
    FrameTensor t3 = ft_outer(g, PQ);                            // (n, a, b, s)
    t3 = ft_permute(t3, {0, 3, 1, 2});                           // (n, s, a, b)
    t3 = ft_antisymmetrize(ft_antisymmetrize(t3, {0, 1}), {2, 3});
    // 1/2 g_{n[a} g_{b]s} Y^{tl} Y_{tl}
    Poly yy = ft_contract(ft_raise_all(P), Q, {{0, 0}, {1, 1}})[0];
    FrameTensor gg = ft_permute(ft_antisymmetrize(ft_outer(g, g), {1, 2}), {0, 3, 1, 2});
    FrameTensor t4 = gg.scaled(Scalar(Rational(1, 2)));
    for (std::size_t f = 0; f < t4.size(); ++f) t4[f] = t4[f] * yy;
    return t1 - t2 - t3.scaled(Scalar(3)) + t4;
  };
  return (one(Y1, Y2) + one(Y2, Y1)).scaled(Scalar(Rational(1, 2)));
}

// ---------------------------------------------------------------------------
// Tensorial currents

namespace {

Current vector_current(const FrameTensor& v) {
  if (v.rank() != 1 || !v.upper(0)) throw std::logic_error("current must be an upper vector");
  return Current::tensor({v[0], v[1], v[2], v[3]});
}

FrameTensor scalar_times(const FrameTensor& t, const Poly& p) {
  FrameTensor r = t;
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = r[k] * p;
  return r;
}

}  // namespace

Current tensor_current_T(const FrameTensor& F, const KillingSpinor& xi) {
  FrameTensor X = ckv_tensor(xi);
  FrameTensor Fu = ft_raise_all(F);
  // F^{mu s} F_{n s} xi^n
  FrameTensor a = ft_contract(Fu, F, {{1, 1}});  // (mu^, n)
  FrameTensor t1 = ft_contract(a, X, {{1, 0}});
  Poly FF = ft_contract(Fu, F, {{0, 0}, {1, 1}})[0];
  FrameTensor t2 = scalar_times(X, FF).scaled(Scalar(Rational(-1, 4)));
  return vector_current(t1 + t2);
}

Current tensor_current_Z(const FrameTensor& F, const KillingSpinor& xi) {
  FrameTensor X = ckv_tensor(xi);
  FrameTensor Fd = dual_two_form(F);
  FrameTensor LF = lie_two_form(xi, F), LFd = lie_two_form(xi, Fd);
  // *F^{mu s} (L F_{n s}) xi^n - F^{mu s} (L *F_{n s}) xi^n
  FrameTensor a = ft_contract(ft_raise_all(Fd), LF, {{1, 1}});
  FrameTensor b = ft_contract(ft_raise_all(F), LFd, {{1, 1}});
  return vector_current(ft_contract(a - b, X, {{1, 0}}));
}

Current tensor_current_V(const FrameTensor& F, const KillingSpinor& xi, const FrameTensor& Y4) {
  FrameTensor G = lie_two_form(xi, F);
  FrameTensor DG = ft_derivative(G);                       // (a, b, n)
  FrameTensor Yu = ft_raise_all(Y4);                        // (n^, s^, a^, b^)
  FrameTensor dY = ft_derivative(Y4);                       // (n, s, a, b, m)
  FrameTensor Fmixed = ft_raise(F, 0);                      // F^{mu}_s
  // F_{ns} (D^mu G_{ab}) Y^{nsab}
  FrameTensor FY = ft_contract(F, Yu, {{0, 0}, {1, 1}});   // (a^, b^)
  FrameTensor t1 = ft_contract(ft_raise(DG, 2), FY, {{0, 0}, {1, 1}});  // (mu^)
  // 4 F^{[mu}_s (D_n G_{ab}) Y^{n]sab}
  FrameTensor DGY = ft_contract(DG, Yu, {{2, 0}, {0, 2}, {1, 3}});  // (s^)
  FrameTensor A1 = ft_contract(Fmixed, DGY, {{1, 0}});              // (mu^)
  FrameTensor GY = ft_contract(DG, Yu, {{0, 2}, {1, 3}});           // (n, n'^, s^): D_n G_ab Y^{n' s ab}
  FrameTensor A2 = ft_contract(Fmixed, GY, {{0, 0}, {1, 2}});       // F^n_s D_n G Y^{mu s ab} -> (mu^)
  FrameTensor t2 = (A1 - A2).scaled(Scalar(2));
  // 3/5 F_{ns} G_{ab} d^mu Y^{nsab}
  FrameTensor FG = ft_outer(F, G);                                                 // (n, s, a, b)
  FrameTensor dYu = ft_raise(ft_raise(ft_raise(ft_raise(dY, 0), 1), 2), 3);        // (n^, s^, a^, b^, m)
  FrameTensor t3 = ft_raise(ft_contract(FG, dYu, {{0, 0}, {1, 1}, {2, 2}, {3, 3}}), 0).scaled(Scalar(Rational(3, 5)));
  // 12/5 F^{[mu}_s G_{ab} d_n Y^{n]sab}
  FrameTensor divY = ft_trace(dYu, 0, 4);                                                   // (s^, a^, b^)
  FrameTensor B1 = ft_contract(Fmixed, ft_contract(G, divY, {{0, 1}, {1, 2}}), {{1, 0}});    // (mu^)
  FrameTensor GdY = ft_contract(G, dYu, {{0, 2}, {1, 3}});                                  // (mu^, s^, n)
  FrameTensor B2 = ft_contract(Fmixed, GdY, {{0, 2}, {1, 1}});                               // F^n_s ... -> (mu^)
  FrameTensor t4 = (B1 - B2).scaled(Scalar(Rational(6, 5)));
  return vector_current(t1 + t2 + t3 + t4);
}

Current tensor_current_Vmin(const FrameTensor& F, const KillingSpinor& xi, const FrameTensor& Y4) {
  FrameTensor G = lie_two_form(xi, F);
  FrameTensor DF = ft_derivative(F);                      // (n, s, t)
  FrameTensor Yu = ft_raise_all(Y4);                      // (n^, s^, a^, b^)
  FrameTensor dY = ft_derivative(Y4);                     // (n, s, a, b, t)
  FrameTensor dYu = ft_raise(ft_raise(ft_raise(ft_raise(dY, 0), 1), 2), 3);  // (n^, s^, a^, b^, t)
  FrameTensor gu = ft_metric(true);
  // -F_{ns,}^{mu} G_{ab} Y^{nsab}
  FrameTensor GY = ft_contract(G, Yu, {{0, 2}, {1, 3}});  // (n^, s^)
  FrameTensor t1 = ft_raise(ft_contract(DF, GY, {{0, 0}, {1, 1}}), 0).scaled(Scalar(-1));
  // Z^{ns a mu tau b} := Y^{nsa[mu} g^{tau]b}: built as (n^, s^, a^, mu^, tau^, b^)
  FrameTensor Yg = ft_antisymmetrize(ft_outer(Yu, gu), {3, 4});  // (n, s, a, mu, tau, b)
  // +4 F_{ns,t} G_{ab} Y^{nsa[mu} g^{t]b}; with -4 here and below the current is not conserved
  FrameTensor FG = ft_outer(DF, G);                            // (n, s, t, a, b)
  FrameTensor t2 = ft_contract(FG, Yg, {{0, 0}, {1, 1}, {3, 2}, {2, 4}, {4, 5}}).scaled(Scalar(4));
  // +4 F_{ns} G_{ab} d_t (Y^{nsa[mu} g^{t]b})
  // outer with g^{x b}: (n, s, a, m, t, x, b); antisymmetrize m and x, then trace t with x
  FrameTensor dYg;
  {
    FrameTensor o = ft_antisymmetrize(ft_outer(dYu, gu), {3, 5});
    FrameTensor tr = ft_trace(o, 4, 5);                            // (n^, s^, a^, m^, b^)
    dYg = ft_contract(ft_outer(F, G), tr, {{0, 0}, {1, 1}, {2, 2}, {3, 4}});  // (m^)
  }
  FrameTensor t3 = dYg.scaled(Scalar(4));
  // 3/5 F_{ns} G_{ab} d^mu Y^{nsab}
  FrameTensor FG0 = ft_outer(F, G);
  FrameTensor t4 = ft_raise(ft_contract(FG0, dYu, {{0, 0}, {1, 1}, {2, 2}, {3, 3}}), 0).scaled(Scalar(Rational(3, 5)));
  // -8/5 F^{[mu}_s G_{ab} d_n Y^{n]sab}
  FrameTensor Fmixed = ft_raise(F, 0);
  FrameTensor divY = ft_trace(dYu, 0, 4);                                                     // (s^, a^, b^)
  FrameTensor B1 = ft_contract(Fmixed, ft_contract(G, divY, {{0, 1}, {1, 2}}), {{1, 0}});      // (mu^)
  FrameTensor GdY = ft_contract(G, dYu, {{0, 2}, {1, 3}});                                  // (mu^, s^, n)
  FrameTensor B2 = ft_contract(Fmixed, GdY, {{0, 2}, {1, 1}});
  FrameTensor t5 = (B1 - B2).scaled(Scalar(Rational(-4, 5)));
  return vector_current(t1 + t2 + t3 + t4 + t5);
}

Current tensor_current_W(const FrameTensor& F, const FrameTensor& W, const FrameTensor& Wt) {
  FrameTensor Fu = ft_raise_all(F), Fdu = ft_raise_all(dual_two_form(F));
  FrameTensor a = ft_contract(Fu, W, {{1, 0}});
  FrameTensor b = ft_contract(Fdu, Wt, {{1, 0}});
  return vector_current(a + b);
}

std::pair<FrameTensor, FrameTensor> w_one_forms(const SpinorField& omega) {
  // omega = W + i Wt with W, Wt real one-forms; the conjugate one-form has (conj w)_f = conj(w_{fbar}).
  FrameTensor W({false}), Wt({false});
  for (int f = 0; f < 4; ++f) {
    auto [u, p] = frame_pair(kLeg[f]);
    auto [cu, cp] = frame_pair(kLeg[conj_leg(f)]);
    Poly w = omega[static_cast<std::size_t>(2 * u + p)];
    Poly wc = omega[static_cast<std::size_t>(2 * cu + cp)].conj();
    W.at({f}) = (w + wc).scaled(Scalar(Rational(1, 2)));
    Wt.at({f}) = (w - wc).scaled(Scalar(Rational(0), Rational(-1, 2)));
  }
  return {W, Wt};
}

Current current_extended(TensorKind kind, const KillingSpinor& xi, int n, const KillingSpinor* Y,
                         const FrameTensor* W, const FrameTensor* Wt) {
  if (n < 0) throw std::invalid_argument("negative extension order");
  FrameTensor Fn = field_extension(xi, n);
  switch (kind) {
    case TensorKind::T:
      return tensor_current_T(Fn, xi);
    case TensorKind::Z:
      return tensor_current_Z(Fn, xi);
    case TensorKind::V: {
      if (Y == nullptr) throw std::invalid_argument("chiral current needs a CKY");
      FrameTensor Yt = cky_tensor(*Y);
      return tensor_current_Vmin(Fn, xi, ky4_build(Yt, Yt));
    }
    case TensorKind::W:
      if (W == nullptr || Wt == nullptr) throw std::invalid_argument("W current needs one-forms");
      return tensor_current_W(Fn, *W, *Wt);
  }
  throw std::invalid_argument("unknown tensor kind");
}

Current current_extended_V_full(const KillingSpinor& xi, const KillingSpinor& Y, int n) {
  FrameTensor Yt = cky_tensor(Y);
  return tensor_current_V(field_extension(xi, n), xi, ky4_build(Yt, Yt));
}

// ---------------------------------------------------------------------------
// Conserved tensors

namespace {

FrameTensor tensor_T(const FrameTensor& F) {
  FrameTensor Fu = ft_raise(F, 0);                       // F^mu_s
  FrameTensor a = ft_contract(ft_raise(Fu, 1), F, {{1, 1}});  // F^{mu s} F_{n s}: (mu^, n)
  Poly FF = ft_contract(ft_raise_all(F), F, {{0, 0}, {1, 1}})[0];
  FrameTensor d = ft_delta();
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = d[k] * FF;
  return a - d.scaled(Scalar(Rational(1, 4)));
}

FrameTensor tensor_Z(const FrameTensor& F) {
  FrameTensor Fd = dual_two_form(F);
  // F^{mu s} *F_{s(n, r)} - *F^{mu s} F_{s(n, r)}
  FrameTensor a = ft_contract(ft_raise_all(F), ft_derivative(Fd), {{1, 0}});   // (mu^, n, r)
  FrameTensor b = ft_contract(ft_raise_all(Fd), ft_derivative(F), {{1, 0}});
  return ft_symmetrize(a - b, {1, 2});
}

FrameTensor tensor_V(const FrameTensor& F) {
  FrameTensor DF = ft_derivative(F);             // F_{ab,c}
  FrameTensor g = ft_metric(false);
  const Scalar half(Rational(1, 2));
  // Entries computed directly. Index helpers: raised derivative or field index via the null metric.
  auto dF = [&](int a, int b, int c) -> const Poly& { return DF.at({a, b, c}); };
  auto dFup = [&](int a, int b, int c, Poly& out) {  // F_{ab,}^{c}
    out = dF(a, b, partner(c)).scaled(Scalar(metric_sign(c)));
  };
  auto gl = [&](int a, int b) { return g.at({a, b}).constant_term(); };
  // Pre-contracted pieces: P^{mu}_{tau b | n}{}_{(gamma)} etc. are formed on the fly.
  // S1[mu][n] = F_{gl,}^{mu} F^{gl}_{,n}
  FrameTensor S1({true, false});
  FrameTensor DFu_first = ft_raise(ft_raise(DF, 0), 1);  // F^{gl}_{,c}
  for (int m = 0; m < 4; ++m) {
    for (int n = 0; n < 4; ++n) {
      Poly s;
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
          Poly up;
          dFup(a, b, m, up);
          s += up * DFu_first.at({a, b, n});
        }
      }
      S1.at({m, n}) = s;
    }
  }
  Poly S1tr;
  for (int m = 0; m < 4; ++m) S1tr += S1.at({m, m});
  // C[t][b][m][n] = F_{t g,}^{m} F^{g}_{b,n}
  FrameTensor Fgb = ft_raise(DF, 0);  // F^{g}_{b,n}
  std::vector<Poly> C(256);
  auto cidx = [](int t, int b, int m, int n) { return static_cast<std::size_t>(((t * 4 + b) * 4 + m) * 4 + n); };
  for (int t = 0; t < 4; ++t) {
    for (int b = 0; b < 4; ++b) {
      for (int m = 0; m < 4; ++m) {
        for (int n = 0; n < 4; ++n) {
          Poly s;
          for (int gm = 0; gm < 4; ++gm) {
            Poly up;
            dFup(t, gm, m, up);
            if (up.is_zero()) continue;
            s += up * Fgb.at({gm, b, n});
          }
          C[cidx(t, b, m, n)] = s;
        }
      }
    }
  }
  // Trace forms with the derivative indices contracted: Ctr[t][b] = F_{tg,}^{l} F^{g}_{b,l}
  std::vector<Poly> Ctr(16);
  for (int t = 0; t < 4; ++t) {
    for (int b = 0; b < 4; ++b) {
      Poly s;
      for (int l = 0; l < 4; ++l) s += C[cidx(t, b, l, l)];
      Ctr[static_cast<std::size_t>(t * 4 + b)] = s;
    }
  }
  // Base pieces before antisymmetrization. X(a,b,s,t; m,n) = F_{ab,}^m F_{st,n}
  auto X = [&](int a, int b, int s, int t, int m, int n) {
    Poly up;
    dFup(a, b, m, up);
    if (up.is_zero()) return Poly();
    return up * dF(s, t, n);
  };
  auto Xtr = [&](int a, int b, int s, int t) {  // F_{ab,}^{g} F_{st,g}
    Poly s0;
    for (int l = 0; l < 4; ++l) s0 += X(a, b, s, t, l, l);
    return s0;
  };
  // Antisymmetrized pieces:
  // A(a,s,t,b) := F_{[a|[s,}^m F_{t]|b],n}; antisym over (a,b) and (s,t).
  auto anti2 = [&](const std::function<Poly(int, int, int, int)>& f, int a, int s, int t, int b) {
    Poly r = f(a, s, t, b) - f(a, t, s, b) - f(b, s, t, a) + f(b, t, s, a);
    return r.scaled(Scalar(Rational(1, 4)));
  };
  FrameTensor V({true, false, false, false, false, false});
  for (std::size_t flat = 0; flat < V.size(); ++flat) {
    int m = V.value(flat, 0), n = V.value(flat, 1), a = V.value(flat, 2), b = V.value(flat, 3),
        s = V.value(flat, 4), t = V.value(flat, 5);
    Poly v;
    v += X(a, b, s, t, m, n) + X(s, t, a, b, m, n);
    v -= anti2([&](int A, int S, int T, int B) { return X(A, S, T, B, m, n); }, a, s, t, b).scaled(Scalar(2));
    // 3 g_{[a|[s} F_{t]g,}^m F^g_{|b],n}
    v += anti2([&](int A, int S, int T, int B) { return C[cidx(T, B, m, n)].scaled(gl(A, S)); }, a, s, t, b)
             .scaled(Scalar(3));
    // 3 g_{[s|[a} F_{b]g,}^m F^g_{|t],n}: antisym over (s,t) outer and (a,b) inner
    v += anti2([&](int S, int A, int B, int T) { return C[cidx(B, T, m, n)].scaled(gl(S, A)); }, s, a, b, t)
             .scaled(Scalar(3));
    // g_{a[s} g_{t]b} F_{gl,}^m F^{gl}_{,n}
    Scalar gg = (gl(a, s) * gl(t, b) - gl(a, t) * gl(s, b)) * half;
    if (!gg.is_zero()) v += S1.at({m, n}).scaled(gg);
    if (m == n) {
      Poly w = Xtr(a, b, s, t);
      w -= anti2([&](int A, int S, int T, int B) { return Xtr(A, S, T, B); }, a, s, t, b);
      w += anti2([&](int A, int S, int T, int B) { return Ctr[static_cast<std::size_t>(T * 4 + B)].scaled(gl(A, S)); },
                 a, s, t, b)
               .scaled(Scalar(3));
      if (!gg.is_zero()) w += S1tr.scaled(gg * half);
      v -= w;
    }
    V[flat] = v;
  }
  return V;
}

bool all_zero(const FrameTensor& t) { return t.is_zero(); }

FrameTensor restricted(const FrameTensor& t) { return ft_map(t, [](const Poly& p) { return restrict_onshell(p); }); }

bool onshell_zero(const FrameTensor& t) { return all_zero(restricted(t)); }

// Divergence over slot 0 (upper): D_mu T^{mu ...}.
FrameTensor divergence_slot0(const FrameTensor& T) { return ft_trace(ft_derivative(T), 0, static_cast<int>(T.rank())); }

}  // namespace

ConservedTensor conserved_tensor(TensorKind kind, int n, const KillingSpinor* xi) {
  if (n < 0 || n > 2) throw std::invalid_argument("conserved tensors are built for 0 <= n <= 2");
  const KillingSpinor& x = xi != nullptr ? *xi : ckv("xi14");
  FrameTensor Fn = field_extension(x, n);
  ConservedTensor out;
  out.kind = kind;
  out.n = n;
  switch (kind) {
    case TensorKind::T: out.t = tensor_T(Fn); break;
    case TensorKind::Z: out.t = tensor_Z(Fn); break;
    case TensorKind::V: out.t = tensor_V(Fn); break;
    case TensorKind::W: throw std::invalid_argument("no conserved tensor for W");
  }
  return out;
}

std::vector<PropertyCheck> tensor_properties(const ConservedTensor& ct) {
  std::vector<PropertyCheck> out;
  const FrameTensor& t = ct.t;
  FrameTensor up = ft_raise_all(t);
  auto dual = [](const FrameTensor& x) { return ft_map(x, [](const Poly& p) { return duality_transform(p); }); };
  switch (ct.kind) {
    case TensorKind::T: {
      out.push_back({"divergence-free", onshell_zero(divergence_slot0(up))});
      out.push_back({"symmetric", up == ft_symmetrize(up, {0, 1})});
      out.push_back({"trace-free", all_zero(ft_trace(t, 0, 1))});
      out.push_back({"duality-even", onshell_zero(dual(t) - t)});
      break;
    }
    case TensorKind::Z: {
      out.push_back({"divergence-free", onshell_zero(divergence_slot0(up))});
      out.push_back({"symmetric in nu rho", up == ft_symmetrize(up, {1, 2})});
      out.push_back({"totally symmetric", onshell_zero(up - ft_symmetrize(up, {0, 1, 2}))});
      out.push_back({"trace-free", onshell_zero(ft_trace(ft_lower(up, 2), 1, 2))});
      out.push_back({"duality-even", onshell_zero(dual(t) - t)});
      break;
    }
    case TensorKind::V: {
      // slots (mu, nu, alpha, beta, sigma, tau)
      out.push_back({"divergence-free", onshell_zero(divergence_slot0(up))});
      out.push_back({"symmetric in mu nu", onshell_zero(up - ft_symmetrize(up, {0, 1}))});
      out.push_back({"skew in alpha beta", onshell_zero(up - ft_antisymmetrize(up, {2, 3}))});
      out.push_back({"skew in sigma tau", onshell_zero(up - ft_antisymmetrize(up, {4, 5}))});
      out.push_back({"pair exchange", onshell_zero(up - ft_permute(up, {0, 1, 4, 5, 2, 3}))});
      out.push_back({"cyclic", onshell_zero(ft_antisymmetrize(up, {2, 3, 4, 5}))});
      out.push_back({"trace beta tau", onshell_zero(ft_trace(ft_lower(up, 5), 3, 5))});
      {
        // V^{t [n a b] s}_t
        FrameTensor tr = ft_trace(ft_lower(up, 5), 0, 5);  // (n, a, b, s)
        out.push_back({"trace mu tau skew", onshell_zero(ft_antisymmetrize(tr, {0, 1, 2}))});
      }
      {
        // V^{t (n s)}_{t a b} = -1/2 V^{t r (n}_{t r [a} delta_{b]}^{s)}
        FrameTensor low = ft_lower(ft_lower(ft_lower(up, 3), 4), 5);  // (t^, n^, s^, t, a, b)
        FrameTensor lhs = ft_symmetrize(ft_trace(low, 0, 3), {0, 1});   // (n^, s^, a, b)
        FrameTensor dbl = ft_trace(ft_trace(low, 0, 3), 0, 2);         // V^{t r n}_{t r a}: (n^, a)
        FrameTensor rhs = ft_outer(dbl, ft_delta());                    // (n^, a, s^, b)
        rhs = ft_permute(rhs, {0, 2, 1, 3});                            // (n^, s^, a, b)
        rhs = ft_symmetrize(ft_antisymmetrize(rhs, {2, 3}), {0, 1}).scaled(Scalar(Rational(-1, 2)));
        out.push_back({"double trace", onshell_zero(lhs - rhs)});
      }
      out.push_back({"duality-odd", onshell_zero(dual(t) + t)});
      break;
    }
    case TensorKind::W:
      break;
  }
  return out;
}

const char* tensor_kind_name(TensorKind k) {
  switch (k) {
    case TensorKind::T: return "T";
    case TensorKind::Z: return "Z";
    case TensorKind::V: return "V";
    case TensorKind::W: return "W";
  }
  return "?";
}

TensorKind parse_tensor_kind(const std::string& s) {
  if (s == "T") return TensorKind::T;
  if (s == "Z") return TensorKind::Z;
  if (s == "V") return TensorKind::V;
  if (s == "W") return TensorKind::W;
  throw std::invalid_argument("unknown tensor kind: " + s);
}

}  // namespace maxcons
