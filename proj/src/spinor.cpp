#include "maxcons/spinor.hpp"

#include <map>
#include <stdexcept>

namespace maxcons {
namespace {

Idx flip_position(Idx s) {
  switch (s) {
    case Idx::UpU: return Idx::LoU;
    case Idx::LoU: return Idx::UpU;
    case Idx::UpP: return Idx::LoP;
    case Idx::LoP: return Idx::UpP;
  }
  return s;
}

Idx swap_kind(Idx s) {
  switch (s) {
    case Idx::UpU: return Idx::UpP;
    case Idx::LoU: return Idx::LoP;
    case Idx::UpP: return Idx::UpU;
    case Idx::LoP: return Idx::LoU;
  }
  return s;
}

}  // namespace

Spinor::Spinor(std::vector<Idx> slots) : slots_(std::move(slots)), data_(std::size_t{1} << slots_.size()) {}

Spinor Spinor::scalar(Poly v) {
  Spinor s;
  s.data_[0] = std::move(v);
  return s;
}

Spinor Spinor::epsilon(Idx kind) {
  Spinor e({kind, kind});
  e.at({0, 1}) = Poly(1);
  e.at({1, 0}) = Poly(-1);
  return e;
}

std::size_t Spinor::flat(const std::vector<int>& values) const {
  if (values.size() != rank()) throw std::invalid_argument("spinor index count mismatch");
  std::size_t f = 0;
  for (int v : values) f = (f << 1) | static_cast<std::size_t>(v);
  return f;
}

Poly& Spinor::at(std::initializer_list<int> values) { return data_[flat(std::vector<int>(values))]; }
const Poly& Spinor::at(std::initializer_list<int> values) const { return data_[flat(std::vector<int>(values))]; }
Poly& Spinor::at(const std::vector<int>& values) { return data_[flat(values)]; }
const Poly& Spinor::at(const std::vector<int>& values) const { return data_[flat(values)]; }

bool Spinor::is_zero() const {
  for (const auto& p : data_) {
    if (!p.is_zero()) return false;
  }
  return true;
}

Spinor& Spinor::operator+=(const Spinor& o) {
  if (o.slots_ != slots_) throw std::invalid_argument("adding spinors with different index structure");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

Spinor& Spinor::operator-=(const Spinor& o) {
  if (o.slots_ != slots_) throw std::invalid_argument("subtracting spinors with different index structure");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

Spinor Spinor::scaled(const Scalar& s) const {
  Spinor r = *this;
  for (auto& p : r.data_) p = p.scaled(s);
  return r;
}

Spinor Spinor::times(const Poly& q) const {
  Spinor r = *this;
  for (auto& p : r.data_) p = p * q;
  return r;
}

Spinor contract(const Spinor& a, const Spinor& b, const std::vector<std::pair<int, int>>& pairs) {
  std::vector<bool> a_used(a.rank()), b_used(b.rank());
  for (auto [i, j] : pairs) {
    Idx x = a.slot(static_cast<std::size_t>(i)), y = b.slot(static_cast<std::size_t>(j));
    if (is_primed(x) != is_primed(y) || is_upper(x) == is_upper(y)) {
      throw std::invalid_argument("contraction needs one upper and one lower index of the same kind");
    }
    a_used[static_cast<std::size_t>(i)] = true;
    b_used[static_cast<std::size_t>(j)] = true;
  }
  std::vector<int> a_free, b_free;
  std::vector<Idx> slots;
  for (std::size_t k = 0; k < a.rank(); ++k) {
    if (!a_used[k]) {
      a_free.push_back(static_cast<int>(k));
      slots.push_back(a.slot(k));
    }
  }
  for (std::size_t k = 0; k < b.rank(); ++k) {
    if (!b_used[k]) {
      b_free.push_back(static_cast<int>(k));
      slots.push_back(b.slot(k));
    }
  }
  Spinor r(slots);
  const std::size_t nr = r.rank();
  const std::size_t np = pairs.size();
  std::vector<int> av(a.rank()), bv(b.rank());
  for (std::size_t f = 0; f < r.size(); ++f) {
    for (std::size_t k = 0; k < a_free.size(); ++k) av[static_cast<std::size_t>(a_free[k])] = r.value(f, k);
    for (std::size_t k = 0; k < b_free.size(); ++k) {
      bv[static_cast<std::size_t>(b_free[k])] = r.value(f, a_free.size() + k);
    }
    std::vector<Term> acc;
    Poly sum;
    for (std::size_t s = 0; s < (std::size_t{1} << np); ++s) {
      for (std::size_t k = 0; k < np; ++k) {
        int v = static_cast<int>((s >> k) & 1u);
        av[static_cast<std::size_t>(pairs[k].first)] = v;
        bv[static_cast<std::size_t>(pairs[k].second)] = v;
      }
      const Poly& x = a.at(av);
      if (x.is_zero()) continue;
      const Poly& y = b.at(bv);
      if (y.is_zero()) continue;
      sum += x * y;
    }
    r[f] = std::move(sum);
  }
  (void)nr;
  return r;
}

Spinor outer(const Spinor& a, const Spinor& b) { return contract(a, b, {}); }

Spinor trace(const Spinor& a, int i, int j) {
  Idx x = a.slot(static_cast<std::size_t>(i)), y = a.slot(static_cast<std::size_t>(j));
  if (is_primed(x) != is_primed(y) || is_upper(x) == is_upper(y)) {
    throw std::invalid_argument("trace needs one upper and one lower index of the same kind");
  }
  std::vector<int> keep;
  std::vector<Idx> slots;
  for (std::size_t k = 0; k < a.rank(); ++k) {
    if (static_cast<int>(k) != i && static_cast<int>(k) != j) {
      keep.push_back(static_cast<int>(k));
      slots.push_back(a.slot(k));
    }
  }
  Spinor r(slots);
  std::vector<int> v(a.rank());
  for (std::size_t f = 0; f < r.size(); ++f) {
    for (std::size_t k = 0; k < keep.size(); ++k) v[static_cast<std::size_t>(keep[k])] = r.value(f, k);
    Poly sum;
    for (int c = 0; c < 2; ++c) {
      v[static_cast<std::size_t>(i)] = c;
      v[static_cast<std::size_t>(j)] = c;
      sum += a.at(v);
    }
    r[f] = std::move(sum);
  }
  return r;
}

namespace {

Spinor move_index(const Spinor& a, int i, bool up) {
  Idx s = a.slot(static_cast<std::size_t>(i));
  if (is_upper(s) == up) throw std::invalid_argument(up ? "index already upper" : "index already lower");
  std::vector<Idx> slots = a.slots();
  slots[static_cast<std::size_t>(i)] = flip_position(s);
  Spinor r(slots);
  const std::size_t bit = std::size_t{1} << (a.rank() - 1 - static_cast<std::size_t>(i));
  for (std::size_t f = 0; f < r.size(); ++f) {
    bool one = (f & bit) != 0;
    std::size_t src = f ^ bit;
    // raise: psi^0 = psi_1, psi^1 = -psi_0;  lower: psi_0 = -psi^1, psi_1 = psi^0
    bool negate = up ? one : !one;
    r[f] = negate ? -a[src] : a[src];
  }
  return r;
}

}  // namespace

Spinor raise(const Spinor& a, int i) { return move_index(a, i, true); }
Spinor lower(const Spinor& a, int i) { return move_index(a, i, false); }

Spinor raise_all(Spinor a) {
  for (std::size_t k = 0; k < a.rank(); ++k) {
    if (!is_upper(a.slot(k))) a = raise(a, static_cast<int>(k));
  }
  return a;
}

Spinor lower_all(Spinor a) {
  for (std::size_t k = 0; k < a.rank(); ++k) {
    if (is_upper(a.slot(k))) a = lower(a, static_cast<int>(k));
  }
  return a;
}

Spinor permute(const Spinor& a, const std::vector<int>& order) {
  if (order.size() != a.rank()) throw std::invalid_argument("permutation size mismatch");
  std::vector<Idx> slots;
  for (int o : order) slots.push_back(a.slot(static_cast<std::size_t>(o)));
  Spinor r(slots);
  std::vector<int> v(a.rank());
  for (std::size_t f = 0; f < r.size(); ++f) {
    for (std::size_t k = 0; k < order.size(); ++k) v[static_cast<std::size_t>(order[k])] = r.value(f, k);
    r[f] = a.at(v);
  }
  return r;
}

Spinor symmetrize(const Spinor& a, const std::vector<int>& slots) {
  for (int s : slots) {
    if (a.slot(static_cast<std::size_t>(s)) != a.slot(static_cast<std::size_t>(slots[0]))) {
      throw std::invalid_argument("symmetrizing indices of different kinds");
    }
  }
  std::size_t mask = 0;
  for (int s : slots) mask |= std::size_t{1} << (a.rank() - 1 - static_cast<std::size_t>(s));
  std::map<std::pair<std::size_t, int>, std::pair<Poly, int>> groups;
  for (std::size_t f = 0; f < a.size(); ++f) {
    int ones = __builtin_popcountll(f & mask);
    auto& g = groups[{f & ~mask, ones}];
    g.first += a[f];
    g.second += 1;
  }
  Spinor r(a.slots());
  for (std::size_t f = 0; f < a.size(); ++f) {
    int ones = __builtin_popcountll(f & mask);
    const auto& g = groups[{f & ~mask, ones}];
    r[f] = g.first.scaled(Scalar(Rational(1, g.second)));
  }
  return r;
}

Spinor antisymmetrize(const Spinor& a, int i, int j) {
  std::vector<int> order(a.rank());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = static_cast<int>(k);
  std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  Spinor s = permute(a, order);
  return (a - s).scaled(Scalar(Rational(1, 2)));
}

Spinor derivative(const Spinor& a, const Deriv& d) {
  std::vector<Idx> slots = a.slots();
  slots.push_back(Idx::LoU);
  slots.push_back(Idx::LoP);
  Spinor r(slots);
  for (std::size_t f = 0; f < a.size(); ++f) {
    if (a[f].is_zero()) continue;
    for (int C = 0; C < 2; ++C) {
      for (int Cp = 0; Cp < 2; ++Cp) r[f * 4 + static_cast<std::size_t>(C * 2 + Cp)] = d(a[f], C, Cp);
    }
  }
  return r;
}

Spinor conj(const Spinor& a) {
  std::vector<Idx> slots;
  for (auto s : a.slots()) slots.push_back(swap_kind(s));
  Spinor r(slots);
  for (std::size_t f = 0; f < a.size(); ++f) r[f] = a[f].conj();
  return r;
}

Spinor map_entries(const Spinor& a, const std::function<Poly(const Poly&)>& f) {
  Spinor r(a.slots());
  for (std::size_t k = 0; k < a.size(); ++k) r[k] = f(a[k]);
  return r;
}

}  // namespace maxcons
