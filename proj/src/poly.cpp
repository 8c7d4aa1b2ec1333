#include "maxcons/poly.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace maxcons {
namespace {

constexpr std::uint64_t kCoordTag = 0;
constexpr std::uint64_t kJetTag = 1ull << 46;
constexpr std::uint64_t kTensorTag = 2ull << 46;

std::uint64_t pack(std::uint64_t key, unsigned exp) { return (key << 16) | exp; }

int parse_int(std::string_view s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw std::invalid_argument("bad integer: " + std::string(s));
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

}  // namespace

const char* frame_name(Frame f) {
  switch (f) {
    case Frame::L: return "L";
    case Frame::N: return "N";
    case Frame::M: return "M";
    case Frame::MBAR: return "MBAR";
  }
  return "?";
}

Frame parse_frame(std::string_view s) {
  if (s == "L") return Frame::L;
  if (s == "N") return Frame::N;
  if (s == "M") return Frame::M;
  if (s == "MBAR") return Frame::MBAR;
  throw std::invalid_argument("unknown frame leg: " + std::string(s));
}

std::pair<Frame, Frame> skew_pair(int index) {
  static constexpr std::pair<Frame, Frame> table[kSkewPairs] = {
      {Frame::L, Frame::N}, {Frame::L, Frame::M},    {Frame::L, Frame::MBAR},
      {Frame::N, Frame::M}, {Frame::N, Frame::MBAR}, {Frame::M, Frame::MBAR}};
  return table[index];
}

int skew_index(Frame a, Frame b) {
  for (int k = 0; k < kSkewPairs; ++k) {
    auto [x, y] = skew_pair(k);
    if (x == a && y == b) return k;
  }
  throw std::invalid_argument("skew_index needs a < b");
}

Variable Variable::coord(int A, int Ap) {
  return Variable(kCoordTag | static_cast<std::uint64_t>(A << 1 | Ap));
}

Variable Variable::jet(int p, int a, int b, bool barred) {
  int nu = barred ? p : p + 2;
  int np = barred ? p + 2 : p;
  if (p < 0 || a < 0 || b < 0 || a > nu || b > np) throw std::invalid_argument("jet index out of range");
  return Variable(kJetTag | static_cast<std::uint64_t>(p) << 30 | static_cast<std::uint64_t>(a) << 20 |
                  static_cast<std::uint64_t>(b) << 10 | (barred ? 1u : 0u));
}

Variable Variable::tensor(int skew, std::array<int, 4> deriv_counts) {
  int total = deriv_counts[0] + deriv_counts[1] + deriv_counts[2] + deriv_counts[3];
  if (skew < 0 || skew >= kSkewPairs || total > kMaxTensorOrder) throw std::invalid_argument("tensor jet out of range");
  std::uint64_t seq = 0;
  int pos = 0;
  for (int f = 0; f < 4; ++f) {
    for (int k = 0; k < deriv_counts[static_cast<std::size_t>(f)]; ++k) {
      seq |= static_cast<std::uint64_t>(f + 1) << (3 * (kMaxTensorOrder - 1 - pos));
      ++pos;
    }
  }
  return Variable(kTensorTag | static_cast<std::uint64_t>(skew) << 40 | seq);
}

int Variable::order() const {
  switch (kind()) {
    case Kind::Coord: return 0;
    case Kind::OnShellJet: return static_cast<int>((key_ >> 30) & 0xffff);
    case Kind::TensorJet: {
      auto c = deriv_counts();
      return c[0] + c[1] + c[2] + c[3];
    }
  }
  return 0;
}

std::array<int, 4> Variable::deriv_counts() const {
  std::array<int, 4> c{};
  for (int pos = 0; pos < kMaxTensorOrder; ++pos) {
    auto v = (key_ >> (3 * (kMaxTensorOrder - 1 - pos))) & 7;
    if (v == 0) break;
    ++c[v - 1];
  }
  return c;
}

std::string Variable::str() const {
  switch (kind()) {
    case Kind::Coord:
      return "x" + std::to_string(coord_u()) + std::to_string(coord_p());
    case Kind::OnShellJet:
      return std::string(barred() ? "phib[" : "phi[") + std::to_string(order()) + ";" + std::to_string(jet_a()) + ";" +
             std::to_string(jet_b()) + "]";
    case Kind::TensorJet: {
      auto [a, b] = skew_pair(skew());
      std::string s = std::string("F[") + frame_name(a) + "," + frame_name(b);
      auto c = deriv_counts();
      bool first = true;
      for (int f = 0; f < 4; ++f) {
        for (int k = 0; k < c[static_cast<std::size_t>(f)]; ++k) {
          s += first ? "|" : ",";
          s += frame_name(static_cast<Frame>(f));
          first = false;
        }
      }
      return s + "]";
    }
  }
  return "?";
}

Variable Variable::parse(std::string_view t) {
  if (t.size() == 3 && t[0] == 'x') {
    int A = t[1] - '0', Ap = t[2] - '0';
    if ((A == 0 || A == 1) && (Ap == 0 || Ap == 1)) return coord(A, Ap);
  }
  auto inner = [&](std::size_t open) {
    if (t.back() != ']') throw std::invalid_argument("bad variable: " + std::string(t));
    return t.substr(open + 1, t.size() - open - 2);
  };
  if (t.starts_with("phi[") || t.starts_with("phib[")) {
    bool barred = t.starts_with("phib[");
    auto parts = split(inner(barred ? 4 : 3), ';');
    if (parts.size() != 3) throw std::invalid_argument("bad jet variable: " + std::string(t));
    return jet(parse_int(parts[0]), parse_int(parts[1]), parse_int(parts[2]), barred);
  }
  if (t.starts_with("F[")) {
    auto body = inner(1);
    auto bar = body.find('|');
    auto pair = split(body.substr(0, bar), ',');
    if (pair.size() != 2) throw std::invalid_argument("bad tensor variable: " + std::string(t));
    std::array<int, 4> counts{};
    if (bar != std::string_view::npos) {
      for (auto d : split(body.substr(bar + 1), ',')) ++counts[static_cast<std::size_t>(parse_frame(d))];
    }
    return tensor(skew_index(parse_frame(pair[0]), parse_frame(pair[1])), counts);
  }
  throw std::invalid_argument("bad variable: " + std::string(t));
}

// ---------------------------------------------------------------------------

Monomial::Monomial(Variable v, unsigned exp) {
  if (exp > 0) {
    e_.push_back(pack(v.key(), exp));
    deg_ = exp;
  }
}

unsigned Monomial::exponent_of(Variable v) const {
  for (auto e : e_) {
    if ((e >> 16) == v.key()) return static_cast<unsigned>(e & 0xffff);
  }
  return 0;
}

unsigned Monomial::coord_degree() const {
  unsigned d = 0;
  for (auto e : e_) {
    if (((e >> 16) >> 46) == 0) d += static_cast<unsigned>(e & 0xffff);
  }
  return d;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  if (a.e_.empty()) return b;
  if (b.e_.empty()) return a;
  Monomial r;
  r.e_.reserve(a.e_.size() + b.e_.size());
  std::size_t i = 0, j = 0;
  while (i < a.e_.size() && j < b.e_.size()) {
    auto ka = a.e_[i] >> 16, kb = b.e_[j] >> 16;
    if (ka < kb) {
      r.e_.push_back(a.e_[i++]);
    } else if (kb < ka) {
      r.e_.push_back(b.e_[j++]);
    } else {
      r.e_.push_back(pack(ka, static_cast<unsigned>((a.e_[i] & 0xffff) + (b.e_[j] & 0xffff))));
      ++i;
      ++j;
    }
  }
  while (i < a.e_.size()) r.e_.push_back(a.e_[i++]);
  while (j < b.e_.size()) r.e_.push_back(b.e_[j++]);
  r.deg_ = a.deg_ + b.deg_;
  return r;
}

Monomial Monomial::drop_one(std::size_t i) const {
  Monomial r = *this;
  if ((r.e_[i] & 0xffff) == 1) {
    r.e_.erase(r.e_.begin() + static_cast<std::ptrdiff_t>(i));
  } else {
    r.e_[i] -= 1;
  }
  r.deg_ -= 1;
  return r;
}

bool operator<(const Monomial& a, const Monomial& b) {
  if (a.deg_ != b.deg_) return a.deg_ < b.deg_;
  return std::lexicographical_compare(a.e_.begin(), a.e_.end(), b.e_.begin(), b.e_.end());
}

std::string Monomial::str() const {
  std::string s;
  for (std::size_t i = 0; i < e_.size(); ++i) {
    if (i) s += '*';
    s += var(i).str();
    if (exp(i) != 1) s += "^" + std::to_string(exp(i));
  }
  return s;
}

std::size_t Monomial::hash() const {
  std::size_t h = 0x9e3779b97f4a7c15ull;
  for (auto e : e_) h = (h ^ e) * 0x100000001b3ull + (h >> 29);
  return h;
}

// ---------------------------------------------------------------------------

Poly::Poly(const Scalar& c) {
  if (!c.is_zero()) t_.push_back({Monomial(), c});
}

Poly::Poly(Monomial m, Scalar c) {
  if (!c.is_zero()) t_.push_back({std::move(m), std::move(c)});
}

Poly Poly::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.m < b.m; });
  Poly p;
  p.t_.reserve(terms.size());
  for (auto& t : terms) {
    if (!p.t_.empty() && p.t_.back().m == t.m) {
      p.t_.back().c += t.c;
    } else {
      if (!p.t_.empty() && p.t_.back().c.is_zero()) p.t_.pop_back();
      p.t_.push_back(std::move(t));
    }
  }
  if (!p.t_.empty() && p.t_.back().c.is_zero()) p.t_.pop_back();
  return p;
}

Scalar Poly::constant_term() const {
  if (!t_.empty() && t_[0].m.is_one()) return t_[0].c;
  return Scalar();
}

unsigned Poly::degree() const { return t_.empty() ? 0 : t_.back().m.degree(); }

unsigned Poly::coord_degree() const {
  unsigned d = 0;
  for (const auto& t : t_) d = std::max(d, t.m.coord_degree());
  return d;
}

int Poly::max_jet_order() const {
  int r = -1;
  for (const auto& t : t_) {
    for (std::size_t i = 0; i < t.m.size(); ++i) {
      Variable v = t.m.var(i);
      if (v.kind() != Variable::Kind::Coord) r = std::max(r, v.order());
    }
  }
  return r;
}

std::vector<Variable> Poly::variables() const {
  std::vector<Variable> vs;
  for (const auto& t : t_) {
    for (std::size_t i = 0; i < t.m.size(); ++i) vs.push_back(t.m.var(i));
  }
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

Poly Poly::conj() const {
  std::vector<Term> out;
  out.reserve(t_.size());
  for (const auto& t : t_) {
    Monomial m;
    for (std::size_t i = 0; i < t.m.size(); ++i) {
      Variable v = t.m.var(i);
      Variable w = v;
      switch (v.kind()) {
        case Variable::Kind::Coord: w = Variable::coord(v.coord_p(), v.coord_u()); break;
        case Variable::Kind::OnShellJet: w = Variable::jet(v.order(), v.jet_b(), v.jet_a(), !v.barred()); break;
        case Variable::Kind::TensorJet: break;  // real field components
      }
      m = m * Monomial(w, t.m.exp(i));
    }
    out.push_back({std::move(m), t.c.conj()});
  }
  return from_terms(std::move(out));
}

Poly Poly::scaled(const Scalar& s) const {
  if (s.is_zero()) return Poly();
  if (s.is_one()) return *this;
  Poly r;
  r.t_.reserve(t_.size());
  for (const auto& t : t_) r.t_.push_back({t.m, t.c * s});
  return r;
}

Poly Poly::partial(Variable v) const {
  std::vector<Term> out;
  for (const auto& t : t_) {
    for (std::size_t i = 0; i < t.m.size(); ++i) {
      if (t.m.var(i) == v) {
        out.push_back({t.m.drop_one(i), t.c * Scalar(static_cast<long long>(t.m.exp(i)))});
        break;
      }
    }
  }
  return from_terms(std::move(out));
}

Scalar Poly::coefficient(const Monomial& m) const {
  auto it = std::lower_bound(t_.begin(), t_.end(), m, [](const Term& t, const Monomial& x) { return t.m < x; });
  if (it != t_.end() && it->m == m) return it->c;
  return Scalar();
}

Poly Poly::substitute(const std::function<Poly(Variable)>& f) const {
  std::map<Variable, Poly> cache;
  auto value = [&](Variable v) -> const Poly& {
    auto it = cache.find(v);
    if (it == cache.end()) it = cache.emplace(v, f(v)).first;
    return it->second;
  };
  // Collect all products and canonicalize once; repeated += would be quadratic in the term count.
  std::vector<Term> out;
  for (const auto& t : t_) {
    Poly term(t.c);
    for (std::size_t i = 0; i < t.m.size(); ++i) {
      const Poly& pv = value(t.m.var(i));
      for (unsigned k = 0; k < t.m.exp(i); ++k) term = term * pv;
    }
    out.insert(out.end(), term.t_.begin(), term.t_.end());
  }
  return from_terms(std::move(out));
}

Poly Poly::map_terms(const std::function<void(const Term&, std::vector<Term>&)>& f) const {
  std::vector<Term> out;
  for (const auto& t : t_) f(t, out);
  return from_terms(std::move(out));
}

Scalar Poly::eval(const std::function<Scalar(Variable)>& value) const {
  std::map<Variable, Scalar> cache;
  Scalar r;
  for (const auto& t : t_) {
    Scalar term = t.c;
    for (std::size_t i = 0; i < t.m.size(); ++i) {
      Variable v = t.m.var(i);
      auto it = cache.find(v);
      if (it == cache.end()) it = cache.emplace(v, value(v)).first;
      for (unsigned k = 0; k < t.m.exp(i); ++k) term *= it->second;
    }
    r += term;
  }
  return r;
}

std::uint64_t Poly::eval_mod(const std::function<std::uint64_t(Variable)>& value, int part, std::uint64_t p) const {
  auto mul = [p](std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
  };
  std::uint64_t r = 0;
  for (const auto& t : t_) {
    const Rational& c = t.c.part(part);
    if (c.is_zero()) continue;
    std::uint64_t term = c.mod(p);
    for (std::size_t i = 0; i < t.m.size(); ++i) {
      std::uint64_t v = value(t.m.var(i));
      for (unsigned k = 0; k < t.m.exp(i); ++k) term = mul(term, v);
    }
    r = (r + term) % p;
  }
  return r;
}

std::string Poly::str() const {
  if (t_.empty()) return "0";
  std::string s;
  for (std::size_t k = 0; k < t_.size(); ++k) {
    if (k) s += " + ";
    s += "(" + t_[k].c.str() + ")";
    if (!t_[k].m.is_one()) s += "*" + t_[k].m.str();
  }
  return s;
}

Poly Poly::parse(std::string_view text) {
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip_ws();
  if (text.substr(pos) == "0") return Poly();
  std::vector<Term> terms;
  while (true) {
    skip_ws();
    if (pos >= text.size() || text[pos] != '(') throw std::invalid_argument("expected '(' in polynomial text");
    auto close = text.find(')', pos);
    if (close == std::string_view::npos) throw std::invalid_argument("unbalanced '(' in polynomial text");
    Scalar c = Scalar::parse(text.substr(pos + 1, close - pos - 1));
    pos = close + 1;
    Monomial m;
    while (pos < text.size() && text[pos] == '*') {
      ++pos;
      std::size_t start = pos;
      int depth = 0;
      while (pos < text.size()) {
        char ch = text[pos];
        if (ch == '[') ++depth;
        if (ch == ']') --depth;
        if (depth == 0 && (ch == '*' || ch == '^' || ch == ' ' || ch == '+')) break;
        ++pos;
      }
      Variable v = Variable::parse(text.substr(start, pos - start));
      unsigned e = 1;
      if (pos < text.size() && text[pos] == '^') {
        ++pos;
        std::size_t es = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        e = static_cast<unsigned>(parse_int(text.substr(es, pos - es)));
      }
      m = m * Monomial(v, e);
    }
    terms.push_back({std::move(m), std::move(c)});
    skip_ws();
    if (pos == text.size()) break;
    if (text[pos] != '+') throw std::invalid_argument("expected '+' between terms");
    ++pos;
  }
  return from_terms(std::move(terms));
}

Poly Poly::operator-() const { return scaled(Scalar(-1)); }

Poly operator+(const Poly& a, const Poly& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  Poly r;
  r.t_.reserve(a.t_.size() + b.t_.size());
  std::size_t i = 0, j = 0;
  while (i < a.t_.size() && j < b.t_.size()) {
    if (a.t_[i].m < b.t_[j].m) {
      r.t_.push_back(a.t_[i++]);
    } else if (b.t_[j].m < a.t_[i].m) {
      r.t_.push_back(b.t_[j++]);
    } else {
      Scalar c = a.t_[i].c + b.t_[j].c;
      if (!c.is_zero()) r.t_.push_back({a.t_[i].m, std::move(c)});
      ++i;
      ++j;
    }
  }
  while (i < a.t_.size()) r.t_.push_back(a.t_[i++]);
  while (j < b.t_.size()) r.t_.push_back(b.t_[j++]);
  return r;
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly& Poly::operator+=(const Poly& o) { return *this = *this + o; }
Poly& Poly::operator-=(const Poly& o) { return *this = *this - o; }

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  if (a.is_constant()) return b.scaled(a.t_[0].c);
  if (b.is_constant()) return a.scaled(b.t_[0].c);
  std::vector<Term> out;
  out.reserve(a.t_.size() * b.t_.size());
  for (const auto& x : a.t_) {
    for (const auto& y : b.t_) out.push_back({x.m * y.m, x.c * y.c});
  }
  return Poly::from_terms(std::move(out));
}

Poly operator*(const Scalar& s, const Poly& p) { return p.scaled(s); }

bool operator==(const Poly& a, const Poly& b) {
  if (a.t_.size() != b.t_.size()) return false;
  for (std::size_t k = 0; k < a.t_.size(); ++k) {
    if (!(a.t_[k].m == b.t_[k].m) || !(a.t_[k].c == b.t_[k].c)) return false;
  }
  return true;
}

}  // namespace maxcons
