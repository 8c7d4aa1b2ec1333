#include "maxcons/scalar.hpp"

#include <cctype>
#include <stdexcept>

namespace maxcons {

Scalar operator+(const Scalar& a, const Scalar& b) {
  return Scalar(a.c_[0] + b.c_[0], a.c_[1] + b.c_[1], a.c_[2] + b.c_[2], a.c_[3] + b.c_[3]);
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  return Scalar(a.c_[0] - b.c_[0], a.c_[1] - b.c_[1], a.c_[2] - b.c_[2], a.c_[3] - b.c_[3]);
}

Scalar operator*(const Scalar& x, const Scalar& y) {
  const auto& [a, b, c, d] = x.c_;
  const auto& [e, f, g, h] = y.c_;
  if (x.is_rational()) return Scalar(a * e, a * f, a * g, a * h);
  if (y.is_rational()) return Scalar(e * a, e * b, e * c, e * d);
  // i^2 = -1, r^2 = 2, (i r)^2 = -2, i*r = ir, i*ir = -r, r*ir = 2i
  Rational two(2);
  Rational p0 = a * e - b * f + two * (c * g) - two * (d * h);
  Rational p1 = a * f + b * e + two * (c * h) + two * (d * g);
  Rational p2 = a * g + c * e - b * h - d * f;
  Rational p3 = a * h + d * e + b * g + c * f;
  return Scalar(std::move(p0), std::move(p1), std::move(p2), std::move(p3));
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero scalar");
  // x = alpha + beta sqrt2 with alpha, beta in Q(i); 1/x = (alpha - beta sqrt2)/(alpha^2 - 2 beta^2)
  Scalar alpha(c_[0], c_[1]);
  Scalar beta(c_[2], c_[3]);
  Scalar n = alpha * alpha - Scalar(2) * beta * beta;  // in Q(i)
  Rational m = n.c_[0] * n.c_[0] + n.c_[1] * n.c_[1];
  Scalar ninv(n.c_[0] / m, -n.c_[1] / m);
  Scalar top(c_[0], c_[1], -c_[2], -c_[3]);
  return top * ninv;
}

std::string Scalar::str() const {
  static const char* suffix[4] = {"", "i", " r2", "i r2"};
  std::string out;
  for (int k = 0; k < 4; ++k) {
    const Rational& r = c_[static_cast<std::size_t>(k)];
    if (r.is_zero()) continue;
    std::string s = r.str();
    if (!out.empty() && s[0] != '-') out += '+';
    out += s;
    out += suffix[k];
  }
  return out.empty() ? "0" : out;
}

Scalar Scalar::parse(std::string_view text) {
  std::array<Rational, 4> parts{};
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip_ws();
  if (pos == text.size()) throw std::invalid_argument("empty scalar");
  bool first = true;
  while (true) {
    skip_ws();
    if (pos == text.size()) break;
    bool neg = false;
    if (text[pos] == '+' || text[pos] == '-') {
      neg = text[pos] == '-';
      ++pos;
      skip_ws();
    } else if (!first) {
      throw std::invalid_argument("malformed scalar: " + std::string(text));
    }
    std::size_t start = pos;
    while (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '/')) ++pos;
    bool has_digits = pos != start;
    Rational r = has_digits ? Rational::parse(text.substr(start, pos - start)) : Rational(1);
    bool imag = false;
    if (pos < text.size() && text[pos] == 'i') {
      imag = true;
      ++pos;
    }
    std::size_t save = pos;
    skip_ws();
    bool root = false;
    if (text.substr(pos, 2) == "r2") {
      root = true;
      pos += 2;
    } else {
      pos = save;
    }
    if (!has_digits && !imag && !root) throw std::invalid_argument("malformed scalar: " + std::string(text));
    int k = (imag ? 1 : 0) + (root ? 2 : 0);
    parts[static_cast<std::size_t>(k)] += neg ? -r : r;
    first = false;
  }
  return Scalar(parts[0], parts[1], parts[2], parts[3]);
}

}  // namespace maxcons
