#include "maxcons/rational.hpp"

#include <stdexcept>

namespace maxcons {
namespace {

constexpr __int128 kLimit = (__int128{1} << 62);

unsigned __int128 gcd128(unsigned __int128 a, unsigned __int128 b) {
  while (b != 0) {
    unsigned __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

unsigned long long gcd64(unsigned long long a, unsigned long long b) {
  while (b != 0) {
    unsigned long long t = a % b;
    a = b;
    b = t;
  }
  return a;
}

mpz_class from_i128(__int128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
  mpz_class hi = static_cast<unsigned long>(static_cast<unsigned long long>(u >> 64));
  mpz_class lo = static_cast<unsigned long>(static_cast<unsigned long long>(u));
  mpz_class r = (hi << 64) + lo;
  return neg ? mpz_class(-r) : r;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

std::uint64_t mpz_mod_u64(const mpz_class& z, std::uint64_t p) {
  mpz_class m = z % mpz_class(static_cast<unsigned long>(p));
  if (m < 0) m += static_cast<unsigned long>(p);
  return static_cast<std::uint64_t>(m.get_ui());
}

}  // namespace

Rational::Rational(long long n) {
  if (n <= -kLimit || n >= kLimit) {
    assign_big(mpq_class(mpz_class(static_cast<long>(n))));
  } else {
    num_ = n;
  }
}

Rational::Rational(long long n, long long d) {
  if (d == 0) throw std::domain_error("rational with zero denominator");
  assign(n, d);
}

Rational::Rational(const mpq_class& q) {
  mpq_class c = q;
  c.canonicalize();
  assign_big(std::move(c));
}

void Rational::assign(__int128 n, __int128 d) {
  if (d < 0) {
    n = -n;
    d = -d;
  }
  if (n == 0) {
    num_ = 0;
    den_ = 1;
    big_.reset();
    return;
  }
  unsigned __int128 un = n < 0 ? static_cast<unsigned __int128>(-n) : static_cast<unsigned __int128>(n);
  unsigned __int128 g = gcd128(un, static_cast<unsigned __int128>(d));
  if (g > 1) {
    n /= static_cast<__int128>(g);
    d /= static_cast<__int128>(g);
  }
  if (n > -kLimit && n < kLimit && d < kLimit) {
    num_ = static_cast<long long>(n);
    den_ = static_cast<long long>(d);
    big_.reset();
    return;
  }
  mpq_class q(from_i128(n), from_i128(d));
  big_ = std::make_shared<const mpq_class>(std::move(q));
  num_ = 0;
  den_ = 1;
}

void Rational::assign_big(mpq_class q) {
  const mpz_class& n = q.get_num();
  const mpz_class& d = q.get_den();
  if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 62 && mpz_sizeinbase(d.get_mpz_t(), 2) <= 62) {
    num_ = n.get_si();
    den_ = d.get_si();
    big_.reset();
    return;
  }
  big_ = std::make_shared<const mpq_class>(std::move(q));
  num_ = 0;
  den_ = 1;
}

Rational Rational::parse(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty rational");
  std::string s(text);
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational: " + s);
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  return Rational(q);
}

bool Rational::is_integer() const { return big_ ? big_->get_den() == 1 : den_ == 1; }

int Rational::sign() const {
  if (big_) return sgn(*big_);
  return (num_ > 0) - (num_ < 0);
}

mpq_class Rational::to_mpq() const {
  if (big_) return *big_;
  return mpq_class(mpz_class(static_cast<long>(num_)), mpz_class(static_cast<long>(den_)));
}

std::string Rational::str() const {
  if (big_) return big_->get_str();
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator-() const {
  Rational r;
  if (big_) {
    r.assign_big(-*big_);
  } else {
    r.num_ = -num_;
    r.den_ = den_;
  }
  return r;
}

Rational Rational::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero");
  Rational r;
  if (big_) {
    r.assign_big(1 / *big_);
  } else {
    r.assign(den_, num_);
  }
  return r;
}

Rational operator+(const Rational& a, const Rational& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  Rational r;
  if (!a.big_ && !b.big_) {
    if (a.den_ == 1 && b.den_ == 1) {
      r.assign(static_cast<__int128>(a.num_) + b.num_, 1);
    } else {
      __int128 n = static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_;
      __int128 d = static_cast<__int128>(a.den_) * b.den_;
      r.assign(n, d);
    }
    return r;
  }
  r.assign_big(a.to_mpq() + b.to_mpq());
  return r;
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  if (a.is_zero() || b.is_zero()) return Rational();
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  Rational r;
  if (!a.big_ && !b.big_) {
    unsigned long long g1 = gcd64(static_cast<unsigned long long>(a.num_ < 0 ? -a.num_ : a.num_),
                                  static_cast<unsigned long long>(b.den_));
    unsigned long long g2 = gcd64(static_cast<unsigned long long>(b.num_ < 0 ? -b.num_ : b.num_),
                                  static_cast<unsigned long long>(a.den_));
    __int128 n = static_cast<__int128>(a.num_ / static_cast<long long>(g1)) *
                 (b.num_ / static_cast<long long>(g2));
    __int128 d = static_cast<__int128>(a.den_ / static_cast<long long>(g2)) *
                 (b.den_ / static_cast<long long>(g1));
    r.assign(n, d);
    return r;
  }
  r.assign_big(a.to_mpq() * b.to_mpq());
  return r;
}

Rational operator/(const Rational& a, const Rational& b) { return a * b.inverse(); }

bool operator==(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
  if (a.big_ && b.big_) return *a.big_ == *b.big_;
  return false;  // canonical: small and big never represent the same value
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    __int128 l = static_cast<__int128>(a.num_) * b.den_;
    __int128 r = static_cast<__int128>(b.num_) * a.den_;
    return l <=> r;
  }
  int c = cmp(a.to_mpq(), b.to_mpq());
  return c <=> 0;
}

std::uint64_t Rational::mod(std::uint64_t p) const {
  std::uint64_t n = 0, d = 1;
  if (big_) {
    n = mpz_mod_u64(big_->get_num(), p);
    d = mpz_mod_u64(big_->get_den(), p);
  } else {
    long long m = num_ % static_cast<long long>(p);
    if (m < 0) m += static_cast<long long>(p);
    n = static_cast<std::uint64_t>(m);
    d = static_cast<std::uint64_t>(den_) % p;
  }
  if (d == 0) throw std::domain_error("denominator divisible by modulus");
  return mulmod(n, powmod(d, p - 2, p), p);
}

Rational binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return Rational();
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(mpq_class(r));
}

Rational factorial(int n) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return Rational(mpq_class(r));
}

}  // namespace maxcons
