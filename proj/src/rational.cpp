#include "mwsharp/rational.hpp"

#include <boost/multiprecision/integer.hpp>

#include <cmath>
#include <limits>

namespace mwsharp {

namespace {

BigInt parse_big(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("empty integer literal");
  bool neg = false;
  size_t i = 0;
  if (s[0] == '+' || s[0] == '-') {
    neg = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) throw std::invalid_argument("sign without digits");
  BigInt v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9')
      throw std::invalid_argument("bad digit in integer literal: " + std::string(s));
    v = v * 10 + (s[i] - '0');
  }
  return neg ? BigInt(-v) : v;
}

}  // namespace

void Rat::reduce() {
  if (den_ == 0) throw std::domain_error("rational with zero denominator");
  if (num_ == 0) {
    den_ = 1;
    return;
  }
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  BigInt g = boost::multiprecision::gcd(num_ < 0 ? BigInt(-num_) : num_, den_);
  if (g != 1) {
    num_ /= g;
    den_ /= g;
  }
}

Rat::Rat(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { reduce(); }

Rat Rat::parse(std::string_view s) {
  size_t slash = s.find('/');
  if (slash == std::string_view::npos) return Rat(parse_big(s));
  std::string_view p = s.substr(0, slash);
  std::string_view q = s.substr(slash + 1);
  if (q.size() > 2 && q[0] == '2' && q[1] == '^') {
    BigInt e = parse_big(q.substr(2));
    if (e < 0 || e > 1u << 20) throw std::invalid_argument("exponent out of range: " + std::string(s));
    return Rat(parse_big(p), BigInt(1) << static_cast<unsigned>(e));
  }
  return Rat(parse_big(p), parse_big(q));
}

Rat Rat::operator-() const {
  Rat r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

Rat Rat::operator+(const Rat& o) const {
  return Rat(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

Rat Rat::operator-(const Rat& o) const {
  return Rat(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

Rat Rat::operator*(const Rat& o) const { return Rat(num_ * o.num_, den_ * o.den_); }

Rat Rat::operator/(const Rat& o) const {
  if (o.num_ == 0) throw std::domain_error("division by zero rational");
  return Rat(num_ * o.den_, den_ * o.num_);
}

Rat Rat::reciprocal() const {
  if (num_ == 0) throw std::domain_error("reciprocal of zero");
  return Rat(den_, num_);
}

std::strong_ordering Rat::operator<=>(const Rat& o) const {
  // Denominators are positive, so a/b <=> c/d reduces to a*d <=> c*b.
  BigInt lhs = num_ * o.den_;
  BigInt rhs = o.num_ * den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

double Rat::to_double() const {
  if (num_ == 0) return 0.0;
  const bool neg = num_ < 0;
  BigInt p = neg ? BigInt(-num_) : num_;
  const BigInt& q = den_;

  // k = floor(log2(p/q)), via bit lengths plus one corrective comparison.
  long k = static_cast<long>(boost::multiprecision::msb(p)) -
           static_cast<long>(boost::multiprecision::msb(q));
  if (k >= 0 ? (q << static_cast<unsigned>(k)) > p : q > (p << static_cast<unsigned>(-k))) --k;

  if (k > 1023) return neg ? -std::numeric_limits<double>::infinity()
                           : std::numeric_limits<double>::infinity();

  // mantissa_bits counts bits after the implicit leading one; shrinks in the
  // subnormal range.
  long mantissa_bits = 52;
  if (k < -1022) {
    mantissa_bits = 52 + (k + 1022);
    if (mantissa_bits < 0) return neg ? -0.0 : 0.0;
  }

  // M = floor(p * 2^(mantissa_bits - k) / q), then round half to even.
  long shift = mantissa_bits - k;
  BigInt pn = shift >= 0 ? BigInt(p << static_cast<unsigned>(shift)) : p;
  BigInt qn = shift >= 0 ? q : BigInt(q << static_cast<unsigned>(-shift));
  BigInt m, r;
  boost::multiprecision::divide_qr(pn, qn, m, r);
  BigInt twice_r = r << 1;
  if (twice_r > qn || (twice_r == qn && boost::multiprecision::bit_test(m, 0))) ++m;

  // Rounding may carry into the next binade (e.g. 0.999... -> 1.0).
  if (k <= 1023 && m == (BigInt(1) << static_cast<unsigned>(mantissa_bits + 1))) {
    m >>= 1;
    ++k;
    if (k > 1023) return neg ? -std::numeric_limits<double>::infinity()
                             : std::numeric_limits<double>::infinity();
  }

  double mag = std::ldexp(m.convert_to<double>(), static_cast<int>(k - mantissa_bits));
  return neg ? -mag : mag;
}

std::string Rat::str() const {
  if (den_ == 1) return num_.str();
  return num_.str() + "/" + den_.str();
}

Rat pow2_rat(long e) {
  if (e >= 0) return Rat(BigInt(1) << static_cast<unsigned>(e));
  return Rat(1, BigInt(1) << static_cast<unsigned>(-e));
}

}  // namespace mwsharp
