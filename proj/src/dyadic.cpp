#include "mwsharp/dyadic.hpp"

#include <boost/multiprecision/integer.hpp>

namespace mwsharp {

void Dyadic::normalize() {
  if (man_ == 0) {
    exp_ = 0;
    return;
  }
  unsigned tz = man_ < 0 ? boost::multiprecision::lsb(BigInt(-man_))
                         : boost::multiprecision::lsb(man_);
  unsigned drop = tz < exp_ ? tz : exp_;
  if (drop > 0) {
    man_ >>= drop;
    exp_ -= drop;
  }
}

Dyadic Dyadic::parse(std::string_view s) {
  Rat r = Rat::parse(s);
  auto d = from_rat(r);
  if (!d) throw std::invalid_argument("not a dyadic rational: " + std::string(s));
  return *d;
}

Dyadic Dyadic::operator-() const {
  Dyadic r;
  r.man_ = -man_;
  r.exp_ = exp_;
  return r;
}

Dyadic Dyadic::operator+(const Dyadic& o) const {
  unsigned e = exp_ > o.exp_ ? exp_ : o.exp_;
  BigInt m = (man_ << (e - exp_)) + (o.man_ << (e - o.exp_));
  return Dyadic(std::move(m), e);
}

Dyadic Dyadic::operator-(const Dyadic& o) const { return *this + (-o); }

Dyadic Dyadic::operator*(const Dyadic& o) const {
  return Dyadic(man_ * o.man_, exp_ + o.exp_);
}

std::strong_ordering Dyadic::operator<=>(const Dyadic& o) const {
  unsigned e = exp_ > o.exp_ ? exp_ : o.exp_;
  BigInt lhs = man_ << (e - exp_);
  BigInt rhs = o.man_ << (e - o.exp_);
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rat Dyadic::to_rat() const { return Rat(man_, BigInt(1) << exp_); }

std::optional<Dyadic> Dyadic::from_rat(const Rat& r) {
  if (r.is_zero()) return Dyadic();
  const BigInt& q = r.den();
  if (q == 1) return Dyadic(r.num(), 0);
  // q is a power of two iff it has a single set bit.
  unsigned low = boost::multiprecision::lsb(q);
  unsigned high = boost::multiprecision::msb(q);
  if (low != high) return std::nullopt;
  return Dyadic(r.num(), high);
}

std::string Dyadic::str() const {
  return man_.str() + "/2^" + std::to_string(exp_);
}

}  // namespace mwsharp
