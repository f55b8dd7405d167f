#pragma once

#include "mwsharp/rational.hpp"

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace mwsharp {

/// Dyadic rational m / 2^e with e >= 0. Reduced form: while e > 0 the
/// mantissa is odd, and zero is stored as 0 / 2^0. Closed under +, -, *
/// and division by powers of two; every breakpoint of the constructed
/// weights lives here.
class Dyadic {
 public:
  Dyadic() : man_(0), exp_(0) {}
  Dyadic(long long n) : man_(n), exp_(0) {}  // NOLINT: implicit by design
  Dyadic(BigInt m, unsigned e) : man_(std::move(m)), exp_(e) { normalize(); }

  /// Accepts "m/2^e", a plain integer "m", or "p/q" with q a power of two.
  static Dyadic parse(std::string_view s);

  const BigInt& mantissa() const { return man_; }
  unsigned exponent() const { return exp_; }
  bool is_zero() const { return man_ == 0; }

  Dyadic operator-() const;
  Dyadic operator+(const Dyadic& o) const;
  Dyadic operator-(const Dyadic& o) const;
  Dyadic operator*(const Dyadic& o) const;
  Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }
  Dyadic& operator-=(const Dyadic& o) { return *this = *this - o; }

  Dyadic div_pow2(unsigned k) const { return Dyadic(man_, exp_ + k); }
  Dyadic half() const { return div_pow2(1); }

  bool operator==(const Dyadic& o) const { return man_ == o.man_ && exp_ == o.exp_; }
  std::strong_ordering operator<=>(const Dyadic& o) const;

  Rat to_rat() const;
  /// Exact conversion when the denominator is a power of two; nullopt otherwise.
  static std::optional<Dyadic> from_rat(const Rat& r);

  double to_double() const { return to_rat().to_double(); }

  /// Always "m/2^e".
  std::string str() const;

 private:
  BigInt man_;
  unsigned exp_;
  void normalize();
};

}  // namespace mwsharp
